use cq_core::mutation::{dynkin_type_of, is_double_path_avoiding, is_finite_cluster_type};
use cq_core::relations::{enumerate_full_cycles, synthesize_relations, RelationKind};
use cq_core::type_a::{
    crossing, diagonals_of, enumerate_triangulations, flip, quiver_of, Triangulation,
};

#[test]
fn triangulation_quivers_are_type_a() {
    for m in 4..=8 {
        for t in enumerate_triangulations(m).unwrap() {
            let q = quiver_of(&t);
            assert!(is_finite_cluster_type(&q), "{t}");
            assert!(is_double_path_avoiding(&q, 100_000).unwrap(), "{t}");
            assert_eq!(
                dynkin_type_of(&q).unwrap().to_string(),
                format!("A{}", m - 3)
            );
            assert!(!q.has_two_cycle() && !q.has_multiple_arrows());
        }
    }
}

#[test]
fn triangulation_relations_come_from_internal_triangles() {
    for m in 4..=9 {
        for t in enumerate_triangulations(m).unwrap() {
            let q = quiver_of(&t);
            let p = synthesize_relations(&q).unwrap();
            let cycles = enumerate_full_cycles(&q);
            assert!(cycles.iter().all(|c| c.len() == 3), "{t}");
            let internal = t
                .triangles()
                .iter()
                .filter(|&&(a, b, c)| b - a > 1 && c - b > 1 && (c - a) < m - 1)
                .count();
            assert_eq!(cycles.len(), internal, "{t}");
            assert_eq!(p.relations.len(), 3 * internal, "{t}");
            assert!(p
                .relations
                .iter()
                .all(|r| r.kind() == RelationKind::Zero && r.min_len() == 2));
        }
    }
}

#[test]
fn triangulations_are_distinct_and_non_crossing() {
    for m in 4..=9 {
        let ts = enumerate_triangulations(m).unwrap();
        let mut sorted = ts.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), ts.len());
        for t in &ts {
            let ds = t.diagonals();
            assert_eq!(ds.len(), m - 3);
            for (i, a) in ds.iter().enumerate() {
                assert!(ds[i + 1..].iter().all(|b| !crossing(a, b)));
            }
            assert_eq!(t.triangles().len(), m - 2);
        }
    }
}

#[test]
fn flips_are_involutions() {
    for t in enumerate_triangulations(8).unwrap() {
        for d in t.diagonals() {
            let f = flip(&t, d).unwrap();
            let new = *f.diagonals().iter().find(|x| !t.contains(x)).unwrap();
            assert!(crossing(d, &new));
            assert_eq!(flip(&f, &new).unwrap(), t);
        }
    }
}

#[test]
fn rejects_bad_triangulations() {
    let ds = diagonals_of(6).unwrap();
    assert!(Triangulation::new(6, ds.iter().copied().take(2)).is_err());
    let crossing_pair: Vec<_> = ds
        .iter()
        .copied()
        .filter(|d| [(0, 3), (1, 4), (2, 5)].contains(&d.endpoints()))
        .collect();
    assert!(Triangulation::new(6, crossing_pair).is_err());
}

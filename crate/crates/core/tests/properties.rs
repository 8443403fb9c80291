#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;

use cq_core::canonical::{canonical_form, canonical_key, is_isomorphic};
use cq_core::format::{parse_presentation, presentation_to_text, quiver_from_json, quiver_to_json};
use cq_core::mutation::{
    is_double_path_avoiding, is_finite_cluster_type, mutate, mutate_matrix, mutation_class,
};
use cq_core::quiver::{ExchangeMatrix, Quiver};
use cq_core::relations::{
    is_zero_in_algebra, nilpotency_bound, path_element, synthesize_relations, AlgebraPresentation,
    LinComb, Path, DEFAULT_NILPOTENCY_CAP,
};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn arb_quiver(max_n: usize, max_arrows: usize) -> impl Strategy<Value = Quiver> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec((0..n, 0..n), 0..=max_arrows).prop_map(move |pairs| {
            let arrows = pairs
                .into_iter()
                .filter(|(s, t)| s != t)
                .enumerate()
                .map(|(k, (s, t))| (format!("x{k}"), s, t));
            Quiver::from_arrows(n, arrows).unwrap()
        })
    })
}

fn arb_matrix(max_n: usize, max_entry: i64) -> impl Strategy<Value = ExchangeMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(-max_entry..=max_entry, n * (n - 1) / 2).prop_map(move |upper| {
            let mut b = vec![vec![0i64; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let x = it.next().unwrap();
                    b[i][j] = x;
                    b[j][i] = -x;
                }
            }
            ExchangeMatrix::new(b).unwrap()
        })
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(q in arb_quiver(7, 10), labelled in any::<bool>()) {
        let mut q = q;
        if labelled {
            for v in 0..q.vertex_count() {
                q.set_label(v, Some(format!("v{v}")));
            }
        }
        let p = AlgebraPresentation::hereditary(q);
        let text = presentation_to_text(&p);
        let back = parse_presentation(&text).unwrap();
        prop_assert_eq!(&back.quiver, &p.quiver);
        prop_assert_eq!(presentation_to_text(&back), text);
    }

    #[test]
    fn json_round_trip(q in arb_quiver(7, 10)) {
        let j = serde_json::to_string(&quiver_to_json(&q)).unwrap();
        let back = quiver_from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn canonical_form_ignores_vertex_order(q in arb_quiver(6, 9)) {
        let key = canonical_key(&q);
        let form = canonical_form(&q).quiver;
        for perm in permutations(q.vertex_count()) {
            let p = q.permuted(&perm);
            prop_assert_eq!(canonical_key(&p), key.clone());
            prop_assert_eq!(canonical_form(&p).quiver, form.clone());
        }
        prop_assert_eq!(canonical_form(&form).quiver, form);
    }

    #[test]
    fn canonical_key_separates_counts(a in arb_quiver(5, 7), b in arb_quiver(5, 7)) {
        let cb = b.arrow_counts();
        let brute = a.vertex_count() == b.vertex_count()
            && permutations(a.vertex_count()).iter().any(|p| a.permuted(p).arrow_counts() == cb);
        prop_assert_eq!(is_isomorphic(&a, &b), brute);
    }

    #[test]
    fn mutation_is_an_involution(b in arb_matrix(8, 3), k in 0usize..8) {
        let k = k % b.dim();
        prop_assert_eq!(mutate_matrix(&mutate_matrix(&b, k), k), b.clone());
        let q = Quiver::from_exchange_matrix(&b).unwrap();
        let twice = mutate(&mutate(&q, k).unwrap(), k).unwrap();
        prop_assert_eq!(twice.to_exchange_matrix().unwrap(), b);
    }

    #[test]
    fn matrix_dictionary(b in arb_matrix(8, 3)) {
        let q = Quiver::from_exchange_matrix(&b).unwrap();
        prop_assert_eq!(q.to_exchange_matrix().unwrap(), b);
        let again = Quiver::from_exchange_matrix(&q.to_exchange_matrix().unwrap()).unwrap();
        prop_assert!(is_isomorphic(&again, &q));
    }

    #[test]
    fn double_path_avoiding_iff_finite_type(b in arb_matrix(4, 2)) {
        let q = Quiver::from_exchange_matrix(&b).unwrap();
        prop_assert_eq!(is_double_path_avoiding(&q, 100_000).unwrap(), is_finite_cluster_type(&q));
    }
}

/// Dense rational span of the two-sided ideal, computed by closing the
/// truncated relations under multiplication by single arrows.
struct BruteIdeal {
    basis: Vec<Path>,
    rows: Vec<Vec<BigRational>>,
    bound: usize,
}

impl BruteIdeal {
    fn new(p: &AlgebraPresentation, bound: usize) -> Self {
        let q = &p.quiver;
        let mut basis: Vec<Path> = (0..q.vertex_count()).map(Path::trivial).collect();
        let mut frontier = basis.clone();
        for _ in 1..bound {
            frontier = frontier
                .iter()
                .flat_map(|x| {
                    q.out_arrows(x.target())
                        .map(|a| Path::new(q, [x.arrows(), &[a]].concat()).unwrap())
                        .collect::<Vec<_>>()
                })
                .collect();
            basis.extend(frontier.iter().cloned());
        }
        let mut ideal = BruteIdeal {
            basis,
            rows: Vec::new(),
            bound,
        };
        let mut pending: Vec<LinComb> = p.relations.iter().map(|r| r.element()).collect();
        while let Some(x) = pending.pop() {
            if ideal.insert(&x) {
                for a in 0..q.arrow_count() {
                    let arrow = Path::new(q, vec![a]).unwrap();
                    for side in [true, false] {
                        let product: LinComb = x
                            .iter()
                            .filter_map(|(path, c)| {
                                let joined = if side {
                                    arrow.concat(path)
                                } else {
                                    path.concat(&arrow)
                                };
                                joined.map(|j| (j, c.clone()))
                            })
                            .collect();
                        if !product.is_empty() {
                            pending.push(product);
                        }
                    }
                }
            }
        }
        ideal
    }

    fn vector(&self, x: &LinComb) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.basis.len()];
        for (p, c) in x {
            if p.len() < self.bound {
                let i = self.basis.iter().position(|b| b == p).unwrap();
                v[i] += c.clone();
            }
        }
        v
    }

    fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        for row in &self.rows {
            let pivot = row.iter().position(|c| !c.is_zero()).unwrap();
            if !v[pivot].is_zero() {
                let f = v[pivot].clone() / row[pivot].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= f.clone() * r.clone();
                }
            }
        }
        v
    }

    fn insert(&mut self, x: &LinComb) -> bool {
        let v = self.reduce(self.vector(x));
        if v.iter().all(Zero::is_zero) {
            return false;
        }
        let pivot = v.iter().position(|c| !c.is_zero()).unwrap();
        let f = v[pivot].clone();
        let v: Vec<BigRational> = v.into_iter().map(|c| c / f.clone()).collect();
        for row in &mut self.rows {
            if !row[pivot].is_zero() {
                let g = row[pivot].clone();
                for (r, x) in row.iter_mut().zip(&v) {
                    *r -= g.clone() * x.clone();
                }
            }
        }
        self.rows.push(v);
        self.rows
            .sort_by_key(|r| r.iter().position(|c| !c.is_zero()));
        true
    }

    fn contains(&self, x: &LinComb) -> bool {
        self.reduce(self.vector(x)).iter().all(Zero::is_zero)
    }
}

fn seeds() -> Vec<Quiver> {
    let linear =
        |n: usize| Quiver::from_arrows(n, (1..n).map(|i| (format!("a{i}"), i - 1, i))).unwrap();
    let d4 = Quiver::from_arrows(4, [("a", 0, 1), ("b", 2, 1), ("c", 3, 1)]).unwrap();
    let d5 = Quiver::from_arrows(5, [("a", 0, 2), ("b", 1, 2), ("c", 2, 3), ("d", 3, 4)]).unwrap();
    vec![linear(3), linear(4), d4, d5]
}

#[test]
fn ideal_membership_matches_arrow_closure() {
    let mut compared = 0;
    for seed in seeds() {
        let class = mutation_class(&seed, usize::MAX, 1).unwrap();
        for q in class.quivers() {
            let mut p = synthesize_relations(q).unwrap();
            let bound = nilpotency_bound(&mut p, DEFAULT_NILPOTENCY_CAP).unwrap();
            let brute = BruteIdeal::new(&p, bound);
            for (i, x) in brute.basis.iter().enumerate() {
                let single = path_element(x);
                assert_eq!(
                    is_zero_in_algebra(&p, &single).unwrap(),
                    brute.contains(&single),
                    "{}",
                    x.display(q)
                );
                for y in &brute.basis[i + 1..] {
                    if x.source() == y.source() && x.target() == y.target() && !x.is_trivial() {
                        let mut diff: LinComb = BTreeMap::new();
                        diff.insert(x.clone(), BigRational::one());
                        diff.insert(y.clone(), -BigRational::one());
                        assert_eq!(
                            is_zero_in_algebra(&p, &diff).unwrap(),
                            brute.contains(&diff)
                        );
                        compared += 1;
                    }
                }
                compared += 1;
            }
        }
    }
    assert!(compared > 100);
}

#[test]
fn brute_ideal_sanity() {
    // Oriented 3-cycle with all length-2 compositions zero: paths of length 2 lie in I.
    let q = Quiver::from_arrows(3, [("a", 0, 1), ("b", 1, 2), ("c", 2, 0)]).unwrap();
    let mut p = synthesize_relations(&q).unwrap();
    let bound = nilpotency_bound(&mut p, DEFAULT_NILPOTENCY_CAP).unwrap();
    assert_eq!(bound, 2);
    let brute = BruteIdeal::new(&p, 3);
    let ab = Path::from_names(&q, &["a", "b"]).unwrap();
    let a = Path::from_names(&q, &["a"]).unwrap();
    assert!(brute.contains(&path_element(&ab)));
    assert!(!brute.contains(&path_element(&a)));
}

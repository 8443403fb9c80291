//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when any
//! criterion fails.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use cq_core::canonical::{canonical_key, is_isomorphic};
use cq_core::format::{canonical_text, parse_presentation};
use cq_core::mutation::{is_double_path_avoiding, mutate, mutation_class};
use cq_core::quiver::{ExchangeMatrix, Quiver};
use cq_core::relations::{
    enumerate_full_cycles, is_zero_in_algebra, path_element, synthesize_relations,
    AlgebraPresentation, Path, Relation,
};
use cq_core::tilted::{check_structure, cluster_tilt};
use cq_core::type_a::{enumerate_triangulations, flip, quiver_of};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const D5_RUNTIME_LIMIT: Duration = Duration::from_secs(1);
const ORACLE_RUNTIME_LIMIT: Duration = Duration::from_secs(60);
const RANDOM_QUIVERS: usize = 500;
const DPA_CAP: usize = 200_000;

type Verdict = Result<String, String>;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn cq(args: &[&str]) -> (i32, Vec<u8>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_cq"))
        .args(args)
        .output()
        .expect("cq runs");
    (out.status.code().unwrap_or(-1), out.stdout, out.stderr)
}

fn linear(n: usize) -> Quiver {
    Quiver::from_arrows(n, (1..n).map(|i| (format!("a{i}"), i - 1, i))).unwrap()
}

fn d_quiver(n: usize) -> Quiver {
    let mut arrows = vec![("b".to_string(), 0, 2)];
    arrows.extend((2..n).map(|i| (format!("a{i}"), i - 1, i)));
    Quiver::from_arrows(n, arrows).unwrap()
}

fn oriented_cycle(n: usize) -> Quiver {
    Quiver::from_arrows(n, (0..n).map(|i| (format!("c{i}"), i, (i + 1) % n))).unwrap()
}

fn paths_of_length(q: &Quiver, len: usize) -> Vec<Path> {
    let mut level: Vec<Path> = (0..q.vertex_count()).map(Path::trivial).collect();
    for _ in 0..len {
        level = level
            .iter()
            .flat_map(|p| {
                q.out_arrows(p.target()).map(move |a| {
                    let mut arrows = p.arrows().to_vec();
                    arrows.push(a);
                    Path::new(q, arrows).unwrap()
                })
            })
            .collect();
    }
    level
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let file = corpus_dir().join("d5.tilted");
    let (code, stdout, _) = cq(&["from-tilted", file.to_str().unwrap(), "--check"]);
    let elapsed = start.elapsed();
    if code != 0 {
        return Err(format!("from-tilted exited {code}"));
    }
    let gamma =
        parse_presentation(&String::from_utf8(stdout).unwrap()).map_err(|e| e.to_string())?;

    let tilted = parse_presentation(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let mut expected_q = tilted.quiver.clone();
    let (t, b, r) = (
        expected_q.vertex_by_name("T").unwrap(),
        expected_q.vertex_by_name("B").unwrap(),
        expected_q.vertex_by_name("R").unwrap(),
    );
    expected_q.add_arrow("mu", b, t).unwrap();
    expected_q.add_arrow("pi", r, t).unwrap();
    let quiver_ok = canonical_key(&gamma.quiver) == canonical_key(&expected_q)
        && gamma.quiver.arrow_count() == 7;

    // The stated relations: alpha gamma = beta delta, every other composition of two arrows zero.
    let g = &gamma.quiver;
    let comm = Relation::commutativity(
        g,
        Path::from_names(g, &["alpha", "gamma"]).unwrap(),
        Path::from_names(g, &["beta", "delta"]).unwrap(),
    )
    .unwrap();
    let mut stated = vec![comm.clone()];
    for p in paths_of_length(g, 2) {
        if !comm.paths().any(|c| *c == p) {
            stated.push(Relation::zero(g, p).unwrap());
        }
    }
    let stated = AlgebraPresentation::new(g.clone(), stated);
    let relations_ok = canonical_text(&stated) == canonical_text(&gamma);
    let fast = elapsed < D5_RUNTIME_LIMIT;

    let summary = format!(
        "quiver {}, relations {} ({} stated vs {} synthesized), {:.3}s",
        if quiver_ok { "match" } else { "MISMATCH" },
        if relations_ok { "match" } else { "MISMATCH" },
        stated.relations.len(),
        gamma.relations.len(),
        elapsed.as_secs_f64()
    );
    if quiver_ok && relations_ok && fast {
        return Ok(summary);
    }
    let shown = |p: &AlgebraPresentation| -> BTreeSet<String> {
        p.relations.iter().map(|r| r.display(g)).collect()
    };
    let (s, y) = (shown(&stated), shown(&gamma));
    Err(format!(
        "{summary}; only stated: {:?}; only synthesized: {:?}",
        s.difference(&y).collect::<Vec<_>>(),
        y.difference(&s).collect::<Vec<_>>()
    ))
}

fn catalan(k: usize) -> usize {
    let mut c = vec![1usize; k + 1];
    for i in 1..=k {
        c[i] = (0..i).map(|j| c[j] * c[i - 1 - j]).sum();
    }
    c[k]
}

fn criterion_2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checks = 0;
    for _ in 0..RANDOM_QUIVERS {
        let n = rng.gen_range(1..=8);
        let mut b = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let x = rng.gen_range(-3..=3);
                b[i][j] = x;
                b[j][i] = -x;
            }
        }
        let q = Quiver::from_exchange_matrix(&ExchangeMatrix::new(b).unwrap()).unwrap();
        for k in 0..n {
            let twice = mutate(&mutate(&q, k).unwrap(), k).unwrap();
            checks += 1;
            if !is_isomorphic(&twice, &q) {
                return Err(format!(
                    "mutating twice at {k} changed {:?}",
                    q.arrow_counts()
                ));
            }
        }
    }
    Ok(format!(
        "{RANDOM_QUIVERS} quivers, {checks} double mutations, 0 failures"
    ))
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let mut sizes = Vec::new();
    let mut counts = Vec::new();
    for n in 1..=6 {
        let ts = enumerate_triangulations(n + 3).map_err(|e| e.to_string())?;
        if ts.len() != catalan(n + 1) {
            return Err(format!(
                "{}-gon has {} triangulations, Catalan gives {}",
                n + 3,
                ts.len(),
                catalan(n + 1)
            ));
        }
        counts.push(ts.len().to_string());
        let from_oracle: BTreeSet<String> =
            ts.iter().map(|t| canonical_key(&quiver_of(t))).collect();
        let class = mutation_class(&linear(n), usize::MAX, 1).map_err(|e| e.to_string())?;
        let from_class: BTreeSet<String> = class.keys().map(String::from).collect();
        if class.truncated || from_oracle != from_class {
            return Err(format!(
                "A{n}: {} oracle quivers vs {} class members",
                from_oracle.len(),
                from_class.len()
            ));
        }
        sizes.push(format!("A{n}:{}", from_class.len()));
    }
    let elapsed = start.elapsed();
    if elapsed >= ORACLE_RUNTIME_LIMIT {
        return Err(format!("took {:.1}s", elapsed.as_secs_f64()));
    }
    Ok(format!(
        "classes {} equal, triangulation counts {} match Catalan, {:.2}s",
        sizes.join(" "),
        counts.join(" "),
        elapsed.as_secs_f64()
    ))
}

fn criterion_4() -> Verdict {
    let mut checked = 0;
    for t in enumerate_triangulations(7).unwrap() {
        let q = quiver_of(&t);
        for (k, d) in t.diagonals().iter().enumerate() {
            checked += 1;
            let flipped = flip(&t, d).unwrap();
            if !is_isomorphic(&quiver_of(&flipped), &mutate(&q, k).unwrap()) {
                return Err(format!("flip of {d} in {t} differs from mutation"));
            }
        }
    }
    Ok(format!("{checked} flips, 0 failures"))
}

fn finite_classes() -> Vec<(String, Vec<Quiver>)> {
    let mut seeds: Vec<(String, Quiver)> = (2..=6).map(|n| (format!("A{n}"), linear(n))).collect();
    seeds.push(("D4".into(), d_quiver(4)));
    seeds.push(("D5".into(), d_quiver(5)));
    seeds
        .into_iter()
        .map(|(name, q)| {
            let class = mutation_class(&q, usize::MAX, 1).unwrap();
            assert!(!class.truncated);
            (name, class.quivers().cloned().collect())
        })
        .collect()
}

fn criterion_5(classes: &[(String, Vec<Quiver>)]) -> Verdict {
    let mut total = 0;
    for (name, members) in classes {
        for q in members {
            total += 1;
            synthesize_relations(q)
                .map_err(|e| format!("{name} member {}: {e}", canonical_key(q)))?;
        }
    }
    Ok(format!(
        "{total} quivers in {} classes, no arrow with 3 or more shortest paths",
        classes.len()
    ))
}

fn criterion_6() -> Verdict {
    for n in 3..=6 {
        let p = synthesize_relations(&oriented_cycle(n)).map_err(|e| e.to_string())?;
        for path in paths_of_length(&p.quiver, n - 2) {
            if is_zero_in_algebra(&p, &path_element(&path)).map_err(|e| e.to_string())? {
                return Err(format!(
                    "{n}-cycle: length-{} path {} is zero",
                    n - 2,
                    path.display(&p.quiver)
                ));
            }
        }
        for path in paths_of_length(&p.quiver, n - 1) {
            if !is_zero_in_algebra(&p, &path_element(&path)).map_err(|e| e.to_string())? {
                return Err(format!(
                    "{n}-cycle: length-{} path {} is nonzero",
                    n - 1,
                    path.display(&p.quiver)
                ));
            }
        }
    }
    Ok("n = 3..6: length n-2 paths nonzero, length n-1 paths zero".into())
}

fn criterion_7(classes: &[(String, Vec<Quiver>)]) -> Verdict {
    let mut total = 0;
    for (name, members) in classes {
        for q in members {
            total += 1;
            match is_double_path_avoiding(q, DPA_CAP) {
                Ok(true) => {}
                Ok(false) => {
                    return Err(format!(
                        "{name} member {} is not double-path-avoiding",
                        canonical_key(q)
                    ))
                }
                Err(e) => return Err(format!("{name} member {}: {e}", canonical_key(q))),
            }
        }
    }
    Ok(format!("{total} quivers double-path-avoiding"))
}

/// A type-A output must be the quiver of a triangulation, with only 3-cycles
/// as full cycles and exactly their length-2 compositions as relations.
fn type_a_oracle_agrees(gamma: &AlgebraPresentation, n: usize) -> Result<(), String> {
    let keys: BTreeSet<String> = enumerate_triangulations(n + 3)
        .unwrap()
        .iter()
        .map(|t| canonical_key(&quiver_of(t)))
        .collect();
    if !keys.contains(&canonical_key(&gamma.quiver)) {
        return Err("quiver is not a triangulation quiver".into());
    }
    let cycles = enumerate_full_cycles(&gamma.quiver);
    if cycles.iter().any(|c| c.len() != 3) {
        return Err("full cycle of length other than 3".into());
    }
    let mut expected: Vec<Relation> = Vec::new();
    for c in &cycles {
        for i in 0..3 {
            let p = Path::new(&gamma.quiver, vec![c.arrows[i], c.arrows[(i + 1) % 3]]).unwrap();
            expected.push(Relation::zero(&gamma.quiver, p).unwrap());
        }
    }
    let oracle = AlgebraPresentation::new(gamma.quiver.clone(), expected);
    if canonical_text(&oracle) != canonical_text(gamma) {
        return Err("relations differ from the triangle pattern".into());
    }
    Ok(())
}

fn criterion_8() -> Verdict {
    let mut cases: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "tilted"))
        .collect();
    cases.sort();
    if cases.len() < 5 {
        return Err(format!("only {} corpus cases", cases.len()));
    }
    let mut type_a = 0;
    for path in &cases {
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let p = parse_presentation(&std::fs::read_to_string(path).unwrap())
            .map_err(|e| format!("{name}: {e}"))?;
        let o = cluster_tilt(&p).map_err(|e| format!("{name}: {e}"))?;
        let report = check_structure(&o);
        for check in [
            "one_f_arrow_per_full_cycle",
            "f_deletion_recovers_input",
            "input_relations_preserved",
        ] {
            if !report.check(check).is_some_and(|c| c.passed) {
                return Err(format!("{name}: {check} failed"));
            }
        }
        if o.dynkin.to_string().starts_with('A') && !o.tilted.relations.is_empty() {
            type_a_oracle_agrees(&o.gamma, o.dynkin.rank).map_err(|e| format!("{name}: {e}"))?;
            type_a += 1;
        }
    }
    if type_a < 3 {
        return Err(format!("only {type_a} type-A cases with relations"));
    }
    Ok(format!(
        "{} cases, {type_a} checked against triangulations",
        cases.len()
    ))
}

fn criterion_9() -> Verdict {
    let dir = corpus_dir();
    let mut commands: Vec<Vec<String>> = vec![
        vec!["corpus".into(), dir.display().to_string()],
        vec![
            "--format".into(),
            "json".into(),
            "corpus".into(),
            dir.display().to_string(),
        ],
        vec![
            "oracle-a".into(),
            "--ngon".into(),
            "7".into(),
            "--census".into(),
        ],
        vec![
            "oracle-a".into(),
            "--ngon".into(),
            "7".into(),
            "--check-flips".into(),
        ],
    ];
    let mut cases: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| {
            p.extension()
                .is_some_and(|x| x == "tilted" || x == "expected")
        })
        .collect();
    cases.sort();
    for case in &cases {
        let f = case.display().to_string();
        let first_vertex = parse_presentation(&std::fs::read_to_string(case).unwrap())
            .unwrap()
            .quiver
            .vertex_name(0);
        for fmt in ["text", "json", "dot"] {
            let base = |cmd: &[&str]| {
                let mut v: Vec<String> = vec!["--format".into(), fmt.into()];
                v.extend(cmd.iter().map(|s| s.to_string()));
                v
            };
            commands.push(base(&["mutate", &f, "--at", &first_vertex]));
            commands.push(base(&["class", &f]));
            commands.push(base(&["class", &f, "--count-only"]));
            commands.push(base(&["type", &f]));
            commands.push(base(&["dpa", &f]));
            commands.push(base(&["relations", &f]));
            commands.push(base(&["from-tilted", &f, "--check"]));
        }
    }
    for args in &commands {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = cq(&args);
        let second = cq(&args);
        if first != second {
            return Err(format!("`cq {}` differs between runs", args.join(" ")));
        }
    }
    Ok(format!(
        "{} commands byte-identical across two runs",
        commands.len()
    ))
}

fn main() {
    let classes = finite_classes();
    let results: Vec<(&str, Verdict)> = vec![
        ("D5 golden example", criterion_1()),
        ("mutation involution", criterion_2()),
        ("triangulation class equality", criterion_3()),
        ("flip matches mutation", criterion_4()),
        ("at most two shortest paths", criterion_5(&classes)),
        ("oriented-cycle ideal", criterion_6()),
        ("double-path-avoiding", criterion_7(&classes)),
        ("one f-arrow per full cycle", criterion_8()),
        ("CLI determinism", criterion_9()),
    ];
    let mut failed = 0;
    for (i, (name, verdict)) in results.iter().enumerate() {
        match verdict {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

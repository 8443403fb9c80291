//! From a tilted algebra `KQ'/I'` of Dynkin type to its cluster-tilted algebra.
//!
//! Every minimal relation of `I'` running from `a` to `b` contributes one new
//! arrow `b -> a` (an f-arrow); the arrows of `Q'` stay as m-arrows. The
//! relations of the cluster-tilted algebra are then read off the new quiver
//! from its shortest paths.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::error::TiltError;
use crate::mutation::{dynkin_type_of, is_finite_cluster_type, DynkinType};
use crate::quiver::Quiver;
use crate::relations::{
    enumerate_full_cycles, nilpotency_bound, shortest_paths, synthesize_relations_unchecked,
    AlgebraPresentation, Ideal, Relation, RelationKind, DEFAULT_NILPOTENCY_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrowClass {
    M,
    F,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: &'static str, failures: Vec<String>) -> Self {
        Check {
            name,
            passed: failures.is_empty(),
            detail: (!failures.is_empty()).then(|| failures.join("; ")),
        }
    }
}

/// Named pass/fail checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn summary(&self) -> String {
        self.failed()
            .iter()
            .map(|c| match &c.detail {
                Some(d) => format!("{}: {d}", c.name),
                None => c.name.to_string(),
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Necessary conditions for `p` to present a tilted algebra: acyclic quiver
/// without multiple arrows, admissible ideal, and minimal zero or
/// commutativity generators.
pub fn validate_tilted_presentation(p: &AlgebraPresentation) -> Report {
    validate_with_cap(p, DEFAULT_NILPOTENCY_CAP)
}

/// [`validate_tilted_presentation`] with an explicit nilpotency search cap.
pub fn validate_with_cap(p: &AlgebraPresentation, cap: usize) -> Report {
    let q = &p.quiver;
    let mut checks = Vec::new();
    checks.push(Check::new(
        "acyclic",
        if q.is_acyclic() {
            vec![]
        } else {
            vec!["quiver has an oriented cycle".into()]
        },
    ));
    checks.push(Check::new(
        "no_multiple_arrows",
        if q.has_multiple_arrows() {
            vec!["quiver has multiple arrows".into()]
        } else {
            vec![]
        },
    ));
    let form_failures = p
        .relations
        .iter()
        .filter(|r| r.kind() == RelationKind::General)
        .map(|r| {
            format!(
                "`{}` is neither a zero nor a commutativity relation",
                r.display(q)
            )
        })
        .collect();
    checks.push(Check::new("relation_form", form_failures));

    let mut bounded = p.clone();
    let admissible = nilpotency_bound(&mut bounded, cap);
    checks.push(Check::new(
        "admissible",
        match &admissible {
            Ok(_) => vec![],
            Err(e) => vec![e.to_string()],
        },
    ));
    let minimal_failures = match admissible {
        Err(_) => vec!["not checked: ideal not admissible".into()],
        Ok(_) => match Ideal::new(&bounded) {
            Err(e) => vec![e.to_string()],
            Ok(mut ideal) => p
                .relations
                .iter()
                .filter_map(|r| match ideal.is_minimal(r) {
                    Ok(true) => None,
                    Ok(false) => Some(format!("`{}` is not minimal", r.display(q))),
                    Err(e) => Some(format!("`{}`: {e}", r.display(q))),
                })
                .collect(),
        },
    };
    checks.push(Check::new("minimal_relations", minimal_failures));
    Report { checks }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "ok  " } else { "FAIL" };
            match &c.detail {
                Some(d) => writeln!(f, "{status} {}: {d}", c.name)?,
                None => writeln!(f, "{status} {}", c.name)?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ClusterTiltOutput {
    /// The tilted presentation the construction started from.
    pub tilted: AlgebraPresentation,
    /// The cluster-tilted algebra `KQ/I`.
    pub gamma: AlgebraPresentation,
    pub classes: BTreeMap<String, ArrowClass>,
    /// f-arrow name -> index of the relation of `tilted` it was adjoined for.
    pub provenance: BTreeMap<String, usize>,
    pub dynkin: DynkinType,
}

impl ClusterTiltOutput {
    pub fn f_arrows(&self) -> HashSet<String> {
        self.classes
            .iter()
            .filter(|(_, c)| **c == ArrowClass::F)
            .map(|(n, _)| n.clone())
            .collect()
    }
}

fn fresh_name(q: &Quiver, k: usize) -> String {
    let mut name = format!("f_{k}");
    while q.arrow_index(&name).is_some() {
        name.push('\'');
    }
    name
}

/// Builds the cluster-tilted algebra of a tilted presentation.
pub fn cluster_tilt(p: &AlgebraPresentation) -> Result<ClusterTiltOutput, TiltError> {
    cluster_tilt_with_cap(p, DEFAULT_NILPOTENCY_CAP)
}

/// [`cluster_tilt`] with an explicit nilpotency search cap for validation.
pub fn cluster_tilt_with_cap(
    p: &AlgebraPresentation,
    cap: usize,
) -> Result<ClusterTiltOutput, TiltError> {
    let report = validate_with_cap(p, cap);
    if !report.passed() {
        return Err(TiltError::Invalid(report.summary()));
    }
    let mut q = p.quiver.clone();
    let mut classes: BTreeMap<String, ArrowClass> = q
        .arrows()
        .iter()
        .map(|a| (a.name.clone(), ArrowClass::M))
        .collect();
    let mut provenance = BTreeMap::new();
    for (k, rel) in p.relations.iter().enumerate() {
        let name = fresh_name(&q, k + 1);
        q.add_arrow(name.clone(), rel.target(), rel.source())
            .map_err(|e| TiltError::Invalid(e.to_string()))?;
        classes.insert(name.clone(), ArrowClass::F);
        provenance.insert(name, k);
    }
    if q.has_two_cycle() || !is_finite_cluster_type(&q) {
        return Err(TiltError::NotFiniteType);
    }
    let gamma = synthesize_relations_unchecked(&q)?;
    // Arrows of Q' keep their indices in Q.
    let arrow_map: Vec<usize> = (0..p.quiver.arrow_count()).collect();
    for rel in &p.relations {
        let moved = rel.transported(&q, &arrow_map)?;
        if !gamma.contains_relation(&moved) {
            return Err(TiltError::InconsistentRelations(rel.display(&p.quiver)));
        }
    }
    let dynkin = dynkin_type_of(&q).ok_or(TiltError::NotDynkin)?;
    Ok(ClusterTiltOutput {
        tilted: p.clone(),
        gamma,
        classes,
        provenance,
        dynkin,
    })
}

/// Structural properties every output must have: one f-arrow per full cycle,
/// an m-path among the shortest paths of each f-arrow, f-arrow deletion giving
/// back `Q'`, and every input relation among the synthesized ones.
pub fn check_structure(o: &ClusterTiltOutput) -> Report {
    let q = &o.gamma.quiver;
    let is_f = |a: usize| o.classes.get(&q.arrow(a).name) == Some(&ArrowClass::F);
    let mut checks = Vec::new();

    let cycle_failures = enumerate_full_cycles(q)
        .iter()
        .filter_map(|c| {
            let f = c.arrows.iter().filter(|&&a| is_f(a)).count();
            (f != 1).then(|| format!("cycle ({}) has {f} f-arrows", c.names(q).join(" ")))
        })
        .collect();
    checks.push(Check::new("one_f_arrow_per_full_cycle", cycle_failures));

    let m_path_failures = (0..q.arrow_count())
        .filter(|&a| is_f(a))
        .filter(|&a| {
            !shortest_paths(q, a)
                .iter()
                .any(|p| p.arrows().iter().all(|&b| !is_f(b)))
        })
        .map(|a| format!("f-arrow `{}` has no shortest m-path", q.arrow(a).name))
        .collect();
    checks.push(Check::new("f_arrow_has_shortest_m_path", m_path_failures));

    let recovered = q.without_arrows(&o.f_arrows());
    checks.push(Check::new(
        "f_deletion_recovers_input",
        if recovered == o.tilted.quiver {
            vec![]
        } else {
            vec!["quiver without f-arrows differs from the input quiver".into()]
        },
    ));

    let arrow_map: Vec<usize> = (0..o.tilted.quiver.arrow_count()).collect();
    let missing = o
        .tilted
        .relations
        .iter()
        .filter(|r| {
            r.transported(q, &arrow_map)
                .map(|m| !o.gamma.contains_relation(&m))
                .unwrap_or(true)
        })
        .map(|r| {
            format!(
                "`{}` not among synthesized relations",
                r.display(&o.tilted.quiver)
            )
        })
        .collect();
    checks.push(Check::new("input_relations_preserved", missing));

    let mut seen = HashSet::new();
    let mut bijection = Vec::new();
    for (name, &k) in &o.provenance {
        if !seen.insert(k) {
            bijection.push(format!("relation {k} has several f-arrows"));
        }
        if o.classes.get(name) != Some(&ArrowClass::F) {
            bijection.push(format!("`{name}` is not an f-arrow"));
        }
    }
    if seen.len() != o.tilted.relations.len() || o.f_arrows().len() != o.provenance.len() {
        bijection.push("f-arrows and input relations are not in bijection".into());
    }
    checks.push(Check::new("provenance_bijection", bijection));
    Report { checks }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusCandidate {
    pub deleted: Vec<String>,
    pub quiver: Quiver,
}

/// Arrow sets meeting every full cycle exactly once whose removal leaves an
/// acyclic quiver. Only arrows lying on full cycles are considered.
pub fn round_trip_census(gamma_quiver: &Quiver) -> Result<Vec<CensusCandidate>, TiltError> {
    if !is_finite_cluster_type(gamma_quiver) {
        return Err(TiltError::NotFiniteType);
    }
    let cycles = enumerate_full_cycles(gamma_quiver);
    let mut on_cycle: Vec<usize> = cycles
        .iter()
        .flat_map(|c| c.arrows.iter().copied())
        .collect();
    on_cycle.sort_unstable();
    on_cycle.dedup();
    let mut hits = vec![0usize; cycles.len()];
    let mut chosen = Vec::new();
    let mut out = Vec::new();
    census_step(
        gamma_quiver,
        &cycles,
        &on_cycle,
        0,
        &mut hits,
        &mut chosen,
        &mut out,
    );
    Ok(out)
}

fn census_step(
    q: &Quiver,
    cycles: &[crate::relations::FullCycle],
    arrows: &[usize],
    next: usize,
    hits: &mut Vec<usize>,
    chosen: &mut Vec<usize>,
    out: &mut Vec<CensusCandidate>,
) {
    if next == arrows.len() {
        if hits.iter().all(|&h| h == 1) {
            let names: HashSet<String> = chosen.iter().map(|&a| q.arrow(a).name.clone()).collect();
            let rest = q.without_arrows(&names);
            if rest.is_acyclic() {
                let mut deleted: Vec<String> = names.into_iter().collect();
                deleted.sort();
                out.push(CensusCandidate {
                    deleted,
                    quiver: rest,
                });
            }
        }
        return;
    }
    let a = arrows[next];
    census_step(q, cycles, arrows, next + 1, hits, chosen, out);
    let touched: Vec<usize> = (0..cycles.len())
        .filter(|&i| cycles[i].arrows.contains(&a))
        .collect();
    if touched.iter().all(|&i| hits[i] == 0) {
        touched.iter().for_each(|&i| hits[i] += 1);
        chosen.push(a);
        census_step(q, cycles, arrows, next + 1, hits, chosen, out);
        chosen.pop();
        touched.iter().for_each(|&i| hits[i] -= 1);
    }
}

/// The relation of `I'` an f-arrow was created from.
pub fn source_relation<'a>(o: &'a ClusterTiltOutput, f_arrow: &str) -> Option<&'a Relation> {
    o.provenance.get(f_arrow).map(|&k| &o.tilted.relations[k])
}

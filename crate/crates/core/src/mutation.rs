//! Quiver mutation, mutation classes, finite-type and Dynkin-type recognition.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::canonical::{canonical_form, canonical_key};
use crate::error::{MutationError, QuiverError};
use crate::quiver::{ExchangeMatrix, Quiver, VertexId};

pub const DEFAULT_MAX_MEMBERS: usize = 100_000;
pub const DEFAULT_MAX_ENTRY: i64 = 12;

/// Matrix mutation at `k`: `b'_ij = -b_ij` if `k` is `i` or `j`, otherwise
/// `b_ij + (|b_ik| b_kj + b_ik |b_kj|) / 2`.
pub fn mutate_matrix(b: &ExchangeMatrix, k: usize) -> ExchangeMatrix {
    let n = b.dim();
    let out = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == k || j == k {
                        -b.b[i][j]
                    } else {
                        let (bik, bkj) = (b.b[i][k], b.b[k][j]);
                        b.b[i][j] + (bik.abs() * bkj + bik * bkj.abs()) / 2
                    }
                })
                .collect()
        })
        .collect();
    ExchangeMatrix { b: out }
}

/// Mutates `q` at vertex `k`. Vertex labels are kept; arrows are renamed `a{i}_{j}_{k}`.
pub fn mutate(q: &Quiver, k: VertexId) -> Result<Quiver, MutationError> {
    if k >= q.vertex_count() {
        return Err(MutationError::UnknownVertex(k));
    }
    let b = q.to_exchange_matrix()?;
    Ok(Quiver::from_exchange_matrix_labelled(
        &mutate_matrix(&b, k),
        q.labels(),
    )?)
}

/// Applies mutations in order.
pub fn mutate_sequence(q: &Quiver, seq: &[VertexId]) -> Result<Quiver, MutationError> {
    seq.iter().try_fold(q.clone(), |acc, &k| mutate(&acc, k))
}

#[derive(Debug, Clone)]
pub struct MutationClass {
    pub seed: Quiver,
    /// Canonical key -> canonical quiver, in discovery (breadth-first) order.
    pub members: Vec<(String, Quiver)>,
    /// Canonical key -> mutation sequence from the seed, in seed vertex indices.
    pub witness: BTreeMap<String, Vec<VertexId>>,
    pub truncated: bool,
}

impl MutationClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, q: &Quiver) -> bool {
        self.witness.contains_key(&canonical_key(q))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.members.iter().map(|(k, _)| k.as_str())
    }

    pub fn quivers(&self) -> impl Iterator<Item = &Quiver> {
        self.members.iter().map(|(_, q)| q)
    }
}

/// Breadth-first closure of `q` under mutation, deduplicated up to isomorphism.
/// Stops early (with `truncated` set) when the class would exceed `max_members`
/// or a quiver with an exchange-matrix entry above `max_entry` in modulus appears.
pub fn mutation_class(
    q: &Quiver,
    max_members: usize,
    max_entry: i64,
) -> Result<MutationClass, MutationError> {
    let seed_matrix = q.to_exchange_matrix()?;
    let seed_key = canonical_key(q);
    let mut class = MutationClass {
        seed: q.clone(),
        members: vec![(seed_key.clone(), canonical_form(q).quiver)],
        witness: BTreeMap::from([(seed_key, Vec::new())]),
        truncated: false,
    };
    if seed_matrix.max_abs_entry() > max_entry || max_members == 0 {
        class.truncated = true;
        return Ok(class);
    }
    let mut queue: VecDeque<(ExchangeMatrix, Vec<VertexId>)> =
        VecDeque::from([(seed_matrix, Vec::new())]);
    while let Some((b, path)) = queue.pop_front() {
        for k in 0..b.dim() {
            let next = mutate_matrix(&b, k);
            let nq = Quiver::from_exchange_matrix(&next)?;
            let key = canonical_key(&nq);
            if class.witness.contains_key(&key) {
                continue;
            }
            if next.max_abs_entry() > max_entry || class.members.len() >= max_members {
                class.truncated = true;
                return Ok(class);
            }
            let mut seq = path.clone();
            seq.push(k);
            class
                .members
                .push((key.clone(), canonical_form(&nq).quiver));
            class.witness.insert(key, seq.clone());
            queue.push_back((next, seq));
        }
    }
    Ok(class)
}

/// True iff the mutation class is finite and every member has all exchange
/// entries in `{-1, 0, 1}`.
pub fn is_finite_cluster_type(q: &Quiver) -> bool {
    if q.has_two_cycle() {
        return false;
    }
    matches!(mutation_class(q, usize::MAX, 1), Ok(c) if !c.truncated)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DynkinFamily {
    A,
    D,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynkinType {
    pub family: DynkinFamily,
    pub rank: usize,
}

impl DynkinType {
    pub fn new(family: DynkinFamily, rank: usize) -> Option<Self> {
        let ok = match family {
            DynkinFamily::A => rank >= 1,
            DynkinFamily::D => rank >= 4,
            DynkinFamily::E => (6..=8).contains(&rank),
        };
        ok.then_some(DynkinType { family, rank })
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl Serialize for DynkinType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Classifies the underlying simple graph of `q` as a simply-laced Dynkin diagram.
pub fn classify_dynkin_diagram(q: &Quiver) -> Option<DynkinType> {
    let n = q.vertex_count();
    if n == 0 || !q.is_connected() || q.has_multiple_arrows() || q.has_two_cycle() {
        return None;
    }
    if q.arrow_count() != n - 1 {
        return None;
    }
    let mut adj = vec![Vec::new(); n];
    for a in q.arrows() {
        adj[a.source].push(a.target);
        adj[a.target].push(a.source);
    }
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    match branch.as_slice() {
        [] => DynkinType::new(DynkinFamily::A, n),
        [c] if adj[*c].len() == 3 => {
            let mut arms: Vec<usize> = adj[*c]
                .iter()
                .map(|&start| {
                    let (mut prev, mut cur, mut len) = (*c, start, 1);
                    while let Some(&next) = adj[cur].iter().find(|&&w| w != prev) {
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => DynkinType::new(DynkinFamily::D, n),
                [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => DynkinType::new(DynkinFamily::E, n),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Dynkin type of the mutation class of `q`, found on the first acyclic member
/// in breadth-first order. `None` when `q` is not of finite cluster type or not connected.
pub fn dynkin_type_of(q: &Quiver) -> Option<DynkinType> {
    if q.has_two_cycle() {
        return None;
    }
    let class = mutation_class(q, usize::MAX, 1).ok()?;
    if class.truncated {
        return None;
    }
    let found = class
        .quivers()
        .find(|m| m.is_acyclic())
        .and_then(classify_dynkin_diagram);
    found
}

/// Decides whether no quiver reachable from `q` by mutations and vertex
/// deletions has a multiple arrow. Explores at most `cap` isomorphism classes.
pub fn is_double_path_avoiding(q: &Quiver, cap: usize) -> Result<bool, MutationError> {
    if q.has_two_cycle() {
        return Err(QuiverError::TwoCycle.into());
    }
    let start = canonical_form(q).quiver;
    let mut seen: HashSet<String> = HashSet::from([canonical_key(&start)]);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        if cur.has_multiple_arrows() {
            return Ok(false);
        }
        let n = cur.vertex_count();
        let mutated = (0..n).map(|k| mutate(&cur, k));
        let deleted = (0..n).map(|v| {
            let keep: Vec<VertexId> = (0..n).filter(|&w| w != v).collect();
            Ok(cur.induced_subquiver(&keep).0)
        });
        for next in mutated.chain(deleted) {
            let next = next?;
            let key = canonical_key(&next);
            if seen.insert(key) {
                if seen.len() > cap {
                    return Err(MutationError::Indeterminate { cap });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(true)
}

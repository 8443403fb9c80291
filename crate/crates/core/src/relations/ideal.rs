//! Ideal membership for admissible presentations.
//!
//! Once every path of length `L` lies in `I`, the quotient `KQ/I` is computed
//! inside the finite span of paths shorter than `L`: `x` is in `I` iff its
//! truncation lies in the span of the truncated products `b * r * c` for
//! generators `r` and paths `b`, `c`.

use std::collections::HashMap;

use num_traits::One;

use crate::error::RelationError;
use crate::linalg::{Coeff, RowSpace};
use crate::quiver::{Quiver, VertexId};

use super::{path_element, AlgebraPresentation, LinComb, Path, Relation, RelationKind};

pub const DEFAULT_NILPOTENCY_CAP: usize = 24;

type Block = (VertexId, VertexId);

fn extend_paths(q: &Quiver, prev: &[Path]) -> Vec<Path> {
    let mut next = Vec::new();
    for p in prev {
        for e in q.out_arrows(p.target()) {
            let mut arrows = p.arrows().to_vec();
            arrows.push(e);
            next.push(Path::from_parts(p.source(), q.arrow(e).target, arrows));
        }
    }
    next
}

/// All paths of each length `0..=max_len`, grouped by length.
fn paths_by_length(q: &Quiver, max_len: usize) -> Vec<Vec<Path>> {
    let mut levels: Vec<Vec<Path>> = vec![(0..q.vertex_count()).map(Path::trivial).collect()];
    for _ in 0..max_len {
        let next = extend_paths(q, levels.last().unwrap());
        levels.push(next);
    }
    levels
}

fn truncate(x: &LinComb, below: usize) -> LinComb {
    x.iter()
        .filter(|(p, _)| p.len() < below)
        .map(|(p, c)| (p.clone(), c.clone()))
        .collect()
}

fn split_blocks(x: &LinComb) -> HashMap<Block, LinComb> {
    let mut blocks: HashMap<Block, LinComb> = HashMap::new();
    for (p, c) in x {
        blocks
            .entry((p.source(), p.target()))
            .or_default()
            .insert(p.clone(), c.clone());
    }
    blocks
}

/// Spans of `b * r * c` truncated below length `below`, one row space per
/// (source, target) block. With `proper` set, products with `b` and `c` both
/// trivial are left out, giving `rI + Ir` instead of `I`.
fn product_spans(
    pres: &AlgebraPresentation,
    below: usize,
    proper: bool,
) -> HashMap<Block, RowSpace<Path>> {
    let q = &pres.quiver;
    let min_gen = pres
        .relations
        .iter()
        .map(Relation::min_len)
        .min()
        .unwrap_or(below);
    let budget = below.saturating_sub(min_gen + 1);
    let levels = paths_by_length(q, budget);
    let mut ending_at: HashMap<VertexId, Vec<&Path>> = HashMap::new();
    let mut starting_at: HashMap<VertexId, Vec<&Path>> = HashMap::new();
    for p in levels.iter().flatten() {
        ending_at.entry(p.target()).or_default().push(p);
        starting_at.entry(p.source()).or_default().push(p);
    }
    let mut spans: HashMap<Block, RowSpace<Path>> = HashMap::new();
    for rel in &pres.relations {
        let room = match below.checked_sub(rel.min_len() + 1) {
            Some(r) => r,
            None => continue,
        };
        let lefts = ending_at
            .get(&rel.source())
            .map(Vec::as_slice)
            .unwrap_or(&[]);
        let rights = starting_at
            .get(&rel.target())
            .map(Vec::as_slice)
            .unwrap_or(&[]);
        for b in lefts {
            if b.len() > room {
                continue;
            }
            for c in rights {
                if b.len() + c.len() > room || (proper && b.is_trivial() && c.is_trivial()) {
                    continue;
                }
                let mut v = LinComb::new();
                for (coeff, p) in rel.terms() {
                    let full = b.concat(p).and_then(|bp| bp.concat(c)).expect("composable");
                    if full.len() < below {
                        v.insert(full, coeff.clone());
                    }
                }
                if !v.is_empty() {
                    spans.entry((b.source(), c.target())).or_default().insert(v);
                }
            }
        }
    }
    spans
}

fn in_spans(spans: &HashMap<Block, RowSpace<Path>>, x: &LinComb) -> bool {
    split_blocks(x)
        .into_iter()
        .all(|(block, part)| spans.get(&block).is_some_and(|s| s.contains(&part)))
}

/// Least `L <= cap` such that every path of length `L` lies in the ideal.
/// Stores the result on the presentation.
pub fn nilpotency_bound(p: &mut AlgebraPresentation, cap: usize) -> Result<usize, RelationError> {
    p.is_admissible_shape()?;
    let mut level: Vec<Path> = (0..p.quiver.vertex_count()).map(Path::trivial).collect();
    for len in 1..=cap {
        level = extend_paths(&p.quiver, &level);
        if level.is_empty() {
            p.nilpotency_bound = Some(len);
            return Ok(len);
        }
        // For an admissible ideal, paths of length L lie in I as soon as they
        // lie in I + (paths of length > L).
        let spans = product_spans(p, len + 1, false);
        if level
            .iter()
            .all(|path| in_spans(&spans, &path_element(path)))
        {
            p.nilpotency_bound = Some(len);
            return Ok(len);
        }
    }
    Err(RelationError::NilpotencyCapExceeded { cap })
}

/// Membership oracle for the ideal of a presentation with a known nilpotency bound.
pub struct Ideal<'a> {
    pres: &'a AlgebraPresentation,
    bound: usize,
    spans: HashMap<Block, RowSpace<Path>>,
    proper_spans: Option<HashMap<Block, RowSpace<Path>>>,
}

impl<'a> Ideal<'a> {
    /// Uses the stored nilpotency bound, or fails if it has not been computed.
    pub fn new(pres: &'a AlgebraPresentation) -> Result<Self, RelationError> {
        pres.is_admissible_shape()?;
        let bound = pres
            .nilpotency_bound
            .ok_or(RelationError::NilpotencyCapExceeded { cap: 0 })?;
        Ok(Ideal {
            pres,
            bound,
            spans: product_spans(pres, bound, false),
            proper_spans: None,
        })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn quiver(&self) -> &Quiver {
        &self.pres.quiver
    }

    pub fn contains(&self, x: &LinComb) -> bool {
        in_spans(&self.spans, &truncate(x, self.bound))
    }

    pub fn is_zero_path(&self, p: &Path) -> bool {
        self.contains(&path_element(p))
    }

    /// Membership in `rI + Ir`. Since `r^L` lies in `I`, `r^(L+1)` lies in `rI`,
    /// so truncating below `L + 1` is exact.
    fn in_proper_products(&mut self, x: &LinComb) -> bool {
        let below = self.bound + 1;
        let spans = self
            .proper_spans
            .get_or_insert_with(|| product_spans(self.pres, below, true));
        in_spans(spans, &truncate(x, below))
    }

    /// Minimality of a relation in the ideal, decided two ways: by the
    /// definition (`rho` not in `rI + Ir`) and by path factorization (no proper
    /// subpath of a zero relation vanishes; a commutativity relation has
    /// nonzero paths and no common prefix/suffix splitting it into a shorter
    /// relation). Disagreement is reported as an error.
    pub fn is_minimal(&mut self, rho: &Relation) -> Result<bool, RelationError> {
        let elem = rho.element();
        if !self.contains(&elem) {
            return Err(RelationError::NotInIdeal);
        }
        let q = &self.pres.quiver;
        let paths: Vec<&Path> = rho.paths().collect();
        let nonzero_paths = rho.kind() != RelationKind::Commutativity
            || paths.iter().all(|p| !self.is_zero_path(p));
        let by_definition = nonzero_paths && !self.in_proper_products(&elem);
        let by_factorization = match rho.kind() {
            RelationKind::Zero => {
                let w = paths[0];
                let n = w.len();
                (0..n).all(|s| {
                    (s + 1..=n)
                        .filter(|&e| e - s < n)
                        .all(|e| !self.is_zero_path(&w.subpath(q, s, e)))
                })
            }
            RelationKind::Commutativity => {
                nonzero_paths && !self.factors_through_shorter(paths[0], paths[1])
            }
            RelationKind::General => by_definition,
        };
        if by_definition != by_factorization {
            return Err(RelationError::MinimalityReadingsDiverge {
                by_definition,
                by_factorization,
            });
        }
        Ok(by_definition)
    }

    fn factors_through_shorter(&self, w: &Path, m: &Path) -> bool {
        let q = &self.pres.quiver;
        let (wa, ma) = (w.arrows(), m.arrows());
        let prefix = wa.iter().zip(ma).take_while(|(x, y)| x == y).count();
        let suffix = wa
            .iter()
            .rev()
            .zip(ma.iter().rev())
            .take_while(|(x, y)| x == y)
            .count();
        for a in 0..=prefix {
            for b in 0..=suffix {
                if a + b == 0 || a + b >= wa.len() || a + b >= ma.len() {
                    continue;
                }
                let inner_w = w.subpath(q, a, wa.len() - b);
                let inner_m = m.subpath(q, a, ma.len() - b);
                let mut diff = path_element(&inner_w);
                diff.insert(inner_m, -Coeff::one());
                if self.contains(&diff) {
                    return true;
                }
            }
        }
        false
    }
}

/// Decides whether `x` is zero in `KQ/I`, computing the nilpotency bound with
/// the default cap when it is not stored yet.
pub fn is_zero_in_algebra(p: &AlgebraPresentation, x: &LinComb) -> Result<bool, RelationError> {
    with_bound(p, |ideal| Ok(ideal.contains(x)))
}

pub fn is_minimal_relation(p: &AlgebraPresentation, rho: &Relation) -> Result<bool, RelationError> {
    with_bound(p, |ideal| ideal.is_minimal(rho))
}

fn with_bound<T>(
    p: &AlgebraPresentation,
    f: impl FnOnce(&mut Ideal<'_>) -> Result<T, RelationError>,
) -> Result<T, RelationError> {
    if p.nilpotency_bound.is_some() {
        let mut ideal = Ideal::new(p)?;
        return f(&mut ideal);
    }
    let mut owned = p.clone();
    nilpotency_bound(&mut owned, DEFAULT_NILPOTENCY_CAP)?;
    let mut ideal = Ideal::new(&owned)?;
    f(&mut ideal)
}

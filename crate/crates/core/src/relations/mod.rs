//! Paths, relations and presentations `KQ/I` of path algebras.

mod cycles;
mod ideal;

pub use cycles::{
    enumerate_full_cycles, shortest_paths, synthesize_relations, synthesize_relations_unchecked,
    FullCycle,
};
pub use ideal::{
    is_minimal_relation, is_zero_in_algebra, nilpotency_bound, Ideal, DEFAULT_NILPOTENCY_CAP,
};

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::RelationError;
use crate::linalg::Coeff;
use crate::quiver::{Quiver, VertexId};

/// A path in a quiver: arrow indices composed left to right (first arrow applied first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    source: VertexId,
    target: VertexId,
    arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn new(q: &Quiver, arrows: Vec<usize>) -> Result<Self, RelationError> {
        let Some(&first) = arrows.first() else {
            return Err(RelationError::Empty);
        };
        for w in arrows.windows(2) {
            let (a, b) = (q.arrow(w[0]), q.arrow(w[1]));
            if a.target != b.source {
                return Err(RelationError::NotComposable(a.name.clone(), b.name.clone()));
            }
        }
        Ok(Path {
            source: q.arrow(first).source,
            target: q.arrow(*arrows.last().unwrap()).target,
            arrows,
        })
    }

    pub fn from_names(q: &Quiver, names: &[&str]) -> Result<Self, RelationError> {
        let idx = names
            .iter()
            .map(|n| {
                q.arrow_index(n)
                    .ok_or_else(|| RelationError::UnknownArrow(n.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Path::new(q, idx)
    }

    /// Unchecked constructor for arrow sequences already known to compose.
    pub(crate) fn from_parts(source: VertexId, target: VertexId, arrows: Vec<usize>) -> Self {
        Path {
            source,
            target,
            arrows,
        }
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_trivial()
    }

    /// Vertices visited, in order, including both endpoints.
    pub fn vertices(&self, q: &Quiver) -> Vec<VertexId> {
        let mut vs = vec![self.source];
        vs.extend(self.arrows.iter().map(|&a| q.arrow(a).target));
        vs
    }

    /// `self` followed by `other`; `None` if they do not compose.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        (self.target == other.source).then(|| Path {
            source: self.source,
            target: other.target,
            arrows: self.arrows.iter().chain(&other.arrows).copied().collect(),
        })
    }

    /// Contiguous subpath `arrows[start..end]`.
    pub fn subpath(&self, q: &Quiver, start: usize, end: usize) -> Path {
        if start == end {
            let v = if start == 0 {
                self.source
            } else {
                q.arrow(self.arrows[start - 1]).target
            };
            return Path::trivial(v);
        }
        Path {
            source: q.arrow(self.arrows[start]).source,
            target: q.arrow(self.arrows[end - 1]).target,
            arrows: self.arrows[start..end].to_vec(),
        }
    }

    pub fn names<'q>(&self, q: &'q Quiver) -> Vec<&'q str> {
        self.arrows
            .iter()
            .map(|&a| q.arrow(a).name.as_str())
            .collect()
    }

    /// Order used for presentation output: length, then arrow names.
    pub fn display_cmp(&self, other: &Path, q: &Quiver) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.names(q).cmp(&other.names(q)))
            .then_with(|| self.source.cmp(&other.source))
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.is_trivial() {
            format!("e_{}", q.vertex_name(self.source))
        } else {
            self.names(q).join(" ")
        }
    }
}

/// Finite linear combination of paths.
pub type LinComb = BTreeMap<Path, Coeff>;

pub fn int(n: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(n))
}

pub fn path_element(p: &Path) -> LinComb {
    LinComb::from([(p.clone(), Coeff::one())])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Zero,
    Commutativity,
    General,
}

/// Linear combination of parallel paths with nonzero rational coefficients.
/// Zero relations carry coefficient 1; commutativity relations are stored as
/// `p - q` with `p` before `q` in path order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    terms: Vec<(Coeff, Path)>,
}

impl Relation {
    pub fn new(q: &Quiver, terms: Vec<(Coeff, Path)>) -> Result<Self, RelationError> {
        let mut merged: Vec<(Coeff, Path)> = Vec::new();
        for (c, p) in terms {
            if c.is_zero() {
                return Err(RelationError::ZeroCoefficient);
            }
            match merged.iter_mut().find(|(_, mp)| *mp == p) {
                Some((mc, _)) => *mc += c,
                None => merged.push((c, p)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        let Some((_, first)) = merged.first() else {
            return Err(RelationError::Empty);
        };
        let (s, t) = (first.source, first.target);
        if merged.iter().any(|(_, p)| p.source != s || p.target != t) {
            return Err(RelationError::NotParallel);
        }
        merged.sort_by(|a, b| a.1.display_cmp(&b.1, q));
        let lead = merged[0].0.clone();
        let terms = match merged.len() {
            1 => vec![(Coeff::one(), merged.remove(0).1)],
            2 => {
                let second = merged.pop().unwrap().1;
                let first = merged.pop().unwrap().1;
                vec![(Coeff::one(), first), (-Coeff::one(), second)]
            }
            _ => merged.into_iter().map(|(c, p)| (c / &lead, p)).collect(),
        };
        Ok(Relation { terms })
    }

    pub fn zero(q: &Quiver, path: Path) -> Result<Self, RelationError> {
        Relation::new(q, vec![(Coeff::one(), path)])
    }

    /// The relation `a - b`.
    pub fn commutativity(q: &Quiver, a: Path, b: Path) -> Result<Self, RelationError> {
        Relation::new(q, vec![(Coeff::one(), a), (-Coeff::one(), b)])
    }

    pub fn terms(&self) -> &[(Coeff, Path)] {
        &self.terms
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.terms.iter().map(|(_, p)| p)
    }

    pub fn kind(&self) -> RelationKind {
        match self.terms.len() {
            1 => RelationKind::Zero,
            2 => RelationKind::Commutativity,
            _ => RelationKind::General,
        }
    }

    pub fn source(&self) -> VertexId {
        self.terms[0].1.source
    }

    pub fn target(&self) -> VertexId {
        self.terms[0].1.target
    }

    pub fn min_len(&self) -> usize {
        self.paths().map(Path::len).min().unwrap_or(0)
    }

    pub fn element(&self) -> LinComb {
        self.terms
            .iter()
            .map(|(c, p)| (p.clone(), c.clone()))
            .collect()
    }

    /// Same relation over another quiver whose arrow `i` corresponds to `arrow_map[i]`.
    pub fn transported(
        &self,
        target: &Quiver,
        arrow_map: &[usize],
    ) -> Result<Relation, RelationError> {
        let terms = self
            .terms
            .iter()
            .map(|(c, p)| {
                let arrows = p.arrows.iter().map(|&a| arrow_map[a]).collect();
                Ok((c.clone(), Path::new(target, arrows)?))
            })
            .collect::<Result<Vec<_>, RelationError>>()?;
        Relation::new(target, terms)
    }

    /// Text form used in presentation files (`rel zero: ...`, `rel comm: ... = ...`).
    pub fn display(&self, q: &Quiver) -> String {
        match self.kind() {
            RelationKind::Zero => format!("rel zero: {}", self.terms[0].1.display(q)),
            RelationKind::Commutativity => format!(
                "rel comm: {} = {}",
                self.terms[0].1.display(q),
                self.terms[1].1.display(q)
            ),
            RelationKind::General => {
                let mut s = String::from("rel general:");
                for (i, (c, p)) in self.terms.iter().enumerate() {
                    let neg = c < &Coeff::zero();
                    let mag = if neg { -c.clone() } else { c.clone() };
                    let sign = match (i, neg) {
                        (0, false) => " ",
                        (0, true) => " - ",
                        (_, false) => " + ",
                        (_, true) => " - ",
                    };
                    s.push_str(sign);
                    if !mag.is_one() {
                        s.push_str(&format!("{mag}*"));
                    }
                    s.push_str(&p.display(q));
                }
                s
            }
        }
    }
}

/// `KQ/I` given by a quiver and generating relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    pub nilpotency_bound: Option<usize>,
}

impl AlgebraPresentation {
    pub fn new(quiver: Quiver, relations: Vec<Relation>) -> Self {
        AlgebraPresentation {
            quiver,
            relations,
            nilpotency_bound: None,
        }
    }

    pub fn hereditary(quiver: Quiver) -> Self {
        Self::new(quiver, Vec::new())
    }

    pub fn is_admissible_shape(&self) -> Result<(), RelationError> {
        for r in &self.relations {
            let l = r.min_len();
            if l < 2 {
                return Err(RelationError::NotAdmissible(l));
            }
        }
        Ok(())
    }

    pub fn contains_relation(&self, r: &Relation) -> bool {
        self.relations.contains(r)
    }
}

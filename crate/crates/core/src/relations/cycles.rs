use std::collections::BTreeSet;

use crate::error::RelationError;
use crate::mutation::is_finite_cluster_type;
use crate::quiver::{Quiver, VertexId};

use super::{AlgebraPresentation, Path, Relation};

/// Oriented cycle without repeated vertices whose vertex set spans no other arrows.
/// Stored rotated so that the first arrow starts at the smallest vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FullCycle {
    pub arrows: Vec<usize>,
}

impl FullCycle {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn vertices(&self, q: &Quiver) -> Vec<VertexId> {
        self.arrows.iter().map(|&a| q.arrow(a).source).collect()
    }

    pub fn names<'q>(&self, q: &'q Quiver) -> Vec<&'q str> {
        self.arrows
            .iter()
            .map(|&a| q.arrow(a).name.as_str())
            .collect()
    }

    fn rotated(q: &Quiver, mut arrows: Vec<usize>) -> Self {
        let start = (0..arrows.len())
            .min_by_key(|&i| q.arrow(arrows[i]).source)
            .unwrap_or(0);
        arrows.rotate_left(start);
        FullCycle { arrows }
    }
}

/// Number of arrows with both endpoints in `inside`.
fn spanned_arrows(q: &Quiver, inside: &[bool]) -> usize {
    q.arrows()
        .iter()
        .filter(|a| inside[a.source] && inside[a.target])
        .count()
}

/// Paths from the target of `arrow` back to its source that close a full cycle with it.
/// Ordered by length, then by arrow names.
pub fn shortest_paths(q: &Quiver, arrow: usize) -> Vec<Path> {
    let a = q.arrow(arrow);
    let (i, j) = (a.source, a.target);
    let mut inside = vec![false; q.vertex_count()];
    inside[i] = true;
    inside[j] = true;
    let mut found = Vec::new();
    // Any second arrow between i and j (parallel or opposite) rules out every
    // cycle through both, so 2-cycles never count as full cycles here.
    if spanned_arrows(q, &inside) != 1 {
        return found;
    }
    let mut stack = Vec::new();
    dfs(q, j, i, &mut inside, &mut stack, &mut found);
    found.sort_by(|x: &Path, y: &Path| x.display_cmp(y, q));
    found
}

fn dfs(
    q: &Quiver,
    at: VertexId,
    goal: VertexId,
    inside: &mut Vec<bool>,
    stack: &mut Vec<usize>,
    found: &mut Vec<Path>,
) {
    for e in q.out_arrows(at).collect::<Vec<_>>() {
        let w = q.arrow(e).target;
        if w == goal {
            // The cycle is `stack + e` plus the closing arrow.
            if spanned_arrows(q, inside) == stack.len() + 2 {
                let mut arrows = stack.clone();
                arrows.push(e);
                let source = q.arrow(arrows[0]).source;
                found.push(Path::from_parts(source, goal, arrows));
            }
            continue;
        }
        if inside[w] {
            continue;
        }
        inside[w] = true;
        stack.push(e);
        // Arrows among visited vertices only accumulate, so prune as soon as a
        // chord appears. Arrows `w -> goal` may still become the closing arrow.
        let to_goal = q
            .out_arrows(w)
            .filter(|&x| q.arrow(x).target == goal)
            .count();
        if spanned_arrows(q, inside) - to_goal == stack.len() + 1 {
            dfs(q, w, goal, inside, stack, found);
        }
        stack.pop();
        inside[w] = false;
    }
}

/// All full cycles, each once, sorted by length and then by arrow names.
pub fn enumerate_full_cycles(q: &Quiver) -> Vec<FullCycle> {
    let mut set = BTreeSet::new();
    for a in 0..q.arrow_count() {
        for p in shortest_paths(q, a) {
            let mut arrows = vec![a];
            arrows.extend_from_slice(p.arrows());
            set.insert(FullCycle::rotated(q, arrows));
        }
    }
    let mut cycles: Vec<FullCycle> = set.into_iter().collect();
    cycles.sort_by(|x, y| {
        x.len()
            .cmp(&y.len())
            .then_with(|| x.names(q).cmp(&y.names(q)))
    });
    cycles
}

/// Relations of the cluster-tilted algebra with quiver `q`: for every arrow, a
/// zero relation when it has one shortest path and a commutativity relation
/// when it has two.
pub fn synthesize_relations(q: &Quiver) -> Result<AlgebraPresentation, RelationError> {
    if q.has_two_cycle() {
        return Err(RelationError::TwoCycle);
    }
    if !is_finite_cluster_type(q) {
        return Err(RelationError::NotFiniteType);
    }
    synthesize_relations_unchecked(q)
}

/// [`synthesize_relations`] without the finite-type precondition check.
pub fn synthesize_relations_unchecked(q: &Quiver) -> Result<AlgebraPresentation, RelationError> {
    if q.has_two_cycle() {
        return Err(RelationError::TwoCycle);
    }
    let mut order: Vec<usize> = (0..q.arrow_count()).collect();
    order.sort_by(|&x, &y| q.arrow(x).name.cmp(&q.arrow(y).name));
    let mut relations = Vec::new();
    for a in order {
        let mut paths = shortest_paths(q, a);
        match paths.len() {
            0 => {}
            1 => relations.push(Relation::zero(q, paths.remove(0))?),
            2 => {
                let second = paths.pop().unwrap();
                let first = paths.pop().unwrap();
                relations.push(Relation::commutativity(q, first, second)?);
            }
            count => {
                return Err(RelationError::TooManyShortestPaths {
                    arrow: q.arrow(a).name.clone(),
                    count,
                })
            }
        }
    }
    Ok(AlgebraPresentation::new(q.clone(), relations))
}

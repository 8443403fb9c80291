//! Canonical labelling of small quivers.
//!
//! Vertices are first split into cells by iterated degree refinement, then a
//! branch-and-bound search over cell-respecting orderings picks the ordering
//! whose arrow-count key is lexicographically smallest. Interchangeable
//! vertices (twins) are tried once per position.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::quiver::{Quiver, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    /// Relabelled quiver: no vertex labels, arrows named `a{i}_{j}_{k}`.
    pub quiver: Quiver,
    /// `permutation[old] = new`.
    pub permutation: Vec<VertexId>,
}

pub fn canonical_form(q: &Quiver) -> CanonicalForm {
    let counts = q.arrow_counts();
    let order = canonical_order(&counts);
    let mut permutation = vec![0; order.len()];
    for (pos, &v) in order.iter().enumerate() {
        permutation[v] = pos;
    }
    let quiver = q.permuted(&permutation).with_generated_names();
    CanonicalForm {
        quiver,
        permutation,
    }
}

/// Compact string identifying the isomorphism class of `q`.
pub fn canonical_key(q: &Quiver) -> String {
    let counts = q.arrow_counts();
    let order = canonical_order(&counts);
    key_string(&counts, &order)
}

pub fn is_isomorphic(a: &Quiver, b: &Quiver) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.arrow_count() == b.arrow_count()
        && canonical_key(a) == canonical_key(b)
}

/// All vertex permutations `p` (as `p[v]`) preserving arrow multiplicities.
pub fn automorphisms(q: &Quiver) -> Vec<Vec<VertexId>> {
    let counts = q.arrow_counts();
    let colors = refine_colors(&counts);
    let n = counts.len();
    let mut out = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_automorphism(&counts, &colors, 0, &mut image, &mut used, &mut out);
    out
}

fn extend_automorphism(
    counts: &[Vec<usize>],
    colors: &[usize],
    v: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<VertexId>>,
) {
    if v == counts.len() {
        out.push(image.clone());
        return;
    }
    for w in 0..counts.len() {
        if used[w] || colors[w] != colors[v] {
            continue;
        }
        let consistent = (0..v)
            .all(|u| counts[u][v] == counts[image[u]][w] && counts[v][u] == counts[w][image[u]]);
        if consistent {
            image[v] = w;
            used[w] = true;
            extend_automorphism(counts, colors, v + 1, image, used, out);
            used[w] = false;
        }
    }
    image[v] = usize::MAX;
}

fn key_string(counts: &[Vec<usize>], order: &[usize]) -> String {
    let n = order.len();
    let mut s = format!("{n}:");
    for &i in order {
        for &j in order {
            if i != j {
                s.push_str(&counts[i][j].to_string());
                s.push(',');
            }
        }
        s.push(';');
    }
    s
}

type Signature = (usize, Vec<(usize, usize, usize)>);

fn refine_colors(counts: &[Vec<usize>]) -> Vec<usize> {
    let n = counts.len();
    let mut colors: Vec<usize> = {
        let sigs: Vec<(usize, usize)> = (0..n)
            .map(|v| {
                let out: usize = counts[v].iter().sum();
                let inn: usize = (0..n).map(|w| counts[w][v]).sum();
                (out, inn)
            })
            .collect();
        rank(&sigs)
    };
    let mut classes = distinct(&colors);
    loop {
        let sigs: Vec<Signature> = (0..n)
            .map(|v| {
                let mut nb: Vec<(usize, usize, usize)> = (0..n)
                    .filter(|&w| w != v && counts[v][w] + counts[w][v] > 0)
                    .map(|w| (colors[w], counts[v][w], counts[w][v]))
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank(&sigs);
        let next_classes = distinct(&next);
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    let index: BTreeMap<&T, usize> = sorted.iter().enumerate().map(|(i, s)| (s, i)).collect();
    sigs.iter().map(|s| index[s]).collect()
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

struct Search<'a> {
    counts: &'a [Vec<usize>],
    cell_of_position: Vec<usize>,
    colors: Vec<usize>,
    current: Vec<usize>,
    used: Vec<bool>,
    best: Option<Vec<usize>>,
}

impl Search<'_> {
    fn segment(&self, order: &[usize], p: usize, v: usize) -> Vec<(usize, usize)> {
        order[..p]
            .iter()
            .map(|&u| (self.counts[v][u], self.counts[u][v]))
            .collect()
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        let c = self.counts;
        if c[u][v] != c[v][u] {
            return false;
        }
        (0..c.len())
            .filter(|&w| w != u && w != v)
            .all(|w| c[u][w] == c[v][w] && c[w][u] == c[w][v])
    }

    fn prefix_cmp(&self, len: usize) -> Ordering {
        let Some(best) = &self.best else {
            return Ordering::Less;
        };
        for p in 0..len {
            let o = self
                .segment(&self.current, p, self.current[p])
                .cmp(&self.segment(best, p, best[p]));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }

    fn run(&mut self, p: usize) {
        let n = self.counts.len();
        if p == n {
            if self.prefix_cmp(n) == Ordering::Less {
                self.best = Some(self.current.clone());
            }
            return;
        }
        let cell = self.cell_of_position[p];
        let mut tried: Vec<usize> = Vec::new();
        for v in 0..n {
            if self.used[v] || self.colors[v] != cell {
                continue;
            }
            if tried.iter().any(|&t| self.twins(t, v)) {
                continue;
            }
            tried.push(v);
            self.current.push(v);
            if self.prefix_cmp(p + 1) != Ordering::Greater {
                self.used[v] = true;
                self.run(p + 1);
                self.used[v] = false;
            }
            self.current.pop();
        }
    }
}

/// Canonical vertex ordering: `order[position] = vertex`.
fn canonical_order(counts: &[Vec<usize>]) -> Vec<usize> {
    let n = counts.len();
    if n == 0 {
        return Vec::new();
    }
    let colors = refine_colors(counts);
    let mut sorted_colors = colors.clone();
    sorted_colors.sort_unstable();
    let mut search = Search {
        counts,
        cell_of_position: sorted_colors,
        colors,
        current: Vec::with_capacity(n),
        used: vec![false; n],
        best: None,
    };
    search.run(0);
    search.best.expect("at least one ordering exists")
}

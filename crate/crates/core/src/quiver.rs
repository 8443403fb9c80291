//! Quiver data model: vertices, named arrows, and the exchange-matrix dictionary.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::QuiverError;

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

/// A finite quiver without loops. Vertex ids are `0..n` in order; arrows keep
/// insertion order and are addressed by name from relations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<Vertex>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Unlabelled quiver on `n` vertices with no arrows.
    pub fn with_vertices(n: usize) -> Self {
        Quiver {
            vertices: (0..n).map(|id| Vertex { id, label: None }).collect(),
            arrows: Vec::new(),
        }
    }

    pub fn with_labels<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        Quiver {
            vertices: labels
                .into_iter()
                .enumerate()
                .map(|(id, l)| Vertex {
                    id,
                    label: Some(l.into()),
                })
                .collect(),
            arrows: Vec::new(),
        }
    }

    /// Builds a quiver from `(name, source, target)` triples over `n` unlabelled vertices.
    pub fn from_arrows<S: Into<String>>(
        n: usize,
        arrows: impl IntoIterator<Item = (S, VertexId, VertexId)>,
    ) -> Result<Self, QuiverError> {
        let mut q = Quiver::with_vertices(n);
        for (name, s, t) in arrows {
            q.add_arrow(name, s, t)?;
        }
        Ok(q)
    }

    pub fn add_arrow(
        &mut self,
        name: impl Into<String>,
        source: VertexId,
        target: VertexId,
    ) -> Result<(), QuiverError> {
        let name = name.into();
        let n = self.vertices.len();
        if source >= n {
            return Err(QuiverError::UnknownVertex(source.to_string()));
        }
        if target >= n {
            return Err(QuiverError::UnknownVertex(target.to_string()));
        }
        if source == target {
            return Err(QuiverError::Loop { arrow: name });
        }
        if self.arrows.iter().any(|a| a.name == name) {
            return Err(QuiverError::DuplicateArrow(name));
        }
        self.arrows.push(Arrow {
            name,
            source,
            target,
        });
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, index: usize) -> &Arrow {
        &self.arrows[index]
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Label if present, otherwise the numeric id.
    pub fn vertex_name(&self, v: VertexId) -> String {
        match &self.vertices[v].label {
            Some(l) => l.clone(),
            None => v.to_string(),
        }
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices
            .iter()
            .position(|v| v.label.as_deref() == Some(name))
            .or_else(|| {
                name.parse::<usize>()
                    .ok()
                    .filter(|&i| i < self.vertices.len() && self.vertices[i].label.is_none())
            })
    }

    pub fn set_label(&mut self, v: VertexId, label: Option<String>) {
        self.vertices[v].label = label;
    }

    pub fn labels(&self) -> Vec<Option<String>> {
        self.vertices.iter().map(|v| v.label.clone()).collect()
    }

    /// Arrow indices leaving `v`, in arrow order.
    pub fn out_arrows(&self, v: VertexId) -> impl Iterator<Item = usize> + '_ {
        self.arrows
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.source == v)
            .map(|(i, _)| i)
    }

    /// `m[i][j]` = number of arrows `i -> j`.
    pub fn arrow_counts(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut m = vec![vec![0usize; n]; n];
        for a in &self.arrows {
            m[a.source][a.target] += 1;
        }
        m
    }

    pub fn has_two_cycle(&self) -> bool {
        let m = self.arrow_counts();
        let n = m.len();
        (0..n).any(|i| (i + 1..n).any(|j| m[i][j] > 0 && m[j][i] > 0))
    }

    pub fn has_multiple_arrows(&self) -> bool {
        self.arrow_counts().iter().flatten().any(|&c| c > 1)
    }

    /// True when there is no oriented cycle.
    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        let n = self.vertex_count();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut stack: Vec<VertexId> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            order.push(v);
            for a in &self.arrows {
                if a.source == v {
                    indeg[a.target] -= 1;
                    if indeg[a.target] == 0 {
                        stack.push(a.target);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Connectedness of the underlying undirected graph. The empty quiver is not connected.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for a in &self.arrows {
                let w = if a.source == v {
                    a.target
                } else if a.target == v {
                    a.source
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn to_exchange_matrix(&self) -> Result<ExchangeMatrix, QuiverError> {
        if self.has_two_cycle() {
            return Err(QuiverError::TwoCycle);
        }
        Ok(self.signed_counts())
    }

    /// `b[i][j] = #(i -> j) - #(j -> i)` without the 2-cycle check.
    pub(crate) fn signed_counts(&self) -> ExchangeMatrix {
        let n = self.vertex_count();
        let mut b = vec![vec![0i64; n]; n];
        for a in &self.arrows {
            b[a.source][a.target] += 1;
            b[a.target][a.source] -= 1;
        }
        ExchangeMatrix { b }
    }

    /// Inverse of [`Quiver::to_exchange_matrix`]; arrows are named `a{i}_{j}_{k}`.
    pub fn from_exchange_matrix(m: &ExchangeMatrix) -> Result<Self, QuiverError> {
        m.check_skew()?;
        let n = m.dim();
        let mut q = Quiver::with_vertices(n);
        q.arrows = generated_arrows(n, |i, j| m.b[i][j].max(0) as usize);
        Ok(q)
    }

    /// Same as [`Quiver::from_exchange_matrix`] but keeps the given vertex labels.
    pub fn from_exchange_matrix_labelled(
        m: &ExchangeMatrix,
        labels: Vec<Option<String>>,
    ) -> Result<Self, QuiverError> {
        let mut q = Quiver::from_exchange_matrix(m)?;
        for (v, l) in labels.into_iter().enumerate().take(q.vertex_count()) {
            q.vertices[v].label = l;
        }
        Ok(q)
    }

    /// Full subquiver on `keep`, reindexed in increasing id order. Returns the
    /// map old id -> new id (`None` for deleted vertices).
    pub fn induced_subquiver(&self, keep: &[VertexId]) -> (Quiver, Vec<Option<VertexId>>) {
        let keep: HashSet<VertexId> = keep.iter().copied().collect();
        let mut map = vec![None; self.vertex_count()];
        let mut vertices = Vec::new();
        for v in &self.vertices {
            if keep.contains(&v.id) {
                map[v.id] = Some(vertices.len());
                vertices.push(Vertex {
                    id: vertices.len(),
                    label: v.label.clone(),
                });
            }
        }
        let arrows = self
            .arrows
            .iter()
            .filter_map(|a| {
                Some(Arrow {
                    name: a.name.clone(),
                    source: map[a.source]?,
                    target: map[a.target]?,
                })
            })
            .collect();
        (Quiver { vertices, arrows }, map)
    }

    /// Removes the named arrows, keeping all vertices.
    pub fn without_arrows(&self, names: &HashSet<String>) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .filter(|a| !names.contains(&a.name))
                .cloned()
                .collect(),
        }
    }

    /// Renumbers vertices: vertex `v` moves to position `perm[v]`. Arrows are
    /// carried over with their names, sorted by (source, target, original order).
    pub fn permuted(&self, perm: &[VertexId]) -> Quiver {
        let n = self.vertex_count();
        let mut vertices = vec![Vertex { id: 0, label: None }; n];
        for v in &self.vertices {
            vertices[perm[v.id]] = Vertex {
                id: perm[v.id],
                label: v.label.clone(),
            };
        }
        let mut arrows: Vec<Arrow> = self
            .arrows
            .iter()
            .map(|a| Arrow {
                name: a.name.clone(),
                source: perm[a.source],
                target: perm[a.target],
            })
            .collect();
        arrows.sort_by_key(|a| (a.source, a.target));
        Quiver { vertices, arrows }
    }

    /// Copy with arrows renamed `a{i}_{j}_{k}` and labels dropped.
    pub fn with_generated_names(&self) -> Quiver {
        let m = self.arrow_counts();
        let n = self.vertex_count();
        let mut q = Quiver::with_vertices(n);
        q.arrows = generated_arrows(n, |i, j| m[i][j]);
        q
    }
}

fn generated_arrows(n: usize, count: impl Fn(usize, usize) -> usize) -> Vec<Arrow> {
    let mut arrows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..count(i, j) {
                arrows.push(Arrow {
                    name: format!("a{i}_{j}_{k}"),
                    source: i,
                    target: j,
                });
            }
        }
    }
    arrows
}

/// Skew-symmetric integer matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExchangeMatrix {
    pub b: Vec<Vec<i64>>,
}

impl ExchangeMatrix {
    pub fn new(b: Vec<Vec<i64>>) -> Result<Self, QuiverError> {
        let m = ExchangeMatrix { b };
        m.check_skew()?;
        Ok(m)
    }

    pub fn zero(n: usize) -> Self {
        ExchangeMatrix {
            b: vec![vec![0; n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.b[i][j]
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.b.iter().flatten().map(|x| x.abs()).max().unwrap_or(0)
    }

    fn check_skew(&self) -> Result<(), QuiverError> {
        let n = self.b.len();
        for (i, row) in self.b.iter().enumerate() {
            if row.len() != n {
                return Err(QuiverError::NotSquare);
            }
            if row[i] != 0 {
                return Err(QuiverError::NotSkewSymmetric { i, j: i });
            }
            if let Some(j) = (i + 1..n).find(|&j| row[j] != -self.b[j][i]) {
                return Err(QuiverError::NotSkewSymmetric { i, j });
            }
        }
        Ok(())
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.b {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "[{}]", cells.join(""))?;
        }
        Ok(())
    }
}

//! Triangulations of a convex polygon as a model for type A.
//!
//! Polygon vertices are `0..m` in counterclockwise order. A triangulation of
//! the `(n + 3)`-gon has `n` diagonals and its quiver is of type `A_n`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::TriangulationError;
use crate::quiver::Quiver;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Diagonal {
    lo: usize,
    hi: usize,
}

impl Diagonal {
    pub fn new(m: usize, i: usize, j: usize) -> Result<Self, TriangulationError> {
        let (lo, hi) = (i.min(j), i.max(j));
        if hi >= m || hi - lo < 2 || hi - lo == m - 1 {
            return Err(TriangulationError::NotADiagonal { m, i, j });
        }
        Ok(Diagonal { lo, hi })
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    fn has_endpoint(&self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

fn check_size(m: usize) -> Result<(), TriangulationError> {
    if m < 4 {
        Err(TriangulationError::TooSmall(m))
    } else {
        Ok(())
    }
}

/// All diagonals of the `m`-gon in sorted order.
pub fn diagonals_of(m: usize) -> Result<Vec<Diagonal>, TriangulationError> {
    check_size(m)?;
    Ok((0..m)
        .flat_map(|i| (i + 2..m).map(move |j| (i, j)))
        .filter_map(|(i, j)| Diagonal::new(m, i, j).ok())
        .collect())
}

/// True iff the open segments meet, i.e. the endpoints strictly interleave.
pub fn crossing(d1: &Diagonal, d2: &Diagonal) -> bool {
    let inside = |v: usize| d1.lo < v && v < d1.hi;
    let shared = d1.has_endpoint(d2.lo) || d1.has_endpoint(d2.hi);
    !shared && inside(d2.lo) != inside(d2.hi)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangulation {
    m: usize,
    diagonals: Vec<Diagonal>,
}

impl Triangulation {
    /// Checks the diagonal count and that no two diagonals cross.
    pub fn new(
        m: usize,
        diagonals: impl IntoIterator<Item = Diagonal>,
    ) -> Result<Self, TriangulationError> {
        check_size(m)?;
        let set: BTreeSet<Diagonal> = diagonals.into_iter().collect();
        let diagonals: Vec<Diagonal> = set.into_iter().collect();
        for d in &diagonals {
            Diagonal::new(m, d.lo, d.hi)?;
        }
        let crossing_pair = diagonals
            .iter()
            .enumerate()
            .any(|(i, a)| diagonals[i + 1..].iter().any(|b| crossing(a, b)));
        if diagonals.len() != m - 3 || crossing_pair {
            let (i, j) = diagonals.first().map(|d| d.endpoints()).unwrap_or((0, 0));
            return Err(TriangulationError::NotADiagonal { m, i, j });
        }
        Ok(Triangulation { m, diagonals })
    }

    /// The fan of all diagonals at polygon vertex `v`.
    pub fn fan(m: usize, v: usize) -> Result<Self, TriangulationError> {
        check_size(m)?;
        let ds = (2..m - 1)
            .map(|k| Diagonal::new(m, v, (v + k) % m))
            .collect::<Result<Vec<_>, _>>()?;
        Triangulation::new(m, ds)
    }

    pub fn polygon_size(&self) -> usize {
        self.m
    }

    pub fn diagonals(&self) -> &[Diagonal] {
        &self.diagonals
    }

    pub fn contains(&self, d: &Diagonal) -> bool {
        self.diagonals.binary_search(d).is_ok()
    }

    fn is_edge(&self, i: usize, j: usize) -> bool {
        let (lo, hi) = (i.min(j), i.max(j));
        hi - lo == 1 || hi - lo == self.m - 1 || self.contains(&Diagonal { lo, hi })
    }

    /// Triangles `(a, b, c)` with `a < b < c`.
    pub fn triangles(&self) -> Vec<(usize, usize, usize)> {
        let m = self.m;
        let mut out = Vec::with_capacity(m - 2);
        for a in 0..m {
            for b in a + 1..m {
                if !self.is_edge(a, b) {
                    continue;
                }
                for c in b + 1..m {
                    if self.is_edge(b, c) && self.is_edge(a, c) {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.diagonals.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// All triangulations of the `m`-gon, sorted.
pub fn enumerate_triangulations(m: usize) -> Result<Vec<Triangulation>, TriangulationError> {
    check_size(m)?;
    let mut out: Vec<Triangulation> = sub_triangulations(0, m - 1, m)
        .into_iter()
        .map(|mut ds| {
            ds.sort();
            Triangulation { m, diagonals: ds }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Triangulations of the sub-polygon `i, i+1, ..., j`, as lists of the
/// diagonals strictly inside it.
fn sub_triangulations(i: usize, j: usize, m: usize) -> Vec<Vec<Diagonal>> {
    if j - i < 2 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for k in i + 1..j {
        let left = sub_triangulations(i, k, m);
        let right = sub_triangulations(k, j, m);
        for l in &left {
            for r in &right {
                let mut ds = l.clone();
                ds.extend(r.iter().copied());
                ds.extend(Diagonal::new(m, i, k).ok());
                ds.extend(Diagonal::new(m, k, j).ok());
                out.push(ds);
            }
        }
    }
    out
}

/// One vertex per diagonal (in sorted order, labelled `i-j`); inside every
/// triangle `a < b < c` the arrows run `ab -> bc -> ca -> ab` between sides
/// that are diagonals.
pub fn quiver_of(t: &Triangulation) -> Quiver {
    let mut q = Quiver::with_labels(t.diagonals.iter().map(ToString::to_string));
    let index = |i: usize, j: usize| {
        let (lo, hi) = (i.min(j), i.max(j));
        t.diagonals.binary_search(&Diagonal { lo, hi }).ok()
    };
    let mut k = 0;
    for (a, b, c) in t.triangles() {
        let sides = [index(a, b), index(b, c), index(c, a)];
        for s in 0..3 {
            if let (Some(x), Some(y)) = (sides[s], sides[(s + 1) % 3]) {
                q.add_arrow(format!("x{k}"), x, y)
                    .expect("triangle sides are distinct diagonals");
                k += 1;
            }
        }
    }
    q
}

/// Replaces `d` by the other diagonal of the quadrilateral formed by its two
/// adjacent triangles.
pub fn flip(t: &Triangulation, d: &Diagonal) -> Result<Triangulation, TriangulationError> {
    if !t.contains(d) {
        return Err(TriangulationError::NotInTriangulation(d.to_string()));
    }
    let apexes: Vec<usize> = (0..t.m)
        .filter(|&v| !d.has_endpoint(v) && t.is_edge(d.lo, v) && t.is_edge(v, d.hi))
        .collect();
    debug_assert_eq!(apexes.len(), 2);
    let new = Diagonal::new(t.m, apexes[0], apexes[1])?;
    let mut diagonals: Vec<Diagonal> = t.diagonals.iter().copied().filter(|x| x != d).collect();
    diagonals.push(new);
    diagonals.sort();
    Ok(Triangulation { m: t.m, diagonals })
}

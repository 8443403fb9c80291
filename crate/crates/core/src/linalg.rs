//! Exact row reduction over the rationals on sparse vectors.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Coeff = BigRational;

/// Sparse vector keyed by an ordered basis.
pub type SparseVec<K> = BTreeMap<K, Coeff>;

pub fn add_scaled<K: Ord + Clone>(acc: &mut SparseVec<K>, v: &SparseVec<K>, scale: &Coeff) {
    for (k, c) in v {
        let e = acc.entry(k.clone()).or_insert_with(Coeff::zero);
        *e += c * scale;
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

/// Span of a growing set of sparse vectors. Every stored row has a distinct
/// pivot, its smallest key, with coefficient one.
#[derive(Debug, Clone)]
pub struct RowSpace<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for RowSpace<K> {
    fn default() -> Self {
        RowSpace {
            rows: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> RowSpace<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after eliminating every pivot key.
    pub fn reduce(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => v.keys().find(|k| self.rows.contains_key(*k)).cloned(),
                Some(c) => v
                    .range((
                        std::ops::Bound::Excluded(c.clone()),
                        std::ops::Bound::Unbounded,
                    ))
                    .map(|(k, _)| k)
                    .find(|k| self.rows.contains_key(*k))
                    .cloned(),
            };
            let Some(k) = next else {
                return v;
            };
            let c = v[&k].clone();
            add_scaled(&mut v, &self.rows[&k], &-c);
            cursor = Some(k);
        }
    }

    /// Adds `v` to the span; returns false if it was already in it.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Coeff::one() / lead;
        let row = r.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        self.rows.insert(pivot, row);
        true
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v.clone()).is_empty()
    }
}

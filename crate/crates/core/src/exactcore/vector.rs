//! Sparse rational vectors: sorted `(index, value)` pairs with no stored zeros.

use serde::{Deserialize, Serialize};

use super::Rational;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseVec {
    entries: Vec<(u32, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i as u32, Rational::one())] }
    }

    /// From unsorted pairs; duplicates are summed and zeros dropped.
    pub fn from_pairs(mut pairs: Vec<(usize, Rational)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut entries: Vec<(u32, Rational)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some((j, w)) if *j as usize == i => *w += &v,
                _ => entries.push((i as u32, v)),
            }
        }
        entries.retain(|e| !e.1.is_zero());
        SparseVec { entries }
    }

    /// From pairs already sorted by strictly increasing index with nonzero values.
    pub fn from_sorted(entries: Vec<(u32, Rational)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|e| !e.1.is_zero()));
        SparseVec { entries }
    }

    pub fn from_dense(v: &[Rational]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i as u32, x.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for (i, v) in &self.entries {
            out[*i as usize] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(u32, Rational)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(i, v)| (*i as usize, v))
    }

    pub fn leading(&self) -> Option<(usize, &Rational)> {
        self.entries.first().map(|(i, v)| (*i as usize, v))
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&(i as u32), |e| e.0) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0 as usize)
    }

    pub fn scale(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect() }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Rational, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i >= a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, c * &b[j].1));
                j += 1;
            } else {
                let s = &a[i].1 + &(c * &b[j].1);
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    /// `alpha * self + beta * other` (used by fraction-free elimination).
    pub fn lincomb(&self, alpha: &Rational, beta: &Rational, other: &SparseVec) -> SparseVec {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push((a[i].0, alpha * &a[i].1));
                i += 1;
            } else if i >= a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, beta * &b[j].1));
                j += 1;
            } else {
                let s = &(alpha * &a[i].1) + &(beta * &b[j].1);
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        out.retain(|e| !e.1.is_zero());
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Rational::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&-Rational::one(), other)
    }

    pub fn dot(&self, other: &SparseVec) -> Rational {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut acc = Rational::zero();
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += &(&a[i].1 * &b[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Shifts every index by `offset` (for block assembly).
    pub fn offset(&self, offset: usize) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i + offset as u32, v.clone())).collect() }
    }

    /// Keeps only indices in `[lo, hi)` and re-bases them at zero.
    pub fn slice(&self, lo: usize, hi: usize) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| (*i as usize) >= lo && (*i as usize) < hi)
                .map(|(i, v)| (*i - lo as u32, v.clone()))
                .collect(),
        }
    }

    /// Multiplies through by the lcm of denominators and divides by the content,
    /// returning a primitive integer vector with positive leading entry.
    pub fn primitive(&self) -> SparseVec {
        if self.is_zero() {
            return SparseVec::new();
        }
        let mut l = Rational::one();
        for (_, v) in &self.entries {
            if !v.is_integer() {
                l = l.int_lcm(&Rational::from(v.denom()));
            }
        }
        let mut ints: Vec<(u32, Rational)> = self.entries.iter().map(|(i, v)| (*i, v * &l)).collect();
        let mut g = Rational::zero();
        for (_, v) in &ints {
            g = g.int_gcd(v);
            if g.is_one() {
                break;
            }
        }
        if ints[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for e in ints.iter_mut() {
                e.1 = e.1.int_div_exact(&g);
            }
        }
        SparseVec { entries: ints }
    }

    /// Re-indexes through `map` (old index -> new index); entries mapped to `None` are dropped.
    pub fn reindex(&self, map: &[Option<u32>]) -> SparseVec {
        let pairs: Vec<(usize, Rational)> = self
            .entries
            .iter()
            .filter_map(|(i, v)| map[*i as usize].map(|j| (j as usize, v.clone())))
            .collect();
        SparseVec::from_pairs(pairs)
    }
}

impl FromIterator<(usize, Rational)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Rational)>>(iter: T) -> Self {
        SparseVec::from_pairs(iter.into_iter().collect())
    }
}

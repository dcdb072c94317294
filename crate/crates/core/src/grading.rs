//! Multidegrees in `N^n`, the componentwise order, bounded grids and degree
//! multisets.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `N^n`. The derived `Ord` is lexicographic, which is the fixed
/// linear extension of the componentwise order used everywhere.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree(Vec<u32>);

impl MultiDegree {
    pub fn new(coords: Vec<u32>) -> Self {
        MultiDegree(coords)
    }

    pub fn zero(n: usize) -> Self {
        MultiDegree(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        MultiDegree(vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// `self ≲ other`, componentwise.
    pub fn leq(&self, other: &MultiDegree) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.le_unchecked(other))
    }

    pub(crate) fn le_unchecked(&self, other: &MultiDegree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn comparable(&self, other: &MultiDegree) -> bool {
        self.le_unchecked(other) || other.le_unchecked(self)
    }

    fn check_dim(&self, other: &MultiDegree) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: other.n() });
        }
        Ok(())
    }

    pub fn plus(&self, other: &MultiDegree) -> MultiDegree {
        MultiDegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn step(&self, j: usize) -> MultiDegree {
        let mut c = self.0.clone();
        c[j] += 1;
        MultiDegree(c)
    }

    /// `self - e_S` for the coordinates in the bitmask `subset`, if nonnegative.
    pub fn minus_subset(&self, subset: u32) -> Option<MultiDegree> {
        let mut c = self.0.clone();
        for (i, x) in c.iter_mut().enumerate() {
            if subset >> i & 1 == 1 {
                *x = x.checked_sub(1)?;
            }
        }
        Some(MultiDegree(c))
    }

    pub fn min(&self, other: &MultiDegree) -> MultiDegree {
        MultiDegree(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn max(&self, other: &MultiDegree) -> MultiDegree {
        MultiDegree(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }
}

/// Least upper bound (componentwise maximum).
pub fn join<'a>(us: impl IntoIterator<Item = &'a MultiDegree>) -> Result<MultiDegree> {
    let mut it = us.into_iter();
    let first = it.next().ok_or(Error::EmptyJoin)?.clone();
    it.try_fold(first, |acc, u| {
        acc.check_dim(u)?;
        Ok(MultiDegree::max(&acc, u))
    })
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MultiDegree {
    type Err = Error;

    /// Parses `(a1,a2,...)`; the parentheses are optional.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('(').unwrap_or(t);
        let t = t.strip_suffix(')').unwrap_or(t);
        let coords = t
            .split(',')
            .map(|c| c.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Syntax { line: 0, message: format!("bad multidegree `{s}`") })?;
        if coords.is_empty() {
            return Err(Error::Syntax { line: 0, message: "empty multidegree".into() });
        }
        Ok(MultiDegree(coords))
    }
}

/// The box `{v : v ≲ bound}`, indexed in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    bound: MultiDegree,
    strides: Vec<usize>,
    size: usize,
}

impl Grid {
    pub fn new(bound: MultiDegree) -> Self {
        let n = bound.n();
        let mut strides = vec![1; n];
        let mut size = 1usize;
        for i in (0..n).rev() {
            strides[i] = size;
            size *= bound.get(i) as usize + 1;
        }
        Grid { bound, strides, size }
    }

    pub fn bound(&self) -> &MultiDegree {
        &self.bound
    }

    pub fn n(&self) -> usize {
        self.bound.n()
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains(&self, v: &MultiDegree) -> bool {
        v.le_unchecked(&self.bound)
    }

    pub fn index(&self, v: &MultiDegree) -> usize {
        debug_assert!(self.contains(v), "{v} outside grid {}", self.bound);
        v.coords().iter().zip(&self.strides).map(|(&c, &s)| c as usize * s).sum()
    }

    pub fn point(&self, mut idx: usize) -> MultiDegree {
        let mut c = vec![0; self.n()];
        for (i, &s) in self.strides.iter().enumerate() {
            c[i] = (idx / s) as u32;
            idx %= s;
        }
        MultiDegree(c)
    }

    /// Lexicographic traversal; every point comes after all points below it.
    pub fn iter(&self) -> impl Iterator<Item = MultiDegree> + '_ {
        (0..self.size).map(|i| self.point(i))
    }

    /// Clamps `v` into the grid (the module is constant beyond the bound).
    pub fn clamp(&self, v: &MultiDegree) -> MultiDegree {
        v.min(&self.bound)
    }
}

/// `grid(w)`: all `v ≲ w` in lexicographic order.
pub fn grid(w: &MultiDegree) -> Vec<MultiDegree> {
    Grid::new(w.clone()).iter().collect()
}

/// Multiset of multidegrees with positive multiplicities.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeMultiset {
    entries: BTreeMap<MultiDegree, usize>,
}

impl DegreeMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (MultiDegree, usize)>) -> Self {
        let mut m = Self::new();
        for (d, k) in pairs {
            m.add(d, k);
        }
        m
    }

    pub fn add(&mut self, d: MultiDegree, k: usize) {
        if k > 0 {
            *self.entries.entry(d).or_insert(0) += k;
        }
    }

    pub fn multiplicity(&self, d: &MultiDegree) -> usize {
        self.entries.get(d).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total count with multiplicity.
    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiDegree, usize)> {
        self.entries.iter().map(|(d, &k)| (d, k))
    }

    /// Elements with multiplicity, in sorted order.
    pub fn expanded(&self) -> Vec<MultiDegree> {
        self.iter().flat_map(|(d, k)| std::iter::repeat_n(d.clone(), k)).collect()
    }

    /// `#{u in self : u ≲ v}` with multiplicity, i.e. `dim F(self)_v`.
    pub fn count_below(&self, v: &MultiDegree) -> usize {
        self.iter().filter(|(u, _)| u.le_unchecked(v)).map(|(_, k)| k).sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = &MultiDegree> {
        self.entries.keys()
    }

    pub fn pairs(&self) -> Vec<(MultiDegree, usize)> {
        self.iter().map(|(d, k)| (d.clone(), k)).collect()
    }
}

impl fmt::Display for DegreeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (d, k)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}:{k}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for DegreeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for DegreeMultiset {
    type Err = Error;

    /// Parses the display form `{(2,3):1,(3,2):1}`; braces optional, a
    /// missing `:k` means multiplicity one.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('{').unwrap_or(t);
        let t = t.strip_suffix('}').unwrap_or(t).trim();
        let mut out = DegreeMultiset::new();
        let mut rest = t;
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| bad_multiset(s))?;
            let close = rest.find(')').ok_or_else(|| bad_multiset(s))?;
            if open > close {
                return Err(bad_multiset(s));
            }
            let deg: MultiDegree = rest[open..=close].parse()?;
            rest = rest[close + 1..].trim_start();
            let mut k = 1;
            if let Some(r) = rest.strip_prefix(':') {
                let end = r.find(',').unwrap_or(r.len());
                k = r[..end].trim().parse().map_err(|_| bad_multiset(s))?;
                rest = &r[end..];
            }
            rest = rest.trim_start().strip_prefix(',').unwrap_or(rest).trim_start();
            out.add(deg, k);
        }
        Ok(out)
    }
}

fn bad_multiset(s: &str) -> Error {
    Error::Syntax { line: 0, message: format!("bad degree multiset `{s}`") }
}

impl Serialize for DegreeMultiset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DegreeMultiset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<(MultiDegree, usize)>::deserialize(d)?;
        Ok(DegreeMultiset::from_pairs(pairs))
    }
}

/// Bitmask subsets of `{0..n}` of size `k`, ordered lexicographically by
/// their sorted elements.
pub fn subsets(n: usize, k: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, k: usize, mask: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(mask);
            return;
        }
        for i in start..n {
            rec(i + 1, n, k - 1, mask | 1 << i, out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, 0, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(c: &[u32]) -> MultiDegree {
        MultiDegree::new(c.to_vec())
    }

    #[test]
    fn leq_examples() {
        assert!(d(&[0, 1]).leq(&d(&[1, 1])).unwrap());
        assert!(!d(&[0, 1]).leq(&d(&[1, 0])).unwrap());
        assert!(!d(&[1, 0]).leq(&d(&[0, 1])).unwrap());
        assert!(d(&[2, 3]).leq(&d(&[2, 3])).unwrap());
        assert!(matches!(d(&[0]).leq(&d(&[0, 0])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn join_examples() {
        let set = [d(&[0, 3]), d(&[1, 2]), d(&[2, 1]), d(&[3, 0])];
        assert_eq!(join(&set).unwrap(), d(&[3, 3]));
        assert_eq!(join(&[d(&[1, 1])]).unwrap(), d(&[1, 1]));
        assert_eq!(join(&[d(&[0, 1]), d(&[1, 0])]).unwrap(), d(&[1, 1]));
        assert!(matches!(join(&[]), Err(Error::EmptyJoin)));
    }

    #[test]
    fn grid_examples() {
        assert_eq!(grid(&d(&[1, 1])), vec![d(&[0, 0]), d(&[0, 1]), d(&[1, 0]), d(&[1, 1])]);
        assert_eq!(grid(&d(&[0, 0])), vec![d(&[0, 0])]);
        let g = grid(&d(&[2, 1]));
        assert_eq!(g.len(), 6);
        assert_eq!(g.last(), Some(&d(&[2, 1])));
    }

    #[test]
    fn multiset_display_and_parse() {
        let m = DegreeMultiset::from_pairs([(d(&[3, 2]), 1), (d(&[2, 3]), 1)]);
        assert_eq!(m.to_string(), "{(2,3):1,(3,2):1}");
        assert_eq!(m.to_string().parse::<DegreeMultiset>().unwrap(), m);
        let n1: DegreeMultiset = "(0):2,(2)".parse().unwrap();
        assert_eq!(n1.total(), 3);
        assert_eq!("{}".parse::<DegreeMultiset>().unwrap(), DegreeMultiset::new());
        assert_eq!(serde_json::to_string(&m).unwrap(), "[[[2,3],1],[[3,2],1]]");
    }

    #[test]
    fn multiset_equality_is_order_insensitive() {
        let a = DegreeMultiset::from_pairs([(d(&[1]), 1), (d(&[0]), 2)]);
        let b = DegreeMultiset::from_pairs([(d(&[0]), 1), (d(&[1]), 1), (d(&[0]), 1)]);
        assert_eq!(a, b);
        let c = DegreeMultiset::from_pairs([(d(&[0]), 1), (d(&[1]), 1)]);
        assert_ne!(a, c);
        assert_eq!(DegreeMultiset::from_pairs([(d(&[0]), 0)]), DegreeMultiset::new());
    }

    #[test]
    fn subset_order() {
        assert_eq!(subsets(3, 2), vec![0b011, 0b101, 0b110]);
        assert_eq!(subsets(2, 0), vec![0]);
        assert!(subsets(2, 3).is_empty());
    }

    fn arb_deg() -> impl Strategy<Value = MultiDegree> {
        proptest::collection::vec(0u32..6, 3).prop_map(MultiDegree::new)
    }

    proptest! {
        #[test]
        fn join_laws(u in arb_deg(), v in arb_deg(), w in arb_deg()) {
            let uv = join([&u, &v]).unwrap();
            prop_assert_eq!(join([&u, &u]).unwrap(), u.clone());
            prop_assert_eq!(uv.clone(), join([&v, &u]).unwrap());
            prop_assert_eq!(join([&uv, &w]).unwrap(), join([&u, &join([&v, &w]).unwrap()]).unwrap());
            prop_assert!(u.leq(&uv).unwrap());
        }

        #[test]
        fn grid_respects_order(w in proptest::collection::vec(0u32..3, 2..4)) {
            let g = grid(&MultiDegree::new(w));
            for (i, u) in g.iter().enumerate() {
                for (j, v) in g.iter().enumerate() {
                    if u != v && u.le_unchecked(v) {
                        prop_assert!(i < j);
                    }
                }
            }
        }
    }
}

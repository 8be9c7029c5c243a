//! Finite marked subsets of `[0, 1]` and standard dyadic partitions.
//!
//! A [`MarkedSet`] is a finite set of points of `[0, 1]` containing both
//! endpoints. A [`DyadicPartition`] is a marked set whose consecutive points
//! are `p/2^q, (p+1)/2^q`, i.e. the leaves of a full binary subdivision tree
//! of `[0, 1]`. [`t_of`] sends a marked set to the largest dyadic partition
//! whose half-open leaves each contain one of its points.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::ExactNumber;

/// Strictly increasing points of `[0, 1]`, starting at 0 and ending at 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<ExactNumber>", into = "Vec<ExactNumber>")]
pub struct MarkedSet {
    points: Vec<ExactNumber>,
}

impl MarkedSet {
    /// Validates an already sorted point list.
    pub fn new(points: Vec<ExactNumber>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidMarkedSet(format!(
                "needs at least 0 and 1, got {} point(s)",
                points.len()
            )));
        }
        if !points[0].is_zero() {
            return Err(Error::InvalidMarkedSet(format!(
                "first point is {}, not 0",
                points[0]
            )));
        }
        let last = &points[points.len() - 1];
        if !last.is_one() {
            return Err(Error::InvalidMarkedSet(format!(
                "last point is {last}, not 1"
            )));
        }
        if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMarkedSet(format!(
                "points not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        Ok(MarkedSet { points })
    }

    /// Sorts, deduplicates and adds the endpoints. Points must lie in `[0, 1]`.
    pub fn from_points(points: impl IntoIterator<Item = ExactNumber>) -> Result<Self> {
        let mut points: Vec<ExactNumber> = points.into_iter().collect();
        if let Some(bad) = points.iter().find(|x| !x.in_unit_interval()) {
            return Err(Error::OutOfRange(bad.to_string()));
        }
        points.push(ExactNumber::zero());
        points.push(ExactNumber::one());
        points.sort();
        points.dedup();
        Ok(MarkedSet { points })
    }

    /// Parses point strings, e.g. `["0", "1/2", "1"]`.
    pub fn parse<S: AsRef<str>>(points: &[S]) -> Result<Self> {
        let pts = points
            .iter()
            .map(|s| ExactNumber::parse_coordinate(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        MarkedSet::new(pts)
    }

    pub(crate) fn new_unchecked(points: Vec<ExactNumber>) -> Self {
        debug_assert!(MarkedSet::new(points.clone()).is_ok());
        MarkedSet { points }
    }

    pub fn points(&self) -> &[ExactNumber] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: &ExactNumber) -> bool {
        self.points.binary_search(x).is_ok()
    }

    /// Subset test by merge walk.
    pub fn is_subset_of(&self, other: &MarkedSet) -> bool {
        let mut it = other.points.iter();
        'outer: for x in &self.points {
            for y in it.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn gaps(&self) -> impl Iterator<Item = (&ExactNumber, &ExactNumber)> {
        self.points.windows(2).map(|w| (&w[0], &w[1]))
    }

    /// Number of points lying in the closed interval `[lo, hi]`.
    pub fn count_in_closed(&self, lo: &ExactNumber, hi: &ExactNumber) -> usize {
        let start = self.points.partition_point(|x| x < lo);
        let end = self.points.partition_point(|x| x <= hi);
        end.saturating_sub(start)
    }

    pub fn into_points(self) -> Vec<ExactNumber> {
        self.points
    }
}

impl TryFrom<Vec<ExactNumber>> for MarkedSet {
    type Error = Error;

    fn try_from(points: Vec<ExactNumber>) -> Result<Self> {
        MarkedSet::new(points)
    }
}

impl From<MarkedSet> for Vec<ExactNumber> {
    fn from(x: MarkedSet) -> Self {
        x.points
    }
}

impl fmt::Debug for MarkedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.points.iter()).finish()
    }
}

impl fmt::Display for MarkedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// A marked set whose consecutive points are `p/2^q` and `(p+1)/2^q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<ExactNumber>", into = "Vec<ExactNumber>")]
pub struct DyadicPartition(MarkedSet);

impl DyadicPartition {
    pub fn new(set: MarkedSet) -> Result<Self> {
        if is_standard(&set) {
            Ok(DyadicPartition(set))
        } else {
            Err(Error::NotStandard(set.to_string()))
        }
    }

    pub fn parse<S: AsRef<str>>(points: &[S]) -> Result<Self> {
        DyadicPartition::new(MarkedSet::parse(points)?)
    }

    pub(crate) fn new_unchecked(points: Vec<ExactNumber>) -> Self {
        let set = MarkedSet::new_unchecked(points);
        debug_assert!(is_standard(&set), "not standard: {set}");
        DyadicPartition(set)
    }

    /// The trivial partition `{0, 1}`.
    pub fn trivial() -> Self {
        DyadicPartition(MarkedSet {
            points: vec![ExactNumber::zero(), ExactNumber::one()],
        })
    }

    /// All `k/2^depth`.
    pub fn uniform(depth: u32) -> Self {
        let size = 1i64 << depth;
        let points = (0..=size)
            .map(|k| ExactNumber::dyadic(k, depth as u64))
            .collect();
        DyadicPartition::new_unchecked(points)
    }

    pub fn as_marked(&self) -> &MarkedSet {
        &self.0
    }

    pub fn into_marked(self) -> MarkedSet {
        self.0
    }

    pub fn points(&self) -> &[ExactNumber] {
        self.0.points()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn leaves(&self) -> impl Iterator<Item = (&ExactNumber, &ExactNumber)> {
        self.0.gaps()
    }

    pub fn is_subset_of(&self, other: &DyadicPartition) -> bool {
        self.0.is_subset_of(&other.0)
    }

    /// Depth of the deepest leaf in the subdivision tree.
    pub fn depth(&self) -> u64 {
        self.leaves()
            .map(|(a, b)| (b - a).log2_exact().map_or(0, |k| (-k) as u64))
            .max()
            .unwrap_or(0)
    }

    /// Splits the leaf with index `leaf` at its midpoint.
    pub fn split_leaf(&self, leaf: usize) -> DyadicPartition {
        let pts = self.points();
        assert!(leaf + 1 < pts.len(), "leaf index {leaf} out of range");
        let mid = pts[leaf].midpoint(&pts[leaf + 1]);
        let mut out = Vec::with_capacity(pts.len() + 1);
        out.extend_from_slice(&pts[..=leaf]);
        out.push(mid);
        out.extend_from_slice(&pts[leaf + 1..]);
        DyadicPartition::new_unchecked(out)
    }
}

impl TryFrom<Vec<ExactNumber>> for DyadicPartition {
    type Error = Error;

    fn try_from(points: Vec<ExactNumber>) -> Result<Self> {
        DyadicPartition::new(MarkedSet::new(points)?)
    }
}

impl From<DyadicPartition> for Vec<ExactNumber> {
    fn from(t: DyadicPartition) -> Self {
        t.0.points
    }
}

impl fmt::Debug for DyadicPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for DyadicPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Largest gap between consecutive points.
pub fn mesh(x: &MarkedSet) -> ExactNumber {
    x.gaps()
        .map(|(a, b)| b - a)
        .max()
        .expect("a marked set has at least one gap")
}

/// Whether `[a, b]` is a standard dyadic interval `[p/2^q, (p+1)/2^q]`.
pub fn is_standard_interval(a: &ExactNumber, b: &ExactNumber) -> bool {
    let len = b - a;
    match len.log2_exact() {
        Some(k) if k <= 0 => a.scale_pow2(-k).is_integer(),
        _ => false,
    }
}

pub fn is_standard(x: &MarkedSet) -> bool {
    x.gaps().all(|(a, b)| is_standard_interval(a, b))
}

/// `I_n = {1 - 2^{-i} : 0 <= i <= n + 1} ∪ {1}`; it has `n + 3` points.
pub fn i_n(n: u32) -> DyadicPartition {
    let mut points: Vec<ExactNumber> = (0..=n as u64 + 1)
        .map(ExactNumber::one_minus_pow2)
        .collect();
    points.push(ExactNumber::one());
    DyadicPartition::new_unchecked(points)
}

/// True iff every half-open leaf `[s, t)` of `t` contains a point of `x`.
pub fn satisfies_leaf_condition(t: &DyadicPartition, x: &MarkedSet) -> bool {
    let xs = x.points();
    t.leaves().all(|(s, e)| {
        let i = xs.partition_point(|p| p < s);
        i < xs.len() && &xs[i] < e
    })
}

/// The condition as literally stated over all pairs `s < t` of `t`.
pub fn satisfies_pair_condition(t: &DyadicPartition, x: &MarkedSet) -> bool {
    let xs = x.points();
    let ts = t.points();
    ts.iter().enumerate().all(|(i, s)| {
        ts[i + 1..]
            .iter()
            .all(|e| xs.iter().any(|p| s <= p && p < e))
    })
}

/// The maximal standard dyadic partition whose half-open leaves each contain
/// a point of `x`.
///
/// Top-down greedy: a leaf `[a, b)` is split at its midpoint iff both halves
/// contain a point of `x`. The point `1` never witnesses a leaf.
pub fn t_of(x: &MarkedSet) -> DyadicPartition {
    let xs = x.points();
    let mut out = vec![ExactNumber::zero()];
    // (a, b, lo, hi): leaf [a, b) whose points are xs[lo..hi]
    let mut stack = vec![(
        ExactNumber::zero(),
        ExactNumber::one(),
        0usize,
        xs.len() - 1,
    )];
    while let Some((a, b, lo, hi)) = stack.pop() {
        let mid = a.midpoint(&b);
        let k = lo + xs[lo..hi].partition_point(|p| p < &mid);
        if lo < k && k < hi {
            stack.push((mid.clone(), b, k, hi));
            stack.push((a, mid, lo, k));
        } else {
            out.push(b);
        }
    }
    DyadicPartition::new_unchecked(out)
}

/// `s ∪ t`, which is again standard.
pub fn common_refinement(s: &DyadicPartition, t: &DyadicPartition) -> DyadicPartition {
    let (a, b) = (s.points(), t.points());
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    DyadicPartition::new_unchecked(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(pts: &[&str]) -> MarkedSet {
        MarkedSet::parse(pts).unwrap()
    }

    fn dp(pts: &[&str]) -> DyadicPartition {
        DyadicPartition::parse(pts).unwrap()
    }

    fn grid16() -> MarkedSet {
        DyadicPartition::uniform(4).into_marked()
    }

    #[test]
    fn marked_set_validation() {
        assert!(MarkedSet::parse(&["0", "1"]).is_ok());
        assert!(matches!(
            MarkedSet::parse(&["0"]),
            Err(Error::InvalidMarkedSet(_))
        ));
        assert!(matches!(
            MarkedSet::parse(&["1/2", "1"]),
            Err(Error::InvalidMarkedSet(_))
        ));
        assert!(matches!(
            MarkedSet::parse(&["0", "1/2"]),
            Err(Error::InvalidMarkedSet(_))
        ));
        assert!(matches!(
            MarkedSet::parse(&["0", "1/2", "1/2", "1"]),
            Err(Error::InvalidMarkedSet(_))
        ));
        assert!(matches!(
            MarkedSet::parse(&["0", "3/4", "1/2", "1"]),
            Err(Error::InvalidMarkedSet(_))
        ));
        assert!(matches!(
            MarkedSet::parse(&["0", "3/2", "1"]),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn mesh_examples() {
        assert_eq!(mesh(&ms(&["0", "1/2", "1"])), "1/2".parse().unwrap());
        assert_eq!(mesh(&ms(&["0", "7/8", "1"])), "7/8".parse().unwrap());
        assert_eq!(mesh(&grid16()), "1/16".parse().unwrap());
    }

    #[test]
    fn standard_examples() {
        assert!(is_standard(&ms(&["0", "1/2", "3/4", "1"])));
        assert!(!is_standard(&ms(&["0", "1/4", "3/4", "1"])));
        assert!(!is_standard(&ms(&["0", "1/3", "1"])));
        assert!(is_standard(&ms(&["0", "1"])));
        // right length, wrong alignment
        assert!(!is_standard(&ms(&["0", "1/4", "1/2", "5/8", "7/8", "1"])));
    }

    #[test]
    fn i_n_examples() {
        assert_eq!(i_n(0), dp(&["0", "1/2", "1"]));
        assert_eq!(i_n(1), dp(&["0", "1/2", "3/4", "1"]));
        assert_eq!(i_n(2), dp(&["0", "1/2", "3/4", "7/8", "1"]));
        for n in 0..=64 {
            let p = i_n(n);
            assert_eq!(p.len(), n as usize + 3);
            assert!(is_standard(p.as_marked()));
        }
    }

    #[test]
    fn t_of_examples() {
        assert_eq!(t_of(&ms(&["0", "1"])), DyadicPartition::trivial());
        assert_eq!(t_of(&ms(&["0", "1/2", "1"])), dp(&["0", "1/2", "1"]));
        assert_eq!(t_of(&grid16()), DyadicPartition::uniform(4));
        let x = ms(&["0", "1/3", "2/5", "3/4", "1"]);
        let t = t_of(&x);
        assert_eq!(t, dp(&["0", "1/4", "3/8", "1/2", "1"]));
        assert!(satisfies_leaf_condition(&t, &x));
        assert!(satisfies_pair_condition(&t, &x));
        // nothing in [1/2, 1), so the root never splits
        assert_eq!(
            t_of(&ms(&["0", "1/3", "2/5", "1"])),
            DyadicPartition::trivial()
        );
    }

    #[test]
    fn t_of_handles_deep_trees() {
        let x = MarkedSet::from_points((1..=200).map(|j| ExactNumber::dyadic(1, j))).unwrap();
        let t = t_of(&x);
        assert!(satisfies_leaf_condition(&t, &x));
        assert_eq!(t.depth(), 200);
        assert_eq!(t.len(), 202);
    }

    #[test]
    fn common_refinement_examples() {
        let half = dp(&["0", "1/2", "1"]);
        assert_eq!(common_refinement(&half, &half), half);
        let x0d = dp(&["0", "1/2", "3/4", "1"]);
        assert_eq!(common_refinement(&half, &x0d), x0d);
        let u = common_refinement(&dp(&["0", "1/4", "1/2", "1"]), &x0d);
        assert_eq!(u, dp(&["0", "1/4", "1/2", "3/4", "1"]));
        assert!(is_standard(u.as_marked()));
    }

    #[test]
    fn subset_and_counting() {
        let a = ms(&["0", "1/2", "1"]);
        let b = ms(&["0", "1/4", "1/2", "1"]);
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert!(!ms(&["0", "1/3", "1"]).is_subset_of(&b));
        let lo = "1/4".parse().unwrap();
        let hi = "1/2".parse().unwrap();
        assert_eq!(b.count_in_closed(&lo, &hi), 2);
    }

    #[test]
    fn json_shape() {
        let x = ms(&["0", "1/2", "1"]);
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"["0","1/2","1"]"#);
        let back: DyadicPartition = serde_json::from_str(r#"["0","1/2","1"]"#).unwrap();
        assert_eq!(back.as_marked(), &x);
        assert!(serde_json::from_str::<DyadicPartition>(r#"["0","1/3","1"]"#).is_err());
        assert!(serde_json::from_str::<MarkedSet>(r#"["0","1/2"]"#).is_err());
    }
}

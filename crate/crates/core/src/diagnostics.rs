//! Diagnostics around two known constraints on Følner sets and invariant
//! measures for F, plus word-metric balls.
//!
//! * [`tower`] / [`tower_check`]: a `C^{-n}`-Følner set must have at least
//!   `exp_n(0)` elements, where `exp_0(m) = m`, `exp_{n+1}(m) = 2^{exp_n(m)}`.
//!   The constant `C` is only known to exist, so callers supply it.
//! * [`monotonicity_mass`] / [`invariance_defect`]: for a finitely supported
//!   measure on standard partitions, how much mass sees strictly monotone
//!   counts on an interval chain, and how far the measure is from invariant.
//!
//! None of these certify anything; a failed [`TowerVerdict`] only flags a set
//! that contradicts the growth bound for the chosen `C`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::ExactNumber;
use crate::felement::{
    act_partition_with, compose, to_minimal_pair, CanonicalKey, FElement, Generator, Word,
};
use crate::folner::ElementSet;
use crate::par;
use crate::partition::DyadicPartition;

pub const MAX_TOWER_HEIGHT: u32 = 6;
pub const DEFAULT_MAX_RADIUS: u32 = 8;

/// `exp_n(0)`: 0, 1, 2, 4, 16, 65536, 2^65536.
pub fn tower(n: u32) -> Result<BigUint> {
    if n > MAX_TOWER_HEIGHT {
        return Err(Error::TowerTooTall(n));
    }
    let mut v = BigUint::zero();
    for _ in 0..n {
        let shift = usize::try_from(&v).expect("bounded by 65536");
        v = BigUint::one() << shift;
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerVerdict {
    /// Largest `n` with `C^{-n} >= defect` (0 if there is none).
    pub n: u64,
    /// `exp_n(0)`; when `n > 6` this is `exp_6(0)` and `bound_truncated` is set.
    #[serde(serialize_with = "serialize_biguint")]
    pub bound: BigUint,
    pub bound_truncated: bool,
    pub observed_size: u64,
    pub consistent: bool,
}

fn serialize_biguint<S: serde::Serializer>(
    v: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

// n beyond this is irrelevant: exp_7(0) already exceeds any u64 size
const TOWER_CHECK_HEIGHT_CAP: u64 = 4096;

/// Compares an observed Følner set against the tower bound for constant `c`.
pub fn tower_check(size: u64, defect: &ExactNumber, c: &ExactNumber) -> Result<TowerVerdict> {
    if c <= &ExactNumber::one() {
        return Err(Error::InvalidConstant(format!("C must exceed 1, got {c}")));
    }
    if defect <= &ExactNumber::zero() {
        return Err(Error::OutOfRange(format!(
            "defect must be positive, got {defect}"
        )));
    }
    // C^{-n} >= defect  <=>  defect * C^n <= 1
    let mut n = 0u64;
    let mut scaled = defect * c;
    while scaled <= ExactNumber::one() && n < TOWER_CHECK_HEIGHT_CAP {
        n += 1;
        scaled = &scaled * c;
    }
    let bound_truncated = n > MAX_TOWER_HEIGHT as u64;
    let bound = tower(n.min(MAX_TOWER_HEIGHT as u64) as u32)?;
    let consistent = !bound_truncated && BigUint::from(size) >= bound;
    Ok(TowerVerdict {
        n,
        bound,
        bound_truncated,
        observed_size: size,
        consistent,
    })
}

/// A probability measure with finite support on standard partitions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<MeasureEntry>", into = "Vec<MeasureEntry>")]
pub struct FiniteMeasure {
    weights: BTreeMap<DyadicPartition, ExactNumber>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasureEntry {
    pub partition: DyadicPartition,
    pub weight: ExactNumber,
}

impl FiniteMeasure {
    /// Weights must be positive and sum to exactly 1; support points must be
    /// distinct.
    pub fn new(entries: impl IntoIterator<Item = (DyadicPartition, ExactNumber)>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        let mut total = ExactNumber::zero();
        for (t, w) in entries {
            if w <= ExactNumber::zero() {
                return Err(Error::InvalidMeasure(format!(
                    "non-positive weight {w} at {t}"
                )));
            }
            total = &total + &w;
            if let Some(prev) = weights.insert(t, w) {
                return Err(Error::InvalidMeasure(format!(
                    "duplicate support point (weight {prev})"
                )));
            }
        }
        if weights.is_empty() {
            return Err(Error::InvalidMeasure("empty support".into()));
        }
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(FiniteMeasure { weights })
    }

    pub fn point_mass(t: DyadicPartition) -> Self {
        FiniteMeasure {
            weights: [(t, ExactNumber::one())].into_iter().collect(),
        }
    }

    /// Equal weight on each distinct partition.
    pub fn uniform(support: impl IntoIterator<Item = DyadicPartition>) -> Result<Self> {
        let support: std::collections::BTreeSet<_> = support.into_iter().collect();
        if support.is_empty() {
            return Err(Error::InvalidMeasure("empty support".into()));
        }
        let w = ExactNumber::ratio(1, support.len() as u64)?;
        FiniteMeasure::new(support.into_iter().map(|t| (t, w.clone())))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DyadicPartition, &ExactNumber)> {
        self.weights.iter()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

impl TryFrom<Vec<MeasureEntry>> for FiniteMeasure {
    type Error = Error;

    fn try_from(entries: Vec<MeasureEntry>) -> Result<Self> {
        FiniteMeasure::new(entries.into_iter().map(|e| (e.partition, e.weight)))
    }
}

impl From<FiniteMeasure> for Vec<MeasureEntry> {
    fn from(m: FiniteMeasure) -> Self {
        m.weights
            .into_iter()
            .map(|(partition, weight)| MeasureEntry { partition, weight })
            .collect()
    }
}

/// Closed intervals `0 < lo_0 < hi_0 < lo_1 < hi_1 < ... < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    try_from = "Vec<(ExactNumber, ExactNumber)>",
    into = "Vec<(ExactNumber, ExactNumber)>"
)]
pub struct IntervalChain {
    intervals: Vec<(ExactNumber, ExactNumber)>,
}

impl IntervalChain {
    pub fn new(intervals: Vec<(ExactNumber, ExactNumber)>) -> Result<Self> {
        let Some(first) = intervals.first() else {
            return Err(Error::InvalidChain("no intervals".into()));
        };
        if first.0 <= ExactNumber::zero() {
            return Err(Error::InvalidChain(format!(
                "first interval starts at {}",
                first.0
            )));
        }
        for (lo, hi) in &intervals {
            if lo >= hi {
                return Err(Error::InvalidChain(format!(
                    "empty or degenerate interval [{lo}, {hi}]"
                )));
            }
        }
        for w in intervals.windows(2) {
            if w[0].1 >= w[1].0 {
                return Err(Error::InvalidChain(format!(
                    "intervals [{}, {}] and [{}, {}] are not separated",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        let last = &intervals[intervals.len() - 1];
        if last.1 >= ExactNumber::one() {
            return Err(Error::InvalidChain(format!(
                "last interval ends at {}",
                last.1
            )));
        }
        Ok(IntervalChain { intervals })
    }

    pub fn parse(pairs: &[(&str, &str)]) -> Result<Self> {
        let intervals = pairs
            .iter()
            .map(|(a, b)| Ok((a.parse()?, b.parse()?)))
            .collect::<Result<Vec<_>>>()?;
        IntervalChain::new(intervals)
    }

    pub fn intervals(&self) -> &[(ExactNumber, ExactNumber)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `|T ∩ [lo_i, hi_i]|` for each interval.
    pub fn counts(&self, t: &DyadicPartition) -> Vec<usize> {
        self.intervals
            .iter()
            .map(|(lo, hi)| t.as_marked().count_in_closed(lo, hi))
            .collect()
    }
}

impl TryFrom<Vec<(ExactNumber, ExactNumber)>> for IntervalChain {
    type Error = Error;

    fn try_from(v: Vec<(ExactNumber, ExactNumber)>) -> Result<Self> {
        IntervalChain::new(v)
    }
}

impl From<IntervalChain> for Vec<(ExactNumber, ExactNumber)> {
    fn from(c: IntervalChain) -> Self {
        c.intervals
    }
}

fn strictly_monotone(counts: &[usize]) -> bool {
    counts.windows(2).all(|w| w[0] < w[1]) || counts.windows(2).all(|w| w[0] > w[1])
}

/// Total weight of support points whose interval counts are strictly
/// increasing or strictly decreasing along the chain.
pub fn monotonicity_mass(mu: &FiniteMeasure, chain: &IntervalChain) -> Result<ExactNumber> {
    if chain.len() < 2 {
        return Err(Error::InvalidChain("need at least two intervals".into()));
    }
    Ok(mu
        .iter()
        .filter(|(t, _)| strictly_monotone(&chain.counts(t)))
        .fold(ExactNumber::zero(), |acc, (_, w)| &acc + w))
}

/// Total-variation distance between `mu` and its pushforward under the
/// partial action of `g`. Mass on partitions where `g` is undefined counts in
/// full.
pub fn invariance_defect(mu: &FiniteMeasure, g: &FElement) -> ExactNumber {
    let reduced = to_minimal_pair(g);
    let mut pushed: BTreeMap<DyadicPartition, ExactNumber> = BTreeMap::new();
    let mut lost = ExactNumber::zero();
    for (t, w) in mu.iter() {
        match act_partition_with(g, &reduced, t) {
            Ok(image) => {
                let slot = pushed.entry(image).or_insert_with(ExactNumber::zero);
                *slot = &*slot + w;
            }
            Err(_) => lost = &lost + w,
        }
    }
    let mut total = lost;
    for (t, w) in mu.iter() {
        let p = pushed.remove(t).unwrap_or_else(ExactNumber::zero);
        let d = if w > &p { w - &p } else { &p - w };
        total = &total + &d;
    }
    for w in pushed.values() {
        total = &total + w;
    }
    total.scale_pow2(-1)
}

/// Word-metric ball with one shortest witness word per element.
#[derive(Clone, Debug)]
pub struct Ball {
    pub radius: u32,
    pub elements: ElementSet,
    pub witnesses: BTreeMap<CanonicalKey, Word>,
    /// `sphere_sizes[k]` = number of elements at word length exactly `k`.
    pub sphere_sizes: Vec<usize>,
}

/// All elements of word length at most `r` in the four generators.
pub fn ball(r: u32) -> Result<ElementSet> {
    Ok(ball_with_witnesses(r, DEFAULT_MAX_RADIUS)?.elements)
}

/// Breadth-first enumeration; each frontier is expanded in parallel and
/// merged in frontier order, so the result does not depend on scheduling.
pub fn ball_with_witnesses(r: u32, max_radius: u32) -> Result<Ball> {
    if r > max_radius {
        return Err(Error::RadiusTooLarge {
            radius: r,
            limit: max_radius,
        });
    }
    let id = FElement::identity();
    let mut elements = ElementSet::new();
    let mut witnesses = BTreeMap::new();
    witnesses.insert(id.canonical_key(), Word::default());
    elements.insert(id.clone());
    let mut frontier = vec![(Word::default(), id)];
    let mut sphere_sizes = vec![1];
    for _ in 0..r {
        let expanded: Vec<Vec<(Word, FElement)>> = par::map(&frontier, |(w, f)| {
            Generator::ALL
                .into_iter()
                .map(|g| {
                    let mut letters = Vec::with_capacity(w.len() + 1);
                    letters.push(g);
                    letters.extend_from_slice(w.letters());
                    (Word(letters), compose(g.element(), f))
                })
                .collect()
        });
        let mut next = Vec::new();
        for (w, f) in expanded.into_iter().flatten() {
            let key = f.canonical_key();
            if let std::collections::btree_map::Entry::Vacant(slot) = witnesses.entry(key) {
                slot.insert(w.clone());
                elements.insert(f.clone());
                next.push((w, f));
            }
        }
        sphere_sizes.push(next.len());
        frontier = next;
    }
    Ok(Ball {
        radius: r,
        elements,
        witnesses,
        sphere_sizes,
    })
}

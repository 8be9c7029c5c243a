//! Elements of Thompson's group F as exact piecewise-linear maps of `[0, 1]`.
//!
//! An [`FElement`] is stored as its canonical breakpoint list: the vertices of
//! the graph, starting at `(0, 0)` and ending at `(1, 1)`, with dyadic
//! coordinates, power-of-two slopes and no redundant (collinear) vertex.
//! Partition pairs are a derived view, see [`from_pair`] and
//! [`to_minimal_pair`].

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::ExactNumber;
use crate::partition::{i_n, is_standard_interval, DyadicPartition, MarkedSet};

type Break = (ExactNumber, ExactNumber);

/// A piecewise-linear homeomorphism of `[0, 1]` in canonical breakpoint form.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawElement", into = "RawElement")]
pub struct FElement {
    breaks: Vec<Break>,
    /// `log2` of the slope of each piece.
    slopes: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct RawElement {
    breaks: Vec<Break>,
}

impl TryFrom<RawElement> for FElement {
    type Error = Error;

    fn try_from(raw: RawElement) -> Result<Self> {
        FElement::new(raw.breaks)
    }
}

impl From<FElement> for RawElement {
    fn from(f: FElement) -> Self {
        RawElement { breaks: f.breaks }
    }
}

fn slope(p: &Break, q: &Break) -> ExactNumber {
    (&q.1 - &p.1)
        .checked_div(&(&q.0 - &p.0))
        .expect("breakpoints are strictly increasing")
}

fn slope_exponent(p: &Break, q: &Break) -> Option<i64> {
    slope(p, q).log2_exact()
}

/// Drops interior vertices where the slope does not change. Every piece must
/// have a power-of-two slope.
fn canonicalize(breaks: Vec<Break>) -> FElement {
    let mut out: Vec<Break> = Vec::with_capacity(breaks.len());
    let mut slopes: Vec<i64> = Vec::with_capacity(breaks.len());
    for b in breaks {
        if let Some(prev) = out.last() {
            let e = slope_exponent(prev, &b).expect("power-of-two slope");
            if slopes.last() == Some(&e) {
                out.pop();
            } else {
                slopes.push(e);
            }
        }
        out.push(b);
    }
    FElement {
        breaks: out,
        slopes,
    }
}

impl FElement {
    /// Validates a breakpoint list and reduces it to canonical form.
    pub fn new(breaks: Vec<Break>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidElement(msg));
        if breaks.len() < 2 {
            return invalid("needs at least the breakpoints (0,0) and (1,1)".into());
        }
        let (first, last) = (&breaks[0], &breaks[breaks.len() - 1]);
        if !first.0.is_zero() || !first.1.is_zero() {
            return invalid(format!(
                "first breakpoint is ({}, {}), not (0, 0)",
                first.0, first.1
            ));
        }
        if !last.0.is_one() || !last.1.is_one() {
            return invalid(format!(
                "last breakpoint is ({}, {}), not (1, 1)",
                last.0, last.1
            ));
        }
        for (a, b) in &breaks {
            if !a.is_dyadic() || !b.is_dyadic() {
                return invalid(format!("breakpoint ({a}, {b}) is not dyadic"));
            }
        }
        for w in breaks.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return invalid("breakpoints are not strictly increasing".into());
            }
            let s = slope(&w[0], &w[1]);
            if s.log2_exact().is_none() {
                return invalid(format!("slope {s} is not a power of 2"));
            }
        }
        Ok(canonicalize(breaks))
    }

    fn from_canonical(breaks: Vec<Break>) -> Self {
        let f = canonicalize(breaks);
        debug_assert!(FElement::new(f.breaks.clone()).is_ok());
        f
    }

    pub fn identity() -> Self {
        FElement {
            breaks: vec![
                (ExactNumber::zero(), ExactNumber::zero()),
                (ExactNumber::one(), ExactNumber::one()),
            ],
            slopes: vec![0],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.breaks.len() == 2
    }

    pub fn breaks(&self) -> &[Break] {
        &self.breaks
    }

    /// Slopes of the linear pieces, left to right.
    pub fn slopes(&self) -> Vec<ExactNumber> {
        self.slopes
            .iter()
            .map(|&e| ExactNumber::one().scale_pow2(e))
            .collect()
    }

    /// Exact image of `t`.
    pub fn apply(&self, t: &ExactNumber) -> Result<ExactNumber> {
        if !t.in_unit_interval() {
            return Err(Error::OutOfRange(t.to_string()));
        }
        Ok(self.eval(t))
    }

    fn eval(&self, t: &ExactNumber) -> ExactNumber {
        let i = self
            .breaks
            .partition_point(|(a, _)| a <= t)
            .clamp(1, self.breaks.len() - 1);
        let p = &self.breaks[i - 1];
        &p.1 + &(t - &p.0).scale_pow2(self.slopes[i - 1])
    }

    fn eval_inverse(&self, t: &ExactNumber) -> ExactNumber {
        let i = self
            .breaks
            .partition_point(|(_, b)| b <= t)
            .clamp(1, self.breaks.len() - 1);
        let p = &self.breaks[i - 1];
        &p.0 + &(t - &p.1).scale_pow2(-self.slopes[i - 1])
    }

    /// Whether `self` is linear on `[a, b]` (no breakpoint strictly inside).
    fn is_affine_on(&self, a: &ExactNumber, b: &ExactNumber) -> bool {
        let i = self.breaks.partition_point(|(x, _)| x <= a);
        i >= self.breaks.len() || &self.breaks[i].0 >= b
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        canonical_key(self)
    }
}

impl fmt::Debug for FElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FElement[")?;
        for (i, (a, b)) in self.breaks.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({a}, {b})")?;
        }
        write!(f, "]")
    }
}

/// A pair of standard dyadic partitions of equal size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct PartitionPair {
    domain: DyadicPartition,
    range: DyadicPartition,
}

#[derive(Deserialize)]
struct RawPair {
    domain: DyadicPartition,
    range: DyadicPartition,
}

impl TryFrom<RawPair> for PartitionPair {
    type Error = Error;

    fn try_from(raw: RawPair) -> Result<Self> {
        PartitionPair::new(raw.domain, raw.range)
    }
}

impl PartitionPair {
    pub fn new(domain: DyadicPartition, range: DyadicPartition) -> Result<Self> {
        if domain.len() != range.len() {
            return Err(Error::CardinalityMismatch {
                domain: domain.len(),
                range: range.len(),
            });
        }
        Ok(PartitionPair { domain, range })
    }

    pub fn domain(&self) -> &DyadicPartition {
        &self.domain
    }

    pub fn range(&self) -> &DyadicPartition {
        &self.range
    }

    /// The pair representing the inverse element.
    pub fn swapped(&self) -> PartitionPair {
        PartitionPair {
            domain: self.range.clone(),
            range: self.domain.clone(),
        }
    }
}

/// Injective byte encoding of a canonical element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", String::from_utf8_lossy(&self.0))
    }
}

/// One of `x0`, `x1`, `x0^-1`, `x1^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    #[serde(rename = "x0")]
    X0,
    #[serde(rename = "x1")]
    X1,
    #[serde(rename = "x0^-1")]
    X0Inv,
    #[serde(rename = "x1^-1")]
    X1Inv,
}

impl Generator {
    pub const ALL: [Generator; 4] = [
        Generator::X0,
        Generator::X1,
        Generator::X0Inv,
        Generator::X1Inv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::X0 => "x0",
            Generator::X1 => "x1",
            Generator::X0Inv => "x0^-1",
            Generator::X1Inv => "x1^-1",
        }
    }

    pub fn inverse(self) -> Generator {
        match self {
            Generator::X0 => Generator::X0Inv,
            Generator::X1 => Generator::X1Inv,
            Generator::X0Inv => Generator::X0,
            Generator::X1Inv => Generator::X1,
        }
    }

    pub fn element(self) -> &'static FElement {
        &GENERATORS[self as usize]
    }

    /// Recognises a generator among arbitrary elements, for labelling.
    pub fn identify(f: &FElement) -> Option<Generator> {
        Generator::ALL.into_iter().find(|g| g.element() == f)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x0" | "x_0" => Ok(Generator::X0),
            "x1" | "x_1" => Ok(Generator::X1),
            "x0^-1" | "x_0^-1" => Ok(Generator::X0Inv),
            "x1^-1" | "x_1^-1" => Ok(Generator::X1Inv),
            _ => Err(Error::Parse(format!("unknown generator {s:?}"))),
        }
    }
}

fn pair(domain: &[&str], range: &[&str]) -> FElement {
    let p = PartitionPair::new(
        DyadicPartition::parse(domain).expect("static partition"),
        DyadicPartition::parse(range).expect("static partition"),
    )
    .expect("static pair");
    from_pair(&p)
}

static GENERATORS: LazyLock<[FElement; 4]> = LazyLock::new(|| {
    let x0 = pair(&["0", "1/2", "3/4", "1"], &["0", "1/4", "1/2", "1"]);
    let x1 = pair(
        &["0", "1/2", "3/4", "7/8", "1"],
        &["0", "1/2", "5/8", "3/4", "1"],
    );
    let (x0i, x1i) = (invert(&x0), invert(&x1));
    [x0, x1, x0i, x1i]
});

/// `[x0, x1, x0^-1, x1^-1]`.
pub fn generators() -> [FElement; 4] {
    GENERATORS.clone()
}

/// The element agreeing with the increasing bijection `domain -> range` and
/// affine in between.
pub fn from_pair(p: &PartitionPair) -> FElement {
    let breaks = p
        .domain
        .points()
        .iter()
        .cloned()
        .zip(p.range.points().iter().cloned())
        .collect();
    FElement::from_canonical(breaks)
}

/// The reduced (minimal-size) partition pair of `f`.
///
/// Greedy top-down subdivision: a standard leaf is kept when `f` is affine on
/// it and maps it onto a standard interval; otherwise it is halved. That
/// property passes to both halves, so the kept leaves form the smallest
/// domain partition.
pub fn to_minimal_pair(f: &FElement) -> PartitionPair {
    let mut domain = vec![ExactNumber::zero()];
    let mut stack = vec![(ExactNumber::zero(), ExactNumber::one())];
    while let Some((a, b)) = stack.pop() {
        if f.is_affine_on(&a, &b) && is_standard_interval(&f.eval(&a), &f.eval(&b)) {
            domain.push(b);
        } else {
            let mid = a.midpoint(&b);
            stack.push((mid.clone(), b));
            stack.push((a, mid));
        }
    }
    let range = domain.iter().map(|x| f.eval(x)).collect();
    PartitionPair {
        domain: DyadicPartition::new_unchecked(domain),
        range: DyadicPartition::new_unchecked(range),
    }
}

/// `g ∘ f`: apply `f` first.
///
/// The breakpoints of `g ∘ f` lie among those of `f` and the preimages under
/// `f` of those of `g`; both lists are increasing, so one merge sweep finds
/// them and a second sweep evaluates `g`.
pub fn compose(g: &FElement, f: &FElement) -> FElement {
    // (x, f(x)) at every candidate breakpoint
    let mut mid: Vec<Break> = Vec::with_capacity(f.breaks.len() + g.breaks.len());
    mid.push(f.breaks[0].clone());
    let mut j = 1;
    for (i, e) in f.slopes.iter().enumerate() {
        let (a0, b0) = &f.breaks[i];
        let end = &f.breaks[i + 1];
        while j < g.breaks.len() - 1 && g.breaks[j].0 < end.1 {
            let u = &g.breaks[j].0;
            if u > b0 {
                mid.push((a0 + &(u - b0).scale_pow2(-e), u.clone()));
            }
            j += 1;
        }
        mid.push(end.clone());
    }
    let mut k = 0;
    let breaks = mid
        .into_iter()
        .map(|(x, u)| {
            while k + 2 < g.breaks.len() && g.breaks[k + 1].0 <= u {
                k += 1;
            }
            let (c, d) = &g.breaks[k];
            let y = d + &(&u - c).scale_pow2(g.slopes[k]);
            (x, y)
        })
        .collect();
    FElement::from_canonical(breaks)
}

pub fn invert(f: &FElement) -> FElement {
    FElement {
        breaks: f
            .breaks
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect(),
        slopes: f.slopes.iter().map(|e| -e).collect(),
    }
}

pub fn apply(f: &FElement, t: &ExactNumber) -> Result<ExactNumber> {
    f.apply(t)
}

/// Which way a group element acts on a family.
///
/// `Left` uses `g` itself; `Right` uses `g^{-1}`, so that `(X·g)·h = X·(gh)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    #[default]
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    /// The element that is actually applied on the left.
    pub fn effective(self, g: &FElement) -> FElement {
        match self {
            Side::Left => g.clone(),
            Side::Right => invert(g),
        }
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(Error::Parse(format!(
                "side must be left or right, got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Pointwise image `f · X`.
pub fn act_marked(f: &FElement, x: &MarkedSet) -> MarkedSet {
    MarkedSet::new_unchecked(x.points().iter().map(|t| f.eval(t)).collect())
}

/// `f · X` for [`Side::Left`], `X · f = f^{-1} · X` for [`Side::Right`].
pub fn act_marked_side(f: &FElement, x: &MarkedSet, side: Side) -> MarkedSet {
    let pts = match side {
        Side::Left => x.points().iter().map(|t| f.eval(t)).collect(),
        Side::Right => x.points().iter().map(|t| f.eval_inverse(t)).collect(),
    };
    MarkedSet::new_unchecked(pts)
}

/// Partial action on standard partitions: defined when the domain partition
/// of `g`'s reduced pair is contained in `t`.
pub fn act_partition(g: &FElement, t: &DyadicPartition) -> Result<DyadicPartition> {
    let reduced = to_minimal_pair(g);
    act_partition_with(g, &reduced, t)
}

/// [`act_partition`] with a precomputed reduced pair.
pub fn act_partition_with(
    g: &FElement,
    reduced: &PartitionPair,
    t: &DyadicPartition,
) -> Result<DyadicPartition> {
    if !reduced.domain.is_subset_of(t) {
        return Err(Error::DomainNotContained);
    }
    let image = t.points().iter().map(|x| g.eval(x)).collect();
    Ok(DyadicPartition::new_unchecked(image))
}

/// `f_T`, the element represented by `(I_n, T)` with `|I_n| = |T|`.
pub fn f_of_partition(t: &DyadicPartition) -> Result<FElement> {
    if t.len() < 3 {
        return Err(Error::TooFewPoints(t.len()));
    }
    let p = PartitionPair {
        domain: i_n(t.len() as u32 - 3),
        range: t.clone(),
    };
    Ok(from_pair(&p))
}

pub fn canonical_key(f: &FElement) -> CanonicalKey {
    let mut bytes = Vec::with_capacity(f.breaks.len() * 12);
    for (a, b) in &f.breaks {
        bytes.extend_from_slice(a.to_string().as_bytes());
        bytes.push(b',');
        bytes.extend_from_slice(b.to_string().as_bytes());
        bytes.push(b';');
    }
    CanonicalKey(bytes)
}

/// A word in the four generators, read as a composition: the rightmost
/// letter is applied first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|g| g.inverse()).collect())
    }

    pub fn evaluate(&self) -> FElement {
        self.evaluate_with(&generators())
    }

    /// Evaluates against a caller-supplied table `[x0, x1, x0^-1, x1^-1]`.
    pub fn evaluate_with(&self, table: &[FElement; 4]) -> FElement {
        self.0.iter().rev().fold(FElement::identity(), |acc, g| {
            compose(&table[*g as usize], &acc)
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("id");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(g.name())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Letters separated by `*` or whitespace; `id` or an empty string is the
    /// empty word. A letter may carry an integer exponent, as in `x0^-2`.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for tok in s
            .split(|c: char| c == '*' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            if tok == "id" || tok == "1" {
                continue;
            }
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<i32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?,
                ),
                None => (tok, 1),
            };
            let g: Generator = base.parse()?;
            let g = if exp < 0 { g.inverse() } else { g };
            out.extend(std::iter::repeat_n(g, exp.unsigned_abs() as usize));
        }
        Ok(Word(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> ExactNumber {
        s.parse().unwrap()
    }

    fn dp(pts: &[&str]) -> DyadicPartition {
        DyadicPartition::parse(pts).unwrap()
    }

    fn x0() -> FElement {
        Generator::X0.element().clone()
    }

    fn x1() -> FElement {
        Generator::X1.element().clone()
    }

    fn slopes(f: &FElement) -> Vec<String> {
        f.slopes().iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn generator_pairs_and_slopes() {
        assert_eq!(slopes(&x0()), ["1/2", "1", "2"]);
        assert_eq!(slopes(&x1()), ["1", "1/2", "1", "2"]);
        let id = pair(&["0", "1/2", "1"], &["0", "1/2", "1"]);
        assert!(id.is_identity());
        assert_eq!(id, FElement::identity());
    }

    #[test]
    fn generator_values() {
        assert_eq!(x0().apply(&n("3/4")).unwrap(), n("1/2"));
        assert_eq!(x0().apply(&n("7/8")).unwrap(), n("3/4"));
        assert_eq!(x0().apply(&n("0")).unwrap(), n("0"));
        for t in ["0", "1/8", "1/3", "1/2"] {
            assert_eq!(x1().apply(&n(t)).unwrap(), n(t));
        }
        assert_eq!(invert(&x0()).apply(&n("1/2")).unwrap(), n("3/4"));
        assert_eq!(
            Generator::X0Inv.element(),
            &pair(&["0", "1/4", "1/2", "1"], &["0", "1/2", "3/4", "1"])
        );
        assert!(matches!(x0().apply(&n("5/4")), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn minimal_pairs() {
        let id = to_minimal_pair(&FElement::identity());
        assert_eq!(id.domain(), &DyadicPartition::trivial());
        assert_eq!(id.range(), &DyadicPartition::trivial());
        let p = to_minimal_pair(&x0());
        assert_eq!(p.domain(), &dp(&["0", "1/2", "3/4", "1"]));
        assert_eq!(p.range(), &dp(&["0", "1/4", "1/2", "1"]));
        let p = to_minimal_pair(&x1());
        assert_eq!(p.domain(), &dp(&["0", "1/2", "3/4", "7/8", "1"]));
        assert_eq!(p.range(), &dp(&["0", "1/2", "5/8", "3/4", "1"]));
    }

    #[test]
    fn compose_and_invert_basics() {
        assert!(compose(&x0(), &invert(&x0())).is_identity());
        assert_eq!(compose(&FElement::identity(), &x1()), x1());
        assert_eq!(compose(&x1(), &FElement::identity()), x1());
        assert!(invert(&FElement::identity()).is_identity());
        assert_eq!(invert(&invert(&x1())), x1());
    }

    #[test]
    fn f_of_partition_examples() {
        assert!(f_of_partition(&dp(&["0", "1/2", "3/4", "1"]))
            .unwrap()
            .is_identity());
        assert_eq!(
            f_of_partition(&dp(&["0", "1/4", "1/2", "1"])).unwrap(),
            x0()
        );
        assert_eq!(
            f_of_partition(&dp(&["0", "1/2", "5/8", "3/4", "1"])).unwrap(),
            x1()
        );
        assert_eq!(
            f_of_partition(&DyadicPartition::trivial()).unwrap_err(),
            Error::TooFewPoints(2)
        );
    }

    #[test]
    fn act_partition_examples() {
        let t = dp(&["0", "1/2", "3/4", "7/8", "1"]);
        assert_eq!(
            act_partition(&x0(), &t).unwrap(),
            dp(&["0", "1/4", "1/2", "3/4", "1"])
        );
        assert_eq!(
            act_partition(&x1(), &dp(&["0", "1/2", "1"])).unwrap_err(),
            Error::DomainNotContained
        );
        for g in generators() {
            let p = to_minimal_pair(&g);
            assert_eq!(&act_partition(&g, p.domain()).unwrap(), p.range());
        }
    }

    #[test]
    fn act_marked_examples() {
        let x = MarkedSet::parse(&["0", "7/8", "1"]).unwrap();
        assert_eq!(
            act_marked(&x0(), &x),
            MarkedSet::parse(&["0", "3/4", "1"]).unwrap()
        );
        assert_eq!(act_marked(&FElement::identity(), &x), x);
        let half = MarkedSet::parse(&["0", "1/2", "1"]).unwrap();
        assert_eq!(act_marked(&x1(), &half), half);
        let right = act_marked_side(&x0(), &x, Side::Right);
        assert_eq!(right, act_marked(&invert(&x0()), &x));
    }

    #[test]
    fn keys() {
        assert_eq!(
            canonical_key(&FElement::identity()),
            canonical_key(&compose(&x0(), &invert(&x0())))
        );
        assert_ne!(canonical_key(&x0()), canonical_key(&x1()));
    }

    #[test]
    fn element_validation() {
        let bad_slope = vec![(n("0"), n("0")), (n("1/2"), n("3/8")), (n("1"), n("1"))];
        assert!(matches!(
            FElement::new(bad_slope),
            Err(Error::InvalidElement(_))
        ));
        let non_dyadic = vec![(n("0"), n("0")), (n("1/3"), n("1/6")), (n("1"), n("1"))];
        assert!(matches!(
            FElement::new(non_dyadic),
            Err(Error::InvalidElement(_))
        ));
        let redundant = vec![(n("0"), n("0")), (n("1/4"), n("1/4")), (n("1"), n("1"))];
        assert!(FElement::new(redundant).unwrap().is_identity());
        let not_onto = vec![(n("0"), n("0")), (n("1"), n("1/2"))];
        assert!(FElement::new(not_onto).is_err());
    }

    #[test]
    fn pair_cardinality() {
        let err =
            PartitionPair::new(dp(&["0", "1/2", "1"]), DyadicPartition::trivial()).unwrap_err();
        assert_eq!(
            err,
            Error::CardinalityMismatch {
                domain: 3,
                range: 2
            }
        );
    }

    #[test]
    fn words() {
        let w: Word = "x0 x1^-1 * x0^-2".parse().unwrap();
        assert_eq!(
            w.letters(),
            &[
                Generator::X0,
                Generator::X1Inv,
                Generator::X0Inv,
                Generator::X0Inv
            ]
        );
        assert_eq!(w.to_string(), "x0*x1^-1*x0^-1*x0^-1");
        assert!(compose(&w.evaluate(), &w.inverse().evaluate()).is_identity());
        assert_eq!(
            "id".parse::<Word>().unwrap().evaluate(),
            FElement::identity()
        );
        assert!("y2".parse::<Word>().is_err());
        // rightmost letter acts first
        let t = n("7/8");
        let w: Word = "x1 x0".parse().unwrap();
        assert_eq!(
            w.evaluate().apply(&t).unwrap(),
            x1().apply(&x0().apply(&t).unwrap()).unwrap()
        );
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&x0()).unwrap();
        assert_eq!(
            s,
            r#"{"breaks":[["0","0"],["1/2","1/4"],["3/4","1/2"],["1","1"]]}"#
        );
        let back: FElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x0());
        let p = to_minimal_pair(&x0());
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"domain":["0","1/2","3/4","1"],"range":["0","1/4","1/2","1"]}"#
        );
        assert_eq!(serde_json::from_str::<PartitionPair>(&s).unwrap(), p);
        assert!(serde_json::from_str::<PartitionPair>(
            r#"{"domain":["0","1"],"range":["0","1/2","1"]}"#
        )
        .is_err());
    }
}

//! Seeded generators for the property suites.
//!
//! Every case draws from its own ChaCha stream derived from
//! `(seed, suite, case index)`, so a case can be regenerated alone and
//! results do not depend on evaluation order.
//!
//! Marked sets with mesh at most 1/16 are the 1/16 grid plus up to 16 extra
//! points `p/1024`, `p` uniform in `0..=1024`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactnum::ExactNumber;
use crate::felement::{Generator, Word};
use crate::partition::{DyadicPartition, MarkedSet};

pub type CaseRng = ChaCha8Rng;

pub fn case_rng(seed: u64, suite: u64, index: u64) -> CaseRng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&suite.to_le_bytes());
    bytes[16..24].copy_from_slice(&index.to_le_bytes());
    bytes[24..].copy_from_slice(b"folner\0\0");
    ChaCha8Rng::from_seed(bytes)
}

/// Splits uniformly chosen leaves of `base` until it has `len` points.
pub fn refine_to<R: Rng>(rng: &mut R, base: &DyadicPartition, len: usize) -> DyadicPartition {
    let mut t = base.clone();
    while t.len() < len {
        let leaf = rng.gen_range(0..t.len() - 1);
        t = t.split_leaf(leaf);
    }
    t
}

/// A random refinement of `base` with between `base.len()` and `max_len`
/// points.
pub fn partition_containing<R: Rng>(
    rng: &mut R,
    base: &DyadicPartition,
    max_len: usize,
) -> DyadicPartition {
    let len = rng.gen_range(base.len()..=max_len.max(base.len()));
    refine_to(rng, base, len)
}

/// A random standard partition with exactly `len` points.
pub fn partition_with_len<R: Rng>(rng: &mut R, len: usize) -> DyadicPartition {
    refine_to(rng, &DyadicPartition::trivial(), len)
}

/// The `1/2^depth` grid plus up to `extra` points `p/1024`.
pub fn grid_plus_dyadics<R: Rng>(rng: &mut R, depth: u32, extra: usize) -> MarkedSet {
    let k = rng.gen_range(0..=extra);
    let grid = DyadicPartition::uniform(depth).into_marked().into_points();
    let extras = (0..k).map(|_| ExactNumber::dyadic(rng.gen_range(0..=1024i64), 10));
    MarkedSet::from_points(grid.into_iter().chain(extras)).expect("points in [0, 1]")
}

/// Mesh at most 1/16.
pub fn fine_marked_set<R: Rng>(rng: &mut R) -> MarkedSet {
    grid_plus_dyadics(rng, 4, 16)
}

/// Points with every gap (including the last) at least 1/16; gaps are
/// `1/16 + a/b` with small, mostly non-dyadic, denominators.
pub fn separated_marked_set<R: Rng>(rng: &mut R) -> MarkedSet {
    let min_gap = ExactNumber::dyadic(1, 4);
    let limit = ExactNumber::ratio(15, 16).expect("nonzero");
    let mut points = vec![ExactNumber::zero()];
    loop {
        let b: i64 = rng.gen_range(1..=48);
        let a: i64 = rng.gen_range(0..=b / 3);
        let gap = &min_gap + &ExactNumber::ratio(a, b * 4).expect("nonzero");
        let next = points.last().expect("nonempty") + &gap;
        if next > limit {
            break;
        }
        points.push(next);
    }
    points.push(ExactNumber::one());
    MarkedSet::new(points).expect("increasing")
}

pub fn random_generator<R: Rng>(rng: &mut R) -> Generator {
    *Generator::ALL.choose(rng).expect("four generators")
}

/// Uniform length in `0..=max_len`, uniform letters.
pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word((0..len).map(|_| random_generator(rng)).collect())
}

/// A family of at most `max_size` marked sets, all of mesh at most 1/16.
///
/// Seeds are 1/32-grid based, and some of their generator images are added,
/// so the family overlaps its own translates.
pub fn fine_family<R: Rng>(rng: &mut R, max_size: usize) -> Vec<MarkedSet> {
    let target = rng.gen_range(1..=max_size);
    let mut out = Vec::with_capacity(target);
    while out.len() < target {
        let seed = grid_plus_dyadics(rng, 5, 8);
        if out.len() + 1 < target && rng.gen_bool(0.5) {
            let g = random_generator(rng);
            out.push(crate::felement::act_marked(g.element(), &seed));
        }
        out.push(seed);
    }
    out.truncate(target);
    out
}

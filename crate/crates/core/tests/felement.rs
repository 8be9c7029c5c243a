//! Group operations checked pointwise against closed-form generator maps.

use folner_core::random::{case_rng, partition_containing, partition_with_len};
use folner_core::{
    act_partition, compose, f_of_partition, from_pair, invert, to_minimal_pair, DyadicPartition,
    ExactNumber, FElement, Generator, PartitionPair, Word,
};
use proptest::prelude::*;

fn d(p: i64, q: u64) -> ExactNumber {
    ExactNumber::dyadic(p, q)
}

/// x0 and x1 written out piece by piece, with inverses.
fn closed_form(g: Generator, t: &ExactNumber) -> ExactNumber {
    let half = d(1, 1);
    let quarter = d(1, 2);
    let three_q = d(3, 2);
    let one = ExactNumber::one();
    match g {
        Generator::X0 if t <= &half => t.scale_pow2(-1),
        Generator::X0 if t <= &three_q => t - &quarter,
        Generator::X0 => &t.scale_pow2(1) - &one,
        Generator::X0Inv if t <= &quarter => t.scale_pow2(1),
        Generator::X0Inv if t <= &half => t + &quarter,
        Generator::X0Inv => (t + &one).scale_pow2(-1),
        Generator::X1 if t <= &half => t.clone(),
        Generator::X1 => {
            &half + &closed_form(Generator::X0, &(t - &half).scale_pow2(1)).scale_pow2(-1)
        }
        Generator::X1Inv if t <= &half => t.clone(),
        Generator::X1Inv => {
            &half + &closed_form(Generator::X0Inv, &(t - &half).scale_pow2(1)).scale_pow2(-1)
        }
    }
}

/// Evaluates a word letter by letter, rightmost first.
fn word_at(w: &Word, t: &ExactNumber) -> ExactNumber {
    w.letters()
        .iter()
        .rev()
        .fold(t.clone(), |acc, &g| closed_form(g, &acc))
}

fn grid(q: u64) -> impl Iterator<Item = ExactNumber> {
    (0..=(1i64 << q)).map(move |p| d(p, q))
}

fn letters() -> impl Strategy<Value = Word> {
    proptest::collection::vec(0usize..4, 0..=12)
        .prop_map(|v| Word(v.into_iter().map(|i| Generator::ALL[i]).collect()))
}

#[test]
fn generator_table_matches_closed_forms() {
    for g in Generator::ALL {
        for t in grid(8) {
            assert_eq!(
                g.element().apply(&t).unwrap(),
                closed_form(g, &t),
                "{} at {t}",
                g.name()
            );
        }
    }
    assert_eq!(Generator::X0.element().apply(&d(7, 3)).unwrap(), d(3, 2));
}

#[test]
fn relations_hold() {
    let a: Word = "x0*x1^-1".parse().unwrap();
    for b in ["x0^-1*x1*x0", "x0^-2*x1*x0^2"] {
        let b: Word = b.parse().unwrap();
        let (fa, fb) = (a.evaluate(), b.evaluate());
        let comm = compose(&compose(&fa, &fb), &compose(&invert(&fa), &invert(&fb)));
        assert!(comm.is_identity(), "{b}");
    }
    // x1 and x0 do not commute
    let (x0, x1) = (Generator::X0.element(), Generator::X1.element());
    assert_ne!(compose(x0, x1), compose(x1, x0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn words_evaluate_pointwise(w in letters()) {
        let f = w.evaluate();
        for t in grid(6) {
            prop_assert_eq!(f.apply(&t).unwrap(), word_at(&w, &t));
        }
    }

    #[test]
    fn group_axioms(a in letters(), b in letters(), c in letters()) {
        let (f, g, h) = (a.evaluate(), b.evaluate(), c.evaluate());
        prop_assert_eq!(compose(&compose(&f, &g), &h), compose(&f, &compose(&g, &h)));
        prop_assert!(compose(&f, &invert(&f)).is_identity());
        prop_assert!(compose(&invert(&f), &f).is_identity());
        prop_assert_eq!(compose(&FElement::identity(), &f), f.clone());
        prop_assert_eq!(invert(&compose(&f, &g)), compose(&invert(&g), &invert(&f)));
        prop_assert_eq!(a.inverse().evaluate(), invert(&f));
    }

    #[test]
    fn minimal_pair_round_trips(w in letters()) {
        let f = w.evaluate();
        let pair = to_minimal_pair(&f);
        prop_assert_eq!(from_pair(&pair), f.clone());
        prop_assert_eq!(to_minimal_pair(&invert(&f)), pair.swapped());
    }

    #[test]
    fn any_pair_round_trips(seed in any::<u64>(), len in 2usize..=20) {
        let mut rng = case_rng(seed, 0, 0);
        let s = partition_with_len(&mut rng, len);
        let t = partition_with_len(&mut rng, len);
        let f = from_pair(&PartitionPair::new(s.clone(), t.clone()).unwrap());
        for (a, b) in s.points().iter().zip(t.points()) {
            prop_assert_eq!(&f.apply(a).unwrap(), b);
        }
        let min = to_minimal_pair(&f);
        prop_assert!(min.domain().is_subset_of(&s));
        prop_assert_eq!(from_pair(&min), f);
    }

    #[test]
    fn equivariance_of_f_t(seed in any::<u64>(), gi in 0usize..4) {
        let g = Generator::ALL[gi];
        let mut rng = case_rng(seed, 1, 0);
        let dom = to_minimal_pair(g.element()).domain().clone();
        let t = partition_containing(&mut rng, &dom, 24);
        let moved = act_partition(g.element(), &t).unwrap();
        let lhs = compose(g.element(), &f_of_partition(&t).unwrap());
        prop_assert_eq!(&lhs, &f_of_partition(&moved).unwrap());
        // and pointwise on a grid fine enough to see every piece
        let f_t = f_of_partition(&t).unwrap();
        for x in grid(7) {
            let via = closed_form(g, &f_t.apply(&x).unwrap());
            prop_assert_eq!(lhs.apply(&x).unwrap(), via);
        }
    }
}

#[test]
fn f_t_of_small_partition() {
    // T = {0, 1/4, 1/2, 1}; I_1 = {0, 1/2, 3/4, 1}
    let t = DyadicPartition::parse(&["0", "1/4", "1/2", "1"]).unwrap();
    let f = f_of_partition(&t).unwrap();
    assert_eq!(f, *Generator::X0.element());
    assert!(f_of_partition(&DyadicPartition::trivial()).is_err());
}

#[test]
fn rejects_non_elements() {
    let pt = |a: &str, b: &str| {
        (
            a.parse::<ExactNumber>().unwrap(),
            b.parse::<ExactNumber>().unwrap(),
        )
    };
    assert!(FElement::new(vec![pt("0", "0"), pt("1/3", "1/3"), pt("1", "1")]).is_err());
    assert!(FElement::new(vec![pt("0", "0"), pt("1/2", "3/8"), pt("1", "1")]).is_err());
    assert!(FElement::new(vec![pt("0", "0"), pt("1/2", "1/2")]).is_err());
}

//! Seeded property suites over the partition, element and reduction layers.
//!
//! Each suite runs a fixed number of independently seeded cases (see
//! [`crate::random`]) and records the failure count and the lowest-index
//! counterexample in full serialized form. Reports are deterministic in
//! `(seed, cases, generator table)`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::exactnum::ExactNumber;
use crate::felement::Side;
use crate::felement::{
    act_marked, act_partition_with, compose, f_of_partition, from_pair, generators, invert,
    to_minimal_pair, FElement, Generator, PartitionPair, Word,
};
use crate::folner::{audit_reduction, defect_marked, z_family, MarkedFamily};
use crate::par;
use crate::partition::{
    i_n, is_standard, mesh, satisfies_leaf_condition, satisfies_pair_condition, t_of,
    DyadicPartition,
};
use crate::random::{self, case_rng};

pub const DEFAULT_SEED: u64 = 20100112;

/// Inputs to [`run`].
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides every suite's default case count.
    pub cases: Option<usize>,
    /// `[x0, x1, x0^-1, x1^-1]` as used by the suites.
    pub table: [FElement; 4],
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: DEFAULT_SEED,
            cases: None,
            table: generators(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub counterexample: Option<Value>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }
}

/// A suite: name, stream id, default case count and per-case check.
/// The check returns `Some(counterexample)` on failure.
struct Suite {
    name: &'static str,
    stream: u64,
    default_cases: usize,
    check: fn(&VerifyConfig, u64) -> Option<Value>,
}

const SUITES: &[Suite] = &[
    Suite {
        name: "generator_table",
        stream: 0,
        default_cases: 4,
        check: check_generator_table,
    },
    Suite {
        name: "relations",
        stream: 1,
        default_cases: 2,
        check: check_relation,
    },
    Suite {
        name: "group_axioms",
        stream: 2,
        default_cases: 500,
        check: check_group_axioms,
    },
    Suite {
        name: "pair_round_trip",
        stream: 3,
        default_cases: 500,
        check: check_round_trip,
    },
    Suite {
        name: "f_t_equivariance",
        stream: 4,
        default_cases: 1000,
        check: check_f_t_equivariance,
    },
    Suite {
        name: "t_of_commutes",
        stream: 5,
        default_cases: 1000,
        check: check_t_of_commutes,
    },
    Suite {
        name: "t_of_mesh",
        stream: 6,
        default_cases: 1000,
        check: check_t_of_mesh,
    },
    Suite {
        name: "t_of_maximality",
        stream: 7,
        default_cases: 200,
        check: check_maximality,
    },
    Suite {
        name: "reduction_pipeline",
        stream: 8,
        default_cases: 100,
        check: check_reduction,
    },
    Suite {
        name: "z_family",
        stream: 9,
        default_cases: 3,
        check: check_z_family,
    },
];

/// Names of all suites, in run order.
pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Suites whose case count is fixed by their content and ignore `cases`.
fn fixed_size(name: &str) -> bool {
    matches!(name, "generator_table" | "relations" | "z_family")
}

pub fn run(config: &VerifyConfig) -> VerifyReport {
    let suites: Vec<SuiteReport> = SUITES.iter().map(|s| run_suite(config, s)).collect();
    VerifyReport {
        seed: config.seed,
        passed: suites.iter().all(SuiteReport::passed),
        suites,
    }
}

/// Runs the named suite only.
pub fn run_named(config: &VerifyConfig, name: &str) -> Option<SuiteReport> {
    SUITES
        .iter()
        .find(|s| s.name == name)
        .map(|s| run_suite(config, s))
}

fn run_suite(config: &VerifyConfig, suite: &Suite) -> SuiteReport {
    let cases = match config.cases {
        Some(c) if !fixed_size(suite.name) => c,
        _ => suite.default_cases,
    };
    let results = par::map_range(cases, |i| (suite.check)(config, i as u64));
    let failures = results.iter().filter(|r| r.is_some()).count();
    SuiteReport {
        name: suite.name,
        cases,
        failures,
        counterexample: results.into_iter().flatten().next(),
    }
}

fn rng(config: &VerifyConfig, name: &str, i: u64) -> random::CaseRng {
    let stream = SUITES
        .iter()
        .find(|s| s.name == name)
        .map_or(u64::MAX, |s| s.stream);
    case_rng(config.seed, stream, i)
}

fn pair_of(domain: &[&str], range: &[&str]) -> FElement {
    from_pair(
        &PartitionPair::new(
            DyadicPartition::parse(domain).expect("static"),
            DyadicPartition::parse(range).expect("static"),
        )
        .expect("static"),
    )
}

fn check_generator_table(config: &VerifyConfig, i: u64) -> Option<Value> {
    let x0 = pair_of(&["0", "1/2", "3/4", "1"], &["0", "1/4", "1/2", "1"]);
    let x1 = pair_of(
        &["0", "1/2", "3/4", "7/8", "1"],
        &["0", "1/2", "5/8", "3/4", "1"],
    );
    let expected = [x0.clone(), x1.clone(), invert(&x0), invert(&x1)];
    let i = i as usize;
    let entry = &config.table[i];
    (entry != &expected[i]).then(|| {
        json!({
            "generator": Generator::ALL[i].name(),
            "table_entry": entry,
            "expected": expected[i],
        })
    })
}

fn commutator(a: &FElement, b: &FElement) -> FElement {
    compose(&compose(a, b), &compose(&invert(a), &invert(b)))
}

fn check_relation(config: &VerifyConfig, i: u64) -> Option<Value> {
    let t = &config.table;
    let (x0, x1, x0i, x1i) = (&t[0], &t[1], &t[2], &t[3]);
    let a = compose(x0, x1i);
    let conj = if i == 0 {
        compose(x0i, &compose(x1, x0))
    } else {
        compose(&compose(x0i, x0i), &compose(x1, &compose(x0, x0)))
    };
    let c = commutator(&a, &conj);
    (!c.is_identity()).then(|| {
        json!({
            "relation": if i == 0 { "[x0 x1^-1, x0^-1 x1 x0]" } else { "[x0 x1^-1, x0^-2 x1 x0^2]" },
            "commutator": c,
        })
    })
}

fn check_group_axioms(config: &VerifyConfig, i: u64) -> Option<Value> {
    let mut r = rng(config, "group_axioms", i);
    let words: Vec<Word> = (0..3).map(|_| random::random_word(&mut r, 12)).collect();
    let [a, b, c] = [0, 1, 2].map(|k| words[k].evaluate_with(&config.table));
    let id = FElement::identity();
    let a_inv = words[0].inverse().evaluate_with(&config.table);
    let mut broken = Vec::new();
    if compose(&compose(&a, &b), &c) != compose(&a, &compose(&b, &c)) {
        broken.push("associativity");
    }
    if compose(&id, &a) != a || compose(&a, &id) != a {
        broken.push("identity");
    }
    if !compose(&a, &a_inv).is_identity() || !compose(&a_inv, &a).is_identity() {
        broken.push("inverse");
    }
    if invert(&a) != a_inv {
        broken.push("invert_matches_inverse_word");
    }
    (!broken.is_empty()).then(|| {
        json!({
            "laws": broken,
            "words": words.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        })
    })
}

fn check_round_trip(config: &VerifyConfig, i: u64) -> Option<Value> {
    let mut r = rng(config, "pair_round_trip", i);
    let len = rand::Rng::gen_range(&mut r, 2..=16);
    let domain = random::partition_with_len(&mut r, len);
    let range = random::partition_with_len(&mut r, len);
    let pair = PartitionPair::new(domain, range).expect("equal sizes");
    let f = from_pair(&pair);
    let reduced = to_minimal_pair(&f);
    let ok = from_pair(&reduced) == f
        && reduced.domain().is_subset_of(pair.domain())
        && reduced.range().is_subset_of(pair.range())
        && to_minimal_pair(&from_pair(&reduced)) == reduced;
    (!ok).then(|| json!({ "pair": pair, "reduced": reduced, "element": f }))
}

fn check_f_t_equivariance(config: &VerifyConfig, i: u64) -> Option<Value> {
    let mut r = rng(config, "f_t_equivariance", i);
    let k = rand::Rng::gen_range(&mut r, 0..4);
    let g = &config.table[k];
    let reduced = to_minimal_pair(g);
    let t = random::partition_containing(&mut r, reduced.domain(), 24);
    let fail = |why: &str, extra: Value| {
        Some(
            json!({ "generator": Generator::ALL[k].name(), "partition": t, "reason": why, "detail": extra }),
        )
    };
    let gt = match act_partition_with(g, &reduced, &t) {
        Ok(gt) => gt,
        Err(e) => return fail("action undefined", json!(e.to_string())),
    };
    if !is_standard(gt.as_marked()) {
        return fail("image not standard", json!(gt));
    }
    let lhs = compose(g, &f_of_partition(&t).expect("at least 4 points"));
    let rhs = f_of_partition(&gt).expect("at least 4 points");
    (lhs != rhs).then(
        || json!({ "generator": Generator::ALL[k].name(), "partition": t, "lhs": lhs, "rhs": rhs }),
    )
}

fn check_t_of_commutes(config: &VerifyConfig, i: u64) -> Option<Value> {
    let mut r = rng(config, "t_of_commutes", i);
    let x = random::fine_marked_set(&mut r);
    let k = rand::Rng::gen_range(&mut r, 0..4);
    let g = &config.table[k];
    let tx = t_of(&x);
    let lhs = act_partition_with(g, &to_minimal_pair(g), &tx);
    let rhs = t_of(&act_marked(g, &x));
    match lhs {
        Ok(lhs) if lhs == rhs => None,
        lhs => Some(json!({
            "generator": Generator::ALL[k].name(),
            "marked_set": x,
            "lhs": lhs.map_err(|e| e.to_string()),
            "rhs": rhs,
        })),
    }
}

fn check_t_of_mesh(config: &VerifyConfig, i: u64) -> Option<Value> {
    let mut r = rng(config, "t_of_mesh", i);
    let x = random::fine_marked_set(&mut r);
    let t = t_of(&x);
    let eighth = ExactNumber::dyadic(1, 3);
    let ok = mesh(t.as_marked()) <= eighth && i_n(2).is_subset_of(&t);
    (!ok).then(|| json!({ "marked_set": x, "t_of": t }))
}

/// Every standard partition whose subdivision tree has depth at most `depth`.
pub fn enumerate_partitions(depth: u32) -> Vec<DyadicPartition> {
    fn rec(a: &ExactNumber, b: &ExactNumber, depth: u32) -> Vec<Vec<ExactNumber>> {
        // point lists for [a, b], excluding a
        let mut out = vec![vec![b.clone()]];
        if depth > 0 {
            let m = a.midpoint(b);
            let left = rec(a, &m, depth - 1);
            let right = rec(&m, b, depth - 1);
            for l in &left {
                for r in &right {
                    let mut v = l.clone();
                    v.extend_from_slice(r);
                    out.push(v);
                }
            }
        }
        out
    }
    rec(&ExactNumber::zero(), &ExactNumber::one(), depth)
        .into_iter()
        .map(|mut tail| {
            tail.insert(0, ExactNumber::zero());
            DyadicPartition::try_from(tail).expect("subdivision leaves are standard")
        })
        .collect()
}

fn check_maximality(config: &VerifyConfig, i: u64) -> Option<Value> {
    use std::sync::LazyLock;
    static DEPTH4: LazyLock<Vec<DyadicPartition>> = LazyLock::new(|| enumerate_partitions(4));
    let mut r = rng(config, "t_of_maximality", i);
    let x = random::separated_marked_set(&mut r);
    let t = t_of(&x);
    if !satisfies_leaf_condition(&t, &x) || !satisfies_pair_condition(&t, &x) {
        return Some(
            json!({ "marked_set": x, "t_of": t, "reason": "t_of violates the leaf condition" }),
        );
    }
    DEPTH4
        .iter()
        .find(|c| satisfies_leaf_condition(c, &x) && !c.is_subset_of(&t))
        .map(|c| json!({ "marked_set": x, "t_of": t, "larger_candidate": c }))
}

fn check_reduction(config: &VerifyConfig, i: u64) -> Option<Value> {
    let mut r = rng(config, "reduction_pipeline", i);
    let family: MarkedFamily = random::fine_family(&mut r, 50).into_iter().collect();
    match audit_reduction(&family, Side::Left) {
        Ok((_, audit)) if audit.consistent() => None,
        Ok((_, audit)) => Some(json!({ "family": family.to_vec(), "audit": audit })),
        Err(e) => Some(json!({ "family": family.to_vec(), "error": e.to_string() })),
    }
}

fn check_z_family(config: &VerifyConfig, i: u64) -> Option<Value> {
    let n = [4u64, 16, 64][i as usize];
    let z = z_family(&(0..n).collect()).expect("nonempty");
    let report = defect_marked(&z, &config.table, Side::Left).expect("nonempty");
    let bound = ExactNumber::ratio(4, n).expect("nonzero");
    let mesh_violated = z.iter().all(|x| mesh(x) > ExactNumber::dyadic(1, 4));
    (report.max_defect > bound || !mesh_violated).then(|| json!({ "n": n, "report": report }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        // full binary trees of depth <= d: a(d+1) = 1 + a(d)^2
        let counts: Vec<usize> = (0..=4).map(|d| enumerate_partitions(d).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 26, 677]);
    }

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let config = VerifyConfig {
            cases: Some(20),
            ..VerifyConfig::default()
        };
        let a = run(&config);
        assert!(a.passed, "{a:#?}");
        assert_eq!(a, run(&config));
        assert_eq!(a.suite("f_t_equivariance").unwrap().cases, 20);
        assert_eq!(a.suite("relations").unwrap().cases, 2);
    }

    #[test]
    fn corrupted_table_is_caught() {
        let mut table = generators();
        table.swap(2, 3);
        let config = VerifyConfig {
            cases: Some(10),
            table,
            ..VerifyConfig::default()
        };
        let report = run(&config);
        assert!(!report.passed);
        let t = report.suite("generator_table").unwrap();
        assert_eq!(t.failures, 2);
        assert!(t.counterexample.is_some());
        assert!(report.suite("group_axioms").unwrap().failures > 0);
    }
}

//! Følner-defect audits on F and on marked sets, and the reduction from
//! mesh-bounded marked families to finite subsets of F.
//!
//! Symmetric differences are counted exactly over canonical keys (for
//! elements) or point lists (for marked sets). Families are ordered sets, so
//! every report is independent of the order in which work was scheduled.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::ExactNumber;
use crate::felement::{
    act_marked, act_marked_side, compose, f_of_partition, generators, CanonicalKey, FElement,
    Generator, Side,
};
use crate::par;
use crate::partition::{mesh, t_of, MarkedSet};

/// Mesh bound required of every member of a family fed to [`reduce_to_f`].
pub fn mesh_bound() -> ExactNumber {
    ExactNumber::dyadic(1, 4)
}

/// Mesh bound that still holds after one generator has acted.
pub fn post_action_mesh_bound() -> ExactNumber {
    ExactNumber::dyadic(1, 3)
}

/// A finite set of group elements, deduplicated and ordered by canonical key.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ElementSet {
    elements: BTreeMap<CanonicalKey, FElement>,
}

impl ElementSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false when an equal element was already present.
    pub fn insert(&mut self, f: FElement) -> bool {
        let key = f.canonical_key();
        if self.elements.contains_key(&key) {
            return false;
        }
        self.elements.insert(key, f);
        true
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, f: &FElement) -> bool {
        self.elements.contains_key(&f.canonical_key())
    }

    pub fn contains_key(&self, key: &CanonicalKey) -> bool {
        self.elements.contains_key(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = &FElement> {
        self.elements.values()
    }

    pub fn keys(&self) -> impl Iterator<Item = &CanonicalKey> {
        self.elements.keys()
    }

    pub fn to_vec(&self) -> Vec<FElement> {
        self.elements.values().cloned().collect()
    }

    /// `{g ∘ a : a ∈ self}`.
    pub fn left_translate(&self, g: &FElement) -> ElementSet {
        let items = self.to_vec();
        par::map(&items, |a| compose(g, a)).into_iter().collect()
    }

    fn key_set(&self) -> BTreeSet<&CanonicalKey> {
        self.elements.keys().collect()
    }
}

impl FromIterator<FElement> for ElementSet {
    fn from_iter<I: IntoIterator<Item = FElement>>(iter: I) -> Self {
        let mut out = ElementSet::new();
        for f in iter {
            out.insert(f);
        }
        out
    }
}

/// A finite family of marked sets, deduplicated and ordered by point list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MarkedFamily {
    members: BTreeSet<MarkedSet>,
}

impl MarkedFamily {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, x: MarkedSet) -> bool {
        self.members.insert(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: &MarkedSet) -> bool {
        self.members.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = &MarkedSet> {
        self.members.iter()
    }

    pub fn to_vec(&self) -> Vec<MarkedSet> {
        self.members.iter().cloned().collect()
    }

    /// Image of the family under `g` acting from `side`.
    pub fn act(&self, g: &FElement, side: Side) -> MarkedFamily {
        let items = self.to_vec();
        par::map(&items, |x| act_marked_side(g, x, side))
            .into_iter()
            .collect()
    }
}

impl FromIterator<MarkedSet> for MarkedFamily {
    fn from_iter<I: IntoIterator<Item = MarkedSet>>(iter: I) -> Self {
        MarkedFamily {
            members: iter.into_iter().collect(),
        }
    }
}

fn sym_diff<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> usize {
    a.symmetric_difference(b).count()
}

/// Defect of one generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorDefect {
    pub generator: String,
    pub count: usize,
    pub defect: ExactNumber,
}

/// Per-generator symmetric-difference counts for a family.
///
/// `defect * family_size == count` holds exactly for every entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FolnerReport {
    pub family_size: usize,
    pub side: Side,
    pub generators: Vec<GeneratorDefect>,
    pub max_defect: ExactNumber,
}

impl FolnerReport {
    fn from_counts(family_size: usize, side: Side, labelled: Vec<(String, usize)>) -> Self {
        let generators: Vec<GeneratorDefect> = labelled
            .into_iter()
            .map(|(generator, count)| GeneratorDefect {
                defect: ExactNumber::ratio(count as u64, family_size as u64)
                    .expect("family is nonempty"),
                generator,
                count,
            })
            .collect();
        let max_defect = generators
            .iter()
            .map(|g| g.defect.clone())
            .max()
            .unwrap_or_else(ExactNumber::zero);
        FolnerReport {
            family_size,
            side,
            generators,
            max_defect,
        }
    }

    pub fn defect_of(&self, label: &str) -> Option<&GeneratorDefect> {
        self.generators.iter().find(|g| g.generator == label)
    }
}

/// Display label for an acting element: a generator name, `id`, or `g<i>`.
pub fn element_label(f: &FElement, index: usize) -> String {
    if let Some(g) = Generator::identify(f) {
        g.name().to_string()
    } else if f.is_identity() {
        "id".to_string()
    } else {
        format!("g{index}")
    }
}

/// `|g·A △ A|` for each `g` in `gens`, with `g` acting by left
/// multiplication (`Left`) or `g^{-1}` doing so (`Right`).
pub fn defect_elements(a: &ElementSet, gens: &[FElement], side: Side) -> Result<FolnerReport> {
    if a.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let base = a.key_set();
    let counts = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let image = a.left_translate(&side.effective(g));
            (element_label(g, i), sym_diff(&base, &image.key_set()))
        })
        .collect();
    Ok(FolnerReport::from_counts(a.len(), side, counts))
}

/// `|g·Z △ Z|` for each `g`, under the pointwise action on marked sets.
pub fn defect_marked(z: &MarkedFamily, gens: &[FElement], side: Side) -> Result<FolnerReport> {
    if z.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let counts = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let image = z.act(g, side);
            (element_label(g, i), sym_diff(&z.members, &image.members))
        })
        .collect();
    Ok(FolnerReport::from_counts(z.len(), side, counts))
}

/// `{ {0, 1 - 2^{-n-2}, 1} : n ∈ A }`.
pub fn z_family(a: &BTreeSet<u64>) -> Result<MarkedFamily> {
    if a.is_empty() {
        return Err(Error::EmptyFamily);
    }
    Ok(a.iter()
        .map(|&n| {
            MarkedSet::new(vec![
                ExactNumber::zero(),
                ExactNumber::one_minus_pow2(n + 2),
                ExactNumber::one(),
            ])
            .expect("three increasing points")
        })
        .collect())
}

/// Largest mesh over the family.
pub fn mesh_max(z: &MarkedFamily) -> Result<ExactNumber> {
    z.iter().map(mesh).max().ok_or(Error::EmptyFamily)
}

/// Outcome of the set identity `{f_{T(X)} : X ∈ g·Z} = {g ∘ f_{T(Z)} : Z ∈ Z}`
/// for one generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub generator: String,
    pub post_action_mesh: ExactNumber,
    pub post_action_mesh_ok: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub family_size: usize,
    pub element_count: usize,
    pub collisions: usize,
    pub mesh_max: ExactNumber,
    pub identities: Vec<IdentityCheck>,
}

impl ReductionReport {
    pub fn all_identities_hold(&self) -> bool {
        self.identities
            .iter()
            .all(|c| c.holds && c.post_action_mesh_ok)
    }
}

fn f_t_of(x: &MarkedSet) -> FElement {
    f_of_partition(&t_of(x)).expect("mesh bound forces at least 3 points")
}

/// `𝒜 = {f_{T(Z)} : Z ∈ 𝒵}` together with the identity checks for each of the
/// four generators acting on the left.
///
/// Requires every member of `z` to have mesh at most 1/16.
pub fn reduce_to_f(z: &MarkedFamily) -> Result<(ElementSet, ReductionReport)> {
    let mesh_max = mesh_max(z)?;
    if mesh_max > mesh_bound() {
        return Err(Error::MeshTooLarge {
            mesh: mesh_max.to_string(),
            bound: mesh_bound().to_string(),
        });
    }
    let members = z.to_vec();
    let images: Vec<FElement> = par::map(&members, f_t_of);
    let elements: ElementSet = images.iter().cloned().collect();

    let identities = Generator::ALL
        .into_iter()
        .map(|g| {
            let ge = g.element();
            let moved: Vec<MarkedSet> = par::map(&members, |x| act_marked(ge, x));
            let post_action_mesh = moved.iter().map(mesh).max().expect("nonempty");
            let lhs: ElementSet = par::map(&moved, f_t_of).into_iter().collect();
            let rhs: ElementSet = par::map(&images, |f| compose(ge, f)).into_iter().collect();
            IdentityCheck {
                generator: g.name().to_string(),
                post_action_mesh_ok: post_action_mesh <= post_action_mesh_bound(),
                post_action_mesh,
                holds: lhs.key_set() == rhs.key_set(),
            }
        })
        .collect();

    let report = ReductionReport {
        family_size: z.len(),
        element_count: elements.len(),
        collisions: z.len() - elements.len(),
        mesh_max,
        identities,
    };
    Ok((elements, report))
}

/// Per-generator comparison of the element defect against the transferred
/// marked defect.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub generator: String,
    pub marked_count: usize,
    pub element_count: usize,
    /// `δ·|𝒵|/|𝒜|`, i.e. `marked_count / |𝒜|`.
    pub bound: ExactNumber,
    pub element_defect: ExactNumber,
    pub holds: bool,
}

/// Everything the reduction pipeline measures for one family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionAudit {
    pub marked: FolnerReport,
    pub reduction: ReductionReport,
    pub elements: FolnerReport,
    pub bounds: Vec<BoundCheck>,
}

impl ReductionAudit {
    pub fn consistent(&self) -> bool {
        self.reduction.all_identities_hold() && self.bounds.iter().all(|b| b.holds)
    }
}

/// Mesh check, marked audit, reduction, element audit and the bound
/// `defect(𝒜) ≤ δ·|𝒵|/|𝒜|` for each of the four generators.
pub fn audit_reduction(z: &MarkedFamily, side: Side) -> Result<(ElementSet, ReductionAudit)> {
    let (elements, reduction) = reduce_to_f(z)?;
    let gens = generators();
    let marked = defect_marked(z, &gens, side)?;
    let element_report = defect_elements(&elements, &gens, side)?;
    let bounds = marked
        .generators
        .iter()
        .zip(&element_report.generators)
        .map(|(m, e)| {
            let bound = ExactNumber::ratio(m.count as u64, elements.len() as u64)
                .expect("nonempty element set");
            BoundCheck {
                generator: m.generator.clone(),
                marked_count: m.count,
                element_count: e.count,
                holds: e.defect <= bound,
                element_defect: e.defect.clone(),
                bound,
            }
        })
        .collect();
    Ok((
        elements,
        ReductionAudit {
            marked,
            reduction,
            elements: element_report,
            bounds,
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeshCheck {
    pub mesh_max: ExactNumber,
    pub bound: ExactNumber,
    pub ok: bool,
}

impl MeshCheck {
    pub fn of(z: &MarkedFamily) -> Result<Self> {
        let mesh_max = mesh_max(z)?;
        let bound = mesh_bound();
        Ok(MeshCheck {
            ok: mesh_max <= bound,
            mesh_max,
            bound,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub max_defect: ExactNumber,
    pub epsilon: ExactNumber,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mesh: Option<MeshCheck>,
}

/// PASS iff `max_defect < epsilon` (strict).
pub fn folner_certificate(report: &FolnerReport, epsilon: &ExactNumber) -> Certificate {
    Certificate {
        verdict: if &report.max_defect < epsilon {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        max_defect: report.max_defect.clone(),
        epsilon: epsilon.clone(),
        mesh: None,
    }
}

/// As [`folner_certificate`], also recording the mesh condition of the family.
pub fn folner_certificate_marked(
    report: &FolnerReport,
    epsilon: &ExactNumber,
    z: &MarkedFamily,
) -> Result<Certificate> {
    let mut cert = folner_certificate(report, epsilon);
    cert.mesh = Some(MeshCheck::of(z)?);
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::felement::invert;
    use crate::partition::DyadicPartition;

    fn n(s: &str) -> ExactNumber {
        s.parse().unwrap()
    }

    fn range(lo: u64, hi: u64) -> BTreeSet<u64> {
        (lo..hi).collect()
    }

    #[test]
    fn identity_singleton_against_x0() {
        let a: ElementSet = [FElement::identity()].into_iter().collect();
        let r = defect_elements(&a, &[Generator::X0.element().clone()], Side::Left).unwrap();
        assert_eq!(r.generators[0].count, 2);
        assert_eq!(r.max_defect, n("2"));
        assert_eq!(r.generators[0].generator, "x0");
    }

    #[test]
    fn identity_generator_has_zero_defect() {
        let a: ElementSet = generators().into_iter().collect();
        let r = defect_elements(&a, &[FElement::identity()], Side::Right).unwrap();
        assert_eq!(r.max_defect, n("0"));
        assert_eq!(r.generators[0].generator, "id");
        let z = z_family(&range(0, 5)).unwrap();
        let r = defect_marked(&z, &[FElement::identity()], Side::Left).unwrap();
        assert_eq!(r.max_defect, n("0"));
    }

    #[test]
    fn empty_families_are_rejected() {
        let gens = generators();
        assert_eq!(
            defect_elements(&ElementSet::new(), &gens, Side::Left),
            Err(Error::EmptyFamily)
        );
        assert_eq!(
            defect_marked(&MarkedFamily::new(), &gens, Side::Left),
            Err(Error::EmptyFamily)
        );
        assert_eq!(z_family(&BTreeSet::new()), Err(Error::EmptyFamily));
        assert_eq!(mesh_max(&MarkedFamily::new()), Err(Error::EmptyFamily));
    }

    #[test]
    fn z_family_members() {
        let z = z_family(&[0].into()).unwrap();
        assert_eq!(
            z.to_vec(),
            vec![MarkedSet::parse(&["0", "3/4", "1"]).unwrap()]
        );
        let z = z_family(&[1].into()).unwrap();
        assert_eq!(
            z.to_vec(),
            vec![MarkedSet::parse(&["0", "7/8", "1"]).unwrap()]
        );
        let z = z_family(&range(0, 3)).unwrap();
        assert_eq!(z.len(), 3);
        assert_eq!(mesh_max(&z).unwrap(), n("15/16"));
        assert!(z.iter().all(|x| mesh(x) >= n("3/4")));
    }

    #[test]
    fn z_family_defect_sixteen() {
        let z = z_family(&range(0, 16)).unwrap();
        let r = defect_marked(&z, &generators(), Side::Left).unwrap();
        // x0, x1 shift n -> n-1 and push n = 0 out; inverses shift n -> n+1
        for g in &r.generators {
            assert_eq!(g.count, 2, "{}", g.generator);
            assert_eq!(g.defect, n("1/8"));
        }
        assert!(r.max_defect <= n("4/16"));
    }

    #[test]
    fn endpoints_only_family_is_fixed() {
        let z: MarkedFamily = [MarkedSet::parse(&["0", "1"]).unwrap()]
            .into_iter()
            .collect();
        let r = defect_marked(&z, &[Generator::X0.element().clone()], Side::Left).unwrap();
        assert_eq!(r.max_defect, n("0"));
    }

    #[test]
    fn mesh_max_examples() {
        let z: MarkedFamily = [MarkedSet::parse(&["0", "1/2", "1"]).unwrap()]
            .into_iter()
            .collect();
        assert_eq!(mesh_max(&z).unwrap(), n("1/2"));
        let grid: MarkedFamily = [DyadicPartition::uniform(4).into_marked()]
            .into_iter()
            .collect();
        assert_eq!(mesh_max(&grid).unwrap(), n("1/16"));
    }

    #[test]
    fn reduce_single_grid() {
        let grid = DyadicPartition::uniform(4);
        let z: MarkedFamily = [grid.clone().into_marked()].into_iter().collect();
        let (a, report) = reduce_to_f(&z).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(report.collisions, 0);
        let expected = crate::felement::from_pair(
            &crate::felement::PartitionPair::new(crate::partition::i_n(14), grid).unwrap(),
        );
        assert!(a.contains(&expected));
        assert!(report.all_identities_hold());
    }

    #[test]
    fn reduce_rejects_coarse_families() {
        let z = z_family(&range(0, 4)).unwrap();
        assert!(matches!(reduce_to_f(&z), Err(Error::MeshTooLarge { .. })));
    }

    #[test]
    fn certificates_are_strict() {
        let a: ElementSet = [FElement::identity()].into_iter().collect();
        let zero = defect_elements(&a, &[FElement::identity()], Side::Left).unwrap();
        assert_eq!(folner_certificate(&zero, &n("1/2")).verdict, Verdict::Pass);
        assert_eq!(folner_certificate(&zero, &n("0")).verdict, Verdict::Fail);
        let two = defect_elements(&a, &[Generator::X0.element().clone()], Side::Left).unwrap();
        assert_eq!(folner_certificate(&two, &n("1")).verdict, Verdict::Fail);
        assert_eq!(folner_certificate(&two, &n("2")).verdict, Verdict::Fail);
    }

    #[test]
    fn z_family_certificate_at_64() {
        let z = z_family(&range(0, 64)).unwrap();
        let r = defect_marked(&z, &generators(), Side::Left).unwrap();
        let cert = folner_certificate_marked(&r, &n("5/64"), &z).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        assert!(!cert.mesh.unwrap().ok);
    }

    #[test]
    fn inverse_with_opposite_side() {
        let z = z_family(&range(3, 11)).unwrap();
        let gens = generators();
        let inv: Vec<FElement> = gens.iter().map(invert).collect();
        let l = defect_marked(&z, &gens, Side::Left).unwrap();
        let r = defect_marked(&z, &inv, Side::Right).unwrap();
        let counts =
            |rep: &FolnerReport| rep.generators.iter().map(|g| g.count).collect::<Vec<_>>();
        assert_eq!(counts(&l), counts(&r));
    }

    #[test]
    fn report_json_uses_exact_strings() {
        let z = z_family(&range(0, 4)).unwrap();
        let r = defect_marked(&z, &generators()[..1], Side::Left).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"family_size":4,"side":"left","generators":[{"generator":"x0","count":2,"defect":"1/2"}],"max_defect":"1/2"}"#
        );
    }
}

//! Injectivity, surjectivity and density of `π: ℂF(G) → A(G)`.
//!
//! Every verdict is available twice: from the structural criteria on `G`,
//! and from exact elimination on the coordinate matrix of `π`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::bisection::{FullBisection, FullGroup};
use crate::error::{Error, Result};
use crate::groupoid::{ArrowId, FiniteGroupoid};
use crate::linalg::{reduce, Reduced};
use crate::scalar::{Rational, Scalar};
use crate::steinberg::{pi, GroupRingElement, SteinbergElement};

/// Coordinate matrix of `π`: rows are arrows, columns are the elements of
/// `F(G)` in canonical order, and column `U` is the indicator vector of `U`.
#[derive(Clone, Debug)]
pub struct PiMatrix {
    group: FullGroup,
    arrows: usize,
}

impl PiMatrix {
    pub fn new(g: &FiniteGroupoid, cap: usize) -> Result<Self> {
        Ok(PiMatrix { group: FullGroup::new(g, cap)?, arrows: g.len() })
    }

    pub fn full_group(&self) -> &FullGroup {
        &self.group
    }

    pub fn rows(&self) -> usize {
        self.arrows
    }

    pub fn cols(&self) -> usize {
        self.group.len()
    }

    pub fn entry(&self, arrow: usize, col: usize) -> bool {
        self.group.elements()[col].as_bisection().contains(ArrowId(arrow))
    }

    /// The matrix with extra right-hand columns appended.
    fn augmented(&self, extra: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let width = self.cols() + extra.len();
        let mut m = vec![vec![BigInt::from(0); width]; self.arrows];
        for (j, u) in self.group.elements().iter().enumerate() {
            for &a in u.arrows() {
                m[a.0][j] = BigInt::one();
            }
        }
        for (k, col) in extra.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[i][self.cols() + k] = x.clone();
            }
        }
        m
    }

    pub fn reduce(&self) -> Reduced {
        reduce(&self.augmented(&[]), self.cols())
    }

    pub fn rank(&self) -> usize {
        self.reduce().rank()
    }

    /// Exact basis of `ker π`, one element per free column.
    pub fn kernel_basis(&self) -> Vec<GroupRingElement> {
        self.reduce()
            .kernel()
            .into_iter()
            .map(|v| {
                GroupRingElement::from_terms(
                    v.into_iter()
                        .enumerate()
                        .map(|(j, c)| (self.group.elements()[j].clone(), Scalar::real(Rational::from_bigint(c)))),
                )
            })
            .collect()
    }

    /// A preimage of `f` under `π`, or `None` when `f` is outside the image.
    pub fn preimage(&self, f: &SteinbergElement) -> Option<GroupRingElement> {
        let (re, re_scale) = integer_column(f.values().iter().map(|x| &x.re));
        let (im, im_scale) = integer_column(f.values().iter().map(|x| &x.im));
        let reduced = reduce(&self.augmented(&[re, im]), self.cols());
        let x_re = reduced.solve_column(self.cols())?;
        let x_im = reduced.solve_column(self.cols() + 1)?;
        let (re_scale, im_scale) = (Rational::from_bigint(re_scale), Rational::from_bigint(im_scale));
        Some(GroupRingElement::from_terms(self.group.elements().iter().enumerate().map(|(j, u)| {
            (u.clone(), Scalar::new(&x_re[j] / &re_scale, &x_im[j] / &im_scale))
        })))
    }

    /// For each arrow `γ`, whether `1_γ` lies in the image of `π`.
    pub fn point_indicators_in_image(&self) -> Vec<bool> {
        self.indicators_in_image((0..self.arrows).map(|k| vec![ArrowId(k)]))
    }

    /// For each arrow set `B`, whether `1_B` lies in the image of `π`, from a
    /// single elimination.
    pub fn indicators_in_image<I, S>(&self, sets: I) -> Vec<bool>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[ArrowId]>,
    {
        let columns: Vec<Vec<BigInt>> = sets
            .into_iter()
            .map(|set| {
                let mut col = vec![BigInt::from(0); self.arrows];
                for a in set.as_ref() {
                    col[a.0] = BigInt::one();
                }
                col
            })
            .collect();
        let reduced = reduce(&self.augmented(&columns), self.cols());
        (0..columns.len()).map(|k| reduced.solve_column(self.cols() + k).is_some()).collect()
    }
}

/// Scales a rational vector to an integer one, returning the common factor.
fn integer_column<'a>(values: impl Iterator<Item = &'a Rational> + Clone) -> (Vec<BigInt>, BigInt) {
    let scale = values.clone().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
    let col = values.map(|x| x.numer() * (&scale / x.denom())).collect();
    (col, scale)
}

/// Exact basis of `ker π`; empty iff `π` is injective.
pub fn kernel_basis(g: &FiniteGroupoid, cap: usize) -> Result<Vec<GroupRingElement>> {
    Ok(PiMatrix::new(g, cap)?.kernel_basis())
}

/// `dim π(ℂF(G))`.
pub fn image_dimension(g: &FiniteGroupoid, cap: usize) -> Result<usize> {
    Ok(PiMatrix::new(g, cap)?.rank())
}

/// In finite dimensions every norm closure of the image is its span, so the
/// image is dense in the full C*-algebra iff it spans all of `A(G)`.
pub fn dense_in_full_cstar(g: &FiniteGroupoid, cap: usize) -> Result<bool> {
    Ok(image_dimension(g, cap)? == g.len())
}

pub fn membership_in_image(g: &FiniteGroupoid, f: &SteinbergElement, cap: usize) -> Result<Option<GroupRingElement>> {
    if f.len() != g.len() {
        return Err(Error::GroupoidMismatch { left: f.len(), right: g.len() });
    }
    Ok(PiMatrix::new(g, cap)?.preimage(f))
}

/// The structural criterion deciding injectivity of `π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InjectivityCondition {
    /// All isotropy, at most one nontrivial isotropy group.
    IsotropyAtMostOneNontrivial,
    /// Not all isotropy, fewer than three non-units.
    FewNonUnits,
    /// All isotropy, two or more nontrivial isotropy groups.
    IsotropySeveralNontrivial,
    /// Not all isotropy, three or more non-units.
    ManyNonUnits,
}

impl InjectivityCondition {
    pub fn injective(self) -> bool {
        matches!(self, Self::IsotropyAtMostOneNontrivial | Self::FewNonUnits)
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::IsotropyAtMostOneNontrivial => "all isotropy with at most one nontrivial isotropy group",
            Self::FewNonUnits => "not all isotropy with fewer than 3 non-units",
            Self::IsotropySeveralNontrivial => "all isotropy with at least 2 nontrivial isotropy groups",
            Self::ManyNonUnits => "not all isotropy with at least 3 non-units",
        }
    }
}

pub fn injectivity_condition(g: &FiniteGroupoid) -> InjectivityCondition {
    match (g.is_all_isotropy(), g.nontrivial_isotropy_count() <= 1, g.non_unit_count() < 3) {
        (true, true, _) => InjectivityCondition::IsotropyAtMostOneNontrivial,
        (true, false, _) => InjectivityCondition::IsotropySeveralNontrivial,
        (false, _, true) => InjectivityCondition::FewNonUnits,
        (false, _, false) => InjectivityCondition::ManyNonUnits,
    }
}

pub fn injective_by_theorem(g: &FiniteGroupoid) -> bool {
    injectivity_condition(g).injective()
}

/// `π` is onto iff `G` is a group.
pub fn surjective_by_theorem(g: &FiniteGroupoid) -> bool {
    g.unit_count() == 1
}

/// Shape of the arrow pair a kernel witness is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessCase {
    /// Two loops at distinct units; the groupoid is all isotropy.
    IsotropyPair,
    /// `s(γ₁) = r(γ₂)` and `s(γ₂) ≠ r(γ₁)`.
    JoinedArrows,
    /// Four distinct endpoints.
    SeparateArrows,
    /// `γ₁` a loop away from both endpoints of `γ₂`.
    SeparateLoopAndArrow,
    /// `γ₁` a loop at `r(γ₂)`.
    LoopWithTail,
    /// `s(γ₁) = r(γ₂)` and `s(γ₂) = r(γ₁)`.
    ParallelArrows,
}

impl WitnessCase {
    pub const ALL: [WitnessCase; 6] = [
        Self::IsotropyPair,
        Self::JoinedArrows,
        Self::SeparateArrows,
        Self::SeparateLoopAndArrow,
        Self::LoopWithTail,
        Self::ParallelArrows,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Self::IsotropyPair => "isotropy",
            Self::JoinedArrows => "i",
            Self::SeparateArrows => "ii",
            Self::SeparateLoopAndArrow => "iii",
            Self::LoopWithTail => "iv",
            Self::ParallelArrows => "v",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::IsotropyPair => "isotropy pair",
            Self::JoinedArrows => "joined arrows",
            Self::SeparateArrows => "separate arrows",
            Self::SeparateLoopAndArrow => "separate loop and arrow",
            Self::LoopWithTail => "loop with tail",
            Self::ParallelArrows => "parallel arrows",
        }
    }
}

/// One named full bisection in a witness, with its integer coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTerm {
    pub name: &'static str,
    pub coefficient: i64,
    pub bisection: FullBisection,
}

/// A nonzero element of `ker π` together with the arrows it was built from.
#[derive(Clone, Debug)]
pub struct Witness {
    /// The pair as selected, before any inversion.
    pub selected: (ArrowId, ArrowId),
    /// Classification after inversions.
    pub case: WitnessCase,
    /// The case whose construction was applied; differs from `case` only for
    /// parallel arrows, which are rebuilt as a loop with tail.
    pub construction: WitnessCase,
    /// The pair entering the construction.
    pub pair: (ArrowId, ArrowId),
    pub terms: Vec<WitnessTerm>,
    pub element: GroupRingElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessTermReport {
    pub name: &'static str,
    pub coefficient: i64,
    pub arrows: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub case: WitnessCase,
    pub construction: WitnessCase,
    pub selected: [String; 2],
    pub pair: [String; 2],
    pub terms: Vec<WitnessTermReport>,
    pub pi_is_zero: bool,
}

impl Witness {
    pub fn report(&self, g: &FiniteGroupoid) -> WitnessReport {
        let label = |a: ArrowId| g.label(a).to_string();
        WitnessReport {
            case: self.case,
            construction: self.construction,
            selected: [label(self.selected.0), label(self.selected.1)],
            pair: [label(self.pair.0), label(self.pair.1)],
            terms: self
                .terms
                .iter()
                .map(|t| WitnessTermReport {
                    name: t.name,
                    coefficient: t.coefficient,
                    arrows: t.bisection.arrows().iter().map(|&a| label(a)).collect(),
                })
                .collect(),
            pi_is_zero: pi(g, &self.element).map(|f| f.is_zero()).unwrap_or(false),
        }
    }
}

/// First pair `(γ₁, γ₂)` by arrow index with `γ₁` a non-unit, `γ₂` not
/// isotropy, and `γ₁ ∉ {γ₂, γ₂⁻¹}`.
pub fn select_pair(g: &FiniteGroupoid) -> Option<(ArrowId, ArrowId)> {
    g.non_units()
        .flat_map(|a| g.arrows().map(move |b| (a, b)))
        .find(|&(a, b)| admissible(g, a, b))
}

fn admissible(g: &FiniteGroupoid, a: ArrowId, b: ArrowId) -> bool {
    !g.is_unit(a) && !g.is_isotropy(b) && a != b && a != g.inverse(b)
}

/// Inverts `γ₁` and/or `γ₂` until the pair has one of the listed shapes.
pub fn classify_pair(g: &FiniteGroupoid, g1: ArrowId, g2: ArrowId) -> (WitnessCase, ArrowId, ArrowId) {
    let inv = |a| g.inverse(a);
    let (r1, s1, r2, s2) = (g.range(g1), g.source(g1), g.range(g2), g.source(g2));
    if g.is_isotropy(g1) {
        if s1 == r2 {
            (WitnessCase::LoopWithTail, g1, g2)
        } else if s1 == s2 {
            (WitnessCase::LoopWithTail, g1, inv(g2))
        } else {
            (WitnessCase::SeparateLoopAndArrow, g1, g2)
        }
    } else if s1 == r2 && s2 == r1 {
        (WitnessCase::ParallelArrows, g1, g2)
    } else if r1 == r2 && s1 == s2 {
        (WitnessCase::ParallelArrows, g1, inv(g2))
    } else if s1 == r2 {
        (WitnessCase::JoinedArrows, g1, g2)
    } else if s1 == s2 {
        (WitnessCase::JoinedArrows, g1, inv(g2))
    } else if r1 == r2 {
        (WitnessCase::JoinedArrows, inv(g1), g2)
    } else if r1 == s2 {
        (WitnessCase::JoinedArrows, inv(g1), inv(g2))
    } else {
        (WitnessCase::SeparateArrows, g1, g2)
    }
}

/// A nonzero element of `ker π`, built from the first admissible arrow pair.
pub fn noninjectivity_witness(g: &FiniteGroupoid) -> Result<Witness> {
    let condition = injectivity_condition(g);
    if condition.injective() {
        return Err(Error::InjectiveNoWitness(condition.description().into()));
    }
    if g.is_all_isotropy() {
        let mut nontrivial = g.units().filter(|&u| g.fiber(u, u).len() > 1);
        let (u, v) = (nontrivial.next().expect("two isotropy groups"), nontrivial.next().expect("two isotropy groups"));
        let first_loop = |w: ArrowId| *g.fiber(w, w).iter().find(|&&a| !g.is_unit(a)).expect("nontrivial isotropy");
        return isotropy_witness(g, first_loop(u), first_loop(v));
    }
    let (g1, g2) = select_pair(g).expect("admissible pair exists when not injective");
    witness_for_pair(g, g1, g2)
}

type NamedPart = (&'static str, i64, Vec<ArrowId>);

/// The witness built from a given admissible pair.
pub fn witness_for_pair(g: &FiniteGroupoid, g1: ArrowId, g2: ArrowId) -> Result<Witness> {
    if g1.0 >= g.len() || g2.0 >= g.len() || !admissible(g, g1, g2) {
        let label = |a: ArrowId| if a.0 < g.len() { g.label(a).to_string() } else { a.to_string() };
        return Err(Error::BadWitnessPair(label(g1), label(g2)));
    }
    let (case, a, b) = classify_pair(g, g1, g2);
    let (construction, a) = match case {
        WitnessCase::ParallelArrows => (WitnessCase::LoopWithTail, g.compose(b, a).expect("composable")),
        other => (other, a),
    };
    let inv = |x| g.inverse(x);
    let (r1, s1, r2, s2) = (g.range(a), g.source(a), g.range(b), g.source(b));
    let (touched, parts): (Vec<ArrowId>, Vec<NamedPart>) = match construction {
        WitnessCase::JoinedArrows => {
            let c = g.compose(a, b).expect("composable");
            (
                vec![r1, s1, s2],
                vec![
                    ("U", 1, vec![a, b, inv(c)]),
                    ("U^-1", 1, vec![inv(a), inv(b), c]),
                    ("U1", -1, vec![a, inv(a), s2]),
                    ("U2", -1, vec![b, inv(b), r1]),
                    ("U3", -1, vec![c, inv(c), s1]),
                    ("G0", 1, vec![r1, s1, s2]),
                ],
            )
        }
        WitnessCase::SeparateArrows => (
            vec![r1, s1, r2, s2],
            vec![
                ("U1", 1, vec![a, inv(a), r2, s2]),
                ("U2", 1, vec![b, inv(b), r1, s1]),
                ("U3", -1, vec![a, inv(a), b, inv(b)]),
                ("G0", -1, vec![r1, s1, r2, s2]),
            ],
        ),
        WitnessCase::SeparateLoopAndArrow => (
            vec![s1, r2, s2],
            vec![
                ("U1", 1, vec![s1, b, inv(b)]),
                ("U2", 1, vec![a, r2, s2]),
                ("U3", -1, vec![a, b, inv(b)]),
                ("G0", -1, vec![s1, r2, s2]),
            ],
        ),
        WitnessCase::LoopWithTail => {
            let c = g.compose(a, b).expect("composable");
            (
                vec![r2, s2],
                vec![
                    ("U1", 1, vec![b, inv(c)]),
                    ("U2", 1, vec![c, inv(b)]),
                    ("U3", -1, vec![b, inv(b)]),
                    ("U4", -1, vec![c, inv(c)]),
                ],
            )
        }
        WitnessCase::IsotropyPair | WitnessCase::ParallelArrows => unreachable!("not produced by classification"),
    };
    finish(g, (g1, g2), case, construction, (a, b), &touched, parts)
}

fn isotropy_witness(g: &FiniteGroupoid, g1: ArrowId, g2: ArrowId) -> Result<Witness> {
    let (u, v) = (g.range(g1), g.range(g2));
    let parts = vec![
        ("U1", 1, vec![g1, v]),
        ("U2", 1, vec![g2, u]),
        ("U3", -1, vec![g1, g2]),
        ("G0", -1, vec![u, v]),
    ];
    let case = WitnessCase::IsotropyPair;
    finish(g, (g1, g2), case, case, (g1, g2), &[u, v], parts)
}

/// Completes each part with the untouched units, forms the combination and
/// checks it lies in `ker π \ {0}`.
fn finish(
    g: &FiniteGroupoid,
    selected: (ArrowId, ArrowId),
    case: WitnessCase,
    construction: WitnessCase,
    pair: (ArrowId, ArrowId),
    touched: &[ArrowId],
    parts: Vec<(&'static str, i64, Vec<ArrowId>)>,
) -> Result<Witness> {
    let rest: Vec<ArrowId> = g.units().filter(|u| !touched.contains(u)).collect();
    let mut terms = Vec::with_capacity(parts.len());
    let mut element = GroupRingElement::zero();
    for (name, coefficient, arrows) in parts {
        let bisection = FullBisection::new(g, arrows.into_iter().chain(rest.iter().copied()))?;
        element.add_term(bisection.clone(), Scalar::from_integer(coefficient));
        terms.push(WitnessTerm { name, coefficient, bisection });
    }
    if element.is_zero() || !pi(g, &element)?.is_zero() {
        return Err(Error::Invalid(format!("witness construction for case {} failed", case.tag())));
    }
    Ok(Witness { selected, case, construction, pair, terms, element })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictPair {
    pub oracle: bool,
    pub theorem: bool,
}

impl VerdictPair {
    pub fn agrees(&self) -> bool {
        self.oracle == self.theorem
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub arrows: usize,
    pub units: usize,
    pub non_units: usize,
    pub full_group_order: usize,
    pub is_group: bool,
    pub injective: VerdictPair,
    pub injectivity_condition: InjectivityCondition,
    pub surjective: VerdictPair,
    pub kernel_dimension: usize,
    pub image_dimension: usize,
    pub dense_in_full_cstar: bool,
    pub isomorphism: bool,
    /// Every oracle verdict matches the structural criterion.
    pub agreement: bool,
    pub witness: Option<WitnessReport>,
}

/// Runs every decision procedure; a witness is attached on request when `π`
/// is not injective.
pub fn analyze(g: &FiniteGroupoid, cap: usize, with_witness: bool) -> Result<AnalysisReport> {
    let matrix = PiMatrix::new(g, cap)?;
    let rank = matrix.rank();
    let kernel_dimension = matrix.cols() - rank;
    let condition = injectivity_condition(g);
    let injective = VerdictPair { oracle: kernel_dimension == 0, theorem: condition.injective() };
    let surjective = VerdictPair { oracle: rank == g.len(), theorem: surjective_by_theorem(g) };
    let isomorphism = injective.oracle && surjective.oracle;
    let witness = if with_witness && !condition.injective() {
        Some(noninjectivity_witness(g)?.report(g))
    } else {
        None
    };
    let agreement = injective.agrees()
        && surjective.agrees()
        && isomorphism == g.is_group()
        && witness.as_ref().is_none_or(|w| w.pi_is_zero);
    Ok(AnalysisReport {
        arrows: g.len(),
        units: g.unit_count(),
        non_units: g.non_unit_count(),
        full_group_order: matrix.cols(),
        is_group: g.is_group(),
        injective,
        injectivity_condition: condition,
        surjective,
        kernel_dimension,
        image_dimension: rank,
        dense_in_full_cstar: rank == g.len(),
        isomorphism,
        agreement,
        witness,
    })
}

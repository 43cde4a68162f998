//! Corpus-wide verification: every structural criterion checked against the
//! exact linear-algebra oracle and the algebraic laws sampled at random.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{injectivity_condition, noninjectivity_witness, surjective_by_theorem, PiMatrix, WitnessCase};
use crate::bisection::{enumerate_bisections, enumerate_full_bisections, full_group_order, Bisection, FullBisection};
use crate::corpus::{generate, CorpusEntry, CorpusSpec};
use crate::error::Result;
use crate::groupoid::{ArrowId, FiniteGroupoid};
use crate::random::{random_group_ring, random_steinberg};
use crate::steinberg::{convolve, delta1, involute, pi, t_matrix, SteinbergElement};
use crate::SCHEMA_VERSION;

/// Names of the checks, in report order.
pub const CHECKS: [&str; 10] = [
    "injectivity",
    "kernel",
    "surjectivity",
    "isomorphism",
    "point-indicators",
    "witness",
    "homomorphism-laws",
    "line-sums",
    "full-bisection-membership",
    "enumeration",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Random pairs per groupoid for the homomorphism laws.
    pub law_pairs: usize,
    /// Random group ring elements per groupoid for the line-sum check.
    pub line_sum_samples: usize,
    /// Largest `|G|` for the exhaustive subset and bisection checks.
    pub exhaustive_arrow_cap: usize,
    /// Instances with larger `|F(G)|` are skipped.
    pub full_group_cap: usize,
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            law_pairs: 100,
            line_sum_samples: 100,
            exhaustive_arrow_cap: 12,
            full_group_cap: crate::bisection::DEFAULT_FULL_GROUP_CAP,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceOutcome {
    pub index: usize,
    pub expr: String,
    pub arrows: usize,
    pub units: usize,
    pub full_group_order: String,
    pub skipped: bool,
    /// `None` when the check does not apply to this instance.
    pub checks: BTreeMap<&'static str, Option<bool>>,
    pub witness_case: Option<WitnessCase>,
    pub witness_construction: Option<WitnessCase>,
    pub failures: Vec<String>,
}

impl InstanceOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub not_applicable: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub corpus: CorpusSpec,
    pub instances: usize,
    pub evaluated: usize,
    pub skipped: usize,
    pub checks: Vec<CheckSummary>,
    /// Instances per classified witness case.
    pub case_coverage: BTreeMap<WitnessCase, usize>,
    pub disagreements: usize,
    pub ok: bool,
    pub outcomes: Vec<InstanceOutcome>,
}

/// Same-size arrow subsets that are full bisections, by exhaustive filter.
pub fn naive_full_bisections(g: &FiniteGroupoid) -> Vec<FullBisection> {
    let n = g.len();
    assert!(n < 32, "subset filter needs |G| < 32");
    let mut out: Vec<FullBisection> = (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == g.unit_count())
        .filter_map(|mask| {
            let arrows = (0..n).filter(|i| mask >> i & 1 == 1).map(ArrowId);
            Bisection::new(g, arrows).ok().and_then(|b| FullBisection::try_from_bisection(g, b).ok())
        })
        .collect();
    out.sort();
    out
}

/// Evaluates every check on one groupoid.
pub fn verify_instance(entry: &CorpusEntry, seed: u64, options: &VerifyOptions) -> Result<InstanceOutcome> {
    let g = &entry.groupoid;
    let order = full_group_order(g);
    let mut outcome = InstanceOutcome {
        index: entry.index,
        expr: entry.expr.to_string(),
        arrows: g.len(),
        units: g.unit_count(),
        full_group_order: order.to_string(),
        skipped: false,
        checks: CHECKS.iter().map(|&c| (c, None)).collect(),
        witness_case: None,
        witness_construction: None,
        failures: Vec::new(),
    };
    if order.to_usize().is_none_or(|n| n > options.full_group_cap) {
        outcome.skipped = true;
        return Ok(outcome);
    }
    let record = |outcome: &mut InstanceOutcome, name: &'static str, ok: bool, detail: String| {
        outcome.checks.insert(name, Some(ok));
        if !ok {
            outcome.failures.push(format!("{name}: {detail}"));
        }
    };

    let matrix = PiMatrix::new(g, options.full_group_cap)?;
    let group = matrix.full_group();
    let rank = matrix.rank();
    let kernel = matrix.kernel_basis();
    let condition = injectivity_condition(g);
    record(
        &mut outcome,
        "injectivity",
        kernel.is_empty() == condition.injective(),
        format!("kernel dimension {} but criterion says {}", kernel.len(), condition.description()),
    );
    let kernel_ok = kernel.len() + rank == group.len()
        && kernel.iter().all(|v| !v.is_zero() && pi(g, v).is_ok_and(|f| f.is_zero()));
    record(&mut outcome, "kernel", kernel_ok, "kernel basis is not an exact nullspace".into());
    let surjective = rank == g.len();
    record(
        &mut outcome,
        "surjectivity",
        surjective == surjective_by_theorem(g),
        format!("image dimension {rank} of {} with {} units", g.len(), g.unit_count()),
    );
    record(
        &mut outcome,
        "isomorphism",
        (kernel.is_empty() && surjective) == g.is_group(),
        "isomorphism verdict differs from being a group".into(),
    );
    let points = matrix.point_indicators_in_image();
    let bad: Vec<&str> = g.arrows().filter(|a| points[a.0] != g.is_group()).map(|a| g.label(a)).collect();
    record(&mut outcome, "point-indicators", bad.is_empty(), format!("unexpected membership of 1_γ for {bad:?}"));

    if !condition.injective() {
        match noninjectivity_witness(g) {
            Ok(w) => {
                outcome.witness_case = Some(w.case);
                outcome.witness_construction = Some(w.construction);
                let ok = !w.element.is_zero() && pi(g, &w.element)?.is_zero();
                record(&mut outcome, "witness", ok, format!("case {} witness is not in the kernel", w.case.tag()));
            }
            Err(e) => record(&mut outcome, "witness", false, e.to_string()),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(entry.index as u64);
    let mut law_failure = None;
    for _ in 0..options.law_pairs {
        let (f, h) = (random_steinberg(g, &mut rng, 4), random_steinberg(g, &mut rng, 4));
        let (x, y) = (random_group_ring(group, &mut rng, 4), random_group_ring(group, &mut rng, 4));
        if let Some(law) = first_broken_law(g, &f, &h, &x, &y)? {
            law_failure = Some(law);
            break;
        }
    }
    record(&mut outcome, "homomorphism-laws", law_failure.is_none(), format!("{} fails", law_failure.unwrap_or_default()));

    let mut line_failure = None;
    for _ in 0..options.line_sum_samples {
        let x = random_group_ring(group, &mut rng, 4);
        let f = pi(g, &x)?;
        if !delta1(g, &f)?.is_zero() {
            line_failure = Some(format!("δ₁(π(x)) ≠ 0 for x = {}", x.describe(g)));
            break;
        }
        if t_matrix(g, &f)?.common_line_sum().is_none() {
            line_failure = Some(format!("unequal line sums of T(π(x)) for x = {}", x.describe(g)));
            break;
        }
    }
    record(&mut outcome, "line-sums", line_failure.is_none(), line_failure.unwrap_or_default());

    if g.len() <= options.exhaustive_arrow_cap {
        let bisections: Vec<Bisection> =
            enumerate_bisections(g, options.exhaustive_arrow_cap)?.into_iter().filter(|b| !b.is_empty()).collect();
        let in_image = matrix.indicators_in_image(bisections.iter().map(|b| b.arrows()));
        let bad: Vec<String> = bisections
            .iter()
            .zip(&in_image)
            .filter(|(b, &member)| member != b.is_full(g))
            .map(|(b, _)| b.describe(g))
            .collect();
        record(&mut outcome, "full-bisection-membership", bad.is_empty(), format!("membership differs from fullness for {bad:?}"));

        let enumerated = enumerate_full_bisections(g, options.full_group_cap)?;
        let naive = naive_full_bisections(g);
        let ok = enumerated == naive && order == naive.len().into();
        record(
            &mut outcome,
            "enumeration",
            ok,
            format!("enumerated {} vs naive {} vs order {order}", enumerated.len(), naive.len()),
        );
    }
    Ok(outcome)
}

/// Name of the first failing law among `T(f∗h) = T(f)T(h)`,
/// `T(f*) = T(f)†` and `π(xy) = π(x)∗π(y)`, `π(x*) = π(x)*`.
fn first_broken_law(
    g: &FiniteGroupoid,
    f: &SteinbergElement,
    h: &SteinbergElement,
    x: &crate::steinberg::GroupRingElement,
    y: &crate::steinberg::GroupRingElement,
) -> Result<Option<&'static str>> {
    if t_matrix(g, &convolve(g, f, h)?)? != &t_matrix(g, f)? * &t_matrix(g, h)? {
        return Ok(Some("T(f∗g) = T(f)T(g)"));
    }
    if t_matrix(g, &involute(g, f)?)? != t_matrix(g, f)?.adjoint() {
        return Ok(Some("T(f*) = T(f)†"));
    }
    if pi(g, &x.mul(g, y)?)? != convolve(g, &pi(g, x)?, &pi(g, y)?)? {
        return Ok(Some("π(xy) = π(x)∗π(y)"));
    }
    if pi(g, &x.star(g))? != involute(g, &pi(g, x)?)? {
        return Ok(Some("π(x*) = π(x)*"));
    }
    Ok(None)
}

/// Generates the corpus and verifies every instance, spreading instances
/// over `options.threads` workers; outcomes are reported in corpus order.
pub fn run_verify(spec: &CorpusSpec, options: &VerifyOptions) -> Result<VerifyReport> {
    let corpus = generate(spec)?;
    let threads = options.threads.clamp(1, corpus.len().max(1));
    let mut outcomes: Vec<InstanceOutcome> = if threads == 1 {
        corpus.iter().map(|e| verify_instance(e, spec.seed, options)).collect::<Result<_>>()?
    } else {
        let results: Vec<Result<Vec<InstanceOutcome>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let corpus = &corpus;
                    scope.spawn(move || {
                        corpus.iter().skip(t).step_by(threads).map(|e| verify_instance(e, spec.seed, options)).collect()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut all = Vec::with_capacity(corpus.len());
        for r in results {
            all.extend(r?);
        }
        all
    };
    outcomes.sort_by_key(|o| o.index);

    let checks = CHECKS
        .iter()
        .map(|&name| {
            let mut s = CheckSummary { name, passed: 0, failed: 0, not_applicable: 0 };
            for o in &outcomes {
                match o.checks[name] {
                    Some(true) => s.passed += 1,
                    Some(false) => s.failed += 1,
                    None => s.not_applicable += 1,
                }
            }
            s
        })
        .collect::<Vec<_>>();
    let mut case_coverage = BTreeMap::new();
    for case in outcomes.iter().filter_map(|o| o.witness_case) {
        *case_coverage.entry(case).or_insert(0) += 1;
    }
    let disagreements = checks.iter().map(|c| c.failed).sum();
    let skipped = outcomes.iter().filter(|o| o.skipped).count();
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        corpus: spec.clone(),
        instances: outcomes.len(),
        evaluated: outcomes.len() - skipped,
        skipped,
        checks,
        case_coverage,
        disagreements,
        ok: disagreements == 0,
        outcomes,
    })
}

//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line to stderr
//! (uncaptured) and then asserts.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use fullgroup::analysis::{
    image_dimension, injective_by_theorem, kernel_basis, membership_in_image, noninjectivity_witness, WitnessCase,
};
use fullgroup::bisection::{enumerate_full_bisections, full_group_order, FullGroup, DEFAULT_FULL_GROUP_CAP as CAP};
use fullgroup::corpus::{generate, CorpusEntry, CorpusSpec};
use fullgroup::f2::{
    bound_chain_check, cumulative_sphere_bound, paper_bound, paper_bound_exact, psi, psi_haagerup_rhs, truncated_norm,
};
use fullgroup::random::{random_group_ring, random_steinberg};
use fullgroup::steinberg::{convolve, delta1, involute, pi, t_matrix, SteinbergElement};
use fullgroup::{FiniteGroupoid, Rational};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CORPUS_SIZE: usize = 200;
const LAW_PAIRS: usize = 1000;
const LINE_SUM_SAMPLES: usize = 1000;
const AGREEMENT_BUDGET: Duration = Duration::from_secs(60);
const CHAIN_BUDGET: Duration = Duration::from_secs(5);
const F2_BUDGET: Duration = Duration::from_secs(120);
const CHAIN_N_MAX: u64 = 1_000_000;
const NORM_N_MAX: usize = 200;
const NORM_RADIUS: u32 = 9;
const NORM_SLACK: f64 = 1e-9;
const RADIAL_MATCH: f64 = 1e-8;
const NAIVE_ARROW_CAP: usize = 12;

fn report(criterion: &str, title: &str, ok: bool, detail: &str) {
    let line = format!("{} criterion {criterion} ({title}): {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn corpus() -> &'static [CorpusEntry] {
    static CORPUS: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let spec = CorpusSpec { count: CORPUS_SIZE, ..CorpusSpec::default() };
        let corpus = generate(&spec).expect("corpus");
        assert!(corpus.iter().all(|e| e.groupoid.len() <= 24));
        corpus
    })
}

/// Rank of `π` and whether each `1_γ` lies in its image, computed by the
/// test-side span oracle.
struct Oracle {
    full_group: usize,
    rank: usize,
    point_in_image: Vec<bool>,
}

fn oracle(g: &FiniteGroupoid) -> Oracle {
    let group = FullGroup::new(g, CAP).expect("within cap");
    let span = common::image_span(g, group.elements().iter().map(|b| b.arrows()));
    let point_in_image = g.arrows().map(|a| span.contains(&common::indicator(g.len(), &[a]))).collect();
    Oracle { full_group: group.len(), rank: span.dim(), point_in_image }
}

fn oracles() -> &'static [Oracle] {
    static ORACLES: OnceLock<Vec<Oracle>> = OnceLock::new();
    ORACLES.get_or_init(|| corpus().iter().map(|e| oracle(&e.groupoid)).collect())
}

#[test]
fn criterion_1_injectivity_agreement() {
    let start = Instant::now();
    let mut disagreements = Vec::new();
    for (e, o) in corpus().iter().zip(oracles()) {
        let g = &e.groupoid;
        let kernel = kernel_basis(g, CAP).unwrap();
        let theorem = injective_by_theorem(g);
        let exact_kernel = kernel.len() == o.full_group - o.rank
            && kernel.iter().all(|v| !v.is_zero() && common::pi(g, v).iter().all(|c| c.is_zero()));
        if kernel.is_empty() != theorem || (o.rank == o.full_group) != theorem || !exact_kernel {
            disagreements.push(e.expr.to_string());
        }
    }
    let elapsed = start.elapsed();
    report(
        "1",
        "injectivity agreement",
        disagreements.is_empty() && elapsed < AGREEMENT_BUDGET && corpus().len() >= CORPUS_SIZE,
        &format!("{} groupoids, {} disagreements {disagreements:?}, {elapsed:.2?}", corpus().len(), disagreements.len()),
    );
}

#[test]
fn criterion_2_image_dimension_and_point_indicators() {
    let mut exceptions = Vec::new();
    for (e, o) in corpus().iter().zip(oracles()) {
        let g = &e.groupoid;
        let dim = image_dimension(g, CAP).unwrap();
        if dim != o.rank || (dim == g.len()) != g.is_group() {
            exceptions.push(format!("{}: image dimension {dim}, oracle {}", e.expr, o.rank));
        }
        if !g.is_group() {
            for a in g.arrows() {
                let f = SteinbergElement::point(g, a);
                if o.point_in_image[a.0] || membership_in_image(g, &f, CAP).unwrap().is_some() {
                    exceptions.push(format!("{}: 1_{} in image", e.expr, g.label(a)));
                }
            }
        }
    }
    let non_groups = corpus().iter().filter(|e| !e.groupoid.is_group()).count();
    report(
        "2",
        "image dimension and point indicators",
        exceptions.is_empty(),
        &format!("{} groupoids ({non_groups} non-groups), {} exceptions {exceptions:?}", corpus().len(), exceptions.len()),
    );
}

#[test]
fn criterion_3_kernel_witnesses() {
    let mut failures = Vec::new();
    let mut cases = BTreeSet::new();
    let mut witnessed = 0;
    for (e, o) in corpus().iter().zip(oracles()) {
        if o.rank == o.full_group {
            continue;
        }
        let g = &e.groupoid;
        match noninjectivity_witness(g) {
            Ok(w) => {
                witnessed += 1;
                cases.insert(w.case);
                if w.element.is_zero() || !common::pi(g, &w.element).iter().all(|c| c.is_zero()) {
                    failures.push(e.expr.to_string());
                }
            }
            Err(err) => failures.push(format!("{}: {err}", e.expr)),
        }
    }
    let missing: Vec<&str> = WitnessCase::ALL.iter().filter(|c| !cases.contains(c)).map(|c| c.tag()).collect();
    report(
        "3",
        "kernel witnesses",
        failures.is_empty() && missing.is_empty(),
        &format!(
            "{witnessed} witnesses, {} failures {failures:?}, cases covered {:?}, missing {missing:?}",
            failures.len(),
            cases.iter().map(|c| c.tag()).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_4_homomorphism_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    for e in corpus() {
        let g = &e.groupoid;
        let group = FullGroup::new(g, CAP).unwrap();
        for _ in 0..LAW_PAIRS {
            let (f, h) = (random_steinberg(g, &mut rng, 4), random_steinberg(g, &mut rng, 4));
            let (x, y) = (random_group_ring(&group, &mut rng, 4), random_group_ring(&group, &mut rng, 4));
            let fh = convolve(g, &f, &h).unwrap();
            let (tf, th) = (common::t_matrix(g, f.values()), common::t_matrix(g, h.values()));
            let broken = if fh.values() != common::convolve(g, f.values(), h.values()).as_slice() {
                Some("convolution")
            } else if t_matrix(g, &fh).unwrap().rows() != common::mat_mul(&tf, &th) {
                Some("T(f∗g) = T(f)T(g)")
            } else if t_matrix(g, &involute(g, &f).unwrap()).unwrap().rows() != common::adjoint(&tf) {
                Some("T(f*) = T(f)†")
            } else if pi(g, &x.mul(g, &y).unwrap()).unwrap().values()
                != common::convolve(g, &common::pi(g, &x), &common::pi(g, &y)).as_slice()
            {
                Some("π(xy) = π(x)∗π(y)")
            } else {
                None
            };
            if let Some(law) = broken {
                failures.push(format!("{}: {law}", e.expr));
                break;
            }
        }
    }
    report(
        "4",
        "homomorphism laws",
        failures.is_empty(),
        &format!("{} groupoids × {LAW_PAIRS} pairs, {} failures {failures:?}", corpus().len(), failures.len()),
    );
}

#[test]
fn criterion_5_line_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    for e in corpus() {
        let g = &e.groupoid;
        let group = FullGroup::new(g, CAP).unwrap();
        for _ in 0..LINE_SUM_SAMPLES {
            let x = random_group_ring(&group, &mut rng, 4);
            let f = pi(g, &x).unwrap();
            let t = common::t_matrix(g, f.values());
            let n = t.len();
            let rows: Vec<_> = t.iter().map(|r| r.iter().sum()).collect();
            let cols: Vec<_> = (0..n).map(|j| t.iter().map(|r| &r[j]).sum()).collect();
            let equal = rows.iter().chain(&cols).all(|s: &fullgroup::Scalar| s == &rows[0]);
            if !delta1(g, &f).unwrap().is_zero() || !equal {
                failures.push(format!("{}: {}", e.expr, x.describe(g)));
                break;
            }
        }
    }
    report(
        "5",
        "line sums",
        failures.is_empty(),
        &format!("{} groupoids × {LINE_SUM_SAMPLES} elements, {} failures {failures:?}", corpus().len(), failures.len()),
    );
}

#[test]
fn criterion_6a_bound_chain() {
    let start = Instant::now();
    let mut failing = Vec::new();
    for n in 2..=CHAIN_N_MAX {
        let chain = bound_chain_check(n).unwrap();
        if !chain.all_hold {
            let links: Vec<String> = chain
                .failing()
                .map(|l| format!("{} ≤ {}: {:.6} > {:.6}", l.from, l.to, l.lhs, l.rhs))
                .collect();
            failing.push(format!("n={n} [{}]", links.join("; ")));
        }
    }
    let elapsed = start.elapsed();
    report(
        "6a",
        "bound chain for 2 ≤ n ≤ 10⁶",
        failing.is_empty() && elapsed < CHAIN_BUDGET,
        &format!("{} failing n {failing:?}, {elapsed:.2?}", failing.len()),
    );
}

#[test]
fn criterion_6b_cumulative_bound_and_exact_value() {
    let start = Instant::now();
    let cumulative_failures: Vec<u64> = (1..=CHAIN_N_MAX).filter(|&n| !cumulative_sphere_bound(n)).collect();
    let exact = paper_bound_exact(9);
    let ok = cumulative_failures.is_empty() && exact == Some(Rational::from_integer(16)) && paper_bound(9) == 16.0;
    report(
        "6b",
        "cumulative sphere bound and value at 9",
        ok,
        &format!(
            "cumulative failures {cumulative_failures:?}, exact bound at 9 = {}, float {}, {:.2?}",
            exact.map_or("none".into(), |r| r.to_string()),
            paper_bound(9),
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_6c_truncated_norms() {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut radial_mismatch = Vec::new();
    for n in 1..=NORM_N_MAX {
        let norm = truncated_norm(&psi(n), NORM_RADIUS).unwrap();
        let rhs = psi_haagerup_rhs(n as u64);
        if norm > rhs + NORM_SLACK {
            violations.push(format!("n={n}: {norm} > {rhs}"));
        }
    }
    let by_radius: Vec<f64> = (5..=NORM_RADIUS).map(|r| truncated_norm(&psi(5), r).unwrap()).collect();
    for (r, norm) in (5..=NORM_RADIUS).zip(&by_radius) {
        let radial = common::radial_psi5_norm(r as usize);
        if (norm - radial).abs() > RADIAL_MATCH {
            radial_mismatch.push(format!("R={r}: {norm} vs {radial}"));
        }
    }
    let psi5 = *by_radius.last().unwrap();
    let monotone = by_radius.windows(2).all(|w| w[0] <= w[1] + NORM_SLACK);
    let elapsed = start.elapsed();
    let ok = violations.is_empty()
        && radial_mismatch.is_empty()
        && (0.85..=0.90).contains(&psi5)
        && monotone
        && elapsed < F2_BUDGET;
    report(
        "6c",
        "truncated norms",
        ok,
        &format!(
            "{} violations {violations:?} for n ≤ {NORM_N_MAX}; ψ₅ at R=5..9 {by_radius:.6?} (monotone {monotone}, radial mismatches {radial_mismatch:?}); {elapsed:.2?}",
            violations.len()
        ),
    );
}

#[test]
fn criterion_7_enumeration_oracle() {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for e in corpus().iter().filter(|e| e.groupoid.len() <= NAIVE_ARROW_CAP) {
        let g = &e.groupoid;
        checked += 1;
        let enumerated: BTreeSet<Vec<usize>> = enumerate_full_bisections(g, CAP)
            .unwrap()
            .iter()
            .map(|b| b.arrows().iter().map(|a| a.0).collect())
            .collect();
        let naive = common::naive_full_bisections(g);
        let order = full_group_order(g);
        if enumerated != naive || order.to_usize() != Some(naive.len()) || order != common::order_formula(g) {
            mismatches.push(e.expr.to_string());
        }
    }
    report(
        "7",
        "enumeration against subset filter",
        mismatches.is_empty() && checked > 0,
        &format!("{checked} groupoids with |G| ≤ {NAIVE_ARROW_CAP}, {} mismatches {mismatches:?}", mismatches.len()),
    );
}

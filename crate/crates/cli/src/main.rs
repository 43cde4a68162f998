//! `fullgroup`: command-line front end for the groupoid, full group and
//! Steinberg algebra computations.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fullgroup::analysis::{analyze, noninjectivity_witness, witness_for_pair, AnalysisReport, WitnessReport};
use fullgroup::bisection::{full_group_order, FullGroup};
use fullgroup::corpus::{CorpusSpec, MixWeights};
use fullgroup::expr::{parse_element, parse_expr};
use fullgroup::f2::{bound_chain_check, paper_bound, psi, psi_haagerup_rhs, truncated_norm, ball_size, DEFAULT_MAX_RADIUS};
use fullgroup::groupoid::{Validation, Violation};
use fullgroup::steinberg::{t_matrix, ComplexMatrix};
use fullgroup::verify::{run_verify, VerifyOptions, VerifyReport};
use fullgroup::{Caps, FiniteGroupoid, SCHEMA_VERSION};

const EXIT_DOMAIN: u8 = 1;
const EXIT_DISAGREEMENT: u8 = 3;
const CAYLEY_LIMIT: usize = 64;

#[derive(Parser)]
#[command(name = "fullgroup", version, about = "Finite groupoids, their full groups and Steinberg algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the groupoid axioms.
    Validate {
        groupoid: String,
        #[command(flatten)]
        out: Output,
    },
    /// Order, orbit factorization and optionally the Cayley table of F(G).
    FullGroup {
        groupoid: String,
        /// Print the Cayley table (|F(G)| <= 64).
        #[arg(long)]
        cayley: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Injectivity, surjectivity and density of pi, checked against the criteria.
    Analyze {
        groupoid: String,
        /// Attach a kernel witness when pi is not injective.
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        out: Output,
    },
    /// A nonzero element of ker pi.
    Witness {
        groupoid: String,
        /// Use this pair of arrow labels instead of the first admissible pair.
        #[arg(long, num_args = 2, value_names = ["G1", "G2"])]
        pair: Option<Vec<String>>,
        #[command(flatten)]
        out: Output,
    },
    /// The unit-indexed matrix T(f) with its row and column sums.
    Tmatrix {
        groupoid: String,
        /// Linear combination of delta:#k, delta:{labels}, one:#k, one:label.
        element: String,
        #[command(flatten)]
        out: Output,
    },
    /// Norm bounds for the averaged first n elements of F2.
    F2Bounds {
        #[arg(long)]
        n_max: u64,
        /// Ball radius for the truncated norm.
        #[arg(long, default_value_t = DEFAULT_MAX_RADIUS)]
        radius: u32,
        /// Also write the table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Run every check over a seeded random corpus.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Largest |F(G)| in the corpus.
        #[arg(long)]
        size_cap: Option<usize>,
        /// Largest |G| in the corpus.
        #[arg(long, default_value_t = 24)]
        max_arrows: usize,
        /// Mix weights for groups, pairs, products and unions.
        #[arg(long, value_name = "G,P,X,U", default_value = "2,2,2,3", value_parser = parse_weights)]
        weights: MixWeights,
        /// Random pairs per groupoid for the homomorphism laws.
        #[arg(long, default_value_t = 100)]
        law_pairs: usize,
        /// Random elements per groupoid for the line-sum check.
        #[arg(long, default_value_t = 100)]
        line_sum_samples: usize,
        #[arg(long)]
        threads: Option<usize>,
        /// Do not prepend one groupoid per witness case.
        #[arg(long)]
        no_case_instances: bool,
        #[command(flatten)]
        out: Output,
    },
}

fn parse_weights(text: &str) -> Result<MixWeights, String> {
    let parts: Vec<u32> = text
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [group, pair, product, union] => Ok(MixWeights { group, pair, product, union }),
        _ => Err(format!("expected 4 comma-separated weights, got {}", parts.len())),
    }
}

fn load(text: &str) -> anyhow::Result<FiniteGroupoid> {
    let expr = parse_expr(text).with_context(|| format!("cannot parse groupoid {text:?}"))?;
    let g = expr.build().with_context(|| format!("cannot build {expr}"))?;
    Ok(g)
}

fn load_valid(text: &str) -> anyhow::Result<FiniteGroupoid> {
    let g = load(text)?;
    if let Validation::Fail(v) = g.validate() {
        bail!("{text} is not a groupoid: {}", v.message);
    }
    Ok(g)
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct ValidateReport {
    schema_version: u32,
    groupoid: String,
    arrows: usize,
    units: usize,
    valid: bool,
    violation: Option<Violation>,
}

fn validate(text: &str, json: bool) -> anyhow::Result<u8> {
    let g = load(text)?;
    let validation = g.validate();
    let violation = match &validation {
        Validation::Pass => None,
        Validation::Fail(v) => Some(v.clone()),
    };
    let report = ValidateReport {
        schema_version: SCHEMA_VERSION,
        groupoid: text.to_string(),
        arrows: g.len(),
        units: g.unit_count(),
        valid: violation.is_none(),
        violation,
    };
    if json {
        print_json(&report)?;
    } else {
        println!("{text}: {} arrows, {} units: {validation}", report.arrows, report.units);
    }
    Ok(if report.valid { 0 } else { EXIT_DOMAIN })
}

#[derive(Serialize)]
struct OrbitFactor {
    units: Vec<String>,
    isotropy_order: usize,
    factor: String,
}

#[derive(Serialize)]
struct FullGroupReport {
    schema_version: u32,
    groupoid: String,
    order: String,
    orbits: Vec<OrbitFactor>,
    elements: Option<Vec<String>>,
    cayley_table: Option<Vec<Vec<usize>>>,
}

fn full_group(text: &str, cayley: bool, json: bool, caps: &Caps) -> anyhow::Result<u8> {
    let g = load_valid(text)?;
    let orbits = g
        .orbits()
        .orbits
        .iter()
        .map(|o| OrbitFactor {
            units: o.units.iter().map(|&u| g.label(u).to_string()).collect(),
            isotropy_order: o.isotropy_order,
            factor: format!("{}!·{}^{}", o.units.len(), o.isotropy_order, o.units.len()),
        })
        .collect::<Vec<_>>();
    let order = full_group_order(&g);
    let (elements, table) = if cayley {
        if order > CAYLEY_LIMIT.into() {
            bail!("Cayley table needs |F(G)| <= {CAYLEY_LIMIT}, got {order}");
        }
        let group = FullGroup::new(&g, caps.full_group)?;
        let elements: Vec<String> = group.elements().iter().map(|b| b.describe(&g)).collect();
        (Some(elements), Some(group.cayley_table(&g)))
    } else {
        (None, None)
    };
    let report = FullGroupReport {
        schema_version: SCHEMA_VERSION,
        groupoid: text.to_string(),
        order: order.to_string(),
        orbits,
        elements,
        cayley_table: table,
    };
    if json {
        print_json(&report)?;
        return Ok(0);
    }
    let factors: Vec<&str> = report.orbits.iter().map(|o| o.factor.as_str()).collect();
    println!("|F(G)| = {} = {}", report.order, factors.join(" × "));
    for o in &report.orbits {
        println!("orbit {{{}}}: isotropy order {}", o.units.join(","), o.isotropy_order);
    }
    if let (Some(elements), Some(table)) = (&report.elements, &report.cayley_table) {
        println!("elements:");
        for (i, e) in elements.iter().enumerate() {
            println!("  {i:>2}  {e}");
        }
        println!("cayley table:");
        for row in table {
            let cells: Vec<String> = row.iter().map(|c| format!("{c:>2}")).collect();
            println!("  {}", cells.join(" "));
        }
    }
    Ok(0)
}

fn render_witness(w: &WitnessReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "witness case {}: {}", w.case.tag(), w.case.description());
    if w.construction != w.case {
        let _ = writeln!(s, "built with the construction of case {}", w.construction.tag());
    }
    let _ = writeln!(s, "selected pair ({}, {}), construction pair ({}, {})", w.selected[0], w.selected[1], w.pair[0], w.pair[1]);
    for t in &w.terms {
        let _ = writeln!(s, "  {:+} δ_{} = {{{}}}", t.coefficient, t.name, t.arrows.join(","));
    }
    let _ = writeln!(s, "pi(witness) = 0: {}", w.pi_is_zero);
    s
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    schema_version: u32,
    groupoid: &'a str,
    #[serde(flatten)]
    report: &'a AnalysisReport,
}

fn analyze_cmd(text: &str, with_witness: bool, json: bool, caps: &Caps) -> anyhow::Result<u8> {
    let g = load_valid(text)?;
    let report = analyze(&g, caps.full_group, with_witness)?;
    if json {
        print_json(&AnalyzeOutput { schema_version: SCHEMA_VERSION, groupoid: text, report: &report })?;
    } else {
        let verdict = |v: &fullgroup::analysis::VerdictPair| {
            format!("{} (criterion says {})", v.oracle, v.theorem)
        };
        println!("groupoid: {text}");
        println!("|G| = {}, |G⁰| = {}, |F(G)| = {}", report.arrows, report.units, report.full_group_order);
        println!("injective: {}", verdict(&report.injective));
        println!("  criterion: {}", report.injectivity_condition.description());
        println!("surjective: {}", verdict(&report.surjective));
        println!("kernel dimension: {}", report.kernel_dimension);
        println!("image dimension: {} of {}", report.image_dimension, report.arrows);
        println!("dense in C*(G): {}", report.dense_in_full_cstar);
        println!("isomorphism: {}", report.isomorphism);
        if let Some(w) = &report.witness {
            print!("{}", render_witness(w));
        }
        println!("agreement: {}", report.agreement);
    }
    Ok(if report.agreement { 0 } else { EXIT_DISAGREEMENT })
}

#[derive(Serialize)]
struct WitnessOutput {
    schema_version: u32,
    groupoid: String,
    element: String,
    #[serde(flatten)]
    report: WitnessReport,
}

fn witness_cmd(text: &str, pair: Option<&[String]>, json: bool) -> anyhow::Result<u8> {
    let g = load_valid(text)?;
    let witness = match pair {
        Some([a, b]) => {
            let find = |l: &str| g.arrow_by_label(l).with_context(|| format!("unknown arrow {l:?}"));
            witness_for_pair(&g, find(a)?, find(b)?)?
        }
        Some(_) => bail!("--pair takes exactly two labels"),
        None => noninjectivity_witness(&g)?,
    };
    let report = witness.report(&g);
    let ok = report.pi_is_zero;
    let out = WitnessOutput {
        schema_version: SCHEMA_VERSION,
        groupoid: text.to_string(),
        element: witness.element.describe(&g),
        report,
    };
    if json {
        print_json(&out)?;
    } else {
        print!("{}", render_witness(&out.report));
        println!("element: {}", out.element);
    }
    Ok(if ok { 0 } else { EXIT_DISAGREEMENT })
}

#[derive(Serialize)]
struct TMatrixReport {
    schema_version: u32,
    groupoid: String,
    element: String,
    units: Vec<String>,
    matrix: ComplexMatrix,
    row_sums: Vec<String>,
    column_sums: Vec<String>,
    common_line_sum: Option<String>,
}

fn tmatrix(text: &str, element: &str, json: bool, caps: &Caps) -> anyhow::Result<u8> {
    let g = load_valid(text)?;
    let f = parse_element(&g, element, caps.full_group)?;
    let m = t_matrix(&g, &f)?;
    let strings = |v: Vec<fullgroup::Scalar>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let report = TMatrixReport {
        schema_version: SCHEMA_VERSION,
        groupoid: text.to_string(),
        element: f.describe(&g),
        units: g.units().map(|u| g.label(u).to_string()).collect(),
        row_sums: strings(m.row_sums()),
        column_sums: strings(m.column_sums()),
        common_line_sum: m.common_line_sum().map(|s| s.to_string()),
        matrix: m,
    };
    if json {
        print_json(&report)?;
    } else {
        println!("f = {}", report.element);
        println!("units: {}", report.units.join(", "));
        print!("{}", report.matrix);
        println!("row sums: {}", report.row_sums.join(", "));
        println!("column sums: {}", report.column_sums.join(", "));
        match &report.common_line_sum {
            Some(s) => println!("common line sum: {s}"),
            None => println!("common line sum: none"),
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct F2Row {
    n: u64,
    haagerup_rhs: f64,
    paper_bound: f64,
    truncated_norm: Option<f64>,
    /// Every link of the bound chain holds; absent for `n = 1`.
    chain_holds: Option<bool>,
}

#[derive(Serialize)]
struct F2Report {
    schema_version: u32,
    radius: u32,
    rows: Vec<F2Row>,
    consistent: bool,
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.10}")
}

fn f2_bounds(n_max: u64, radius: u32, csv_path: Option<&PathBuf>, json: bool) -> anyhow::Result<u8> {
    if n_max == 0 {
        bail!("--n-max must be at least 1");
    }
    let ball = ball_size(radius);
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let truncated = if n <= ball { Some(truncated_norm(&psi(n as usize), radius)?) } else { None };
        let chain_holds = if n >= 2 { Some(bound_chain_check(n)?.all_hold) } else { None };
        rows.push(F2Row { n, haagerup_rhs: psi_haagerup_rhs(n), paper_bound: paper_bound(n), truncated_norm: truncated, chain_holds });
    }
    let consistent = rows.iter().all(|r| {
        (r.n == 1 || r.haagerup_rhs <= r.paper_bound * (1.0 + 1e-9))
            && r.truncated_norm.is_none_or(|t| t <= r.haagerup_rhs * (1.0 + 1e-9))
    });
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
        w.write_record(["n", "haagerup_rhs", "paper_bound", "truncated_norm"])?;
        for r in &rows {
            w.write_record([
                r.n.to_string(),
                fmt_f64(r.haagerup_rhs),
                fmt_f64(r.paper_bound),
                r.truncated_norm.map(fmt_f64).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
    }
    let report = F2Report { schema_version: SCHEMA_VERSION, radius, rows, consistent };
    if json {
        print_json(&report)?;
    } else {
        println!("{:>6}  {:>14}  {:>14}  {:>14}  {:>5}", "n", "haagerup_rhs", "paper_bound", "truncated_norm", "chain");
        for r in &report.rows {
            let t = r.truncated_norm.map(fmt_f64).unwrap_or_else(|| "-".into());
            let c = r.chain_holds.map_or("-", |c| if c { "ok" } else { "FAIL" });
            println!("{:>6}  {:>14}  {:>14}  {:>14}  {:>5}", r.n, fmt_f64(r.haagerup_rhs), fmt_f64(r.paper_bound), t, c);
        }
    }
    Ok(if report.consistent { 0 } else { EXIT_DISAGREEMENT })
}

fn print_verify(report: &VerifyReport) {
    println!(
        "corpus seed {}: {} instances, {} evaluated, {} skipped",
        report.corpus.seed, report.instances, report.evaluated, report.skipped
    );
    println!("{:<26} {:>6} {:>6} {:>6}", "check", "pass", "fail", "n/a");
    for c in &report.checks {
        println!("{:<26} {:>6} {:>6} {:>6}", c.name, c.passed, c.failed, c.not_applicable);
    }
    let coverage: Vec<String> = report.case_coverage.iter().map(|(c, n)| format!("{}={n}", c.tag())).collect();
    println!("witness cases: {}", coverage.join(" "));
    for o in report.outcomes.iter().filter(|o| !o.passed()) {
        for f in &o.failures {
            println!("FAIL #{} {}: {f}", o.index, o.expr);
        }
    }
    println!("disagreements: {}", report.disagreements);
}

fn dispatch(command: Command) -> anyhow::Result<u8> {
    let caps = Caps::from_env();
    match command {
        Command::Validate { groupoid, out } => validate(&groupoid, out.json),
        Command::FullGroup { groupoid, cayley, out } => full_group(&groupoid, cayley, out.json, &caps),
        Command::Analyze { groupoid, witness, out } => analyze_cmd(&groupoid, witness, out.json, &caps),
        Command::Witness { groupoid, pair, out } => witness_cmd(&groupoid, pair.as_deref(), out.json),
        Command::Tmatrix { groupoid, element, out } => tmatrix(&groupoid, &element, out.json, &caps),
        Command::F2Bounds { n_max, radius, csv, out } => f2_bounds(n_max, radius, csv.as_ref(), out.json),
        Command::Verify {
            seed,
            count,
            size_cap,
            max_arrows,
            weights,
            law_pairs,
            line_sum_samples,
            threads,
            no_case_instances,
            out,
        } => {
            let cap = size_cap.unwrap_or(caps.full_group);
            let spec = CorpusSpec {
                seed,
                count,
                max_arrows,
                max_full_group: cap,
                weights,
                include_case_instances: !no_case_instances,
            };
            let mut options = VerifyOptions { law_pairs, line_sum_samples, full_group_cap: cap, ..VerifyOptions::default() };
            if let Some(t) = threads {
                options.threads = t.max(1);
            }
            let report = run_verify(&spec, &options)?;
            if out.json {
                print_json(&report)?;
            } else {
                print_verify(&report);
            }
            Ok(if report.ok { 0 } else { EXIT_DISAGREEMENT })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}

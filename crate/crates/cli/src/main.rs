//! `opalg`: checks operator-algebra scripts, replays the built-in
//! derivations and runs the finite-difference commutator cases.
//!
//! Exit status: 0 everything passed, 1 something was checked and failed,
//! 2 nothing could be checked (bad input, bad grid, unreadable file).

mod record;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use opalg_core::dsl::{run_text, AssertOutcome, Status};
use opalg_core::engine::{replay, CheckResult, Derivation, DerivationId};
use opalg_core::numeric::{
    convergence, residual_case, CaseId, GridSpec, LevelRow, Policy, ResidualReport, TestFamily, DEFAULT_SIGMA,
    EXACT_TOLERANCE, FINEST_TOLERANCE, LIMIT_TOLERANCE, ORDER_WINDOW,
};

use record::{sig12, Kind, Record};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_COULD_NOT_RUN: u8 = 2;

/// Points per axis on the finest grid; 129^3 complex samples is ~34 MB.
const MAX_N: usize = 129;

#[derive(Debug, Parser)]
#[command(name = "opalg", version)]
#[command(about = "Position-momentum commutators for massless particles: scripts, derivations, numerics")]
struct Cli {
    /// One JSON record per line on stdout, nothing else.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for the polynomial members of the test-function family.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every assertion of an .oad script
    Check {
        file: PathBuf,
    },
    /// Replay a built-in derivation
    Derive {
        /// eq3, eq5, eq6, sectionA-I, sectionA-II, dsquare or all
        #[arg(long, value_parser = parse_target, default_value = "all")]
        case: Target,
    },
    /// Residual of one numeric case on one grid
    Numeric {
        /// massless-cr, massless-qv, speed, heisenberg, massive-cr or massive-qv
        #[arg(long, value_parser = parse_case)]
        case: CaseId,
        /// Points per axis.
        #[arg(long, default_value_t = 33)]
        n: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Residuals on n, 2n-1, 4n-3, ... and the observed orders
    Converge {
        /// massless-cr, massless-qv, speed, heisenberg, massive-cr or massive-qv
        #[arg(long, value_parser = parse_case)]
        case: CaseId,
        /// Number of grids, at least 3
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Points per axis on the coarsest grid.
        #[arg(long, default_value_t = 17)]
        n: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Box center in momentum space, also the test-function center.
    #[arg(long, value_parser = parse_center, default_value = "2,2,2")]
    center: Center,
    /// Half the box edge.
    #[arg(long, default_value_t = 0.75)]
    half_width: f64,
    /// Gaussian width of the test functions.
    #[arg(long, value_parser = parse_positive, default_value_t = DEFAULT_SIGMA)]
    sigma: f64,
}

#[derive(Clone, Copy, Debug)]
struct Center([f64; 3]);

#[derive(Clone, Copy, Debug)]
enum Target {
    All,
    One(DerivationId),
}

fn parse_target(s: &str) -> Result<Target, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Target::All);
    }
    s.parse().map(Target::One)
}

fn parse_case(s: &str) -> Result<CaseId, String> {
    s.parse()
}

fn parse_center(s: &str) -> Result<Center, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got '{s}'"));
    }
    let mut c = [0.0; 3];
    for (slot, p) in c.iter_mut().zip(&parts) {
        let v: f64 = p.parse().map_err(|_| format!("'{p}' is not a number"))?;
        if !v.is_finite() {
            return Err(format!("'{p}' is not finite"));
        }
        *slot = v;
    }
    Ok(Center(c))
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

/// Human text or JSON records, never both.
struct Report {
    json: bool,
    out: io::StdoutLock<'static>,
}

impl Report {
    fn say(&mut self, text: impl AsRef<str>) {
        if !self.json {
            let _ = writeln!(self.out, "{}", text.as_ref());
        }
    }

    fn record(&mut self, r: &Record) {
        if self.json {
            let _ = writeln!(self.out, "{}", r.to_json());
        }
    }

    fn could_not_run(&mut self, kind: Kind, id: &str, message: String) -> u8 {
        eprintln!("error: {message}");
        self.record(&Record::new(kind, id, "error").detail(message));
        EXIT_COULD_NOT_RUN
    }
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn exit_for(pass: bool) -> u8 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn check(file: &PathBuf, rep: &mut Report) -> u8 {
    let id = file.display().to_string();
    let text = match fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return rep.could_not_run(Kind::Assert, &id, format!("{id}: {e}")),
    };
    let report = match run_text(&text) {
        Ok(r) => r,
        Err(e) => return rep.could_not_run(Kind::Assert, &id, format!("{id}:{e}")),
    };
    for o in &report.outcomes {
        rep.say(format!("  {o}"));
        rep.record(&assert_record(&id, o));
    }
    let (ok, total) = report.counts();
    rep.say(format!("{ok}/{total} assertions passed"));
    exit_for(report.passed())
}

fn assert_record(file: &str, o: &AssertOutcome) -> Record {
    let mut r = Record::new(Kind::Assert, format!("{file}:{}", o.span), o.status.as_str());
    if !o.bindings.is_empty() {
        r.index_pair = Some(o.bindings.iter().map(|(_, a)| *a).collect());
    }
    let mut detail = format!("under {}", o.axioms);
    if !o.bindings.is_empty() {
        detail.push_str(&format!(" [{}]", o.binding_text()));
    }
    if o.status != Status::Pass {
        if let (Some(l), Some(rhs)) = (&o.lhs, &o.rhs) {
            detail.push_str(&format!("; lhs: {l}; rhs: {rhs}"));
        }
        if let Some(m) = &o.message {
            detail.push_str(&format!("; {m}"));
        }
    }
    r.detail(detail)
}

fn indices(ix: &[u8]) -> String {
    let parts: Vec<String> = ix.iter().map(u8::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn derive(target: Target, rep: &mut Report) -> u8 {
    let ids = match target {
        Target::All => DerivationId::ALL.to_vec(),
        Target::One(id) => vec![id],
    };
    let mut passed = 0;
    for &id in &ids {
        let d = Derivation::get(id);
        let r = replay(&d);
        show_derivation(&d, &r, rep);
        if r.passed() {
            passed += 1;
        }
    }
    if ids.len() > 1 {
        rep.say(format!("{passed}/{} derivations pass", ids.len()));
    }
    exit_for(passed == ids.len())
}

fn show_derivation(d: &Derivation, r: &CheckResult, rep: &mut Report) {
    let axioms: Vec<&str> = d.axiom_requirements.iter().map(|a| a.name()).collect();
    rep.say(format!("{} using {}", d.id, axioms.join(", ")));
    for o in &r.outcomes {
        let ix = indices(&o.indices);
        if o.pass {
            rep.say(format!("  pass {ix} {}: {}", o.step, o.computed));
        } else {
            rep.say(format!("  FAIL {ix} {}\n    computed: {}\n    expected: {}", o.step, o.computed, o.expected));
        }
        let mut rec = Record::new(Kind::Derivation, d.id.name(), status(o.pass));
        rec.index_pair = Some(o.indices.clone());
        let detail = if o.pass {
            format!("{}: {}", o.step, o.computed)
        } else {
            format!("{}: computed {}; expected {}", o.step, o.computed, o.expected)
        };
        rep.record(&rec.detail(detail));
    }
    let (ok, total) = r.tally();
    rep.say(format!("{}: {ok}/{total} index assignments pass", d.id));
}

fn grid_for(n: usize, g: &GridArgs) -> Result<GridSpec, String> {
    if n > MAX_N {
        return Err(format!("n = {n} exceeds the limit of {MAX_N} points per axis"));
    }
    GridSpec::new(n, g.center.0, g.half_width).map_err(|e| e.to_string())
}

fn setup_line(case: CaseId, seed: u64, g: &GridArgs) -> String {
    let c = g.center.0;
    format!(
        "{case} ({})  seed {seed}  center ({}, {}, {})  half-width {}  sigma {}",
        policy_name(case.policy()),
        c[0],
        c[1],
        c[2],
        g.half_width,
        g.sigma
    )
}

fn policy_name(p: Policy) -> &'static str {
    match p {
        Policy::Exact => "exact",
        Policy::Discretization => "discretization",
        Policy::ExpectedNonzero => "expected-nonzero",
    }
}

fn row_detail(row: &LevelRow) -> String {
    let mut d = format!("worst {}", row.member);
    if !row.index_pair.is_empty() {
        d.push_str(&format!(" {}", indices(&row.index_pair)));
    }
    if let Some(a) = row.analytic {
        d.push_str(&format!("; analytic {}", sig12(a)));
    }
    d
}

fn level_record(case: CaseId, seed: u64, row: &LevelRow, order: Option<f64>, pass: bool) -> Record {
    let mut r = Record::new(Kind::Numeric, case.name(), status(pass));
    r.n = Some(row.n);
    r.h = Some(row.h);
    r.residual = Some(row.residual);
    r.order = order;
    r.seed = Some(seed);
    r.index_pair = (!row.index_pair.is_empty()).then(|| row.index_pair.clone());
    let mut detail = row_detail(row);
    if case.policy() == Policy::Exact {
        detail.push_str("; order exact");
    }
    r.detail(detail)
}

fn verdict(case: CaseId, pass: bool) -> String {
    format!("{}: {}", policy_name(case.policy()), status(pass))
}

fn numeric(case: CaseId, n: usize, g: &GridArgs, seed: u64, rep: &mut Report) -> u8 {
    let grid = match grid_for(n, g) {
        Ok(grid) => grid,
        Err(e) => return rep.could_not_run(Kind::Numeric, case.name(), e),
    };
    let family = TestFamily::seeded(seed, g.center.0, g.sigma);
    let report = match residual_case(case, &grid, &family) {
        Ok(r) => r,
        Err(e) => return rep.could_not_run(Kind::Numeric, case.name(), e.to_string()),
    };
    let row = &report.rows[0];
    rep.say(setup_line(case, seed, g));
    rep.say(format!("  n {}  h {:.6e}  residual {:.6e}  ({})", row.n, row.h, row.residual, row_detail(row)));
    rep.say(format!("  {}", tolerance_text(case, &grid, row)));
    rep.say(verdict(case, report.pass));
    rep.record(&level_record(case, seed, row, None, report.pass));
    exit_for(report.pass)
}

fn tolerance_text(case: CaseId, grid: &GridSpec, row: &LevelRow) -> String {
    match case.policy() {
        Policy::Exact => format!("tolerance {EXACT_TOLERANCE:e}"),
        Policy::Discretization => {
            let h_ref = 2.0 * grid.half_width() / 64.0;
            let tol = FINEST_TOLERANCE * (row.h / h_ref).powi(2);
            format!("tolerance {tol:.6e} ({FINEST_TOLERANCE:e} at h = {h_ref:.6e}, scaled by h^2)")
        }
        Policy::ExpectedNonzero => {
            let a = row.analytic.unwrap_or(f64::NAN);
            format!(
                "analytic limit {:.6e}, off by {:.2}% (allowed {}%)",
                a,
                100.0 * (row.residual - a).abs() / a,
                100.0 * LIMIT_TOLERANCE
            )
        }
    }
}

fn converge(case: CaseId, levels: usize, n: usize, g: &GridArgs, seed: u64, rep: &mut Report) -> u8 {
    let finest = (0..levels.saturating_sub(1)).try_fold(n, |m, _| m.checked_mul(2).map(|x| x - 1));
    let base = match finest {
        Some(f) if f <= MAX_N => grid_for(n, g),
        _ => Err(format!("{levels} levels from n = {n} exceed {MAX_N} points per axis")),
    };
    let base = match base {
        Ok(grid) => grid,
        Err(e) => return rep.could_not_run(Kind::Numeric, case.name(), e),
    };
    let family = TestFamily::seeded(seed, g.center.0, g.sigma);
    let report: ResidualReport = match convergence(case, levels, &base, &family) {
        Ok(r) => r,
        Err(e) => return rep.could_not_run(Kind::Numeric, case.name(), e.to_string()),
    };
    rep.say(setup_line(case, seed, g));
    rep.say(format!("  {:>4}  {:>12}  {:>12}  {:>6}", "n", "h", "residual", "order"));
    for (k, row) in report.rows.iter().enumerate() {
        let order = if k == 0 { None } else { report.orders.get(k - 1).copied() };
        let order_text = match (case.policy(), order) {
            (Policy::Exact, _) => "exact".to_string(),
            (_, Some(o)) => format!("{o:.3}"),
            (_, None) => "-".to_string(),
        };
        rep.say(format!("  {:>4}  {:>12.6e}  {:>12.6e}  {:>6}", row.n, row.h, row.residual, order_text));
        rep.record(&level_record(case, seed, row, order, report.pass));
    }
    match case.policy() {
        Policy::Discretization => {
            rep.say(format!("  orders must lie in [{}, {}]", ORDER_WINDOW.0, ORDER_WINDOW.1))
        }
        Policy::ExpectedNonzero => {
            let finest = report.rows.last().expect("at least three levels");
            rep.say("  orders measure the approach to the analytic value");
            rep.say(format!("  {}", tolerance_text(case, &base, finest)))
        }
        Policy::Exact => rep.say(format!("  every level below {EXACT_TOLERANCE:e}")),
    }
    rep.say(verdict(case, report.pass));
    exit_for(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut rep = Report { json: cli.json, out: io::stdout().lock() };
    let code = match &cli.command {
        Command::Check { file } => check(file, &mut rep),
        Command::Derive { case } => derive(*case, &mut rep),
        Command::Numeric { case, n, grid } => numeric(*case, *n, grid, cli.seed, &mut rep),
        Command::Converge { case, levels, n, grid } => converge(*case, *levels, *n, grid, cli.seed, &mut rep),
    };
    let _ = rep.out.flush();
    ExitCode::from(code)
}

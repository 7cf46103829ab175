//! Command-line driver for the capacity experiments: the amplitude-damping
//! sweep behind the capacity-vs-η figure, threshold bisection for the
//! definite/indefinite separation, the exact certificate suite, seeded
//! no-advantage trial runs, and SDPA export for external cross-checks.
//!
//! Exit codes: 0 on success, 1 on a failed check, 2 on bad input, 3 on
//! solver failure.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use causalcap::channels::{amplitude_damping, build_list, ChannelList, ChannelSpec};
use causalcap::error::OpError;
use causalcap::exact::certs::{
    bundled_case_dir, discover_layout_order, load_certificates, verify_all, Verdict,
};
use causalcap::sampling::{random_pauli_pair, random_qubit_channel, trial_rng};
use causalcap::sdp::clarabel::ClarabelSolver;
use causalcap::sdp::programs::{
    build_avg_error_freepar, build_capacity_free, build_capacity_freedef2,
    build_capacity_freefix2, build_capacity_freepar, build_omega_freepar,
};
use causalcap::sdp::{capacity_from, SdpProblem, SdpSolver, SolveStatus, SolverResult,
    CAPACITY_SLACK};

/// Environment variable overriding the solver's gap/feasibility tolerance.
pub const SOLVER_TOL_ENV: &str = "CAUSALCAP_SOLVER_TOL";

const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_INPUT_ERROR: i32 = 2;
const EXIT_SOLVER_FAILED: i32 = 3;

#[derive(Debug)]
enum CliError {
    /// Malformed request or unreadable input: exit 2.
    Input(String),
    /// A reproduced claim did not hold: exit 1.
    Check(String),
    /// The solver could not produce a usable answer: exit 3.
    Solver(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT_ERROR,
            CliError::Check(_) => EXIT_CHECK_FAILED,
            CliError::Solver(_) => EXIT_SOLVER_FAILED,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Check(m) | CliError::Solver(m) => m,
        }
    }
}

impl From<OpError> for CliError {
    fn from(e: OpError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Supermap class selector; ordered weakest to strongest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum ClassTag {
    Freepar,
    Freefix,
    Freedef,
    Free,
}

impl ClassTag {
    pub fn name(self) -> &'static str {
        match self {
            ClassTag::Freepar => "freepar",
            ClassTag::Freefix => "freefix",
            ClassTag::Freedef => "freedef",
            ClassTag::Free => "free",
        }
    }
}

#[derive(Parser)]
#[command(
    name = "causalcap",
    version,
    about = "One-shot classical capacities under signaling-non-generating supermaps"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity sweep over amplitude-damping pairs (AD(η), AD(η)); writes CSV.
    Sweep {
        #[arg(long, default_value_t = 0.0)]
        eta_start: f64,
        #[arg(long, default_value_t = 0.3)]
        eta_end: f64,
        #[arg(long, default_value_t = 7)]
        steps: usize,
        #[arg(long, value_delimiter = ',', default_value = "freepar,freefix,freedef,free")]
        classes: Vec<ClassTag>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        eps: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Bisect the η values where two classes' capacities separate or merge.
    Threshold {
        #[arg(long, default_value_t = 0.05)]
        eta_start: f64,
        #[arg(long, default_value_t = 0.35)]
        eta_end: f64,
        #[arg(long, default_value_t = 7)]
        steps: usize,
        #[arg(long, value_delimiter = ',', default_value = "free,freedef")]
        classes: Vec<ClassTag>,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Verify the exact feasibility certificates for a shipped case.
    Certify {
        #[arg(default_value = "ad01")]
        case: String,
        /// Override the certificate data directory.
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Seeded randomized no-advantage trials.
    Trials {
        kind: TrialKind,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 2026)]
        seed: u64,
        /// Error tolerances (pauli trials only).
        #[arg(long, value_delimiter = ',', default_value = "0,0.02")]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Export a capacity program as SDPA sparse format for external solvers.
    ExportSdpa {
        /// Channel list spec (JSON array of {kind, params...}).
        #[arg(long)]
        channels: PathBuf,
        #[arg(long, value_enum, default_value_t = ClassTag::Free)]
        class: ClassTag,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TrialKind {
    /// |m*_Free − m*_FreePar| on random Pauli channel pairs.
    Pauli,
    /// |ω − p| on random qubit channels at m = 2.
    OmegaP,
}

/// Formats a real with 9 significant digits, the fixed CSV contract.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.00000000".into();
    }
    let decimals = (8 - x.abs().log10().floor() as i64).clamp(0, 17) as usize;
    format!("{x:.decimals$}")
}

/// Uniform η grid with `steps` points (a single point when steps = 1).
pub fn eta_grid(start: f64, end: f64, steps: usize) -> Result<Vec<f64>, String> {
    if steps == 0 {
        return Err("steps must be at least 1".into());
    }
    if !(0.0..=0.5).contains(&start) || !(0.0..=0.5).contains(&end) || end < start {
        return Err(format!("η grid [{start}, {end}] must lie inside [0, 0.5]"));
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    Ok((0..steps)
        .map(|i| start + (end - start) * i as f64 / (steps - 1) as f64)
        .collect())
}

fn solver_from_env() -> Result<ClarabelSolver, CliError> {
    let mut solver = ClarabelSolver::new();
    if let Ok(text) = std::env::var(SOLVER_TOL_ENV) {
        let tol: f64 = text
            .parse()
            .map_err(|_| CliError::Input(format!("{SOLVER_TOL_ENV}={text:?} is not a number")))?;
        if !(tol > 0.0) {
            return Err(CliError::Input(format!(
                "{SOLVER_TOL_ENV} must be positive, got {tol}"
            )));
        }
        solver = ClarabelSolver::with_tol(tol);
    }
    Ok(solver)
}

fn status_name(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Inaccurate => "inaccurate",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::Unbounded => "unbounded",
        SolveStatus::Failed => "failed",
    }
}

fn build_ad_pair(eta: f64) -> Result<ChannelList, CliError> {
    let mk = |x: &str, y: &str| {
        amplitude_damping(eta, x, y).map_err(|e| CliError::Input(e.to_string()))
    };
    ChannelList::new(vec![mk("X1", "Y1")?, mk("X2", "Y2")?])
        .map_err(|e| CliError::Input(e.to_string()))
}

fn build_class_program(
    list: &ChannelList,
    class: ClassTag,
    eps: f64,
) -> Result<Vec<SdpProblem>, OpError> {
    match class {
        ClassTag::Free => Ok(vec![build_capacity_free(list, eps)?]),
        ClassTag::Freedef => Ok(vec![build_capacity_freedef2(list, eps)?]),
        // FreeFix allows either fixed order: take the better of the two.
        ClassTag::Freefix => Ok(vec![
            build_capacity_freefix2(list, eps, (0, 1))?,
            build_capacity_freefix2(list, eps, (1, 0))?,
        ]),
        ClassTag::Freepar => Ok(vec![build_capacity_freepar(list, eps)?]),
    }
}

/// Solves the capacity program(s) for one class, keeping the best usable
/// optimum (FreeFix maximizes over the two orders).
pub fn solve_class(
    list: &ChannelList,
    class: ClassTag,
    eps: f64,
    solver: &ClarabelSolver,
) -> Result<SolverResult, OpError> {
    let mut best: Option<SolverResult> = None;
    let mut total_ms = 0.0;
    for problem in build_class_program(list, class, eps)? {
        let result = solver.solve(&problem)?;
        total_ms += result.solve_ms;
        let usable = matches!(
            result.status,
            SolveStatus::Optimal | SolveStatus::Inaccurate
        );
        best = match best {
            None => Some(result),
            Some(prev) => {
                let prev_usable = matches!(
                    prev.status,
                    SolveStatus::Optimal | SolveStatus::Inaccurate
                );
                if (usable && !prev_usable) || (usable == prev_usable && result.objective > prev.objective)
                {
                    Some(result)
                } else {
                    Some(prev)
                }
            }
        };
    }
    let mut best = best.expect("at least one program per class");
    best.solve_ms = total_ms;
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub eta: f64,
    pub class: ClassTag,
    pub eps: f64,
    pub m_star: f64,
    pub capacity_bits: f64,
    pub status: &'static str,
    pub solve_ms: f64,
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            sig9(self.eta),
            self.class.name(),
            sig9(self.eps),
            sig9(self.m_star),
            sig9(self.capacity_bits),
            self.status,
            sig9(self.solve_ms)
        )
    }
}

pub const CSV_HEADER: &str = "eta,class,eps,m_star,capacity_bits,status,solve_ms";

fn sweep_one(eta: f64, class: ClassTag, eps: f64, solver: &ClarabelSolver) -> SweepRow {
    let failed = |ms: f64| SweepRow {
        eta,
        class,
        eps,
        m_star: f64::NAN,
        capacity_bits: f64::NAN,
        status: "failed",
        solve_ms: ms,
    };
    let list = match build_ad_pair(eta) {
        Ok(list) => list,
        Err(_) => return failed(0.0),
    };
    match solve_class(&list, class, eps, solver) {
        Ok(result) => {
            let usable = matches!(
                result.status,
                SolveStatus::Optimal | SolveStatus::Inaccurate
            );
            if !usable {
                return failed(result.solve_ms);
            }
            let bits = capacity_from(result.objective, CAPACITY_SLACK, class.name(), eps)
                .map(|c| c.capacity_bits)
                .unwrap_or(f64::NAN);
            SweepRow {
                eta,
                class,
                eps,
                m_star: result.objective,
                capacity_bits: bits,
                status: status_name(result.status),
                solve_ms: result.solve_ms,
            }
        }
        Err(_) => failed(0.0),
    }
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Input(format!("cannot build worker pool: {e}")))
}

fn cmd_sweep(
    eta_start: f64,
    eta_end: f64,
    steps: usize,
    classes: &[ClassTag],
    eps_list: &[f64],
    out: &Path,
    jobs: usize,
) -> Result<(), CliError> {
    let grid = eta_grid(eta_start, eta_end, steps).map_err(CliError::Input)?;
    if classes.is_empty() || eps_list.is_empty() {
        return Err(CliError::Input("need at least one class and one eps".into()));
    }
    let solver = solver_from_env()?;
    let mut tasks: Vec<(f64, ClassTag, f64)> = Vec::new();
    for &eta in &grid {
        for &class in classes {
            for &eps in eps_list {
                tasks.push((eta, class, eps));
            }
        }
    }
    let pool = thread_pool(jobs)?;
    let mut rows: Vec<SweepRow> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(eta, class, eps)| sweep_one(eta, class, eps, &solver))
            .collect()
    });
    rows.sort_by(|a, b| {
        a.eta
            .partial_cmp(&b.eta)
            .unwrap()
            .then(a.class.cmp(&b.class))
            .then(a.eps.partial_cmp(&b.eps).unwrap())
    });
    let mut text = String::from(CSV_HEADER);
    text.push('\n');
    for row in &rows {
        text.push_str(&row.csv_line());
        text.push('\n');
    }
    std::fs::write(out, text)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", out.display())))?;
    let failures = rows.iter().filter(|r| r.status == "failed").count();
    println!(
        "wrote {} rows to {} ({} solver failures)",
        rows.len(),
        out.display(),
        failures
    );
    Ok(())
}

/// Floored capacity in bits for one class at one grid point; solver
/// failures abort the threshold search (exit 3).
fn capacity_bits_at(
    eta: f64,
    class: ClassTag,
    eps: f64,
    solver: &ClarabelSolver,
    cache: &mut BTreeMap<(u64, ClassTag), f64>,
) -> Result<f64, CliError> {
    let key = (eta.to_bits(), class);
    if let Some(&bits) = cache.get(&key) {
        return Ok(bits);
    }
    let row = sweep_one(eta, class, eps, solver);
    if row.status == "failed" || !row.capacity_bits.is_finite() {
        return Err(CliError::Solver(format!(
            "solver failed at eta = {eta} for class {}",
            class.name()
        )));
    }
    cache.insert(key, row.capacity_bits);
    Ok(row.capacity_bits)
}

fn cmd_threshold(
    eta_start: f64,
    eta_end: f64,
    steps: usize,
    classes: &[ClassTag],
    eps: f64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let [a, b] = classes else {
        return Err(CliError::Input(
            "threshold needs exactly two classes, e.g. --classes free,freedef".into(),
        ));
    };
    let (a, b) = (*a, *b);
    if a == b {
        println!("identical classes: no separation, empty interval");
        if let Some(path) = out {
            write_json(path, &serde_json::json!({ "intervals": [] }))?;
        }
        return Ok(());
    }
    if steps < 2 {
        return Err(CliError::Input("threshold needs at least 2 grid steps".into()));
    }
    let grid = eta_grid(eta_start, eta_end, steps).map_err(CliError::Input)?;
    let solver = solver_from_env()?;
    let mut cache = BTreeMap::new();
    let advantage = |eta: f64, cache: &mut BTreeMap<(u64, ClassTag), f64>| {
        Ok::<bool, CliError>(
            capacity_bits_at(eta, a, eps, &solver, cache)?
                != capacity_bits_at(eta, b, eps, &solver, cache)?,
        )
    };
    let coarse: Vec<(f64, bool)> = {
        let mut v = Vec::new();
        for &eta in &grid {
            let adv = advantage(eta, &mut cache)?;
            println!("eta = {}: advantage = {adv}", sig9(eta));
            v.push((eta, adv));
        }
        v
    };
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    for pair in coarse.windows(2) {
        let [(lo, adv_lo), (hi, adv_hi)] = [pair[0], pair[1]];
        if adv_lo == adv_hi {
            continue;
        }
        let (mut lo, mut hi) = (lo, hi);
        while hi - lo > 0.01 {
            let mid = 0.5 * (lo + hi);
            if advantage(mid, &mut cache)? == adv_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        intervals.push((lo, hi));
    }
    match intervals.len() {
        0 => println!("no sign change on the grid: capacities agree everywhere sampled"),
        1 => println!(
            "threshold interval: [{}, {}]",
            sig9(intervals[0].0),
            sig9(intervals[0].1)
        ),
        _ => {
            println!("non-monotone advantage: {} sign changes", intervals.len());
            for (lo, hi) in &intervals {
                println!("  sign change in [{}, {}]", sig9(*lo), sig9(*hi));
            }
        }
    }
    if let Some(path) = out {
        let json = serde_json::json!({
            "classes": [a.name(), b.name()],
            "eps": eps,
            "intervals": intervals.iter().map(|(lo, hi)| vec![lo, hi]).collect::<Vec<_>>(),
        });
        write_json(path, &json)?;
    }
    Ok(())
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("serialization failed: {e}")))?;
    std::fs::write(path, text)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn print_verdict(title: &str, verdict: &Verdict) {
    println!("{title}:");
    for check in &verdict.checks {
        let tag = if check.passed { "PASS" } else { "FAIL" };
        println!("  [{tag}] {} — {}", check.name, check.detail);
    }
    if let Some(bound) = &verdict.bound {
        println!("  certified bound: m* <= {bound}");
    }
}

fn cmd_certify(case: &str, data: Option<&Path>) -> Result<(), CliError> {
    let dir = data
        .map(Path::to_path_buf)
        .unwrap_or_else(|| bundled_case_dir(case));
    if !dir.join("case.json").exists() {
        return Err(CliError::Input(format!(
            "certificate data for case {case:?} not found under {}",
            dir.display()
        )));
    }
    let bundle = load_certificates(&dir).map_err(|e| {
        let text = e.to_string();
        if text.contains("checksum") {
            CliError::Check(text)
        } else {
            CliError::Input(text)
        }
    })?;
    println!("case {}: eta = {}, lambda = {}", bundle.case_id, bundle.eta, bundle.lambda);
    println!("declared subsystem order: {}", bundle.declared_order().join(", "));
    let discovered = discover_layout_order(&bundle)?;
    match &discovered {
        Some(order) => println!("discovered subsystem order: {}", order.join(", ")),
        None => println!("discovered subsystem order: none (no ordering satisfies all constraints)"),
    }
    let [primal, dual_free, dual_def] = verify_all(&bundle)?;
    print_verdict("primal Free (m = 2)", &primal);
    print_verdict("dual Free", &dual_free);
    print_verdict("dual FreeDef", &dual_def);
    let all_passed =
        primal.passed() && dual_free.passed() && dual_def.passed() && discovered.is_some();
    if all_passed {
        println!("all exact verifications passed: C0_Free = 1 and C0_FreeDef = 0");
        Ok(())
    } else {
        Err(CliError::Check("exact verification failed".into()))
    }
}

struct TrialOutcome {
    trial: usize,
    deltas: Vec<(String, f64)>,
    failures: usize,
}

fn pauli_trial(
    trial: usize,
    seed: u64,
    eps_list: &[f64],
    solver: &ClarabelSolver,
) -> Result<TrialOutcome, OpError> {
    let list = random_pauli_pair(&mut trial_rng(seed, trial as u64))
        .map_err(|e| OpError::Invalid(e.to_string()))?;
    let mut deltas = Vec::new();
    let mut failures = 0;
    for &eps in eps_list {
        let free = solve_class(&list, ClassTag::Free, eps, solver)?;
        let par = solve_class(&list, ClassTag::Freepar, eps, solver)?;
        let ok = |r: &SolverResult| {
            matches!(r.status, SolveStatus::Optimal | SolveStatus::Inaccurate)
        };
        if ok(&free) && ok(&par) {
            deltas.push((
                format!("eps = {}", sig9(eps)),
                (free.objective - par.objective).abs(),
            ));
        } else {
            failures += 1;
        }
    }
    Ok(TrialOutcome {
        trial,
        deltas,
        failures,
    })
}

fn omega_p_trial(trial: usize, seed: u64, solver: &ClarabelSolver) -> Result<TrialOutcome, OpError> {
    let channel = random_qubit_channel(&mut trial_rng(seed, trial as u64), "X1", "Y1")
        .map_err(|e| OpError::Invalid(e.to_string()))?;
    let list = ChannelList::new(vec![channel]).map_err(|e| OpError::Invalid(e.to_string()))?;
    let p = solver.solve(&build_avg_error_freepar(&list, 2)?)?;
    let w = solver.solve(&build_omega_freepar(&list, 2)?)?;
    let ok = |r: &SolverResult| matches!(r.status, SolveStatus::Optimal | SolveStatus::Inaccurate);
    if ok(&p) && ok(&w) {
        Ok(TrialOutcome {
            trial,
            deltas: vec![("m = 2".into(), (p.objective - w.objective).abs())],
            failures: 0,
        })
    } else {
        Ok(TrialOutcome {
            trial,
            deltas: vec![],
            failures: 1,
        })
    }
}

fn cmd_trials(
    kind: TrialKind,
    n: usize,
    seed: u64,
    eps_list: &[f64],
    jobs: usize,
) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Input("need at least one trial (n >= 1)".into()));
    }
    let solver = solver_from_env()?;
    let tolerance = match kind {
        TrialKind::Pauli => 1e-5,
        TrialKind::OmegaP => 1e-7,
    };
    let pool = thread_pool(jobs)?;
    let outcomes: Result<Vec<TrialOutcome>, OpError> = pool.install(|| {
        (0..n)
            .into_par_iter()
            .map(|trial| match kind {
                TrialKind::Pauli => pauli_trial(trial, seed, eps_list, &solver),
                TrialKind::OmegaP => omega_p_trial(trial, seed, &solver),
            })
            .collect()
    });
    let mut outcomes = outcomes.map_err(|e| CliError::Solver(e.to_string()))?;
    outcomes.sort_by_key(|o| o.trial);
    let mut max_delta: f64 = 0.0;
    let mut failures = 0;
    for outcome in &outcomes {
        failures += outcome.failures;
        for (label, delta) in &outcome.deltas {
            println!("trial {:3}  {label}: delta = {}", outcome.trial, sig9(*delta));
            max_delta = max_delta.max(*delta);
        }
    }
    println!(
        "max delta = {} over {n} trials (tolerance {tolerance:e}), {failures} solver failures",
        sig9(max_delta)
    );
    if failures > 0 {
        return Err(CliError::Solver(format!("{failures} trial solves failed")));
    }
    if max_delta > tolerance {
        return Err(CliError::Check(format!(
            "max delta {max_delta:e} exceeds tolerance {tolerance:e}"
        )));
    }
    println!("PASS");
    Ok(())
}

fn cmd_export_sdpa(
    channels: &Path,
    class: ClassTag,
    eps: f64,
    out: &Path,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(channels)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", channels.display())))?;
    let specs: Vec<ChannelSpec> = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("bad channel spec: {e}")))?;
    let list = build_list(&specs).map_err(|e| CliError::Input(e.to_string()))?;
    // FreeFix exports the slot-order (1 → 2) program.
    let problem = match class {
        ClassTag::Free => build_capacity_free(&list, eps),
        ClassTag::Freedef => build_capacity_freedef2(&list, eps),
        ClassTag::Freefix => build_capacity_freefix2(&list, eps, (0, 1)),
        ClassTag::Freepar => build_capacity_freepar(&list, eps),
    }?;
    let text = causalcap::sdp::sdpa::export_sdpa(&problem);
    std::fs::write(out, text)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", out.display())))?;
    println!("wrote SDPA problem to {}", out.display());
    Ok(())
}

/// Parses arguments and runs the requested command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success exits.
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Sweep {
            eta_start,
            eta_end,
            steps,
            classes,
            eps,
            out,
            jobs,
        } => cmd_sweep(*eta_start, *eta_end, *steps, classes, eps, out, *jobs),
        Command::Threshold {
            eta_start,
            eta_end,
            steps,
            classes,
            eps,
            out,
            jobs: _,
        } => cmd_threshold(*eta_start, *eta_end, *steps, classes, *eps, out.as_deref()),
        Command::Certify { case, data } => cmd_certify(case, data.as_deref()),
        Command::Trials {
            kind,
            n,
            seed,
            eps,
            jobs,
        } => cmd_trials(*kind, *n, *seed, eps, *jobs),
        Command::ExportSdpa {
            channels,
            class,
            eps,
            out,
        } => cmd_export_sdpa(channels, *class, *eps, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_gives_nine_significant_digits() {
        assert_eq!(sig9(0.1), "0.100000000");
        assert_eq!(sig9(2.124434), "2.12443400");
        assert_eq!(sig9(1387.0 / 1620.0), "0.856172840");
        assert_eq!(sig9(0.0), "0.00000000");
        assert_eq!(sig9(f64::NAN), "NaN");
    }

    #[test]
    fn eta_grid_endpoints_and_bounds() {
        let grid = eta_grid(0.0, 0.3, 7).unwrap();
        assert_eq!(grid.len(), 7);
        assert!((grid[0] - 0.0).abs() < 1e-15);
        assert!((grid[6] - 0.3).abs() < 1e-15);
        assert!(eta_grid(0.0, 0.6, 3).is_err());
        assert!(eta_grid(0.2, 0.1, 3).is_err());
        assert!(eta_grid(0.1, 0.2, 0).is_err());
    }

    #[test]
    fn class_order_is_weakest_to_strongest() {
        let mut classes = vec![ClassTag::Free, ClassTag::Freepar, ClassTag::Freedef];
        classes.sort();
        assert_eq!(
            classes,
            vec![ClassTag::Freepar, ClassTag::Freedef, ClassTag::Free]
        );
    }

    #[test]
    fn csv_line_matches_schema() {
        let row = SweepRow {
            eta: 0.1,
            class: ClassTag::Free,
            eps: 0.0,
            m_star: 2.124434,
            capacity_bits: 1.0,
            status: "optimal",
            solve_ms: 12.5,
        };
        assert_eq!(CSV_HEADER.split(',').count(), 7);
        assert_eq!(
            row.csv_line(),
            "0.100000000,free,0.00000000,2.12443400,1.00000000,optimal,12.5000000"
        );
    }

    #[test]
    fn certify_rejects_unknown_case() {
        let err = cmd_certify("no-such-case", None).unwrap_err();
        assert_eq!(err.code(), EXIT_INPUT_ERROR);
    }

    #[test]
    fn trials_reject_zero_runs() {
        let err = cmd_trials(TrialKind::Pauli, 0, 1, &[0.0], 1).unwrap_err();
        assert_eq!(err.code(), EXIT_INPUT_ERROR);
    }
}

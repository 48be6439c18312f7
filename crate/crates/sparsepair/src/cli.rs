//! The `sparsepair` command line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use sparsepair_core::dictionaries::{build_dirac_fourier, build_mub_concat, build_random_pair};
use sparsepair_core::probabilistic::{
    self, CoefficientModel, DictionaryParams, RandomSupportSpec, TailBoundParams,
};
use sparsepair_core::solvers::{self, BpOptions, Solver, OMP_DEFAULT_TOL};
use sparsepair_core::spark::SparkOutcome;
use sparsepair_core::thresholds::{self, CoherenceTriple, ThresholdReport};
use sparsepair_core::ConcatDictionary;

use crate::error::{Error, Result};
use crate::output::{self, fmt_num, Csv};
use crate::{config, io, parallel};

#[derive(Debug, Parser)]
#[command(name = "sparsepair", version, about = "Sparsity thresholds, uncertainty relations and sparse recovery for concatenated dictionaries")]
pub struct Cli {
    /// Master seed for random dictionaries and Monte Carlo trials.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// `key = value` file; flags on the command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every sparsity threshold for one coherence triple.
    Thresholds(ThresholdsArgs),
    /// Thresholds versus muB with muA = muB, as CSV.
    Figure1(Figure1Args),
    /// Run a solver on a dictionary file and a signal file.
    Recover(RecoverArgs),
    /// Exhaustive check of the uncertainty relation.
    Uncertainty(UncertaintyArgs),
    /// Exact spark by enumeration, with the coherence bounds.
    Spark(SparkArgs),
    /// Recovery and singular-value experiments over random supports.
    Montecarlo(MontecarloArgs),
    /// Mutually unbiased bases in prime dimension.
    Mub(MubArgs),
    /// Random-support recovery conditions and tail-bound constants.
    Conditions(ConditionsArgs),
}

#[derive(Debug, Args)]
pub struct ThresholdsArgs {
    #[arg(long)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu_a: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu_b: f64,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    #[arg(long, default_value_t = 0.01)]
    pub mu: f64,
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
}

/// Where a dictionary comes from.
#[derive(Debug, Args)]
pub struct DictArgs {
    /// `dirac-fourier`, `mub`, `random`, or a dictionary file.
    #[arg(long, default_value = "dirac-fourier")]
    pub dict: String,
    /// Dimension for `dirac-fourier` and `random`.
    #[arg(long, default_value_t = 4)]
    pub d: usize,
    /// Prime dimension for `mub`.
    #[arg(long, default_value_t = 5)]
    pub p: usize,
    /// Number of bases in A for `mub`.
    #[arg(long, default_value_t = 1)]
    pub split: usize,
    /// Atoms in A for `random` (default d).
    #[arg(long)]
    pub atoms_a: Option<usize>,
    /// Atoms in B for `random` (default d).
    #[arg(long)]
    pub atoms_b: Option<usize>,
}

impl DictArgs {
    pub fn load(&self, seed: u64) -> Result<ConcatDictionary> {
        Ok(match self.dict.as_str() {
            "dirac-fourier" => build_dirac_fourier(self.d)?,
            "mub" => build_mub_concat(self.p, self.split)?,
            "random" => build_random_pair(self.d, self.atoms_a.unwrap_or(self.d), self.atoms_b.unwrap_or(self.d), seed)?,
            path => io::read_dictionary(Path::new(path))?,
        })
    }

    fn flags(&self) -> Vec<String> {
        let mut f = vec!["--dict".to_string(), self.dict.clone()];
        match self.dict.as_str() {
            "dirac-fourier" => f.extend(["--d".into(), self.d.to_string()]),
            "mub" => f.extend(["--p".into(), self.p.to_string(), "--split".into(), self.split.to_string()]),
            "random" => f.extend([
                "--d".into(),
                self.d.to_string(),
                "--atoms-a".into(),
                self.atoms_a.unwrap_or(self.d).to_string(),
                "--atoms-b".into(),
                self.atoms_b.unwrap_or(self.d).to_string(),
            ]),
            _ => {}
        }
        f
    }
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    #[command(flatten)]
    pub dict: DictArgs,
    /// Signal file holding the planted coefficients.
    #[arg(long)]
    pub signal: PathBuf,
    /// `p0`, `bp`, `omp` or `all`.
    #[arg(long, default_value = "all")]
    pub solver: String,
    /// Largest support tried by `p0` (default: size of the planted support, at least 1).
    #[arg(long)]
    pub max_k: Option<usize>,
    /// BP stopping tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// BP iteration cap.
    #[arg(long, default_value_t = 50_000)]
    pub max_iter: usize,
    /// BP penalty parameter.
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// OMP stopping threshold on the relative residual.
    #[arg(long, default_value_t = OMP_DEFAULT_TOL)]
    pub omp_tol: f64,
}

#[derive(Debug, Args)]
pub struct UncertaintyArgs {
    #[command(flatten)]
    pub dict: DictArgs,
    /// Largest support size on both sides.
    #[arg(long, default_value_t = 2)]
    pub max: usize,
    #[arg(long)]
    pub max_na: Option<usize>,
    #[arg(long)]
    pub max_nb: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SparkArgs {
    #[command(flatten)]
    pub dict: DictArgs,
    /// Largest subset size enumerated (default d + 1).
    #[arg(long)]
    pub max_check: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MontecarloArgs {
    #[command(flatten)]
    pub dict: DictArgs,
    /// Fixed indices into A, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub fixed_a: Vec<usize>,
    /// Size of the random support in B.
    #[arg(long, default_value_t = 1)]
    pub nb: usize,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    /// `gaussian`, `uniform-phase` or `constant-phase`.
    #[arg(long, default_value = "gaussian")]
    pub model: String,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
}

#[derive(Debug, Args)]
pub struct MubArgs {
    #[arg(long, default_value_t = 5)]
    pub p: usize,
    #[arg(long, default_value_t = 1)]
    pub split: usize,
    /// Add the six scaling ratios.
    #[arg(long)]
    pub report_scaling: bool,
}

#[derive(Debug, Args)]
pub struct ConditionsArgs {
    #[command(flatten)]
    pub dict: DictArgs,
    #[arg(long, default_value_t = 1)]
    pub na: usize,
    #[arg(long, default_value_t = 1)]
    pub nb: usize,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
}

/// The fully resolved command line, defaults included, as recorded in
/// output headers.
pub fn resolved_command(cli: &Cli) -> String {
    let mut parts = vec!["sparsepair".to_string(), "--seed".into(), cli.seed.to_string()];
    if let Some(t) = cli.threads {
        parts.extend(["--threads".into(), t.to_string()]);
    }
    let (name, flags): (&str, Vec<String>) = match &cli.command {
        Command::Thresholds(a) => {
            ("thresholds", vec!["--mu".into(), fmt_num(a.mu), "--mu-a".into(), fmt_num(a.mu_a), "--mu-b".into(), fmt_num(a.mu_b)])
        }
        Command::Figure1(a) => ("figure1", vec!["--mu".into(), fmt_num(a.mu), "--grid".into(), a.grid.to_string()]),
        Command::Recover(a) => {
            let mut f = a.dict.flags();
            f.extend(["--signal".into(), a.signal.display().to_string(), "--solver".into(), a.solver.clone()]);
            if let Some(k) = a.max_k {
                f.extend(["--max-k".into(), k.to_string()]);
            }
            f.extend([
                "--tol".into(),
                fmt_num(a.tol),
                "--max-iter".into(),
                a.max_iter.to_string(),
                "--rho".into(),
                fmt_num(a.rho),
                "--omp-tol".into(),
                fmt_num(a.omp_tol),
            ]);
            ("recover", f)
        }
        Command::Uncertainty(a) => {
            let mut f = a.dict.flags();
            f.extend([
                "--max-na".into(),
                a.max_na.unwrap_or(a.max).to_string(),
                "--max-nb".into(),
                a.max_nb.unwrap_or(a.max).to_string(),
            ]);
            ("uncertainty", f)
        }
        Command::Spark(a) => {
            let mut f = a.dict.flags();
            if let Some(k) = a.max_check {
                f.extend(["--max-check".into(), k.to_string()]);
            }
            ("spark", f)
        }
        Command::Montecarlo(a) => {
            let mut f = a.dict.flags();
            if !a.fixed_a.is_empty() {
                let list: Vec<String> = a.fixed_a.iter().map(|i| i.to_string()).collect();
                f.extend(["--fixed-a".into(), list.join(",")]);
            }
            f.extend([
                "--nb".into(),
                a.nb.to_string(),
                "--trials".into(),
                a.trials.to_string(),
                "--model".into(),
                a.model.clone(),
                "--s".into(),
                fmt_num(a.s),
                "--gamma".into(),
                fmt_num(a.gamma),
            ]);
            ("montecarlo", f)
        }
        Command::Mub(a) => {
            let mut f = vec!["--p".into(), a.p.to_string(), "--split".into(), a.split.to_string()];
            if a.report_scaling {
                f.push("--report-scaling".into());
            }
            ("mub", f)
        }
        Command::Conditions(a) => {
            let mut f = a.dict.flags();
            f.extend([
                "--na".into(),
                a.na.to_string(),
                "--nb".into(),
                a.nb.to_string(),
                "--s".into(),
                fmt_num(a.s),
                "--gamma".into(),
                fmt_num(a.gamma),
            ]);
            ("conditions", f)
        }
    };
    parts.push(name.into());
    parts.extend(flags);
    if let Some(o) = &cli.out {
        parts.extend(["--out".into(), o.display().to_string()]);
    }
    parts.join(" ")
}

fn line(out: &mut String, key: &str, value: impl AsRef<str>) {
    let _ = writeln!(out, "{key:<28} {}", value.as_ref());
}

fn thresholds_report(a: &ThresholdsArgs) -> Result<String> {
    let t = CoherenceTriple::new(a.mu_a, a.mu_b, a.mu)?;
    let r = ThresholdReport::compute(&t)?;
    let two_onb = t.is_two_onb();
    let mut p0: Vec<(&str, f64, bool)> = vec![("general_p0", r.general_p0, true), ("pair_p0", r.pair_p0, true)];
    if let Some(v) = r.pair_symmetric_p0 {
        p0.push(("pair_symmetric_p0", v, true));
    }
    p0.push(("two_onb_p0", r.two_onb_p0, two_onb));
    let bp: Vec<(&str, f64, bool)> = vec![
        ("pair_bp_omp", r.pair_bp_omp, true),
        ("two_onb_bp", r.two_onb_bp, two_onb),
        ("two_onb_refined", r.two_onb_refined, two_onb),
    ];
    let mut out = String::new();
    let _ = writeln!(out, "quantity,value,applies,largest");
    for group in [&p0, &bp] {
        let best = group.iter().filter(|g| g.2).map(|g| g.1).fold(f64::MIN, f64::max);
        for &(name, v, applies) in group.iter() {
            let mark = if applies && v == best { "*" } else { "" };
            let _ = writeln!(out, "{name},{},{applies},{mark}", fmt_num(v));
        }
    }
    for (name, v) in [("mu_a", t.mu_a()), ("mu_b", t.mu_b()), ("mu", t.mu()), ("x_bord", r.x_bord), ("x_stat", r.x_stat), ("x_sol", r.x_sol), ("kappa", r.kappa)] {
        let _ = writeln!(out, "{name},{},,", fmt_num(v));
    }
    Ok(out)
}

fn thresholds_table(csv: &str) -> String {
    let mut out = String::new();
    for l in csv.lines().skip(1) {
        let cells: Vec<&str> = l.split(',').collect();
        let mark = if cells[3] == "*" { "  <- largest applicable" } else if cells[2] == "false" { "  (needs muA = muB = 0)" } else { "" };
        let _ = writeln!(out, "{:<20} {:>22}{mark}", cells[0], cells[1]);
    }
    out
}

fn figure1_csv(a: &Figure1Args) -> Result<String> {
    let rows = thresholds::figure1_table(a.mu, a.grid)?;
    let mut csv = Csv::new(&["mu_b", "general_p0", "pair_p0_sym", "pair_bp_omp", "two_onb_p0", "two_onb_bp"]);
    for r in rows {
        csv.row([r.mu_b, r.general_p0, r.pair_symmetric_p0, r.pair_bp_omp, r.two_onb_p0, r.two_onb_bp].map(fmt_num));
    }
    Ok(csv.as_str().to_string())
}

fn fmt_support(s: &[usize]) -> String {
    let v: Vec<String> = s.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn recover_report(a: &RecoverArgs, seed: u64) -> Result<String> {
    let c = a.dict.load(seed)?;
    let signal = io::read_signal(&a.signal)?;
    if signal.coefficients.len() != c.atoms() {
        return Err(Error::Usage(format!("signal has {} coefficients, dictionary has {} atoms", signal.coefficients.len(), c.atoms())));
    }
    let solvers: Vec<Solver> = if a.solver == "all" { Solver::ALL.to_vec() } else { vec![a.solver.parse::<Solver>()?] };
    let x = &signal.coefficients;
    let d = c.joint();
    let y = d.entries() * x;
    let mut out = String::new();
    line(&mut out, "dictionary", format!("{} (d={}, Na={}, Nb={})", d.label(), c.dim(), c.n_a(), c.n_b()));
    line(&mut out, "coherences", format!("muA={} muB={} mu={}", fmt_num(c.mu_a()), fmt_num(c.mu_b()), fmt_num(c.mu())));
    let planted = solvers::SparseSignal::new(x.clone());
    line(&mut out, "planted support", fmt_support(&planted.support));
    let split = planted.split_support(&c);
    let (na, nb) = (split.na(), split.nb());
    line(&mut out, "planted (na, nb)", format!("({na}, {nb})"));
    let pair = thresholds::threshold_pair_p0(&c.triple())?.value;
    let bp_thr = thresholds::threshold_pair_bp_omp(c.mu_b(), c.mu())?.value;
    line(&mut out, "pair_p0 threshold", fmt_num(pair));
    line(&mut out, "pair_bp_omp threshold", fmt_num(bp_thr));
    line(&mut out, "support-size condition", (na + nb > 0 && thresholds::bp_omp_condition(na, nb, c.mu_b(), c.mu())).to_string());
    for s in solvers {
        let _ = writeln!(out, "[{s}]");
        let mut outcome = match s {
            Solver::P0 => {
                let max_k = a.max_k.unwrap_or(planted.sparsity().max(1));
                match solvers::p0_bruteforce(d, &y, max_k) {
                    Ok(sol) => {
                        line(&mut out, "non_unique", sol.non_unique.to_string());
                        if let Some(alt) = &sol.alternative {
                            line(&mut out, "alternative support", fmt_support(alt));
                        }
                        sol.into_outcome()
                    }
                    Err(sparsepair_core::Error::NoSparseRepresentation(k)) => {
                        line(&mut out, "success", "false");
                        line(&mut out, "note", format!("no representation with at most {k} atoms"));
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Solver::Bp => solvers::basis_pursuit(d, &y, BpOptions { rho: a.rho, tol: a.tol, max_iter: a.max_iter })?,
            Solver::Omp => solvers::omp(d, &y, c.dim(), a.omp_tol)?,
        };
        let ok = outcome.assess(x);
        line(&mut out, "success", ok.to_string());
        line(&mut out, "support", fmt_support(&outcome.support()));
        line(&mut out, "relative error", fmt_num(solvers::relative_error(&outcome.recovered, x)));
        line(&mut out, "residual", fmt_num(outcome.residual_norm));
        line(&mut out, "iterations", outcome.iterations.to_string());
        line(&mut out, "converged", outcome.converged.to_string());
    }
    Ok(out)
}

fn uncertainty_csv(a: &UncertaintyArgs, seed: u64) -> Result<String> {
    let c = a.dict.load(seed)?;
    let (max_na, max_nb) = (a.max_na.unwrap_or(a.max), a.max_nb.unwrap_or(a.max));
    let scan = parallel::uncertainty_scan(&c, max_na, max_nb)?;
    let mut csv = Csv::new(&["na", "nb", "achieved", "min_bound_rhs"]);
    for r in &scan.rows {
        csv.row([r.na.to_string(), r.nb.to_string(), r.achieved.to_string(), fmt_num(r.bound_rhs)]);
    }
    let mut out = csv.as_str().to_string();
    let _ = writeln!(out, "# coherences: muA={} muB={} mu={}", fmt_num(c.mu_a()), fmt_num(c.mu_b()), fmt_num(c.mu()));
    let _ = writeln!(out, "# violations: {}", scan.violations().len());
    for r in scan.rows.iter().filter(|r| r.meets_with_equality()) {
        let _ = writeln!(out, "# equality at ({}, {}): na*nb = {} = bound", r.na, r.nb, r.na * r.nb);
    }
    Ok(out)
}

fn spark_report(a: &SparkArgs, seed: u64) -> Result<String> {
    let c = a.dict.load(seed)?;
    let max_check = a.max_check.unwrap_or(c.dim() + 1);
    let outcome = parallel::spark_bruteforce_concat(&c, max_check)?;
    let mut out = String::new();
    line(&mut out, "dictionary", format!("{} (d={}, N={})", c.joint().label(), c.dim(), c.atoms()));
    line(&mut out, "coherences", format!("muA={} muB={} mu={}", fmt_num(c.mu_a()), fmt_num(c.mu_b()), fmt_num(c.mu())));
    match &outcome {
        SparkOutcome::Exact(cert) => {
            line(&mut out, "spark", cert.spark.to_string());
            line(&mut out, "witness", fmt_support(&cert.witness));
        }
        SparkOutcome::ExceedsMaxCheck { checked, .. } => {
            line(&mut out, "spark", format!("exceeds {checked} (every subset of size <= {checked} is independent)"));
        }
        SparkOutcome::NoDependentSubset { checked, .. } => {
            line(&mut out, "spark", format!("no dependent subset (N = {checked} <= d, all columns independent)"));
        }
    }
    let b = outcome.bounds();
    line(&mut out, "bound 1+1/mu", fmt_num(b.general));
    line(&mut out, "bound 2/mu (two ONB)", b.two_onb.map_or("n/a".into(), fmt_num));
    line(&mut out, "bound 2*pair_p0", b.pair.map_or("n/a".into(), fmt_num));
    if let Some(s) = outcome.spark() {
        line(&mut out, "bounds respected", b.admits(s).to_string());
    }
    Ok(out)
}

fn tail_lines(out: &mut String, g: &TailBoundParams) {
    let _ = writeln!(out, "alpha = {}", fmt_num(g.alpha));
    let _ = writeln!(out, "beta = {}", fmt_num(g.beta));
    let _ = writeln!(out, "u = {}", fmt_num(g.u));
    let _ = writeln!(out, "tail_bound = {}", fmt_num(g.bound));
    let _ = writeln!(out, "tail_threshold = {}", fmt_num(g.threshold));
    let _ = writeln!(out, "tail_threshold_le_half = {}", g.threshold_ok());
}

fn montecarlo_csv(a: &MontecarloArgs, seed: u64) -> Result<String> {
    let c = a.dict.load(seed)?;
    let model: CoefficientModel = a.model.parse()?;
    let spec = RandomSupportSpec::new(a.fixed_a.clone(), a.nb, seed);
    let summary = parallel::randomized_recovery_experiment(&c, &spec, a.trials, model)?;
    let tail = probabilistic::TailEstimate::from_samples(
        summary.records.iter().map(|r| r.sigma_min).collect(),
        spec.na() + spec.nb > c.dim(),
    );
    let mut csv = Csv::new(&["trial", "seed", "na", "nb", "sigma_min", "bp_success", "omp_success", "p0_success"]);
    for r in &summary.records {
        csv.row([
            r.trial.to_string(),
            r.seed.to_string(),
            r.na.to_string(),
            r.nb.to_string(),
            fmt_num(r.sigma_min),
            r.bp_success.to_string(),
            r.omp_success.to_string(),
            r.p0_success.map_or(String::new(), |b| b.to_string()),
        ]);
    }
    let mut out = csv.as_str().to_string();
    let rate = |r: &probabilistic::RateEstimate| format!("{} [{}, {}] ({}/{})", fmt_num(r.rate), fmt_num(r.lower), fmt_num(r.upper), r.successes, r.trials);
    let _ = writeln!(out, "# summary");
    let _ = writeln!(out, "# model: {}", model.name());
    let _ = writeln!(out, "# bp_rate: {}", rate(&summary.bp));
    let _ = writeln!(out, "# omp_rate: {}", rate(&summary.omp));
    let _ = writeln!(out, "# p0_rate: {}", summary.p0.as_ref().map_or("not run (enumeration too large)".into(), rate));
    let _ = writeln!(out, "# below_deterministic: {} trials, {} failures", summary.below_deterministic, summary.below_deterministic_failures);
    let _ = writeln!(out, "# tail_prob_sigma_min_le_1/sqrt2: {}{}", fmt_num(tail.empirical_prob), if tail.degenerate { " (degenerate: na+nb > d)" } else { "" });
    for (i, count) in tail.histogram.counts.iter().enumerate() {
        let (lo, hi) = tail.histogram.bin_edges(i);
        let _ = writeln!(out, "# sigma_min_hist [{}, {}): {count}", fmt_num(lo), fmt_num(hi));
    }
    if spec.na() >= 1 && spec.nb >= 1 && c.atoms() > 2 {
        let r = probabilistic::check_theorem4_conditions(&c, spec.na(), spec.nb, a.s, a.gamma)?;
        let in_force = r.p0_in_force();
        let _ = writeln!(
            out,
            "# conditions: condA={} condB={} condL0={} condL1={} -> {}",
            r.cond_a.holds,
            r.cond_b.holds,
            r.cond_l0.holds,
            r.cond_l1.holds,
            if in_force { "bound in force" } else { "bound not in force" }
        );
        let _ = writeln!(out, "# N^-s: {}", fmt_num((c.atoms() as f64).powf(-a.s)));
    } else {
        let _ = writeln!(out, "# conditions: undefined (need na >= 1, nb >= 1 and N > 2) -> bound not in force");
    }
    Ok(out)
}

fn mub_report(a: &MubArgs) -> Result<String> {
    let c = build_mub_concat(a.p, a.split)?;
    let mut out = String::new();
    let nb = c.part_b().spectral_norm();
    let _ = writeln!(out, "p = {}", a.p);
    let _ = writeln!(out, "Na = {}", c.n_a());
    let _ = writeln!(out, "Nb = {}", c.n_b());
    let _ = writeln!(out, "muA = {}", fmt_num(c.mu_a()));
    let _ = writeln!(out, "muB = {}", fmt_num(c.mu_b()));
    let _ = writeln!(out, "mu = {}", fmt_num(c.mu()));
    let _ = writeln!(out, "norm_A_squared = {}", fmt_num(c.part_a().spectral_norm().powi(2)));
    let _ = writeln!(out, "norm_B_squared = {}", fmt_num(nb * nb));
    if a.report_scaling {
        let r = probabilistic::scaling_condition_report(&c);
        let _ = writeln!(out, "ratio,definition,value");
        for (name, def, v) in r.rows() {
            let _ = writeln!(out, "{name},{def},{}", fmt_num(v));
        }
    }
    Ok(out)
}

fn conditions_report(a: &ConditionsArgs, seed: u64) -> Result<String> {
    let c = a.dict.load(seed)?;
    let p = DictionaryParams::measure(&c);
    let r = probabilistic::theorem4_conditions(&p, a.na, a.nb, a.s, a.gamma)?;
    let mut out = String::new();
    let _ = writeln!(out, "d = {}", p.d);
    let _ = writeln!(out, "N = {}", p.atoms());
    for (k, v) in [("muA", p.mu_a), ("muB", p.mu_b), ("mu", p.mu), ("norm_A", p.norm_a), ("norm_B", p.norm_b), ("s", a.s), ("gamma", a.gamma)] {
        let _ = writeln!(out, "{k} = {}", fmt_num(v));
    }
    for (k, q) in [("condA", r.cond_a), ("condB", r.cond_b), ("condL0", r.cond_l0), ("condL1", r.cond_l1)] {
        let _ = writeln!(out, "{k} = {} (lhs {}, rhs {})", q.holds, fmt_num(q.lhs), fmt_num(q.rhs));
    }
    let _ = writeln!(out, "p0_statement = {}", if r.p0_in_force() { "in force" } else { "bound not in force" });
    let _ = writeln!(out, "bp_statement = {}", if r.bp_in_force() { "in force" } else { "bound not in force" });
    let g = probabilistic::tail_bound_params(&p, a.na, a.nb, a.s)?;
    tail_lines(&mut out, &g);
    let _ = writeln!(out, "matched_gamma = {}", fmt_num(probabilistic::matched_gamma(&p, a.na, a.nb, a.s)));
    if c.triple().is_two_onb() {
        let t = probabilistic::tropp_two_onb_thresholds(p.mu, p.atoms(), a.s)?;
        let _ = writeln!(out, "two_onb_random_p0 = {}", fmt_num(t.p0));
        let _ = writeln!(out, "two_onb_random_bp = {}", fmt_num(t.bp));
    }
    Ok(out)
}

/// Runs a parsed command and writes its output.
pub fn execute(cli: &Cli) -> Result<()> {
    let header = output::header(&resolved_command(cli), cli.seed);
    let pool = parallel::pool(cli.threads)?;
    let body = pool.install(|| -> Result<String> {
        Ok(match &cli.command {
            Command::Thresholds(a) => {
                let csv = thresholds_report(a)?;
                if let Some(path) = &cli.out {
                    output::emit(Some(path), &format!("{header}{csv}"))?;
                }
                thresholds_table(&csv)
            }
            Command::Figure1(a) => figure1_csv(a)?,
            Command::Recover(a) => recover_report(a, cli.seed)?,
            Command::Uncertainty(a) => uncertainty_csv(a, cli.seed)?,
            Command::Spark(a) => spark_report(a, cli.seed)?,
            Command::Montecarlo(a) => montecarlo_csv(a, cli.seed)?,
            Command::Mub(a) => mub_report(a)?,
            Command::Conditions(a) => conditions_report(a, cli.seed)?,
        })
    })?;
    match (&cli.command, &cli.out) {
        (Command::Thresholds(_), _) | (_, None) => output::emit(None, &format!("{header}{body}")),
        (_, Some(path)) => output::emit(Some(path), &format!("{header}{body}")),
    }
}

/// Entry point shared by the binary and the tests: merges the config file,
/// parses, runs, and returns the process exit status.
pub fn run(args: Vec<String>) -> i32 {
    let args = match config::config_path(&args) {
        Some(path) => match config::read_config(Path::new(&path)) {
            Ok(cfg) => config::merge_config(&args, &cfg),
            Err(e) => {
                eprintln!("error: {e}");
                return e.exit_code();
            }
        },
        None => args,
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

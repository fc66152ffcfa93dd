//! Command-line front end. Exit codes: 0 when every check passes, 1 when any
//! check fails, 2 on usage or configuration errors.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::functionals::{dirichlet_energy, mu_energy, mu_entropy, norm_sq_on, DirichletRoute, EnergyRoute};
use crate::holo::{norm_sq_coeff, HoloFn};
use crate::inequality_lab::{
    full_trial_suite, scan, scan_mu, sweep_meta, trial_suite, CheckSet, IneqReport, Provenance, SweepSpec, DEFAULT_C, DEFAULT_SEED,
    DEFAULT_SPECS, DEFAULT_SWEEP_MU, SUITE_GRID_DEGREE,
};
use crate::kernel_transform::{ht_norm, stein_bound_check, transform_apply, HtConfig, HtValue, TransformSpec};
use crate::measures::{log_moment_oracle, moment_oracle_dilated, total_mass, GridConfig, Parity, QuadGrid};
use crate::report::{Format, Report, REPORT_VERSION};
use crate::special_fn::MuParams;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Tolerance of the normalization check.
pub const MASS_TOL: f64 = 1e-8;
/// Relative tolerance of the moment check.
pub const MOMENT_TOL: f64 = 1e-8;
/// Tolerance of the reproducing-property check.
pub const REPRODUCING_TOL: f64 = 1e-6;
/// Relative tolerance of the energy route and identity checks.
pub const ENERGY_TOL: f64 = 1e-7;
pub const DEFAULT_T: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

#[derive(Debug, Parser)]
#[command(name = "mubarg", version, about = "Numerical checks in mu-deformed Segal-Bargmann spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Check the total masses of the even and odd measures.
    MeasuresVerify,
    /// Compare quadrature moments with the closed form.
    Moments,
    /// Check the reproducing property of the kernel transform.
    Transform,
    /// Hille-Tamarkin norm of the kernel transform.
    Htnorm,
    /// Stein-interpolated operator bound.
    Stein,
    /// Shannon entropies of trial functions.
    Entropy,
    /// Energies by both routes (and the Bargmann identity at mu = 0).
    Energy,
    /// Dirichlet-energy log-Sobolev inequalities (mu >= 0).
    Dirichlet,
    /// Energy-entropy inequalities from the Hille-Tamarkin bound.
    Lsi,
    /// Reverse log-Sobolev inequalities.
    Rlsi,
    /// Comparability of mixed and ordinary energies.
    Compare,
    /// All inequality checks over mu x (p, q, a) x c.
    Sweep,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::MeasuresVerify => "measures-verify",
            Command::Moments => "moments",
            Command::Transform => "transform",
            Command::Htnorm => "htnorm",
            Command::Stein => "stein",
            Command::Entropy => "entropy",
            Command::Energy => "energy",
            Command::Dirichlet => "dirichlet",
            Command::Lsi => "lsi",
            Command::Rlsi => "rlsi",
            Command::Compare => "compare",
            Command::Sweep => "sweep",
        }
    }
}

/// Flags; lists are comma separated. Flags override the config file.
#[derive(Debug, Clone, Default, Args)]
struct Opts {
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, global = true)]
    lambda: Option<String>,
    #[arg(long, global = true)]
    degree: Option<String>,
    #[arg(long, global = true)]
    p: Option<String>,
    #[arg(long, global = true)]
    q: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, global = true)]
    c: Option<String>,
    /// Interpolation parameters for `stein`.
    #[arg(long, global = true)]
    t: Option<String>,
    #[arg(long, global = true)]
    tol: Option<String>,
    #[arg(long = "radial-nodes", global = true)]
    radial_nodes: Option<String>,
    #[arg(long = "angular-nodes", global = true)]
    angular_nodes: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Output path; the extension is replaced by .json / .csv.
    #[arg(long, global = true)]
    out: Option<String>,
    /// json, csv or both.
    #[arg(long, global = true)]
    format: Option<String>,
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// even, odd or both.
    #[arg(long, global = true)]
    parity: Option<String>,
    /// Trial function: psiN, psiN+psiM, a suite id (e.g. rand-even-03, exp-odd-c1),
    /// a .json coefficient file, or `suite`.
    #[arg(long, global = true)]
    trial: Option<String>,
}

const KEYS: [&str; 17] = [
    "mu",
    "lambda",
    "degree",
    "p",
    "q",
    "a",
    "c",
    "t",
    "tol",
    "radial-nodes",
    "angular-nodes",
    "seed",
    "out",
    "format",
    "parity",
    "trial",
    "config",
];

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mu: Vec<f64>,
    pub lambda: f64,
    pub degree: Option<usize>,
    pub tol: f64,
    pub radial_nodes: Option<usize>,
    pub angular_nodes: Option<usize>,
    pub specs: Vec<(f64, f64, f64)>,
    pub c: Vec<f64>,
    pub t: Vec<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub parities: Vec<Parity>,
    pub trial: Option<String>,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("config line {}: expected key=value, got '{line}'", n + 1)))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) || key == "config" {
            return Err(Error::Config(format!("config line {}: unknown key '{key}'", n + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Config(format!("--{key}: cannot parse '{s}'")))
        })
        .collect()
}

fn parse_one<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("--{key}: cannot parse '{value}'")))
}

impl RunConfig {
    fn resolve(command: Command, opts: &Opts, env_seed: Option<String>) -> Result<Self> {
        let mut values = match &opts.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        if let Some(seed) = env_seed {
            values.insert("seed".into(), seed);
        }
        let flags = [
            ("mu", &opts.mu),
            ("lambda", &opts.lambda),
            ("degree", &opts.degree),
            ("p", &opts.p),
            ("q", &opts.q),
            ("a", &opts.a),
            ("c", &opts.c),
            ("t", &opts.t),
            ("tol", &opts.tol),
            ("radial-nodes", &opts.radial_nodes),
            ("angular-nodes", &opts.angular_nodes),
            ("seed", &opts.seed),
            ("out", &opts.out),
            ("format", &opts.format),
            ("parity", &opts.parity),
            ("trial", &opts.trial),
        ];
        for (key, flag) in flags {
            if let Some(v) = flag {
                values.insert(key.to_string(), v.clone());
            }
        }
        let get = |key: &str| values.get(key).map(String::as_str);

        let mu = match get("mu") {
            Some(v) => parse_list::<f64>("mu", v)?,
            None if command == Command::Sweep => DEFAULT_SWEEP_MU.to_vec(),
            None => vec![0.5],
        };
        for &m in &mu {
            MuParams::standard(m).map_err(|e| Error::Config(format!("--mu {m}: {e}")))?;
        }
        let lambda = get("lambda").map(|v| parse_one::<f64>("lambda", v)).transpose()?.unwrap_or(1.0);
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Config(format!("--lambda must be positive, got {lambda}")));
        }
        let degree = get("degree").map(|v| parse_one::<usize>("degree", v)).transpose()?;
        let tol = get("tol").map(|v| parse_one::<f64>("tol", v)).transpose()?.unwrap_or(1e-10);
        if !(tol > 0.0 && tol <= 1e-4) {
            return Err(Error::Config(format!("--tol must lie in (0, 1e-4], got {tol}")));
        }
        let radial_nodes = get("radial-nodes").map(|v| parse_one("radial-nodes", v)).transpose()?;
        let angular_nodes = get("angular-nodes").map(|v| parse_one("angular-nodes", v)).transpose()?;
        if let Some(m) = angular_nodes {
            if m < 8 || m % 2 == 1 {
                return Err(Error::Config(format!("--angular-nodes must be even and >= 8, got {m}")));
            }
        }

        let specs = match (get("p"), get("q"), get("a")) {
            (None, None, None) => match command {
                Command::Htnorm | Command::Stein => vec![(4.0, 2.0, 1.2)],
                Command::Dirichlet => vec![DEFAULT_SPECS[0]],
                _ => DEFAULT_SPECS.to_vec(),
            },
            (p, q, a) => {
                let p = parse_list::<f64>("p", p.unwrap_or("2"))?;
                let q = parse_list::<f64>("q", q.unwrap_or("2"))?;
                let a = parse_list::<f64>("a", a.unwrap_or("0"))?;
                let n = p.len().max(q.len()).max(a.len());
                let pick = |v: &Vec<f64>, key: &str, i: usize| -> Result<f64> {
                    match v.len() {
                        1 => Ok(v[0]),
                        len if len == n => Ok(v[i]),
                        _ => Err(Error::Config(format!("--{key} needs 1 or {n} values"))),
                    }
                };
                let mut specs = Vec::with_capacity(n);
                for i in 0..n {
                    let tuple = (pick(&p, "p", i)?, pick(&q, "q", i)?, pick(&a, "a", i)?);
                    TransformSpec::new(Parity::Even, tuple.0, tuple.1, tuple.2, 0.0)
                        .map_err(|e| Error::Config(format!("(p, q, a) = {tuple:?}: {e}")))?;
                    specs.push(tuple);
                }
                specs
            }
        };
        let c = match get("c") {
            Some(v) => parse_list::<f64>("c", v)?,
            None => DEFAULT_C.to_vec(),
        };
        if let Some(bad) = c.iter().find(|&&c| !(c.is_finite() && c > 1.0)) {
            return Err(Error::Config(format!("--c values must exceed 1, got {bad}")));
        }
        let t = match get("t") {
            Some(v) => parse_list::<f64>("t", v)?,
            None => DEFAULT_T.to_vec(),
        };
        if let Some(bad) = t.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(Error::Config(format!("--t values must lie in [0, 1], got {bad}")));
        }
        let seed = get("seed").map(|v| parse_one::<u64>("seed", v)).transpose()?.unwrap_or(DEFAULT_SEED);
        let format: Format = get("format").unwrap_or("json").parse()?;
        let parities = match get("parity").unwrap_or(if command == Command::Htnorm { "even" } else { "both" }) {
            "even" => vec![Parity::Even],
            "odd" => vec![Parity::Odd],
            "both" => Parity::BOTH.to_vec(),
            other => return Err(Error::Config(format!("--parity must be even, odd or both, got '{other}'"))),
        };
        let trial = get("trial").filter(|s| *s != "suite").map(str::to_string);
        if command == Command::Dirichlet {
            if let Some(m) = mu.iter().find(|&&m| m < 0.0) {
                return Err(Error::Config(format!(
                    "Dirichlet-energy inequalities are only checked for mu >= 0, got {m}"
                )));
            }
        }
        Ok(RunConfig {
            mu,
            lambda,
            degree,
            tol,
            radial_nodes,
            angular_nodes,
            specs,
            c,
            t,
            seed,
            out: get("out").map(PathBuf::from),
            format,
            parities,
            trial,
        })
    }

    fn grid_config(&self, degree: usize) -> GridConfig {
        GridConfig {
            degree: self.degree.unwrap_or(0).max(degree),
            tol: self.tol,
            radial_nodes: self.radial_nodes,
            angular_nodes: self.angular_nodes,
            r_max: None,
        }
    }

    fn grid(&self, params: &MuParams, degree: usize) -> Result<QuadGrid> {
        QuadGrid::build(params, &self.grid_config(degree))
    }
}

/// Resolves a trial name: `psiN`, sums `psiN+psiM+…`, a suite id, or a
/// `.json` file of `[re, im]` coefficient pairs.
pub fn parse_trial(name: &str, mu: f64, seed: u64) -> Result<HoloFn> {
    if name.ends_with(".json") {
        let text = std::fs::read_to_string(name)
            .map_err(|e| Error::Config(format!("cannot read trial file {name}: {e}")))?;
        return HoloFn::from_json(&text).map_err(|e| Error::Config(format!("trial file {name}: {e}")));
    }
    let psi_sum = name.split('+').map(|part| {
        part.trim()
            .strip_prefix("psi")
            .and_then(|n| n.parse::<usize>().ok())
    });
    if let Some(indices) = psi_sum.collect::<Option<Vec<usize>>>() {
        let mut f = HoloFn::zero();
        for n in indices {
            f = f.add(&HoloFn::psi(n, mu)?);
        }
        return Ok(f);
    }
    for parity in Parity::BOTH {
        if let Some(t) = trial_suite(mu, parity, seed)?.into_iter().find(|t| t.id == name) {
            return Ok(t.f);
        }
    }
    if let Some(t) = full_trial_suite(mu, seed)?.into_iter().find(|t| t.id == name) {
        return Ok(t.f);
    }
    Err(Error::Config(format!(
        "unknown trial '{name}'; use psiN, psiN+psiM or a suite id such as rand-even-03"
    )))
}

/// Named trials for a command: the requested one, or the parity suites.
fn trials(cfg: &RunConfig, mu: f64, default: &[&str]) -> Result<Vec<(String, HoloFn)>> {
    match &cfg.trial {
        Some(name) => Ok(vec![(name.clone(), parse_trial(name, mu, cfg.seed)?)]),
        None => default
            .iter()
            .map(|name| Ok((name.to_string(), parse_trial(name, mu, cfg.seed)?)))
            .collect(),
    }
}

fn suite_trials(cfg: &RunConfig, mu: f64) -> Result<Vec<(String, HoloFn)>> {
    if let Some(name) = &cfg.trial {
        return Ok(vec![(name.clone(), parse_trial(name, mu, cfg.seed)?)]);
    }
    let mut all = Vec::new();
    for parity in Parity::BOTH {
        all.extend(trial_suite(mu, parity, cfg.seed)?.into_iter().map(|t| (t.id, t.f)));
    }
    all.extend(full_trial_suite(mu, cfg.seed)?.into_iter().map(|t| (t.id, t.f)));
    Ok(all)
}

fn max_degree(trials: &[(String, HoloFn)]) -> usize {
    trials.iter().map(|(_, f)| f.effective_degree()).max().unwrap_or(0)
}

struct Run<'a> {
    cfg: &'a RunConfig,
    report: Report,
}

impl Run<'_> {
    fn push(&mut self, key: String, report: IneqReport) {
        self.report.push(key, report);
    }

    /// Records an error as a failed cell instead of aborting the run.
    fn push_result(&mut self, key: String, name: &str, result: Result<IneqReport>) {
        let report = result.unwrap_or_else(|e| IneqReport::failed(name, e.to_string()));
        self.push(key, report);
    }
}

fn measures_verify(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    for &mu in &cfg.mu {
        let params = MuParams::new(mu, cfg.lambda, 0.0)?;
        for parity in Parity::BOTH {
            // the odd measure is not normalized; its mass is the zeroth odd moment
            let result = moment_oracle_dilated(parity, 0, mu, cfg.lambda).and_then(|want| {
                let mass = total_mass(parity, &params)?;
                println!("mu = {mu}, {parity}: total_mass = {mass:.12}");
                Ok(IneqReport::evaluate(format!("mass-{parity}"), (mass - want).abs(), MASS_TOL * want)
                    .with_input("total_mass", mass)
                    .with_input("expected", want)
                    .with_params(&params))
            });
            run.push_result(format!("mu={mu}/mass-{parity}"), "mass", result);
        }
    }
    Ok(())
}

fn moments(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let top = cfg.degree.unwrap_or(12);
    for &mu in &cfg.mu {
        let params = MuParams::new(mu, cfg.lambda, 0.0)?;
        let grid = cfg.grid(&params, top)?;
        for &parity in &cfg.parities {
            for k in 0..=top {
                let result = log_moment_oracle(parity, k, mu).map(|log_unit| {
                    // compared in logs: high moments exceed the floating-point range
                    let log_oracle = log_unit - k as f64 * cfg.lambda.ln();
                    let log_got = grid.log_radial_moment(parity, 0.0, k);
                    IneqReport::evaluate(
                        format!("moment-{parity}"),
                        (log_got - log_oracle).exp_m1().abs(),
                        MOMENT_TOL,
                    )
                    .with_input("k", k)
                    .with_input("log_quadrature", log_got)
                    .with_input("log_oracle", log_oracle)
                    .with_params(&params)
                });
                run.push_result(format!("mu={mu}/moment-{parity}/k={k:02}"), "moment", result);
            }
        }
    }
    Ok(())
}

/// Evaluation points with `|w| ≤ 2`, seeded.
pub fn sample_points(seed: u64, count: usize, radius: f64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

fn transform(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let defaults: Vec<String> = (0..=8).map(|k| format!("psi{k}")).collect();
    let defaults: Vec<&str> = defaults.iter().map(String::as_str).collect();
    for &mu in &cfg.mu {
        let params = MuParams::new(mu, cfg.lambda, 0.0)?;
        let list = trials(cfg, mu, &defaults)?;
        let grid = cfg.grid(&params, max_degree(&list))?;
        let points = sample_points(cfg.seed, 20, 2.0);
        for (id, f) in &list {
            let Some(parity) = f.pure_parity() else {
                return Err(Error::Config(format!("transform trial '{id}' must be parity-pure")));
            };
            let mut worst = 0.0f64;
            let mut error = None;
            for &w in &points {
                match transform_apply(f, w, parity, &params, &grid) {
                    Ok(v) => worst = worst.max((v - f.evaluate(w)).norm()),
                    Err(e) => error = Some(e),
                }
            }
            let result = match error {
                Some(e) => Err(e),
                None => Ok(IneqReport::evaluate(format!("reproducing-{parity}"), worst, REPRODUCING_TOL)
                    .with_input("trial", id.as_str())
                    .with_input("points", points.len())
                    .with_params(&params)),
            };
            println!("mu = {mu}, {id}: max |K f(w) - f(w)| = {worst:.3e}");
            run.push_result(format!("mu={mu}/reproducing/{id}"), "reproducing", result);
        }
    }
    Ok(())
}

fn htnorm(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let config = HtConfig {
        panel_nodes: cfg.radial_nodes.unwrap_or(HtConfig::default().panel_nodes),
        ..HtConfig::default()
    };
    for &mu in &cfg.mu {
        for &(p, q, a) in &cfg.specs {
            for &parity in &cfg.parities {
                let spec = TransformSpec::new(parity, p, q, a, mu)?;
                let key = format!("mu={mu}/p={p},q={q},a={a}/{parity}/ht");
                let result = ht_norm(&spec, &config).map(|ht| match ht.value {
                    HtValue::Finite { value } => {
                        println!("mu = {mu}, (p, q, a) = ({p}, {q}, {a}), {parity}: ht_norm = {value:.10} (refinement gap {:.2e})", ht.refinement_gap);
                        IneqReport::evaluate("ht-stability", ht.refinement_gap, crate::inequality_lab::HT_STABILITY_TOL)
                            .with_constant("A", value, Provenance::HtBound)
                            .with_spec(&spec)
                    }
                    HtValue::Divergent { partial_integrals, .. } => {
                        println!("mu = {mu}, (p, q, a) = ({p}, {q}, {a}), {parity}: divergent (partial integrals {partial_integrals:?})");
                        let partial: Vec<serde_json::Value> =
                            partial_integrals.iter().map(|&x| crate::report::float_value(x)).collect();
                        IneqReport::marker("ht-divergent", "divergent")
                            .with_input("partial_integrals", partial)
                            .with_spec(&spec)
                    }
                });
                run.push_result(key, "ht", result);
            }
        }
    }
    Ok(())
}

fn stein(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    for &mu in &cfg.mu {
        let list = trials(cfg, mu, &["psi0+psi2"])?;
        let params = MuParams::standard(mu)?;
        let grid = cfg.grid(&params, max_degree(&list).max(8))?;
        for &(p, q, a) in &cfg.specs {
            for (id, f) in &list {
                let Some(parity) = f.pure_parity() else {
                    return Err(Error::Config(format!("stein trial '{id}' must be parity-pure")));
                };
                let spec = TransformSpec::new(parity, p, q, a, mu)?;
                let key = format!("mu={mu}/p={p},q={q},a={a}/stein/{id}");
                let ht = match ht_norm(&spec, &HtConfig::default()).map(|r| r.value) {
                    Ok(HtValue::Finite { value }) => value,
                    Ok(HtValue::Divergent { .. }) => {
                        run.push(key, IneqReport::marker("stein", "divergent").with_spec(&spec));
                        continue;
                    }
                    Err(e) => {
                        run.push(key, IneqReport::failed("stein", e.to_string()));
                        continue;
                    }
                };
                match stein_bound_check(f, &spec, &cfg.t, ht, &grid) {
                    Ok(reports) => {
                        for r in reports {
                            let t = r.inputs.get("t").and_then(|v| v.as_f64()).unwrap_or(f64::NAN);
                            println!("mu = {mu}, {id}, t = {t}: {:.10} <= {:.10}", r.lhs, r.rhs);
                            run.push(format!("{key}/t={t}"), r.with_input("trial", id.as_str()));
                        }
                    }
                    Err(e) => run.push(key, IneqReport::failed("stein", e.to_string())),
                }
            }
        }
    }
    Ok(())
}

fn entropy(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    for &mu in &cfg.mu {
        let params = MuParams::new(mu, cfg.lambda, 0.0)?;
        let list = suite_trials(cfg, mu)?;
        let grid = cfg.grid(&params, max_degree(&list).max(SUITE_GRID_DEGREE))?;
        for (id, f) in &list {
            let result = entropy_lower_bound(f, &params, &grid).and_then(|bound| {
                let s = mu_entropy(f, &params, &grid)?;
                println!("mu = {mu}, {id}: S = {:.12} (even {:.6e}, odd {:.6e})", s.total, s.even_part, s.odd_part);
                Ok(IneqReport::evaluate("entropy-jensen", bound, s.total)
                    .with_input("even_part", s.even_part)
                    .with_input("odd_part", s.odd_part)
                    .with_input("trial", id.as_str())
                    .with_params(&params))
            });
            run.push_result(format!("mu={mu}/entropy/{id}"), "entropy", result);
        }
    }
    Ok(())
}

fn energy(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    for &mu in &cfg.mu {
        let params = MuParams::new(mu, cfg.lambda, 0.0)?;
        let list = suite_trials(cfg, mu)?;
        let grid = cfg.grid(&params, max_degree(&list).max(SUITE_GRID_DEGREE))?;
        for (id, f) in &list {
            let routes = mu_energy(f, &params, &grid, EnergyRoute::Quadrature)
                .and_then(|q| Ok((q, mu_energy(f, &params, &grid, EnergyRoute::Coefficient)?)));
            let result = routes.map(|(quad, coeff)| {
                println!("mu = {mu}, {id}: E = {:.12}", quad.total);
                IneqReport::evaluate(
                    "energy-routes",
                    (quad.total - coeff.total).abs(),
                    ENERGY_TOL * (1.0 + coeff.total),
                )
                .with_input("quadrature", quad.total)
                .with_input("coefficient", coeff.total)
                .with_input("trial", id.as_str())
                .with_params(&params)
            });
            run.push_result(format!("mu={mu}/energy/{id}"), "energy", result);
            if mu == 0.0 && cfg.lambda == 1.0 {
                let result = bargmann_identity(f, &params, &grid).map(|r| r.with_input("trial", id.as_str()));
                run.push_result(format!("mu={mu}/bargmann/{id}"), "bargmann-identity", result);
            }
        }
    }
    Ok(())
}

/// Jensen's bound `S ≥ −Σ_par ‖f_par‖² log ν_par(ℂ)`; zero when `f` is even.
pub fn entropy_lower_bound(f: &HoloFn, params: &MuParams, grid: &QuadGrid) -> Result<f64> {
    let (fe, fo) = f.parity_split();
    let mut bound = 0.0;
    for (g, parity) in [(fe, Parity::Even), (fo, Parity::Odd)] {
        if !g.is_zero() {
            let mass = moment_oracle_dilated(parity, 0, params.mu(), params.lambda())?;
            bound -= norm_sq_on(&g, parity, params, grid)? * mass.ln();
        }
    }
    Ok(bound)
}

/// `E_0(f) = ‖f‖² + ‖D_0 f‖²` at `μ = 0`.
pub fn bargmann_identity(f: &HoloFn, params: &MuParams, grid: &QuadGrid) -> Result<IneqReport> {
    let e = mu_energy(f, params, grid, EnergyRoute::Quadrature)?.total;
    let (fe, fo) = f.parity_split();
    let norm = norm_sq_on(&fe, Parity::Even, params, grid)? + norm_sq_on(&fo, Parity::Odd, params, grid)?;
    let d = dirichlet_energy(f, 0.0, DirichletRoute::Direct)?;
    Ok(IneqReport::evaluate("bargmann-identity", (e - norm - d).abs(), ENERGY_TOL * (1.0 + e))
        .with_input("energy", e)
        .with_input("norm_sq", norm)
        .with_input("dirichlet_energy", d)
        .with_input("norm_sq_coefficient", norm_sq_coeff(f, 0.0)?)
        .with_params(params))
}

fn sweep_run(run: &mut Run, checks: CheckSet) -> Result<()> {
    let cfg = run.cfg;
    let sweep = SweepSpec {
        mu: cfg.mu.clone(),
        specs: cfg.specs.clone(),
        c: cfg.c.clone(),
        seed: cfg.seed,
        grid: cfg.grid_config(SUITE_GRID_DEGREE),
        checks,
        ..SweepSpec::default()
    };
    run.report.meta.extend(sweep_meta(&sweep)?);
    match &cfg.trial {
        None => run.report.cells.extend(scan(&sweep)?.cells),
        Some(name) => {
            // basis trials depend on mu, so each mu gets its own instance
            for &mu in &cfg.mu {
                let one = SweepSpec {
                    mu: vec![mu],
                    trials: Some(vec![(name.clone(), parse_trial(name, mu, cfg.seed)?)]),
                    ..sweep.clone()
                };
                run.report.cells.extend(scan_mu(&one, mu));
            }
        }
    }
    for cell in &run.report.cells {
        let r = &cell.report;
        if r.lhs.is_finite() {
            println!("{} {} {:.10e} <= {:.10e}", if r.pass { "PASS" } else { "FAIL" }, cell.key, r.lhs, r.rhs);
        } else {
            println!("{} {} {}", if r.pass { "PASS" } else { "FAIL" }, cell.key, r.note.as_deref().unwrap_or(""));
        }
    }
    Ok(())
}

fn dispatch(command: Command, run: &mut Run) -> Result<()> {
    let only = |f: fn(&mut CheckSet)| {
        let mut set = CheckSet::NONE;
        f(&mut set);
        set
    };
    match command {
        Command::MeasuresVerify => measures_verify(run),
        Command::Moments => moments(run),
        Command::Transform => transform(run),
        Command::Htnorm => htnorm(run),
        Command::Stein => stein(run),
        Command::Entropy => entropy(run),
        Command::Energy => energy(run),
        Command::Dirichlet => sweep_run(run, only(|s| s.dirichlet = true)),
        Command::Lsi => sweep_run(run, only(|s| s.lsi = true)),
        Command::Rlsi => sweep_run(run, only(|s| s.rlsi = true)),
        Command::Compare => sweep_run(run, only(|s| s.comparability = true)),
        Command::Sweep => sweep_run(run, CheckSet::ALL),
    }
}

/// Runs a command line (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match RunConfig::resolve(cli.command, &cli.opts, std::env::var("MUBARG_SEED").ok()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("mubarg: {e}");
            return EXIT_USAGE;
        }
    };
    let mut run = Run {
        cfg: &cfg,
        report: Report::new(),
    };
    let meta = [
        ("command", serde_json::Value::from(cli.command.name())),
        ("version", serde_json::Value::from(REPORT_VERSION)),
        ("seed", serde_json::Value::from(cfg.seed)),
    ];
    for (k, v) in meta {
        run.report.meta.insert(k.to_string(), v);
    }
    if let Err(e) = dispatch(cli.command, &mut run) {
        eprintln!("mubarg: {e}");
        return match e {
            Error::Config(_) | Error::Domain(_) | Error::Precondition(_) => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
    }
    let report = run.report;
    if let Some(out) = &cfg.out {
        match report.emit(cfg.format, Path::new(out)) {
            Ok(paths) => {
                for p in paths {
                    eprintln!("wrote {}", p.display());
                }
            }
            Err(e) => {
                eprintln!("mubarg: cannot write report: {e}");
                return EXIT_USAGE;
            }
        }
    }
    let failures: Vec<_> = report.failures().collect();
    if failures.is_empty() {
        println!("{} checks passed", report.cells.len());
        EXIT_OK
    } else {
        for cell in &failures {
            eprintln!(
                "FAILED {}: lhs {:e}, rhs {:e}{}",
                cell.key,
                cell.report.lhs,
                cell.report.rhs,
                cell.report.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
            );
        }
        eprintln!("{} of {} checks failed", failures.len(), report.cells.len());
        EXIT_FAIL
    }
}

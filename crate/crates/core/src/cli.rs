//! Command-line runner.
//!
//! Every run emits one document: JSON with top-level keys
//! `{command, params, results, violations, seed, version}`, or CSV with a
//! fixed header per command. Exit code 0 means every check passed, 1 means a
//! violation was found (and serialized), 2 means a usage error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::coeffs::{a_coeffs, p_from_c, q, Lambda};
use crate::error::{Error, Result};
use crate::inequalities::{
    lambda0, lambda0_poly, ps_functional, ps_params, ps_threshold, ps_threshold_poly, Fpoly,
};
use crate::proofchain::{
    chain, compute_l, compute_r, identity_residual, leverenz_form, r_expansion_terms, witness,
};
use crate::schwarz::{is_admissible, sample, CoeffTuple};
use crate::search::{maximize_a5, maximize_ps};
use crate::tolerance::{close, F_AT_ONE, F_GRID_SLACK, LEVERENZ_FLOOR, RELATIVE, SEARCH_OVERSHOOT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_LAMBDAS: [f64; 5] = [0.41, 0.5, 0.7, 0.9, 1.0];
const RANDOM_Z_LISTS: usize = 10;
const RANDOM_Z_RADIUS: f64 = 10.0;
const F_GRID_POINTS: usize = 10_000;
/// Violations kept per run; the count in `results` is always complete.
const MAX_REPORTED_VIOLATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Verify,
    Lambda0,
    Sweep,
    Search,
    PsCheck,
    Chain,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Lambda0 => "lambda0",
            Command::Sweep => "sweep",
            Command::Search => "search",
            Command::PsCheck => "ps-check",
            Command::Chain => "chain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "a5bound",
    version,
    about = "Fifth-coefficient bound verification and extremal search"
)]
pub struct Args {
    pub command: Command,
    /// A value, a grid `start:stop:count`, or a comma list.
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    pub starts: u64,
    #[arg(long, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub no_timestamp: bool,
    /// ps-check: explicit μ (requires --nu); overrides the λ-derived pair.
    #[arg(long, requires = "nu", allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, requires = "mu", allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// chain: a single tuple as eight reals `re1,im1,…,re4,im4`.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
}

/// Validated settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub lambdas: Vec<Lambda>,
    pub samples: usize,
    pub starts: usize,
    pub budget: usize,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub timestamp: bool,
    pub mu_nu: Option<(f64, f64)>,
    pub coeffs: Option<CoeffTuple>,
}

/// Parses `x`, `start:stop:count` or `x,y,…` into λ values.
pub fn parse_lambda_spec(spec: &str) -> Result<Vec<Lambda>> {
    let bad = || Error::GridSpec(spec.to_string());
    let values: Vec<f64> = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if count == 0 {
            return Err(bad());
        }
        if count == 1 {
            vec![start]
        } else {
            (0..count)
                .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                .collect()
        }
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    values.into_iter().map(Lambda::new).collect()
}

fn parse_coeffs(spec: &str) -> Result<CoeffTuple> {
    let bad = || Error::GridSpec(spec.to_string());
    let v: Vec<f64> = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let arr: [f64; 8] = v.try_into().map_err(|_| bad())?;
    Ok(CoeffTuple::from_reals(&arr))
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<Self> {
        let lambdas = match &args.lambda {
            Some(spec) => parse_lambda_spec(spec)?,
            None => match args.command {
                Command::Lambda0
                | Command::Verify
                | Command::Chain
                | Command::Search
                | Command::PsCheck => DEFAULT_LAMBDAS
                    .iter()
                    .map(|&l| Lambda::new(l))
                    .collect::<Result<_>>()?,
                Command::Sweep => parse_lambda_spec("0.45:1.0:12")?,
            },
        };
        Ok(Self {
            command: args.command,
            lambdas,
            samples: args.samples as usize,
            starts: args.starts as usize,
            budget: args.budget as usize,
            seed: args.seed,
            format: args.format,
            out: args.out,
            timestamp: !args.no_timestamp,
            mu_nu: args.mu.zip(args.nu),
            coeffs: args.coeffs.as_deref().map(parse_coeffs).transpose()?,
        })
    }
}

/// Seventeen significant digits.
pub fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// serde_json formatter writing every float with seventeen significant digits.
struct RealFormatter;

impl serde_json::ser::Formatter for RealFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_real(value).as_bytes())
    }
}

pub fn to_json_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, RealFormatter);
    serde::Serialize::serialize(value, &mut ser).expect("serializing a json value cannot fail");
    String::from_utf8(buf).expect("json is utf-8")
}

fn coeffs_json(c: &CoeffTuple) -> Value {
    json!(c.to_reals())
}

/// A failed check, with everything needed to replay it.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub suite: &'static str,
    pub lambda: Option<f64>,
    pub coeffs: Option<CoeffTuple>,
    pub sample_index: Option<usize>,
    pub observed: f64,
    pub expected: f64,
    pub seed: u64,
}

impl Violation {
    fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "lambda": self.lambda,
            "coeffs": self.coeffs.as_ref().map(coeffs_json),
            "sample_index": self.sample_index,
            "observed": self.observed,
            "expected": self.expected,
            "seed": self.seed,
        })
    }
}

/// The outcome of a run before serialization.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: Command,
    pub seed: u64,
    pub params: Value,
    pub results: Vec<Value>,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub violations: Vec<Violation>,
    pub violation_count: usize,
}

impl Report {
    fn new(config: &RunConfig, csv_header: Vec<&'static str>) -> Self {
        let mut params = Map::new();
        params.insert(
            "lambda".into(),
            json!(config.lambdas.iter().map(|l| l.value()).collect::<Vec<_>>()),
        );
        params.insert("samples".into(), json!(config.samples));
        params.insert("starts".into(), json!(config.starts));
        params.insert("budget".into(), json!(config.budget));
        params.insert("seed".into(), json!(config.seed));
        if let Some((mu, nu)) = config.mu_nu {
            params.insert("mu".into(), json!(mu));
            params.insert("nu".into(), json!(nu));
        }
        if let Some(c) = &config.coeffs {
            params.insert("coeffs".into(), coeffs_json(c));
        }
        if config.timestamp {
            let secs = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            params.insert("timestamp".into(), json!(secs));
        }
        Self {
            command: config.command,
            seed: config.seed,
            params: Value::Object(params),
            results: Vec::new(),
            csv_header,
            csv_rows: Vec::new(),
            violations: Vec::new(),
            violation_count: 0,
        }
    }

    fn violate(&mut self, v: Violation) {
        self.violation_count += 1;
        if self.violations.len() < MAX_REPORTED_VIOLATIONS {
            self.violations.push(v);
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command.name(),
            "params": self.params,
            "results": self.results,
            "violations": self.violations.iter().map(Violation::to_json).collect::<Vec<_>>(),
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.csv_header).expect("in-memory csv");
        for row in &self.csv_rows {
            w.write_record(row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = to_json_string(&self.to_json());
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }
}

fn in_theorem_range(lambda: Lambda) -> bool {
    lambda.value() >= lambda0()
}

fn cmd_lambda0(config: &RunConfig) -> Report {
    let mut r = Report::new(config, vec!["name", "value", "residual"]);
    let l0 = lambda0();
    let th = ps_threshold();
    for (name, value, residual) in [
        ("lambda0", l0, lambda0_poly(l0)),
        ("ps_threshold", th, ps_threshold_poly(th)),
    ] {
        r.results
            .push(json!({"name": name, "value": value, "residual": residual}));
        r.csv_rows
            .push(vec![name.to_string(), fmt_real(value), fmt_real(residual)]);
        if residual.abs() > 1e-14 {
            r.violate(Violation {
                suite: name,
                lambda: None,
                coeffs: None,
                sample_index: None,
                observed: residual.abs(),
                expected: 1e-14,
                seed: config.seed,
            });
        }
    }
    r
}

/// Running tally of one verification suite at one λ.
struct Suite {
    name: &'static str,
    lambda: f64,
    checked: usize,
    failed: usize,
    worst: f64,
    skipped: Option<&'static str>,
}

impl Suite {
    fn new(name: &'static str, lambda: Lambda) -> Self {
        Self {
            name,
            lambda: lambda.value(),
            checked: 0,
            failed: 0,
            worst: f64::NEG_INFINITY,
            skipped: None,
        }
    }

    fn skipped(name: &'static str, lambda: Lambda, why: &'static str) -> Self {
        Self {
            skipped: Some(why),
            ..Self::new(name, lambda)
        }
    }

    /// Records `observed` against `expected`; `ok` decides pass/fail.
    #[allow(clippy::too_many_arguments)]
    fn check(
        &mut self,
        report: &mut Report,
        ok: bool,
        observed: f64,
        expected: f64,
        coeffs: Option<&CoeffTuple>,
        index: Option<usize>,
        seed: u64,
    ) {
        self.checked += 1;
        if observed > self.worst || self.worst.is_nan() {
            self.worst = observed;
        }
        if !ok {
            self.failed += 1;
            report.violate(Violation {
                suite: self.name,
                lambda: Some(self.lambda),
                coeffs: coeffs.copied(),
                sample_index: index,
                observed,
                expected,
                seed,
            });
        }
    }

    fn finish(self, report: &mut Report) {
        let passed = self.failed == 0;
        let worst = if self.checked == 0 {
            None
        } else {
            Some(self.worst)
        };
        report.results.push(json!({
            "suite": self.name,
            "lambda": self.lambda,
            "checked": self.checked,
            "failed": self.failed,
            "passed": passed,
            "worst": worst,
            "skipped": self.skipped,
        }));
        report.csv_rows.push(vec![
            self.name.to_string(),
            fmt_real(self.lambda),
            self.checked.to_string(),
            self.failed.to_string(),
            passed.to_string(),
            worst.map(fmt_real).unwrap_or_default(),
            self.skipped.unwrap_or("").to_string(),
        ]);
    }
}

fn random_z_list<R: Rng>(rng: &mut R) -> [num_complex::Complex64; 4] {
    let mut z = [num_complex::Complex64::default(); 4];
    for v in z.iter_mut() {
        let r = RANDOM_Z_RADIUS * rng.gen::<f64>().sqrt();
        let t = rng.gen::<f64>() * std::f64::consts::TAU;
        *v = num_complex::Complex64::from_polar(r, t);
    }
    z
}

fn cmd_verify(config: &RunConfig) -> Result<Report> {
    let mut report = Report::new(
        config,
        vec![
            "suite", "lambda", "checked", "failed", "passed", "worst", "skipped",
        ],
    );
    let seed = config.seed;
    let samples = sample(seed, config.samples, true)?;
    let mut zrng = ChaCha8Rng::seed_from_u64(seed);
    zrng.set_stream(1);

    let mut admissible = Suite::new("admissible", Lambda::new(1.0)?);
    for (i, c) in samples.iter().enumerate() {
        let ok = is_admissible(c);
        admissible.check(
            &mut report,
            ok,
            if ok { 0.0 } else { 1.0 },
            0.0,
            Some(c),
            Some(i),
            seed,
        );
    }
    admissible.finish(&mut report);

    for &lambda in &config.lambdas {
        let in_range = in_theorem_range(lambda);
        let mut identity = Suite::new("identity", lambda);
        let mut lev_witness = Suite::new("leverenz_witness", lambda);
        let mut lev_random = Suite::new("leverenz_random", lambda);
        let mut decomposition = Suite::new("decomposition", lambda);
        let mut expansion = Suite::new("r_expansion", lambda);
        let mut conjecture = Suite::new("conjecture_n2_n4", lambda);
        let mut chain_suite = if in_range {
            Suite::new("chain_monotone", lambda)
        } else {
            Suite::skipped("chain_monotone", lambda, "lambda below lambda0")
        };
        let ps = ps_params(lambda);
        let mut ps_suite = if ps.in_region {
            Suite::new("ps_bound", lambda)
        } else {
            Suite::skipped("ps_bound", lambda, "parameters outside lemma region")
        };

        for (i, c) in samples.iter().enumerate() {
            let idx = Some(i);
            let p = p_from_c(c);
            let w = witness(lambda, c);
            let big_l = compute_l(&p, &w);
            let big_r = compute_r(&p, &w);

            let res = identity_residual(lambda, c);
            identity.check(
                &mut report,
                res <= RELATIVE * (1.0 + big_l),
                res,
                RELATIVE * (1.0 + big_l),
                Some(c),
                idx,
                seed,
            );

            let form = leverenz_form(&p.as_array(), &w.as_array())?;
            lev_witness.check(
                &mut report,
                form >= LEVERENZ_FLOOR,
                -form,
                -LEVERENZ_FLOOR,
                Some(c),
                idx,
                seed,
            );
            for _ in 0..RANDOM_Z_LISTS {
                let z = random_z_list(&mut zrng);
                let form = leverenz_form(&p.as_array(), &z)?;
                lev_random.check(
                    &mut report,
                    form >= LEVERENZ_FLOOR,
                    -form,
                    -LEVERENZ_FLOOR,
                    Some(c),
                    idx,
                    seed,
                );
            }

            decomposition.check(
                &mut report,
                close(big_r - big_l, form, RELATIVE),
                (big_r - big_l - form).abs(),
                RELATIVE,
                Some(c),
                idx,
                seed,
            );

            let total: f64 = 4.0
                * r_expansion_terms(lambda, c)
                    .iter()
                    .map(|t| t.value)
                    .sum::<f64>();
            expansion.check(
                &mut report,
                close(total, big_r, RELATIVE),
                (total - big_r).abs(),
                RELATIVE,
                Some(c),
                idx,
                seed,
            );

            let a = a_coeffs(lambda, c);
            let excess = [
                a.a2.norm() - q(1, lambda),
                a.a3.norm() - q(2, lambda),
                a.a4.norm() - q(3, lambda),
            ]
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
            if in_range {
                conjecture.check(
                    &mut report,
                    excess <= RELATIVE,
                    excess,
                    RELATIVE,
                    Some(c),
                    idx,
                    seed,
                );
            }

            if in_range {
                let rep = chain(lambda, c);
                let v = rep.values();
                let worst_drop = (0..4)
                    .map(|k| v[k] - v[k + 1])
                    .fold(f64::NEG_INFINITY, f64::max);
                chain_suite.check(
                    &mut report,
                    rep.is_monotone(),
                    worst_drop,
                    0.0,
                    Some(c),
                    idx,
                    seed,
                );
            }

            if ps.in_region {
                let val = ps_functional(ps.mu, ps.nu, c);
                ps_suite.check(
                    &mut report,
                    val <= ps.nu + RELATIVE,
                    val,
                    ps.nu,
                    Some(c),
                    idx,
                    seed,
                );
            }
        }

        let mut f_grid = Suite::new("f_grid", lambda);
        let fp = Fpoly::new(lambda);
        let at_one = fp.eval(1.0);
        f_grid.check(
            &mut report,
            at_one.abs() <= F_AT_ONE,
            at_one.abs(),
            F_AT_ONE,
            None,
            None,
            seed,
        );
        if in_range {
            for i in 0..F_GRID_POINTS {
                let t = i as f64 / (F_GRID_POINTS - 1) as f64;
                let v = fp.eval(t);
                f_grid.check(
                    &mut report,
                    v <= F_GRID_SLACK,
                    v,
                    F_GRID_SLACK,
                    None,
                    None,
                    seed,
                );
            }
        }

        for s in [
            identity,
            lev_witness,
            lev_random,
            decomposition,
            expansion,
            conjecture,
            chain_suite,
            f_grid,
            ps_suite,
        ] {
            s.finish(&mut report);
        }
    }
    Ok(report)
}

fn search_row(
    lambda: Lambda,
    config: &RunConfig,
    report: &mut Report,
    sweep_only: bool,
) -> Result<()> {
    let r = maximize_a5(lambda, config.starts, config.budget, config.seed)?;
    let bound = q(4, lambda);
    let gap = bound - r.best_value;
    if in_theorem_range(lambda) && r.best_value > bound + SEARCH_OVERSHOOT {
        report.violate(Violation {
            suite: "theorem",
            lambda: Some(lambda.value()),
            coeffs: Some(r.argmax),
            sample_index: None,
            observed: r.best_value,
            expected: bound,
            seed: config.seed,
        });
    }
    report.results.push(json!({
        "lambda": lambda.value(),
        "max_a5": r.best_value,
        "bound": bound,
        "gap": gap,
        "argmax": coeffs_json(&r.argmax),
        "starts": r.starts,
        "evaluations": r.evaluations,
        "seed": r.seed,
        "below_lambda0": !in_theorem_range(lambda),
    }));
    let mut row = vec![
        fmt_real(lambda.value()),
        fmt_real(r.best_value),
        fmt_real(bound),
        fmt_real(gap),
    ];
    if !sweep_only {
        row.extend(r.argmax.to_reals().iter().map(|&x| fmt_real(x)));
        row.push(r.starts.to_string());
        row.push(r.evaluations.to_string());
        row.push(r.seed.to_string());
    }
    report.csv_rows.push(row);
    Ok(())
}

const COEFF_COLUMNS: [&str; 8] = [
    "c1_re", "c1_im", "c2_re", "c2_im", "c3_re", "c3_im", "c4_re", "c4_im",
];

fn cmd_sweep(config: &RunConfig) -> Result<Report> {
    let mut report = Report::new(config, vec!["lambda", "max_a5", "bound", "gap"]);
    for &lambda in &config.lambdas {
        search_row(lambda, config, &mut report, true)?;
    }
    Ok(report)
}

fn cmd_search(config: &RunConfig) -> Result<Report> {
    let mut header = vec!["lambda", "max_a5", "bound", "gap"];
    header.extend(COEFF_COLUMNS);
    header.extend(["starts", "evaluations", "seed"]);
    let mut report = Report::new(config, header);
    for &lambda in &config.lambdas {
        search_row(lambda, config, &mut report, false)?;
    }
    Ok(report)
}

fn cmd_ps_check(config: &RunConfig) -> Result<Report> {
    let mut header = vec![
        "lambda",
        "mu",
        "nu",
        "in_region",
        "best_value",
        "exceeds_nu",
    ];
    header.extend(COEFF_COLUMNS);
    let mut report = Report::new(config, header);
    let pairs: Vec<(Option<f64>, f64, f64)> = match config.mu_nu {
        Some((mu, nu)) => vec![(None, mu, nu)],
        None => config
            .lambdas
            .iter()
            .map(|&l| {
                let p = ps_params(l);
                (Some(l.value()), p.mu, p.nu)
            })
            .collect(),
    };
    for (lambda, mu, nu) in pairs {
        let in_region = crate::inequalities::ps_region(mu, nu);
        let r = maximize_ps(mu, nu, config.starts, config.budget, config.seed)?;
        let exceeds = r.best_value > nu + SEARCH_OVERSHOOT;
        if in_region && exceeds {
            report.violate(Violation {
                suite: "ps_bound",
                lambda,
                coeffs: Some(r.argmax),
                sample_index: None,
                observed: r.best_value,
                expected: nu,
                seed: config.seed,
            });
        }
        report.results.push(json!({
            "lambda": lambda,
            "mu": mu,
            "nu": nu,
            "in_region": in_region,
            "best_value": r.best_value,
            "exceeds_nu": exceeds,
            "argmax": coeffs_json(&r.argmax),
            "starts": r.starts,
            "evaluations": r.evaluations,
        }));
        let mut row = vec![
            lambda.map(fmt_real).unwrap_or_default(),
            fmt_real(mu),
            fmt_real(nu),
            in_region.to_string(),
            fmt_real(r.best_value),
            exceeds.to_string(),
        ];
        row.extend(r.argmax.to_reals().iter().map(|&x| fmt_real(x)));
        report.csv_rows.push(row);
    }
    Ok(report)
}

fn cmd_chain(config: &RunConfig) -> Result<Report> {
    let mut header = vec!["lambda", "sample"];
    header.extend(COEFF_COLUMNS);
    header.extend(crate::proofchain::ChainReport::NAMES);
    header.push("monotone");
    let mut report = Report::new(config, header);
    let tuples = match config.coeffs {
        Some(c) => vec![c],
        None => sample(config.seed, config.samples, true)?,
    };
    for &lambda in &config.lambdas {
        for (i, c) in tuples.iter().enumerate() {
            let rep = chain(lambda, c);
            if !rep.below_lambda0 && !rep.is_monotone() {
                let v = rep.values();
                let k = rep.decreases[0];
                report.violate(Violation {
                    suite: "chain_monotone",
                    lambda: Some(lambda.value()),
                    coeffs: Some(*c),
                    sample_index: Some(i),
                    observed: v[k],
                    expected: v[k + 1],
                    seed: config.seed,
                });
            }
            let mut entries = Map::new();
            for e in rep.entries() {
                entries.insert(e.name.into(), json!(e.value));
            }
            report.results.push(json!({
                "lambda": lambda.value(),
                "sample": i,
                "coeffs": coeffs_json(c),
                "entries": entries,
                "monotone": rep.is_monotone(),
                "lemma_out_of_region": rep.lemma_out_of_region,
                "below_lambda0": rep.below_lambda0,
            }));
            let mut row = vec![fmt_real(lambda.value()), i.to_string()];
            row.extend(c.to_reals().iter().map(|&x| fmt_real(x)));
            row.extend(rep.values().iter().map(|&x| fmt_real(x)));
            row.push(rep.is_monotone().to_string());
            report.csv_rows.push(row);
        }
    }
    Ok(report)
}

/// Executes the configured command without writing anything.
pub fn execute(config: &RunConfig) -> Result<Report> {
    match config.command {
        Command::Lambda0 => Ok(cmd_lambda0(config)),
        Command::Verify => cmd_verify(config),
        Command::Sweep => cmd_sweep(config),
        Command::Search => cmd_search(config),
        Command::PsCheck => cmd_ps_check(config),
        Command::Chain => cmd_chain(config),
    }
}

/// Runs `config`, writing the document to `--out` or `stdout`; returns the exit code.
pub fn run(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let report = match execute(config) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let text = report.render(config.format);
    let written = match &config.out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(text.as_bytes())),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

/// Parses `argv` (including the program name) and runs it.
pub fn main_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    match RunConfig::from_args(args) {
        Ok(config) => run(&config, stdout, stderr),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

//! `thermal-ppt` command-line interface.
//!
//! Exit codes: 0 on success, 2 for invalid input or a rejected domain value,
//! 1 for I/O failures and failed oracle checks.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bipartition::Bipartition;
use crate::boundary::{self, PartitionRule, DEFAULT_TOL};
use crate::criteria::{self, Extremal};
use crate::durcirac::{self, DcVerdict};
use crate::error::{Error, Result};
use crate::oracle::{dense_transformed_thermal, DenseDensityMatrix};
use crate::polarization::PolarizationVector;
use crate::transforms::{pt_eigenvalues_analytic, TransformKind};
use crate::validate;

/// Analytic spectra are only materialized up to this N in reports.
const MAX_SPECTRUM_QUBITS: usize = 24;
/// `classify` lists every bipartition up to this N.
const MAX_TABLE_QUBITS: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "thermal-ppt", version, about = "PPT entanglement analysis of Bell-transformed NMR thermal states")]
pub struct Cli {
    /// Print a single JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// NPT verdict for one bipartition.
    Npt {
        #[arg(long, value_parser = parse_kind)]
        transform: TransformKind,
        #[command(flatten)]
        alphas: AlphaArgs,
        /// Bipartition index in [1, 2^(N-1) - 1].
        #[arg(long)]
        k: u64,
    },
    /// Separability boundary sweep over N, written as CSV.
    Boundary {
        #[arg(long, value_parser = parse_kind)]
        transform: TransformKind,
        #[arg(long)]
        nmin: usize,
        #[arg(long)]
        nmax: usize,
        /// Relative shift bound, 0 <= delta < 1.
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        seed: u32,
        /// all-but-first, half, or k=<int>; defaults to all-but-first for ch and half for cf.
        #[arg(long)]
        rule: Option<PartitionRule>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the closed forms with the dense oracle on random polarizations.
    OracleCheck {
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u32,
        /// Perturb the analytic spectra so every comparison fails.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Dür–Cirac coefficients and verdict, optionally after local X flips.
    Durcirac {
        /// Density matrix CSV (2^N rows of 2^N values).
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        input: Option<PathBuf>,
        /// iso:<f>, or ch:<alpha>[:<n>] for the uniformly polarized CH state.
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long)]
        k: u64,
        /// Qubits to flip with X before deciding, e.g. 2 or 2,3.
        #[arg(long, value_delimiter = ',')]
        flips: Vec<usize>,
        /// Search every flip pattern for one that certifies NPT.
        #[arg(long)]
        scan: bool,
    },
    /// Full-separability and full-distillability conditions.
    Classify {
        #[arg(long, value_parser = parse_kind)]
        transform: TransformKind,
        #[command(flatten)]
        alphas: AlphaArgs,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct AlphaArgs {
    /// Comma-separated polarizations, e.g. 1,0.5,-0.2.
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
    /// File with one polarization per line ('#' starts a comment).
    #[arg(long)]
    alphas_file: Option<PathBuf>,
}

fn parse_kind(s: &str) -> std::result::Result<TransformKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_values<'a>(items: impl Iterator<Item = &'a str>) -> Result<Vec<f64>> {
    items
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| Error::Parse(format!("polarization '{s}': {e}"))))
        .collect()
}

impl AlphaArgs {
    fn load(&self) -> Result<PolarizationVector> {
        let values = match (&self.alphas, &self.alphas_file) {
            (Some(inline), _) => parse_values(inline.split(','))?,
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)?;
                parse_values(text.lines().map(|l| l.split('#').next().unwrap_or("")))?
            }
            (None, None) => Vec::new(),
        };
        PolarizationVector::new(values)
    }
}

/// What the command produced: a JSON body and the matching text lines.
struct Outcome {
    inputs: Value,
    result: Value,
    text: String,
    /// Non-success code to return even though the command itself ran.
    exit: i32,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a str,
    args: Vec<String>,
    inputs: &'a Value,
    result: &'a Value,
    elapsed_seconds: f64,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Npt { .. } => "npt",
            Command::Boundary { .. } => "boundary",
            Command::OracleCheck { .. } => "oracle-check",
            Command::Durcirac { .. } => "durcirac",
            Command::Classify { .. } => "classify",
        }
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let code = e.exit_code();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let start = Instant::now();
    match execute(&cli.command, cli.json, out, err) {
        Ok(outcome) => {
            let written = if cli.json {
                let report = RunReport {
                    command: cli.command.name(),
                    args: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
                    inputs: &outcome.inputs,
                    result: &outcome.result,
                    elapsed_seconds: start.elapsed().as_secs_f64(),
                };
                serde_json::to_writer(&mut *out, &report)
                    .map_err(std::io::Error::from)
                    .and_then(|_| writeln!(out))
            } else {
                out.write_all(outcome.text.as_bytes())
            };
            match written {
                Ok(()) => outcome.exit,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    1
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_domain() {
                2
            } else {
                1
            }
        }
    }
}

fn execute(cmd: &Command, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Npt { transform, alphas, k } => cmd_npt(*transform, &alphas.load()?, *k),
        Command::Boundary {
            transform,
            nmin,
            nmax,
            delta,
            seed,
            rule,
            tol,
            out: path,
        } => {
            let rule = rule.unwrap_or_else(|| PartitionRule::default_for(*transform));
            cmd_boundary(*transform, *nmin, *nmax, *delta, *seed, rule, *tol, path.as_ref(), json, out, err)
        }
        Command::OracleCheck {
            nmax,
            trials,
            seed,
            corrupt,
        } => cmd_oracle_check(*nmax, *trials, *seed, *corrupt),
        Command::Durcirac {
            input,
            builtin,
            k,
            flips,
            scan,
        } => {
            let (rho, source) = match (input, builtin) {
                (Some(path), _) => {
                    let rho = DenseDensityMatrix::read_csv_path(path)?;
                    rho.check_positive()?;
                    (rho, path.display().to_string())
                }
                (None, Some(name)) => (builtin_state(name)?, name.clone()),
                (None, None) => return Err(Error::InvalidParameter("no input state".into())),
            };
            cmd_durcirac(&rho, &source, *k, flips, *scan)
        }
        Command::Classify { transform, alphas } => cmd_classify(*transform, &alphas.load()?),
    }
}

fn verdict_word(npt: bool) -> &'static str {
    if npt {
        "NPT"
    } else {
        "PPT"
    }
}

fn cmd_npt(kind: TransformKind, pol: &PolarizationVector, k: u64) -> Result<Outcome> {
    let bip = Bipartition::new(pol.n(), k)?;
    let verdict = criteria::npt(kind, pol, &bip)?;
    let min_eigenvalue = if pol.n() <= MAX_SPECTRUM_QUBITS {
        Some(pt_eigenvalues_analytic(kind, pol, &bip)?.min())
    } else {
        None
    };
    let mut text = format!(
        "transform: {kind}\nN: {}\nbipartition: {bip}\nverdict: {}\nmargin: {:?}\n",
        pol.n(),
        verdict_word(verdict.npt),
        verdict.margin
    );
    if verdict.at_boundary {
        text.push_str("note: margin within tolerance of zero; reported as PPT\n");
    }
    if let Some(m) = min_eigenvalue {
        text.push_str(&format!("min_pt_eigenvalue: {m:?}\n"));
    }
    Ok(Outcome {
        inputs: json!({ "transform": kind, "alphas": pol.alphas(), "k": k }),
        result: json!({
            "verdict": verdict_word(verdict.npt),
            "npt": verdict.npt,
            "margin": verdict.margin,
            "at_boundary": verdict.at_boundary,
            "w": bip.w(),
            "party_a": bip.party_a(),
            "party_b": bip.party_b(),
            "min_pt_eigenvalue": min_eigenvalue,
        }),
        text,
        exit: 0,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_boundary(
    kind: TransformKind,
    nmin: usize,
    nmax: usize,
    delta: f64,
    seed: u32,
    rule: PartitionRule,
    tol: f64,
    path: Option<&PathBuf>,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Outcome> {
    if nmin > nmax {
        return Err(Error::InvalidParameter(format!("nmin {nmin} exceeds nmax {nmax}")));
    }
    let points = boundary::sweep(kind, nmin..=nmax, delta, seed, rule, tol)?;
    let mut text = String::new();
    match path {
        Some(p) => {
            boundary::write_csv(&points, std::fs::File::create(p)?)?;
            text.push_str(&format!("wrote {} rows to {}\n", points.len(), p.display()));
        }
        None if !json => boundary::write_csv(&points, &mut *out)?,
        None => {}
    }
    let summary: Vec<String> = points
        .iter()
        .map(|p| format!("N={:<2} k={:<10} w={:<2} alpha_b={:?}", p.n, p.k, p.w, p.alpha_b))
        .collect();
    if path.is_some() {
        text.push_str(&summary.join("\n"));
        text.push('\n');
    } else if !json {
        writeln!(err, "{}", summary.join("\n"))?;
    }
    Ok(Outcome {
        inputs: json!({
            "transform": kind, "nmin": nmin, "nmax": nmax, "delta": delta, "seed": seed,
            "rule": rule.to_string(), "tol": tol,
            "out": path.map(|p| p.display().to_string()),
        }),
        result: json!({ "points": points }),
        text,
        exit: 0,
    })
}

fn cmd_oracle_check(nmax: usize, trials: usize, seed: u32, corrupt: bool) -> Result<Outcome> {
    let report = validate::run_oracle_check(nmax, trials, seed, corrupt)?;
    let mut text = String::new();
    for p in &report.properties {
        let status = if p.failed == 0 { "PASS" } else { "FAIL" };
        text.push_str(&format!("{status} {:<30} passed={} failed={}\n", p.name, p.passed, p.failed));
        if let Some(f) = &p.first_failure {
            text.push_str(&format!("     first failure: {f}\n"));
        }
    }
    let ok = report.all_passed();
    text.push_str(if ok { "all properties passed\n" } else { "oracle check FAILED\n" });
    Ok(Outcome {
        inputs: json!({ "nmax": nmax, "trials": trials, "seed": seed, "corrupt": corrupt }),
        result: json!({ "all_passed": ok, "properties": report.properties }),
        text,
        exit: if ok { 0 } else { 1 },
    })
}

fn builtin_state(name: &str) -> Result<DenseDensityMatrix> {
    let bad = || Error::Parse(format!("builtin '{name}' (expected iso:<f> or ch:<alpha>[:<n>])"));
    let mut parts = name.split(':');
    let name = parts.next().ok_or_else(bad)?;
    let value: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let n: Option<usize> = parts.next().map(|s| s.trim().parse().map_err(|_| bad())).transpose()?;
    if parts.next().is_some() {
        return Err(bad());
    }
    match (name, n) {
        ("iso", None) => durcirac::isotropic_state(value),
        ("ch", n) => dense_transformed_thermal(TransformKind::Ch, &PolarizationVector::uniform(n.unwrap_or(2), value)?),
        _ => Err(bad()),
    }
}

fn cmd_durcirac(rho: &DenseDensityMatrix, source: &str, k: u64, flips: &[usize], scan: bool) -> Result<Outcome> {
    let coeffs = durcirac::dc_coefficients(rho)?;
    let verdict = durcirac::dc_verdict(&coeffs, k)?;
    let two_lambda_k = 2.0 * coeffs.lambda(k as usize);
    let mut text = format!(
        "input: {source}\nN: {}\nlambda0+: {:?}\nlambda0-: {:?}\n",
        coeffs.n, coeffs.lambda0_plus, coeffs.lambda0_minus
    );
    for (i, l) in coeffs.lambdas.iter().enumerate() {
        text.push_str(&format!("lambda_{}: {l:?}\n", i + 1));
    }
    text.push_str(&format!("Delta: {:?}\n2*lambda_{k}: {two_lambda_k:?}\nverdict: {verdict}\n", coeffs.delta));

    let rescued = if flips.is_empty() {
        None
    } else {
        let v = durcirac::dc_with_rescue(rho, k, flips)?;
        let list: Vec<String> = flips.iter().map(|q| q.to_string()).collect();
        text.push_str(&format!("after X on qubits {}: {v}\n", list.join(",")));
        Some(v)
    };
    let scanned = if scan {
        let found = durcirac::find_rescue_flips(rho, k)?;
        match &found {
            Some(f) if f.is_empty() => text.push_str("scan: NPT without flips\n"),
            Some(f) => {
                let list: Vec<String> = f.iter().map(|q| q.to_string()).collect();
                text.push_str(&format!("scan: X on qubits {} certifies NPT\n", list.join(",")));
            }
            None => text.push_str("scan: no flip pattern certifies NPT\n"),
        }
        Some(found)
    } else {
        None
    };
    let certified = verdict == DcVerdict::Npt || rescued == Some(DcVerdict::Npt);
    Ok(Outcome {
        inputs: json!({ "source": source, "k": k, "flips": flips, "scan": scan }),
        result: json!({
            "coefficients": coeffs,
            "two_lambda_k": two_lambda_k,
            "verdict": verdict,
            "rescued_verdict": rescued,
            "scan_flips": scanned,
            "entanglement_certified": certified,
        }),
        text,
        exit: 0,
    })
}

fn cmd_classify(kind: TransformKind, pol: &PolarizationVector) -> Result<Outcome> {
    let fc = criteria::full_classification(kind, pol)?;
    let n = pol.n();
    let mut text = format!("transform: {kind}\nN: {n}\n");
    match fc.extremal {
        Extremal::Ch { b_max, b_min } => text.push_str(&format!("b_max: {b_max:?}\nb_min: {b_min:?}\n")),
        Extremal::Cf { d_max, d_min } => text.push_str(&format!("d_max: {d_max:?}\nd_min: {d_min:?}\n")),
    }
    text.push_str(&format!(
        "full separability condition holds: {}\nfull distillability condition holds: {}\n",
        fc.full_sep_possible, fc.full_dist_possible
    ));

    let uniform_iff = if pol.is_uniform() && pol.alpha(1) > 0.0 {
        let v = criteria::uniform_full_distillable_iff(kind, pol.alpha(1), n)?;
        text.push_str(&format!("uniform alpha: fully distillable iff condition: {v}\n"));
        Some(v)
    } else {
        None
    };

    let mut table = Vec::new();
    if n <= MAX_TABLE_QUBITS {
        text.push_str("k  w  party_B  verdict  margin\n");
        for bip in Bipartition::all(n)? {
            let v = criteria::npt(kind, pol, &bip)?;
            let b: Vec<String> = bip.party_b().iter().map(|q| q.to_string()).collect();
            text.push_str(&format!(
                "{:<2} {:<2} {:<8} {:<8} {:?}\n",
                bip.k(),
                bip.w(),
                b.join(","),
                verdict_word(v.npt),
                v.margin
            ));
            table.push(json!({ "k": bip.k(), "w": bip.w(), "party_b": bip.party_b(), "npt": v.npt, "margin": v.margin }));
        }
    }
    Ok(Outcome {
        inputs: json!({ "transform": kind, "alphas": pol.alphas() }),
        result: json!({
            "classification": fc,
            "uniform_full_distillable": uniform_iff,
            "bipartitions": if n <= MAX_TABLE_QUBITS { Some(table) } else { None },
        }),
        text,
        exit: 0,
    })
}

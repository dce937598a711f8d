//! Command-line front end for `phasespace-core`.
//!
//! [`run_cli`] is the whole program; the binary only wires it to the process
//! streams. Structured results are JSON, tables are CSV, and diagnostics go
//! to the error stream.

pub mod config;
pub mod format;
pub mod verify;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use phasespace_core::hta::{
    self, assemble_wavefunction, build_radial_family, closed_form_energy, derived_constants,
    eval_wavefunction, radial_ode_residual, sample_annulus, solve_energy, HtaConfig,
    PhysicalParams,
};
use phasespace_core::nu;
use phasespace_core::opspace::{
    apply_to_point, classify, commutator_coefficient, compose, GComplement, GEta, OpPoint,
    PhaseKind,
};
use phasespace_core::{c64, Complex};
use serde::{Deserialize, Serialize};

use config::{OutputFormat, RunConfig};
use format::{csv_row, float, pair, poly_pairs};
use verify::Suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

/// Sample count for the residual reported by `solve` and `scan`.
const RESIDUAL_SAMPLES: usize = 100;

#[derive(Debug, Parser)]
#[command(
    name = "phasespace",
    version,
    about = "Nikiforov-Uvarov solver and phase-space hydrogen tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one state and emit every intermediate of the NU chain.
    Solve(SolveArgs),
    /// Energies and residuals over an (n, L) grid.
    Scan(ScanArgs),
    /// Compose g_η transforms and apply them to an operator point.
    Manifold(ManifoldArgs),
    /// Tabulate the wavefunction body along r.
    Wavefunction(WavefunctionArgs),
    /// Run the acceptance checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct IoArgs {
    /// JSON file with {"unit_system", "m", "hbar", "k", "e2"}.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the document here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "L")]
    l: u32,
    #[arg(long, allow_hyphen_values = true)]
    alphadelta: f64,
    /// Operator coefficients α,β,γ,δ; must be on the manifold with matching αδ.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
    point: Option<OpPoint>,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    n_max: usize,
    #[arg(long = "L-max")]
    l_max: u32,
    #[arg(long, allow_hyphen_values = true)]
    alphadelta: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Debug, Args)]
struct ManifoldArgs {
    /// KIND:COUNT[,KIND:COUNT...], KIND in 1..=4, COUNT may be negative.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_applications)]
    apply: Applications,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_diag)]
    g0: Option<GEta>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
    point: Option<OpPoint>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct WavefunctionArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "L")]
    l: u32,
    #[arg(long, allow_hyphen_values = true)]
    alphadelta: f64,
    /// rmin,rmax,count with count ≥ 2 evenly spaced samples.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_grid)]
    grid: (f64, f64, usize),
    /// p̄ as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
    pbar: Complex,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
    point: Option<OpPoint>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
}

#[derive(Debug, Clone)]
struct Applications(Vec<(PhaseKind, i64)>);

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("not a number: {t:?}"))
        })
        .collect()
}

fn parse_point(s: &str) -> Result<OpPoint, String> {
    match parse_floats(s)?[..] {
        [a, b, c, d] => Ok(OpPoint::new(a, b, c, d)),
        _ => Err("expected α,β,γ,δ".into()),
    }
}

fn parse_diag(s: &str) -> Result<GEta, String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("not an integer: {t:?}"))
        })
        .collect::<Result<_, _>>()?;
    let diag: [i64; 4] = v
        .try_into()
        .map_err(|_| "expected four integers".to_string())?;
    Ok(GEta::new(diag))
}

fn parse_applications(s: &str) -> Result<Applications, String> {
    s.split(',')
        .map(|item| {
            let (kind, count) = item
                .split_once(':')
                .ok_or_else(|| format!("expected KIND:COUNT, got {item:?}"))?;
            let kind = kind
                .trim()
                .parse::<u8>()
                .ok()
                .and_then(PhaseKind::from_index)
                .ok_or_else(|| format!("KIND must be 1..=4, got {kind:?}"))?;
            let count = count
                .trim()
                .parse::<i64>()
                .map_err(|_| format!("bad COUNT {count:?}"))?;
            Ok((kind, count))
        })
        .collect::<Result<_, _>>()
        .map(Applications)
}

fn parse_grid(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return Err("expected rmin,rmax,count".into());
    };
    let lo = lo
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("bad rmin {lo:?}"))?;
    let hi = hi
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("bad rmax {hi:?}"))?;
    let count = count
        .trim()
        .parse::<usize>()
        .map_err(|_| format!("bad count {count:?}"))?;
    if count < 2 || !(lo.is_finite() && hi.is_finite()) {
        return Err("need finite ends and at least 2 samples".into());
    }
    Ok((lo, hi, count))
}

fn parse_complex(s: &str) -> Result<Complex, String> {
    match parse_floats(s)?[..] {
        [re] => Ok(c64(re, 0.0)),
        [re, im] => Ok(c64(re, im)),
        _ => Err("expected re or re,im".into()),
    }
}

enum Failure {
    Usage(String),
    Solver(phasespace_core::Error),
    Io(String),
}

impl From<phasespace_core::Error> for Failure {
    fn from(e: phasespace_core::Error) -> Self {
        Failure::Solver(e)
    }
}

/// Exponential rate and power of an `e^{aA}A^b` factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePower {
    pub rate: [f64; 2],
    pub power: [f64; 2],
}

/// Document emitted by `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: u32,
    pub alphadelta: f64,
    pub point: [f64; 4],
    pub units: Units,
    pub kappa: f64,
    pub energy: f64,
    pub energy_closed_form: f64,
    #[serde(rename = "K")]
    pub k: [f64; 2],
    pub pi: Vec<[f64; 2]>,
    pub tau: Vec<[f64; 2]>,
    pub phi: RatePower,
    pub rho: RatePower,
    pub y: Vec<[f64; 2]>,
    pub prefactor_rate: [f64; 2],
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub m: f64,
    pub hbar: f64,
    pub k: f64,
    pub e2: f64,
}

impl From<&PhysicalParams> for Units {
    fn from(p: &PhysicalParams) -> Self {
        Units {
            m: p.mass,
            hbar: p.hbar,
            k: p.coulomb_k,
            e2: p.charge_sq,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: u32,
    pub energy: f64,
    pub residual: f64,
}

fn hta_config(point: Option<OpPoint>, alphadelta: f64) -> Result<HtaConfig, Failure> {
    match point {
        None => Ok(HtaConfig::for_alphadelta(alphadelta)?),
        Some(p) => {
            let cfg = HtaConfig::new(p)
                .map_err(|_| Failure::Usage("--point is not on the manifold βγ − αδ = 1".into()))?;
            if (cfg.alphadelta - alphadelta).abs() > 1e-12 {
                return Err(Failure::Usage(format!(
                    "--point has αδ = {}, but --alphadelta is {}",
                    float(cfg.alphadelta),
                    float(alphadelta)
                )));
            }
            Ok(cfg)
        }
    }
}

pub fn solve_report(
    params: &PhysicalParams,
    n: usize,
    cfg: &HtaConfig,
) -> phasespace_core::Result<SolveReport> {
    let wf = assemble_wavefunction(params, cfg, n)?;
    let constants = derived_constants(params);
    let family = build_radial_family(&constants, cfg.alphadelta)?;
    let sol = nu::solve(&family.at(wf.kappa)?, n)?;
    let residual = radial_ode_residual(
        &constants,
        cfg.alphadelta,
        wf.kappa,
        &wf.body,
        &sample_annulus(RESIDUAL_SAMPLES),
    )?;
    Ok(SolveReport {
        n,
        l: params.l,
        alphadelta: cfg.alphadelta,
        point: cfg.point.to_array(),
        units: params.into(),
        kappa: wf.kappa,
        energy: constants.energy_of_kappa(wf.kappa),
        energy_closed_form: closed_form_energy(params, n, cfg.alphadelta)?,
        k: pair(sol.branch.k),
        pi: poly_pairs(&sol.branch.pi),
        tau: poly_pairs(&sol.branch.tau),
        phi: RatePower {
            rate: pair(sol.phi.rate),
            power: pair(sol.phi.power),
        },
        rho: RatePower {
            rate: pair(sol.rho.rate),
            power: pair(sol.rho.power),
        },
        y: poly_pairs(&sol.y),
        prefactor_rate: pair(wf.prefactor_rate),
        residual,
    })
}

pub fn scan_rows(
    params: &PhysicalParams,
    n_max: usize,
    l_max: u32,
    alphadelta: f64,
) -> phasespace_core::Result<Vec<ScanRow>> {
    let samples = sample_annulus(RESIDUAL_SAMPLES);
    let constants = derived_constants(params);
    let mut rows = Vec::new();
    for n in 0..=n_max {
        for l in 0..=l_max {
            let p = params.with_l(l);
            let energy = solve_energy(&p, n, alphadelta)?;
            let residual = hta::ode_residual_at_kappa(
                &p,
                alphadelta,
                n,
                constants.kappa_of_energy(energy),
                &samples,
            )?;
            rows.push(ScanRow {
                n,
                l,
                energy,
                residual,
            });
        }
    }
    Ok(rows)
}

fn emit(doc: &str, out_path: Option<&PathBuf>, out: &mut dyn Write) -> Result<(), Failure> {
    match out_path {
        Some(path) => fs::write(path, doc)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => out
            .write_all(doc.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn load_config(io: &IoArgs, format: OutputFormat) -> Result<RunConfig, Failure> {
    RunConfig::load(io.config.as_deref(), format, io.out.clone()).map_err(Failure::Usage)
}

fn run_solve(args: SolveArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let rc = load_config(&args.io, args.format)?;
    let cfg = hta_config(args.point, args.alphadelta)?;
    let report = solve_report(&rc.params.with_l(args.l), args.n, &cfg)?;
    let doc = match rc.output_format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => format!(
            "n,L,alphadelta,kappa,energy,energy_closed_form,residual\n{},{},{}\n",
            report.n,
            report.l,
            csv_row(&[
                report.alphadelta,
                report.kappa,
                report.energy,
                report.energy_closed_form,
                report.residual
            ])
        ),
    };
    emit(&doc, rc.output_path.as_ref(), out)?;
    Ok(EXIT_OK)
}

fn run_scan(args: ScanArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let rc = load_config(&args.io, args.format)?;
    let rows = scan_rows(&rc.params, args.n_max, args.l_max, args.alphadelta)?;
    let doc = match rc.output_format {
        OutputFormat::Json => to_json(&rows),
        OutputFormat::Csv => {
            let mut s = String::from("n,L,energy,residual\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{}\n",
                    r.n,
                    r.l,
                    csv_row(&[r.energy, r.residual])
                ));
            }
            s
        }
    };
    emit(&doc, rc.output_path.as_ref(), out)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ManifoldReport {
    g0: [i64; 4],
    applications: Vec<(u8, i64)>,
    diag: [i64; 4],
    matrix: [[i64; 4]; 4],
    class: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    on_manifold: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    commutator_coefficient: Option<f64>,
}

fn run_manifold(args: ManifoldArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let g0 = args.g0.unwrap_or(GEta::IDENTITY);
    let apps: Vec<_> = args
        .apply
        .0
        .iter()
        .map(|&(k, c)| (GComplement::fundamental(k), c))
        .collect();
    let g = compose(&g0, &apps)?;
    let applied = args.point.map(|p| apply_to_point(&g, &p));
    let report = ManifoldReport {
        g0: g0.diag,
        applications: args
            .apply
            .0
            .iter()
            .map(|&(k, c)| (k.slot() as u8 + 1, c))
            .collect(),
        diag: g.diag,
        matrix: g.matrix(),
        class: classify(&g).as_str(),
        point: args.point.map(OpPoint::to_array),
        image: applied.map(|(p, _)| p.to_array()),
        on_manifold: applied.map(|(_, m)| m),
        commutator_coefficient: applied.map(|(p, _)| commutator_coefficient(&p)),
    };
    emit(&to_json(&report), args.out.as_ref(), out)?;
    Ok(EXIT_OK)
}

fn run_wavefunction(args: WavefunctionArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let rc = load_config(&args.io, OutputFormat::Csv)?;
    let cfg = hta_config(args.point, args.alphadelta)?;
    let params = rc.params.with_l(args.l);
    let wf = assemble_wavefunction(&params, &cfg, args.n)?;
    let (lo, hi, count) = args.grid;
    let p = cfg.point;
    let mut doc = format!(
        "# n={} L={} alphadelta={} point={}\n# kappa={}\n# prefactor exp(i*p_r*r*rate/hbar), rate={}\n# pbar={}\nr,A_re,A_im,psi_re,psi_im\n",
        args.n,
        args.l,
        float(cfg.alphadelta),
        csv_row(&p.to_array()),
        float(wf.kappa),
        csv_row(&pair(wf.prefactor_rate)),
        csv_row(&pair(args.pbar)),
    );
    for i in 0..count {
        let r = lo + (hi - lo) * i as f64 / (count - 1) as f64;
        let a = hta::collective_variable(&p, r, args.pbar, params.hbar);
        let psi = eval_wavefunction(&wf, r, args.pbar, params.hbar)?;
        doc.push_str(&csv_row(&[r, a.re, a.im, psi.re, psi.im]));
        doc.push('\n');
    }
    emit(&doc, rc.output_path.as_ref(), out)?;
    Ok(EXIT_OK)
}

fn run_verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let outcomes = verify::run_suite(args.suite);
    let mut doc = String::new();
    for o in &outcomes {
        doc.push_str(&format!("{o}\n"));
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    doc.push_str(&format!(
        "{} passed, {failed} failed\n",
        outcomes.len() - failed
    ));
    emit(&doc, None, out)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

/// Parses `args` (program name first) and runs the subcommand.
/// Returns the process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => run_solve(a, out),
        Command::Scan(a) => run_scan(a, out),
        Command::Manifold(a) => run_manifold(a, out),
        Command::Wavefunction(a) => run_wavefunction(a, out),
        Command::Verify(a) => run_verify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Solver(e)) => {
            let _ = writeln!(err, "{}: {e}", e.name());
            EXIT_SOLVER
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILED
        }
    }
}

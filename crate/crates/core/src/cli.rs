//! Command-line front end. The parser lives in the library so the same
//! `RunSpec` can be driven from tests and examples.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::certificates::{
    certificate_ch, certificate_generic, verify_certificate, Certificate, CertificateInputs, Verdict,
};
use crate::error::{Error, Result};
use crate::geometry::{
    hex_lattice, hyperbolic_level_packing, poisson_disk_sample, Configuration, GenericBounds, ManifoldModel,
};
use crate::io::{config_to_json, parse_config_file};
use crate::kernels::{heat_kernel, heat_kernel_upper_gaussian, heat_kernel_upper_generic, KernelQuery};
use crate::principal::{phi_diagonal, regularized_coupling, regularized_phi_diagonal};
use crate::spectral::{eigenflow, ground_state_auto, DEFAULT_TOL};
use crate::units::PhysicalConstants;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Parser)]
#[command(name = "krein", version, about = "Point interactions on flat and hyperbolic surfaces")]
pub struct RunSpec {
    #[command(subcommand)]
    pub command: Command,
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Ground-state energy and the lambda_min flow of Phi(nu).
    Spectrum(SpectrumArgs),
    /// Certified lower bound -nu_*^2 on the ground-state energy.
    Certificate(CertificateArgs),
    /// Compare a configuration's ground state with its certificate.
    Verify(VerifyArgs),
    /// Heat kernel and its upper bounds on a (t, d) grid.
    Kernels(KernelArgs),
    /// Generate a configuration file.
    Lattice(LatticeArgs),
    /// Renormalization flow of the coupling lambda(eps).
    Flow(FlowArgs),
    /// Seeded batch of random configurations with certificate margins.
    Montecarlo(MonteCarloArgs),
}

#[derive(Debug, Clone, Args)]
pub struct UnitArgs {
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, default_value_t = 0.5)]
    pub mass: f64,
}

impl UnitArgs {
    fn constants(&self) -> Result<PhysicalConstants> {
        PhysicalConstants::new(self.hbar, self.mass)
    }
}

#[derive(Debug, Clone, Args)]
#[group(id = "backend", multiple = false)]
pub struct ModelArgs {
    /// Flat plane (default).
    #[arg(long)]
    pub flat: bool,
    /// Hyperbolic plane of curvature -kappa.
    #[arg(long)]
    pub hyperbolic: bool,
    /// Generic surface described only by heat-kernel bound constants.
    #[arg(long)]
    pub generic: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long = "A")]
    pub const_a: Option<f64>,
    #[arg(long = "B")]
    pub const_b: Option<f64>,
    #[arg(long = "C")]
    pub const_c: Option<f64>,
    #[arg(long = "D")]
    pub const_d: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long = "n-star")]
    pub n_star: Option<u32>,
    #[arg(long = "lambda-gap")]
    pub lambda_gap: Option<f64>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn need(v: Option<f64>, flag: &str) -> Result<f64> {
    v.ok_or_else(|| usage(format!("missing --{flag}")))
}

impl BoundArgs {
    fn model(&self, m: &ModelArgs) -> Result<ManifoldModel> {
        if m.hyperbolic {
            ManifoldModel::hyperbolic(need(self.kappa, "kappa")?)
        } else if m.generic {
            ManifoldModel::generic(GenericBounds {
                kappa: self.kappa.unwrap_or(0.0),
                const_c: need(self.const_c, "C")?,
                const_d: need(self.const_d, "D")?,
                rho: need(self.rho, "rho")?,
                lambda_gap: self.lambda_gap.unwrap_or(0.0),
                n_star: self.n_star.ok_or_else(|| usage("missing --n-star"))?,
                const_a: need(self.const_a, "A")?,
                const_b: need(self.const_b, "B")?,
            })
        } else {
            if self.kappa.is_some_and(|k| k != 0.0) {
                return Err(usage("--kappa needs --hyperbolic or --generic"));
            }
            Ok(ManifoldModel::Flat)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    /// Flat hexagonal lattice, rings 0..=levels.
    Hex,
    /// Hyperbolic geodesic-circle levels 0..=levels.
    Levels,
    /// Seeded Poisson-disk sample in a ball of radius `--radius`.
    Poisson,
}

/// Where a configuration comes from: a file or a generator.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Configuration file (JSON).
    #[arg(long, conflicts_with = "generate")]
    pub config: Option<PathBuf>,
    /// Generate the configuration instead of reading it.
    #[arg(long, value_enum)]
    pub generate: Option<Generator>,
    #[arg(long, default_value_t = 2)]
    pub levels: u32,
    #[arg(long, default_value_t = 1.0)]
    pub dmin: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 5.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

struct Loaded {
    config: Configuration,
    const_a: Option<f64>,
    const_b: Option<f64>,
}

fn generate(
    kind: Generator,
    src: &SourceArgs,
    model: ManifoldModel,
    constants: PhysicalConstants,
) -> Result<Configuration> {
    match kind {
        Generator::Hex => {
            if model != ManifoldModel::Flat {
                return Err(usage("the hex generator is flat only"));
            }
            hex_lattice(src.dmin, src.levels, src.mu, constants)
        }
        Generator::Levels => match model {
            ManifoldModel::Hyperbolic { kappa } => {
                hyperbolic_level_packing(kappa, src.dmin, src.levels, src.mu, constants)
            }
            _ => Err(usage("the levels generator needs --hyperbolic --kappa")),
        },
        Generator::Poisson => poisson_disk_sample(&model, src.radius, src.dmin, src.seed, src.mu, constants),
    }
}

fn load(src: &SourceArgs, m: &ModelArgs, b: &BoundArgs, units: &UnitArgs) -> Result<Loaded> {
    match (&src.config, src.generate) {
        (Some(path), None) => {
            let doc = parse_config_file(path)?;
            let config =
                doc.configuration.ok_or_else(|| usage("generic-bound documents carry no configuration to solve"))?;
            Ok(Loaded { config, const_a: b.const_a.or(doc.const_a), const_b: b.const_b.or(doc.const_b) })
        }
        (None, Some(kind)) => {
            let model = b.model(m)?;
            let config = generate(kind, src, model, units.constants()?)?;
            Ok(Loaded { config, const_a: b.const_a, const_b: b.const_b })
        }
        _ => Err(usage("give exactly one configuration source: --config <file> or --generate <kind>")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub bounds: BoundArgs,
    #[command(flatten)]
    pub units: UnitArgs,
    /// Flow grid `lo:hi:count`; default spans mu_star/2 to 2 nu_gr.
    #[arg(long = "nu-grid")]
    pub nu_grid: Option<String>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CertificateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub bounds: BoundArgs,
    #[command(flatten)]
    pub units: UnitArgs,
    #[arg(long)]
    pub dmin: f64,
    #[arg(long = "mu-star")]
    pub mu_star: f64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub bounds: BoundArgs,
    #[command(flatten)]
    pub units: UnitArgs,
    /// Check this nu_* instead of the computed certificate.
    #[arg(long = "nu-star")]
    pub nu_star: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub bounds: BoundArgs,
    #[command(flatten)]
    pub units: UnitArgs,
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',', default_value = "0.1,1,10")]
    pub t: Vec<f64>,
    /// Comma-separated distances.
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2")]
    pub d: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct LatticeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub bounds: BoundArgs,
    #[command(flatten)]
    pub units: UnitArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub bounds: BoundArgs,
    #[command(flatten)]
    pub units: UnitArgs,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 2.0)]
    pub nu: f64,
    /// Comma-separated cutoffs.
    #[arg(long, value_delimiter = ',', default_value = "1e-1,1e-2,1e-3,1e-4")]
    pub eps: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct MonteCarloArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub bounds: BoundArgs,
    #[command(flatten)]
    pub units: UnitArgs,
    #[arg(long, default_value_t = 8)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1.0)]
    pub dmin: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

/// Exit code for an error: usage and input problems give 64, numerical
/// failures 2.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_)
        | Error::UnsupportedBackend { .. }
        | Error::InvalidConfiguration(_)
        | Error::IncompatibleCertificate(_)
        | Error::Io(_)
        | Error::Parse(_) => EXIT_USAGE,
        Error::NoPairs
        | Error::Divergence
        | Error::NotSymmetric { .. }
        | Error::NoCrossing { .. }
        | Error::AtBoundState { .. }
        | Error::Threshold { .. }
        | Error::Validity { .. }
        | Error::Quadrature { .. } => EXIT_NUMERIC,
    }
}

/// Runs a command, writing to `--out` or standard output; errors go to
/// standard error. Returns the process exit code.
/// Standard output that goes quiet once the reader closes the pipe.
struct ClosedPipeSink<W> {
    inner: W,
    closed: bool,
}

impl<W: Write> Write for ClosedPipeSink<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        if self.closed {
            return Ok(buf.len());
        }
        match self.inner.write(buf) {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {
                self.closed = true;
                Ok(buf.len())
            }
            other => other,
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match self.inner.flush() {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {
                self.closed = true;
                Ok(())
            }
            other => other,
        }
    }
}

pub fn run(spec: &RunSpec) -> i32 {
    let result = match &spec.out {
        Some(path) => File::create(path).map_err(Error::from).and_then(|f| {
            let mut w = BufWriter::new(f);
            let code = execute(&spec.command, &mut w)?;
            w.flush()?;
            Ok(code)
        }),
        None => {
            let mut w = ClosedPipeSink { inner: io::stdout().lock(), closed: false };
            execute(&spec.command, &mut w)
        }
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("krein: {err}");
            exit_code(&err)
        }
    }
}

/// Parses arguments (without the program name handling clap's own exits)
/// and runs. Help and version print and return 0; bad usage returns 64.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunSpec::try_parse_from(args) {
        Ok(spec) => run(&spec),
        Err(err) => {
            let _ = err.print();
            if err.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}

/// Runs a command against an arbitrary writer.
pub fn execute(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Spectrum(a) => spectrum(a, out),
        Command::Certificate(a) => certificate(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Kernels(a) => kernels(a, out),
        Command::Lattice(a) => lattice(a, out),
        Command::Flow(a) => flow(a, out),
        Command::Montecarlo(a) => montecarlo(a, out),
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || usage(format!("grid `{spec}` is not lo:hi:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(bad());
    }
    Ok((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect())
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(usage(format!("--tol must be in (0, 1), got {tol}")))
    }
}

fn spectrum(a: &SpectrumArgs, out: &mut dyn Write) -> Result<i32> {
    check_tol(a.tol)?;
    let loaded = load(&a.source, &a.model, &a.bounds, &a.units)?;
    let config = &loaded.config;
    let c = config.constants();
    let gs = ground_state_auto(config, a.tol)?;
    let grid = match &a.nu_grid {
        Some(g) => parse_grid(g)?,
        None => {
            let lo = 0.5 * config.mu_star();
            let hi = 2.0 * gs.nu_gr;
            (0..20).map(|k| lo + (hi - lo) * k as f64 / 19.0).collect()
        }
    };
    let flow = eigenflow(config, &grid)?;
    writeln!(out, "kind,nu,value,negative_count,centers,hbar,mass")?;
    writeln!(out, "ground_state,{},{},,{},{},{}", gs.nu_gr, gs.energy, config.len(), c.hbar, c.mass)?;
    for k in 0..grid.len() {
        writeln!(
            out,
            "lambda_min,{},{},{},{},{},{}",
            flow.nu_grid[k],
            flow.lambda_min[k],
            flow.neg_counts[k],
            config.len(),
            c.hbar,
            c.mass
        )?;
    }
    Ok(EXIT_OK)
}

fn certificate_for(
    model: &ManifoldModel,
    b: &BoundArgs,
    d_min: f64,
    mu_star: f64,
    c: &PhysicalConstants,
) -> Result<Certificate> {
    match model {
        ManifoldModel::GenericBounds(g) => certificate_generic(g, d_min, mu_star, c),
        _ => certificate_ch(model.kappa(), d_min, mu_star, need(b.const_a, "A")?, need(b.const_b, "B")?, c),
    }
}

fn write_certificate(cert: &Certificate, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "regime: {}", cert.regime.name())?;
    writeln!(out, "nu_star: {}", cert.nu_star)?;
    writeln!(out, "energy_lower_bound: {}", cert.energy_lower_bound)?;
    writeln!(out, "margin: {:e}", cert.margin()?)?;
    match cert.inputs {
        CertificateInputs::CartanHadamard { kappa, d_min, mu_star, const_a, const_b } => {
            writeln!(out, "inputs: kappa={kappa} d_min={d_min} mu_star={mu_star} A={const_a} B={const_b}")?;
        }
        CertificateInputs::Generic { params: g, d_min, mu_star } => {
            writeln!(
                out,
                "inputs: kappa={} d_min={d_min} mu_star={mu_star} C={} D={} rho={} n_star={} lambda_gap={}",
                g.kappa, g.const_c, g.const_d, g.rho, g.n_star, g.lambda_gap
            )?;
        }
    }
    if let Some(v) = cert.validity {
        writeln!(out, "validity: {v}")?;
    }
    writeln!(out, "units: {}", cert.constants.describe())?;
    Ok(())
}

fn certificate(a: &CertificateArgs, out: &mut dyn Write) -> Result<i32> {
    let model = a.bounds.model(&a.model)?;
    let cert = certificate_for(&model, &a.bounds, a.dmin, a.mu_star, &a.units.constants()?)?;
    write_certificate(&cert, out)?;
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let loaded = load(&a.source, &a.model, &a.bounds, &a.units)?;
    let config = &loaded.config;
    let bounds = BoundArgs { const_a: loaded.const_a, const_b: loaded.const_b, ..a.bounds.clone() };
    let mut cert = certificate_for(config.model(), &bounds, config.d_min(), config.mu_star(), config.constants())?;
    if let Some(nu) = a.nu_star {
        if !(nu > 0.0) {
            return Err(usage(format!("--nu-star must be positive, got {nu}")));
        }
        cert.nu_star = nu;
        cert.energy_lower_bound = -nu * nu;
    }
    let report = verify_certificate(config, &cert)?;
    let verdict = match report.verdict {
        Verdict::Pass => "pass",
        Verdict::Inconclusive => "inconclusive",
        Verdict::Fail => "fail",
    };
    writeln!(out, "verdict: {verdict}")?;
    writeln!(out, "centers: {}", report.centers)?;
    writeln!(out, "nu_star: {}", report.nu_star)?;
    writeln!(out, "energy: {}", report.energy)?;
    writeln!(out, "energy_lower_bound: {}", -report.nu_star * report.nu_star)?;
    writeln!(out, "margin: {}", report.margin)?;
    writeln!(out, "inequality_margin: {:e}", report.inequality_margin)?;
    writeln!(out, "neumann_gate: {}", report.neumann_gate)?;
    writeln!(out, "units: {}", config.constants().describe())?;
    Ok(if report.verdict == Verdict::Pass { EXIT_OK } else { EXIT_FAILED })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn kernels(a: &KernelArgs, out: &mut dyn Write) -> Result<i32> {
    let model = a.bounds.model(&a.model)?;
    let c = a.units.constants()?;
    writeln!(out, "t,d,kernel,gaussian_bound,generic_bound,hbar,mass")?;
    for &t in &a.t {
        for &d in &a.d {
            let q = KernelQuery::new(t, d, model, c)?;
            let (exact, gaussian, generic) = match model {
                ManifoldModel::GenericBounds(_) => (None, None, Some(heat_kernel_upper_generic(&q)?)),
                _ => {
                    let g = match (a.bounds.const_a, a.bounds.const_b) {
                        (Some(ca), Some(cb)) => Some(heat_kernel_upper_gaussian(&q, ca, cb)?),
                        _ => None,
                    };
                    (Some(heat_kernel(&q)?), g, None)
                }
            };
            writeln!(out, "{t},{d},{},{},{},{},{}", opt(exact), opt(gaussian), opt(generic), c.hbar, c.mass)?;
        }
    }
    Ok(EXIT_OK)
}

fn lattice(a: &LatticeArgs, out: &mut dyn Write) -> Result<i32> {
    let kind = match (&a.source.config, a.source.generate) {
        (None, Some(kind)) => kind,
        _ => return Err(usage("lattice needs --generate <hex|levels|poisson>")),
    };
    let model = a.bounds.model(&a.model)?;
    let config = generate(kind, &a.source, model, a.units.constants()?)?;
    writeln!(out, "{}", config_to_json(&config, a.bounds.const_a, a.bounds.const_b)?)?;
    Ok(EXIT_OK)
}

fn flow(a: &FlowArgs, out: &mut dyn Write) -> Result<i32> {
    let model = a.bounds.model(&a.model)?;
    let c = a.units.constants()?;
    let exact = phi_diagonal(&model, a.nu, a.mu, &c)?;
    writeln!(out, "epsilon,coupling,inverse_coupling,phi_regularized,phi,gap,hbar,mass")?;
    for &eps in &a.eps {
        let lambda = regularized_coupling(&model, eps, a.mu, &c)?;
        let reg = regularized_phi_diagonal(&model, eps, a.nu, a.mu, &c)?;
        writeln!(out, "{eps},{lambda},{},{reg},{exact},{},{},{}", 1.0 / lambda, exact - reg, c.hbar, c.mass)?;
    }
    Ok(EXIT_OK)
}

fn montecarlo(a: &MonteCarloArgs, out: &mut dyn Write) -> Result<i32> {
    check_tol(a.tol)?;
    let model = a.bounds.model(&a.model)?;
    if let ManifoldModel::GenericBounds(_) = model {
        return Err(usage("montecarlo needs an exact backend (--flat or --hyperbolic)"));
    }
    let c = a.units.constants()?;
    let const_a = need(a.bounds.const_a, "A")?;
    let const_b = need(a.bounds.const_b, "B")?;
    let cert = certificate_ch(model.kappa(), a.dmin, a.mu, const_a, const_b, &c)?;
    let rows: Vec<(u64, usize, f64, f64)> = (0..a.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = a.seed.wrapping_add(trial);
            let config = poisson_disk_sample(&model, a.radius, a.dmin, seed, a.mu, c)?;
            let gs = ground_state_auto(&config, a.tol)?;
            Ok((seed, config.len(), gs.nu_gr, gs.energy))
        })
        .collect::<Result<_>>()?;
    writeln!(out, "trial,seed,centers,nu_gr,energy,nu_star,margin,hbar,mass")?;
    let mut worst = f64::INFINITY;
    for (trial, (seed, n, nu, e)) in rows.iter().enumerate() {
        let margin = e + cert.nu_star * cert.nu_star;
        worst = worst.min(margin);
        writeln!(out, "{trial},{seed},{n},{nu},{e},{},{margin},{},{}", cert.nu_star, c.hbar, c.mass)?;
    }
    if !rows.is_empty() {
        let mean = rows.iter().map(|r| r.3).sum::<f64>() / rows.len() as f64;
        eprintln!("trials={} mean_energy={mean} min_margin={worst} nu_star={}", rows.len(), cert.nu_star);
    }
    Ok(if worst > 0.0 { EXIT_OK } else { EXIT_FAILED })
}

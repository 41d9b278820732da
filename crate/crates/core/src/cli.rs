//! Command-line driver.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 configuration, input
//! or bound errors, 3 search timeout.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{self, parse_config, parse_ring_literal, Bounds, CatalogConfig, Format};
use crate::error::{Error, Result};
use crate::form::{BilinearForm, CanonicalForm};
use crate::orthoset::{
    self, classify_family, enumerate_maximum_sets, max_orthogonal_set, OrthogonalSet, PlaneKind, SearchOptions,
    VerificationReport,
};
use crate::report;
use crate::ring::{LocalRing, SquareTag};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;

/// Default ring size limit for `enumerate` when `--max-card` is not given.
pub const ENUMERATE_RING_LIMIT: u64 = 27;

#[derive(Debug, Parser)]
#[command(
    name = "unimod",
    version,
    about = "Unimodular orthogonal sets over finite local rings"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Ring catalog (TOML)
    #[arg(long, global = true, env = "UNIMOD_CONFIG")]
    pub config: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum, env = "UNIMOD_FORMAT")]
    pub format: Option<Format>,

    /// Write the report here instead of stdout
    #[arg(long, global = true, env = "UNIMOD_OUT")]
    pub out: Option<PathBuf>,

    /// Search budget per (ring, form), in seconds
    #[arg(long, global = true, env = "UNIMOD_TIMEOUT")]
    pub timeout: Option<u64>,

    /// Enumeration bound on |R| and |R|^n
    #[arg(long = "max-card", global = true, env = "UNIMOD_MAX_CARD")]
    pub max_card: Option<u64>,

    /// Force sequential, deterministic search
    #[arg(long, global = true, env = "UNIMOD_SEQ")]
    pub seq: bool,

    /// Search dimension (3 is exploratory, no formula comparison)
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3), env = "UNIMOD_N")]
    pub n: u8,

    /// Record wall-clock timings in reports (breaks byte-identical output)
    #[arg(long, global = true, env = "UNIMOD_TIMINGS")]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ring invariants: sizes, characteristic, canonical non-square
    RingInfo(RingArgs),
    /// Canonical form of a symmetric matrix, with the transform P
    Canon(FormArgs),
    /// Exact maximum unimodular orthogonal set
    Search(FormArgs),
    /// Compare brute force with the closed form on every catalog ring
    Verify,
    /// List every maximum orthogonal set with its family
    Enumerate(FormArgs),
}

#[derive(Debug, Args)]
pub struct RingArgs {
    /// Ring literal, e.g. 'kind=Zps p=3 s=2'; defaults to every ring in --config
    #[arg(long, env = "UNIMOD_RING")]
    pub ring: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlaneArg {
    Hyperbolic,
    Nonsquare,
}

#[derive(Debug, Args)]
pub struct FormArgs {
    #[command(flatten)]
    pub ring: RingArgs,

    /// Matrix literal, rows separated by ';', e.g. '0,1;1,0'
    #[arg(long, env = "UNIMOD_MATRIX", conflicts_with = "form")]
    pub matrix: Option<String>,

    /// Canonical form to use instead of --matrix (default: both)
    #[arg(long, value_enum)]
    pub form: Option<PlaneArg>,
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&cli, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::RingInfo(args) => cmd_ring_info(cli, args, out),
        Command::Canon(args) => cmd_canon(cli, args, out),
        Command::Search(args) => cmd_search(cli, args, out),
        Command::Verify => cmd_verify(cli, out, err),
        Command::Enumerate(args) => cmd_enumerate(cli, args, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e.root() {
        Error::Timeout { .. } => EXIT_TIMEOUT,
        _ => EXIT_INPUT,
    }
}

struct Settings {
    config: Option<CatalogConfig>,
    bounds: Bounds,
    format: Format,
    out: Option<PathBuf>,
    options: SearchOptions,
}

fn settings(cli: &Cli) -> Result<Settings> {
    let g = &cli.global;
    let config = match &g.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
                line: 0,
                column: 0,
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            Some(parse_config(&text)?)
        }
        None => None,
    };
    let from_config = config.as_ref();
    let bounds = Bounds {
        max_card: g
            .max_card
            .or_else(|| from_config.filter(|c| c.explicit.max_card).map(|c| c.bounds.max_card))
            .unwrap_or_else(|| Bounds::default().max_card),
        timeout: g
            .timeout
            .map(Duration::from_secs)
            .or_else(|| from_config.filter(|c| c.explicit.timeout).map(|c| c.bounds.timeout))
            .unwrap_or_else(|| Bounds::default().timeout),
    };
    let format = g
        .format
        .or_else(|| from_config.filter(|c| c.explicit.format).map(|c| c.output.format))
        .unwrap_or_default();
    let out = g.out.clone().or_else(|| from_config.and_then(|c| c.output.out.clone()));
    Ok(Settings {
        options: SearchOptions {
            timeout: bounds.timeout,
            parallel: !g.seq,
        },
        config,
        bounds,
        format,
        out,
    })
}

/// Rings named by `--ring`, else by `--config`.
fn selected_rings(settings: &Settings, ring: &RingArgs, max_card: u64) -> Result<Vec<LocalRing>> {
    if let Some(lit) = &ring.ring {
        let spec = parse_ring_literal(lit)?;
        return Ok(vec![LocalRing::with_bound(&spec, max_card)?]);
    }
    match &settings.config {
        Some(cfg) => CatalogConfig {
            bounds: Bounds { max_card, ..cfg.bounds },
            ..cfg.clone()
        }
        .build_rings(),
        None => Err(Error::InvalidSpec("no ring given: pass --ring or --config".into())),
    }
}

fn emit(out: &mut dyn Write, settings: &Settings, json: &impl Serialize, text: &str) -> Result<()> {
    let bytes = match settings.format {
        Format::Json => {
            let mut b = serde_json::to_vec_pretty(json).map_err(|e| Error::Internal(e.to_string()))?;
            b.push(b'\n');
            b
        }
        Format::Csv => text.as_bytes().to_vec(),
    };
    deliver(out, settings, &bytes)
}

fn deliver(out: &mut dyn Write, settings: &Settings, bytes: &[u8]) -> Result<()> {
    match &settings.out {
        Some(path) => report::write_atomic(path, bytes)
            .map_err(|e| Error::Internal(format!("cannot write {}: {e}", path.display()))),
        None => out
            .write_all(bytes)
            .map_err(|e| Error::Internal(format!("cannot write output: {e}"))),
    }
}

#[derive(Debug, Serialize)]
pub struct RingInfo {
    pub ring: String,
    pub spec: String,
    pub cardinality: u64,
    pub maximal_ideal_size: u64,
    pub characteristic: u64,
    pub residue_field_order: u64,
    pub canonical_nonsquare: String,
    pub unit_squares: usize,
}

pub fn ring_info(ring: &LocalRing) -> Result<RingInfo> {
    Ok(RingInfo {
        ring: ring.label().to_owned(),
        spec: ring.spec().to_literal(),
        cardinality: ring.cardinality(),
        maximal_ideal_size: ring.maximal_ideal_size(),
        characteristic: ring.characteristic(),
        residue_field_order: ring.residue_field_order(),
        canonical_nonsquare: ring.render(ring.canonical_nonsquare()),
        unit_squares: ring.unit_squares()?.len(),
    })
}

fn cmd_ring_info(cli: &Cli, args: &RingArgs, out: &mut dyn Write) -> Result<i32> {
    let settings = settings(cli)?;
    let rings = selected_rings(&settings, args, settings.bounds.max_card)?;
    let infos = rings.iter().map(ring_info).collect::<Result<Vec<_>>>()?;
    let mut text = String::new();
    for info in &infos {
        text.push_str(&format!(
            "ring: {}\nspec: {}\n|R|: {}\n|M|: {}\ncharacteristic: {}\nresidue field order: {}\ncanonical non-square: {}\nunit squares: {}\n\n",
            info.ring,
            info.spec,
            info.cardinality,
            info.maximal_ideal_size,
            info.characteristic,
            info.residue_field_order,
            info.canonical_nonsquare,
            info.unit_squares
        ));
    }
    emit(out, &settings, &infos, text.trim_end_matches('\n'))?;
    if settings.format == Format::Csv && settings.out.is_none() {
        let _ = writeln!(out);
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct CanonReport {
    pub ring: String,
    pub matrix: String,
    pub det: String,
    pub det_class: SquareTag,
    pub disc_class: SquareTag,
    pub u: String,
    pub canonical: String,
    pub transform: String,
    pub verified: bool,
}

pub fn canon_report(form: &BilinearForm) -> Result<CanonReport> {
    let ring = form.ring();
    let (p, canonical) = form.canonicalize()?;
    let target = canonical.form(ring);
    let verified = form.transform(&p)? == target && ring.is_unit(p.determinant());
    Ok(CanonReport {
        ring: ring.label().to_owned(),
        matrix: form.render(),
        det: ring.render(form.determinant()),
        det_class: form.determinant_class()?.tag,
        disc_class: form.discriminant_class()?.tag,
        u: ring.render(canonical.u),
        canonical: target.render(),
        transform: p.render(),
        verified,
    })
}

fn single_ring(settings: &Settings, args: &RingArgs, max_card: u64) -> Result<LocalRing> {
    let mut rings = selected_rings(settings, args, max_card)?;
    if rings.len() != 1 {
        return Err(Error::InvalidSpec(format!(
            "this command takes exactly one ring, the config has {}",
            rings.len()
        )));
    }
    Ok(rings.remove(0))
}

/// The forms a command should run on: the literal, one canonical plane, or both.
fn forms_for(ring: &LocalRing, args: &FormArgs, n: usize) -> Result<Vec<(String, BilinearForm)>> {
    if let Some(lit) = &args.matrix {
        let form = BilinearForm::parse(ring, lit)?;
        return Ok(vec![(form.render(), form)]);
    }
    let z = ring.canonical_nonsquare();
    let (hyper, ns) = if n == 2 {
        (
            ("hyperbolic".to_owned(), PlaneKind::Hyperbolic.form(ring)),
            ("nonsquare".to_owned(), PlaneKind::Nonsquare.form(ring)),
        )
    } else {
        (
            ("u=1".to_owned(), CanonicalForm::new(n, ring.one()).form(ring)),
            (format!("u={}", ring.render(z)), CanonicalForm::new(n, z).form(ring)),
        )
    };
    Ok(match args.form {
        Some(PlaneArg::Hyperbolic) => vec![hyper],
        Some(PlaneArg::Nonsquare) => vec![ns],
        None => vec![hyper, ns],
    })
}

fn cmd_canon(cli: &Cli, args: &FormArgs, out: &mut dyn Write) -> Result<i32> {
    let settings = settings(cli)?;
    let ring = single_ring(&settings, &args.ring, settings.bounds.max_card)?;
    let lit = args
        .matrix
        .as_deref()
        .ok_or_else(|| Error::InvalidSpec("canon needs --matrix".into()))?;
    let form = BilinearForm::parse(&ring, lit)?;
    let rep = canon_report(&form)?;
    let text = format!(
        "ring: {}\nB: {}\ndet: {} ({})\ndiscriminant class: {}\nu: {}\nC: {}\nP: {}\nP^T B P = C: {}\n",
        rep.ring,
        rep.matrix,
        rep.det,
        rep.det_class,
        rep.disc_class,
        rep.u,
        rep.canonical,
        rep.transform,
        if rep.verified { "verified" } else { "FAILED" }
    );
    emit(out, &settings, &rep, &text)?;
    Ok(if rep.verified { EXIT_OK } else { EXIT_MISMATCH })
}

#[derive(Debug, Serialize)]
pub struct SearchReport {
    pub ring: String,
    pub form: String,
    pub n: usize,
    pub max_size: usize,
    /// Closed-form prediction, only for n = 2.
    pub theoretical_s: Option<u64>,
    pub witness: String,
    pub node_count: u64,
    pub elapsed_ms: Option<u128>,
}

fn cmd_search(cli: &Cli, args: &FormArgs, out: &mut dyn Write) -> Result<i32> {
    let settings = settings(cli)?;
    let n = usize::from(cli.global.n);
    let ring = single_ring(&settings, &args.ring, settings.bounds.max_card)?;
    let mut reports = Vec::new();
    for (label, form) in forms_for(&ring, args, n)? {
        let found = max_orthogonal_set(&form, &settings.options)?;
        let theoretical_s = if form.dim() == 2 {
            Some(orthoset::theoretical_s(&form)?)
        } else {
            None
        };
        reports.push(SearchReport {
            ring: ring.label().to_owned(),
            form: label,
            n: form.dim(),
            max_size: found.max_size,
            theoretical_s,
            witness: found.witness.render(),
            node_count: found.node_count,
            elapsed_ms: cli.global.timings.then_some(found.elapsed.as_millis()),
        });
    }
    let mut text = String::new();
    for r in &reports {
        text.push_str(&format!(
            "ring: {}\nform: {}\nn: {}\nmax size: {}\n",
            r.ring, r.form, r.n, r.max_size
        ));
        if let Some(t) = r.theoretical_s {
            text.push_str(&format!("closed form: {t}\n"));
        }
        text.push_str(&format!("witness: {}\nnodes: {}\n", r.witness, r.node_count));
        if let Some(ms) = r.elapsed_ms {
            text.push_str(&format!("elapsed ms: {ms}\n"));
        }
        text.push('\n');
    }
    emit(out, &settings, &reports, &text)?;
    Ok(EXIT_OK)
}

/// Runs every catalog ring and returns the ordered report.
pub fn verify_catalog(rings: &[LocalRing], options: &SearchOptions) -> Result<VerificationReport> {
    let run = |ring: &LocalRing| orthoset::verify_theorem(ring, options);
    let reports: Vec<Result<VerificationReport>> = if options.parallel {
        rings.par_iter().map(run).collect()
    } else {
        rings.iter().map(run).collect()
    };
    let mut rows = Vec::new();
    for r in reports {
        rows.extend(r?.rows);
    }
    let mut report = VerificationReport { rows };
    report::order_rows(&mut report);
    Ok(report)
}

fn cmd_verify(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if cli.global.n != 2 {
        return Err(Error::UnsupportedDimension(usize::from(cli.global.n)));
    }
    let mut settings = settings(cli)?;
    if settings.config.is_none() {
        settings.config = Some(parse_config(config::DEFAULT_CATALOG)?);
    }
    let rings = CatalogConfig {
        bounds: settings.bounds,
        ..settings.config.clone().expect("catalog loaded")
    }
    .build_rings()?;
    let report = verify_catalog(&rings, &settings.options)?;
    let bytes = report::render(&report, settings.format, cli.global.timings)?;
    deliver(out, &settings, &bytes)?;
    let matched = report.rows.iter().filter(|r| r.matches).count();
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    let _ = writeln!(err, "{verdict}: {matched}/{} rows match", report.rows.len());
    Ok(if report.passed() { EXIT_OK } else { EXIT_MISMATCH })
}

#[derive(Debug, Serialize)]
pub struct EnumeratedSet {
    pub form: String,
    pub set: String,
    pub size: usize,
    pub family: &'static str,
}

pub fn enumerate_report(label: &str, form: &BilinearForm, options: &SearchOptions) -> Result<Vec<EnumeratedSet>> {
    enumerate_maximum_sets(form, options)?
        .iter()
        .map(|s: &OrthogonalSet| {
            Ok(EnumeratedSet {
                form: label.to_owned(),
                set: s.render(),
                size: s.len(),
                family: classify_family(s)?.tag(),
            })
        })
        .collect()
}

fn cmd_enumerate(cli: &Cli, args: &FormArgs, out: &mut dyn Write) -> Result<i32> {
    let settings = settings(cli)?;
    let ring = single_ring(&settings, &args.ring, settings.bounds.max_card)?;
    let limit = cli.global.max_card.unwrap_or(ENUMERATE_RING_LIMIT);
    if ring.cardinality() > limit {
        return Err(Error::TooLarge {
            what: format!("ring {} for enumeration", ring.label()),
            size: u128::from(ring.cardinality()),
            bound: limit,
        });
    }
    let mut sets = Vec::new();
    for (label, form) in forms_for(&ring, args, 2)? {
        sets.extend(enumerate_report(&label, &form, &settings.options)?);
    }
    let mut text = String::new();
    for s in &sets {
        text.push_str(&format!("{} {} {} {}\n", s.form, s.size, s.family, s.set));
    }
    emit(out, &settings, &sets, &text)?;
    Ok(EXIT_OK)
}

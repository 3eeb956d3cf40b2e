use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lineable::builder::{
    build_finite_type, build_intersection, build_multilinear, build_through_point, build_zero_space, verify_certificate,
    BuildConfig, Certificate,
};
use lineable::scalars::{find_exact_roots, Field};
use lineable::spaces::SeedSpace;
use lineable::zerofind::binary_slice;

use crate::fixtures::{generate, FixtureKind, FixtureParams};
use crate::input::{read_certificate, read_config, read_poly, read_seed, read_vector, write_text, PolyInput};
use crate::{CliError, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "lineable", version, about = "Certified subspaces inside zero sets of homogeneous polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extend a seed to a larger subspace of the zero set and write a certificate.
    Build(BuildArgs),
    /// Re-check a certificate from scratch.
    Verify(VerifyArgs),
    /// Write a fixture polynomial.
    Gen(GenArgs),
    /// Print the binary slice t ↦ P(u + t·v) and its first exact root.
    Slice(SliceArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Polynomial file; repeat for a common zero space of several polynomials.
    #[arg(long = "poly", required = true)]
    pub polys: Vec<PathBuf>,
    /// JSON list of seed vectors.
    #[arg(long)]
    pub seed: Option<PathBuf>,
    /// A single zero to build through, instead of a seed.
    #[arg(long, conflicts_with = "seed")]
    pub point: Option<PathBuf>,
    /// Slot (1-based) that receives the vectors of a multilinear form.
    #[arg(long)]
    pub slot: Option<usize>,
    /// Number of vectors to add.
    #[arg(long, default_value_t = 5)]
    pub count: usize,
    /// Certificate path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for sampled verification.
    #[arg(long)]
    pub rng: Option<u64>,
    /// Relative tolerance for approximate steps; 0 allows exact steps only.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub cert: PathBuf,
    /// Print the full report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// complex-sparse, seeded, finite-type-real, positive-definite-real-tail or multilinear.
    #[arg(long)]
    pub kind: String,
    /// Seed dimension (seeded).
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Degree, or arity of a multilinear form.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    #[arg(long, default_value_t = 6)]
    pub vars: usize,
    #[arg(long, default_value_t = 4)]
    pub terms: usize,
    #[arg(long, default_value_t = 0)]
    pub rng: u64,
    /// Add a shift-invariant tail of powers past --vars (complex-sparse, seeded).
    #[arg(long)]
    pub tail: bool,
    /// Field for the tail fixture: rational or gaussian_rational.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the seed basis of a seeded fixture.
    #[arg(long)]
    pub seed_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[arg(long)]
    pub poly: PathBuf,
    #[arg(long)]
    pub u: PathBuf,
    #[arg(long)]
    pub v: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Build(a) => cmd_build(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Slice(a) => cmd_slice(a, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
}

fn load_config(path: Option<&PathBuf>) -> Result<BuildConfig, CliError> {
    path.map(|p| read_config(p)).transpose().map(Option::unwrap_or_default)
}

/// Runs the construction selected by the inputs.
pub fn build(a: &BuildArgs) -> Result<Certificate, CliError> {
    let mut config = load_config(a.config.as_ref())?;
    if let Some(r) = a.rng {
        config.rng_seed = r;
    }
    if let Some(t) = a.tolerance {
        config.tolerance = t;
    }
    config.validate().map_err(CliError::Usage)?;
    let polys = a.polys.iter().map(|p| read_poly(p)).collect::<Result<Vec<_>, _>>()?;
    let seed = a.seed.as_ref().map(|p| read_seed(p)).transpose()?.unwrap_or_else(SeedSpace::empty);
    if a.slot == Some(0) {
        return Err(CliError::Usage("--slot is 1-based".into()));
    }
    if let [PolyInput::Multilinear(form)] = polys.as_slice() {
        if a.point.is_some() || !seed.is_empty() {
            return Err(CliError::Usage("multilinear builds take no seed or point".into()));
        }
        return Ok(build_multilinear(form, a.slot.map(|s| s - 1), a.count, &config)?);
    }
    if a.slot.is_some() {
        return Err(CliError::Usage("--slot applies to multilinear forms only".into()));
    }
    let homs = polys
        .iter()
        .map(|p| p.to_hompoly().ok_or_else(|| CliError::Usage("multilinear forms cannot be intersected".into())))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(point) = &a.point {
        if homs.len() > 1 {
            return Err(CliError::Usage("--point takes a single polynomial".into()));
        }
        return Ok(build_through_point(&homs[0], &read_vector(point)?, a.count, &config)?);
    }
    Ok(match polys.as_slice() {
        [PolyInput::FiniteType(f)] => build_finite_type(f, &seed, a.count, &config)?,
        [PolyInput::Hom(p)] => build_zero_space(p, &seed, a.count, &config)?,
        _ => build_intersection(&homs, &seed, a.count, &config)?,
    })
}

pub fn cmd_build(a: &BuildArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cert = build(a)?;
    let text = cert.to_json();
    match &a.out {
        Some(path) => {
            write_text(path, &text)?;
            let level = if cert.exact { "exact" } else { "approximate" };
            emit(out, &format!("{} vectors ({level}) written to {}", cert.produced.len(), path.display()))?;
        }
        None => emit(out, &text)?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cert = read_certificate(&a.cert)?;
    let report = verify_certificate(&cert);
    if a.json {
        emit(out, &serde_json::to_string_pretty(&report).expect("report serializes"))?;
    } else if report.is_ok() {
        emit(out, "ok")?;
    } else {
        for f in &report.failures {
            emit(out, &format!("FAIL {}: {}", f.name, f.detail))?;
        }
    }
    if report.is_ok() {
        Ok(EXIT_OK)
    } else {
        Err(CliError::Rejected(report))
    }
}

pub fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let kind: FixtureKind = a.kind.parse()?;
    let field = match a.field.as_deref() {
        None => None,
        Some("rational") => Some(Field::Rational),
        Some("gaussian_rational") => Some(Field::GaussianRational),
        Some(other) => return Err(CliError::Usage(format!("unknown field {other:?}"))),
    };
    let params = FixtureParams { n: a.n, m: a.m, vars: a.vars, terms: a.terms, rng: a.rng, tail: a.tail };
    let fixture = generate(kind, &params, field)?;
    match &a.out {
        Some(path) => write_text(path, &fixture.to_json())?,
        None => emit(out, &fixture.to_json())?,
    }
    if let Some(path) = &a.seed_out {
        write_text(path, &serde_json::to_string_pretty(&fixture.seed()).expect("seed serializes"))?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_slice(a: &SliceArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let config = load_config(a.config.as_ref())?;
    let p = read_poly(&a.poly)?
        .to_hompoly()
        .ok_or_else(|| CliError::Usage("slices need a homogeneous polynomial".into()))?;
    let mut report = binary_slice(&p, &read_vector(&a.u)?, &read_vector(&a.v)?)?;
    if report.exact && !report.coefficients.is_zero() {
        report.root = find_exact_roots(&report.coefficients, &config.zero_find().root_search)?.into_iter().next();
    }
    emit(out, &serde_json::to_string_pretty(&report).expect("slice serializes"))?;
    Ok(EXIT_OK)
}

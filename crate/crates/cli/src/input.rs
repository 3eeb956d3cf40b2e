//! Reading polynomial, vector, seed, config and certificate files.

use std::fs;
use std::path::Path;

use lineable::builder::{BuildConfig, Certificate};
use lineable::polynomials::{FiniteTypePoly, HomPoly, MultilinearForm, SparseVector};
use lineable::spaces::SeedSpace;
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::CliError;

/// Contents of a `--poly` file.
#[derive(Clone, Debug)]
pub enum PolyInput {
    Hom(HomPoly),
    FiniteType(FiniteTypePoly),
    Multilinear(MultilinearForm),
}

impl PolyInput {
    /// The polynomial as a plain homogeneous polynomial, if it is one.
    pub fn to_hompoly(&self) -> Option<HomPoly> {
        match self {
            PolyInput::Hom(p) => Some(p.clone()),
            PolyInput::FiniteType(f) => Some(f.to_hompoly()),
            PolyInput::Multilinear(_) => None,
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn parse_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Parse { path: path.to_path_buf(), message: e.to_string() }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(path)?).map_err(|e| parse_error(path, e))
}

/// Tells the three polynomial schemas apart by their keys: multilinear
/// forms carry `arity`, finite-type terms carry `functional`.
pub fn parse_poly(text: &str, path: &Path) -> Result<PolyInput, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| parse_error(path, e))?;
    let finite_type = value
        .get("terms")
        .and_then(Value::as_array)
        .and_then(|t| t.first())
        .is_some_and(|t| t.get("functional").is_some());
    let parsed = if value.get("arity").is_some() {
        serde_json::from_value(value).map(PolyInput::Multilinear)
    } else if finite_type {
        serde_json::from_value(value).map(PolyInput::FiniteType)
    } else {
        serde_json::from_value(value).map(PolyInput::Hom)
    };
    parsed.map_err(|e| parse_error(path, e))
}

pub fn read_poly(path: &Path) -> Result<PolyInput, CliError> {
    parse_poly(&read_text(path)?, path)
}

pub fn read_vector(path: &Path) -> Result<SparseVector, CliError> {
    read_json(path)
}

/// A seed file is a JSON list of vectors.
pub fn read_seed(path: &Path) -> Result<SeedSpace, CliError> {
    let basis: Vec<SparseVector> = read_json(path)?;
    Ok(SeedSpace::new(basis)?)
}

pub fn read_config(path: &Path) -> Result<BuildConfig, CliError> {
    let config: BuildConfig = read_json(path)?;
    config.validate().map_err(|e| parse_error(path, e))?;
    Ok(config)
}

pub fn read_certificate(path: &Path) -> Result<Certificate, CliError> {
    read_json(path)
}

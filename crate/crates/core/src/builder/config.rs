use serde::{Deserialize, Serialize};

use crate::scalars::{RootSearch, Tolerance};
use crate::spaces::StreamLimits;
use crate::zerofind::ZeroFindConfig;

/// Settings for a construction and for verifying its certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BuildConfig {
    /// Relative tolerance for approximate results; 0 forbids them.
    pub tolerance: f64,
    /// Residual bound for approximate slice roots.
    pub root_tolerance: f64,
    /// Distinct slice pairs tried for an exact root.
    pub pair_budget: usize,
    pub divisor_bound: u64,
    pub max_iterations: usize,
    /// Slices examined before a real polynomial is declared unworkable.
    pub probe_pairs: usize,
    pub max_index: usize,
    /// Bound on nested vanishing constructions.
    pub max_depth: usize,
    pub check_independence: bool,
    /// Largest polarization table checked in full; larger spans are sampled.
    pub full_table_threshold: u64,
    pub sample_count: usize,
    pub rng_seed: u64,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            root_tolerance: 1e-12,
            pair_budget: 8,
            divisor_bound: 1_000_000,
            max_iterations: 200,
            probe_pairs: 5,
            max_index: 1_000_000,
            max_depth: 16,
            check_independence: false,
            full_table_threshold: 10_000,
            sample_count: 100,
            rng_seed: 0,
        }
    }
}

impl BuildConfig {
    pub fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.tolerance)
    }

    pub fn limits(&self) -> StreamLimits {
        StreamLimits { max_index: self.max_index, check_independence: self.check_independence }
    }

    pub fn zero_find(&self) -> ZeroFindConfig {
        ZeroFindConfig {
            pair_budget: self.pair_budget,
            tolerance: self.tolerance(),
            root_tolerance: Tolerance::new(self.root_tolerance),
            root_search: RootSearch { divisor_bound: self.divisor_bound },
            max_iterations: self.max_iterations,
        }
    }

    /// Rejects non-positive bounds and negative tolerances.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err("tolerance must be a finite nonnegative number".into());
        }
        if !(self.root_tolerance > 0.0 && self.root_tolerance.is_finite()) {
            return Err("root_tolerance must be positive".into());
        }
        let bounds = [
            ("pair_budget", self.pair_budget as u64),
            ("divisor_bound", self.divisor_bound),
            ("max_iterations", self.max_iterations as u64),
            ("probe_pairs", self.probe_pairs as u64),
            ("max_index", self.max_index as u64),
            ("max_depth", self.max_depth as u64),
            ("full_table_threshold", self.full_table_threshold),
            ("sample_count", self.sample_count as u64),
        ];
        for (name, value) in bounds {
            if value == 0 {
                return Err(format!("{name} must be positive"));
            }
        }
        Ok(())
    }
}

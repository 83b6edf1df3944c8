//! The pinned default fidelity convention.
//!
//! `cnot-cavity-sim conventions --pin <path>` writes this file from a search
//! run; the copy checked in at `crates/core/defaults.toml` is compiled in and
//! used whenever no `--convention` or `--defaults` is given.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::{ConventionScore, FidelityConvention, Measure};

const EMBEDDED: &str = include_str!("../defaults.toml");

const HEADER: &str = "# Generated by `cnot-cavity-sim conventions --pin`. Regenerate rather than edit.\n";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinnedDefaults {
    pub convention: String,
    pub value: f64,
    pub target: f64,
    pub tol: f64,
    pub ks_ratio: f64,
    pub g_ratio: f64,
    pub rho_ratio: f64,
    pub f_uc: f64,
    pub quadrature_points: usize,
}

impl PinnedDefaults {
    pub fn embedded() -> Self {
        Self::parse(EMBEDDED).expect("embedded defaults.toml is valid")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let pinned: Self = toml::from_str(text).map_err(|e| Error::Defaults(e.to_string()))?;
        pinned.convention()?;
        Ok(pinned)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        let body = toml::to_string(self).expect("plain struct serializes");
        format!("{HEADER}{body}")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_toml()).map_err(|e| Error::io(path, e))
    }

    pub fn convention(&self) -> Result<FidelityConvention> {
        self.convention.parse()
    }
}

/// The convention to pin from a ranked search: the closest flagged one whose
/// input measure is `measure`.
pub fn select_pin(scores: &[ConventionScore], measure: Measure) -> Option<ConventionScore> {
    scores
        .iter()
        .find(|s| s.flagged && s.convention.measure == measure)
        .copied()
}

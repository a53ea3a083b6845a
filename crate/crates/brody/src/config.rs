//! Run configuration, serialized into every output record.

use brody_core::energy::EnergyOptions;
use brody_core::quadrature::QuadOptions;
use serde::{Deserialize, Serialize};

/// Overrides of the quadrature defaults; unset fields keep the library values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell: Option<f64>,
}

impl QuadOverrides {
    pub fn energy_options(&self) -> EnergyOptions {
        let d = EnergyOptions::default();
        EnergyOptions {
            quad: QuadOptions {
                order: self.order.unwrap_or(d.quad.order),
                rel_tol: self.rel_tol.unwrap_or(d.quad.rel_tol),
                abs_tol: self.abs_tol.unwrap_or(d.quad.abs_tol),
                max_depth: self.max_depth.unwrap_or(d.quad.max_depth),
            },
            cell: self.cell.unwrap_or(d.cell),
            ..d
        }
    }
}

/// Everything that determines a run's output.
///
/// The thread count is deliberately not serialized: results are identical
/// for every pool size, and records must be byte-identical across them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    /// Command flags as given.
    pub args: serde_json::Value,
    pub quad: QuadOverrides,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(command: &str, args: serde_json::Value) -> Self {
        Self {
            command: command.to_string(),
            args,
            quad: QuadOverrides::default(),
            seed: 0,
            output: None,
            csv: None,
            threads: None,
        }
    }
}

use std::path::Path;

use clap::ValueEnum;
use serde::Deserialize;

use curvimom::quadrature::QuadratureConfig;
use curvimom::states::PhysicalConstants;

use crate::Failure;

/// Smallest quadrature order accepted on any axis.
pub const MIN_ORDER: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Atomic,
    Si,
}

impl Units {
    pub fn label(self) -> &'static str {
        match self {
            Units::Atomic => "atomic",
            Units::Si => "si",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantsFile {
    hbar: f64,
    m: f64,
    e2: f64,
}

/// Reads `{"hbar": …, "m": …, "e2": …}`.
pub fn load_si_constants(path: &Path) -> Result<PhysicalConstants, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let file: ConstantsFile = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("bad constants file {}: {e}", path.display())))?;
    Ok(PhysicalConstants::new(file.hbar, file.m, file.e2)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub units: Units,
    pub quadrature: QuadratureConfig,
    /// `None` lets each command pick its natural format.
    pub format: Option<Format>,
    pub seed: u64,
    pub constants: PhysicalConstants,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            units: Units::Atomic,
            quadrature: QuadratureConfig::default(),
            format: None,
            seed: 0,
            constants: PhysicalConstants::atomic(),
        }
    }
}

impl RunConfig {
    pub fn new(
        units: Units,
        quadrature: QuadratureConfig,
        format: Option<Format>,
        seed: u64,
        si_constants: Option<&Path>,
    ) -> Result<Self, Failure> {
        for (flag, order) in [
            ("--radial-order", quadrature.radial_order),
            ("--theta-order", quadrature.theta_order),
            ("--phi-order", quadrature.phi_order),
        ] {
            if order < MIN_ORDER {
                return Err(Failure::usage(format!("{flag} must be at least {MIN_ORDER}, got {order}")));
            }
        }
        let constants = match (units, si_constants) {
            (Units::Atomic, None) => PhysicalConstants::atomic(),
            (Units::Atomic, Some(_)) => {
                return Err(Failure::usage("--si-constants only applies with --units si"))
            }
            (Units::Si, Some(path)) => load_si_constants(path)?,
            (Units::Si, None) => {
                return Err(Failure::usage("--units si needs --si-constants <path>"))
            }
        };
        Ok(Self {
            units,
            quadrature,
            format,
            seed,
            constants,
        })
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

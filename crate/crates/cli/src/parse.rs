//! Compact spec strings: `canonical:r`, `naive:theta`, `hydrogen:n=2,L=1,M=0`,
//! `trial:seed=42,system=cylindrical`.

use std::fmt;
use std::str::FromStr;

use curvimom::geometry::CoordinateSystem;
use curvimom::operators::{canonical_momentum, naive_momentum, MomentumOperator};
use curvimom::specfun::QuantumNumbers;
use curvimom::states::{hydrogen_state, random_bound_trial, PhysicalConstants, SeparableState};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Canonical,
    Naive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub axis: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateSpec {
    Hydrogen(QuantumNumbers),
    /// `seed: None` falls back to the run's `--seed`.
    Trial { seed: Option<u64>, system: String },
}

fn split_head(s: &str) -> Result<(&str, &str), Failure> {
    s.split_once(':')
        .ok_or_else(|| Failure::usage(format!("expected `<kind>:<body>`, got `{s}`")))
}

fn pairs(body: &str) -> Result<Vec<(&str, &str)>, Failure> {
    let mut out: Vec<(&str, &str)> = Vec::new();
    for item in body.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("expected `key=value`, got `{item}`")))?;
        let (k, v) = (k.trim(), v.trim());
        if out.iter().any(|(seen, _)| seen.eq_ignore_ascii_case(k)) {
            return Err(Failure::usage(format!("duplicate key `{k}`")));
        }
        out.push((k, v));
    }
    Ok(out)
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T, Failure> {
    value
        .parse()
        .map_err(|_| Failure::usage(format!("`{key}` must be an integer, got `{value}`")))
}

impl FromStr for OperatorSpec {
    type Err = Failure;

    fn from_str(s: &str) -> Result<Self, Failure> {
        let (kind, axis) = split_head(s)?;
        let kind = match kind {
            "canonical" => OperatorKind::Canonical,
            "naive" => OperatorKind::Naive,
            other => {
                return Err(Failure::usage(format!(
                    "unknown operator kind `{other}` (expected canonical or naive)"
                )))
            }
        };
        if axis.is_empty() {
            return Err(Failure::usage("operator spec is missing a coordinate name"));
        }
        Ok(Self {
            kind,
            axis: axis.to_string(),
        })
    }
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            OperatorKind::Canonical => "canonical",
            OperatorKind::Naive => "naive",
        };
        write!(f, "{kind}:{}", self.axis)
    }
}

impl OperatorSpec {
    pub fn build(
        &self,
        system: &CoordinateSystem,
        constants: &PhysicalConstants,
    ) -> Result<MomentumOperator, Failure> {
        let axis = system.axis_index(&self.axis).ok_or_else(|| {
            let names: Vec<_> = system.coords.iter().map(|c| c.name.as_str()).collect();
            Failure::usage(format!(
                "coordinate `{}` is not in system `{}` (has {})",
                self.axis,
                system.name,
                names.join(", ")
            ))
        })?;
        Ok(match self.kind {
            OperatorKind::Canonical => canonical_momentum(system, axis, constants)?,
            OperatorKind::Naive => naive_momentum(system, axis, constants)?,
        })
    }
}

impl FromStr for StateSpec {
    type Err = Failure;

    fn from_str(s: &str) -> Result<Self, Failure> {
        let (kind, body) = split_head(s)?;
        let kv = pairs(body)?;
        match kind {
            "hydrogen" => {
                let (mut n, mut l, mut m) = (None, None, 0i32);
                for (k, v) in kv {
                    match k {
                        "n" => n = Some(number::<u32>(k, v)?),
                        "L" | "l" => l = Some(number::<u32>(k, v)?),
                        "M" | "m" => m = number::<i32>(k, v)?,
                        other => return Err(Failure::usage(format!("unknown hydrogen key `{other}`"))),
                    }
                }
                let n = n.ok_or_else(|| Failure::usage("hydrogen spec needs `n`"))?;
                let l = l.ok_or_else(|| Failure::usage("hydrogen spec needs `L`"))?;
                Ok(StateSpec::Hydrogen(QuantumNumbers::new(n, l, m)?))
            }
            "trial" => {
                let (mut seed, mut system) = (None, "spherical".to_string());
                for (k, v) in kv {
                    match k {
                        "seed" => seed = Some(number::<u64>(k, v)?),
                        "system" => system = v.to_string(),
                        other => return Err(Failure::usage(format!("unknown trial key `{other}`"))),
                    }
                }
                if CoordinateSystem::by_name(&system).is_none() {
                    return Err(Failure::usage(format!("unknown coordinate system `{system}`")));
                }
                Ok(StateSpec::Trial { seed, system })
            }
            other => Err(Failure::usage(format!(
                "unknown state kind `{other}` (expected hydrogen or trial)"
            ))),
        }
    }
}

impl StateSpec {
    pub fn build(&self, default_seed: u64, constants: &PhysicalConstants) -> Result<SeparableState, Failure> {
        match self {
            StateSpec::Hydrogen(qn) => Ok(hydrogen_state(*qn, constants)),
            StateSpec::Trial { seed, system } => {
                let system = CoordinateSystem::by_name(system)
                    .ok_or_else(|| Failure::usage(format!("unknown coordinate system `{system}`")))?;
                Ok(random_bound_trial(&system, seed.unwrap_or(default_seed), constants.a0())?)
            }
        }
    }
}

//! Orthogonal coordinate systems and their per-coordinate volume weights.
//!
//! Each coordinate carries a weight `w(q)`; the volume element is the
//! product of the weights. The measure factor of a coordinate is
//! `f = √w`, and its logarithmic derivative `g = f'/f = w'/(2w)` is the
//! drift term that turns `-iħ ∂_q` into the canonical momentum.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    NegInfinity,
    Finite(f64),
    PosInfinity,
}

impl Bound {
    pub fn value(self) -> f64 {
        match self {
            Bound::NegInfinity => f64::NEG_INFINITY,
            Bound::Finite(v) => v,
            Bound::PosInfinity => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Bound::Finite(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// Non-compact in both directions.
    Line,
    HalfLine,
    /// Finite range with the wavefunction periodic across it.
    CompactPeriodic,
    CompactNonperiodic,
}

impl Topology {
    pub fn is_compact(self) -> bool {
        matches!(self, Topology::CompactPeriodic | Topology::CompactNonperiodic)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordinateKind {
    Linear,
    Angular,
}

/// Per-coordinate factor of the volume element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", content = "power")]
pub enum WeightFn {
    /// `w = 1`
    Unit,
    /// `w = q^k`
    Power(u32),
    /// `w = sin q`
    Sine,
}

impl WeightFn {
    pub fn value(self, q: f64) -> f64 {
        match self {
            WeightFn::Unit => 1.0,
            WeightFn::Power(k) => q.powi(k as i32),
            WeightFn::Sine => q.sin(),
        }
    }

    pub fn derivative(self, q: f64) -> f64 {
        match self {
            WeightFn::Unit | WeightFn::Power(0) => 0.0,
            WeightFn::Power(k) => k as f64 * q.powi(k as i32 - 1),
            WeightFn::Sine => q.cos(),
        }
    }

    /// True when the weight does not depend on the coordinate.
    pub fn is_constant(self) -> bool {
        matches!(self, WeightFn::Unit | WeightFn::Power(0))
    }

    /// Short identifier used in serialized descriptions, e.g. `r^2`.
    pub fn identifier(self) -> String {
        match self {
            WeightFn::Unit => "1".to_string(),
            WeightFn::Power(k) => format!("q^{k}"),
            WeightFn::Sine => "sin q".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinateSpec {
    pub name: String,
    pub lower: Bound,
    pub upper: Bound,
    pub topology: Topology,
    pub weight: WeightFn,
    pub kind: CoordinateKind,
}

impl CoordinateSpec {
    pub fn new(
        name: &str,
        lower: Bound,
        upper: Bound,
        topology: Topology,
        weight: WeightFn,
        kind: CoordinateKind,
    ) -> Self {
        Self {
            name: name.to_string(),
            lower,
            upper,
            topology,
            weight,
            kind,
        }
    }

    /// Strict interior test. Periodic coordinates have no boundary.
    pub fn contains_interior(&self, q: f64) -> bool {
        if !q.is_finite() {
            return false;
        }
        if self.topology == Topology::CompactPeriodic {
            return true;
        }
        self.lower.value() < q && q < self.upper.value()
    }

    pub fn measure_factor(&self) -> MeasureFactor {
        measure_factor(self)
    }
}

/// `f(q) = √w(q)` together with its derivative and drift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureFactor {
    weight: WeightFn,
}

pub fn measure_factor(spec: &CoordinateSpec) -> MeasureFactor {
    MeasureFactor {
        weight: spec.weight,
    }
}

impl MeasureFactor {
    fn positive_weight(&self, q: f64) -> Result<f64> {
        let w = self.weight.value(q);
        if self.weight.is_constant() || (w > 0.0 && w.is_finite()) {
            Ok(w)
        } else {
            Err(Error::Singularity {
                coordinate: self.weight.identifier(),
                at: q,
            })
        }
    }

    pub fn value(&self, q: f64) -> Result<f64> {
        Ok(self.positive_weight(q)?.sqrt())
    }

    pub fn derivative(&self, q: f64) -> Result<f64> {
        let w = self.positive_weight(q)?;
        Ok(self.weight.derivative(q) / (2.0 * w.sqrt()))
    }

    /// `g(q) = f'(q)/f(q) = w'(q)/(2 w(q))`.
    pub fn drift(&self, q: f64) -> Result<f64> {
        self.positive_weight(q)?;
        Ok(match self.weight {
            WeightFn::Unit | WeightFn::Power(0) => 0.0,
            WeightFn::Power(k) => k as f64 / (2.0 * q),
            WeightFn::Sine => 0.5 / q.tan(),
        })
    }
}

/// Drift term of a momentum operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Drift {
    Zero,
    /// `w'/(2w)` of the given weight.
    Measure(WeightFn),
}

impl Drift {
    pub fn for_weight(weight: WeightFn) -> Self {
        if weight.is_constant() {
            Drift::Zero
        } else {
            Drift::Measure(weight)
        }
    }

    pub fn eval(&self, q: f64) -> Result<f64> {
        match self {
            Drift::Zero => Ok(0.0),
            Drift::Measure(w) => MeasureFactor { weight: *w }.drift(q),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinateSystem {
    pub name: String,
    pub coords: Vec<CoordinateSpec>,
}

impl CoordinateSystem {
    pub fn make_cartesian() -> Self {
        let axis = |name| {
            CoordinateSpec::new(
                name,
                Bound::NegInfinity,
                Bound::PosInfinity,
                Topology::Line,
                WeightFn::Unit,
                CoordinateKind::Linear,
            )
        };
        Self {
            name: "cartesian".into(),
            coords: vec![axis("x"), axis("y"), axis("z")],
        }
    }

    pub fn make_spherical() -> Self {
        Self {
            name: "spherical".into(),
            coords: vec![
                radial("r", WeightFn::Power(2)),
                CoordinateSpec::new(
                    "theta",
                    Bound::Finite(0.0),
                    Bound::Finite(PI),
                    Topology::CompactNonperiodic,
                    WeightFn::Sine,
                    CoordinateKind::Angular,
                ),
                azimuth(),
            ],
        }
    }

    pub fn make_cylindrical() -> Self {
        Self {
            name: "cylindrical".into(),
            coords: vec![
                radial("rho", WeightFn::Power(1)),
                azimuth(),
                CoordinateSpec::new(
                    "z",
                    Bound::NegInfinity,
                    Bound::PosInfinity,
                    Topology::Line,
                    WeightFn::Unit,
                    CoordinateKind::Linear,
                ),
            ],
        }
    }

    pub fn make_plane_polar() -> Self {
        Self {
            name: "plane_polar".into(),
            coords: vec![radial("r", WeightFn::Power(1)), azimuth()],
        }
    }

    /// All preset systems, in a fixed order.
    pub fn presets() -> Vec<Self> {
        vec![
            Self::make_cartesian(),
            Self::make_spherical(),
            Self::make_cylindrical(),
            Self::make_plane_polar(),
        ]
    }

    pub fn by_name(name: &str) -> Option<Self> {
        Self::presets().into_iter().find(|s| s.name == name)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn axis_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name == name)
    }

    /// Product of the per-coordinate weights, i.e. `√|g|`.
    pub fn volume_weight(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.dim() {
            return Err(Error::Configuration(format!(
                "point has {} components, system `{}` has {}",
                point.len(),
                self.name,
                self.dim()
            )));
        }
        Ok(self
            .coords
            .iter()
            .zip(point)
            .map(|(c, &q)| c.weight.value(q))
            .product())
    }
}

fn radial(name: &str, weight: WeightFn) -> CoordinateSpec {
    CoordinateSpec::new(
        name,
        Bound::Finite(0.0),
        Bound::PosInfinity,
        Topology::HalfLine,
        weight,
        CoordinateKind::Linear,
    )
}

fn azimuth() -> CoordinateSpec {
    CoordinateSpec::new(
        "phi",
        Bound::Finite(0.0),
        Bound::Finite(2.0 * PI),
        Topology::CompactPeriodic,
        WeightFn::Unit,
        CoordinateKind::Angular,
    )
}

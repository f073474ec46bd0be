//! Separable wavefunctions: one factor function per coordinate.
//!
//! Hydrogen eigenstates, the angular eigenfactors and the seeded trial
//! states used by the property checks all live here.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{CoordinateSystem, Drift, Topology, WeightFn};
use crate::quadrature::{integrate_separable, Integral, QuadratureConfig};
use crate::specfun::{
    assoc_laguerre, assoc_laguerre_deriv, assoc_legendre, assoc_legendre_deriv,
    assoc_legendre_dtheta, factorial_ratio, ln_factorial, QuantumNumbers,
};

/// Trial states vanish identically beyond this many length scales.
pub const TRUNCATION_SCALES: f64 = 40.0;

/// `ħ`, reduced mass `m` and squared charge `e²` (energy·length).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    hbar: f64,
    mass: f64,
    e2: f64,
    a0: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64, e2: f64) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("m", mass), ("e2", e2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("constant {name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            hbar,
            mass,
            e2,
            a0: hbar * hbar / (mass * e2),
        })
    }

    /// `ħ = m = e² = a₀ = 1`.
    pub fn atomic() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            e2: 1.0,
            a0: 1.0,
        }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn e2(&self) -> f64 {
        self.e2
    }

    /// Bohr radius `ħ²/(m e²)`.
    pub fn a0(&self) -> f64 {
        self.a0
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::atomic()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    FiniteDifference,
}

pub type ScalarFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Real polynomial in `u = q - center` times `exp(-a u²)`, zero for `|u| > cutoff`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyGaussian {
    pub coeffs: Vec<f64>,
    pub center: f64,
    pub exponent: f64,
    pub cutoff: f64,
}

impl PolyGaussian {
    fn eval(&self, q: f64) -> (f64, f64) {
        let u = q - self.center;
        if u.abs() > self.cutoff {
            return (0.0, 0.0);
        }
        let mut p = 0.0;
        let mut dp = 0.0;
        for &c in self.coeffs.iter().rev() {
            dp = dp * u + p;
            p = p * u + c;
        }
        let g = (-self.exponent * u * u).exp();
        (p * g, (dp - 2.0 * self.exponent * u * p) * g)
    }

    /// `∫ w(q) |value|² dq` in closed form for the weights the trial states use.
    fn norm_squared(&self, weight: WeightFn, half_line: bool) -> Result<f64> {
        let a2 = 2.0 * self.exponent;
        // ∫ u^k e^{-a2 u²} over (0, ∞) is Γ((k+1)/2) / (2 a2^{(k+1)/2})
        let half_moment = |k: u32| gamma_half(k + 1) / (2.0 * a2.powf((k + 1) as f64 / 2.0));
        let power = match (weight, half_line) {
            (WeightFn::Unit, false) => 0,
            (WeightFn::Power(p), true) => p,
            (WeightFn::Unit, true) => 0,
            _ => {
                return Err(Error::Unsupported(format!(
                    "closed-form trial normalization for weight {}",
                    weight.identifier()
                )))
            }
        };
        if half_line && self.center != 0.0 {
            return Err(Error::Unsupported("half-line trial profile off the origin".into()));
        }
        let mut total = 0.0;
        for (j, &cj) in self.coeffs.iter().enumerate() {
            for (k, &ck) in self.coeffs.iter().enumerate() {
                let deg = (j + k) as u32 + power;
                let m = if half_line {
                    half_moment(deg)
                } else if deg.is_multiple_of(2) {
                    2.0 * half_moment(deg)
                } else {
                    0.0
                };
                total += cj * ck * m;
            }
        }
        Ok(total)
    }
}

/// `Γ(k/2)` for positive integer `k`.
fn gamma_half(k: u32) -> f64 {
    let (mut v, mut x) = if k.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while 2.0 * x < k as f64 {
        v *= x;
        x += 1.0;
    }
    v
}

/// A one-variable complex function with a derivative.
#[derive(Clone)]
pub enum FactorFunction {
    Constant(Complex64),
    /// `N_r e^{-ρ/2} ρ^L L_{n-L-1}^{2L+1}(ρ)` with `ρ = 2r/(n a₀)`.
    HydrogenRadial {
        n: u32,
        l: u32,
        a0: f64,
        norm: f64,
    },
    /// `norm · P_L^M(cos θ)`.
    Theta {
        l: u32,
        m: i32,
        norm: f64,
    },
    /// `e^{iMφ}/√(2π)`.
    Phi {
        m: i32,
    },
    PolyGaussian {
        profile: PolyGaussian,
        norm: f64,
    },
    /// `Σ c_L Θ_{L,M}` over normalized polar eigenfactors with a shared order.
    ThetaSeries {
        m: i32,
        terms: Vec<(u32, f64)>,
    },
    /// `Σ a_M e^{iMφ}/√(2π)`.
    FourierSeries {
        terms: Vec<(i32, Complex64)>,
    },
    /// `envelope(q) · e^{ikq}`.
    Wave {
        envelope: Box<FactorFunction>,
        k: f64,
    },
    Scaled {
        inner: Box<FactorFunction>,
        factor: Complex64,
    },
    /// `q · inner(q)`.
    Position {
        inner: Box<FactorFunction>,
    },
    /// `-iħ(inner' + g·inner + c·inner)`: a momentum operator applied to a factor.
    Applied {
        inner: Box<FactorFunction>,
        drift: Drift,
        constant: f64,
        hbar: f64,
        /// Variation scale of `inner`; sets the finite-difference step of the derivative.
        scale: f64,
    },
    Custom {
        value: ScalarFn,
        derivative: Option<ScalarFn>,
    },
}

impl fmt::Debug for FactorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::HydrogenRadial { n, l, .. } => write!(f, "HydrogenRadial(n={n}, L={l})"),
            Self::Theta { l, m, .. } => write!(f, "Theta(L={l}, M={m})"),
            Self::Phi { m } => write!(f, "Phi(M={m})"),
            Self::PolyGaussian { profile, .. } => write!(f, "PolyGaussian({:?})", profile.coeffs),
            Self::ThetaSeries { m, terms } => write!(f, "ThetaSeries(M={m}, {terms:?})"),
            Self::FourierSeries { terms } => write!(f, "FourierSeries({terms:?})"),
            Self::Wave { envelope, k } => write!(f, "Wave({envelope:?}, k={k})"),
            Self::Scaled { inner, factor } => write!(f, "Scaled({inner:?}, {factor})"),
            Self::Position { inner } => write!(f, "Position({inner:?})"),
            Self::Applied { inner, drift, .. } => write!(f, "Applied({inner:?}, {drift:?})"),
            Self::Custom { derivative, .. } => {
                write!(f, "Custom(analytic derivative: {})", derivative.is_some())
            }
        }
    }
}

fn central_difference(f: impl Fn(f64) -> Complex64, q: f64, scale: f64) -> Complex64 {
    let h = f64::EPSILON.cbrt() * q.abs().max(scale);
    (f(q + h) - f(q - h)) / (2.0 * h)
}

const MINUS_I: Complex64 = Complex64 { re: 0.0, im: -1.0 };

impl FactorFunction {
    pub fn custom(
        value: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        derivative: Option<ScalarFn>,
    ) -> Self {
        Self::Custom {
            value: Arc::new(value),
            derivative,
        }
    }

    pub fn scaled(self, factor: Complex64) -> Self {
        Self::Scaled {
            inner: Box::new(self),
            factor,
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            Self::Applied { .. } | Self::Custom { derivative: None, .. } => {
                Provenance::FiniteDifference
            }
            Self::Wave { envelope, .. } => envelope.provenance(),
            Self::Scaled { inner, .. } | Self::Position { inner } => inner.provenance(),
            _ => Provenance::Analytic,
        }
    }

    pub fn value(&self, q: f64) -> Complex64 {
        match self {
            Self::Constant(c) => *c,
            Self::HydrogenRadial { n, l, a0, norm } => {
                Complex64::new(norm * hydrogen_radial(*n, *l, *a0, q).0, 0.0)
            }
            Self::Theta { l, m, norm } => {
                Complex64::new(norm * assoc_legendre(*l, *m, q.cos().clamp(-1.0, 1.0)).unwrap_or(f64::NAN), 0.0)
            }
            Self::Phi { m } => Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), *m as f64 * q),
            Self::PolyGaussian { profile, norm } => Complex64::new(norm * profile.eval(q).0, 0.0),
            Self::ThetaSeries { m, terms } => Complex64::new(
                terms
                    .iter()
                    .map(|&(l, c)| c * theta_norm(l, *m) * assoc_legendre(l, *m, q.cos().clamp(-1.0, 1.0)).unwrap_or(f64::NAN))
                    .sum(),
                0.0,
            ),
            Self::FourierSeries { terms } => terms
                .iter()
                .map(|&(m, a)| a * Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), m as f64 * q))
                .sum(),
            Self::Wave { envelope, k } => envelope.value(q) * Complex64::from_polar(1.0, k * q),
            Self::Scaled { inner, factor } => inner.value(q) * factor,
            Self::Position { inner } => inner.value(q) * q,
            Self::Applied {
                inner,
                drift,
                constant,
                hbar,
                ..
            } => {
                let g = drift.eval(q).unwrap_or(f64::NAN);
                let psi = inner.value(q);
                MINUS_I * *hbar * (inner.derivative(q) + psi * (g + constant))
            }
            Self::Custom { value, .. } => value(q),
        }
    }

    pub fn derivative(&self, q: f64) -> Complex64 {
        match self {
            Self::Constant(_) => Complex64::new(0.0, 0.0),
            Self::HydrogenRadial { n, l, a0, norm } => {
                Complex64::new(norm * hydrogen_radial(*n, *l, *a0, q).1, 0.0)
            }
            Self::Theta { l, m, norm } => Complex64::new(norm * theta_derivative(*l, *m, q), 0.0),
            Self::Phi { m } => {
                Complex64::new(0.0, *m as f64) * Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), *m as f64 * q)
            }
            Self::PolyGaussian { profile, norm } => Complex64::new(norm * profile.eval(q).1, 0.0),
            Self::ThetaSeries { m, terms } => Complex64::new(
                terms
                    .iter()
                    .map(|&(l, c)| c * theta_norm(l, *m) * theta_derivative(l, *m, q))
                    .sum(),
                0.0,
            ),
            Self::FourierSeries { terms } => terms
                .iter()
                .map(|&(m, a)| {
                    a * Complex64::new(0.0, m as f64)
                        * Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), m as f64 * q)
                })
                .sum(),
            Self::Wave { envelope, k } => {
                let phase = Complex64::from_polar(1.0, k * q);
                (envelope.derivative(q) + envelope.value(q) * Complex64::new(0.0, *k)) * phase
            }
            Self::Scaled { inner, factor } => inner.derivative(q) * factor,
            Self::Position { inner } => inner.value(q) + inner.derivative(q) * q,
            Self::Applied { scale, .. } => central_difference(|x| self.value(x), q, *scale),
            Self::Custom { value, derivative } => match derivative {
                Some(d) => d(q),
                None => central_difference(|x| value(x), q, 1.0),
            },
        }
    }
}

/// `dΘ/dθ` for `Θ = P_L^M(cos θ)`: chain rule in the interior, order ladder at the poles.
fn theta_derivative(l: u32, m: i32, theta: f64) -> f64 {
    let x = theta.cos();
    if x.abs() < 1.0 {
        if let Ok(d) = assoc_legendre_deriv(l, m, x) {
            return -theta.sin() * d;
        }
    }
    assoc_legendre_dtheta(l, m, theta).unwrap_or(f64::NAN)
}

/// Positive `N_θ` with `∫₀^π (N_θ P_L^M(cos θ))² sin θ dθ = 1`.
pub fn theta_norm(l: u32, m: i32) -> f64 {
    ((2 * l + 1) as f64 / 2.0 * factorial_ratio(l, m)).sqrt()
}

/// Unnormalized radial function and its derivative.
fn hydrogen_radial(n: u32, l: u32, a0: f64, r: f64) -> (f64, f64) {
    let k = n - l - 1;
    let a = 2 * l + 1;
    let scale = 2.0 / (n as f64 * a0);
    let rho = scale * r;
    let lag = assoc_laguerre(k, a, rho).unwrap_or(f64::NAN);
    let dlag = assoc_laguerre_deriv(k, a, rho).unwrap_or(f64::NAN);
    let e = (-0.5 * rho).exp();
    let rho_l = rho.powi(l as i32);
    let value = e * rho_l * lag;
    let dpow = if l == 0 {
        0.0
    } else {
        l as f64 * rho.powi(l as i32 - 1)
    };
    let drho = e * ((dpow - 0.5 * rho_l) * lag + rho_l * dlag);
    (value, scale * drho)
}

/// Radial normalization `[(2/(n a₀))³ (n-L-1)! / ((n+L)! 2n)]^{1/2}`.
pub fn radial_norm(n: u32, l: u32, a0: f64) -> f64 {
    let ln = 3.0 * (2.0 / (n as f64 * a0)).ln() + ln_factorial(n - l - 1)
        - ln_factorial(n + l)
        - (2.0 * n as f64).ln();
    (0.5 * ln).exp()
}

/// Product state `∏_i ψ_i(q_i)` over a coordinate system.
#[derive(Clone, Debug)]
pub struct SeparableState {
    system: CoordinateSystem,
    factors: Vec<FactorFunction>,
    quantum_numbers: Option<QuantumNumbers>,
    normalized: bool,
    length_scale: f64,
}

impl SeparableState {
    /// An unnormalized state. `length_scale` sets the quadrature maps on unbounded axes.
    pub fn new(
        system: CoordinateSystem,
        factors: Vec<FactorFunction>,
        length_scale: f64,
    ) -> Result<Self> {
        if factors.len() != system.dim() {
            return Err(Error::Configuration(format!(
                "system `{}` needs {} factors, got {}",
                system.name,
                system.dim(),
                factors.len()
            )));
        }
        if !(length_scale > 0.0 && length_scale.is_finite()) {
            return Err(Error::Domain(format!("length scale must be positive, got {length_scale}")));
        }
        Ok(Self {
            system,
            factors,
            quantum_numbers: None,
            normalized: false,
            length_scale,
        })
    }

    pub fn system(&self) -> &CoordinateSystem {
        &self.system
    }

    pub fn factors(&self) -> &[FactorFunction] {
        &self.factors
    }

    pub fn factor(&self, axis: usize) -> &FactorFunction {
        &self.factors[axis]
    }

    pub fn quantum_numbers(&self) -> Option<QuantumNumbers> {
        self.quantum_numbers
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn length_scale(&self) -> f64 {
        self.length_scale
    }

    /// Copy with one factor replaced. The result is no longer marked normalized.
    pub fn with_factor(&self, axis: usize, factor: FactorFunction) -> Self {
        let mut out = self.clone();
        out.factors[axis] = factor;
        out.normalized = false;
        out.quantum_numbers = None;
        out
    }

    pub fn value(&self, point: &[f64]) -> Complex64 {
        self.factors
            .iter()
            .zip(point)
            .map(|(f, &q)| f.value(q))
            .product()
    }

    /// `∫ √|g| a* b d³q`.
    pub fn inner_product(&self, other: &Self, config: &QuadratureConfig) -> Result<Integral> {
        if self.system != other.system {
            return Err(Error::Configuration("inner product across different coordinate systems".into()));
        }
        let closures: Vec<Box<dyn Fn(f64) -> Complex64 + '_>> = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| Box::new(move |q: f64| a.value(q).conj() * b.value(q)) as Box<dyn Fn(f64) -> Complex64>)
            .collect();
        let refs: Vec<&dyn Fn(f64) -> Complex64> = closures.iter().map(|c| c.as_ref()).collect();
        integrate_separable(&self.system, &refs, config, self.length_scale.max(other.length_scale))
    }

    pub fn norm_squared(&self, config: &QuadratureConfig) -> Result<Integral> {
        self.inner_product(self, config)
    }

    /// Rescales by the quadrature norm and marks the state normalized.
    pub fn normalize(mut self, config: &QuadratureConfig) -> Result<Self> {
        let n2 = self.norm_squared(config)?.value.re;
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(Error::Precondition(format!("cannot normalize state with norm² {n2}")));
        }
        let first = self.factors.remove(0);
        self.factors.insert(0, first.scaled(Complex64::new(1.0 / n2.sqrt(), 0.0)));
        self.normalized = true;
        Ok(self)
    }
}

/// Normalized polar factor `N_θ P_L^M(cos θ)`.
pub fn theta_eigenfactor(l: u32, m: i32) -> Result<FactorFunction> {
    assoc_legendre(l, m, 0.0)?;
    Ok(FactorFunction::Theta {
        l,
        m,
        norm: theta_norm(l, m),
    })
}

/// Normalized azimuthal factor `e^{iMφ}/√(2π)`.
pub fn phi_eigenfactor(m: i32) -> FactorFunction {
    FactorFunction::Phi { m }
}

/// Hydrogen eigenstate `N_r R_nL(r) Y_LM(θ, φ)` in spherical coordinates.
pub fn hydrogen_state(qn: QuantumNumbers, constants: &PhysicalConstants) -> SeparableState {
    let (n, l, m) = (qn.n(), qn.l(), qn.m());
    let a0 = constants.a0();
    let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    SeparableState {
        system: CoordinateSystem::make_spherical(),
        factors: vec![
            FactorFunction::HydrogenRadial {
                n,
                l,
                a0,
                norm: radial_norm(n, l, a0),
            },
            FactorFunction::Theta {
                l,
                m,
                norm: sign * theta_norm(l, m),
            },
            FactorFunction::Phi { m },
        ],
        quantum_numbers: Some(qn),
        normalized: true,
        length_scale: n as f64 * a0,
    }
}

/// Seeded smooth normalized state on a preset system.
///
/// Non-compact axes get a real polynomial × Gaussian profile truncated at
/// [`TRUNCATION_SCALES`]` × length_scale`; the polar axis gets a real sum of
/// polar eigenfactors with a shared order; periodic axes get a complex
/// Fourier sum. Normalization is closed-form, not by quadrature.
pub fn random_bound_trial(
    system: &CoordinateSystem,
    seed: u64,
    length_scale: f64,
) -> Result<SeparableState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cutoff = TRUNCATION_SCALES * length_scale;
    let mut factors = Vec::with_capacity(system.dim());
    for spec in &system.coords {
        let factor = match spec.topology {
            Topology::HalfLine | Topology::Line => {
                let half_line = spec.topology == Topology::HalfLine;
                let degree = rng.gen_range(0..=2usize);
                let mut coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
                coeffs[0] = rng.gen_range(0.5..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                for (k, c) in coeffs.iter_mut().enumerate() {
                    *c /= length_scale.powi(k as i32);
                }
                let center = if half_line {
                    match spec.lower {
                        crate::geometry::Bound::Finite(0.0) => 0.0,
                        _ => return Err(Error::Unsupported("half-line trial off the origin".into())),
                    }
                } else {
                    rng.gen_range(-0.5..0.5) * length_scale
                };
                let profile = PolyGaussian {
                    coeffs,
                    center,
                    exponent: rng.gen_range(0.4..1.2) / (length_scale * length_scale),
                    cutoff,
                };
                let n2 = profile.norm_squared(spec.weight, half_line)?;
                FactorFunction::PolyGaussian {
                    profile,
                    norm: 1.0 / n2.sqrt(),
                }
            }
            Topology::CompactNonperiodic => {
                if spec.weight != WeightFn::Sine {
                    return Err(Error::Unsupported(format!(
                        "trial factor on compact coordinate `{}` with weight {}",
                        spec.name,
                        spec.weight.identifier()
                    )));
                }
                let m: i32 = rng.gen_range(-2..=2);
                let lo = m.unsigned_abs();
                let mut terms: Vec<(u32, f64)> =
                    (lo..lo + 4).map(|l| (l, rng.gen_range(-1.0..1.0))).collect();
                let n = terms.iter().map(|t| t.1 * t.1).sum::<f64>().sqrt();
                terms.iter_mut().for_each(|t| t.1 /= n);
                FactorFunction::ThetaSeries { m, terms }
            }
            Topology::CompactPeriodic => {
                let period = spec.upper.value() - spec.lower.value();
                if (period - 2.0 * PI).abs() > 1e-12 || spec.lower.value() != 0.0 {
                    return Err(Error::Unsupported(format!(
                        "trial factor on periodic coordinate `{}` needs range [0, 2π)",
                        spec.name
                    )));
                }
                let mut terms: Vec<(i32, Complex64)> = (-3..=3)
                    .map(|m| {
                        (
                            m,
                            Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..2.0 * PI)),
                        )
                    })
                    .collect();
                let n = terms.iter().map(|t| t.1.norm_sqr()).sum::<f64>().sqrt();
                terms.iter_mut().for_each(|t| t.1 /= n);
                FactorFunction::FourierSeries { terms }
            }
        };
        factors.push(factor);
    }
    Ok(SeparableState {
        system: system.clone(),
        factors,
        quantum_numbers: None,
        normalized: true,
        length_scale,
    })
}

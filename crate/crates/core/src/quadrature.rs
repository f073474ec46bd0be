//! One-dimensional quadrature rules and separable tensor-product integration.
//!
//! Every rule keeps its nodes strictly inside the open domain, so weight
//! zeros and drift singularities at coordinate boundaries are never sampled.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::geometry::{Bound, CoordinateKind, CoordinateSpec, CoordinateSystem, Topology};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    lower: Bound,
    upper: Bound,
    exactness_degree: Option<usize>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> (Bound, Bound) {
        (self.lower, self.upper)
    }

    /// Highest polynomial degree integrated exactly, where that notion applies.
    pub fn exactness_degree(&self) -> Option<usize> {
        self.exactness_degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect();
        pairwise_sum(&terms)
    }

    pub fn integrate_complex(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        let terms: Vec<Complex64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .collect();
        pairwise_sum(&terms)
    }

    /// Affine image of a rule on `[-1, 1]` onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return domain(format!("cannot map rule onto [{a}, {b}]"));
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        Ok(Self {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| half * w).collect(),
            lower: Bound::Finite(a),
            upper: Bound::Finite(b),
            exactness_degree: self.exactness_degree,
        })
    }

    /// Folds a pointwise weight function into the rule weights.
    pub fn weighted_by(mut self, w: impl Fn(f64) -> f64) -> Self {
        for (weight, &x) in self.weights.iter_mut().zip(&self.nodes) {
            *weight *= w(x);
        }
        self.exactness_degree = None;
        self
    }
}

fn pairwise_sum<T>(terms: &[T]) -> T
where
    T: Copy + Default + std::ops::Add<Output = T>,
{
    match terms.len() {
        0 => T::default(),
        1 => terms[0],
        n if n <= 8 => terms.iter().fold(T::default(), |acc, &t| acc + t),
        n => {
            let (a, b) = terms.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut curr = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * curr - (kf - 1.0) * prev) / kf;
        prev = curr;
        curr = next;
    }
    let d = n as f64 * (x * curr - prev) / (x * x - 1.0);
    (curr, d)
}

/// `order`-point Gauss–Legendre rule on `[-1, 1]`, exact to degree `2·order - 1`.
///
/// Roots come from Newton iteration started at `cos(π(i + 3/4)/(n + 1/2))`;
/// nodes are mirrored so the rule is exactly symmetric about the origin.
pub fn gauss_legendre(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return domain("Gauss-Legendre order must be at least 1");
    }
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    if n == 1 {
        weights[0] = 2.0;
    } else {
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..NEWTON_MAX_ITER {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= NEWTON_TOL {
                    break;
                }
            }
            if n % 2 == 1 && i == n / 2 {
                x = 0.0;
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        lower: Bound::Finite(-1.0),
        upper: Bound::Finite(1.0),
        exactness_degree: Some(2 * n - 1),
    })
}

/// Gauss–Legendre pulled back to `(0, ∞)` by `r = scale·t/(1-t)`, `t ∈ (0, 1)`.
pub fn half_line_rule(order: usize, scale: f64) -> Result<QuadratureRule> {
    if !(scale > 0.0 && scale.is_finite()) {
        return domain(format!("half-line scale must be positive, got {scale}"));
    }
    let base = gauss_legendre(order)?;
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    for (&x, &w) in base.nodes.iter().zip(&base.weights) {
        let t = 0.5 * (x + 1.0);
        let s = 1.0 - t;
        nodes.push(scale * t / s);
        weights.push(0.5 * w * scale / (s * s));
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        lower: Bound::Finite(0.0),
        upper: Bound::PosInfinity,
        exactness_degree: None,
    })
}

/// Gauss–Legendre pulled back to `(-∞, ∞)` by `x = scale·t/(1-t²)`.
pub fn line_rule(order: usize, scale: f64) -> Result<QuadratureRule> {
    if !(scale > 0.0 && scale.is_finite()) {
        return domain(format!("line scale must be positive, got {scale}"));
    }
    let base = gauss_legendre(order)?;
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    for (&t, &w) in base.nodes.iter().zip(&base.weights) {
        let s = 1.0 - t * t;
        nodes.push(scale * t / s);
        weights.push(w * scale * (1.0 + t * t) / (s * s));
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        lower: Bound::NegInfinity,
        upper: Bound::PosInfinity,
        exactness_degree: None,
    })
}

/// Uniform rule on `[0, 2π)` with equal weights `2π/points`.
///
/// Nodes sit at half-step offsets `2π(k + ½)/points`, which keeps them off
/// the seam and still integrates `e^{ijφ}` exactly for `|j| < points`.
pub fn periodic_rule(points: usize) -> Result<QuadratureRule> {
    if points == 0 {
        return domain("periodic rule needs at least one point");
    }
    let h = 2.0 * PI / points as f64;
    Ok(QuadratureRule {
        nodes: (0..points).map(|k| h * (k as f64 + 0.5)).collect(),
        weights: vec![h; points],
        lower: Bound::Finite(0.0),
        upper: Bound::Finite(2.0 * PI),
        exactness_degree: None,
    })
}

/// Orders used when a rule is assigned to a coordinate.
///
/// Non-compact coordinates (half-line and line) use `radial_order`, finite
/// non-periodic ones `theta_order`, periodic ones `phi_order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureConfig {
    pub radial_order: usize,
    pub theta_order: usize,
    pub phi_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            radial_order: 120,
            theta_order: 64,
            phi_order: 32,
        }
    }
}

impl QuadratureConfig {
    /// Rule for one coordinate with the coordinate weight `w(q)` folded in.
    ///
    /// `scale` sets the length scale of the rational maps on unbounded
    /// domains. `halved` builds the same rule at half the order, which is
    /// what the error estimate compares against.
    pub fn coordinate_rule(
        &self,
        spec: &CoordinateSpec,
        scale: f64,
        halved: bool,
    ) -> Result<QuadratureRule> {
        let pick = |order: usize| if halved { (order / 2).max(1) } else { order };
        let rule = match (spec.topology, spec.lower, spec.upper) {
            (Topology::CompactPeriodic, Bound::Finite(a), Bound::Finite(b)) => {
                let base = periodic_rule(pick(self.phi_order))?;
                let stretch = (b - a) / (2.0 * PI);
                QuadratureRule {
                    nodes: base.nodes.iter().map(|&x| a + stretch * x).collect(),
                    weights: base.weights.iter().map(|&w| stretch * w).collect(),
                    lower: spec.lower,
                    upper: spec.upper,
                    exactness_degree: None,
                }
            }
            (Topology::CompactPeriodic, _, _) => {
                return Err(Error::Configuration(format!(
                    "periodic coordinate `{}` needs finite bounds",
                    spec.name
                )))
            }
            (_, Bound::Finite(a), Bound::Finite(b)) => {
                let order = match spec.kind {
                    CoordinateKind::Angular => self.theta_order,
                    CoordinateKind::Linear => self.radial_order,
                };
                gauss_legendre(pick(order))?.mapped(a, b)?
            }
            (_, Bound::Finite(a), Bound::PosInfinity) => {
                let mut rule = half_line_rule(pick(self.radial_order), scale)?;
                rule.nodes.iter_mut().for_each(|x| *x += a);
                rule.lower = spec.lower;
                rule
            }
            (_, Bound::NegInfinity, Bound::Finite(b)) => {
                let mut rule = half_line_rule(pick(self.radial_order), scale)?;
                rule.nodes.iter_mut().for_each(|x| *x = b - *x);
                rule.nodes.reverse();
                rule.weights.reverse();
                rule.lower = spec.lower;
                rule.upper = spec.upper;
                rule
            }
            (_, Bound::NegInfinity, Bound::PosInfinity) => line_rule(pick(self.radial_order), scale)?,
            _ => {
                return Err(Error::Configuration(format!(
                    "coordinate `{}` has an empty or inverted domain",
                    spec.name
                )))
            }
        };
        let weight = spec.weight;
        Ok(rule.weighted_by(|q| weight.value(q)))
    }
}

/// Value of a separable integral plus its halving-based error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    /// The per-coordinate one-dimensional factors of `value`.
    factors: [Complex64; 3],
}

impl Integral {
    /// One-dimensional factor of the integral along `axis`.
    pub fn factor(&self, axis: usize) -> Complex64 {
        self.factors[axis]
    }
}

/// Integrand for one coordinate of a separable integral.
pub type Integrand<'a> = &'a dyn Fn(f64) -> Complex64;

/// `∏_i ∫ w_i(q) h_i(q) dq` with rules assigned per coordinate topology.
///
/// The error estimate is `Σ_i |I - I_i'|`, where `I_i'` recomputes the
/// product with coordinate `i` at half order.
pub fn integrate_separable(
    system: &CoordinateSystem,
    integrands: &[Integrand<'_>],
    config: &QuadratureConfig,
    scale: f64,
) -> Result<Integral> {
    if integrands.len() != system.dim() {
        return Err(Error::Configuration(format!(
            "system `{}` has {} coordinates but {} integrands were given",
            system.name,
            system.dim(),
            integrands.len()
        )));
    }
    if system.dim() > 3 {
        return Err(Error::Unsupported("more than three coordinates".into()));
    }
    let mut full = [Complex64::new(1.0, 0.0); 3];
    let mut half = [Complex64::new(1.0, 0.0); 3];
    for (i, (spec, h)) in system.coords.iter().zip(integrands).enumerate() {
        full[i] = config.coordinate_rule(spec, scale, false)?.integrate_complex(h);
        half[i] = config.coordinate_rule(spec, scale, true)?.integrate_complex(h);
    }
    let dim = system.dim();
    let value: Complex64 = full[..dim].iter().product();
    let error = (0..dim)
        .map(|i| {
            let alt: Complex64 = (0..dim).map(|j| if j == i { half[j] } else { full[j] }).product();
            (value - alt).norm()
        })
        .sum();
    Ok(Integral {
        value,
        error,
        factors: full,
    })
}

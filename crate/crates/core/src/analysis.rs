//! Expectation values, hermiticity defects and the hydrogen force balance.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Bound, CoordinateKind, CoordinateSystem};
use crate::operators::{canonical_momentum, MomentumOperator};
use crate::quadrature::{Integral, QuadratureConfig};
use crate::specfun::QuantumNumbers;
use crate::states::{
    hydrogen_state, random_bound_trial, FactorFunction, PhysicalConstants, SeparableState,
    TRUNCATION_SCALES,
};

/// Absolute floor on the reality tolerance, in natural units.
pub const DEFECT_FLOOR: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpectationReport {
    pub value: Complex64,
    /// `Im⟨p⟩`.
    pub hermiticity_defect: f64,
    /// Defect predicted by the integration-by-parts surface term,
    /// `-(ħ/2) [w |ψ_axis|²]_lower^upper` times the other factor norms.
    pub boundary_term: f64,
    pub quadrature_error: f64,
}

impl ExpectationReport {
    /// `max(10 × quadrature error, 1e-9 × unit)`.
    pub fn reality_tolerance(&self, unit: f64) -> f64 {
        (10.0 * self.quadrature_error).max(DEFECT_FLOOR * unit)
    }

    pub fn is_real(&self, unit: f64) -> bool {
        self.hermiticity_defect.abs() <= self.reality_tolerance(unit)
    }
}

/// `ħ/a₀` for linear coordinates, `ħ` for angular ones.
pub fn natural_unit(op: &MomentumOperator, constants: &PhysicalConstants) -> f64 {
    match op.kind() {
        CoordinateKind::Linear => constants.hbar() / constants.a0(),
        CoordinateKind::Angular => constants.hbar(),
    }
}

fn require_normalized(state: &SeparableState) -> Result<()> {
    if !state.is_normalized() {
        return Err(Error::Precondition("expectation needs a normalized state".into()));
    }
    Ok(())
}

fn endpoint(bound: Bound, toward: f64, scale: f64) -> f64 {
    match bound {
        Bound::Finite(v) => v,
        Bound::NegInfinity => toward - TRUNCATION_SCALES * scale,
        Bound::PosInfinity => toward + TRUNCATION_SCALES * scale,
    }
}

/// `⟨ψ| p |ψ⟩ = ∫ √|g| ψ* (pψ) d³q`.
pub fn expectation(
    op: &MomentumOperator,
    state: &SeparableState,
    config: &QuadratureConfig,
) -> Result<ExpectationReport> {
    require_normalized(state)?;
    let p_psi = op.act(state)?;
    let integral = state.inner_product(&p_psi, config)?;
    let value = integral.value;
    if !(value.re.is_finite() && value.im.is_finite()) {
        let spec = &state.system().coords[op.axis()];
        return Err(Error::Singularity {
            coordinate: spec.name.clone(),
            at: f64::NAN,
        });
    }

    let axis = op.axis();
    let system = state.system();
    let spec = &system.coords[axis];
    let factor = state.factor(axis);
    let scale = state.length_scale();
    let (lo, hi) = match spec.topology {
        crate::geometry::Topology::CompactPeriodic => (spec.lower.value(), spec.upper.value()),
        _ => {
            let anchor = match (spec.lower, spec.upper) {
                (Bound::Finite(a), _) => a,
                (_, Bound::Finite(b)) => b,
                _ => 0.0,
            };
            (endpoint(spec.lower, anchor, scale), endpoint(spec.upper, anchor, scale))
        }
    };
    let surface = |q: f64| spec.weight.value(q) * factor.value(q).norm_sqr();
    let jump = surface(hi) - surface(lo);
    let others: f64 = (0..system.dim())
        .filter(|&j| j != axis)
        .map(|j| integral.factor(j).re)
        .product();
    let boundary_term = -0.5 * op.hbar() * jump * others;

    Ok(ExpectationReport {
        value,
        hermiticity_defect: value.im,
        boundary_term,
        quadrature_error: integral.error,
    })
}

/// `Im⟨p⟩`.
pub fn hermiticity_defect(
    op: &MomentumOperator,
    state: &SeparableState,
    config: &QuadratureConfig,
) -> Result<f64> {
    Ok(expectation(op, state, config)?.hermiticity_defect)
}

/// `⟨ψ| h(q_axis) |ψ⟩` for a real multiplicative function of one coordinate.
pub fn multiplicative_expectation(
    state: &SeparableState,
    axis: usize,
    h: impl Fn(f64) -> f64 + Send + Sync + 'static,
    config: &QuadratureConfig,
) -> Result<Integral> {
    require_normalized(state)?;
    if axis >= state.system().dim() {
        return Err(Error::Configuration(format!("axis {axis} out of range")));
    }
    let inner = state.factor(axis).clone();
    let multiplied = FactorFunction::custom(move |q| inner.value(q) * h(q), None);
    state.inner_product(&state.with_factor(axis, multiplied), config)
}

/// Solves `⟨p⟩ = -iħ(F[ψ] + c) = 0` for the real constant `c` on two trial states.
///
/// `F[ψ] = ∫ √|g| ψ* (1/f) ∂(fψ)`; the constant returned is `-Re F`, in
/// inverse length, the same placement as [`MomentumOperator::with_constant`].
pub fn ci_uniqueness_demo(
    system: &CoordinateSystem,
    axis: usize,
    seed_a: u64,
    seed_b: u64,
    constants: &PhysicalConstants,
    config: &QuadratureConfig,
) -> Result<(f64, f64)> {
    if axis >= system.dim() {
        return Err(Error::Configuration(format!("axis {axis} out of range")));
    }
    let spec = &system.coords[axis];
    if spec.topology.is_compact() {
        return Err(Error::Unsupported(format!(
            "constant recovery on compact coordinate `{}`",
            spec.name
        )));
    }
    let op = canonical_momentum(system, axis, constants)?;
    let solve = |seed: u64| -> Result<f64> {
        let psi = random_bound_trial(system, seed, constants.a0())?;
        let report = expectation(&op, &psi, config)?;
        // F = ⟨p⟩ / (-iħ) = i⟨p⟩/ħ
        let f = Complex64::new(0.0, 1.0) * report.value / constants.hbar();
        Ok(-f.re)
    };
    Ok((solve(seed_a)?, solve(seed_b)?))
}

/// `⟨1/r²⟩ = 1/(n³ a₀² (L + ½))`.
pub fn inv_r2_closed_form(qn: QuantumNumbers, constants: &PhysicalConstants) -> f64 {
    let n = qn.n() as f64;
    let l = qn.l() as f64;
    1.0 / (n.powi(3) * constants.a0().powi(2) * (l + 0.5))
}

/// `⟨1/r³⟩ = 1/(a₀³ n³ L (L + ½)(L + 1))`, divergent for `L = 0`.
pub fn inv_r3_closed_form(qn: QuantumNumbers, constants: &PhysicalConstants) -> Result<f64> {
    if qn.l() == 0 {
        return Err(Error::Domain("⟨1/r³⟩ diverges for L = 0".into()));
    }
    let n = qn.n() as f64;
    let l = qn.l() as f64;
    Ok(1.0 / (constants.a0().powi(3) * n.powi(3) * l * (l + 0.5) * (l + 1.0)))
}

fn radial_inverse_power(
    qn: QuantumNumbers,
    power: i32,
    constants: &PhysicalConstants,
    config: &QuadratureConfig,
) -> Result<f64> {
    let psi = hydrogen_state(qn, constants);
    Ok(multiplicative_expectation(&psi, 0, move |r| r.powi(-power), config)?
        .value
        .re)
}

/// Quadrature `⟨1/r²⟩` for a hydrogen state.
pub fn inv_r2_quadrature(
    qn: QuantumNumbers,
    constants: &PhysicalConstants,
    config: &QuadratureConfig,
) -> Result<f64> {
    radial_inverse_power(qn, 2, constants, config)
}

/// Quadrature `⟨1/r³⟩` for a hydrogen state with `L >= 1`.
pub fn inv_r3_quadrature(
    qn: QuantumNumbers,
    constants: &PhysicalConstants,
    config: &QuadratureConfig,
) -> Result<f64> {
    if qn.l() == 0 {
        return Err(Error::Domain("⟨1/r³⟩ diverges for L = 0".into()));
    }
    radial_inverse_power(qn, 3, constants, config)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForceBalanceReport {
    /// `⟨L²/(m r³)⟩`
    pub centrifugal: f64,
    /// `⟨e²/r²⟩`
    pub coulomb: f64,
    pub residual: f64,
    pub closed_form_inv_r2: f64,
    pub closed_form_inv_r3: f64,
}

impl ForceBalanceReport {
    pub fn relative_residual(&self) -> f64 {
        self.residual.abs() / self.coulomb.abs()
    }
}

/// `d⟨p_r⟩/dt = ⟨L²/(m r³)⟩ - ⟨e²/r²⟩` evaluated by radial quadrature.
pub fn force_balance(
    qn: QuantumNumbers,
    constants: &PhysicalConstants,
    config: &QuadratureConfig,
) -> Result<ForceBalanceReport> {
    if qn.l() == 0 {
        return Err(Error::Domain(
            "force balance needs L >= 1: s-states have no centrifugal term and ⟨1/r³⟩ diverges"
                .into(),
        ));
    }
    let l = qn.l() as f64;
    let l2 = constants.hbar().powi(2) * l * (l + 1.0);
    let centrifugal = l2 / constants.mass() * inv_r3_quadrature(qn, constants, config)?;
    let coulomb = constants.e2() * inv_r2_quadrature(qn, constants, config)?;
    Ok(ForceBalanceReport {
        centrifugal,
        coulomb,
        residual: centrifugal - coulomb,
        closed_form_inv_r2: inv_r2_closed_form(qn, constants),
        closed_form_inv_r3: inv_r3_closed_form(qn, constants)?,
    })
}

/// `⟨-dV/dr⟩ = -e²⟨1/r²⟩`, the force the Cartesian prescription would predict.
pub fn naive_ehrenfest_residual(
    qn: QuantumNumbers,
    constants: &PhysicalConstants,
    config: &QuadratureConfig,
) -> Result<f64> {
    Ok(-constants.e2() * inv_r2_quadrature(qn, constants, config)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PThetaEntry {
    pub l: u32,
    pub m: i32,
    pub report: ExpectationReport,
}

/// `⟨p_θ⟩` on `Y_LM` for all `L <= lmax`, `|M| <= L`, using radial factor `n = L + 1`.
pub fn p_theta_spectrum_scan(
    lmax: u32,
    constants: &PhysicalConstants,
    config: &QuadratureConfig,
) -> Result<Vec<PThetaEntry>> {
    if lmax > 10 {
        return Err(Error::Domain(format!("p_theta scan supports Lmax <= 10, got {lmax}")));
    }
    let system = CoordinateSystem::make_spherical();
    let op = canonical_momentum(&system, 1, constants)?;
    let mut out = Vec::new();
    for l in 0..=lmax {
        for m in -(l as i32)..=(l as i32) {
            let psi = hydrogen_state(QuantumNumbers::new(l + 1, l, m)?, constants);
            out.push(PThetaEntry {
                l,
                m,
                report: expectation(&op, &psi, config)?,
            });
        }
    }
    Ok(out)
}

/// `⟨p_x⟩` on a seeded Cartesian trial state times `e^{ikx}`; `k = 0` keeps it real.
pub fn cartesian_reality_check(
    seed: u64,
    wavenumber: f64,
    constants: &PhysicalConstants,
    config: &QuadratureConfig,
) -> Result<ExpectationReport> {
    let system = CoordinateSystem::make_cartesian();
    let mut psi = random_bound_trial(&system, seed, constants.a0())?;
    if wavenumber != 0.0 {
        let wave = FactorFunction::Wave {
            envelope: Box::new(psi.factor(0).clone()),
            k: wavenumber,
        };
        psi = psi.with_factor(0, wave).normalize(config)?;
    }
    let op = canonical_momentum(&system, 0, constants)?;
    expectation(&op, &psi, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::naive_momentum;
    use crate::specfun::QuantumNumbers;

    fn au() -> PhysicalConstants {
        PhysicalConstants::atomic()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn qn(n: u32, l: u32, m: i32) -> QuantumNumbers {
        QuantumNumbers::new(n, l, m).unwrap()
    }

    #[test]
    fn canonical_p_r_vanishes_on_hydrogen() {
        let s = CoordinateSystem::make_spherical();
        let pr = canonical_momentum(&s, 0, &au()).unwrap();
        for n in 1..=4 {
            for l in 0..n {
                let r = expectation(&pr, &hydrogen_state(qn(n, l, 0), &au()), &cfg()).unwrap();
                assert!(r.value.norm() < 1e-9, "n={n} L={l}: {:?}", r);
            }
        }
    }

    #[test]
    fn naive_p_r_defect_is_inverse_radius() {
        let s = CoordinateSystem::make_spherical();
        let nr = naive_momentum(&s, 0, &au()).unwrap();
        let r = expectation(&nr, &hydrogen_state(qn(1, 0, 0), &au()), &cfg()).unwrap();
        assert!(r.value.re.abs() < 1e-9);
        assert!((r.hermiticity_defect - 1.0).abs() < 1e-9);
    }

    #[test]
    fn p_phi_gives_m_hbar() {
        let s = CoordinateSystem::make_spherical();
        let pp = canonical_momentum(&s, 2, &au()).unwrap();
        let r = expectation(&pp, &hydrogen_state(qn(2, 1, 1), &au()), &cfg()).unwrap();
        assert!((r.value - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn naive_theta_defect_matches_half_cot() {
        let s = CoordinateSystem::make_spherical();
        let nt = naive_momentum(&s, 1, &au()).unwrap();
        let psi = hydrogen_state(qn(2, 1, 0), &au());
        let defect = hermiticity_defect(&nt, &psi, &cfg()).unwrap();
        let cot = multiplicative_expectation(&psi, 1, |t| 1.0 / t.tan(), &cfg()).unwrap();
        assert!((defect - 0.5 * cot.value.re).abs() < 1e-9);

        let trial = random_bound_trial(&s, 11, 1.0).unwrap();
        let defect = hermiticity_defect(&nt, &trial, &cfg()).unwrap();
        let cot = multiplicative_expectation(&trial, 1, |t| 1.0 / t.tan(), &cfg()).unwrap();
        assert!((defect - 0.5 * cot.value.re).abs() < 1e-9);
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let s = CoordinateSystem::make_spherical();
        let pr = canonical_momentum(&s, 0, &au()).unwrap();
        let psi = hydrogen_state(qn(1, 0, 0), &au());
        let raw = psi.with_factor(2, psi.factor(2).clone());
        assert!(matches!(expectation(&pr, &raw, &cfg()), Err(Error::Precondition(_))));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(inv_r2_closed_form(qn(1, 0, 0), &au()), 2.0);
        assert!((inv_r3_closed_form(qn(2, 1, 0), &au()).unwrap() - 1.0 / 24.0).abs() < 1e-16);
        assert!((inv_r2_closed_form(qn(2, 1, 0), &au()) - 1.0 / 12.0).abs() < 1e-16);
        assert!(inv_r3_closed_form(qn(3, 0, 0), &au()).is_err());
    }

    #[test]
    fn force_balance_examples() {
        for (n, l) in [(2, 1), (3, 2), (4, 1)] {
            let fb = force_balance(qn(n, l, 0), &au(), &cfg()).unwrap();
            assert!(fb.residual.abs() < 1e-9, "{n},{l}: {fb:?}");
            assert_eq!(fb.residual, fb.centrifugal - fb.coulomb);
        }
        let fb = force_balance(qn(2, 1, 0), &au(), &cfg()).unwrap();
        assert!((fb.coulomb - 1.0 / 12.0).abs() < 1e-12);
        assert!(matches!(force_balance(qn(2, 0, 0), &au(), &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn naive_ehrenfest_examples() {
        let v = naive_ehrenfest_residual(qn(1, 0, 0), &au(), &cfg()).unwrap();
        assert!((v + 2.0).abs() < 1e-9);
        let v = naive_ehrenfest_residual(qn(2, 1, 0), &au(), &cfg()).unwrap();
        assert!((v + 1.0 / 12.0).abs() < 1e-10);
    }

    #[test]
    fn ci_demo_examples() {
        let s = CoordinateSystem::make_spherical();
        let (a, b) = ci_uniqueness_demo(&s, 0, 1, 2, &au(), &cfg()).unwrap();
        assert!(a.abs() < 1e-8 && b.abs() < 1e-8);
        let c = CoordinateSystem::make_cartesian();
        let (a, b) = ci_uniqueness_demo(&c, 0, 7, 9, &au(), &cfg()).unwrap();
        assert!(a.abs() < 1e-8 && b.abs() < 1e-8);
        let again = ci_uniqueness_demo(&c, 0, 7, 9, &au(), &cfg()).unwrap();
        assert_eq!((a.to_bits(), b.to_bits()), (again.0.to_bits(), again.1.to_bits()));
        assert!(matches!(ci_uniqueness_demo(&s, 1, 1, 2, &au(), &cfg()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn p_theta_scan_small() {
        let table = p_theta_spectrum_scan(3, &au(), &cfg()).unwrap();
        assert_eq!(table.len(), 16);
        assert!(table.iter().all(|e| e.report.value.norm() < 1e-9));
        assert!(p_theta_spectrum_scan(11, &au(), &cfg()).is_err());
    }

    #[test]
    fn cartesian_examples() {
        let r = cartesian_reality_check(3, 0.0, &au(), &cfg()).unwrap();
        assert!(r.value.norm() < 1e-10);
        let r = cartesian_reality_check(3, 0.7, &au(), &cfg()).unwrap();
        assert!((r.value - Complex64::new(0.7, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn boundary_term_reported_for_non_vanishing_state() {
        // a state that does not decay on a truncated radial domain
        let mut s = CoordinateSystem::make_spherical();
        s.coords[0].upper = Bound::Finite(2.0);
        let one = || FactorFunction::Constant(Complex64::new(1.0, 0.0));
        let psi = SeparableState::new(s.clone(), vec![one(), one(), one()], 1.0)
            .unwrap()
            .normalize(&cfg())
            .unwrap();
        let pr = canonical_momentum(&s, 0, &au()).unwrap();
        let r = expectation(&pr, &psi, &cfg()).unwrap();
        assert!(r.boundary_term.abs() > 0.1);
        assert!((r.hermiticity_defect - r.boundary_term).abs() < 1e-9);
    }
}

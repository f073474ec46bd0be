//! Momentum operators `-iħ(∂_q + g(q) + c)` acting along one coordinate.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{CoordinateKind, CoordinateSystem, Drift};
use crate::states::{FactorFunction, PhysicalConstants, SeparableState};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumOperator {
    axis: usize,
    drift: Drift,
    constant: f64,
    hbar: f64,
    kind: CoordinateKind,
}

fn check_axis(system: &CoordinateSystem, axis: usize) -> Result<()> {
    if axis >= system.dim() {
        return Err(Error::Configuration(format!(
            "axis {axis} out of range for system `{}` with {} coordinates",
            system.name,
            system.dim()
        )));
    }
    Ok(())
}

/// `-iħ (1/f) ∂_q f` with `f = √w`, i.e. drift `w'/(2w)` and `c = 0`.
pub fn canonical_momentum(
    system: &CoordinateSystem,
    axis: usize,
    constants: &PhysicalConstants,
) -> Result<MomentumOperator> {
    check_axis(system, axis)?;
    let spec = &system.coords[axis];
    Ok(MomentumOperator {
        axis,
        drift: Drift::for_weight(spec.weight),
        constant: 0.0,
        hbar: constants.hbar(),
        kind: spec.kind,
    })
}

/// `-iħ ∂_q` with no drift, as if the coordinate were Cartesian.
pub fn naive_momentum(
    system: &CoordinateSystem,
    axis: usize,
    constants: &PhysicalConstants,
) -> Result<MomentumOperator> {
    check_axis(system, axis)?;
    Ok(MomentumOperator {
        axis,
        drift: Drift::Zero,
        constant: 0.0,
        hbar: constants.hbar(),
        kind: system.coords[axis].kind,
    })
}

impl MomentumOperator {
    /// Same operator with the additive constant `c` inside the bracket.
    pub fn with_constant(mut self, c: f64) -> Self {
        self.constant = c;
        self
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn drift(&self) -> Drift {
        self.drift
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn kind(&self) -> CoordinateKind {
        self.kind
    }

    /// `pψ` as a new separable state; only the axis factor changes.
    pub fn act(&self, state: &SeparableState) -> Result<SeparableState> {
        check_axis(state.system(), self.axis)?;
        let scale = match self.kind {
            CoordinateKind::Linear => state.length_scale(),
            CoordinateKind::Angular => 1.0,
        };
        let applied = FactorFunction::Applied {
            inner: Box::new(state.factor(self.axis).clone()),
            drift: self.drift,
            constant: self.constant,
            hbar: self.hbar,
            scale,
        };
        Ok(state.with_factor(self.axis, applied))
    }
}

fn check_point(system: &CoordinateSystem, point: &[f64]) -> Result<()> {
    if point.len() != system.dim() {
        return Err(Error::Configuration(format!(
            "point has {} components, system `{}` has {}",
            point.len(),
            system.name,
            system.dim()
        )));
    }
    for (spec, &q) in system.coords.iter().zip(point) {
        if !spec.contains_interior(q) {
            return Err(Error::Singularity {
                coordinate: spec.name.clone(),
                at: q,
            });
        }
    }
    Ok(())
}

/// `(pψ)(point)`. The point must lie strictly inside every coordinate domain.
pub fn apply(op: &MomentumOperator, state: &SeparableState, point: &[f64]) -> Result<Complex64> {
    check_point(state.system(), point)?;
    check_axis(state.system(), op.axis)?;
    op.drift.eval(point[op.axis]).map_err(|_| Error::Singularity {
        coordinate: state.system().coords[op.axis].name.clone(),
        at: point[op.axis],
    })?;
    Ok(op.act(state)?.value(point))
}

fn same_system(system: &CoordinateSystem, state: &SeparableState) -> Result<()> {
    if system != state.system() {
        return Err(Error::Configuration(format!(
            "state lives in `{}`, not `{}`",
            state.system().name,
            system.name
        )));
    }
    Ok(())
}

/// `([q_i, p_j] - iħ δ_ij) ψ` at `point`, using canonical `p_j`.
pub fn commutator_qp_residual(
    system: &CoordinateSystem,
    i: usize,
    j: usize,
    state: &SeparableState,
    point: &[f64],
    constants: &PhysicalConstants,
) -> Result<Complex64> {
    same_system(system, state)?;
    check_axis(system, i)?;
    let p = canonical_momentum(system, j, constants)?;
    let q_psi = state.with_factor(
        i,
        FactorFunction::Position {
            inner: Box::new(state.factor(i).clone()),
        },
    );
    let q_of_p_psi = point[i] * apply(&p, state, point)?;
    let p_of_q_psi = apply(&p, &q_psi, point)?;
    let delta = if i == j {
        Complex64::new(0.0, constants.hbar()) * state.value(point)
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(q_of_p_psi - p_of_q_psi - delta)
}

/// `[p_i, p_j] ψ` at `point` for canonical operators.
pub fn commutator_pp_residual(
    system: &CoordinateSystem,
    i: usize,
    j: usize,
    state: &SeparableState,
    point: &[f64],
    constants: &PhysicalConstants,
) -> Result<Complex64> {
    same_system(system, state)?;
    let pi = canonical_momentum(system, i, constants)?;
    let pj = canonical_momentum(system, j, constants)?;
    let ij = apply(&pi, &pj.act(state)?, point)?;
    let ji = apply(&pj, &pi.act(state)?, point)?;
    Ok(ij - ji)
}

/// `ħ² L(L+1)` for states built on a spherical harmonic.
pub fn l_squared_expectation(state: &SeparableState, constants: &PhysicalConstants) -> Result<f64> {
    let qn = state.quantum_numbers().ok_or_else(|| {
        Error::Unsupported("L² expectation needs a state with quantum numbers".into())
    })?;
    let l = qn.l() as f64;
    Ok(constants.hbar().powi(2) * l * (l + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::WeightFn;
    use crate::specfun::QuantumNumbers;
    use crate::states::{hydrogen_state, phi_eigenfactor, random_bound_trial};
    use std::f64::consts::PI;

    fn au() -> PhysicalConstants {
        PhysicalConstants::atomic()
    }

    #[test]
    fn canonical_drifts() {
        let s = CoordinateSystem::make_spherical();
        let pr = canonical_momentum(&s, 0, &au()).unwrap();
        assert_eq!(pr.drift(), Drift::Measure(WeightFn::Power(2)));
        assert!((pr.drift().eval(2.0).unwrap() - 0.5).abs() < 1e-15);
        let pt = canonical_momentum(&s, 1, &au()).unwrap();
        assert!((pt.drift().eval(1.0).unwrap() - 0.5 / 1f64.tan()).abs() < 1e-15);
        assert_eq!(pt.constant(), 0.0);

        let c = CoordinateSystem::make_cartesian();
        for axis in 0..3 {
            let p = canonical_momentum(&c, axis, &au()).unwrap();
            assert_eq!(p.drift(), Drift::Zero);
            assert_eq!(p, naive_momentum(&c, axis, &au()).unwrap());
        }
        assert_eq!(
            canonical_momentum(&s, 2, &au()).unwrap(),
            naive_momentum(&s, 2, &au()).unwrap()
        );
        assert_eq!(naive_momentum(&s, 0, &au()).unwrap().drift(), Drift::Zero);
        assert!(canonical_momentum(&s, 3, &au()).is_err());
    }

    #[test]
    fn p_phi_eigenrelation() {
        let s = CoordinateSystem::make_spherical();
        let base = hydrogen_state(QuantumNumbers::new(1, 0, 0).unwrap(), &au());
        let p = canonical_momentum(&s, 2, &au()).unwrap();
        for m in -5..=5 {
            let psi = base.with_factor(2, phi_eigenfactor(m));
            for &phi in &[0.1, 1.0, 3.0, 5.9] {
                let pt = [1.3, 0.8, phi];
                let got = apply(&p, &psi, &pt).unwrap();
                let want = psi.value(&pt) * m as f64;
                assert!((got - want).norm() <= 1e-12 * want.norm().max(1e-300) + 1e-15);
            }
        }
    }

    #[test]
    fn canonical_p_r_annihilates_ground_state_at_bohr_radius() {
        let s = CoordinateSystem::make_spherical();
        let psi = hydrogen_state(QuantumNumbers::new(1, 0, 0).unwrap(), &au());
        let pr = canonical_momentum(&s, 0, &au()).unwrap();
        let v = apply(&pr, &psi, &[1.0, 0.5, 0.5]).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn zero_state_maps_to_zero() {
        let s = CoordinateSystem::make_spherical();
        let zero = FactorFunction::Constant(Complex64::new(0.0, 0.0));
        let psi = SeparableState::new(s.clone(), vec![zero.clone(), zero.clone(), zero], 1.0).unwrap();
        for axis in 0..3 {
            let p = canonical_momentum(&s, axis, &au()).unwrap();
            assert_eq!(apply(&p, &psi, &[0.7, 1.2, 4.0]).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn boundary_points_are_singular() {
        let s = CoordinateSystem::make_spherical();
        let psi = hydrogen_state(QuantumNumbers::new(1, 0, 0).unwrap(), &au());
        let pr = canonical_momentum(&s, 0, &au()).unwrap();
        assert!(matches!(apply(&pr, &psi, &[0.0, 1.0, 1.0]), Err(Error::Singularity { .. })));
        let pt = canonical_momentum(&s, 1, &au()).unwrap();
        assert!(matches!(apply(&pt, &psi, &[1.0, PI, 1.0]), Err(Error::Singularity { .. })));
    }

    #[test]
    fn drift_shift_identity() {
        let s = CoordinateSystem::make_spherical();
        let psi = random_bound_trial(&s, 5, 1.0).unwrap();
        for axis in 0..3 {
            let can = canonical_momentum(&s, axis, &au()).unwrap();
            let nai = naive_momentum(&s, axis, &au()).unwrap();
            let pt = [0.9, 1.1, 2.5];
            let diff = apply(&can, &psi, &pt).unwrap() - apply(&nai, &psi, &pt).unwrap();
            let want = Complex64::new(0.0, -1.0) * can.drift().eval(pt[axis]).unwrap() * psi.value(&pt);
            assert!((diff - want).norm() <= 1e-12 * want.norm().max(psi.value(&pt).norm()));
        }
    }

    #[test]
    fn commutator_examples() {
        let s = CoordinateSystem::make_spherical();
        let p2 = hydrogen_state(QuantumNumbers::new(2, 1, 0).unwrap(), &au());
        let pt = [1.0, 0.9, 0.3];
        let scale = p2.value(&pt).norm();
        let r = commutator_qp_residual(&s, 0, 0, &p2, &pt, &au()).unwrap();
        assert!(r.norm() <= 1e-9 * scale);
        assert_eq!(commutator_qp_residual(&s, 1, 2, &p2, &pt, &au()).unwrap().norm(), 0.0);

        let p211 = hydrogen_state(QuantumNumbers::new(2, 1, 1).unwrap(), &au());
        let pt = [1.7, 1.2, 0.4];
        let scale = p211.value(&pt).norm();
        assert!(commutator_pp_residual(&s, 1, 2, &p211, &pt, &au()).unwrap().norm() <= 1e-7 * scale);
        assert!(commutator_pp_residual(&s, 0, 2, &p211, &pt, &au()).unwrap().norm() <= 1e-7 * scale);
        for i in 0..3 {
            assert_eq!(commutator_pp_residual(&s, i, i, &p211, &pt, &au()).unwrap().norm(), 0.0);
        }

        let c = CoordinateSystem::make_cartesian();
        let g = || FactorFunction::custom(|x| Complex64::new((-x * x).exp(), 0.0), None);
        let gauss = SeparableState::new(c.clone(), vec![g(), g(), g()], 1.0).unwrap();
        let pt = [0.3, -0.2, 0.5];
        let r = commutator_qp_residual(&c, 0, 0, &gauss, &pt, &au()).unwrap();
        assert!(r.norm() <= 1e-9 * gauss.value(&pt).norm());
    }

    #[test]
    fn l_squared() {
        for (l, want) in [(0u32, 0.0), (1, 2.0), (3, 12.0)] {
            let psi = hydrogen_state(QuantumNumbers::new(l + 1, l, 0).unwrap(), &au());
            assert_eq!(l_squared_expectation(&psi, &au()).unwrap(), want);
        }
        let trial = random_bound_trial(&CoordinateSystem::make_spherical(), 1, 1.0).unwrap();
        assert!(matches!(l_squared_expectation(&trial, &au()), Err(Error::Unsupported(_))));
    }
}

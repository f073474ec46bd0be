//! Associated Legendre and Laguerre functions and spherical harmonics.
//!
//! `P_L^M` carries the Condon–Shortley phase `(-1)^M`. Negative orders use
//! `P_L^{-M} = (-1)^M (L-M)!/(L+M)! P_L^M`. Values are produced by upward
//! recurrence in the degree from the closed-form seed `P_M^M`, which is
//! stable for the degrees supported here (`L <= 50`).

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Largest degree accepted by the Legendre routines.
pub const MAX_DEGREE: u32 = 50;

/// Hydrogen-like quantum numbers `(n, L, M)` with `n >= 1`, `L < n`, `|M| <= L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuantumNumbers {
    n: u32,
    l: u32,
    m: i32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        if n == 0 {
            return domain("principal quantum number must be positive");
        }
        if l >= n {
            return domain(format!("orbital number L={l} must be below n={n}"));
        }
        if m.unsigned_abs() > l {
            return domain(format!("magnetic number M={m} outside -L..=L for L={l}"));
        }
        Ok(Self { n, l, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }
}

/// `ln(n!)` by direct summation; exact enough for the small arguments used here.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `(L-M)!/(L+M)!` for `|M| <= L`, evaluated in log space.
pub fn factorial_ratio(l: u32, m: i32) -> f64 {
    let lo = (l as i64 - m as i64) as u32;
    let hi = (l as i64 + m as i64) as u32;
    (ln_factorial(lo) - ln_factorial(hi)).exp()
}

fn check_order(l: u32, m: i32) -> Result<()> {
    if l > MAX_DEGREE {
        return domain(format!("degree L={l} exceeds supported maximum {MAX_DEGREE}"));
    }
    if m.unsigned_abs() > l {
        return domain(format!("order |M|={} exceeds degree L={l}", m.unsigned_abs()));
    }
    Ok(())
}

fn check_argument(x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > 1.0 {
        return domain(format!("argument x={x} outside [-1, 1]"));
    }
    Ok(())
}

fn sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `P_L^M(x)` for `0 <= M <= L`, no argument checks.
fn plm_nonnegative(l: u32, m: u32, x: f64) -> f64 {
    let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    let mut odd = 1.0;
    for _ in 0..m {
        pmm *= -odd * somx2;
        odd += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut curr = x * (2 * m + 1) as f64 * pmm;
    for ll in (m + 2)..=l {
        let next = (x * (2 * ll - 1) as f64 * curr - (ll + m - 1) as f64 * prev) / (ll - m) as f64;
        prev = curr;
        curr = next;
    }
    curr
}

/// Multiplier mapping `P_L^{|M|}` onto `P_L^M`.
fn negative_order_factor(l: u32, m: i32) -> f64 {
    if m >= 0 {
        1.0
    } else {
        let mm = -m;
        sign(mm as i64) * factorial_ratio(l, mm)
    }
}

/// Associated Legendre function `P_L^M(x)` with the Condon–Shortley phase.
pub fn assoc_legendre(l: u32, m: i32, x: f64) -> Result<f64> {
    check_order(l, m)?;
    check_argument(x)?;
    Ok(negative_order_factor(l, m) * plm_nonnegative(l, m.unsigned_abs(), x))
}

/// `dP_L^M/dx` from `(x²-1) P' = L x P_L^M - (L+M) P_{L-1}^M`.
///
/// Undefined at `|x| = 1`, where the derivative is singular for `M = 1`.
pub fn assoc_legendre_deriv(l: u32, m: i32, x: f64) -> Result<f64> {
    check_order(l, m)?;
    check_argument(x)?;
    if x.abs() == 1.0 {
        return domain("Legendre derivative requested at |x| = 1");
    }
    let mm = m.unsigned_abs();
    let p = plm_nonnegative(l, mm, x);
    let lower = if l > mm {
        plm_nonnegative(l - 1, mm, x)
    } else {
        0.0
    };
    let d = (l as f64 * x * p - (l + mm) as f64 * lower) / (x * x - 1.0);
    Ok(negative_order_factor(l, m) * d)
}

/// `dP_L^M(cos θ)/dθ` from the order ladder
/// `dP_L^M/dθ = ½[P_L^{M+1} - (L+M)(L-M+1) P_L^{M-1}]`, regular at the poles.
pub fn assoc_legendre_dtheta(l: u32, m: i32, theta: f64) -> Result<f64> {
    check_order(l, m)?;
    let x = theta.cos();
    let li = l as i64;
    let mi = m as i64;
    let up = if mi < li {
        assoc_legendre(l, m + 1, x)?
    } else {
        0.0
    };
    let down = if mi > -li {
        (li + mi) as f64 * (li - mi + 1) as f64 * assoc_legendre(l, m - 1, x)?
    } else {
        0.0
    };
    Ok(0.5 * (up - down))
}

/// The pair `(P_L^M(x), (-1)^{L+M} P_L^M(-x))`, equal by parity.
pub fn legendre_parity(l: u32, m: i32, x: f64) -> Result<(f64, f64)> {
    let lhs = assoc_legendre(l, m, x)?;
    let rhs = sign(l as i64 + m as i64) * assoc_legendre(l, m, -x)?;
    Ok((lhs, rhs))
}

/// Generalized Laguerre polynomial `L_k^a(x)` (so `L_1^a(x) = 1 + a - x`).
pub fn assoc_laguerre(k: u32, a: u32, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return domain(format!("Laguerre argument x={x} must be finite and non-negative"));
    }
    Ok(laguerre_unchecked(k, a as f64, x))
}

fn laguerre_unchecked(k: u32, a: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut curr = 1.0 + a - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + a - x) * curr - (jf + a) * prev) / (jf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// `d/dx L_k^a(x) = -L_{k-1}^{a+1}(x)`.
pub fn assoc_laguerre_deriv(k: u32, a: u32, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return domain(format!("Laguerre argument x={x} must be finite and non-negative"));
    }
    if k == 0 {
        return Ok(0.0);
    }
    Ok(-laguerre_unchecked(k - 1, a as f64 + 1.0, x))
}

/// Angular normalization `[(2L+1)/4π · (L-M)!/(L+M)!]^{1/2}`.
pub fn harmonic_norm(l: u32, m: i32) -> f64 {
    ((2 * l + 1) as f64 / (4.0 * PI) * factorial_ratio(l, m)).sqrt()
}

/// `Y_LM(θ, φ) = (-1)^M N_LM P_L^M(cos θ) e^{iMφ}`.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    check_order(l, m)?;
    if !(0.0..=PI).contains(&theta) {
        return domain(format!("polar angle θ={theta} outside [0, π]"));
    }
    let radial = sign(m as i64) * harmonic_norm(l, m) * assoc_legendre(l, m, theta.cos())?;
    Ok(Complex64::from_polar(1.0, m as f64 * phi) * radial)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Series definition: P_L^M(x) = (-1)^M (1-x²)^{M/2} d^M/dx^M P_L(x),
    /// with P_L written out through its explicit binomial expansion.
    fn series_legendre(l: u32, m: u32, x: f64) -> f64 {
        fn binom(n: u32, k: u32) -> f64 {
            (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
        }
        let mut coeffs = vec![0.0; l as usize + 1];
        for k in 0..=l / 2 {
            let c = sign(k as i64) * binom(l, k) * binom(2 * l - 2 * k, l) / 2f64.powi(l as i32);
            coeffs[(l - 2 * k) as usize] = c;
        }
        for _ in 0..m {
            coeffs = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(p, c)| p as f64 * c)
                .collect();
        }
        let poly: f64 = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        sign(m as i64) * (1.0 - x * x).powf(m as f64 / 2.0) * poly
    }

    fn series_laguerre(k: u32, a: u32, x: f64) -> f64 {
        let binom = |n: u32, j: u32| -> f64 {
            (0..j).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
        };
        (0..=k)
            .map(|j| {
                sign(j as i64) * binom(k + a, k - j) * x.powi(j as i32)
                    / ln_factorial(j).exp()
            })
            .sum()
    }

    #[test]
    fn legendre_spot_values() {
        assert_eq!(assoc_legendre(0, 0, 0.37).unwrap(), 1.0);
        assert_eq!(assoc_legendre(2, 0, 1.0).unwrap(), 1.0);
        assert_eq!(assoc_legendre(1, 1, 0.0).unwrap(), -1.0);
        assert_eq!(series_legendre(1, 1, 0.0), -1.0);
    }

    #[test]
    fn legendre_matches_series_oracle() {
        for l in 0..=10 {
            for m in 0..=l {
                for &x in &[-0.93, -0.5, -0.1, 0.0, 0.27, 0.66, 0.99] {
                    let got = assoc_legendre(l, m as i32, x).unwrap();
                    let want = series_legendre(l, m, x);
                    assert!(
                        (got - want).abs() <= 1e-11 * want.abs().max(1.0),
                        "P_{l}^{m}({x}): {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn negative_order_relation() {
        // P_1^{-1} = -(0!/2!) P_1^1 = sqrt(1-x²)/2
        let x = 0.3;
        let got = assoc_legendre(1, -1, x).unwrap();
        assert!((got - 0.5 * (1.0 - x * x).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn legendre_rejects_bad_arguments() {
        assert!(assoc_legendre(2, 3, 0.0).is_err());
        assert!(assoc_legendre(2, -3, 0.0).is_err());
        assert!(assoc_legendre(2, 1, 1.5).is_err());
        assert!(assoc_legendre(2, 1, f64::NAN).is_err());
        assert!(assoc_legendre(51, 0, 0.0).is_err());
    }

    #[test]
    fn derivative_spot_values() {
        assert!((assoc_legendre_deriv(1, 0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((assoc_legendre_deriv(2, 0, 0.3).unwrap() - 0.9).abs() < 1e-14);
        assert!(assoc_legendre_deriv(1, 1, 1.0).is_err());
        assert!(assoc_legendre_deriv(3, 0, -1.0).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-5;
        for l in 0..=10u32 {
            for m in -(l as i32)..=(l as i32) {
                for &x in &[-0.8, -0.35, 0.1, 0.55, 0.9] {
                    let d = assoc_legendre_deriv(l, m, x).unwrap();
                    let fd = (assoc_legendre(l, m, x + h).unwrap()
                        - assoc_legendre(l, m, x - h).unwrap())
                        / (2.0 * h);
                    let scale = d.abs().max(assoc_legendre(l, m, x).unwrap().abs()).max(1.0);
                    assert!((d - fd).abs() <= 1e-7 * scale, "L={l} M={m} x={x}: {d} vs {fd}");
                }
            }
        }
    }

    #[test]
    fn theta_derivative_agrees_with_chain_rule() {
        for l in 0..=6u32 {
            for m in -(l as i32)..=(l as i32) {
                for &t in &[0.2f64, 1.0, 1.9, 2.8] {
                    let chain = -t.sin() * assoc_legendre_deriv(l, m, t.cos()).unwrap();
                    let ladder = assoc_legendre_dtheta(l, m, t).unwrap();
                    assert!((chain - ladder).abs() <= 1e-11 * chain.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn parity_examples() {
        let (a, b) = legendre_parity(2, 1, 0.4).unwrap();
        assert!((a - b).abs() < 1e-15);
        assert_eq!(legendre_parity(3, 0, 0.0).unwrap(), (0.0, 0.0));
        let (a, b) = legendre_parity(5, 3, -0.8).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn laguerre_spot_values() {
        for a in 0..5 {
            assert_eq!(assoc_laguerre(0, a, 3.3).unwrap(), 1.0);
        }
        assert_eq!(assoc_laguerre(1, 1, 2.0).unwrap(), 0.0);
        assert_eq!(assoc_laguerre(2, 0, 0.0).unwrap(), 1.0);
        assert!(assoc_laguerre(2, 0, -0.1).is_err());
    }

    #[test]
    fn laguerre_matches_series_and_derivative() {
        for k in 0..8 {
            for a in 0..9 {
                for &x in &[0.0, 0.4, 1.7, 5.5, 12.0] {
                    let got = assoc_laguerre(k, a, x).unwrap();
                    let want = series_laguerre(k, a, x);
                    assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0));
                    let h = 1e-5 * x.max(1.0);
                    if x > h {
                        let fd = (assoc_laguerre(k, a, x + h).unwrap()
                            - assoc_laguerre(k, a, x - h).unwrap())
                            / (2.0 * h);
                        let d = assoc_laguerre_deriv(k, a, x).unwrap();
                        assert!((d - fd).abs() <= 1e-6 * d.abs().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn harmonic_spot_values() {
        let y00 = spherical_harmonic(0, 0, 1.1, 2.2).unwrap();
        assert!((y00.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15 && y00.im == 0.0);
        let y10 = spherical_harmonic(1, 0, PI / 2.0, 0.0).unwrap();
        assert!(y10.norm() < 1e-16);
        assert!(spherical_harmonic(1, 2, 0.3, 0.0).is_err());
        assert!(spherical_harmonic(1, 0, -0.1, 0.0).is_err());
    }

    #[test]
    fn quantum_number_invariants() {
        assert!(QuantumNumbers::new(0, 0, 0).is_err());
        assert!(QuantumNumbers::new(2, 2, 0).is_err());
        assert!(QuantumNumbers::new(3, 1, -2).is_err());
        let qn = QuantumNumbers::new(3, 2, -2).unwrap();
        assert_eq!((qn.n(), qn.l(), qn.m()), (3, 2, -2));
    }
}

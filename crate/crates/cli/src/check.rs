//! The `check` invariant suites. Every tolerance is expressed in natural units
//! (`ħ/a₀`, `ħ`, `1/a₀`) so the suites pass unchanged under `--units si`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use curvimom::analysis::{
    cartesian_reality_check, ci_uniqueness_demo, expectation, force_balance, inv_r2_closed_form,
    inv_r2_quadrature, inv_r3_closed_form, inv_r3_quadrature, multiplicative_expectation,
    naive_ehrenfest_residual, natural_unit, p_theta_spectrum_scan,
};
use curvimom::geometry::{CoordinateKind, CoordinateSpec, CoordinateSystem, Topology};
use curvimom::operators::{
    canonical_momentum, commutator_pp_residual, commutator_qp_residual, naive_momentum,
};
use curvimom::specfun::{assoc_legendre, assoc_legendre_deriv, legendre_parity, QuantumNumbers};
use curvimom::states::{hydrogen_state, random_bound_trial};
use curvimom::Result;

use crate::config::{Format, RunConfig};
use crate::{exit, Failure, Outcome};

pub const COMMUTATOR_SAMPLES: usize = 100;
pub const CI_SEED_PAIRS: usize = 10;
pub const TRIALS_PER_AXIS: usize = 10;

/// Pass count and the worst `residual / tolerance` seen; errors count as failures.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub passed: usize,
    pub total: usize,
    pub worst_ratio: f64,
}

impl SuiteResult {
    fn new(suite: &'static str) -> Self {
        Self {
            suite,
            passed: 0,
            total: 0,
            worst_ratio: 0.0,
        }
    }

    pub fn ok(&self) -> bool {
        self.total > 0 && self.passed == self.total
    }

    fn record(&mut self, residual: f64, tolerance: f64) {
        self.total += 1;
        let ratio = residual.abs() / tolerance;
        if ratio <= 1.0 {
            self.passed += 1;
        }
        // NaN never passes and always becomes the worst.
        if ratio.is_nan() || ratio > self.worst_ratio {
            self.worst_ratio = ratio;
        }
    }

    fn record_result(&mut self, sample: Result<(f64, f64)>) {
        match sample {
            Ok((residual, tolerance)) => self.record(residual, tolerance),
            Err(_) => self.record(f64::INFINITY, 1.0),
        }
    }
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    rng: ChaCha8Rng,
}

impl Ctx<'_> {
    fn hbar(&self) -> f64 {
        self.cfg.constants.hbar()
    }

    fn a0(&self) -> f64 {
        self.cfg.constants.a0()
    }

    fn seed(&mut self) -> u64 {
        self.rng.gen()
    }
}

fn hydrogen_states(nmax: u32) -> Vec<QuantumNumbers> {
    let mut out = Vec::new();
    for n in 1..=nmax {
        for l in 0..n {
            for m in -(l as i32)..=(l as i32) {
                out.push(QuantumNumbers::new(n, l, m).expect("enumerated quantum numbers are valid"));
            }
        }
    }
    out
}

fn parity(_: &mut Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("parity");
    for l in 0..=10u32 {
        for m in 0..=l as i32 {
            for k in 0..=100 {
                let x = -1.0 + k as f64 / 50.0;
                s.record_result(legendre_parity(l, m, x).map(|(a, b)| (a - b, 1e-12 * a.abs().max(f64::MIN_POSITIVE))));
            }
        }
    }
    s
}

/// `(x²-1)P' - L x P + (L+M) P_{L-1}` against `1e-10` times the largest term on the grid.
pub fn recurrence_residuals(l: u32, m: i32) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    let mut scale = 0.0f64;
    for k in 1..100 {
        let x = -1.0 + k as f64 / 50.0;
        let d = assoc_legendre_deriv(l, m, x)?;
        let p = assoc_legendre(l, m, x)?;
        let lower = if l as i32 > m { assoc_legendre(l - 1, m, x)? } else { 0.0 };
        let a = l as f64 * x * p;
        let b = (l as i32 + m) as f64 * lower;
        scale = scale.max(a.abs()).max(b.abs()).max(((x * x - 1.0) * d).abs());
        rows.push((x * x - 1.0) * d - a + b);
    }
    let scale = scale.max(1.0);
    Ok(rows.into_iter().map(|r| (r, 1e-10 * scale)).collect())
}

fn recurrence(_: &mut Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("recurrence");
    for l in 0..=10u32 {
        for m in 0..=l as i32 {
            match recurrence_residuals(l, m) {
                Ok(rows) => rows.into_iter().for_each(|(r, t)| s.record(r, t)),
                Err(_) => s.record(f64::INFINITY, 1.0),
            }
        }
    }
    s
}

fn hydrogen_norms(ctx: &mut Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("hydrogen-norms");
    for qn in hydrogen_states(5) {
        let psi = hydrogen_state(qn, &ctx.cfg.constants);
        s.record_result(psi.norm_squared(&ctx.cfg.quadrature).map(|i| ((i.value - 1.0).norm(), 1e-10)));
    }
    s
}

/// Strictly interior draw: poles and the origin are kept at a distance.
pub fn interior_point(spec: &CoordinateSpec, u: f64, length: f64) -> f64 {
    match spec.topology {
        Topology::HalfLine => length * (0.05 + 6.0 * u),
        Topology::Line => length * (-3.0 + 6.0 * u),
        Topology::CompactNonperiodic => 0.02 + (PI - 0.04) * u,
        Topology::CompactPeriodic => 2.0 * PI * u,
    }
}

fn commutators(ctx: &mut Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("commutators");
    let c = ctx.cfg.constants;
    for system in CoordinateSystem::presets() {
        for sample in 0..COMMUTATOR_SAMPLES {
            let state = if system.name == "spherical" && sample % 2 == 0 {
                let n = ctx.rng.gen_range(1..=4u32);
                let l = ctx.rng.gen_range(0..n);
                let m = ctx.rng.gen_range(-(l as i32)..=l as i32);
                QuantumNumbers::new(n, l, m).map(|qn| hydrogen_state(qn, &c))
            } else {
                let seed = ctx.seed();
                random_bound_trial(&system, seed, c.a0())
            };
            let point: Vec<f64> = system
                .coords
                .iter()
                .map(|spec| interior_point(spec, ctx.rng.gen(), c.a0()))
                .collect();
            let sample = state.and_then(|psi| {
                let scale = psi.value(&point).norm();
                let units: Vec<f64> = (0..system.dim())
                    .map(|a| canonical_momentum(&system, a, &c).map(|op| natural_unit(&op, &c)))
                    .collect::<Result<_>>()?;
                let lengths: Vec<f64> = system
                    .coords
                    .iter()
                    .map(|spec| match spec.kind {
                        CoordinateKind::Linear => c.a0(),
                        CoordinateKind::Angular => 1.0,
                    })
                    .collect();
                let mut worst = 0.0f64;
                for i in 0..system.dim() {
                    for j in 0..system.dim() {
                        let qp = commutator_qp_residual(&system, i, j, &psi, &point, &c)?;
                        let pp = commutator_pp_residual(&system, i, j, &psi, &point, &c)?;
                        // Residuals are measured in the natural unit of the product they cancel.
                        worst = worst.max(qp.norm() / (lengths[i] * units[j]));
                        worst = worst.max(pp.norm() / (units[i] * units[j]));
                    }
                }
                Ok((worst, 1e-7 * scale))
            });
            s.record_result(sample);
        }
    }
    s
}

fn reality_scan(ctx: &mut Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("reality-scan");
    let c = ctx.cfg.constants;
    let q = ctx.cfg.quadrature;
    let sph = CoordinateSystem::make_spherical();
    let ops = (
        canonical_momentum(&sph, 0, &c),
        naive_momentum(&sph, 0, &c),
        canonical_momentum(&sph, 2, &c),
    );
    let (Ok(p_r), Ok(naive_r), Ok(p_phi)) = ops else {
        s.record(f64::INFINITY, 1.0);
        return s;
    };
    let momentum_unit = ctx.hbar() / ctx.a0();
    for qn in hydrogen_states(4) {
        let psi = hydrogen_state(qn, &c);
        s.record_result(expectation(&p_r, &psi, &q).map(|r| (r.value.norm(), 1e-9 * momentum_unit)));
        s.record_result(expectation(&naive_r, &psi, &q).and_then(|r| {
            let oracle = ctx.hbar() * multiplicative_expectation(&psi, 0, |x| 1.0 / x, &q)?.value.re;
            Ok((r.value.im - oracle, 1e-8 * oracle))
        }));
    }
    match p_theta_spectrum_scan(6, &c, &q) {
        Ok(entries) => {
            for e in entries {
                s.record(e.report.value.norm(), 1e-9 * ctx.hbar());
            }
        }
        Err(_) => s.record(f64::INFINITY, 1.0),
    }
    for m in -5i32..=5 {
        s.record_result(QuantumNumbers::new(6, 5, m).and_then(|qn| {
            let r = expectation(&p_phi, &hydrogen_state(qn, &c), &q)?;
            let want = m as f64 * ctx.hbar();
            Ok(((r.value - want).norm(), 1e-10 * want.abs().max(ctx.hbar())))
        }));
    }
    for system in CoordinateSystem::presets() {
        for axis in 0..system.dim() {
            for _ in 0..TRIALS_PER_AXIS {
                let seed = ctx.seed();
                s.record_result(canonical_momentum(&system, axis, &c).and_then(|op| {
                    let psi = random_bound_trial(&system, seed, c.a0())?;
                    let r = expectation(&op, &psi, &q)?;
                    Ok((r.hermiticity_defect, r.reality_tolerance(natural_unit(&op, &c))))
                }));
            }
        }
    }
    s
}

fn force_balance_suite(ctx: &mut Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("force-balance");
    let c = ctx.cfg.constants;
    let q = ctx.cfg.quadrature;
    for n in 1..=5u32 {
        for l in 0..n {
            let Ok(qn) = QuantumNumbers::new(n, l, 0) else {
                s.record(f64::INFINITY, 1.0);
                continue;
            };
            let closed2 = inv_r2_closed_form(qn, &c);
            s.record_result(inv_r2_quadrature(qn, &c, &q).map(|v| (v - closed2, 1e-9 * closed2)));
            let want = -c.e2() * closed2;
            // Strict negativity is folded in: a non-negative value is an infinite residual.
            s.record_result(naive_ehrenfest_residual(qn, &c, &q).map(|f| {
                let r = if f < 0.0 { f - want } else { f64::INFINITY };
                (r, 1e-8 * want.abs())
            }));
            if l >= 1 {
                s.record_result(force_balance(qn, &c, &q).map(|fb| (fb.relative_residual(), 1e-8)));
                s.record_result(inv_r3_closed_form(qn, &c).and_then(|closed3| {
                    Ok((inv_r3_quadrature(qn, &c, &q)? - closed3, 1e-9 * closed3))
                }));
            }
        }
    }
    s
}

fn ci_uniqueness(ctx: &mut Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("ci-uniqueness");
    let c = ctx.cfg.constants;
    let q = ctx.cfg.quadrature;
    for system in CoordinateSystem::presets() {
        for axis in 0..system.dim() {
            if system.coords[axis].topology.is_compact() {
                continue;
            }
            for _ in 0..CI_SEED_PAIRS {
                let (a, b) = (ctx.seed(), ctx.seed());
                s.record_result(
                    ci_uniqueness_demo(&system, axis, a, b, &c, &q)
                        .map(|(ca, cb)| (ca.abs().max(cb.abs()) * c.a0(), 1e-8)),
                );
            }
        }
    }
    s
}

pub const WAVENUMBERS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

fn cartesian_baseline(ctx: &mut Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("cartesian-baseline");
    let c = ctx.cfg.constants;
    let q = ctx.cfg.quadrature;
    let unit = ctx.hbar() / ctx.a0();
    for _ in 0..TRIALS_PER_AXIS {
        let seed = ctx.seed();
        s.record_result(cartesian_reality_check(seed, 0.0, &c, &q).map(|r| (r.value.norm(), 1e-10 * unit)));
        for k in WAVENUMBERS {
            let k = k / ctx.a0();
            let want = ctx.hbar() * k;
            s.record_result(
                cartesian_reality_check(seed, k, &c, &q).map(|r| ((r.value - want).norm(), 1e-9 * want)),
            );
        }
    }
    s
}

/// Runs every suite in order; one RNG stream seeded from `cfg.seed` feeds them all.
pub fn run_suites(cfg: &RunConfig) -> Vec<SuiteResult> {
    let mut ctx = Ctx {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
    };
    let suites: [fn(&mut Ctx) -> SuiteResult; 8] = [
        parity,
        recurrence,
        hydrogen_norms,
        commutators,
        reality_scan,
        force_balance_suite,
        ci_uniqueness,
        cartesian_baseline,
    ];
    suites.iter().map(|f| f(&mut ctx)).collect()
}

#[derive(Serialize)]
struct SuiteRecord<'a> {
    suite: &'a str,
    status: &'a str,
    passed: usize,
    total: usize,
    worst_ratio: f64,
}

pub fn check(cfg: &RunConfig) -> std::result::Result<Outcome, Failure> {
    let results = run_suites(cfg);
    let all_ok = results.iter().all(SuiteResult::ok);
    let status = |r: &SuiteResult| if r.ok() { "PASS" } else { "FAIL" };
    let stdout = match cfg.format_or(Format::Text) {
        Format::Text => {
            let mut out = String::new();
            for r in &results {
                let _ = writeln!(
                    out,
                    "{:<20} {}  {:>5}/{:<5} worst residual/tolerance {:.3e}",
                    r.suite,
                    status(r),
                    r.passed,
                    r.total,
                    r.worst_ratio
                );
            }
            let passed = results.iter().filter(|r| r.ok()).count();
            let _ = writeln!(
                out,
                "{passed}/{} suites passed (seed {}, orders {}/{}/{}, {} units)",
                results.len(),
                cfg.seed,
                cfg.quadrature.radial_order,
                cfg.quadrature.theta_order,
                cfg.quadrature.phi_order,
                cfg.units.label()
            );
            out
        }
        fmt => {
            let records: Vec<SuiteRecord> = results
                .iter()
                .map(|r| SuiteRecord {
                    suite: r.suite,
                    status: status(r),
                    passed: r.passed,
                    total: r.total,
                    worst_ratio: r.worst_ratio,
                })
                .collect();
            if fmt == Format::Json {
                records
                    .iter()
                    .map(|r| serde_json::to_string(r).expect("plain records serialize") + "\n")
                    .collect()
            } else {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in &records {
                    w.serialize(r).map_err(|e| Failure { code: exit::SUITE_FAILURE, message: e.to_string() })?;
                }
                let bytes = w
                    .into_inner()
                    .map_err(|e| Failure { code: exit::SUITE_FAILURE, message: e.to_string() })?;
                String::from_utf8(bytes).expect("csv output is utf-8")
            }
        }
    };
    Ok(Outcome {
        stdout,
        code: if all_ok { exit::SUCCESS } else { exit::SUITE_FAILURE },
    })
}

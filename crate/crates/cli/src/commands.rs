use std::fmt::Write as _;

use serde::Serialize;

use curvimom::analysis::{
    expectation, force_balance, inv_r2_closed_form, inv_r2_quadrature, inv_r3_closed_form,
    inv_r3_quadrature, natural_unit, p_theta_spectrum_scan, ExpectationReport,
};
use curvimom::geometry::CoordinateSystem;
use curvimom::operators::canonical_momentum;
use curvimom::specfun::QuantumNumbers;
use curvimom::states::hydrogen_state;

use crate::config::{Format, RunConfig};
use crate::parse::{OperatorSpec, StateSpec};
use crate::{exit, Failure, Outcome};

pub const MAX_TABLE_N: u32 = 6;
pub const MAX_SCAN_L: u32 = 10;
/// `|⟨p_θ⟩|` bound in units of `ħ` for `p-theta-scan`.
pub const P_THETA_TOLERANCE: f64 = 1e-9;

#[derive(Serialize)]
struct ExpectRecord<'a> {
    command: &'a str,
    value_re: f64,
    value_im: f64,
    defect: f64,
    boundary_term: f64,
    quad_error: f64,
    units: &'a str,
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| Failure { code: exit::SUITE_FAILURE, message: e.to_string() })?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure { code: exit::SUITE_FAILURE, message: e.to_string() })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_lines<T: Serialize>(rows: &[T]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row).expect("plain records serialize"));
        out.push('\n');
    }
    out
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.12e}"))
}

/// `⟨ψ|p|ψ⟩` for one operator/state pair; exit 3 when the defect exceeds the reality tolerance.
pub fn expect(op_spec: &str, state_spec: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let op_parsed: OperatorSpec = op_spec.parse()?;
    let state_parsed: StateSpec = state_spec.parse()?;
    let state = state_parsed.build(cfg.seed, &cfg.constants)?;
    let op = op_parsed.build(state.system(), &cfg.constants)?;
    let report = expectation(&op, &state, &cfg.quadrature)?;
    let unit = natural_unit(&op, &cfg.constants);
    let code = if report.is_real(unit) { exit::SUCCESS } else { exit::NOT_REAL };
    let record = ExpectRecord {
        command: "expect",
        value_re: report.value.re,
        value_im: report.value.im,
        defect: report.hermiticity_defect,
        boundary_term: report.boundary_term,
        quad_error: report.quadrature_error,
        units: cfg.units.label(),
    };
    let stdout = match cfg.format_or(Format::Json) {
        Format::Json => json_lines(&[record]),
        Format::Csv => csv_bytes(&[record])?,
        Format::Text => expect_text(op_spec, state_spec, &report, unit, cfg),
    };
    Ok(Outcome { stdout, code })
}

fn expect_text(op: &str, state: &str, r: &ExpectationReport, unit: f64, cfg: &RunConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "⟨{op}⟩ on {state} ({} units)", cfg.units.label());
    let _ = writeln!(s, "  value          {:+.12e} {:+.12e}i", r.value.re, r.value.im);
    let _ = writeln!(s, "  defect         {:+.12e}", r.hermiticity_defect);
    let _ = writeln!(s, "  boundary term  {:+.12e}", r.boundary_term);
    let _ = writeln!(s, "  quad error     {:.3e}", r.quadrature_error);
    let _ = writeln!(s, "  tolerance      {:.3e}", r.reality_tolerance(unit));
    let _ = writeln!(s, "  real           {}", if r.is_real(unit) { "yes" } else { "no" });
    s
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub n: u32,
    #[serde(rename = "L")]
    pub l: u32,
    pub inv_r2_quad: f64,
    pub inv_r2_closed: f64,
    pub inv_r3_quad: Option<f64>,
    pub inv_r3_closed: Option<f64>,
    /// Relative force-balance residual.
    pub residual: Option<f64>,
    /// `|⟨p_r⟩|`
    pub p_r: f64,
    /// `|⟨p_θ⟩|`
    pub p_theta: f64,
}

/// One row per `(n, L)` with `M = 0`; inverse-cube and force-balance cells are empty for `L = 0`.
pub fn hydrogen_rows(nmax: u32, cfg: &RunConfig) -> Result<Vec<TableRow>, Failure> {
    if !(1..=MAX_TABLE_N).contains(&nmax) {
        return Err(Failure::usage(format!("--nmax must be in 1..={MAX_TABLE_N}, got {nmax}")));
    }
    let c = &cfg.constants;
    let q = &cfg.quadrature;
    let system = CoordinateSystem::make_spherical();
    let p_r = canonical_momentum(&system, 0, c)?;
    let p_theta = canonical_momentum(&system, 1, c)?;
    let mut rows = Vec::new();
    for n in 1..=nmax {
        for l in 0..n {
            let qn = QuantumNumbers::new(n, l, 0)?;
            let psi = hydrogen_state(qn, c);
            let (inv_r3_quad, inv_r3_closed, residual) = if l == 0 {
                (None, None, None)
            } else {
                (
                    Some(inv_r3_quadrature(qn, c, q)?),
                    Some(inv_r3_closed_form(qn, c)?),
                    Some(force_balance(qn, c, q)?.relative_residual()),
                )
            };
            rows.push(TableRow {
                n,
                l,
                inv_r2_quad: inv_r2_quadrature(qn, c, q)?,
                inv_r2_closed: inv_r2_closed_form(qn, c),
                inv_r3_quad,
                inv_r3_closed,
                residual,
                p_r: expectation(&p_r, &psi, q)?.value.norm(),
                p_theta: expectation(&p_theta, &psi, q)?.value.norm(),
            });
        }
    }
    Ok(rows)
}

pub fn hydrogen_table(nmax: u32, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let rows = hydrogen_rows(nmax, cfg)?;
    let stdout = match cfg.format_or(Format::Csv) {
        Format::Csv => csv_bytes(&rows)?,
        Format::Json => json_lines(&rows),
        Format::Text => {
            let mut s = format!(
                "{:>2} {:>2} {:>20} {:>20} {:>20} {:>20} {:>20} {:>10} {:>10}\n",
                "n", "L", "<1/r^2> quad", "<1/r^2> closed", "<1/r^3> quad", "<1/r^3> closed", "residual", "|p_r|", "|p_theta|"
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>2} {:>2} {:>20.12e} {:>20.12e} {:>20} {:>20} {:>20} {:>10.2e} {:>10.2e}",
                    r.n,
                    r.l,
                    r.inv_r2_quad,
                    r.inv_r2_closed,
                    fmt_opt(r.inv_r3_quad),
                    fmt_opt(r.inv_r3_closed),
                    r.residual.map_or_else(|| "-".to_string(), |x| format!("{x:.3e}")),
                    r.p_r,
                    r.p_theta
                );
            }
            s
        }
    };
    Ok(Outcome { stdout, code: exit::SUCCESS })
}

#[derive(Serialize)]
struct ScanRow {
    #[serde(rename = "L")]
    l: u32,
    #[serde(rename = "M")]
    m: i32,
    value_re: f64,
    value_im: f64,
    defect: f64,
    boundary_term: f64,
    quad_error: f64,
}

/// `⟨p_θ⟩` over all `(L, M)` up to `lmax`; exit 1 when any entry exceeds [`P_THETA_TOLERANCE`].
pub fn p_theta_scan(lmax: u32, cfg: &RunConfig) -> Result<Outcome, Failure> {
    if lmax > MAX_SCAN_L {
        return Err(Failure::usage(format!("--lmax must be at most {MAX_SCAN_L}, got {lmax}")));
    }
    let entries = p_theta_spectrum_scan(lmax, &cfg.constants, &cfg.quadrature)?;
    let bound = P_THETA_TOLERANCE * cfg.constants.hbar();
    let clean = entries.iter().all(|e| e.report.value.norm() <= bound);
    let rows: Vec<ScanRow> = entries
        .iter()
        .map(|e| ScanRow {
            l: e.l,
            m: e.m,
            value_re: e.report.value.re,
            value_im: e.report.value.im,
            defect: e.report.hermiticity_defect,
            boundary_term: e.report.boundary_term,
            quad_error: e.report.quadrature_error,
        })
        .collect();
    let stdout = match cfg.format_or(Format::Csv) {
        Format::Csv => csv_bytes(&rows)?,
        Format::Json => json_lines(&rows),
        Format::Text => {
            let mut s = format!("{:>2} {:>3} {:>20} {:>20}\n", "L", "M", "Re <p_theta>", "Im <p_theta>");
            for r in &rows {
                let _ = writeln!(s, "{:>2} {:>3} {:>+20.3e} {:>+20.3e}", r.l, r.m, r.value_re, r.value_im);
            }
            s
        }
    };
    Ok(Outcome {
        stdout,
        code: if clean { exit::SUCCESS } else { exit::SUITE_FAILURE },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_header_is_fixed() {
        let out = hydrogen_table(2, &RunConfig::default()).unwrap();
        let mut lines = out.stdout.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,L,inv_r2_quad,inv_r2_closed,inv_r3_quad,inv_r3_closed,residual,p_r,p_theta"
        );
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(&first[..2], ["1", "0"]);
        assert_eq!(&first[4..7], ["", "", ""]);
        assert_eq!(out.stdout.lines().count(), 4);
    }

    #[test]
    fn table_bounds() {
        assert_eq!(hydrogen_rows(0, &RunConfig::default()).unwrap_err().code, exit::USAGE);
        assert_eq!(hydrogen_rows(7, &RunConfig::default()).unwrap_err().code, exit::USAGE);
    }

    #[test]
    fn expect_json_keys() {
        let out = expect("canonical:phi", "hydrogen:n=2,L=1,M=1", &RunConfig::default()).unwrap();
        assert_eq!(out.code, exit::SUCCESS);
        let v: serde_json::Value = serde_json::from_str(out.stdout.trim()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        let mut want = vec!["command", "value_re", "value_im", "defect", "boundary_term", "quad_error", "units"];
        want.sort();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, want);
        assert!((v["value_re"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    }
}

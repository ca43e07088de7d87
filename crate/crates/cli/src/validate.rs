//! Cross-checks of the closed-form results against independent routes.

use lame_core::floquet::ODE_TOL;
use lame_core::{
    consistency_check, integrate_monodromy, verify_decomposition, Band, LameBands, Modulus, ThetaContext,
};
use serde_json::{json, Map, Value};

use crate::args::{CheckName, ValidateArgs};
use crate::output::{fmt_g, num, Cell, Document, Table};
use crate::{modulus, CliError, Outcome};

pub const DISPERSION_TOL: f64 = 1e-6;
pub const WEIERSTRASS_TOL: f64 = 1e-10;
pub const DECOMPOSITION_TOL: f64 = 1e-9;
pub const ZETA_PRIME_TOL: f64 = 1e-10;
pub const REALITY_TOL: f64 = 1e-12;

/// Samples per band in the oracle comparison.
pub const ORACLE_SAMPLES: usize = 33;
/// Reality grid is `REALITY_GRID × REALITY_GRID`.
pub const REALITY_GRID: usize = 20;

/// Distance from 0 or 1 below which a near-degenerate warning is printed.
const NEAR_DEGENERATE: f64 = 1e-3;

/// One compared quantity.
struct Row {
    check: &'static str,
    quantity: String,
    value: Option<f64>,
    reference: Option<f64>,
    residual: f64,
    /// `None` for informational rows that do not gate the exit code.
    tolerance: Option<f64>,
    /// False when the reference itself is less accurate than the tolerance.
    resolved: bool,
}

impl Row {
    fn gates(&self) -> bool {
        self.tolerance.is_some() && self.resolved
    }

    fn passes(&self) -> bool {
        !self.gates() || self.residual < self.tolerance.unwrap_or(f64::INFINITY)
    }

    fn verdict(&self) -> Cell {
        match self.tolerance {
            None => Cell::Text("info".into()),
            Some(_) if !self.resolved => Cell::Text("unresolved".into()),
            Some(_) => Cell::Bool(self.passes()),
        }
    }
}

/// Bands whose monodromy entries reach `|M|` carry a trace error of about
/// `ODE_TOL·|M|`. Near m = 1 band 1 is exponentially thin and this exceeds
/// any useful tolerance, so the comparison is reported but cannot gate.
fn dispersion_rows(
    lb: &LameBands,
    tol: f64,
    rows: &mut Vec<Row>,
    warnings: &mut Vec<String>,
) -> Result<(), CliError> {
    let md = lb.modulus();
    let two_k = 2.0 * lb.context().k();
    for band in Band::ALL {
        let d = lb.dispersion(band, ORACLE_SAMPLES, lb.default_k_max())?;
        let mut worst = (f64::NEG_INFINITY, 0.0, 0.0);
        let mut oracle_err = 0.0f64;
        for p in &d.samples {
            let mo = integrate_monodromy(p.eps, &md, 2)?;
            let size = mo.m11.abs().max(mo.m12.abs()).max(mo.m21.abs()).max(mo.m22.abs());
            oracle_err = oracle_err.max(ODE_TOL * size);
            let half = 0.5 * mo.discriminant();
            let cos = (two_k * p.k).cos();
            let r = (half - cos).abs();
            if r > worst.0 {
                worst = (r, half, cos);
            }
        }
        rows.push(Row {
            check: "dispersion",
            quantity: format!("band{}", band.index()),
            value: Some(worst.1),
            reference: Some(worst.2),
            residual: worst.0,
            tolerance: Some(tol),
            resolved: oracle_err <= tol,
        });
        if oracle_err > tol {
            warnings.push(format!(
                "warning: band {} oracle error bound {} exceeds tolerance {}; comparison reported but not gating",
                band.index(),
                fmt_g(oracle_err)?,
                fmt_g(tol)?
            ));
        }
    }
    Ok(())
}

fn weierstrass_rows(md: &Modulus, tol: f64, rows: &mut Vec<Row>) -> Result<(), CliError> {
    let r = consistency_check(md)?;
    let names = ["width1", "gap1", "width2", "gap2"];
    for i in 0..4 {
        rows.push(Row {
            check: "weierstrass",
            quantity: names[i].into(),
            value: Some(r.weierstrass[i]),
            reference: Some(r.jacobi_complement[i]),
            residual: (r.weierstrass[i] - r.jacobi_complement[i]).abs(),
            tolerance: Some(tol),
            resolved: true,
        });
    }
    // Position-by-position against the same modulus; exact only at m = 1/2.
    for i in 0..4 {
        rows.push(Row {
            check: "weierstrass",
            quantity: format!("{}_same_modulus", names[i]),
            value: Some(r.weierstrass[i]),
            reference: Some(r.jacobi[i]),
            residual: (r.weierstrass[i] - r.jacobi[i]).abs(),
            tolerance: None,
            resolved: true,
        });
    }
    rows.push(Row {
        check: "weierstrass",
        quantity: "affine_edge_map".into(),
        value: Some(r.affine_slope),
        reference: Some(-r.scale),
        residual: r.affine_max_dev,
        tolerance: Some(tol),
        resolved: true,
    });
    Ok(())
}

fn decomposition_rows(md: &Modulus, tol: Option<f64>, rows: &mut Vec<Row>) -> Result<(), CliError> {
    let r = verify_decomposition(md, lame_core::decomposition::DEFAULT_TRUNCATION, None)?;
    rows.push(Row {
        check: "decomposition",
        quantity: "sech_sum".into(),
        value: None,
        reference: None,
        residual: r.sup_diff,
        tolerance: Some(tol.unwrap_or(DECOMPOSITION_TOL)),
        resolved: true,
    });
    for (q, v) in [("zeta_prime", r.zeta_prime_residual), ("zeta_prime_fourier", r.fourier_residual)] {
        rows.push(Row {
            check: "decomposition",
            quantity: q.into(),
            value: None,
            reference: None,
            residual: v,
            tolerance: Some(tol.unwrap_or(ZETA_PRIME_TOL)),
            resolved: true,
        });
    }
    Ok(())
}

fn reality_rows(ctx: &ThetaContext, tol: f64, rows: &mut Vec<Row>) -> Result<(), CliError> {
    let mut worst = [0.0f64; 3];
    let n = REALITY_GRID;
    for i in 0..n {
        for j in 0..n {
            let x = ctx.k() * (i + 1) as f64 / (n + 1) as f64;
            let y = ctx.kbar() * (j + 1) as f64 / (n + 1) as f64;
            for (w, r) in worst.iter_mut().zip(ctx.reality_checks(y, x)?) {
                *w = w.max(r.abs());
            }
        }
    }
    for (q, w) in ["re_zeta_iy", "re_zeta_k_plus_iy", "re_zeta_pair_sum"].iter().zip(worst) {
        rows.push(Row {
            check: "reality",
            quantity: (*q).into(),
            value: None,
            reference: None,
            residual: w,
            tolerance: Some(tol),
            resolved: true,
        });
    }
    Ok(())
}

pub fn validate(args: &ValidateArgs) -> Result<Outcome, CliError> {
    let requested = modulus(args.common.m)?;
    if let Some(t) = args.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive (got {t})")));
        }
    }
    let (md, clamped) = requested.clamped();
    let mut warnings = Vec::new();
    if clamped {
        warnings.push(format!(
            "warning: m = {} clamped to {} (the lattice degenerates at m = 0 and m = 1)",
            fmt_g(requested.m)?,
            fmt_g(md.m)?
        ));
    } else if md.m < NEAR_DEGENERATE || md.m1() < NEAR_DEGENERATE {
        warnings.push(format!(
            "warning: m = {} is near the degenerate limit (m1 = 1 - m = {:e}); tolerances unchanged",
            fmt_g(md.m)?,
            md.m1()
        ));
    }
    let lb = LameBands::new(md)?;
    let run = |name: CheckName| args.check == CheckName::All || args.check == name;
    let mut rows = Vec::new();
    if run(CheckName::Dispersion) {
        dispersion_rows(&lb, args.tol.unwrap_or(DISPERSION_TOL), &mut rows, &mut warnings)?;
    }
    if run(CheckName::Weierstrass) {
        weierstrass_rows(&md, args.tol.unwrap_or(WEIERSTRASS_TOL), &mut rows)?;
    }
    if run(CheckName::Decomposition) {
        decomposition_rows(&md, args.tol, &mut rows)?;
    }
    if run(CheckName::Reality) {
        reality_rows(lb.context(), args.tol.unwrap_or(REALITY_TOL), &mut rows)?;
    }

    let mut table = Table::new(&["check", "quantity", "value", "reference", "residual", "tolerance", "pass"]);
    table.comment("lame validate");
    table.comment(format!("m = {}", fmt_g(md.m)?));
    let opt = |v: Option<f64>| v.map_or(Cell::Empty, Cell::Num);
    let mut checks = Map::new();
    for r in &rows {
        table.push(vec![
            Cell::Text(r.check.into()),
            Cell::Text(r.quantity.clone()),
            opt(r.value),
            opt(r.reference),
            Cell::Num(r.residual),
            opt(r.tolerance),
            r.verdict(),
        ]);
        let entry = checks
            .entry(r.check)
            .or_insert_with(|| json!({ "max_residual": 0.0, "tolerance": Value::Null, "pass": true }));
        if let (Some(t), true) = (r.tolerance, r.gates()) {
            let obj = entry.as_object_mut().expect("object");
            let prev = obj["max_residual"].as_f64().unwrap_or(0.0);
            obj.insert("max_residual".into(), num(prev.max(r.residual))?);
            let tmax = obj["tolerance"].as_f64().map_or(t, |p| p.max(t));
            obj.insert("tolerance".into(), num(tmax)?);
            let ok = obj["pass"].as_bool().unwrap_or(true) && r.passes();
            obj.insert("pass".into(), Value::Bool(ok));
        } else if r.tolerance.is_some() {
            entry.as_object_mut().expect("object").insert("unresolved".into(), Value::Bool(true));
        }
    }
    let passed = rows.iter().all(Row::passes);
    Ok(Outcome {
        doc: Document {
            config: json!({
                "command": "validate",
                "m_requested": num(requested.m)?,
                "m": num(md.m)?,
                "clamped": clamped,
                "check": args.check,
                "tol": args.tol.map(num).transpose()?,
            }),
            table,
            data: None,
            checks: Value::Object(checks),
        },
        passed,
        warnings,
    })
}

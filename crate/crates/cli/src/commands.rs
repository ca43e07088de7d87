use std::f64::consts::PI;

use lame_core::decomposition::Grid;
use lame_core::{
    band_edges, compute_constants, potential_sech_sum, verify_decomposition, Band, Jacobi, LameBands, Spacing,
    C64,
};
use serde_json::{json, Value};

use crate::args::{BandSel, DecomposeArgs, DispersionArgs, EdgesArgs, SpacingArg, WavefunctionArgs};
use crate::output::{fmt_g, num, Cell, Document, Table};
use crate::{modulus, CliError, Outcome};

fn bands_of(sel: BandSel) -> Vec<Band> {
    match sel {
        BandSel::One => vec![Band::One],
        BandSel::Two => vec![Band::Two],
        BandSel::Three => vec![Band::Three],
        BandSel::All => Band::ALL.to_vec(),
    }
}

fn nums(xs: &[f64]) -> Result<Value, CliError> {
    Ok(Value::Array(xs.iter().map(|&x| num(x)).collect::<Result<_, _>>()?))
}

fn complex_text(z: C64) -> Result<String, CliError> {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    Ok(format!("{}{}{}i", fmt_g(z.re)?, sign, fmt_g(z.im.abs())?))
}

pub fn edges(args: &EdgesArgs) -> Result<Outcome, CliError> {
    let md = modulus(args.common.m)?;
    let e = band_edges(&md);
    let (w, g) = (e.widths(), e.gaps());
    let mut table = Table::new(&["eps1", "eps2", "eps3", "eps4", "eps5", "width1", "width2", "gap1", "gap2"]);
    table.comment("lame edges");
    table.comment(format!("m = {}", fmt_g(md.m)?));
    table.push(e.eps.iter().chain(&w).chain(&g).map(|&x| Cell::Num(x)).collect());
    let data = json!({ "eps": nums(&e.eps)?, "widths": nums(&w)?, "gaps": nums(&g)? });
    Ok(Outcome::ok(Document {
        config: json!({ "command": "edges", "m": num(md.m)? }),
        table,
        data: Some(data),
        checks: json!({}),
    }))
}

pub fn dispersion(args: &DispersionArgs) -> Result<Outcome, CliError> {
    let md = modulus(args.common.m)?;
    let lb = LameBands::new(md)?;
    let k_max = args.k_max.unwrap_or_else(|| lb.default_k_max());
    let spacing = match args.spacing {
        SpacingArg::T => Spacing::UniformT,
        SpacingArg::K => Spacing::UniformK,
    };
    let c = lb.context().constants;
    let mut table = Table::new(&["band", "k", "epsilon", "coord1", "coord2"]);
    table.comment("lame dispersion");
    table.comment(format!("m = {}", fmt_g(md.m)?));
    table.comment(format!("K = {}, Kbar = {}", fmt_g(c.k)?, fmt_g(c.kbar)?));
    let edge_text: Result<Vec<String>, CliError> = lb.edges().eps.iter().map(|&x| fmt_g(x)).collect();
    table.comment(format!("edges = {}", edge_text?.join(" ")));
    table.comment(format!(
        "samples = {} per band, spacing = {}, k_max = {}",
        args.samples,
        if spacing == Spacing::UniformT { "t" } else { "k" },
        fmt_g(k_max)?
    ));
    let mut monotone = serde_json::Map::new();
    for band in bands_of(args.band) {
        let d = lb.dispersion_with(band, args.samples, k_max, spacing)?;
        monotone.insert(format!("band{}", band.index()), Value::Bool(d.is_monotone()));
        for p in &d.samples {
            table.push(vec![
                Cell::Int(band.index().into()),
                Cell::Num(p.k),
                Cell::Num(p.eps),
                Cell::Num(p.pair.coords.c1),
                Cell::Num(p.pair.coords.c2),
            ]);
        }
    }
    Ok(Outcome::ok(Document {
        config: json!({
            "command": "dispersion",
            "m": num(md.m)?,
            "band": args.band,
            "samples": args.samples,
            "k_max": num(k_max)?,
            "spacing": args.spacing,
        }),
        table,
        data: None,
        checks: json!({ "monotone": monotone }),
    }))
}

/// A gnuplot script drawing every band of a dispersion CSV.
pub fn plot_script(data_path: &str) -> String {
    let quoted = data_path.replace('\'', "''");
    format!(
        "# ε(k) of each band; run with: gnuplot -p <this file>\n\
         set datafile separator ','\n\
         set datafile commentschars '#'\n\
         set key autotitle columnhead\n\
         set xlabel 'k'\n\
         set ylabel 'epsilon'\n\
         set key left top\n\
         plot for [b=1:3] '{quoted}' using 2:(column(1) == b ? column(3) : 1/0) with linespoints title sprintf('band %d', b)\n"
    )
}

pub fn wavefunction(args: &WavefunctionArgs) -> Result<Outcome, CliError> {
    let md = modulus(args.common.m)?;
    let band = match args.band {
        BandSel::All => return Err(CliError::Usage("wavefunction needs a single band (1, 2 or 3)".into())),
        b => bands_of(b)[0],
    };
    if args.samples < 2 {
        return Err(CliError::Usage(format!("--samples must be at least 2 (got {})", args.samples)));
    }
    let lb = LameBands::new(md)?;
    let k = lb.context().k();
    let x_max = args.x_max.unwrap_or(4.0 * k);
    if !(x_max > args.x_min) || !x_max.is_finite() || !args.x_min.is_finite() {
        return Err(CliError::Usage(format!("need x_min < x_max (got {} and {})", args.x_min, x_max)));
    }
    let p = lb.point(band, args.t)?;
    let n = args.samples;
    let xs: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { x_max } else { args.x_min + (x_max - args.x_min) * i as f64 / (n - 1) as f64 })
        .collect();
    let psi = lb.sample_psi(&p.pair, &xs)?;
    let ode = lb.ode_residual(&p.pair, p.eps, &xs)?;
    let quasi = lb.quasi_periodicity_residual(&p.pair, &xs)?;
    let xi = lb.floquet_multiplier(&p.pair)?;

    let mut table = Table::new(&["x", "re_psi", "im_psi", "abs_psi"]);
    table.comment("lame wavefunction");
    table.comment(format!("m = {}, band = {}, t = {}", fmt_g(md.m)?, band.index(), fmt_g(args.t)?));
    table.comment(format!("k = {}, epsilon = {}", fmt_g(p.k)?, fmt_g(p.eps)?));
    table.comment(format!("alpha1 = {}, alpha2 = {}", complex_text(p.pair.alpha1)?, complex_text(p.pair.alpha2)?));
    table.comment(format!("floquet multiplier = {}", complex_text(xi)?));
    table.comment(format!("ode_residual = {}, quasi_periodicity_residual = {}", fmt_g(ode)?, fmt_g(quasi)?));
    for s in &psi {
        table.push(vec![Cell::Num(s.x), Cell::Num(s.psi.re), Cell::Num(s.psi.im), Cell::Num(s.psi.norm())]);
    }
    Ok(Outcome::ok(Document {
        config: json!({
            "command": "wavefunction",
            "m": num(md.m)?,
            "band": args.band,
            "t": num(args.t)?,
            "x_min": num(args.x_min)?,
            "x_max": num(x_max)?,
            "samples": n,
        }),
        table,
        data: None,
        checks: json!({
            "k": num(p.k)?,
            "epsilon": num(p.eps)?,
            "alpha1": [num(p.pair.alpha1.re)?, num(p.pair.alpha1.im)?],
            "alpha2": [num(p.pair.alpha2.re)?, num(p.pair.alpha2.im)?],
            "floquet_multiplier": [num(xi.re)?, num(xi.im)?],
            "ode_residual": num(ode)?,
            "quasi_periodicity_residual": num(quasi)?,
        }),
    }))
}

/// Threshold for the `κ²sn²x = 1 - E/K - Z'(x)` route.
const ZETA_PRIME_TOL: f64 = 1e-10;

pub fn decompose(args: &DecomposeArgs) -> Result<Outcome, CliError> {
    let md = modulus(args.common.m)?;
    if !(md.m > 0.0 && md.m < 1.0) {
        return Err(lame_core::Error::ModulusOutOfRange { name: "m", value: md.m, expected: "0 < m < 1" }.into());
    }
    if args.grid_points == 0 {
        return Err(CliError::Usage("--grid-points must be positive".into()));
    }
    let c = compute_constants(&md)?;
    let x_max = args.x_max.unwrap_or(2.0 * c.k);
    if !(x_max >= args.x_min) || !x_max.is_finite() || !args.x_min.is_finite() {
        return Err(CliError::Usage(format!("need x_min <= x_max (got {} and {})", args.x_min, x_max)));
    }
    let grid = Grid { x_min: args.x_min, x_max, points: args.grid_points };
    let report = verify_decomposition(&md, args.truncation, Some(grid))?;
    let jac = Jacobi::new(md);

    let mut table = Table::new(&["x", "kappa2_sn2", "sech_sum", "difference"]);
    table.comment("lame decompose");
    table.comment(format!(
        "m = {}, truncation = {}, K = {}, Kbar = {}",
        fmt_g(md.m)?,
        args.truncation,
        fmt_g(c.k)?,
        fmt_g(c.kbar)?
    ));
    table.comment(format!("well depth (pi/2Kbar)^2 = {}", fmt_g((PI / (2.0 * c.kbar)).powi(2))?));
    table.comment(format!(
        "sup_diff = {}, zeta_prime_residual = {}, fourier_residual = {} (N = {})",
        fmt_g(report.sup_diff)?,
        fmt_g(report.zeta_prime_residual)?,
        fmt_g(report.fourier_residual)?,
        report.fourier_n
    ));
    for i in 0..grid.points {
        let x = grid.x(i);
        let sn = jac.real(x).0;
        let v = md.m * sn * sn;
        let s = potential_sech_sum(x, args.truncation, &md)?;
        table.push(vec![Cell::Num(x), Cell::Num(v), Cell::Num(s), Cell::Num(v - s)]);
    }
    let passed =
        report.sup_diff < args.tol && report.zeta_prime_residual < ZETA_PRIME_TOL && report.fourier_residual < ZETA_PRIME_TOL;
    Ok(Outcome {
        doc: Document {
            config: json!({
                "command": "decompose",
                "m": num(md.m)?,
                "truncation": args.truncation,
                "grid_points": args.grid_points,
                "x_min": num(args.x_min)?,
                "x_max": num(x_max)?,
                "tol": num(args.tol)?,
            }),
            table,
            data: None,
            checks: json!({
                "sup_diff": num(report.sup_diff)?,
                "zeta_prime_residual": num(report.zeta_prime_residual)?,
                "fourier_residual": num(report.fourier_residual)?,
                "fourier_n": report.fourier_n,
                "pass": passed,
            }),
        },
        passed,
        warnings: Vec::new(),
    })
}

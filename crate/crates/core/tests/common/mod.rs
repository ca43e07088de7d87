//! Reference computations that share no code with the library.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

/// Trapezoid rule on a periodic integrand over one full period; converges
/// geometrically for analytic integrands.
pub fn periodic_trapezoid(f: impl Fn(f64) -> f64, period: f64, n: usize) -> f64 {
    let h = period / n as f64;
    (0..n).map(|i| f(i as f64 * h)).sum::<f64>() * h
}

/// `K(m)` by quadrature of `1/√(1 - m sin²θ)`.
pub fn k_quad(m: f64) -> f64 {
    0.25 * periodic_trapezoid(|t| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 2.0 * PI, 2000)
}

/// `E(m)` by quadrature of `√(1 - m sin²θ)`.
pub fn e_quad(m: f64) -> f64 {
    0.25 * periodic_trapezoid(|t| (1.0 - m * t.sin().powi(2)).sqrt(), 2.0 * PI, 2000)
}

/// Incomplete `F(φ, m)` by composite Simpson.
pub fn f_incomplete(phi: f64, m: f64) -> f64 {
    let n = 4000;
    let h = phi / n as f64;
    let g = |t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt();
    let mut s = g(0.0) + g(phi);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
    }
    s * h / 3.0
}

/// `q = exp(-π K(1-m)/K(m))` from the quadrature values.
pub fn nome(m: f64) -> f64 {
    (-PI * k_quad(1.0 - m) / k_quad(m)).exp()
}

/// `θ₄(v, q)` and `θ₁(v, q)` summed directly, no argument reduction.
pub fn theta41(v: C64, q: f64) -> (C64, C64) {
    let mut t4 = C64::new(1.0, 0.0);
    let mut t1 = C64::new(0.0, 0.0);
    for n in 1..80 {
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        t4 += (v * (2.0 * nf)).cos() * (2.0 * sign * q.powf(nf * nf));
    }
    for n in 0..80 {
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        t1 += (v * (2.0 * nf + 1.0)).sin() * (2.0 * sign * q.powf((nf + 0.5) * (nf + 0.5)));
    }
    (t4, t1)
}

/// `℘(u)` from its lattice sum, summed row by row along `ω₁`:
/// `(π/2ω₁)² [csc²(πu/2ω₁) - 1/3 + Σ_{j≠0} (csc²(π(u-2jω₂)/2ω₁) - csc²(πjω₂/ω₁))]`.
pub fn wp_lattice(u: C64, omega1: f64, omega2: C64, rows: i32) -> C64 {
    let c = PI / (2.0 * omega1);
    let csc2 = |z: C64| {
        let s = z.sin();
        C64::new(1.0, 0.0) / (s * s)
    };
    let mut sum = csc2(u * c) - 1.0 / 3.0;
    for j in -rows..=rows {
        if j == 0 {
            continue;
        }
        let jf = j as f64;
        sum += csc2((u - omega2 * (2.0 * jf)) * c) - csc2(omega2 * (jf * PI / omega1));
    }
    sum * (c * c)
}

//! Real roots of quadratics and cubics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polynomial coefficients, highest degree first. A zero leading coefficient
/// is kept as given; the solvers fall back to the lower degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolynomialCoefficients(Vec<f64>);

impl PolynomialCoefficients {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if !(3..=4).contains(&coeffs.len()) {
            return Err(Error::Config(format!(
                "expected 3 or 4 coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self(coeffs))
    }

    pub fn quadratic(a: f64, b: f64, c: f64) -> Self {
        Self(vec![a, b, c])
    }

    pub fn cubic(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self(vec![a, b, c, d])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    /// Nominal degree (2 or 3), regardless of vanishing leading terms.
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `max(1, max |c_i|)`, the scale for relative residuals.
    pub fn scale(&self) -> f64 {
        self.0.iter().fold(1.0f64, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// All real roots, ascending.
    pub fn real_roots(&self) -> Result<Vec<f64>> {
        match *self.0.as_slice() {
            [a, b, c] => quadratic_roots(a, b, c),
            [a, b, c, d] => cubic_roots(a, b, c, d),
            _ => unreachable!("constructor enforces degree 2 or 3"),
        }
    }
}

/// Real roots of a quadratic in ascending order. A zero leading coefficient
/// degrades to the linear case.
pub fn solve_quadratic_real(coeffs: &PolynomialCoefficients) -> Result<Vec<f64>> {
    match coeffs.coeffs() {
        &[a, b, c] => quadratic_roots(a, b, c),
        other => Err(Error::Config(format!(
            "quadratic needs 3 coefficients, got {}",
            other.len()
        ))),
    }
}

/// Real roots of a cubic in ascending order, deduplicated within `1e-9`.
/// Also accepts a quadratic.
pub fn solve_cubic_real(coeffs: &PolynomialCoefficients) -> Result<Vec<f64>> {
    coeffs.real_roots()
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Result<Vec<f64>> {
    if a == 0.0 {
        if b == 0.0 {
            return if c == 0.0 {
                Err(Error::ZeroPolynomial)
            } else {
                Ok(Vec::new())
            };
        }
        return Ok(vec![-c / b]);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Ok(Vec::new());
    }
    if disc == 0.0 {
        return Ok(vec![-b / (2.0 * a)]);
    }
    // Avoids cancellation between -b and the square root.
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (r1, r2) = (q / a, c / q);
    Ok(if r1 <= r2 { vec![r1, r2] } else { vec![r2, r1] })
}

const DEDUP_TOL: f64 = 1e-9;

fn cubic_roots(a: f64, b: f64, c: f64, d: f64) -> Result<Vec<f64>> {
    if a == 0.0 {
        return quadratic_roots(b, c, d);
    }
    let (b, c, d) = (b / a, c / a, d / a);
    let p = |x: f64| ((x + b) * x + c) * x + d;
    let dp = |x: f64| (3.0 * x + 2.0 * b) * x + c;

    // Cauchy bound on the monic polynomial; critical points lie inside it.
    let bound = 1.0 + b.abs().max(c.abs()).max(d.abs());
    let crit = quadratic_roots(3.0, 2.0 * b, c)?;

    let mut knots = Vec::with_capacity(4);
    knots.push(-bound);
    knots.extend(crit.iter().copied().filter(|x| x.abs() < bound));
    knots.push(bound);

    let mut roots = Vec::with_capacity(3);
    for w in knots.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (flo, fhi) = (p(lo), p(hi));
        if flo == 0.0 {
            roots.push(lo);
        }
        if fhi == 0.0 {
            roots.push(hi);
        }
        if flo != 0.0 && fhi != 0.0 && (flo < 0.0) != (fhi < 0.0) {
            roots.push(bracketed_root(&p, &dp, lo, hi, flo));
        }
    }
    // Touching roots: a critical point where the polynomial vanishes.
    let scale = 1.0f64.max(b.abs()).max(c.abs()).max(d.abs());
    for &x in &crit {
        if p(x).abs() <= 1e-12 * scale {
            roots.push(x);
        }
    }

    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|later, earlier| (*later - *earlier).abs() <= DEDUP_TOL);
    Ok(roots)
}

/// Safeguarded Newton iteration on a monotone bracket `[lo, hi]` with a sign
/// change.
fn bracketed_root(
    p: &impl Fn(f64) -> f64,
    dp: &impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    flo: f64,
) -> f64 {
    let lo_negative = flo < 0.0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = p(x);
        if fx == 0.0 {
            return x;
        }
        if (fx < 0.0) == lo_negative {
            lo = x;
        } else {
            hi = x;
        }
        let slope = dp(x);
        let mut next = if slope != 0.0 { x - fx / slope } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs().max(1e-300) || hi - lo <= f64::EPSILON * x.abs() {
            return next;
        }
        x = next;
    }
    x
}

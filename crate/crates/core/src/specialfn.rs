//! Polylogarithms `Li₂`, `Li₃` of complex argument on the closed unit disc
//! and the branched power `(m² + k²)^{3/2}`.
//!
//! For `|z| ≤ 1/2` the defining series is summed directly. Closer to the
//! unit circle the expansion in `μ = log z`,
//!
//! `Li_s(e^μ) = Σ_{k≠s−1} ζ(s−k) μ^k/k! + μ^{s−1}/(s−1)! · (H_{s−1} − log(−μ))`,
//!
//! is used; it converges for `|μ| < 2π`, and after reducing `Im μ` into
//! `(−π, π]` every `|z| ∈ (1/2, 1]` has `|μ| < 3.3`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Apéry's constant ζ(3).
pub const ZETA3: f64 = 1.202_056_903_159_594_285_399_738_161_511_449_990_8;
/// π².
pub const PI_SQUARED: f64 = 9.869_604_401_089_358_618_834_490_999_876_151_135_3;

const SERIES_RADIUS: f64 = 0.5;
const LN2: f64 = std::f64::consts::LN_2;

/// `Li_s(z)` for `s ∈ {2, 3}` and `|z| ≤ 1`.
pub fn polylog(s: u32, z: Complex64) -> Result<Complex64> {
    check_order(s)?;
    let modulus = z.norm();
    if modulus > 1.0 + 4.0 * f64::EPSILON || !modulus.is_finite() {
        return Err(Error::PolylogDomain { modulus });
    }
    if modulus <= SERIES_RADIUS {
        Ok(direct_series(s, z))
    } else {
        Ok(log_series(s, reduce_imag(z.ln())))
    }
}

/// `Li_s(e^μ)` for `s ∈ {2, 3}` and `Re μ ≤ 0`, without forming `e^μ` when
/// `μ` is small.
pub fn polylog_exp(s: u32, mu: Complex64) -> Result<Complex64> {
    check_order(s)?;
    if mu.re > 4.0 * f64::EPSILON || mu.re.is_nan() || mu.im.is_nan() {
        return Err(Error::PolylogDomain {
            modulus: mu.re.exp(),
        });
    }
    if mu.re < -LN2 {
        Ok(direct_series(s, mu.exp()))
    } else {
        Ok(log_series(s, reduce_imag(mu)))
    }
}

fn check_order(s: u32) -> Result<()> {
    if s == 2 || s == 3 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("polylog order must be 2 or 3, got {s}")))
    }
}

fn reduce_imag(mu: Complex64) -> Complex64 {
    let turns = (mu.im / (2.0 * PI)).round();
    Complex64::new(mu.re, mu.im - 2.0 * PI * turns)
}

fn direct_series(s: u32, z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    for n in 1..=4000u32 {
        power *= z;
        let term = power / (n as f64).powi(s as i32);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() || power.norm() == 0.0 {
            break;
        }
    }
    sum
}

/// ζ(2j) for j ≥ 1.
fn zeta_even(j: u32) -> f64 {
    let p2 = PI_SQUARED;
    match j {
        1 => p2 / 6.0,
        2 => p2 * p2 / 90.0,
        3 => p2.powi(3) / 945.0,
        4 => p2.powi(4) / 9450.0,
        5 => p2.powi(5) / 93555.0,
        6 => 691.0 * p2.powi(6) / 638_512_875.0,
        7 => 2.0 * p2.powi(7) / 18_243_225.0,
        _ => {
            let s = 2 * j as i32;
            let mut sum = 0.0;
            for m in (1..=12).rev() {
                sum += (m as f64).powi(-s);
            }
            sum + 12f64.powi(1 - s) / (s as f64 - 1.0) - 0.5 * 12f64.powi(-s)
        }
    }
}

fn log_series(s: u32, mu: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let (mut sum, special) = match s {
        2 => {
            let special = if mu == Complex64::new(0.0, 0.0) {
                Complex64::new(0.0, 0.0)
            } else {
                mu * (one - (-mu).ln())
            };
            (Complex64::new(zeta_even(1), 0.0), special)
        }
        _ => {
            let special = if mu == Complex64::new(0.0, 0.0) {
                Complex64::new(0.0, 0.0)
            } else {
                mu * mu * 0.5 * (Complex64::new(1.5, 0.0) - (-mu).ln())
            };
            (Complex64::new(ZETA3, 0.0) + mu * zeta_even(1), special)
        }
    };
    sum += special;
    let k0 = s as i32;
    let mu_pow_s = mu.powi(k0);
    let fact_s = if s == 2 { 2.0 } else { 6.0 };
    // n = 0: ζ(0) = −1/2.
    sum += -0.5 * mu_pow_s / fact_s;
    // Odd n: ζ(−n) μ^{n+s}/(n+s)! = (−1)^j 2 ζ(2j) (μ/2π)^{n+1} μ^{s−1} / Π_{i=n+1}^{n+s} i.
    let ratio = mu / (2.0 * PI);
    let ratio2 = ratio * ratio;
    let mu_pow_sm1 = mu.powi(k0 - 1);
    let mut ratio_pow = ratio2;
    for j in 1..200u32 {
        let n = 2 * j - 1;
        let denom: f64 = (n + 1..=n + s).map(|i| i as f64).product();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let term = ratio_pow * mu_pow_sm1 * (sign * 2.0 * zeta_even(j) / denom);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        ratio_pow *= ratio2;
    }
    sum
}

/// `(m² + k²)^{3/2} = exp(3/2 · Log(m² + k²))` with the principal logarithm,
/// cut along the negative real axis of `m² + k²`.
pub fn branched_power_3_2(m: f64, k: Complex64) -> Result<Complex64> {
    let w = k * k + m * m;
    if w == Complex64::new(0.0, 0.0) {
        return Ok(w);
    }
    if w.re < 0.0 && w.im.abs() <= 1e-12 * w.norm() {
        return Err(Error::BranchCut { re: w.re, im: w.im });
    }
    Ok((w.ln() * 1.5).exp())
}

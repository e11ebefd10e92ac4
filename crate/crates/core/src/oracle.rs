//! Brute-force verifiers that share nothing with the main path except the
//! generic routines in [`crate::numerics`]:
//!
//! - scattering data of the Pöschl–Teller node from a fourth-order
//!   Runge–Kutta integration of the Schrödinger equation;
//! - roots of the secular equation from its model-specific real forms,
//!   located by dense scanning and bisection;
//! - the free energy as an explicit sum over dispersion roots, with the
//!   parallel-momentum integral done by quadrature instead of polylogs.
//!
//! [`verify`] runs them against the main path and tabulates residuals.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, try_integrate_semi_infinite, QuadratureSpec};
use crate::scattering::{CombModel, DerivedCouplings, NodePotential, ScatteringAmplitudes};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Grid of the ODE oracle on the node support `[−ε/2, ε/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OdeScatterSetup {
    pub eps: f64,
    pub grid_step: f64,
}

impl OdeScatterSetup {
    /// Default grid: `ε/2000`.
    pub fn new(eps: f64) -> Result<Self> {
        Self::with_step(eps, eps / 2000.0)
    }

    pub fn with_step(eps: f64, grid_step: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidArgument(format!("support must be positive, got {eps}")));
        }
        if !(grid_step > 0.0) || grid_step > eps / 200.0 * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "grid step must lie in (0, eps/200], got {grid_step} for eps = {eps}"
            )));
        }
        Ok(Self { eps, grid_step })
    }
}

/// Tolerance on `det M − 1` and on flux conservation.
const UNITARITY_DRIFT: f64 = 1e-8;

/// Pöschl–Teller amplitudes from the ODE on the default grid.
pub fn transfer_matrix_amplitudes(eps: f64, k: f64) -> Result<ScatteringAmplitudes> {
    transfer_matrix_amplitudes_with(&OdeScatterSetup::new(eps)?, k)
}

/// Pöschl–Teller amplitudes from the ODE `−ψ″ − 2 sech²(z) ψ = k² ψ`.
pub fn transfer_matrix_amplitudes_with(setup: &OdeScatterSetup, k: f64) -> Result<ScatteringAmplitudes> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidArgument(format!("ODE oracle needs k > 0, got {k}")));
    }
    let half = 0.5 * setup.eps;
    let steps = (setup.eps / setup.grid_step).ceil() as usize;
    let h = setup.eps / steps as f64;
    // Columns: solutions with (ψ, ψ′) = (1, 0) and (0, 1) at z = −ε/2.
    let rhs = |z: f64, y: [f64; 4]| -> [f64; 4] {
        let sech = 1.0 / z.cosh();
        let q = -2.0 * sech * sech - k * k;
        [y[1], q * y[0], y[3], q * y[2]]
    };
    let mut y = [1.0, 0.0, 0.0, 1.0];
    for j in 0..steps {
        let z = -half + j as f64 * h;
        let k1 = rhs(z, y);
        let k2 = rhs(z + 0.5 * h, add(y, k1, 0.5 * h));
        let k3 = rhs(z + 0.5 * h, add(y, k2, 0.5 * h));
        let k4 = rhs(z + h, add(y, k3, h));
        for i in 0..4 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    let m = [[y[0], y[2]], [y[1], y[3]]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (det - 1.0).abs() > UNITARITY_DRIFT {
        return Err(Error::StepSize { drift: det - 1.0 });
    }
    // M (a + r b) = t c with a, b the incoming and reflected waves at −ε/2
    // and c the transmitted wave at +ε/2.
    let wave = |z: f64, sign: f64| -> [Complex64; 2] {
        let e = (sign * I * k * z).exp();
        [e, sign * I * k * e]
    };
    let apply = |v: [Complex64; 2]| -> [Complex64; 2] {
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    };
    let ma = apply(wave(-half, 1.0));
    let mb = apply(wave(-half, -1.0));
    let c = wave(half, 1.0);
    // [mb, −c] (r, t)ᵀ = −ma
    let d = mb[0] * (-c[1]) - (-c[0]) * mb[1];
    let r = ((-ma[0]) * (-c[1]) - (-c[0]) * (-ma[1])) / d;
    let t = (mb[0] * (-ma[1]) - (-ma[0]) * mb[1]) / d;
    let flux = t.norm_sqr() + r.norm_sqr() - 1.0;
    if flux.abs() > UNITARITY_DRIFT {
        return Err(Error::StepSize { drift: flux });
    }
    Ok(ScatteringAmplitudes {
        k: Complex64::new(k, 0.0),
        t,
        r_right: r,
        r_left: r,
    })
}

fn add(y: [f64; 4], dy: [f64; 4], h: f64) -> [f64; 4] {
    [y[0] + h * dy[0], y[1] + h * dy[1], y[2] + h * dy[2], y[3] + h * dy[3]]
}

/// Every sign change of `f` on `[lo, hi]` at resolution `step`, refined by
/// bisection to width `10⁻¹⁰`. Roots closer than `step` may be missed.
pub fn dense_scan_roots<F>(mut f: F, lo: f64, hi: f64, step: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(hi > lo) || !(step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "dense scan needs lo < hi and step > 0, got [{lo}, {hi}], {step}"
        )));
    }
    let n = ((hi - lo) / step).ceil() as usize;
    let mut roots = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0)?;
    for j in 1..=n {
        let x1 = if j == n { hi } else { lo + j as f64 * step };
        let f1 = f(x1)?;
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut a, mut b, mut fa) = (x0, x1, f0);
            while b - a > 1e-10 {
                let mid = 0.5 * (a + b);
                let fm = f(mid)?;
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fa * fm < 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            roots.push(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        roots.push(x0);
    }
    Ok(roots)
}

/// Pöschl–Teller discriminant in the real `Σ`, `Υ` form:
/// `(Σ cos ka − Υ sin ka) / (k²(k²+1)(1+cosh ε))`, continued to complex `k`.
pub fn pt_secular_sigma_upsilon(a: f64, eps: f64, k: Complex64) -> Complex64 {
    let tau = (0.5 * eps).tanh();
    let lambda = 1.0 - tau * tau;
    let ce = eps.cosh();
    let (s, c) = ((k * eps).sin(), (k * eps).cos());
    let k2 = k * k;
    let upsilon = 2.0 * k * tau * (1.0 + k2 + k2 * ce) + lambda * c * s;
    let sigma = k2 * (3.0 + k2) + k2 * (k2 - 1.0) * ce + lambda * s * s;
    (sigma * (k * a).cos() - upsilon * (k * a).sin()) / (k2 * (k2 + 1.0) * (1.0 + ce))
}

/// δδ′ discriminant `−(cos ka + γ sin(ka)/(2k)) / Ω`, continued to complex `k`.
pub fn ddp_secular_rescaled(a: f64, gamma: f64, omega: f64, k: Complex64) -> Complex64 {
    -((k * a).cos() + gamma * (k * a).sin() / (2.0 * k)) / omega
}

/// The oracle's discriminant, with the removable points at `k = 0` and
/// `k = ±i` replaced by a symmetric average.
fn discriminant(model: &CombModel, k: Complex64) -> Result<Complex64> {
    let raw = |k: Complex64| -> Result<Complex64> {
        match model.couplings() {
            DerivedCouplings::DeltaDeltaPrime { gamma, omega } => {
                if omega.abs() < 1e-14 {
                    return Err(Error::Transparency);
                }
                Ok(ddp_secular_rescaled(model.a(), gamma, omega, k))
            }
            DerivedCouplings::PoschlTeller { .. } => {
                let NodePotential::TruncatedPoschlTeller { eps } = model.potential() else {
                    unreachable!("couplings match the potential")
                };
                Ok(pt_secular_sigma_upsilon(model.a(), eps, k))
            }
        }
    };
    for p in [Complex64::new(0.0, 0.0), I, -I] {
        if (k - p).norm() < 1e-6 {
            let d = Complex64::new(2e-6, 0.0);
            let e = Complex64::new(0.0, 2e-6);
            return Ok(0.25 * (raw(p + d)? + raw(p - d)? + raw(p + e)? + raw(p - e)?));
        }
    }
    raw(k)
}

fn discriminant_real(model: &CombModel, k: f64) -> Result<f64> {
    Ok(discriminant(model, Complex64::new(k, 0.0))?.re)
}

fn discriminant_imag(model: &CombModel, kappa: f64) -> Result<f64> {
    Ok(discriminant(model, Complex64::new(0.0, kappa))?.re)
}

/// Roots of `cos θ − h(k)` on `(0, k_hi]` from the oracle discriminant.
/// The scan step shrinks near `θ = 0, π`, where neighbouring bands'
/// roots approach each other across narrow gaps.
pub fn secular_roots(model: &CombModel, theta: f64, k_hi: f64) -> Result<Vec<f64>> {
    let a = model.a();
    let step = (PI / (200.0 * a)).min(theta / (8.0 * a)).min((PI - theta) / (8.0 * a)).max(1e-7);
    let c = theta.cos();
    dense_scan_roots(|k| Ok(c - discriminant_real(model, k)?), 1e-9, k_hi, step)
}

/// Negative band found by scanning `h(iκ)` on `κ ∈ (0, 5]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleNegativeBand {
    pub theta_c: f64,
    pub kappa_min: f64,
}

pub fn negative_band(model: &CombModel) -> Result<Option<OracleNegativeBand>> {
    if let NodePotential::DeltaDeltaPrime { w0, .. } = model.potential() {
        if w0 >= 0.0 {
            return Ok(None);
        }
    }
    let roots = dense_scan_roots(|kappa| Ok(discriminant_imag(model, kappa)? - 1.0), 1e-9, 5.0, 1e-3)?;
    let Some(&kappa_min) = roots.last() else {
        return Ok(None);
    };
    let h0 = discriminant_imag(model, 0.0)?;
    let theta_c = if h0 < -1.0 { PI } else { h0.clamp(-1.0, 1.0).acos() };
    Ok(Some(OracleNegativeBand { theta_c, kappa_min }))
}

/// `I₃(ω₀, T) = (T/2π) ∫_{ω₀}^∞ ω log(1 − e^{−ω/T}) dω`, the parallel
/// momentum integral done numerically.
pub fn i3_by_quadrature(omega0: f64, temperature: f64) -> Result<f64> {
    let spec = QuadratureSpec::new(1e-11, 1e-30, 4000)?;
    let scale = temperature.powi(2) * (1.0 + omega0 / temperature) * (-omega0 / temperature).exp();
    let q = try_integrate_semi_infinite(
        |w: f64| -> Result<Complex64> {
            let x = w / temperature;
            let log = if x > std::f64::consts::LN_2 { (-(-x).exp()).ln_1p() } else { (-(-x).exp_m1()).ln() };
            Ok(Complex64::new(w * log / scale, 0.0))
        },
        omega0,
        temperature,
        &spec,
    )?;
    Ok(temperature / (2.0 * PI) * scale * q.quad.value.re)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandSumResult {
    pub value: f64,
    /// Estimated contribution of the omitted bands.
    pub tail_estimate: f64,
    pub n_bands: usize,
    pub mass: f64,
    pub warnings: Vec<String>,
}

/// Gauss–Legendre nodes per θ piece used by the band sum.
pub const BAND_SUM_THETA_NODES: usize = 64;

/// `ΔF/A` as `∫₀^{θ_c} (dθ/π) I₃(√(m²−κ²)) + ∫₀^π (dθ/π) Σ_n I₃(√(m²+k_n²))`
/// over the lowest `n_bands` positive roots.
pub fn band_sum_free_energy(model: &CombModel, temperature: f64, n_bands: usize) -> Result<BandSumResult> {
    if !(temperature > 0.0) || n_bands == 0 {
        return Err(Error::InvalidArgument(format!(
            "band sum needs T > 0 and n_bands >= 1, got {temperature}, {n_bands}"
        )));
    }
    let band = negative_band(model)?;
    let m = band.map_or(0.0, |b| b.kappa_min);
    let omega = |k2: f64| (m * m + k2).max(0.0).sqrt();
    let a = model.a();
    let mut pieces = vec![0.0];
    if let Some(b) = band {
        if b.theta_c > 1e-12 && b.theta_c < PI - 1e-12 {
            pieces.push(b.theta_c);
        }
    }
    pieces.push(PI);
    let mut jobs = Vec::new();
    for w in pieces.windows(2) {
        let (nodes, weights) = gauss_legendre(BAND_SUM_THETA_NODES, w[0], w[1]);
        jobs.extend(nodes.into_iter().zip(weights));
    }
    let k_hi = (n_bands as f64 + 1.0) * PI / a;
    let per_theta: Vec<(f64, f64, usize)> = jobs
        .par_iter()
        .map(|&(theta, weight)| -> Result<(f64, f64, usize)> {
            let roots = secular_roots(model, theta, k_hi)?;
            let used = roots.len().min(n_bands);
            let mut sum = 0.0;
            for &k in &roots[..used] {
                sum += i3_by_quadrature(omega(k * k), temperature)?;
            }
            let last = roots[..used].last().copied().unwrap_or(0.0);
            Ok((weight / PI * sum, weight / PI * i3_by_quadrature(omega(last * last), temperature)?, used))
        })
        .collect::<Result<_>>()?;
    let mut value = 0.0;
    let mut last_band = 0.0;
    let mut warnings = Vec::new();
    for (j, &(v, l, used)) in per_theta.iter().enumerate() {
        value += v;
        last_band += l;
        if used < n_bands {
            warnings.push(format!("theta node {j}: found {used} of {n_bands} roots"));
        }
    }
    if let Some(b) = band {
        let (nodes, weights) = gauss_legendre(BAND_SUM_THETA_NODES, 0.0, b.theta_c);
        for (theta, weight) in nodes.into_iter().zip(weights) {
            let c = theta.cos();
            let kappa = dense_scan_roots(|kappa| Ok(discriminant_imag(model, kappa)? - c), 1e-9, b.kappa_min + 1e-6, 1e-3)?
                .last()
                .copied()
                .unwrap_or(b.kappa_min);
            value += weight / PI * i3_by_quadrature(omega(-kappa * kappa), temperature)?;
        }
    }
    // Later bands shrink by about e^{−π/(aT)} each.
    let ratio = (-PI / (a * temperature)).exp();
    let tail_estimate = (last_band * ratio / (1.0 - ratio)).abs();
    if tail_estimate > 1e-10 * value.abs() {
        warnings.push(format!("truncated band sum: tail estimate {tail_estimate:e}"));
    }
    Ok(BandSumResult {
        value,
        tail_estimate,
        n_bands,
        mass: m,
        warnings,
    })
}

/// Bands needed before one band's `I₃` falls below `rel_tol` times the
/// first band's, using the free-comb root spacing `π/a`.
pub fn bands_needed(model: &CombModel, temperature: f64, rel_tol: f64) -> Result<usize> {
    let a = model.a();
    let first = i3_by_quadrature(0.0, temperature)?.abs();
    let mut n = 1;
    while i3_by_quadrature(n as f64 * PI / a, temperature)?.abs() > rel_tol * first {
        n += 1;
        if n > 100_000 {
            return Err(Error::InvalidArgument("band count diverges".into()));
        }
    }
    Ok(n + 1)
}

/// One oracle-versus-main comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualRow {
    pub check: String,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl ResidualRow {
    fn new(check: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self {
            check: check.into(),
            residual,
            threshold,
            passed: residual <= threshold,
        }
    }
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Runs every oracle that applies to `model` against the main path.
pub fn verify(model: &CombModel) -> Result<Vec<ResidualRow>> {
    use crate::{spectrum, thermal, vacuum::ContourSpec};
    let mut rows = Vec::new();
    let a = model.a();

    let grid: Vec<f64> = (0..1000).map(|j| 1e-2 * (5e3f64).powf(j as f64 / 999.0)).collect();
    let mut unitarity: f64 = 0.0;
    let mut det_modulus: f64 = 0.0;
    for &k in &grid {
        let amp = model.amplitudes(Complex64::new(k, 0.0))?;
        unitarity = unitarity.max((amp.t.norm_sqr() + amp.r_right.norm_sqr() - 1.0).abs());
        det_modulus = det_modulus.max((amp.det_s().norm() - 1.0).abs());
    }
    rows.push(ResidualRow::new("unitarity |t|^2+|r|^2-1", unitarity, 1e-10));
    rows.push(ResidualRow::new("|det S|-1", det_modulus, 1e-10));

    match model.couplings() {
        DerivedCouplings::PoschlTeller { .. } => {
            let NodePotential::TruncatedPoschlTeller { eps } = model.potential() else {
                unreachable!("couplings match the potential")
            };
            for k in [0.5, 1.0, 2.0, 5.0] {
                let ode = transfer_matrix_amplitudes(eps, k)?;
                let closed = model.amplitudes(Complex64::new(k, 0.0))?;
                let err = relative(closed.t, ode.t).max(relative(closed.r_right, ode.r_right));
                rows.push(ResidualRow::new(format!("ODE amplitudes k={k}"), err, 1e-6));
            }
        }
        DerivedCouplings::DeltaDeltaPrime { gamma, .. } => {
            let shift = model.phase_shift(&grid)?;
            let err = grid
                .iter()
                .zip(&shift)
                .map(|(&k, &d)| (d + (gamma / (2.0 * k)).atan()).abs())
                .fold(0.0, f64::max);
            rows.push(ResidualRow::new("phase shift vs -atan(gamma/2k)", err, 1e-10));
        }
    }

    let theta = PI / 2.0;
    let main = spectrum::dispersion(model, theta, 5)?;
    let oracle = secular_roots(model, theta, main.last().copied().unwrap_or(PI / a) + 0.5 * PI / a)?;
    let err = if oracle.len() < main.len() {
        f64::INFINITY
    } else {
        main.iter().zip(&oracle).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    };
    rows.push(ResidualRow::new("dispersion roots at theta=pi/2", err, 1e-9));

    let main_mass = spectrum::mass(model)?;
    let oracle_mass = negative_band(model)?.map_or(0.0, |b| b.kappa_min);
    rows.push(ResidualRow::new("mass", (main_mass - oracle_mass).abs(), 1e-8));

    let temperature = 1.0;
    let spec = ContourSpec::for_model(model)?;
    let contour = thermal::delta_f(model, temperature, &spec)?.value;
    let n = bands_needed(model, temperature, 1e-12)?;
    let sum = band_sum_free_energy(model, temperature, n)?;
    rows.push(ResidualRow::new(
        "free energy: contour vs band sum at T=1",
        (contour - sum.value).abs() / sum.value.abs(),
        1e-4,
    ));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ode_matches_closed_form() {
        let model = CombModel::poschl_teller(1.0, 0.6).unwrap();
        let ode = transfer_matrix_amplitudes(0.6, 1.0).unwrap();
        let closed = model.amplitudes(Complex64::new(1.0, 0.0)).unwrap();
        assert!(relative(closed.t, ode.t) < 1e-6);
        assert!(relative(closed.r_right, ode.r_right) < 1e-6);
    }

    #[test]
    fn ode_vanishing_support() {
        let ode = transfer_matrix_amplitudes(1e-3, 1.0).unwrap();
        assert!((ode.t - 1.0).norm() < 1e-2);
        assert!(ode.r_right.norm() < 1e-2);
    }

    #[test]
    fn ode_conserves_flux() {
        let ode = transfer_matrix_amplitudes(0.9, 5.0).unwrap();
        assert!((ode.t.norm_sqr() + ode.r_right.norm_sqr() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn ode_is_fourth_order() {
        let model = CombModel::poschl_teller(1.0, 0.9).unwrap();
        let closed = model.amplitudes(Complex64::new(5.0, 0.0)).unwrap();
        let err = |step: f64| {
            let ode = transfer_matrix_amplitudes_with(&OdeScatterSetup::with_step(0.9, step).unwrap(), 5.0).unwrap();
            (ode.t - closed.t).norm()
        };
        let (coarse, fine) = (err(0.9 / 200.0), err(0.9 / 400.0));
        assert!(coarse / fine >= 8.0, "{coarse:e} {fine:e}");
    }

    #[test]
    fn ode_rejects_coarse_grid() {
        assert!(OdeScatterSetup::with_step(0.6, 0.01).is_err());
    }

    #[test]
    fn dense_scan_finds_free_roots() {
        let theta = PI / 3.0;
        let roots = dense_scan_roots(|k| Ok(theta.cos() - k.cos()), 0.0, 10.0, 0.01).unwrap();
        let expected = [theta, 2.0 * PI - theta, 2.0 * PI + theta];
        assert_eq!(roots.len(), expected.len());
        for (r, e) in roots.iter().zip(expected) {
            assert!((r - e).abs() < 1e-9);
        }
    }

    #[test]
    fn i3_quadrature_limits() {
        let zeta3 = 1.202_056_903_159_594_2;
        assert_relative_eq!(i3_by_quadrature(0.0, 1.0).unwrap(), -zeta3 / (2.0 * PI), max_relative = 1e-9);
        let expected = -(0.408_754_287_348_896 + 0.386_995_424_210_2) / (2.0 * PI);
        assert_relative_eq!(i3_by_quadrature(1.0, 1.0).unwrap(), expected, max_relative = 1e-9);
    }

    #[test]
    fn free_band_sum_is_stefan_boltzmann() {
        let model = CombModel::free(1.0).unwrap();
        let r = band_sum_free_energy(&model, 1.0, 16).unwrap();
        assert_relative_eq!(r.value, -PI.powi(2) / 90.0, max_relative = 1e-7);
    }

    #[test]
    fn cold_sums_need_fewer_bands() {
        let model = CombModel::free(1.0).unwrap();
        let cold = bands_needed(&model, 0.1, 1e-12).unwrap();
        let hot = bands_needed(&model, 2.0, 1e-12).unwrap();
        assert!(hot >= 10 * cold, "{cold} {hot}");
    }

    #[test]
    fn oracle_negative_band() {
        let model = CombModel::poschl_teller(1.0, 0.6).unwrap();
        let b = negative_band(&model).unwrap().unwrap();
        assert_relative_eq!(b.kappa_min, 1.08807, max_relative = 1e-5);
        assert!(negative_band(&CombModel::delta_delta_prime(1.0, 8.0, 0.0).unwrap()).unwrap().is_none());
    }

    #[test]
    fn verify_pt() {
        let rows = verify(&CombModel::poschl_teller(1.0, 0.6).unwrap()).unwrap();
        for row in &rows {
            assert!(row.passed, "{row:?}");
        }
    }

    #[test]
    fn verify_delta_prime() {
        let rows = verify(&CombModel::delta_delta_prime(1.0, 8.0, 0.0).unwrap()).unwrap();
        for row in &rows {
            assert!(row.passed, "{row:?}");
        }
    }
}

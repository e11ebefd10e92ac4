//! Bloch discriminant `h_V(k) = (e^{−ika} + e^{ika} det S)/(2t)`, the
//! secular function `f_θ(k) = cos θ − h_V(k)`, band edges, dispersion
//! branches, the negative-energy band and the mass that lifts it.
//!
//! `h_V` is entire in `k`, but the quotient form is `0/0` where `t` and the
//! numerator vanish together (`k = 0` for `δδ′`; `k = 0, ±i` for
//! Pöschl–Teller). Within `REMOVABLE_RADIUS` of such a point `h_V` is
//! evaluated as the mean over a circle around `k`, which is exact for an
//! analytic function up to an aliasing term of order `ρ^N`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, try_find_root, try_scan_sign_changes, RootBracket};
use crate::scattering::{CombModel, NodePotential};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const REMOVABLE_RADIUS: f64 = 1e-3;
const CIRCLE_POINTS: usize = 16;
/// Upper end of the imaginary-momentum probe for negative bands.
pub const KAPPA_CAP: f64 = 5.0;
/// Slack on `|h_V| = 1` so that tangential touching is not read as an edge.
const EDGE_SLACK: f64 = 1e-12;
/// Bracket width at which real roots are accepted.
pub const ROOT_TOL: f64 = 1e-14;

/// `h_V` and `f_θ` at one `(θ, k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecularEvaluation {
    pub theta: f64,
    pub k: Complex64,
    pub h: Complex64,
    pub f: Complex64,
}

/// The Bloch discriminant.
pub fn h_v(model: &CombModel, k: Complex64) -> Result<Complex64> {
    if model.is_opaque() {
        return Err(Error::Transparency);
    }
    let near = model
        .removable_points()
        .iter()
        .any(|p| (k - p).norm() < REMOVABLE_RADIUS);
    if !near {
        return h_direct(model, k);
    }
    let radius = 2.0 * REMOVABLE_RADIUS;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..CIRCLE_POINTS {
        let phase = 2.0 * PI * (j as f64 + 0.5) / CIRCLE_POINTS as f64;
        sum += h_direct(model, k + Complex64::from_polar(radius, phase))?;
    }
    Ok(sum / CIRCLE_POINTS as f64)
}

fn h_direct(model: &CombModel, k: Complex64) -> Result<Complex64> {
    let amp = model.amplitudes(k)?;
    if amp.t.norm() < 1e-14 {
        return Err(Error::Transparency);
    }
    let phase = (I * k * model.a()).exp();
    Ok((1.0 / phase + phase * amp.det_s()) / (2.0 * amp.t))
}

/// `h_V` on the real axis, where it is real.
pub fn h_real(model: &CombModel, k: f64) -> Result<f64> {
    Ok(h_v(model, Complex64::new(k, 0.0))?.re)
}

/// `h_V(iκ)`, real for real `κ`.
pub fn h_imag_axis(model: &CombModel, kappa: f64) -> Result<f64> {
    Ok(h_v(model, Complex64::new(0.0, kappa))?.re)
}

pub fn secular(model: &CombModel, theta: f64, k: Complex64) -> Result<SecularEvaluation> {
    let h = h_v(model, k)?;
    Ok(SecularEvaluation {
        theta,
        k,
        h,
        f: theta.cos() - h,
    })
}

/// Default scan step in `k`: 200 samples per `π/a`.
pub fn scan_step(model: &CombModel) -> f64 {
    PI / (200.0 * model.a())
}

/// An allowed band `[k_lo, k_hi]` in real momentum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BandInterval {
    pub k_lo: f64,
    pub k_hi: f64,
    /// False when the band continues past the scanned range.
    pub closed: bool,
}

/// Band edges up to `√e_max` and the allowed intervals they delimit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandEdges {
    pub edges: Vec<f64>,
    pub bands: Vec<BandInterval>,
    pub warnings: Vec<String>,
}

/// Real momenta in `(0, √e_max]` where `|h_V| = 1`.
pub fn band_edges(model: &CombModel, e_max: f64) -> Result<BandEdges> {
    if !(e_max > 0.0) {
        return Err(Error::InvalidArgument(format!("e_max must be positive, got {e_max}")));
    }
    let k_max = e_max.sqrt();
    let step = scan_step(model).min(k_max / 64.0);
    let excess = |k: f64| -> Result<f64> { Ok(h_real(model, k)?.abs() - 1.0 - EDGE_SLACK) };
    let brackets = try_scan_sign_changes(excess, 0.0, k_max, step)?;
    let mut edges = Vec::with_capacity(brackets.len());
    for (lo, hi) in brackets {
        if lo == hi {
            edges.push(lo);
            continue;
        }
        let outside = if excess(lo)? > 0.0 { lo } else { hi };
        let sign = h_real(model, outside)?.signum();
        let edge = try_find_root(
            |k| Ok::<_, Error>(h_real(model, k)? - sign),
            RootBracket::new(lo, hi)?,
            ROOT_TOL,
        )?;
        edges.push(edge);
    }
    let mut warnings = Vec::new();
    for w in edges.windows(2) {
        if w[1] - w[0] < step {
            warnings.push(format!(
                "band edges {} and {} are closer than the scan step {step}",
                w[0], w[1]
            ));
        }
    }
    let mut bands = Vec::new();
    let mut inside = excess(0.0)? <= 0.0;
    let mut start = 0.0;
    for &edge in &edges {
        if inside {
            bands.push(BandInterval {
                k_lo: start,
                k_hi: edge,
                closed: true,
            });
        } else {
            start = edge;
        }
        inside = !inside;
    }
    if inside {
        bands.push(BandInterval {
            k_lo: start,
            k_hi: k_max,
            closed: false,
        });
    }
    Ok(BandEdges {
        edges,
        bands,
        warnings,
    })
}

/// All real roots of `cos θ − h_V(k)` in `(k_lo, k_hi]`, ascending.
pub fn real_roots(model: &CombModel, theta: f64, k_lo: f64, k_hi: f64) -> Result<Vec<f64>> {
    if !(k_hi > k_lo) {
        return Ok(Vec::new());
    }
    let c = theta.cos();
    let f = |k: f64| -> Result<f64> { Ok(c - h_real(model, k)?) };
    let step = scan_step(model).min((k_hi - k_lo) / 64.0);
    let mut roots = Vec::new();
    for (lo, hi) in try_scan_sign_changes(f, k_lo, k_hi, step)? {
        let root = if lo == hi {
            lo
        } else {
            try_find_root(f, RootBracket::new(lo, hi)?, ROOT_TOL)?
        };
        if root > k_lo {
            roots.push(root);
        }
    }
    Ok(roots)
}

/// The `n_bands` lowest positive roots of `cos θ − h_V(k)`.
pub fn dispersion(model: &CombModel, theta: f64, n_bands: usize) -> Result<Vec<f64>> {
    let theta = theta.abs();
    let chunk = PI / model.a();
    let k_cap = 20.0 * (n_bands as f64 + 1.0) * chunk + 100.0;
    let mut roots = Vec::with_capacity(n_bands);
    let mut lo = 0.0;
    while roots.len() < n_bands {
        if lo > k_cap {
            return Err(Error::RootsMissing {
                found: roots.len(),
                wanted: n_bands,
                k_max: lo,
            });
        }
        let hi = lo + chunk;
        roots.extend(real_roots(model, theta, lo, hi)?);
        lo = hi;
    }
    roots.truncate(n_bands);
    Ok(roots)
}

/// The negative-energy band: states `k = iκ(θ)` for `θ ∈ [0, θ_c]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NegativeBand {
    pub theta_c: f64,
    /// Deepest state, `h_V(iκ_min) = 1`.
    pub kappa_min: f64,
    /// `κ(θ_c)`: zero unless the whole band lies below zero energy.
    pub kappa_at_theta_c: f64,
}

impl NegativeBand {
    /// `κ(θ)` solving `cos θ = h_V(iκ)` for `θ ∈ [0, θ_c]`.
    pub fn kappa(&self, model: &CombModel, theta: f64) -> Result<f64> {
        let theta = theta.abs();
        if theta > self.theta_c + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "theta = {theta} lies outside the negative band [0, {}]",
                self.theta_c
            )));
        }
        let c = theta.cos();
        let g = |kappa: f64| -> Result<f64> { Ok(h_imag_axis(model, kappa)? - c) };
        let (lo, hi) = (self.kappa_at_theta_c, self.kappa_min);
        let (g_lo, g_hi) = (g(lo)?, g(hi)?);
        if g_lo >= 0.0 {
            return Ok(lo);
        }
        if g_hi <= 0.0 {
            return Ok(hi);
        }
        try_find_root(g, RootBracket::new(lo, hi)?, ROOT_TOL)
    }

    /// `(θ, κ(θ))` on `n` Gauss–Legendre nodes of `[0, θ_c]`.
    pub fn samples(&self, model: &CombModel, n: usize) -> Result<Vec<(f64, f64)>> {
        let (nodes, _) = gauss_legendre(n, 0.0, self.theta_c);
        nodes
            .into_iter()
            .map(|theta| Ok((theta, self.kappa(model, theta)?)))
            .collect()
    }
}

/// Detects the lowest band's negative-energy part, if any.
pub fn negative_band(model: &CombModel) -> Result<Option<NegativeBand>> {
    if let NodePotential::DeltaDeltaPrime { w0, .. } = model.potential() {
        // h_V(iκ)·(−Ω) = cosh κa + γ sinh(κa)/(2κ) ≥ cosh κa for γ ≥ 0.
        if w0 >= 0.0 {
            return Ok(None);
        }
        if model.is_opaque() {
            return Err(Error::Unsupported(
                "negative bands of decoupled delta-delta' cells (|w1| = 1, w0 < 0)".into(),
            ));
        }
    }
    let step = scan_step(model).min(0.01);
    let n = (KAPPA_CAP / step).ceil() as usize;
    let mut profile = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let kappa = KAPPA_CAP * j as f64 / n as f64;
        profile.push((kappa, h_imag_axis(model, kappa)?));
    }
    let bracket_failure = |profile: &[(f64, f64)]| Error::RootBracketing {
        profile: profile.iter().step_by(10).copied().collect(),
    };
    // Deepest allowed state: the largest κ with |h| ≤ 1.
    let Some(top) = profile.iter().rposition(|&(_, h)| h.abs() <= 1.0) else {
        return Ok(None);
    };
    if top == profile.len() - 1 {
        return Err(bracket_failure(&profile));
    }
    if profile[top + 1].1 < -1.0 {
        return Err(Error::Unsupported(
            "negative band whose deepest state sits at theta = pi".into(),
        ));
    }
    let kappa_min = if profile[top].1 == 1.0 {
        profile[top].0
    } else {
        try_find_root(
            |kappa| Ok::<_, Error>(h_imag_axis(model, kappa)? - 1.0),
            RootBracket::new(profile[top].0, profile[top + 1].0)?,
            ROOT_TOL,
        )?
    };
    if kappa_min <= 0.0 {
        return Ok(None);
    }
    let h0 = profile[0].1;
    if h0.abs() <= 1.0 {
        return Ok(Some(NegativeBand {
            theta_c: h0.acos(),
            kappa_min,
            kappa_at_theta_c: 0.0,
        }));
    }
    if h0 < -1.0 {
        let Some(j) = profile[..=top].iter().position(|&(_, h)| h >= -1.0) else {
            return Err(bracket_failure(&profile));
        };
        let kappa_pi = try_find_root(
            |kappa| Ok::<_, Error>(h_imag_axis(model, kappa)? + 1.0),
            RootBracket::new(profile[j - 1].0, profile[j].0)?,
            ROOT_TOL,
        )?;
        return Ok(Some(NegativeBand {
            theta_c: PI,
            kappa_min,
            kappa_at_theta_c: kappa_pi,
        }));
    }
    Err(bracket_failure(&profile))
}

/// The unitarity mass: `κ_min` when a negative band exists, else zero.
pub fn mass(model: &CombModel) -> Result<f64> {
    Ok(negative_band(model)?.map_or(0.0, |band| band.kappa_min))
}

/// One point of a dispersion branch. Negative-energy states carry
/// `k = κ` with `energy = −κ²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BandPoint {
    pub theta: f64,
    pub k: f64,
    pub energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Band {
    /// 1-based band index in order of energy.
    pub index: usize,
    pub points: Vec<BandPoint>,
}

/// Bands on a Gauss–Legendre θ grid, the negative band and the mass.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandStructure {
    pub bands: Vec<Band>,
    pub negative_band: Option<NegativeBand>,
    pub mass: f64,
}

impl BandStructure {
    pub fn compute(model: &CombModel, n_bands: usize, theta_nodes: usize) -> Result<Self> {
        let negative = negative_band(model)?;
        let (thetas, _) = gauss_legendre(theta_nodes, 0.0, PI);
        let mut bands: Vec<Band> = (1..=n_bands)
            .map(|index| Band {
                index,
                points: Vec::with_capacity(theta_nodes),
            })
            .collect();
        for theta in thetas {
            let mut states = Vec::with_capacity(n_bands);
            if let Some(band) = negative.filter(|b| theta < b.theta_c) {
                let kappa = band.kappa(model, theta)?;
                states.push(BandPoint {
                    theta,
                    k: kappa,
                    energy: -kappa * kappa,
                });
            }
            let wanted = n_bands - states.len().min(n_bands);
            for k in dispersion(model, theta, wanted)? {
                states.push(BandPoint {
                    theta,
                    k,
                    energy: k * k,
                });
            }
            for (band, point) in bands.iter_mut().zip(states) {
                band.points.push(point);
            }
        }
        Ok(BandStructure {
            bands,
            negative_band: negative,
            mass: negative.map_or(0.0, |b| b.kappa_min),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn ddp(w0: f64, w1: f64) -> CombModel {
        CombModel::delta_delta_prime(1.0, w0, w1).unwrap()
    }

    fn pt(eps: f64) -> CombModel {
        CombModel::poschl_teller(1.0, eps).unwrap()
    }

    /// Independent real form of the PT discriminant.
    fn pt_sigma_upsilon(eps: f64, a: f64, k: f64) -> f64 {
        let tau = (eps / 2.0).tanh();
        let lambda = 1.0 - tau * tau;
        let (ce, s, c) = (eps.cosh(), (k * eps).sin(), (k * eps).cos());
        let upsilon = 2.0 * k * tau * (1.0 + k * k + k * k * ce) + lambda * c * s;
        let sigma = k * k * (3.0 + k * k) + k * k * (k * k - 1.0) * ce + lambda * s * s;
        (sigma * (k * a).cos() - upsilon * (k * a).sin()) / (k * k * (k * k + 1.0) * (1.0 + ce))
    }

    #[test]
    fn free_and_ddp_discriminants() {
        let free = CombModel::free(1.3).unwrap();
        for k in [0.1, 1.0, 7.5] {
            assert_abs_diff_eq!(h_real(&free, k).unwrap(), (1.3 * k).cos(), epsilon = 1e-14);
        }
        let m = ddp(3.0, 0.0);
        for k in [1e-4f64, 0.1, 1.0, 7.5] {
            let expected = k.cos() + 1.5 * k.sin() / k;
            assert_abs_diff_eq!(h_real(&m, k).unwrap(), expected, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(h_real(&m, 0.0).unwrap(), 2.5, epsilon = 1e-12);
    }

    #[test]
    fn pt_discriminant_matches_real_form() {
        for eps in [0.2, 0.6, 0.9] {
            let m = pt(eps);
            for k in [0.05, 0.5, 1.0, 2.0, 5.0, 11.0] {
                let h = h_v(&m, Complex64::new(k, 0.0)).unwrap();
                assert!(h.im.abs() < 1e-10);
                assert_abs_diff_eq!(h.re, pt_sigma_upsilon(eps, 1.0, k), epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn removable_points_are_smooth() {
        let m = pt(0.5);
        let below = h_imag_axis(&m, 1.0 - 1.5e-3).unwrap();
        let at = h_imag_axis(&m, 1.0).unwrap();
        let above = h_imag_axis(&m, 1.0 + 1.5e-3).unwrap();
        assert!((at - 0.5 * (below + above)).abs() < 1e-5);
        assert!(h_v(&ddp(2.0, -1.0), Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn ddp_band_edges_match_bisection() {
        let m = ddp(10.0, 0.0);
        let edges = band_edges(&m, 400.0).unwrap();
        let g = |k: f64, s: f64| k.cos() + 5.0 * k.sin() / k - s;
        let mut expected = Vec::new();
        let n = 200_000;
        for s in [1.0, -1.0] {
            for j in 0..n {
                let (lo, hi) = (20.0 * j as f64 / n as f64 + 1e-9, 20.0 * (j + 1) as f64 / n as f64);
                if g(lo, s).signum() != g(hi, s).signum() {
                    let (mut a, mut b) = (lo, hi);
                    for _ in 0..100 {
                        let mid = 0.5 * (a + b);
                        if g(a, s).signum() == g(mid, s).signum() { a = mid } else { b = mid }
                    }
                    expected.push(0.5 * (a + b));
                }
            }
        }
        expected.sort_by(f64::total_cmp);
        assert_eq!(edges.edges.len(), expected.len());
        for (e, x) in edges.edges.iter().zip(&expected) {
            assert_abs_diff_eq!(e, x, epsilon = 1e-10);
        }
        assert!(edges.bands.iter().all(|b| b.k_lo < b.k_hi));
    }

    #[test]
    fn free_band_has_no_interior_edges() {
        let edges = band_edges(&CombModel::free(1.0).unwrap(), 900.0).unwrap();
        assert!(edges.edges.is_empty());
        assert_eq!(edges.bands.len(), 1);
        assert_eq!(edges.bands[0].k_lo, 0.0);
        assert!(!edges.bands[0].closed);
    }

    #[test]
    fn pt_has_gap_between_first_bands() {
        let edges = band_edges(&pt(0.6), 100.0).unwrap();
        let first = edges.bands[0];
        let second = edges.bands[1];
        assert_eq!(first.k_lo, 0.0);
        assert!(second.k_lo - first.k_hi > 0.1);
    }

    #[test]
    fn free_dispersion() {
        let free = CombModel::free(1.0).unwrap();
        let theta = 0.7;
        let roots = dispersion(&free, theta, 5).unwrap();
        let expected = [theta, 2.0 * PI - theta, 2.0 * PI + theta, 4.0 * PI - theta, 4.0 * PI + theta];
        for (r, e) in roots.iter().zip(expected) {
            assert_abs_diff_eq!(*r, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn ddp_roots_match_rescaled_secular_function() {
        for (w0, w1) in [(10.0, 0.0), (3.0, -2.0), (0.1, -5.0)] {
            let m = ddp(w0, w1);
            let (gamma, omega) = (w0 / (1.0 + w1 * w1), (w1 * w1 - 1.0) / (w1 * w1 + 1.0));
            let theta = 1.1;
            for k in dispersion(&m, theta, 6).unwrap() {
                let rescaled = omega * theta.cos() + k.cos() + 0.5 * gamma * k.sin() / k;
                assert!(rescaled.abs() < 1e-10, "{w0} {w1} {k} {rescaled}");
            }
        }
    }

    #[test]
    fn negative_band_detection() {
        assert!(negative_band(&ddp(8.0, 0.0)).unwrap().is_none());
        assert!(negative_band(&ddp(0.0, -7.0)).unwrap().is_none());
        assert!(negative_band(&CombModel::free(1.0).unwrap()).unwrap().is_none());
        assert_eq!(mass(&ddp(8.0, 0.0)).unwrap(), 0.0);
        let band = negative_band(&pt(0.6)).unwrap().unwrap();
        // Independent finite-difference eigensolver value.
        assert_abs_diff_eq!(band.kappa_min, 1.08807, epsilon = 1e-4);
        assert_abs_diff_eq!(h_imag_axis(&pt(0.6), band.kappa_min).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(band.theta_c, 0.46319f64.acos(), epsilon = 1e-4);
        let m = pt(0.6);
        assert_abs_diff_eq!(band.kappa(&m, 0.0).unwrap(), band.kappa_min, epsilon = 1e-12);
        assert!(band.kappa(&m, band.theta_c).unwrap() < 1e-10);
        let samples = band.samples(&m, 16).unwrap();
        assert!(samples.windows(2).all(|w| w[1].1 < w[0].1));
    }

    #[test]
    fn negative_band_next_to_removable_point() {
        let band = negative_band(&pt(0.5)).unwrap().unwrap();
        assert!((band.kappa_min - 1.0).abs() < 1e-6);
        assert_abs_diff_eq!(h_imag_axis(&pt(0.5), band.kappa_min).unwrap(), 1.0, epsilon = 1e-11);
    }

    #[test]
    fn attractive_ddp_has_negative_band() {
        let m = ddp(-1.0, 0.0);
        let band = negative_band(&m).unwrap().unwrap();
        let k = band.kappa_min;
        assert_abs_diff_eq!((k).cosh() - 0.5 * k.sinh() / k, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn band_structure_is_ordered() {
        let bs = BandStructure::compute(&pt(0.6), 3, 24).unwrap();
        assert_eq!(bs.bands.len(), 3);
        assert!(bs.mass > 1.0);
        for j in 0..24 {
            let e: Vec<f64> = bs.bands.iter().map(|b| b.points[j].energy).collect();
            assert!(e.windows(2).all(|w| w[0] < w[1]));
        }
        assert!(bs.bands[0].points[0].energy < 0.0);
        assert!(bs.bands[0].points[23].energy > 0.0);
    }

    proptest! {
        #[test]
        fn discriminant_is_real_on_real_axis(eps in 0.05..1.0f64, w0 in -5.0..10.0f64, k in 0.01..30.0f64) {
            for m in [pt(eps), ddp(w0, 0.3)] {
                prop_assert!(h_v(&m, Complex64::new(k, 0.0)).unwrap().im.abs() < 1e-10);
            }
        }

        #[test]
        fn one_root_per_band(w0 in 0.5..12.0f64, theta in 0.01..3.13f64) {
            let m = ddp(w0, 0.0);
            let edges = band_edges(&m, 900.0).unwrap();
            let roots = real_roots(&m, theta, 0.0, 30.0).unwrap();
            for band in edges.bands.iter().filter(|b| b.closed) {
                let count = roots.iter().filter(|&&k| k >= band.k_lo && k <= band.k_hi).count();
                prop_assert_eq!(count, 1);
            }
        }

        #[test]
        fn dispersion_is_even(theta in 0.0..3.14f64) {
            let m = pt(0.6);
            prop_assert_eq!(dispersion(&m, theta, 3).unwrap(), dispersion(&m, -theta, 3).unwrap());
        }
    }
}

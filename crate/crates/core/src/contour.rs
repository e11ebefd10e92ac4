//! Shared machinery for mode sums over the zeros of `f_θ(k)`, turned into
//! ray integrals on the wedge `k = v + ξ e^{±iγ}` with vertex `v`.
//!
//! For a kernel `F` analytic in the wedge, the sum of `F` over zeros with
//! `k > v` is `(K₋ − K₊)/(2πi)`, where `K±` integrate `F · ∂_k log f`
//! outwards along each ray. Zeros in `(0, v)` are added explicitly.
//!
//! On the rays the logarithmic derivative is written through
//!
//! - `P(k) = −2t e^{ika} f = 1 − 2t cos θ e^{ika} + det S e^{2ika}` (upper),
//! - `Q(k) = −2t e^{−ika} f / det S = 1 − 2(t/det S) cos θ e^{−ika} + e^{−2ika}/det S` (lower),
//!
//! both of which tend to 1 exponentially. The vacuum energy uses `P′/P` and
//! `Q′/Q` directly (bulk and single-node terms subtracted); the thermal sum
//! uses the full `∂_k log f`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, try_integrate_semi_infinite, QuadratureSpec};
use crate::scattering::CombModel;
use crate::spectrum::{self, NegativeBand};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Which logarithmic derivative multiplies the kernel on the rays.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LogDerivative {
    /// `∂ log P` / `∂ log Q`: bulk `a` and single-node `log t`, `log det S`
    /// terms removed.
    Subtracted,
    /// `∂_k log f_θ`.
    Full,
}

/// Outcome of a θ-integrated mode sum `∫ (dθ/π) [I(θ) + Σ_low F(k_j)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct ModeSum {
    /// Real part is the result; imaginary part is the residue of the
    /// two-ray form (zero for the single-ray form).
    pub value: Complex64,
    /// Inner quadrature errors propagated through the θ rule.
    pub inner_error: f64,
    /// Estimated error of the θ rule.
    pub theta_error: f64,
    /// Largest `|integrand|` at any truncation point.
    pub max_tail: f64,
    /// Largest ray mismatch `|K₋ − conj K₊|` seen (two-ray form only).
    pub max_conjugate_mismatch: f64,
}

pub(crate) struct Engine<'a> {
    pub model: &'a CombModel,
    pub vertex: f64,
    pub gamma: f64,
    pub quad: QuadratureSpec,
    pub theta_nodes: usize,
    pub two_ray: bool,
    pub negative: Option<NegativeBand>,
}

struct RayPoint {
    upper: Complex64,
    lower: Complex64,
}

impl<'a> Engine<'a> {
    /// θ breakpoints: `0`, `θ_c`, the phase where a band crosses the vertex,
    /// and `π`.
    pub fn theta_breaks(&self) -> Result<Vec<f64>> {
        let mut breaks = vec![0.0, PI];
        if let Some(band) = self.negative {
            breaks.push(band.theta_c);
        }
        if self.vertex > 0.0 {
            let h = spectrum::h_real(self.model, self.vertex)?;
            if h.abs() <= 1.0 {
                breaks.push(h.acos());
            }
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        Ok(breaks)
    }

    fn log_derivatives(&self, theta: f64, k_up: Complex64, kind: LogDerivative) -> Result<RayPoint> {
        let a = self.model.a();
        let c = theta.cos();
        let up = self.model.jet(k_up)?;
        let e = (I * a * k_up).exp();
        let p = 1.0 - 2.0 * up.t * c * e + up.det_s * e * e;
        let dp = -2.0 * c * (up.dt + I * a * up.t) * e + (up.ddet_s + 2.0 * I * a * up.det_s) * e * e;
        if p.norm() < 1e-300 {
            return Err(Error::ContourCrossing {
                theta,
                re: k_up.re,
                im: k_up.im,
            });
        }
        let mut upper = dp / p;
        if kind == LogDerivative::Full {
            upper += -I * a - up.dlog_t;
        }
        let lower = if self.two_ray {
            let k_lo = k_up.conj();
            let lo = self.model.jet(k_lo)?;
            let em = (-I * a * k_lo).exp();
            let inv_d = 1.0 / lo.det_s;
            let u = lo.t * inv_d;
            let du = (lo.dt - lo.t * lo.ddet_s * inv_d) * inv_d;
            let dv = -lo.ddet_s * inv_d * inv_d;
            let q = 1.0 - 2.0 * c * u * em + inv_d * em * em;
            let dq = -2.0 * c * (du - I * a * u) * em + (dv - 2.0 * I * a * inv_d) * em * em;
            let mut lower = dq / q;
            if kind == LogDerivative::Full {
                lower += I * a + lo.ddet_s * inv_d - lo.dlog_t;
            }
            lower
        } else {
            Complex64::new(0.0, 0.0)
        };
        Ok(RayPoint { upper, lower })
    }

    /// `I(θ)`, the sum of `F` over zeros with `k > vertex`, plus the
    /// explicit sum over zeros in `(0, vertex)`.
    fn per_theta<F>(&self, theta: f64, kernel: &F, kind: LogDerivative, decay_scale: f64) -> Result<ThetaValue>
    where
        F: Fn(Complex64) -> Result<Complex64>,
    {
        let (cg, sg) = (self.gamma.cos(), self.gamma.sin());
        let dir = Complex64::new(cg, sg);
        let mut low_sum = 0.0;
        if self.vertex > 0.0 {
            self.check_vertex(theta)?;
            for k in spectrum::real_roots(self.model, theta, 0.0, self.vertex)? {
                low_sum += kernel(Complex64::new(k, 0.0))?.re;
            }
        }
        if self.two_ray {
            let up = try_integrate_semi_infinite(
                |xi| {
                    let k = Complex64::new(self.vertex + xi * cg, xi * sg);
                    Ok::<_, Error>(dir * kernel(k)? * self.log_derivatives(theta, k, kind)?.upper)
                },
                0.0,
                decay_scale,
                &self.quad,
            )?;
            let lo = try_integrate_semi_infinite(
                |xi| {
                    let k = Complex64::new(self.vertex + xi * cg, xi * sg);
                    let d = self.log_derivatives(theta, k, kind)?;
                    Ok::<_, Error>(dir.conj() * kernel(k.conj())? * d.lower)
                },
                0.0,
                decay_scale,
                &self.quad,
            )?;
            let ray_sum = (lo.quad.value - up.quad.value) / (2.0 * PI * I);
            return Ok(ThetaValue {
                value: ray_sum + low_sum,
                error: (up.quad.error + lo.quad.error) / (2.0 * PI),
                tail: up.tail_magnitude.max(lo.tail_magnitude),
                mismatch: (lo.quad.value - up.quad.value.conj()).norm(),
            });
        }
        let ray = try_integrate_semi_infinite(
            |xi| {
                let k = Complex64::new(self.vertex + xi * cg, xi * sg);
                Ok::<_, Error>(dir * kernel(k)? * self.log_derivatives(theta, k, kind)?.upper)
            },
            0.0,
            decay_scale,
            &self.quad,
        )?;
        Ok(ThetaValue {
            value: Complex64::new(-ray.quad.value.im / PI + low_sum, 0.0),
            error: ray.quad.error / PI,
            tail: ray.tail_magnitude,
            mismatch: 0.0,
        })
    }

    fn check_vertex(&self, theta: f64) -> Result<()> {
        let c = theta.cos();
        let f = |k: f64| -> Result<f64> { Ok(c - spectrum::h_real(self.model, k)?) };
        let d = 1e-8;
        let (fm, fp) = (f(self.vertex - d)?, f(self.vertex + d)?);
        if fm.signum() != fp.signum() || fm == 0.0 {
            return Err(Error::ContourCrossing {
                theta,
                re: self.vertex,
                im: 0.0,
            });
        }
        Ok(())
    }

    /// `∫₀^π (dθ/π) [I(θ) + Σ_low F(k_j)]` on Gauss–Legendre nodes per piece.
    pub fn mode_sum<F>(&self, kernel: &F, kind: LogDerivative, decay_scale: f64) -> Result<ModeSum>
    where
        F: Fn(Complex64) -> Result<Complex64> + Sync,
    {
        let breaks = self.theta_breaks()?;
        let coarse_nodes = (self.theta_nodes / 2).max(1);
        let mut jobs = Vec::new();
        for (piece, w) in breaks.windows(2).enumerate() {
            for (n, fine) in [(self.theta_nodes, true), (coarse_nodes, false)] {
                let (nodes, weights) = gauss_legendre(n, w[0], w[1]);
                for (theta, weight) in nodes.into_iter().zip(weights) {
                    jobs.push((piece, fine, theta, weight));
                }
            }
        }
        let values: Vec<ThetaValue> = jobs
            .par_iter()
            .map(|&(_, _, theta, _)| {
                self.per_theta(theta, kernel, kind, decay_scale)
                    .map_err(|e| e.at(format!("theta = {theta}")))
            })
            .collect::<Result<_>>()?;
        let pieces = breaks.len() - 1;
        let mut fine = vec![Complex64::new(0.0, 0.0); pieces];
        let mut coarse = vec![Complex64::new(0.0, 0.0); pieces];
        let mut scale = vec![0.0; pieces];
        let mut inner_error = 0.0;
        let mut max_tail: f64 = 0.0;
        let mut mismatch: f64 = 0.0;
        for (&(piece, is_fine, _, weight), v) in jobs.iter().zip(&values) {
            let w = weight / PI;
            if is_fine {
                fine[piece] += v.value * w;
                scale[piece] += (v.value * w).norm();
                inner_error += v.error * w;
                max_tail = max_tail.max(v.tail);
                mismatch = mismatch.max(v.mismatch);
            } else {
                coarse[piece] += v.value * w;
            }
        }
        let mut theta_error = 0.0;
        for j in 0..pieces {
            theta_error += rule_error(fine[j], coarse[j], scale[j]);
        }
        Ok(ModeSum {
            value: fine.iter().sum(),
            inner_error,
            theta_error,
            max_tail,
            max_conjugate_mismatch: mismatch,
        })
    }

    /// `∫₀^{θ_c} (dθ/π) G(κ(θ))` with the same node count and error model.
    pub fn bound_sum<G>(&self, kernel: &G) -> Result<(f64, f64)>
    where
        G: Fn(f64) -> Result<f64> + Sync,
    {
        let Some(band) = self.negative else {
            return Ok((0.0, 0.0));
        };
        let rule = |n: usize| -> Result<(f64, f64)> {
            let (nodes, weights) = gauss_legendre(n, 0.0, band.theta_c);
            let terms: Vec<f64> = nodes
                .par_iter()
                .zip(weights.par_iter())
                .map(|(&theta, &w)| Ok(w / PI * kernel(band.kappa(self.model, theta)?)?))
                .collect::<Result<_>>()?;
            Ok((terms.iter().sum(), terms.iter().map(|t| t.abs()).sum()))
        };
        let (fine, scale) = rule(self.theta_nodes)?;
        let (coarse, _) = rule((self.theta_nodes / 2).max(1))?;
        let err = rule_error(Complex64::new(fine, 0.0), Complex64::new(coarse, 0.0), scale);
        Ok((fine, err))
    }
}

struct ThetaValue {
    value: Complex64,
    error: f64,
    tail: f64,
    mismatch: f64,
}

/// Error of a Gauss rule from its difference to the half-size rule, assuming
/// geometric convergence, floored at rounding level.
fn rule_error(fine: Complex64, coarse: Complex64, scale: f64) -> f64 {
    let diff = (fine - coarse).norm();
    let magnitude = fine.norm().max(f64::MIN_POSITIVE);
    diff * (10.0 * diff / magnitude).min(1.0) + 1e2 * f64::EPSILON * scale
}

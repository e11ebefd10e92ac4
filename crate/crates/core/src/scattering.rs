//! Scattering data of the node potentials.
//!
//! Two node potentials are supported:
//!
//! - `δδ′`: `w₀ δ(z) + 2 w₁ δ′(z)`, with derived couplings
//!   `γ = w₀/(1+w₁²)` and `Ω = (w₁²−1)/(w₁²+1)`.
//! - Pöschl–Teller well `−2 sech²(z)` truncated to `|z| ≤ ε/2`, with
//!   `τ = tanh(ε/2)` and `Λ = 1 − τ²`.
//!
//! Amplitudes follow the plane-wave convention referenced to the origin:
//! a wave `e^{ikz}` incident from the left is transmitted as `t e^{ikz}`.
//! Reciprocity makes `t` the same from either side.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Node potential at every lattice site.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodePotential {
    DeltaDeltaPrime { w0: f64, w1: f64 },
    TruncatedPoschlTeller { eps: f64 },
}

/// A comb: lattice spacing plus node potential.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CombModel {
    a: f64,
    potential: NodePotential,
}

/// Couplings entering the closed forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DerivedCouplings {
    DeltaDeltaPrime { gamma: f64, omega: f64 },
    PoschlTeller { lambda: f64, tau: f64 },
}

/// `(t, r_R, r_L)` at momentum `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatteringAmplitudes {
    pub k: Complex64,
    pub t: Complex64,
    pub r_right: Complex64,
    pub r_left: Complex64,
}

impl ScatteringAmplitudes {
    /// `t² − r_R r_L`.
    pub fn det_s(&self) -> Complex64 {
        self.t * self.t - self.r_right * self.r_left
    }
}

/// `t`, `det S` and their `k`-derivatives at one momentum.
///
/// `dlog_t = t′/t` is evaluated in a form that stays finite when `t` itself
/// vanishes identically (`|w₁| = 1`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub t: Complex64,
    pub dt: Complex64,
    pub det_s: Complex64,
    pub ddet_s: Complex64,
    pub dlog_t: Complex64,
}

impl CombModel {
    pub fn new(a: f64, potential: NodePotential) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidModel(format!("lattice spacing must be positive, got {a}")));
        }
        match potential {
            NodePotential::DeltaDeltaPrime { w0, w1 } => {
                if !w0.is_finite() || !w1.is_finite() {
                    return Err(Error::InvalidModel("delta-delta' couplings must be finite".into()));
                }
            }
            NodePotential::TruncatedPoschlTeller { eps } => {
                if !(eps > 0.0) || eps > a {
                    return Err(Error::InvalidModel(format!(
                        "Poschl-Teller support must satisfy 0 < eps <= a, got eps = {eps}, a = {a}"
                    )));
                }
            }
        }
        Ok(CombModel { a, potential })
    }

    pub fn delta_delta_prime(a: f64, w0: f64, w1: f64) -> Result<Self> {
        Self::new(a, NodePotential::DeltaDeltaPrime { w0, w1 })
    }

    pub fn poschl_teller(a: f64, eps: f64) -> Result<Self> {
        Self::new(a, NodePotential::TruncatedPoschlTeller { eps })
    }

    /// The comb without any node potential.
    pub fn free(a: f64) -> Result<Self> {
        Self::delta_delta_prime(a, 0.0, 0.0)
    }

    /// Same potential at a different spacing.
    pub fn with_spacing(&self, a: f64) -> Result<Self> {
        Self::new(a, self.potential)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn potential(&self) -> NodePotential {
        self.potential
    }

    pub fn couplings(&self) -> DerivedCouplings {
        match self.potential {
            NodePotential::DeltaDeltaPrime { w0, w1 } => {
                let s = 1.0 + w1 * w1;
                DerivedCouplings::DeltaDeltaPrime {
                    gamma: w0 / s,
                    omega: (w1 * w1 - 1.0) / s,
                }
            }
            NodePotential::TruncatedPoschlTeller { eps } => {
                let tau = (0.5 * eps).tanh();
                DerivedCouplings::PoschlTeller {
                    lambda: 1.0 - tau * tau,
                    tau,
                }
            }
        }
    }

    /// True for `δδ′` with `|w₁| = 1`, where `t ≡ 0` and neighbouring cells
    /// decouple.
    pub fn is_opaque(&self) -> bool {
        matches!(self.couplings(), DerivedCouplings::DeltaDeltaPrime { omega, .. } if omega.abs() < 1e-14)
    }

    /// Points where the quotient form of the Bloch discriminant is `0/0`
    /// or `∞/∞` although the discriminant itself is entire.
    pub(crate) fn removable_points(&self) -> Vec<Complex64> {
        let origin = Complex64::new(0.0, 0.0);
        match self.couplings() {
            DerivedCouplings::DeltaDeltaPrime { gamma, .. } if gamma < 0.0 => {
                vec![origin, Complex64::new(0.0, -0.5 * gamma)]
            }
            DerivedCouplings::DeltaDeltaPrime { .. } => vec![origin],
            DerivedCouplings::PoschlTeller { .. } => {
                vec![origin, Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)]
            }
        }
    }

    pub fn amplitudes(&self, k: Complex64) -> Result<ScatteringAmplitudes> {
        nonzero_momentum(k)?;
        match self.couplings() {
            DerivedCouplings::DeltaDeltaPrime { gamma, omega } => {
                let den = ddp_denominator(gamma, k)?;
                let s = (1.0 - omega * omega).max(0.0).sqrt();
                Ok(ScatteringAmplitudes {
                    k,
                    t: -2.0 * k * omega / den,
                    r_right: (-I * gamma - 2.0 * k * s) / den,
                    r_left: (-I * gamma + 2.0 * k * s) / den,
                })
            }
            DerivedCouplings::PoschlTeller { lambda, tau } => {
                let p = self.pt_parts(lambda, tau, k)?;
                let r = p.r_num / p.delta;
                Ok(ScatteringAmplitudes {
                    k,
                    t: p.n / p.delta,
                    r_right: r,
                    r_left: r,
                })
            }
        }
    }

    pub fn det_s(&self, k: Complex64) -> Result<Complex64> {
        match self.couplings() {
            DerivedCouplings::DeltaDeltaPrime { gamma, .. } => {
                nonzero_momentum(k)?;
                let den = ddp_denominator(gamma, k)?;
                Ok((2.0 * k - I * gamma) / den)
            }
            DerivedCouplings::PoschlTeller { .. } => Ok(self.amplitudes(k)?.det_s()),
        }
    }

    /// Values and analytic `k`-derivatives of `t` and `det S`.
    pub fn jet(&self, k: Complex64) -> Result<Jet> {
        nonzero_momentum(k)?;
        match self.couplings() {
            DerivedCouplings::DeltaDeltaPrime { gamma, omega } => {
                if gamma == 0.0 {
                    let zero = Complex64::new(0.0, 0.0);
                    return Ok(Jet {
                        t: Complex64::new(-omega, 0.0),
                        dt: zero,
                        det_s: Complex64::new(1.0, 0.0),
                        ddet_s: zero,
                        dlog_t: zero,
                    });
                }
                let den = ddp_denominator(gamma, k)?;
                let den2 = den * den;
                Ok(Jet {
                    t: -2.0 * k * omega / den,
                    dt: -2.0 * I * gamma * omega / den2,
                    det_s: (2.0 * k - I * gamma) / den,
                    ddet_s: 4.0 * I * gamma / den2,
                    dlog_t: I * gamma / (k * den),
                })
            }
            DerivedCouplings::PoschlTeller { lambda, tau } => {
                let p = self.pt_parts(lambda, tau, k)?;
                let eps = self.pt_eps();
                let e = p.e;
                let k2 = k * k;
                let dn = 16.0 * k2 * k + 8.0 * k;
                let db = 4.0 * k - 2.0 * I * tau;
                let dc = 4.0 * k + 2.0 * I * tau;
                let ddelta = -2.0 * I * eps * e * e * lambda * lambda + 2.0 * p.b * db;
                let delta2 = p.delta * p.delta;
                let t = p.n / p.delta;
                let dt = (dn * p.delta - p.n * ddelta) / delta2;
                let r = p.r_num / p.delta;
                let dr_num = lambda
                    * (I * eps * e * p.c + e * dc - db / e + I * eps * p.b / e);
                let dr = (dr_num * p.delta - p.r_num * ddelta) / delta2;
                Ok(Jet {
                    t,
                    dt,
                    det_s: t * t - r * r,
                    ddet_s: 2.0 * t * dt - 2.0 * r * dr,
                    dlog_t: 2.0 / k + 2.0 * k / (k2 + 1.0) - ddelta / p.delta,
                })
            }
        }
    }

    /// `δ(k) = arg(det S)/2`, continuous along the ascending grid and
    /// anchored so that `δ → 0` at large momentum.
    pub fn phase_shift(&self, k_grid: &[f64]) -> Result<Vec<f64>> {
        if k_grid.is_empty() {
            return Ok(Vec::new());
        }
        if k_grid[0] <= 0.0 || k_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "phase-shift grid must be strictly positive and ascending".into(),
            ));
        }
        let half_arg = |k: f64| -> Result<f64> { Ok(0.5 * self.det_s(Complex64::new(k, 0.0))?.arg()) };
        // Walk down from a momentum where the phase shift is negligible.
        let last = *k_grid.last().expect("grid is non-empty");
        let far = (1e4 * last).max(1e4 / self.a).max(1e4);
        let mut k = far;
        let mut delta = half_arg(k)?;
        while k > last {
            let next = (k / 1.02).max(last);
            delta = unwrap_step(delta, half_arg(next)?, next, k)?;
            k = next;
        }
        let mut out = vec![0.0; k_grid.len()];
        out[k_grid.len() - 1] = delta;
        for j in (0..k_grid.len() - 1).rev() {
            let value = unwrap_step(out[j + 1], half_arg(k_grid[j])?, k_grid[j], k_grid[j + 1])?;
            out[j] = value;
        }
        Ok(out)
    }

    /// `∂_k δ = (1/2i) ∂_k log det S`.
    pub fn phase_shift_derivative(&self, k: Complex64) -> Result<Complex64> {
        let jet = self.jet(k)?;
        Ok(jet.ddet_s / (jet.det_s * 2.0 * I))
    }

    fn pt_eps(&self) -> f64 {
        match self.potential {
            NodePotential::TruncatedPoschlTeller { eps } => eps,
            NodePotential::DeltaDeltaPrime { .. } => unreachable!("only called for the PT node"),
        }
    }

    fn pt_parts(&self, lambda: f64, tau: f64, k: Complex64) -> Result<PtParts> {
        let eps = self.pt_eps();
        let e = (I * eps * k).exp();
        let b = lambda + 2.0 * k * (k - I * tau);
        let c = lambda + 2.0 * k * (k + I * tau);
        let l2 = lambda * lambda;
        let delta = -e * e * l2 + b * b;
        let scale = (e * e).norm() * l2 + b.norm_sqr();
        if delta.norm() < 1e-12 * scale {
            return Err(Error::PoleProximity { re: k.re, im: k.im });
        }
        Ok(PtParts {
            e,
            b,
            c,
            delta,
            n: 4.0 * k * k * (k * k + 1.0),
            r_num: lambda * (e * c - b / e),
        })
    }
}

struct PtParts {
    e: Complex64,
    b: Complex64,
    c: Complex64,
    delta: Complex64,
    n: Complex64,
    r_num: Complex64,
}

fn nonzero_momentum(k: Complex64) -> Result<()> {
    if k == Complex64::new(0.0, 0.0) || k.re.is_nan() || k.im.is_nan() {
        return Err(Error::InvalidArgument(format!("amplitudes need k != 0, got {k}")));
    }
    Ok(())
}

fn ddp_denominator(gamma: f64, k: Complex64) -> Result<Complex64> {
    let den = I * gamma + 2.0 * k;
    if den.norm() < 1e-12 * (gamma.abs() + 2.0 * k.norm()) {
        return Err(Error::PoleProximity { re: k.re, im: k.im });
    }
    Ok(den)
}

fn unwrap_step(previous: f64, raw: f64, k_lo: f64, k_hi: f64) -> Result<f64> {
    let turns = ((previous - raw) / std::f64::consts::PI).round();
    let value = raw + turns * std::f64::consts::PI;
    if (value - previous).abs() > std::f64::consts::FRAC_PI_4 {
        return Err(Error::GridTooCoarse { k_lo, k_hi });
    }
    Ok(value)
}

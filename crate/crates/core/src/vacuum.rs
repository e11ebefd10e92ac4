//! Zero-temperature Casimir energy per unit plate area.
//!
//! The parallel momenta are integrated out first, leaving the kernel
//! `−(m² + k²)^{3/2}/(6π)` summed over the dispersion roots of every Bloch
//! phase. The root sum is turned into ray integrals on the wedge contour,
//! and the bulk and single-node divergences are removed by dropping the
//! `a`, `log t` and `log det S` pieces of `∂_k log f_θ`.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contour::{Engine, LogDerivative};
use crate::error::{Error, Result};
use crate::numerics::{try_integrate, try_richardson_derivative, QuadratureSpec};
use crate::scattering::{CombModel, NodePotential};
use crate::specialfn::branched_power_3_2;
use crate::spectrum;

/// Which rays carry the contour integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RayForm {
    /// Upper ray only, using conjugate symmetry of the lower ray.
    SingleRay,
    /// Both rays; the imaginary part of the combination is a residue check.
    TwoRay,
}

/// The wedge contour `k = v + ξ e^{±iγ}`, `ξ ≥ 0`, and the quadrature
/// controls used along it.
///
/// The radial cutoff is set by `quad.abs_tol`: rays are truncated once the
/// integrand stays below `abs_tol·10⁻²` per decay length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    /// Half-opening angle `γ ∈ (0, π/4)`.
    pub gamma_angle: f64,
    /// Mass `m` entering the kernel; also the default vertex.
    pub m_offset: f64,
    pub quad: QuadratureSpec,
    /// Gauss–Legendre nodes per θ piece.
    pub theta_nodes: usize,
    /// `None` selects the module default: two rays for the vacuum energy,
    /// one ray for thermal quantities.
    pub form: Option<RayForm>,
    /// Vertex other than `m_offset`; results are independent of it.
    pub vertex: Option<f64>,
}

impl ContourSpec {
    /// Defaults: `γ = π/8`, 64 θ nodes, `m_offset` from the model's mass.
    pub fn for_model(model: &CombModel) -> Result<Self> {
        Ok(Self::with_mass(spectrum::mass(model)?))
    }

    pub fn with_mass(m_offset: f64) -> Self {
        Self {
            gamma_angle: FRAC_PI_8,
            m_offset,
            quad: QuadratureSpec::default(),
            theta_nodes: 64,
            form: None,
            vertex: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.quad.validate()?;
        if !(self.gamma_angle > 0.0 && self.gamma_angle < FRAC_PI_4) {
            return Err(Error::InvalidArgument(format!(
                "contour angle must lie in (0, pi/4), got {}",
                self.gamma_angle
            )));
        }
        if !(self.m_offset >= 0.0) || !self.m_offset.is_finite() {
            return Err(Error::InvalidArgument(format!("m_offset must be >= 0, got {}", self.m_offset)));
        }
        if let Some(v) = self.vertex {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!("vertex must be >= 0, got {v}")));
            }
        }
        if self.theta_nodes < 2 {
            return Err(Error::InvalidArgument("theta_nodes must be at least 2".into()));
        }
        Ok(())
    }

    pub(crate) fn engine<'a>(&self, model: &'a CombModel, default_form: RayForm) -> Result<Engine<'a>> {
        self.validate()?;
        let negative = spectrum::negative_band(model)?;
        if let Some(band) = negative {
            if self.m_offset < band.kappa_min * (1.0 - 1e-12) {
                return Err(Error::UnitarityViolation {
                    kappa_min: band.kappa_min,
                    mass: self.m_offset,
                });
            }
        }
        Ok(Engine {
            model,
            vertex: self.vertex.unwrap_or(self.m_offset),
            gamma: self.gamma_angle,
            quad: self.quad,
            theta_nodes: self.theta_nodes,
            two_ray: self.form.unwrap_or(default_form) == RayForm::TwoRay,
            negative,
        })
    }
}

/// Quadrature diagnostics of a contour evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContourDiagnostics {
    /// Ray quadrature errors propagated through the θ rule.
    pub inner_error: f64,
    /// θ-rule error from comparing `n` and `n/2` node rules.
    pub theta_error: f64,
    /// Largest integrand magnitude at a ray truncation point.
    pub max_tail: f64,
    /// Largest `|K₋ − conj K₊|` over θ nodes (two-ray form only).
    pub max_conjugate_mismatch: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VacuumResult {
    /// `bound_part + contour_part`.
    pub e0_per_area: f64,
    /// Negative-band contribution; zero without a negative band.
    pub bound_part: f64,
    pub contour_part: f64,
    /// Imaginary part left over by the two-ray form; zero for one ray.
    pub im_residue: f64,
    pub error_estimate: f64,
    pub mass: f64,
    pub theta_c: Option<f64>,
    /// Set for δδ′ nodes with `w0 < 0`, which use the massive path.
    pub experimental: bool,
    pub diagnostics: ContourDiagnostics,
}

fn kernel(m: f64) -> impl Fn(Complex64) -> Result<Complex64> + Sync {
    move |k| branched_power_3_2(m, k)
}

/// `E₀/A` for the comb, including the negative-band part when present.
pub fn casimir_energy(model: &CombModel, contour: &ContourSpec) -> Result<VacuumResult> {
    let engine = contour.engine(model, RayForm::TwoRay)?;
    let m = contour.m_offset;
    let g = kernel(m);
    let sum = engine.mode_sum(&g, LogDerivative::Subtracted, 1.0 / (model.a() * contour.gamma_angle.sin()))?;
    let (bound, bound_error) =
        engine.bound_sum(&|kappa: f64| Ok((m * m - kappa * kappa).max(0.0).powf(1.5)))?;
    let segment = segment_term(model, engine.vertex, m, &contour.quad)?;
    let norm = 1.0 / (6.0 * PI);
    // `+ 0.0` turns the empty band's −0 into +0.
    let bound_part = -norm * bound + 0.0;
    let contour_part = -norm * sum.value.re + segment.0;
    Ok(VacuumResult {
        e0_per_area: bound_part + contour_part,
        bound_part,
        contour_part,
        im_residue: -norm * sum.value.im,
        error_estimate: norm * (sum.inner_error + sum.theta_error + bound_error) + segment.1,
        mass: m,
        theta_c: engine.negative.map(|b| b.theta_c),
        experimental: matches!(model.potential(), NodePotential::DeltaDeltaPrime { w0, .. } if w0 < 0.0),
        diagnostics: ContourDiagnostics {
            inner_error: norm * sum.inner_error,
            theta_error: norm * sum.theta_error,
            max_tail: sum.max_tail,
            max_conjugate_mismatch: sum.max_conjugate_mismatch,
        },
    })
}

/// The subtraction restored on `(0, v)`, where roots are summed explicitly:
/// `(1/6π²) ∫₀^v (m² + k²)^{3/2} (a + δ′(k)) dk`.
fn segment_term(model: &CombModel, vertex: f64, m: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    if vertex <= 0.0 {
        return Ok((0.0, 0.0));
    }
    let a = model.a();
    let q = try_integrate(
        |k: f64| -> Result<Complex64> {
            let z = Complex64::new(k, 0.0);
            let dd = model.phase_shift_derivative(z)?.re;
            Ok(Complex64::new((m * m + k * k).powf(1.5) * (a + dd), 0.0))
        },
        0.0,
        vertex,
        quad,
    )?;
    let norm = 1.0 / (6.0 * PI * PI);
    Ok((norm * q.value.re, norm * q.error))
}

/// `−∂E₀/∂a` at fixed node couplings; the mass is recomputed at each
/// shifted spacing.
pub fn casimir_pressure_t0(model: &CombModel, contour: &ContourSpec) -> Result<f64> {
    Ok(casimir_pressure_t0_detailed(model, contour)?.value)
}

/// [`casimir_pressure_t0`] with its finite-difference error estimate.
pub fn casimir_pressure_t0_detailed(
    model: &CombModel,
    contour: &ContourSpec,
) -> Result<crate::numerics::Derivative> {
    contour.validate()?;
    let a = model.a();
    let h = 1e-3 * a;
    let e0 = |spacing: f64| -> Result<f64> {
        let shifted = model.with_spacing(spacing)?;
        let spec = ContourSpec {
            m_offset: spectrum::mass(&shifted)?,
            vertex: None,
            ..*contour
        };
        Ok(casimir_energy(&shifted, &spec)?.e0_per_area)
    };
    let d = try_richardson_derivative(e0, a, h)?;
    Ok(crate::numerics::Derivative {
        value: -d.value,
        ..d
    })
}

/// Finite part contributed by a reference lattice of spacing `a0` built
/// from the same nodes and mass. Its vanishing as `a0 → ∞` is what allows
/// the subtraction to be taken in closed form.
pub fn reference_lattice_term(model: &CombModel, contour: &ContourSpec, a0: f64) -> Result<f64> {
    let reference = model.with_spacing(a0)?;
    let spec = ContourSpec {
        vertex: None,
        ..*contour
    };
    let engine = spec.engine(&reference, RayForm::SingleRay)?;
    let g = kernel(contour.m_offset);
    let sum = engine.mode_sum(&g, LogDerivative::Subtracted, 1.0 / (a0 * contour.gamma_angle.sin()))?;
    let segment = segment_term(&reference, engine.vertex, contour.m_offset, &contour.quad)?;
    Ok(-sum.value.re / (6.0 * PI) + segment.0)
}

//! Temperature-dependent free energy, entropy and pressure per unit area.
//!
//! Summing the Boltzmann factors `T log(1 − e^{−ω/T})` over parallel
//! momenta leaves, per dispersion root `k`, the kernel
//! `I₃ = −(T³/2π)[λ Li₂(e^{−λ}) + Li₃(e^{−λ})]` with `λ = √(k² + m²)/T`.
//! Nothing is subtracted: `I₃` decays exponentially along the rays, so the
//! full `∂_k log f_θ` is used.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::contour::LogDerivative;
use crate::error::{Error, Result};
use crate::numerics::{try_richardson_derivative, Derivative};
use crate::scattering::CombModel;
use crate::specialfn::polylog_exp;
use crate::spectrum;
use crate::vacuum::{casimir_pressure_t0_detailed, ContourDiagnostics, ContourSpec, RayForm};

/// `λ = √(k² + m²)/T` with the principal root, `Re λ ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoltzmannKernel {
    pub lambda: Complex64,
}

impl BoltzmannKernel {
    pub fn new(k: Complex64, m: f64, temperature: f64) -> Result<Self> {
        check_temperature(temperature)?;
        Ok(Self {
            lambda: (k * k + m * m).sqrt() / temperature,
        })
    }

    /// `λ Li₂(e^{−λ}) + Li₃(e^{−λ})`.
    fn bracket(&self) -> Result<Complex64> {
        let l = self.lambda;
        Ok(l * polylog_exp(2, -l)? + polylog_exp(3, -l)?)
    }

    /// `log(1 − e^{−λ})`, accurate for small `λ`.
    pub fn log_boltzmann(&self) -> Complex64 {
        (-expm1(-self.lambda)).ln()
    }
}

fn expm1(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * c - 2.0 * half * half, z.re.exp() * s)
}

fn check_temperature(temperature: f64) -> Result<()> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::InvalidArgument(format!("temperature must be positive, got {temperature}")));
    }
    Ok(())
}

/// `I₃(k, m, T) = −(T³/2π)[λ Li₂(e^{−λ}) + Li₃(e^{−λ})]`.
pub fn i3(k: Complex64, m: f64, temperature: f64) -> Result<Complex64> {
    let b = BoltzmannKernel::new(k, m, temperature)?;
    Ok(-temperature.powi(3) / (2.0 * PI) * b.bracket()?)
}

/// `∂I₃/∂T = −(3T²/2π)[λ Li₂ + Li₃] + (T²/2π) λ² log(1 − e^{−λ})`.
pub fn i3_temperature_derivative(k: Complex64, m: f64, temperature: f64) -> Result<Complex64> {
    let b = BoltzmannKernel::new(k, m, temperature)?;
    let t2 = temperature * temperature / (2.0 * PI);
    let l = b.lambda;
    if l.norm() == 0.0 {
        return Ok(-3.0 * t2 * b.bracket()?);
    }
    Ok(-3.0 * t2 * b.bracket()? + t2 * l * l * b.log_boltzmann())
}

/// A contour-evaluated thermal quantity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermalResult {
    pub value: f64,
    /// Negative-band part of `value`.
    pub bound_part: f64,
    pub error_estimate: f64,
    /// Imaginary part left over by the two-ray form; zero for one ray.
    pub im_residue: f64,
    pub diagnostics: ContourDiagnostics,
}

fn contour_sum<K, B>(model: &CombModel, temperature: f64, contour: &ContourSpec, kernel: K, bound: B) -> Result<ThermalResult>
where
    K: Fn(Complex64) -> Result<Complex64> + Sync,
    B: Fn(f64) -> Result<f64> + Sync,
{
    check_temperature(temperature)?;
    let engine = contour.engine(model, RayForm::SingleRay)?;
    let sum = engine.mode_sum(&kernel, LogDerivative::Full, temperature / contour.gamma_angle.cos())?;
    let (bound_part, bound_error) = engine.bound_sum(&bound)?;
    Ok(ThermalResult {
        value: bound_part + sum.value.re,
        bound_part,
        error_estimate: sum.inner_error + sum.theta_error + bound_error,
        im_residue: sum.value.im,
        diagnostics: ContourDiagnostics {
            inner_error: sum.inner_error,
            theta_error: sum.theta_error,
            max_tail: sum.max_tail,
            max_conjugate_mismatch: sum.max_conjugate_mismatch,
        },
    })
}

/// `ΔF/A` at temperature `T`.
pub fn delta_f(model: &CombModel, temperature: f64, contour: &ContourSpec) -> Result<ThermalResult> {
    let m = contour.m_offset;
    contour_sum(
        model,
        temperature,
        contour,
        |k| i3(k, m, temperature),
        |kappa| Ok(i3(Complex64::new(0.0, kappa), m, temperature)?.re),
    )
}

/// `−∂(ΔF/A)/∂T` with the derivative taken under the integral sign.
pub fn entropy_analytic(model: &CombModel, temperature: f64, contour: &ContourSpec) -> Result<ThermalResult> {
    let m = contour.m_offset;
    let r = contour_sum(
        model,
        temperature,
        contour,
        |k| Ok(-i3_temperature_derivative(k, m, temperature)?),
        |kappa| Ok(-i3_temperature_derivative(Complex64::new(0.0, kappa), m, temperature)?.re),
    )?;
    Ok(r)
}

/// Temperature step of the entropy difference quotient.
pub fn entropy_step(temperature: f64) -> f64 {
    (1e-3 * temperature).max(1e-4)
}

/// `S/A = −∂(ΔF/A)/∂T`, Richardson-extrapolated central difference.
pub fn entropy(model: &CombModel, temperature: f64, contour: &ContourSpec) -> Result<Derivative> {
    check_temperature(temperature)?;
    let h = entropy_step(temperature);
    if temperature - h <= 0.0 {
        return Err(Error::StepCollision { x: temperature, step: h });
    }
    let f = |t: f64| -> Result<f64> { Ok(delta_f(model, t, contour)?.value) };
    let d = try_richardson_derivative(f, temperature, h)?;
    Ok(Derivative { value: -d.value, ..d })
}

/// `P = −∂(ΔF/A)/∂a` at fixed node couplings, recomputing the mass at each
/// shifted spacing. With `include_vacuum_part` the zero-temperature
/// pressure is added.
pub fn pressure(
    model: &CombModel,
    temperature: f64,
    contour: &ContourSpec,
    include_vacuum_part: bool,
) -> Result<Derivative> {
    check_temperature(temperature)?;
    contour.validate()?;
    let a = model.a();
    let f = |spacing: f64| -> Result<f64> {
        let shifted = model.with_spacing(spacing)?;
        let spec = ContourSpec {
            m_offset: spectrum::mass(&shifted)?,
            vertex: None,
            ..*contour
        };
        Ok(delta_f(&shifted, temperature, &spec)?.value)
    };
    let d = try_richardson_derivative(f, a, 1e-3 * a)?;
    let mut p = Derivative { value: -d.value, ..d };
    if include_vacuum_part {
        let v = casimir_pressure_t0_detailed(model, contour)?;
        p.value += v.value;
        p.error += v.error;
        p.suspicious |= v.suspicious;
    }
    Ok(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermoDiagnostics {
    pub delta_f_error: f64,
    pub entropy_error: f64,
    pub pressure_error: f64,
    /// A finite difference did not scale like a smooth function.
    pub suspicious: bool,
}

/// One row of a thermodynamic sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermoPoint {
    pub temperature: f64,
    pub delta_f_per_area: f64,
    pub entropy_per_area: f64,
    pub pressure: f64,
    pub diagnostics: ThermoDiagnostics,
}

impl ThermoPoint {
    pub fn compute(
        model: &CombModel,
        temperature: f64,
        contour: &ContourSpec,
        include_vacuum_part: bool,
    ) -> Result<Self> {
        let f = delta_f(model, temperature, contour)?;
        let s = entropy(model, temperature, contour)?;
        let p = pressure(model, temperature, contour, include_vacuum_part)?;
        Ok(Self {
            temperature,
            delta_f_per_area: f.value,
            entropy_per_area: s.value,
            pressure: p.value,
            diagnostics: ThermoDiagnostics {
                delta_f_error: f.error_estimate,
                entropy_error: s.error,
                pressure_error: p.error,
                suspicious: s.suspicious || p.suspicious,
            },
        })
    }
}

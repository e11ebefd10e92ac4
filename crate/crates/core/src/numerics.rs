//! Numerical kernels: adaptive Gauss–Kronrod quadrature of complex-valued
//! integrands on finite and exponentially decaying semi-infinite ranges,
//! Brent root finding, Gauss–Legendre rules and central differences.
//!
//! Every routine has a `try_` form taking a fallible integrand so that
//! physics errors raised deep inside an integrand propagate unchanged.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and budget for adaptive quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-13,
            max_subdivisions: 4000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) || self.max_subdivisions < 1 {
            return Err(Error::InvalidArgument(format!(
                "quadrature spec needs rel_tol > 0, abs_tol >= 0, max_subdivisions >= 1, got {self:?}"
            )));
        }
        Ok(())
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

/// Value and absolute error estimate of an adaptive quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub intervals: usize,
}

/// Truncated semi-infinite quadrature together with its truncation data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemiInfinite {
    pub quad: Quadrature,
    /// Truncation point.
    pub xi_max: f64,
    /// `|f(xi_max)|`, the arc-vanishing witness.
    pub tail_magnitude: f64,
    /// Bound on the discarded tail, `|f(xi_max)| · decay_scale`.
    pub tail_bound: f64,
}

// 21-point Kronrod extension of the 10-point Gauss rule (abscissae in
// decreasing order, centre last). Gauss nodes are the odd indices.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980399161,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Clone, Copy, Debug)]
struct Segment {
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F, E>(f: &mut F, lo: f64, hi: f64) -> std::result::Result<Segment, E>
where
    F: FnMut(f64) -> std::result::Result<Complex64, E>,
{
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(centre)?;
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut abs_sum = fc.norm() * WGK[10];
    let mut values = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx)?;
        let f2 = f(centre + dx)?;
        values[j] = (f1, f2);
        kronrod += (f1 + f2) * WGK[j];
        abs_sum += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).norm() * WGK[10];
    for j in 0..10 {
        asc += ((values[j].0 - mean).norm() + (values[j].1 - mean).norm()) * WGK[j];
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).norm();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment {
        lo,
        hi,
        value,
        error,
    })
}

/// Adaptive quadrature of a complex-valued function over `[lo, hi]`.
pub fn integrate<F>(mut f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: FnMut(f64) -> Complex64,
{
    try_integrate(|x| Ok::<_, Error>(f(x)), lo, hi, spec)
}

/// Fallible form of [`integrate`].
pub fn try_integrate<F, E>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> std::result::Result<Quadrature, E>
where
    F: FnMut(f64) -> std::result::Result<Complex64, E>,
    E: From<Error>,
{
    try_integrate_pieces(f, &[lo, hi], spec)
}

/// Adaptive quadrature over `[breaks[0], breaks[last]]` starting from the
/// subdivision given by `breaks` (strictly increasing).
pub fn try_integrate_pieces<F, E>(
    mut f: F,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> std::result::Result<Quadrature, E>
where
    F: FnMut(f64) -> std::result::Result<Complex64, E>,
    E: From<Error>,
{
    spec.validate()?;
    if breaks.len() < 2 {
        return Err(Error::InvalidArgument("quadrature needs at least one interval".into()).into());
    }
    let (lo, hi) = (breaks[0], breaks[breaks.len() - 1]);
    if lo == hi {
        return Ok(Quadrature {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
            intervals: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        let seg = gk21(&mut f, w[0], w[1])?;
        evaluations += 21;
        value += seg.value;
        error += seg.error;
        heap.push(seg);
    }
    let mut subdivisions = heap.len();
    while error > spec.target(value) {
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::BudgetExceeded {
                lo,
                hi,
                subdivisions,
                error,
            }
            .into());
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Interval at floating-point resolution: accept its contribution.
            heap.push(Segment {
                error: 0.0,
                ..worst
            });
            error -= worst.error;
            continue;
        }
        let left = gk21(&mut f, worst.lo, mid)?;
        let right = gk21(&mut f, mid, worst.hi)?;
        evaluations += 42;
        subdivisions += 1;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum in interval order so the result does not depend on heap history.
    let mut segments = heap.into_vec();
    segments.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let value = segments.iter().map(|s| s.value).sum();
    let error = segments.iter().map(|s| s.error).sum();
    Ok(Quadrature {
        value,
        error,
        evaluations,
        intervals: segments.len(),
    })
}

/// Integral over `[lo, ∞)` of a function decaying at least like
/// `exp(-(x - lo) / decay_scale)`.
pub fn integrate_semi_infinite<F>(
    mut f: F,
    lo: f64,
    decay_scale: f64,
    spec: &QuadratureSpec,
) -> Result<SemiInfinite>
where
    F: FnMut(f64) -> Complex64,
{
    try_integrate_semi_infinite(|x| Ok::<_, Error>(f(x)), lo, decay_scale, spec)
}

/// Maximum number of decay scales probed before declaring non-decay.
const PROBE_SCALES: usize = 400;

/// Fallible form of [`integrate_semi_infinite`].
///
/// The range is truncated at the first probe point `lo + j·decay_scale`
/// (j ≥ 2) where this and the next probe satisfy
/// `|f|·decay_scale ≤ abs_tol·10⁻²`; the remaining finite range is
/// integrated starting from a subdivision into unit decay scales.
pub fn try_integrate_semi_infinite<F, E>(
    mut f: F,
    lo: f64,
    decay_scale: f64,
    spec: &QuadratureSpec,
) -> std::result::Result<SemiInfinite, E>
where
    F: FnMut(f64) -> std::result::Result<Complex64, E>,
    E: From<Error>,
{
    spec.validate()?;
    if !(decay_scale > 0.0) || !lo.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "semi-infinite quadrature needs finite lo and decay_scale > 0, got {lo}, {decay_scale}"
        ))
        .into());
    }
    let tail_tol = spec.abs_tol.max(f64::MIN_POSITIVE) * 1e-2;
    let mut previous_small = false;
    let mut last = f64::INFINITY;
    let mut cut = None;
    for j in 2..=PROBE_SCALES {
        let x = lo + j as f64 * decay_scale;
        let magnitude = f(x)?.norm();
        last = magnitude;
        let small = magnitude * decay_scale <= tail_tol;
        if small && previous_small {
            cut = Some((j - 1, lo + (j - 1) as f64 * decay_scale));
            break;
        }
        previous_small = small;
    }
    let Some((pieces, xi_max)) = cut else {
        return Err(Error::TailEstimate {
            lo,
            decay_scale,
            last,
        }
        .into());
    };
    let breaks: Vec<f64> = (0..=pieces)
        .map(|j| lo + j as f64 * decay_scale)
        .collect();
    let quad = try_integrate_pieces(&mut f, &breaks, spec)?;
    let tail_magnitude = f(xi_max)?.norm();
    Ok(SemiInfinite {
        quad,
        xi_max,
        tail_magnitude,
        tail_bound: tail_magnitude * decay_scale,
    })
}

/// Interval known to bracket a sign change.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
}

impl RootBracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidArgument(format!(
                "root bracket needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(RootBracket { lo, hi })
    }
}

/// Brent's method on a sign-changing bracket; stops when the bracket is
/// narrower than `tol` or an exact zero is hit.
pub fn find_root<F>(mut f: F, bracket: RootBracket, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_find_root(|x| Ok::<_, Error>(f(x)), bracket, tol)
}

/// Fallible form of [`find_root`].
pub fn try_find_root<F, E>(mut f: F, bracket: RootBracket, tol: f64) -> std::result::Result<f64, E>
where
    F: FnMut(f64) -> std::result::Result<f64, E>,
    E: From<Error>,
{
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoSignChange {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        }
        .into());
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Ok(b)
}

/// Brackets of every sign change of `f` on a uniform scan of `[lo, hi]`.
/// Sample points where `f` is exactly zero are reported as degenerate
/// brackets `(x, x)`.
pub fn try_scan_sign_changes<F, E>(
    mut f: F,
    lo: f64,
    hi: f64,
    step: f64,
) -> std::result::Result<Vec<(f64, f64)>, E>
where
    F: FnMut(f64) -> std::result::Result<f64, E>,
    E: From<Error>,
{
    if !(step > 0.0) || !(hi > lo) {
        return Err(Error::InvalidArgument(format!(
            "scan needs lo < hi and step > 0, got [{lo}, {hi}] step {step}"
        ))
        .into());
    }
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(lo)?;
    if f0 == 0.0 {
        out.push((lo, lo));
    }
    for j in 1..=n {
        let x1 = if j == n { hi } else { lo + j as f64 * (hi - lo) / n as f64 };
        let f1 = f(x1)?;
        if f1 == 0.0 {
            out.push((x1, x1));
        } else if f0 != 0.0 && f0.signum() != f1.signum() {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(out)
}

/// Gauss–Legendre nodes and weights on `[lo, hi]`, nodes ascending.
pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = 0.5 * (hi - lo);
    let centre = 0.5 * (hi + lo);
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp;
        loop {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = centre - half * z;
        nodes[n - 1 - i] = centre + half * z;
        weights[i] = 2.0 * half / ((1.0 - z * z) * dp * dp);
        weights[n - 1 - i] = weights[i];
    }
    (nodes, weights)
}

/// First derivative estimate with an error estimate and a smoothness flag.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Derivative {
    pub value: f64,
    pub error: f64,
    /// Set when second differences at `h` and `h/2` do not scale like `h²`,
    /// which signals a kink or noise at the step scale.
    pub suspicious: bool,
}

/// Plain central difference `(f(x+h) − f(x−h)) / 2h`.
pub fn central_derivative<F>(mut f: F, x: f64, h: f64) -> Result<Derivative>
where
    F: FnMut(f64) -> f64,
{
    try_central_derivative(|x| Ok::<_, Error>(f(x)), x, h)
}

/// Fallible form of [`central_derivative`].
pub fn try_central_derivative<F, E>(mut f: F, x: f64, h: f64) -> std::result::Result<Derivative, E>
where
    F: FnMut(f64) -> std::result::Result<f64, E>,
    E: From<Error>,
{
    check_step(h)?;
    let (fp, fm, f0) = (f(x + h)?, f(x - h)?, f(x)?);
    let (fp2, fm2) = (f(x + 0.5 * h)?, f(x - 0.5 * h)?);
    let value = (fp - fm) / (2.0 * h);
    let half = (fp2 - fm2) / h;
    Ok(Derivative {
        value,
        error: (value - half).abs(),
        suspicious: not_smooth(f0, fp, fm, fp2, fm2),
    })
}

/// Central difference Richardson-extrapolated from steps `h` and `h/2`.
pub fn richardson_derivative<F>(mut f: F, x: f64, h: f64) -> Result<Derivative>
where
    F: FnMut(f64) -> f64,
{
    try_richardson_derivative(|x| Ok::<_, Error>(f(x)), x, h)
}

/// Fallible form of [`richardson_derivative`].
pub fn try_richardson_derivative<F, E>(
    mut f: F,
    x: f64,
    h: f64,
) -> std::result::Result<Derivative, E>
where
    F: FnMut(f64) -> std::result::Result<f64, E>,
    E: From<Error>,
{
    check_step(h)?;
    let (fp, fm) = (f(x + h)?, f(x - h)?);
    let (fp2, fm2) = (f(x + 0.5 * h)?, f(x - 0.5 * h)?);
    let f0 = f(x)?;
    let coarse = (fp - fm) / (2.0 * h);
    let fine = (fp2 - fm2) / h;
    let value = (4.0 * fine - coarse) / 3.0;
    Ok(Derivative {
        value,
        error: (value - fine).abs(),
        suspicious: not_smooth(f0, fp, fm, fp2, fm2),
    })
}

fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("finite-difference step must be positive, got {h}")));
    }
    Ok(())
}

fn not_smooth(f0: f64, fp: f64, fm: f64, fp2: f64, fm2: f64) -> bool {
    let coarse = fp - 2.0 * f0 + fm;
    let fine = fp2 - 2.0 * f0 + fm2;
    let noise = 1e3 * f64::EPSILON * (f0.abs() + fp.abs() + fm.abs());
    coarse.abs() > noise && (coarse - 4.0 * fine).abs() > 0.5 * coarse.abs()
}

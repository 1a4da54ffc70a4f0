//! Floating-point verification of modular transformation behaviour.
//!
//! - [`eval_series`] sums an exact series at a point in the upper half
//!   plane and reports a truncation-tail bound alongside the value.
//! - [`eta_complex`] evaluates the eta function by its q-product, reducing
//!   the argument by translations and inversions first.
//! - [`r_series`] and [`r_quadrature`] give two independent routes to the
//!   non-holomorphic period sums: a complementary-error-function series and
//!   an adaptive-Simpson line integral against a weight `3/2` theta kernel;
//!   [`mordell_f`] is the eta-cubed specialisation entering the string
//!   function completions.
//! - [`indefinite_theta`] sums a signature `(1, 1)` theta with error-function
//!   weights, split exactly termwise into holomorphic and non-holomorphic
//!   parts.
//! - the `check_*` functions evaluate the translation and inversion laws,
//!   the period-sum examples, and the completion identities over a fixed
//!   grid of base points, returning the largest residual observed.

use crate::hecke::{hecke_double_sum, string_c, HeckeParams, StringSpec};
use crate::series::PuiseuxSeries;
use crate::theta::{eta_series, j_ab};
use crate::{rat, rint, Error, Rat, Result};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use std::f64::consts::PI;

/// The complementary-error-function weight `erfc(sqrt(pi x))`.
pub fn beta_fn(x: f64) -> f64 {
    libm::erfc((PI * x).sqrt())
}

/// The error-function weight `erf(sqrt(pi) x)`, equal to
/// `sgn(x) - sgn(x) beta_fn(x^2)` with `sgn(0) = +1`.
pub fn e_weight(x: f64) -> f64 {
    libm::erf(PI.sqrt() * x)
}

fn sgn_plus(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// `log(beta_fn(x^2))` with an asymptotic branch for large arguments.
fn ln_beta_sq(x_abs: f64) -> f64 {
    let z = PI.sqrt() * x_abs;
    if z < 25.0 {
        libm::erfc(z).ln()
    } else {
        -z * z - z.ln() - 0.5 * PI.ln()
    }
}

fn rat_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational fits in f64")
}

fn cis(arg: f64) -> Complex64 {
    Complex64::new(arg.cos(), arg.sin())
}

/// Evaluate an exact series at `tau` in the upper half plane, returning the
/// value together with a bound on the dropped tail beyond the truncation
/// order.
pub fn eval_series(series: &PuiseuxSeries, tau: Complex64) -> (Complex64, f64) {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut cmax: f64 = 1.0;
    for (e, c) in series.iter_terms() {
        let ef = rat_f64(&e);
        let cf = rat_f64(c);
        cmax = cmax.max(cf.abs());
        acc += cf * cis(2.0 * PI * ef * tau.re) * (-2.0 * PI * ef * tau.im).exp();
    }
    let bound = match series.order().bound() {
        Some(t) => {
            let ln_q = -2.0 * PI * tau.im;
            cmax * (ln_q * rat_f64(t)).exp() / (1.0 - ln_q.exp())
        }
        None => 0.0,
    };
    (acc, bound)
}

/// The eta function on the upper half plane, via translation reduction, the
/// inversion law for small imaginary part, and the q-product.
pub fn eta_complex(tau: Complex64) -> Complex64 {
    eta_with_depth(tau, 0)
}

fn eta_with_depth(tau: Complex64, depth: u32) -> Complex64 {
    let shift = tau.re.round();
    let reduced = Complex64::new(tau.re - shift, tau.im);
    let phase = cis(PI * shift / 12.0);
    if reduced.im < 0.8 && depth < 64 {
        let flipped = -reduced.inv();
        let root = (-Complex64::i() * reduced).sqrt();
        return phase * eta_with_depth(flipped, depth + 1) / root;
    }
    let ln_q_mag = -2.0 * PI * reduced.im;
    let terms = ((-41.0 / ln_q_mag).ceil() as usize).clamp(1, 4000);
    let q = cis(2.0 * PI * reduced.re) * ln_q_mag.exp();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qk = Complex64::new(1.0, 0.0);
    for _ in 0..terms {
        qk *= q;
        prod *= Complex64::new(1.0, 0.0) - qk;
    }
    let lead = cis(2.0 * PI * reduced.re / 24.0) * (ln_q_mag / 24.0).exp();
    phase * lead * prod
}

/// Adaptive Simpson quadrature for a complex-valued integrand on `[a, b]`.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    fn recurse<F>(
        f: &F,
        a: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Result<Complex64>
    where
        F: Fn(f64) -> Complex64,
    {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.norm() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        if depth >= 48 {
            return Err(Error::QuadratureFailure {
                context: format!("no convergence on [{a}, {b}]"),
            });
        }
        let half = recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
        let other = recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
        Ok(half + other)
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 0)
}

/// The weight `3/2` theta kernel: the sum of `nu * exp(pi i nu^2 z + 2 pi i
/// nu b)` over `nu` in `a + Z`.
pub fn g_unary(a: f64, b: f64, z: Complex64) -> Complex64 {
    let y = z.im;
    let radius = ((42.0 / (PI * y)).sqrt() + a.abs() + 2.0) as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in -radius..=radius {
        let nu = a + n as f64;
        let mag = (-PI * nu * nu * y).exp();
        acc += nu * mag * cis(PI * nu * nu * z.re + 2.0 * PI * nu * b);
    }
    acc
}

/// The non-holomorphic period sum as a complementary-error-function series:
/// the sum of `sgn(nu) beta_fn(2 nu^2 y) e^(-2 pi i nu b) q^(-nu^2/2)` over
/// `nu` in `a + Z`, with `sgn(0) = +1`.
pub fn r_series(a: f64, b: f64, tau: Complex64) -> Complex64 {
    let y = tau.im;
    let radius = ((42.0 / (PI * y)).sqrt() + a.abs() + 3.0) as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in -radius..=radius {
        let nu = a + n as f64;
        // |beta(2 nu^2 y) q^(-nu^2/2)| decays like exp(-pi nu^2 y).
        let ln_mag = ln_beta_sq((2.0 * y).sqrt() * nu.abs()) + PI * nu * nu * y;
        if ln_mag < -46.0 {
            continue;
        }
        let phase = cis(-2.0 * PI * nu * b - PI * nu * nu * tau.re);
        acc += sgn_plus(nu) * ln_mag.exp() * phase;
    }
    acc
}

/// The non-holomorphic period sum as a line integral: `-i` times the
/// integral of `g_unary(a, -b; z) / sqrt(-i (z + tau))` from `-conj(tau)`
/// to `i` infinity.
pub fn r_quadrature(a: f64, b: f64, tau: Complex64) -> Result<Complex64> {
    let y = tau.im;
    let frac = a - a.floor();
    let dist = frac.min(1.0 - frac);
    let a0 = if dist < 1e-9 { 1.0 } else { dist };
    // The kernel decays like exp(-pi a0^2 (y + t)); reach below 1e-18.
    let span = 42.0 / (PI * a0 * a0);
    let start = -tau.conj();
    let integrand = |t: f64| g_unary(a, -b, start + Complex64::new(0.0, t)) / (2.0 * y + t).sqrt();
    adaptive_simpson(&integrand, 0.0, span, 1e-12)
}

/// The eta-cubed period integral: one half of the integral of
/// `eta(-conj(tau) + i t)^3 / sqrt(2 Im(tau) + t)` over `t >= 0`.
pub fn mordell_f(tau: Complex64) -> Result<Complex64> {
    let y = tau.im;
    let start = -tau.conj();
    let integrand =
        |t: f64| eta_with_depth(start + Complex64::new(0.0, t), 0).powu(3) / (2.0 * y + t).sqrt();
    Ok(0.5 * adaptive_simpson(&integrand, 0.0, 48.0, 1e-12)?)
}

/// The Mordell-type integral entering the inversion law: the integral of
/// `eta(z)^3 / sqrt(-i (z + tau))` along the positive imaginary axis.
pub fn mordell_i0(tau: Complex64) -> Result<Complex64> {
    let integrand = |t: f64| {
        if t < 1e-12 {
            return Complex64::new(0.0, 0.0);
        }
        let eta3 = eta_with_depth(Complex64::new(0.0, t), 0).powu(3);
        let root = (Complex64::new(t, 0.0) - Complex64::i() * tau).sqrt();
        eta3 / root
    };
    Ok(Complex64::i() * adaptive_simpson(&integrand, 0.0, 48.0, 1e-12)?)
}

/// Which part of an indefinite theta sum to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaPart {
    Full,
    Holomorphic,
    NonHolomorphic,
}

/// An integral symmetric bilinear form of signature `(1, 1)` with two
/// negative-norm cusp directions in the same component.
#[derive(Clone, Copy, Debug)]
pub struct IndefiniteForm {
    a11: i64,
    a12: i64,
    a22: i64,
    c1: (i64, i64),
    c2: (i64, i64),
}

impl IndefiniteForm {
    /// Validate the signature and cusp conditions.
    pub fn new(a11: i64, a12: i64, a22: i64, c1: (i64, i64), c2: (i64, i64)) -> Result<Self> {
        let form = IndefiniteForm {
            a11,
            a12,
            a22,
            c1,
            c2,
        };
        let det = a11 * a22 - a12 * a12;
        if det >= 0 {
            return Err(Error::InvalidParameter(format!(
                "form must be indefinite, determinant {det}"
            )));
        }
        let q1 = form.quad(c1.0 as f64, c1.1 as f64);
        let q2 = form.quad(c2.0 as f64, c2.1 as f64);
        let pairing = form.bilinear(
            (c1.0 as f64, c1.1 as f64),
            (c2.0 as f64, c2.1 as f64),
        );
        if q1 >= 0.0 || q2 >= 0.0 || pairing >= 0.0 {
            return Err(Error::InvalidParameter(
                "cusp directions must have negative norm and negative pairing".into(),
            ));
        }
        Ok(form)
    }

    fn quad(&self, u0: f64, u1: f64) -> f64 {
        0.5 * (self.a11 as f64 * u0 * u0
            + 2.0 * self.a12 as f64 * u0 * u1
            + self.a22 as f64 * u1 * u1)
    }

    fn bilinear(&self, u: (f64, f64), v: (f64, f64)) -> f64 {
        self.a11 as f64 * u.0 * v.0
            + self.a12 as f64 * (u.0 * v.1 + u.1 * v.0)
            + self.a22 as f64 * u.1 * v.1
    }
}

/// The signature `(1, 1)` form attached to the half-level string pair.
pub fn string_pair_form() -> IndefiniteForm {
    IndefiniteForm::new(1, 5, 20, (-4, 1), (-5, 1)).expect("fixed form is admissible")
}

/// The companion form for the quantum-side vector.
pub fn companion_pair_form() -> IndefiniteForm {
    IndefiniteForm::new(5, 5, 1, (-1, 5), (-1, 1)).expect("fixed form is admissible")
}

fn theta_sum(
    form: &IndefiniteForm,
    a: (f64, f64),
    b: (f64, f64),
    tau: Complex64,
    part: ThetaPart,
    radius: i64,
) -> Complex64 {
    let y = tau.im;
    let c1 = (form.c1.0 as f64, form.c1.1 as f64);
    let c2 = (form.c2.0 as f64, form.c2.1 as f64);
    let s1 = (y / -form.quad(c1.0, c1.1)).sqrt();
    let s2 = (y / -form.quad(c2.0, c2.1)).sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    for n0 in -radius..=radius {
        for n1 in -radius..=radius {
            let u = (a.0 + n0 as f64, a.1 + n1 as f64);
            let qv = form.quad(u.0, u.1);
            let b1 = form.bilinear(c1, u);
            let b2 = form.bilinear(c2, u);
            let phase = cis(2.0 * PI * (qv * tau.re + form.bilinear(u, b)));
            if part != ThetaPart::NonHolomorphic {
                let w = sgn_plus(b1) - sgn_plus(b2);
                if w != 0.0 {
                    // The paired quadrants have non-negative norm, so the
                    // magnitude never exceeds one.
                    acc += w * (-2.0 * PI * y * qv).exp() * phase;
                }
            }
            if part != ThetaPart::Holomorphic {
                for (bv, scale, outer) in [(b1, s1, -1.0), (b2, s2, 1.0)] {
                    let ln_mag = ln_beta_sq((bv * scale).abs()) - 2.0 * PI * y * qv;
                    if ln_mag < -46.0 {
                        continue;
                    }
                    acc += outer * sgn_plus(bv * scale) * ln_mag.exp() * phase;
                }
            }
        }
    }
    acc
}

/// An error-function-weighted indefinite theta sum with characteristics
/// `a`, `b`, restricted to the requested part; the radius is grown until
/// two successive sums agree within `tol`.
pub fn indefinite_theta(
    form: &IndefiniteForm,
    a: (f64, f64),
    b: (f64, f64),
    tau: Complex64,
    part: ThetaPart,
    tol: f64,
) -> Result<Complex64> {
    let mut prev: Option<Complex64> = None;
    let mut radius = 24;
    while radius <= 96 {
        let s = theta_sum(form, a, b, tau, part, radius);
        if let Some(p) = prev {
            if (s - p).norm() <= tol {
                return Ok(s);
            }
        }
        prev = Some(s);
        radius += 12;
    }
    Err(Error::InsufficientPrecision {
        context: format!("indefinite theta radius exhausted at tau = {tau}"),
    })
}

/// The base points used by every transformation check.
pub fn tau_grid() -> Vec<Complex64> {
    vec![
        Complex64::new(0.0, 1.0),
        Complex64::new(0.25, 1.0),
        Complex64::new(-1.0 / 3.0, 2.0),
        Complex64::new(0.0, 1.5),
        Complex64::new(0.1, 1.2),
    ]
}

fn half_level_pair(order: i64) -> Result<(PuiseuxSeries, PuiseuxSeries)> {
    let t = rint(order);
    let first = string_c(&StringSpec::new(2, 5, 0, 0)?, &t)?;
    let second = string_c(&StringSpec::new(2, 5, 2, 0)?, &t)?;
    Ok((first, second))
}

fn theta_weight_pair(order: i64) -> Result<(PuiseuxSeries, PuiseuxSeries)> {
    let t = rint(order);
    let first = j_ab(1, 5, &t)?.mul_monomial(&rint(1), &rat(9, 40))?;
    let second = j_ab(2, 5, &t)?.mul_monomial(&rint(1), &rat(1, 40))?;
    Ok((first, second))
}

fn sin_matrix_apply(v: (Complex64, Complex64)) -> (Complex64, Complex64) {
    let s1 = (PI / 5.0).sin();
    let s2 = (2.0 * PI / 5.0).sin();
    (s2 * v.0 - s1 * v.1, -s1 * v.0 - s2 * v.1)
}

/// Residual of the translation law for the half-level string pair: shifting
/// `tau` by one multiplies the components by `exp(-2 pi i / 40)` and
/// `exp(2 pi i 31/40)`.
pub fn check_t_law(order: i64) -> Result<f64> {
    let (c00, c02) = half_level_pair(order)?;
    let one = Complex64::new(1.0, 0.0);
    let mut worst = 0f64;
    for tau in tau_grid() {
        for (series, s) in [(&c00, rat(-1, 40)), (&c02, rat(31, 40))] {
            let (lhs, lb) = eval_series(series, tau + one);
            let (base, bb) = eval_series(series, tau);
            let resid = (lhs - cis(2.0 * PI * rat_f64(&s)) * base).norm();
            worst = worst.max(resid).max(lb).max(bb);
        }
    }
    Ok(worst)
}

/// Residual of the inversion law for the half-level string pair: the pair at
/// `tau` equals `sqrt(-i tau) (2/sqrt(5))` times the sine matrix applied to
/// the pair at `-1/tau`, minus `(i/2) / eta^3` times the theta-weight pair
/// times the Mordell-type integral.
pub fn check_s_law(order: i64) -> Result<f64> {
    let (c00, c02) = half_level_pair(order)?;
    let (w1, w2) = theta_weight_pair(order)?;
    let half_i = Complex64::new(0.0, 0.5);
    let mut worst = 0f64;
    for tau in tau_grid() {
        let flipped = -tau.inv();
        let here = (eval_series(&c00, tau).0, eval_series(&c02, tau).0);
        let there = (eval_series(&c00, flipped).0, eval_series(&c02, flipped).0);
        let rotated = sin_matrix_apply(there);
        let pref = (-Complex64::i() * tau).sqrt() * (2.0 / 5.0_f64.sqrt());
        let i0 = mordell_i0(tau)?;
        let eta3 = eta_complex(tau).powu(3);
        let corr = (
            -half_i * eval_series(&w1, tau).0 * i0 / eta3,
            -half_i * eval_series(&w2, tau).0 * i0 / eta3,
        );
        let resid0 = (here.0 - (pref * rotated.0 + corr.0)).norm();
        let resid1 = (here.1 - (pref * rotated.1 + corr.1)).norm();
        worst = worst.max(resid0).max(resid1);
    }
    Ok(worst)
}

/// Residuals of the period-sum examples at rescaled argument: the integer
/// characteristic collapses to the constants one and zero, and the
/// quarter-characteristic sums obey four sign relations.
pub fn check_r_examples() -> Result<f64> {
    let mut worst = 0f64;
    for tau in tau_grid() {
        let t4 = 4.0 * tau;
        let r_int = r_series(0.0, 2.0, t4);
        let r_half = r_series(0.5, 2.0, t4);
        worst = worst.max((r_int - Complex64::new(1.0, 0.0)).norm());
        worst = worst.max(r_half.norm());
        let q_oo = r_series(0.25, 0.0, t4);
        let q_ot = r_series(0.25, 2.0, t4);
        let q_to = r_series(0.75, 0.0, t4);
        let q_tt = r_series(0.75, 2.0, t4);
        worst = worst.max((q_ot + q_oo).norm());
        worst = worst.max((q_to + q_oo).norm());
        worst = worst.max((q_tt + q_to).norm());
        worst = worst.max((q_ot + q_tt).norm());
    }
    Ok(worst)
}

/// Residual between the two routes to the eta-cubed period sum: the line
/// integral against the kernel equals the error-function series at the
/// four-fold rescaled argument.
pub fn check_mordell_two_route() -> Result<f64> {
    let mut worst = 0f64;
    for tau in tau_grid() {
        let via_integral = mordell_f(tau)?;
        let via_series = r_series(0.25, 0.0, 4.0 * tau);
        worst = worst.max((via_integral - via_series).norm());
        let via_kernel = r_quadrature(0.25, 0.0, 4.0 * tau)?;
        worst = worst.max((via_kernel - via_series).norm());
    }
    Ok(worst)
}

/// Residual of the completion identity: the error-function theta attached to
/// the string pair equals `eta^3` times the string function minus the
/// period sum times the theta weight.
pub fn check_theta_completion(order: i64) -> Result<f64> {
    let (c00, c02) = half_level_pair(order)?;
    let (w1, w2) = theta_weight_pair(order)?;
    let eta3 = eta_series(1, &rint(order))?.powi(3)?;
    let form = string_pair_form();
    let mut worst = 0f64;
    for tau in [Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.5)] {
        let f = mordell_f(tau)?;
        let eta3_val = eval_series(&eta3, tau).0;
        for (a2, series, weight) in [(0.1, &c00, &w1), (0.3, &c02, &w2)] {
            let theta = indefinite_theta(&form, (0.0, a2), (0.0, 0.5), tau, ThetaPart::Full, 1e-9)?;
            let rhs = eta3_val * eval_series(series, tau).0 - f * eval_series(weight, tau).0;
            worst = worst.max((theta - rhs).norm());
        }
    }
    Ok(worst)
}

/// Residual of the holomorphic-part dictionary for the string pair theta:
/// the sign-weighted sum equals twice the shifted double sum.
pub fn check_hol_dictionary(order: i64) -> Result<f64> {
    let params = HeckeParams::new(1, 5, 20)?;
    let t = rint(order);
    let first = hecke_double_sum(&params, &crate::qpower::QPower::qi(1), &crate::qpower::QPower::neg_qi(12), &t)?
        .mul_monomial(&rint(2), &rat(1, 10))?;
    let second = hecke_double_sum(&params, &crate::qpower::QPower::qi(2), &crate::qpower::QPower::neg_qi(16), &t)?
        .mul_monomial(&rint(2), &rat(9, 10))?;
    let form = string_pair_form();
    let mut worst = 0f64;
    for tau in [Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.5)] {
        for (a2, series) in [(0.1, &first), (0.3, &second)] {
            let theta = indefinite_theta(
                &form,
                (0.0, a2),
                (0.0, 0.5),
                tau,
                ThetaPart::Holomorphic,
                1e-9,
            )?;
            let exact = eval_series(series, tau).0;
            worst = worst.max((theta - exact).norm());
        }
    }
    Ok(worst)
}

fn companion_vector(tau: Complex64, part: ThetaPart) -> Result<(Complex64, Complex64)> {
    let form = companion_pair_form();
    let b = (0.1, 0.0);
    let theta = |a: (f64, f64)| indefinite_theta(&form, a, b, tau, part, 1e-9);
    let h00 = 0.5
        * (cis(-3.0 * PI / 10.0) * theta((0.05, 0.25))?
            - cis(-7.0 * PI / 10.0) * theta((0.45, 0.25))?);
    let h02 = 0.5
        * (cis(-PI / 10.0) * theta((-0.15, 0.25))?
            - cis(-9.0 * PI / 10.0) * theta((0.65, 0.25))?);
    Ok((h00, h02))
}

/// Residual of the translation law for the companion vector: shifting `tau`
/// by one multiplies the components by the primitive tenth root and its
/// inverse.
pub fn check_companion_t_law() -> Result<f64> {
    let mut worst = 0f64;
    let one = Complex64::new(1.0, 0.0);
    for tau in tau_grid() {
        let here = companion_vector(tau, ThetaPart::Full)?;
        let shifted = companion_vector(tau + one, ThetaPart::Full)?;
        let z = cis(2.0 * PI / 10.0);
        worst = worst.max((shifted.0 - z * here.0).norm());
        worst = worst.max((shifted.1 - here.1 / z).norm());
    }
    Ok(worst)
}

/// Residual of the inversion law for the companion vector: the vector at
/// `-1/tau` equals `(-i tau)(2/sqrt(5))` times the sine matrix applied to
/// the vector at `tau`.
pub fn check_companion_s_law() -> Result<f64> {
    let mut worst = 0f64;
    for tau in tau_grid() {
        let here = companion_vector(tau, ThetaPart::Full)?;
        let flipped = companion_vector(-tau.inv(), ThetaPart::Full)?;
        let rotated = sin_matrix_apply(here);
        let pref = -Complex64::i() * tau * (2.0 / 5.0_f64.sqrt());
        worst = worst.max((flipped.0 - pref * rotated.0).norm());
        worst = worst.max((flipped.1 - pref * rotated.1).norm());
    }
    Ok(worst)
}

/// Residual of the holomorphic-part dictionary for the companion vector:
/// each component matches an explicit pair of shifted double sums.
pub fn check_companion_hol_dictionary(order: i64) -> Result<f64> {
    let params = HeckeParams::new(5, 5, 1)?;
    let t = rint(order);
    let q = crate::qpower::QPower::qi;
    let h00 = hecke_double_sum(&params, &q(4), &q(1), &t)?
        .checked_sub(&hecke_double_sum(&params, &q(6), &q(3), &t)?.mul_monomial(&rint(1), &rint(1))?)?
        .mul_monomial(&rint(1), &rat(1, 10))?;
    let h02 = hecke_double_sum(&params, &q(8), &q(5), &t)?
        .mul_monomial(&rint(-1), &rat(29, 10))?
        .checked_add(&hecke_double_sum(&params, &q(7), &q(4), &t)?.mul_monomial(&rint(-1), &rat(19, 10))?)?;
    let mut worst = 0f64;
    for tau in [Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.5)] {
        let numeric = companion_vector(tau, ThetaPart::Holomorphic)?;
        worst = worst.max((numeric.0 - eval_series(&h00, tau).0).norm());
        worst = worst.max((numeric.1 - eval_series(&h02, tau).0).norm());
    }
    Ok(worst)
}

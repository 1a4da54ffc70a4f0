//! Decomposition of double sums into Appell and theta parts, and the string
//! function evaluations that flow from it.
//!
//! - [`false_theta`] enumerates one-variable sums with the sign split at the
//!   origin, the building block of the negative-discriminant regime.
//! - [`appell_part`] and [`theta_part`] assemble the two components of the
//!   positive-discriminant decomposition; [`check_positive_disc`] and
//!   [`check_negative_disc`] verify both regimes against the defining sum.
//! - [`check_negative_level_theta_sum`], [`check_level_minus_half`], and
//!   [`check_level_minus_two_thirds`] evaluate negative-level string
//!   functions in closed theta and false-theta terms.
//! - [`residual_series`], [`check_residual_scaling`], and
//!   [`check_string_mu_expansion`] expand the half-level string function
//!   around the mock theta `mu`; [`check_half_level_mu_form`],
//!   [`check_half_level_mock_a_form`], and [`check_eta_theta_bridge`] pin
//!   the closed forms, with [`check_theta_quotient_identity`] and
//!   [`check_hecke_theta_pairing`] supplying the theta evaluations used
//!   along the way.

use crate::appell::{
    appell_m, cap_a_eulerian, mu_eulerian, mu_theta_correction, psi_series, split_correction_term,
    unwind_sum,
};
use crate::hecke::{hecke_double_sum, string_numerator, HeckeParams, StringSpec};
use crate::qpower::{QPower, Sign};
use crate::series::{build_to_order, compare_with_padding, Match, Order, PuiseuxSeries};
use crate::sums::bilateral;
use crate::theta::{euler_infinite, j_a, j_ab, j_bar_ab, jacobi_j, theta_vanishes};
use crate::{alt, binom2, rat, rint, Error, Rat, Result};
use num_traits::{One, ToPrimitive, Zero};

/// Generalised `x(x-1)/2` for rational `x`.
fn gbinom2(x: &Rat) -> Rat {
    x * &(x - &Rat::one()) / rint(2)
}

/// Product of the `num` series divided by the product of the `den` series.
fn theta_ratio(num: &[&PuiseuxSeries], den: &[&PuiseuxSeries]) -> Result<PuiseuxSeries> {
    let mut acc = PuiseuxSeries::one();
    for s in num {
        acc = acc.checked_mul(s)?;
    }
    for s in den {
        acc = acc.checked_mul(&s.inverted()?)?;
    }
    Ok(acc)
}

/// The false theta sum over all integers `r` of
/// `sg(r) * base^r * q^(kappa * r(r+1)/2)`, where `sg(r)` is `+1` for
/// `r >= 0` and `-1` for `r < 0`. Requires `kappa > 0`.
pub fn false_theta(base: &QPower, kappa: &Rat, t: &Rat) -> Result<PuiseuxSeries> {
    if kappa <= &Rat::zero() {
        return Err(Error::InvalidParameter(format!(
            "false theta sum needs kappa > 0, got {kappa}"
        )));
    }
    let pairs = bilateral(t, |r| {
        let e = base.exponent_times(r) + kappa * rint(binom2(r + 1));
        let sg = if r >= 0 { Rat::one() } else { -Rat::one() };
        (e, sg * base.sign_pow(r))
    });
    PuiseuxSeries::from_terms(pairs, Order::UpTo(t.clone()))
}

/// The Appell component of the positive-discriminant decomposition: a sum of
/// theta-weighted level-`aD` and level-`cD` Appell functions with free
/// auxiliary arguments `z1`, `z0`.
pub fn appell_part(
    params: &HeckeParams,
    x: &QPower,
    y: &QPower,
    z1: &QPower,
    z0: &QPower,
    t: &Rat,
) -> Result<PuiseuxSeries> {
    let (a, b, c) = (params.a(), params.b(), params.c());
    let dd = params.discriminant();
    if dd <= 0 {
        return Err(Error::InvalidParameter(format!(
            "appell part needs positive discriminant, got {dd}"
        )));
    }
    let mut acc = PuiseuxSeries::zero(Order::UpTo(t.clone()));
    let first_shift = rint(a * binom2(b + 1) - c * binom2(a + 1));
    for k in 0..a {
        let theta = jacobi_j(&x.shift(&rint(b * k)), &rint(a), t)?;
        let inner = y
            .negate()
            .pow(a)
            .mul(&x.negate().pow(-b))
            .negate()
            .shift(&(&first_shift - rint(k * dd)));
        let appell = appell_m(&inner, z0, &rint(a * dd), t)?;
        let coeff = y.negate().sign_pow(k);
        let exp = y.negate().exponent_times(k) + rint(c * binom2(k));
        acc = acc.checked_add(&theta.checked_mul(&appell)?.mul_monomial(&coeff, &exp)?)?;
    }
    let second_shift = rint(c * binom2(b + 1) - a * binom2(c + 1));
    for k in 0..c {
        let theta = jacobi_j(&y.shift(&rint(b * k)), &rint(c), t)?;
        let inner = x
            .negate()
            .pow(c)
            .mul(&y.negate().pow(-b))
            .negate()
            .shift(&(&second_shift - rint(k * dd)));
        let appell = appell_m(&inner, z1, &rint(c * dd), t)?;
        let coeff = x.negate().sign_pow(k);
        let exp = x.negate().exponent_times(k) + rint(a * binom2(k));
        acc = acc.checked_add(&theta.checked_mul(&appell)?.mul_monomial(&coeff, &exp)?)?;
    }
    Ok(acc)
}

/// The theta-quotient component of the positive-discriminant decomposition.
///
/// The base-argument powers run over shifted half-open grids so that the
/// powers of `-x` and `-y` stay integral while individual q-exponents may sit
/// on the half-integer grid; integrality is asserted at runtime.
pub fn theta_part(params: &HeckeParams, x: &QPower, y: &QPower, t: &Rat) -> Result<PuiseuxSeries> {
    let (a, b, c) = (params.a(), params.b(), params.c());
    let dd = params.discriminant();
    if dd <= 0 {
        return Err(Error::InvalidParameter(format!(
            "theta part needs positive discriminant, got {dd}"
        )));
    }
    let d_front = if c % 2 != 0 { rat(1, 2) } else { Rat::zero() };
    let e_front = if a % 2 != 0 { rat(1, 2) } else { Rat::zero() };
    let euler3 = euler_infinite(&rint(b * dd), t)?.powi(3)?;
    let mut acc = PuiseuxSeries::zero(Order::UpTo(t.clone()));
    for d_star in 0..b {
        for e_star in 0..b {
            let d = rint(d_star) + &d_front;
            let e = rint(e_star) + &e_front;
            let px_rat = &d - rat(c, 2);
            let py_rat = &e + rat(a, 2);
            assert!(
                px_rat.is_integer() && py_rat.is_integer(),
                "powers of the base arguments must be integral"
            );
            let px = px_rat.to_integer().to_i64().expect("small base power");
            let py = py_rat.to_integer().to_i64().expect("small base power");
            let e1 = rint(a) * gbinom2(&px_rat)
                + rint(b) * &px_rat * &py_rat
                + rint(c) * gbinom2(&py_rat);
            let front_coeff = x.negate().sign_pow(px) * y.negate().sign_pow(py);
            let front_exp =
                e1 + x.negate().exponent_times(px) + y.negate().exponent_times(py);

            let den1_arg = x
                .negate()
                .pow(b)
                .mul(&y.negate().pow(-a))
                .shift(&(rint(dd) * &e + rat(a * (c - b), 2)));
            let den2_arg = y
                .negate()
                .pow(b)
                .mul(&x.negate().pow(-c))
                .shift(&(rint(dd) * &d + rat(c * (a - b), 2)));
            for arg in [&den1_arg, &den2_arg] {
                if theta_vanishes(arg, &rint(b * dd)) {
                    return Err(Error::NonGeneric {
                        context: format!(
                            "theta part denominator j({arg}; q^{}) vanishes",
                            b * dd
                        ),
                    });
                }
            }
            let den = jacobi_j(&den1_arg, &rint(b * dd), t)?
                .checked_mul(&jacobi_j(&den2_arg, &rint(b * dd), t)?)?;

            let j3_arg = x
                .negate()
                .pow(b - c)
                .mul(&y.negate().pow(b - a))
                .shift(&(rint(dd) * (&d + &e) + rint(a * c) - rat(b * (a + c), 2)));
            let j3 = jacobi_j(&j3_arg, &rint(b * dd), t)?;

            let mut fsum = PuiseuxSeries::zero(Order::UpTo(t.clone()));
            for f in 0..b {
                let e2 = rint(a * b * b * binom2(f))
                    + (rint(a) * (rint(b) * &d + rint(b * b) + rint(c) * &e)
                        - rat(a * c * (b + 1), 2))
                        * rint(f);
                let f_coeff = y.negate().sign_pow(a * f);
                let f_exp = e2 + y.negate().exponent_times(a * f);
                let j1_arg = x.negate().pow(c).negate().shift(
                    &(rint(c)
                        * (rint(a) * &d + rint(b) * &e + rat(a * (b - 1), 2) + rint(a * b * f))),
                );
                let j1 = jacobi_j(&j1_arg, &rint(c * b * b), t)?;
                let j2_arg = x
                    .negate()
                    .pow(-a * c)
                    .mul(&y.negate().pow(a * b))
                    .negate()
                    .shift(
                        &(rint(a)
                            * ((&d + rat(b * (b + 1), 2) + rint(b * f)) * rint(dd)
                                + rat(c * (a - b), 2))),
                    );
                let j2 = jacobi_j(&j2_arg, &rint(a * b * b * dd), t)?;
                fsum = fsum.checked_add(&j1.checked_mul(&j2)?.mul_monomial(&f_coeff, &f_exp)?)?;
            }
            let numer = fsum.checked_mul(&euler3)?.checked_mul(&j3)?;
            let contrib = numer
                .checked_mul(&den.inverted()?)?
                .mul_monomial(&front_coeff, &front_exp)?;
            acc = acc.checked_add(&contrib)?;
        }
    }
    Ok(acc)
}

/// Verify the positive-discriminant decomposition: the double sum equals the
/// Appell part at `z1 = z0 = -1` plus the theta part divided by
/// `j(-1; q^(aD)) j(-1; q^(cD))`.
pub fn check_positive_disc(
    params: &HeckeParams,
    x: &QPower,
    y: &QPower,
    t: &Rat,
) -> Result<Match> {
    let (a, c) = (params.a(), params.c());
    let dd = params.discriminant();
    if dd <= 0 {
        return Err(Error::InvalidParameter(format!(
            "positive-discriminant check needs D > 0, got {dd}"
        )));
    }
    compare_with_padding(t, |tw| {
        let lhs = hecke_double_sum(params, x, y, tw)?;
        let minus_one = QPower::minus_one();
        let ap = appell_part(params, x, y, &minus_one, &minus_one, tw)?;
        let tp = theta_part(params, x, y, tw)?;
        let corr = jacobi_j(&minus_one, &rint(a * dd), tw)?
            .checked_mul(&jacobi_j(&minus_one, &rint(c * dd), tw)?)?;
        let rhs = ap.checked_add(&tp.checked_mul(&corr.inverted()?)?)?;
        Ok((lhs, rhs))
    })
}

/// Verify the negative-discriminant evaluation: the double sum equals one
/// half of two theta-weighted false theta sums, with no Appell remainder.
pub fn check_negative_disc(
    params: &HeckeParams,
    x: &QPower,
    y: &QPower,
    t: &Rat,
) -> Result<Match> {
    let (a, b, c) = (params.a(), params.b(), params.c());
    let dd = params.discriminant();
    if dd >= 0 {
        return Err(Error::InvalidParameter(format!(
            "negative-discriminant check needs D < 0, got {dd}"
        )));
    }
    compare_with_padding(t, |tw| {
        let lhs = hecke_double_sum(params, x, y, tw)?;
        let mut acc = PuiseuxSeries::zero(Order::UpTo(tw.clone()));
        let first_shift = rint(a * binom2(b + 1) - c * binom2(a + 1));
        for k in 0..a {
            let theta = jacobi_j(&x.shift(&rint(b * k)), &rint(a), tw)?;
            let base = y
                .negate()
                .pow(a)
                .mul(&x.negate().pow(-b))
                .shift(&(&first_shift - rint(k * dd)));
            let ft = false_theta(&base, &rint(-a * dd), tw)?;
            let coeff = y.negate().sign_pow(k);
            let exp = y.negate().exponent_times(k) + rint(c * binom2(k));
            acc = acc.checked_add(&theta.checked_mul(&ft)?.mul_monomial(&coeff, &exp)?)?;
        }
        let second_shift = rint(c * binom2(b + 1) - a * binom2(c + 1));
        for k in 0..c {
            let theta = jacobi_j(&y.shift(&rint(b * k)), &rint(c), tw)?;
            let base = x
                .negate()
                .pow(c)
                .mul(&y.negate().pow(-b))
                .shift(&(&second_shift - rint(k * dd)));
            let ft = false_theta(&base, &rint(-c * dd), tw)?;
            let coeff = x.negate().sign_pow(k);
            let exp = x.negate().exponent_times(k) + rint(a * binom2(k));
            acc = acc.checked_add(&theta.checked_mul(&ft)?.mul_monomial(&coeff, &exp)?)?;
        }
        Ok((lhs, acc.times_rat(&rat(1, 2))))
    })
}

/// The closed theta and false-theta form of `(q; q)_inf^3` times a
/// negative-level string function.
pub fn negative_level_rhs(spec: &StringSpec, t: &Rat) -> Result<PuiseuxSeries> {
    if spec.level() >= Rat::zero() {
        return Err(Error::InvalidParameter(format!(
            "theta-sum evaluation needs negative level, got {}",
            spec.level()
        )));
    }
    let (p, pp, m, ell) = (spec.p(), spec.pp(), spec.m(), spec.ell());
    let modulus = 2 * p * pp;
    let kappa = rint(2 * p * pp * pp * (2 * p - pp));
    let half_step = (m - ell) / 2;
    let mut acc = PuiseuxSeries::zero(Order::UpTo(t.clone()));
    for k in 0..modulus {
        let theta_a = j_bar_ab(pp * k + p * (pp + ell + 1), modulus, t)?;
        let theta_b = j_bar_ab(pp * k + p * (pp - ell - 1), modulus, t)?;
        let bracket = theta_a
            .mul_monomial(&Rat::one(), &rint(k * (1 + ell)))?
            .checked_sub(&theta_b)?;
        let base = QPower::qi(p * pp * pp * (pp - 2 * p) + p * pp * m - k * pp * (pp - 2 * p));
        let ft = false_theta(&base, &kappa, t)?;
        let exp = rint(binom2(k) + k * half_step);
        acc = acc.checked_add(&bracket.checked_mul(&ft)?.mul_monomial(&alt(k), &exp)?)?;
    }
    Ok(acc.times_rat(&rat(1, 2)))
}

/// Verify the negative-level theta-sum evaluation against the double-sum
/// route for the string function numerator.
pub fn check_negative_level_theta_sum(spec: &StringSpec, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        Ok((string_numerator(spec, tw)?, negative_level_rhs(spec, tw)?))
    })
}

/// Verify the level `-1/2` string functions against their single partial
/// theta form: the numerator equals
/// `q^((m-ell)/2) (q; q)_inf * sum_(i>=0) (-1)^i q^(i(i+2m+1)/2)`.
pub fn check_level_minus_half(m: i64, ell: i64, t: &Rat) -> Result<Match> {
    let spec = StringSpec::new(2, 3, ell, m)?;
    compare_with_padding(t, |tw| {
        let lhs = string_numerator(&spec, tw)?;
        let mut pairs = Vec::new();
        let mut i = 0i64;
        let mut prev: Option<Rat> = None;
        loop {
            let e = rat(i * (i + 2 * m + 1), 2);
            let rising = prev.as_ref().map_or(false, |p| &e >= p);
            if &e > tw && rising {
                break;
            }
            if &e <= tw {
                pairs.push((e.clone(), alt(i)));
            }
            prev = Some(e);
            i += 1;
        }
        let partial = PuiseuxSeries::from_terms(pairs, Order::UpTo(tw.clone()))?;
        let rhs = euler_infinite(&rint(1), tw)?
            .checked_mul(&partial)?
            .mul_monomial(&Rat::one(), &rint((m - ell) / 2))?;
        Ok((lhs, rhs))
    })
}

/// Verify the level `-2/3` string functions against their four-term theta
/// and false-theta form with overall factor `1/(2 J_16)`.
pub fn check_level_minus_two_thirds(m: i64, ell: i64, t: &Rat) -> Result<Match> {
    let spec = StringSpec::new(3, 4, ell, m)?;
    compare_with_padding(t, |tw| {
        let lhs = string_numerator(&spec, tw)?;
        let pair_a = j_ab(1 + ell, 8, tw)?.checked_mul(&j_ab(10 + 2 * ell, 16, tw)?)?;
        let pair_b = j_ab(5 + ell, 8, tw)?.checked_mul(&j_ab(2 + 2 * ell, 16, tw)?)?;
        let ft = |k: i64| false_theta(&QPower::qi(k - 6), &rint(12), tw);
        let t1 = pair_a
            .checked_mul(&ft(3 * m + 2)?)?
            .mul_monomial(&Rat::one(), &rint((m - ell) / 2))?;
        let t2 = pair_b
            .checked_mul(&ft(3 * m + 8)?)?
            .mul_monomial(&Rat::one(), &rint(2 * m - ell + 3))?;
        let t3 = pair_b
            .checked_mul(&ft(3 * m + 4)?)?
            .mul_monomial(&(-Rat::one()), &rint(m - ell + 1))?;
        let t4 = pair_a
            .checked_mul(&ft(3 * m + 10)?)?
            .mul_monomial(&(-Rat::one()), &rint((5 * m - ell) / 2 + 4))?;
        let sum = t1.checked_add(&t2)?.checked_add(&t3)?.checked_add(&t4)?;
        let rhs = sum
            .checked_mul(&j_a(16, tw)?.inverted()?)?
            .times_rat(&rat(1, 2));
        Ok((lhs, rhs))
    })
}

/// The residual left after subtracting the modulus-ten Appell expansion from
/// the half-level string numerator at parameters `(m, ell)`.
pub fn residual_series(m: i64, ell: i64, t: &Rat) -> Result<PuiseuxSeries> {
    let spec = StringSpec::new(2, 5, ell, m)?;
    build_to_order(t, |tw| {
        let num = string_numerator(&spec, tw)?;
        let j5 = j_ab(1 + ell, 5, tw)?;
        let mut acc = PuiseuxSeries::zero(Order::UpTo(tw.clone()));
        for k in 0..10 {
            let x = QPower::neg_qi(45 + 10 * m - 10 * k);
            let part = appell_m(&x, &QPower::minus_one(), &rint(100), tw)?;
            let exp = rint(-binom2(k + 1) + k * m);
            acc = acc.checked_add(&part.mul_monomial(&alt(k), &exp)?)?;
        }
        let shifted = j5
            .checked_mul(&acc)?
            .mul_monomial(&Rat::one(), &rint((m - ell) / 2))?;
        num.checked_sub(&shifted)
    })
}

/// Verify that the `(2k, 0)` residual is the `(0, 0)` residual shifted by
/// `q^(2k^2)`.
pub fn check_residual_scaling(k: i64, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let lhs = residual_series(2 * k, 0, tw)?;
        let rhs = residual_series(0, 0, tw)?.mul_monomial(&Rat::one(), &rint(2 * k * k))?;
        Ok((lhs, rhs))
    })
}

/// Verify the expansion of the half-level string numerator through the mock
/// theta `mu`: subtracting the theta-weighted `mu` head and unwinding tail
/// leaves exactly the theta correction, the modulus-ten correction, and the
/// residual.
pub fn check_string_mu_expansion(m: i64, ell: i64, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let spec = StringSpec::new(2, 5, ell, m)?;
        let num = string_numerator(&spec, tw)?;
        let j5 = j_ab(1 + ell, 5, tw)?;
        let head = mu_eulerian(tw)?
            .times_rat(&(alt(m) * rat(1, 2)))
            .mul_monomial(&Rat::one(), &rint(binom2(m)))?
            .checked_add(&unwind_sum(m)?)?;
        let lhs = num.checked_sub(
            &j5.checked_mul(&head)?
                .mul_monomial(&Rat::one(), &rint((m - ell) / 2))?,
        )?;
        let corr = mu_theta_correction(tw)?
            .times_rat(&rat(1, 2))
            .checked_sub(&split_correction_term(tw)?)?;
        let r1 = j5
            .checked_mul(&corr)?
            .mul_monomial(&alt(m), &rint((m - ell) / 2 + binom2(m)))?;
        let r2 = j5
            .checked_mul(&psi_series(m, tw)?)?
            .mul_monomial(&Rat::one(), &rint((m - ell) / 2))?;
        let rhs = r1
            .checked_add(&r2)?
            .checked_add(&residual_series(m, ell, tw)?)?;
        Ok((lhs, rhs))
    })
}

/// The eta and theta quotient entering the half-level closed forms: for
/// `which = 1` the quotient over `J_(1,10) J_(8,20)`, for `which = 2` the
/// quotient over `J_(3,10) J_(4,20)`.
fn closed_form_quotient(which: u8, t: &Rat) -> Result<PuiseuxSeries> {
    let j1 = j_a(1, t)?;
    let j10 = j_a(10, t)?;
    let num = j1.powi(3)?.checked_mul(&j10.powi(3)?)?;
    let (ja, jb) = match which {
        1 => (j_ab(1, 10, t)?, j_ab(8, 20, t)?),
        2 => (j_ab(3, 10, t)?, j_ab(4, 20, t)?),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "closed-form quotient index must be 1 or 2, got {which}"
            )))
        }
    };
    theta_ratio(&[&num], &[&j_a(4, t)?, &j_a(5, t)?, &ja, &jb])
}

/// The eta quotient `J_1^4 J_4 J_(a,20) / J_2^4` appearing on the mock-A
/// side of the half-level closed forms.
fn eta_theta_bridge_rhs(a: i64, t: &Rat) -> Result<PuiseuxSeries> {
    let num = j_a(1, t)?
        .powi(4)?
        .checked_mul(&j_a(4, t)?)?
        .checked_mul(&j_ab(a, 20, t)?)?;
    num.checked_mul(&j_a(2, t)?.powi(4)?.inverted()?)
}

/// Verify the closed form of the half-level string numerator at `(0, ell)`
/// in terms of the mock theta `mu` and an eta-theta quotient.
pub fn check_half_level_mu_form(ell: i64, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let spec = StringSpec::new(2, 5, ell, 0)?;
        let lhs = string_numerator(&spec, tw)?;
        let mu = mu_eulerian(tw)?;
        let rhs = match ell {
            0 => j_ab(1, 5, tw)?
                .checked_mul(&mu)?
                .checked_add(&closed_form_quotient(1, tw)?)?
                .times_rat(&rat(1, 2)),
            2 => j_ab(2, 5, tw)?
                .checked_mul(&mu)?
                .checked_sub(&closed_form_quotient(2, tw)?)?
                .times_rat(&rat(1, 2))
                .mul_monomial(&Rat::one(), &rint(-1))?,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "closed form available for ell in {{0, 2}}, got {ell}"
                )))
            }
        };
        Ok((lhs, rhs))
    })
}

/// Verify the companion closed form of the half-level string numerator at
/// `(0, ell)` in terms of the mock theta `A` at `-q`.
pub fn check_half_level_mock_a_form(ell: i64, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let spec = StringSpec::new(2, 5, ell, 0)?;
        let lhs = string_numerator(&spec, tw)?;
        let a_neg = cap_a_eulerian(tw)?.substituted(Sign::Minus, &rint(1))?;
        let rhs = match ell {
            0 => j_ab(1, 5, tw)?
                .checked_mul(&a_neg)?
                .times_rat(&rint(-2))
                .checked_add(&eta_theta_bridge_rhs(8, tw)?)?,
            2 => j_ab(2, 5, tw)?
                .checked_mul(&a_neg)?
                .times_rat(&rint(-2))
                .mul_monomial(&Rat::one(), &rint(-1))?
                .checked_sub(&eta_theta_bridge_rhs(4, tw)?)?,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "closed form available for ell in {{0, 2}}, got {ell}"
                )))
            }
        };
        Ok((lhs, rhs))
    })
}

/// Verify the eta-theta identity bridging the two half-level closed forms:
/// the `mu`-side quotient combination collapses to a single eta quotient.
pub fn check_eta_theta_bridge(which: u8, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let euler_quot = j_a(1, tw)?
            .powi(5)?
            .checked_mul(&j_a(2, tw)?.powi(4)?.inverted()?)?;
        match which {
            1 => {
                let lhs = j_ab(1, 5, tw)?
                    .checked_mul(&euler_quot)?
                    .checked_add(&closed_form_quotient(1, tw)?)?
                    .times_rat(&rat(1, 2));
                Ok((lhs, eta_theta_bridge_rhs(8, tw)?))
            }
            2 => {
                let lhs = j_ab(2, 5, tw)?
                    .checked_mul(&euler_quot)?
                    .checked_sub(&closed_form_quotient(2, tw)?)?
                    .times_rat(&rat(1, 2))
                    .mul_monomial(&Rat::one(), &rint(-1))?;
                Ok((lhs, eta_theta_bridge_rhs(4, tw)?.negated()))
            }
            _ => Err(Error::InvalidParameter(format!(
                "bridge index must be 1 or 2, got {which}"
            ))),
        }
    })
}

/// Verify the four-term theta quotient evaluations feeding the half-level
/// closed forms: a weighted sum of modulus-20 and modulus-40 quotients
/// collapses to the `mu` theta correction plus the closed-form quotient.
pub fn check_theta_quotient_identity(which: u8, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let j15 = j_ab(1, 5, tw)?;
        let j25 = j_ab(2, 5, tw)?;
        let j220 = j_ab(2, 20, tw)?;
        let j620 = j_ab(6, 20, tw)?;
        let j120 = j_ab(1, 20, tw)?;
        let j320 = j_ab(3, 20, tw)?;
        let j520 = j_ab(5, 20, tw)?;
        let j720 = j_ab(7, 20, tw)?;
        let j920 = j_ab(9, 20, tw)?;
        let pre = j_a(20, tw)?
            .powi(3)?
            .checked_mul(
                &j_bar_ab(0, 4, tw)?
                    .checked_mul(&j_bar_ab(0, 20, tw)?)?
                    .inverted()?,
            )?
            .times_rat(&rint(2));
        let corr = mu_theta_correction(tw)?;
        match which {
            1 => {
                let j240 = j_ab(2, 40, tw)?;
                let j840 = j_ab(8, 40, tw)?;
                let j1640 = j_ab(16, 40, tw)?;
                let j1840 = j_ab(18, 40, tw)?;
                let t1 = theta_ratio(&[&j15, &j620, &j840, &j1840], &[&j920, &j320, &j520])?;
                let t2 = theta_ratio(&[&j25, &j220, &j1640, &j1840], &[&j920, &j720, &j920])?
                    .mul_monomial(&(-Rat::one()), &rint(1))?;
                let t3 = theta_ratio(&[&j25, &j220, &j240, &j1640], &[&j120, &j120, &j320])?
                    .negated();
                let t4 = theta_ratio(&[&j15, &j620, &j240, &j840], &[&j120, &j520, &j720])?
                    .mul_monomial(&Rat::one(), &rint(3))?;
                let lhs = pre.checked_mul(
                    &t1.checked_add(&t2)?.checked_add(&t3)?.checked_add(&t4)?,
                )?;
                let rhs = closed_form_quotient(1, tw)?
                    .checked_sub(&j15.checked_mul(&corr)?)?
                    .times_rat(&rat(1, 2));
                Ok((lhs, rhs))
            }
            2 => {
                let j640 = j_ab(6, 40, tw)?;
                let j840 = j_ab(8, 40, tw)?;
                let j1440 = j_ab(14, 40, tw)?;
                let j1640 = j_ab(16, 40, tw)?;
                let t1 = theta_ratio(&[&j15, &j620, &j840, &j1440], &[&j720, &j120, &j720])?
                    .mul_monomial(&(-Rat::one()), &rint(-1))?;
                let t2 = theta_ratio(&[&j25, &j220, &j1440, &j1640], &[&j720, &j520, &j920])?;
                let t3 = theta_ratio(&[&j25, &j220, &j640, &j1640], &[&j320, &j120, &j520])?
                    .mul_monomial(&(-Rat::one()), &rint(-1))?;
                let t4 = theta_ratio(&[&j15, &j620, &j640, &j840], &[&j320, &j320, &j920])?
                    .mul_monomial(&(-Rat::one()), &rint(1))?;
                let lhs = pre.checked_mul(
                    &t1.checked_add(&t2)?.checked_add(&t3)?.checked_add(&t4)?,
                )?;
                let rhs = j25
                    .checked_mul(&corr)?
                    .checked_add(&closed_form_quotient(2, tw)?)?
                    .times_rat(&rat(-1, 2))
                    .mul_monomial(&Rat::one(), &rint(-1))?;
                Ok((lhs, rhs))
            }
            _ => Err(Error::InvalidParameter(format!(
                "theta quotient identity index must be 1 or 2, got {which}"
            ))),
        }
    })
}

/// Verify that paired `(1, 5, 20)` double sums collapse to a single theta:
/// two argument pairs sum to `Jbar_(8,20)` (`which = 1`) or `Jbar_(4,20)`
/// (`which = 2`).
pub fn check_hecke_theta_pairing(which: u8, t: &Rat) -> Result<Match> {
    let params = HeckeParams::new(1, 5, 20)?;
    compare_with_padding(t, |tw| {
        let (first, second, target) = match which {
            1 => (
                hecke_double_sum(&params, &QPower::qi(1), &QPower::neg_qi(12), tw)?,
                hecke_double_sum(&params, &QPower::one(), &QPower::neg_qi(8), tw)?,
                j_bar_ab(8, 20, tw)?,
            ),
            2 => (
                hecke_double_sum(&params, &QPower::qi(2), &QPower::neg_qi(16), tw)?,
                hecke_double_sum(&params, &QPower::qi(-1), &QPower::neg_qi(4), tw)?,
                j_bar_ab(4, 20, tw)?,
            ),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "pairing index must be 1 or 2, got {which}"
                )))
            }
        };
        Ok((first.checked_add(&second)?, target))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn assert_equal(m: Match, what: &str) {
        assert!(m.is_equal(), "{what}: {m}");
    }

    #[test]
    fn false_theta_matches_brute_force() {
        let t = rint(20);
        for (base, kappa) in [
            (QPower::qi(2), rint(3)),
            (QPower::neg_qi(1), rint(1)),
            (QPower::q(rat(1, 2)), rat(5, 2)),
        ] {
            let got = false_theta(&base, &kappa, &t).expect("false theta");
            let mut pairs = Vec::new();
            for r in -80i64..80 {
                let e = base.exponent_times(r) + &kappa * rint(binom2(r + 1));
                if e <= t {
                    let sg = if r >= 0 { Rat::one() } else { -Rat::one() };
                    pairs.push((e, sg * base.sign_pow(r)));
                }
            }
            let brute =
                PuiseuxSeries::from_terms(pairs, Order::UpTo(t.clone())).expect("brute series");
            assert_equal(
                got.eq_to_order(&brute, &t).expect("comparable"),
                "false theta vs brute force",
            );
        }
    }

    #[test]
    fn false_theta_rejects_nonpositive_kappa() {
        let err = false_theta(&QPower::qi(1), &rint(0), &rint(10));
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn positive_discriminant_decomposition_holds() {
        let t = rint(25);
        let cases = [
            (1, 2, 1, QPower::qi(1), QPower::qi(1)),
            (1, 2, 1, QPower::qi(3), QPower::qi(2)),
            (2, 3, 4, QPower::qi(1), QPower::qi(1)),
            (2, 3, 4, QPower::qi(1), QPower::qi(3)),
        ];
        for (a, b, c, x, y) in cases {
            let params = HeckeParams::new(a, b, c).expect("params");
            assert_equal(
                check_positive_disc(&params, &x, &y, &t).expect("check runs"),
                &format!("positive discriminant at ({a},{b},{c})"),
            );
        }
    }

    #[test]
    fn positive_discriminant_handles_fractional_arguments() {
        let t = rint(18);
        let params = HeckeParams::new(1, 2, 1).expect("params");
        assert_equal(
            check_positive_disc(&params, &QPower::q(rat(1, 2)), &QPower::qi(1), &t)
                .expect("check runs"),
            "positive discriminant with a half-integer argument",
        );
    }

    #[test]
    fn negative_discriminant_evaluation_holds() {
        let t = rint(25);
        let cases = [
            (1, 2, 5, QPower::qi(1), QPower::qi(1)),
            (1, 2, 5, QPower::qi(1), QPower::neg_qi(2)),
            (2, 3, 5, QPower::qi(1), QPower::qi(2)),
            (1, 3, 12, QPower::q(rat(1, 2)), QPower::qi(1)),
            (1, 4, 24, QPower::qi(3), QPower::qi(1)),
        ];
        for (a, b, c, x, y) in cases {
            let params = HeckeParams::new(a, b, c).expect("params");
            assert_equal(
                check_negative_disc(&params, &x, &y, &t).expect("check runs"),
                &format!("negative discriminant at ({a},{b},{c})"),
            );
        }
    }

    #[test]
    fn discriminant_checks_reject_wrong_sign() {
        let pos = HeckeParams::new(1, 2, 1).expect("params");
        let neg = HeckeParams::new(1, 2, 5).expect("params");
        let (x, y) = (QPower::qi(1), QPower::qi(1));
        assert!(check_positive_disc(&neg, &x, &y, &rint(10)).is_err());
        assert!(check_negative_disc(&pos, &x, &y, &rint(10)).is_err());
    }

    #[test]
    fn negative_level_theta_sum_matches_double_sum_route() {
        let cases = [(2, 3, 0, 0), (2, 3, 1, 1), (3, 4, 0, 0), (3, 4, 1, 1)];
        for (p, pp, ell, m) in cases {
            let spec = StringSpec::new(p, pp, ell, m).expect("spec");
            assert_equal(
                check_negative_level_theta_sum(&spec, &rint(30)).expect("check runs"),
                &format!("negative-level theta sum at ({p},{pp}) ell={ell} m={m}"),
            );
        }
    }

    #[test]
    fn negative_level_rhs_rejects_positive_level() {
        let spec = StringSpec::new(1, 5, 0, 0).expect("spec");
        assert!(negative_level_rhs(&spec, &rint(10)).is_err());
    }

    #[test]
    fn level_minus_half_closed_form_holds() {
        for (m, ell) in [(0, 0), (2, 0), (1, 1), (3, 1)] {
            assert_equal(
                check_level_minus_half(m, ell, &rint(40)).expect("check runs"),
                &format!("level -1/2 closed form at m={m} ell={ell}"),
            );
        }
    }

    #[test]
    fn level_minus_two_thirds_closed_form_holds() {
        for (m, ell) in [(0, 0), (2, 0), (1, 1), (2, 2)] {
            assert_equal(
                check_level_minus_two_thirds(m, ell, &rint(30)).expect("check runs"),
                &format!("level -2/3 closed form at m={m} ell={ell}"),
            );
        }
    }

    #[test]
    fn residual_scaling_holds_for_first_shift() {
        assert_equal(
            check_residual_scaling(1, &rint(30)).expect("check runs"),
            "residual scaling at k=1",
        );
    }

    #[test]
    fn string_mu_expansion_holds() {
        for (m, ell) in [(0, 0), (1, 1)] {
            assert_equal(
                check_string_mu_expansion(m, ell, &rint(30)).expect("check runs"),
                &format!("mu expansion at m={m} ell={ell}"),
            );
        }
    }

    #[test]
    fn half_level_closed_forms_hold() {
        for ell in [0, 2] {
            assert_equal(
                check_half_level_mu_form(ell, &rint(40)).expect("check runs"),
                &format!("half-level mu form at ell={ell}"),
            );
            assert_equal(
                check_half_level_mock_a_form(ell, &rint(40)).expect("check runs"),
                &format!("half-level mock-A form at ell={ell}"),
            );
        }
    }

    #[test]
    fn eta_theta_bridges_hold() {
        for which in [1, 2] {
            assert_equal(
                check_eta_theta_bridge(which, &rint(40)).expect("check runs"),
                &format!("eta-theta bridge {which}"),
            );
        }
    }

    #[test]
    fn theta_quotient_identities_hold() {
        for which in [1, 2] {
            assert_equal(
                check_theta_quotient_identity(which, &rint(40)).expect("check runs"),
                &format!("theta quotient identity {which}"),
            );
        }
    }

    #[test]
    fn hecke_theta_pairings_hold() {
        for which in [1, 2] {
            assert_equal(
                check_hecke_theta_pairing(which, &rint(40)).expect("check runs"),
                &format!("theta pairing {which}"),
            );
        }
    }
}

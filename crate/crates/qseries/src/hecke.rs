//! Indefinite binary theta series and admissible-level string functions.
//!
//! The double sum `f_{a,b,c}(x, y; q)` runs over the paired quadrants
//! `r, s >= 0` minus `r, s < 0`, with summand
//! `(-1)^(r+s) x^r y^s q^(a r(r-1)/2 + b r s + c s(s-1)/2)`. For positive
//! `a, b, c` the exponent is positive definite on both quadrants, so the
//! series localises and truncates exactly.
//!
//! A coprime pair `(p, p')` with `p >= 1`, `p' >= 2` determines a level
//! `N = p'/p - 2` and, for each admissible `(m, ell)` with
//! `0 <= ell <= p' - 2` and `m = ell (mod 2)`, a string function. Three
//! normalisations appear here:
//!
//! - [`string_script`]: the integer power series (the `q^0`-anchored form),
//!   computed from a difference of two double sums over `(q; q)_inf^3`;
//! - [`string_script_direct`]: the same series from the four-region defining
//!   sum, kept as an independent oracle;
//! - [`string_c`]: the script series times `q^s` with the leading exponent
//!   `s = -1/8 + p (ell+1)^2 / (4 p') - p m^2 / (4 (p' - 2p))`.
//!
//! Level zero (`p' = 2p`) has no leading exponent and is rejected on
//! construction.

use crate::qpower::QPower;
use crate::series::{Order, PuiseuxSeries};
use crate::theta::{eta_series, euler_infinite};
use crate::{alt, binom2, rat, rint, sums, Error, Rat, Result};
use num_integer::Integer;

/// Exponent parameters `(a, b, c)` of a double sum, all positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeckeParams {
    a: i64,
    b: i64,
    c: i64,
}

impl HeckeParams {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a < 1 || b < 1 || c < 1 {
            return Err(Error::InvalidParameter(format!(
                "double sum parameters must be positive, got ({a}, {b}, {c})"
            )));
        }
        Ok(HeckeParams { a, b, c })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// `b^2 - a c`, the sign of which governs the decomposition shape.
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - self.a * self.c
    }
}

/// The double sum `f_{a,b,c}(x, y; q)` truncated at `t`.
pub fn hecke_double_sum(
    params: &HeckeParams,
    x: &QPower,
    y: &QPower,
    t: &Rat,
) -> Result<PuiseuxSeries> {
    let (a, b, c) = (params.a, params.b, params.c);
    let exponent = |r: i64, s: i64| -> Rat {
        rint(a * binom2(r) + b * r * s + c * binom2(s))
            + x.exponent_times(r)
            + y.exponent_times(s)
    };
    let coeff = |r: i64, s: i64| -> Rat { alt(r + s) * x.sign_pow(r) * y.sign_pow(s) };
    let mut pairs = sums::quadrant(t, |r, s| (exponent(r, s), coeff(r, s)));
    pairs.extend(sums::quadrant(t, |u, v| {
        let (r, s) = (-1 - u, -1 - v);
        (exponent(r, s), -coeff(r, s))
    }));
    PuiseuxSeries::from_terms(pairs, Order::UpTo(t.clone()))
}

/// The same double sum by brute force over the box `|r|, |s| <= radius`,
/// with no convexity reasoning: the oracle the scanning version is tested
/// against. The caller must pick `radius` large enough for the order.
pub fn hecke_double_sum_reference(
    params: &HeckeParams,
    x: &QPower,
    y: &QPower,
    radius: i64,
    t: &Rat,
) -> Result<PuiseuxSeries> {
    let (a, b, c) = (params.a, params.b, params.c);
    let mut pairs = Vec::new();
    for r in -radius..=radius {
        for s in -radius..=radius {
            let weight = if r >= 0 && s >= 0 {
                rint(1)
            } else if r < 0 && s < 0 {
                rint(-1)
            } else {
                continue;
            };
            let e = rint(a * binom2(r) + b * r * s + c * binom2(s))
                + x.exponent_times(r)
                + y.exponent_times(s);
            if &e > t {
                continue;
            }
            pairs.push((e, weight * alt(r + s) * x.sign_pow(r) * y.sign_pow(s)));
        }
    }
    PuiseuxSeries::from_terms(pairs, Order::UpTo(t.clone()))
}

/// An admissible string-function label: coprime `(p, p')` with a level
/// `N = p'/p - 2 != 0`, and `(m, ell)` of equal parity with
/// `0 <= ell <= p' - 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StringSpec {
    p: i64,
    pp: i64,
    ell: i64,
    m: i64,
}

impl StringSpec {
    pub fn new(p: i64, pp: i64, ell: i64, m: i64) -> Result<Self> {
        if p < 1 || pp < 2 {
            return Err(Error::InvalidParameter(format!(
                "need p >= 1 and p' >= 2, got ({p}, {pp})"
            )));
        }
        if p.gcd(&pp) != 1 {
            return Err(Error::InvalidParameter(format!(
                "the pair ({p}, {pp}) is not coprime"
            )));
        }
        if pp == 2 * p {
            return Err(Error::ZeroLevel { p, pp });
        }
        if ell < 0 || ell > pp - 2 {
            return Err(Error::InvalidParameter(format!(
                "ell = {ell} is outside 0..={}",
                pp - 2
            )));
        }
        if (m - ell).rem_euclid(2) != 0 {
            return Err(Error::InvalidParameter(format!(
                "m = {m} and ell = {ell} must have equal parity"
            )));
        }
        Ok(StringSpec { p, pp, ell, m })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn pp(&self) -> i64 {
        self.pp
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// The level `p'/p - 2` as an exact rational.
    pub fn level(&self) -> Rat {
        rat(self.pp - 2 * self.p, self.p)
    }

    /// The leading exponent
    /// `s = -1/8 + p (ell+1)^2 / (4 p') - p m^2 / (4 (p' - 2p))`.
    pub fn leading_exponent(&self) -> Rat {
        let lp1 = self.ell + 1;
        rat(-1, 8) + rat(self.p * lp1 * lp1, 4 * self.pp)
            - rat(self.p * self.m * self.m, 4 * (self.pp - 2 * self.p))
    }

    /// The label with `m` replaced by `-m`.
    pub fn with_m(&self, m: i64) -> Result<Self> {
        StringSpec::new(self.p, self.pp, self.ell, m)
    }
}

/// The string function numerator `(q; q)_inf^3` times the script series,
/// as the difference of two double sums:
/// `f_{1,p',2pp'}(q^(1+(m+ell)/2), -q^(p(p'+ell+1)))
///  - f_{1,p',2pp'}(q^((m-ell)/2), -q^(p(p'-ell-1)))`.
pub fn string_numerator(spec: &StringSpec, t: &Rat) -> Result<PuiseuxSeries> {
    let (p, pp, m, ell) = (spec.p, spec.pp, spec.m, spec.ell);
    let params = HeckeParams::new(1, pp, 2 * p * pp)?;
    let first = hecke_double_sum(
        &params,
        &QPower::qi(1 + (m + ell) / 2),
        &QPower::neg_qi(p * (pp + ell + 1)),
        t,
    )?;
    let second = hecke_double_sum(
        &params,
        &QPower::qi((m - ell) / 2),
        &QPower::neg_qi(p * (pp - ell - 1)),
        t,
    )?;
    first.checked_sub(&second)
}

/// The integer-series normalisation of the string function:
/// [`string_numerator`] divided by `(q; q)_inf^3`.
pub fn string_script(spec: &StringSpec, t: &Rat) -> Result<PuiseuxSeries> {
    let numerator = string_numerator(spec, t)?;
    let inv_cube = euler_infinite(&rint(1), t)?.powi(3)?.inverted()?;
    numerator.checked_mul(&inv_cube)
}

/// The same series from the defining four-region sum, with the `(ell+1)`
/// term entering once with each sign: kept deliberately separate from
/// [`string_script`] as an oracle.
pub fn string_script_direct(spec: &StringSpec, t: &Rat) -> Result<PuiseuxSeries> {
    let (p, pp, m, ell) = (spec.p, spec.pp, spec.m, spec.ell);
    let lp1 = ell + 1;
    let exponent = |i: i64, j: i64, pm: i64| -> Rat {
        rat(i * (i + m), 2) + rint(pp * j * (p * j + i)) + rat(pm * lp1 * (2 * p * j + i), 2)
    };
    let mut pairs = Vec::new();
    // i >= 0, j >= 0 with the plus sign.
    pairs.extend(sums::quadrant(t, |u, v| (exponent(u, v, 1), alt(u))));
    // i < 0, j < 0 with the plus sign, subtracted.
    pairs.extend(sums::quadrant(t, |u, v| (exponent(-1 - u, -1 - v, 1), -alt(1 + u))));
    // i >= 0, j > 0 with the minus sign, subtracted.
    pairs.extend(sums::quadrant(t, |u, v| (exponent(u, 1 + v, -1), -alt(u))));
    // i < 0, j <= 0 with the minus sign, added back.
    pairs.extend(sums::quadrant(t, |u, v| (exponent(-1 - u, -v, -1), alt(1 + u))));
    let numerator = PuiseuxSeries::from_terms(pairs, Order::UpTo(t.clone()))?;
    let inv_cube = euler_infinite(&rint(1), t)?.powi(3)?.inverted()?;
    numerator.checked_mul(&inv_cube)
}

/// The string function with its leading exponent restored:
/// `q^s` times [`string_script`].
pub fn string_c(spec: &StringSpec, t: &Rat) -> Result<PuiseuxSeries> {
    let s = spec.leading_exponent();
    // Negative leading exponents erode the product order; work far enough.
    let pad = if s < Rat::from_integer(0.into()) { -&s } else { Rat::from_integer(0.into()) };
    let tw = t + &pad;
    Ok(string_script(spec, &tw)?.mul_monomial(&rint(1), &s)?.truncated(t))
}

/// The parafermionic character `eta * C`: `q^(1/24) (q; q)_inf` times
/// [`string_c`].
pub fn pf_character(spec: &StringSpec, t: &Rat) -> Result<PuiseuxSeries> {
    let s = spec.leading_exponent() + rat(1, 24);
    let pad = if s < Rat::from_integer(0.into()) { -&s } else { Rat::from_integer(0.into()) };
    let tw = t + &pad;
    Ok(eta_series(1, &tw)?.checked_mul(&string_c(spec, &tw)?)?.truncated(t))
}

/// For integer level `n >= 1` the script series collapses to a single
/// double sum with positive second argument:
/// `f_{1,n+1,1}(q^(1+(m+ell)/2), q^(1-(m-ell)/2)) / (q; q)_inf^3`.
pub fn string_integer_compact(n: i64, m: i64, ell: i64, t: &Rat) -> Result<PuiseuxSeries> {
    if n < 1 {
        return Err(Error::InvalidParameter("compact form needs an integer level n >= 1".into()));
    }
    if (m - ell).rem_euclid(2) != 0 {
        return Err(Error::InvalidParameter("m and ell must have equal parity".into()));
    }
    let params = HeckeParams::new(1, n + 1, 1)?;
    let f = hecke_double_sum(
        &params,
        &QPower::qi(1 + (m + ell) / 2),
        &QPower::qi(1 - (m - ell) / 2),
        t,
    )?;
    let inv_cube = euler_infinite(&rint(1), t)?.powi(3)?.inverted()?;
    f.checked_mul(&inv_cube)
}

/// At level one the script series has the closed form
/// `q^((m^2 - ell^2)/4) / (q; q)_inf`.
pub fn level_one_closed(m: i64, ell: i64, t: &Rat) -> Result<PuiseuxSeries> {
    if (m - ell).rem_euclid(2) != 0 {
        return Err(Error::InvalidParameter("m and ell must have equal parity".into()));
    }
    let inv = euler_infinite(&rint(1), t)?.inverted()?;
    inv.mul_monomial(&rint(1), &rat(m * m - ell * ell, 4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Match;

    fn t(n: i64) -> Rat {
        rint(n)
    }

    #[test]
    fn double_sum_matches_brute_force_box() {
        let order = t(40);
        let cases: Vec<(HeckeParams, QPower, QPower)> = vec![
            (HeckeParams::new(1, 5, 20).unwrap(), QPower::qi(1), QPower::neg_qi(12)),
            (HeckeParams::new(1, 2, 1).unwrap(), QPower::qi(1), QPower::qi(1)),
            (HeckeParams::new(5, 5, 1).unwrap(), QPower::qi(4), QPower::qi(1)),
            (HeckeParams::new(1, 3, 12).unwrap(), QPower::neg_qi(2), QPower::qi(3)),
            (HeckeParams::new(2, 3, 5).unwrap(), QPower::neg_qi(1), QPower::neg_qi(2)),
            (HeckeParams::new(1, 4, 24).unwrap(), QPower::qi(0), QPower::neg_qi(8)),
        ];
        for (params, x, y) in cases {
            let fast = hecke_double_sum(&params, &x, &y, &order).unwrap();
            let brute = hecke_double_sum_reference(&params, &x, &y, 60, &order).unwrap();
            assert_eq!(
                fast.eq_to_order(&brute, &order).unwrap(),
                Match::Equal,
                "scan vs box at ({}, {}, {}), x = {x}, y = {y}",
                params.a(),
                params.b(),
                params.c()
            );
        }
    }

    #[test]
    fn spec_validation_rejects_bad_labels() {
        assert!(matches!(StringSpec::new(1, 2, 0, 0), Err(Error::ZeroLevel { .. })));
        assert!(StringSpec::new(2, 4, 0, 0).is_err(), "not coprime");
        assert!(StringSpec::new(2, 5, 4, 0).is_err(), "ell beyond p' - 2");
        assert!(StringSpec::new(2, 5, 1, 0).is_err(), "parity mismatch");
        assert!(StringSpec::new(0, 5, 0, 0).is_err());
        assert!(StringSpec::new(2, 5, 2, 4).is_ok());
    }

    #[test]
    fn leading_exponents_for_half_and_integer_levels() {
        // (2, 5): level 1/2.
        let s00 = StringSpec::new(2, 5, 0, 0).unwrap();
        assert_eq!(s00.level(), rat(1, 2));
        assert_eq!(s00.leading_exponent(), rat(-1, 40));
        let s02 = StringSpec::new(2, 5, 2, 0).unwrap();
        assert_eq!(s02.leading_exponent(), rat(31, 40));
        // (1, 3): level 1.
        let one = StringSpec::new(1, 3, 0, 0).unwrap();
        assert_eq!(one.level(), rint(1));
        assert_eq!(one.leading_exponent(), rat(-1, 24));
        // (2, 3): level -1/2.
        let neg = StringSpec::new(2, 3, 1, 1).unwrap();
        assert_eq!(neg.level(), rat(-1, 2));
        assert_eq!(neg.leading_exponent(), rat(-1, 8) + rat(2 * 4, 12) - rat(2, -4));
    }

    #[test]
    fn hecke_route_agrees_with_defining_sum() {
        let order = t(40);
        let labels = [(2i64, 5i64, 0i64, 0i64), (2, 5, 2, 0), (1, 5, 1, 1), (3, 4, 0, 2), (2, 3, 1, 1)];
        for (p, pp, ell, m) in labels {
            let spec = StringSpec::new(p, pp, ell, m).unwrap();
            let a = string_script(&spec, &order).unwrap();
            let b = string_script_direct(&spec, &order).unwrap();
            assert_eq!(
                a.eq_to_order(&b, &order).unwrap(),
                Match::Equal,
                "two routes at (p, p') = ({p}, {pp}), ell = {ell}, m = {m}"
            );
        }
    }

    #[test]
    fn script_series_has_integer_coefficients_from_zero() {
        let spec = StringSpec::new(2, 5, 0, 0).unwrap();
        let s = string_script(&spec, &t(30)).unwrap();
        assert_eq!(s.scale(), 1, "script series lives on the integer grid");
        assert_eq!(s.coeff_int(0).unwrap(), rint(1));
        for (e, c) in s.iter_terms() {
            assert!(c.is_integer(), "coefficient at {e} is {c}");
        }
    }

    #[test]
    fn level_one_script_matches_closed_form() {
        let order = t(40);
        for (m, ell) in [(0i64, 0i64), (2, 0), (1, 1), (3, 1), (-2, 0)] {
            let spec = StringSpec::new(1, 3, ell, m).unwrap();
            let a = string_script(&spec, &order).unwrap();
            let b = level_one_closed(m, ell, &order).unwrap();
            assert_eq!(
                a.eq_to_order(&b, &order).unwrap(),
                Match::Equal,
                "closed form at m = {m}, ell = {ell}"
            );
        }
    }

    #[test]
    fn integer_level_compact_form_agrees() {
        let order = t(30);
        for (n, m, ell) in [(1i64, 0i64, 0i64), (1, 1, 1), (2, 0, 0), (2, 2, 2), (3, 1, 1), (3, 3, 1)] {
            let spec = StringSpec::new(1, n + 2, ell, m).unwrap();
            let a = string_script(&spec, &order).unwrap();
            let b = string_integer_compact(n, m, ell, &order).unwrap();
            assert_eq!(
                a.eq_to_order(&b, &order).unwrap(),
                Match::Equal,
                "compact form at n = {n}, m = {m}, ell = {ell}"
            );
        }
    }

    #[test]
    fn script_series_is_even_in_m() {
        let order = t(30);
        for (p, pp, ell, m) in [(2i64, 5i64, 0i64, 2i64), (1, 4, 2, 2), (2, 3, 1, 3)] {
            let spec = StringSpec::new(p, pp, ell, m).unwrap();
            let neg = spec.with_m(-m).unwrap();
            let a = string_script(&spec, &order).unwrap();
            let b = string_script(&neg, &order).unwrap();
            assert_eq!(a.eq_to_order(&b, &order).unwrap(), Match::Equal);
        }
    }

    #[test]
    fn integer_level_period_shift_in_m() {
        // With N = p' - 2 integral, shifting m by 2N multiplies the script
        // series by q^(m+N).
        let order = t(30);
        for (pp, m, ell) in [(4i64, 0i64, 0i64), (4, 2, 0), (5, 1, 1)] {
            let n = pp - 2;
            let spec = StringSpec::new(1, pp, ell, m).unwrap();
            let shifted = spec.with_m(m + 2 * n).unwrap();
            let a = string_script(&shifted, &order).unwrap();
            let b = string_script(&spec, &order)
                .unwrap()
                .mul_monomial(&rint(1), &rint(m + n))
                .unwrap();
            assert_eq!(
                a.eq_to_order(&b, &(order.clone() - rint(1))).unwrap(),
                Match::Equal,
                "period shift at p' = {pp}, m = {m}, ell = {ell}"
            );
        }
    }

    #[test]
    fn integer_level_diagram_symmetry() {
        // C_{m,ell} = C_{N-m, N-ell} for integral N, stated at the full
        // normalisation (leading exponents included).
        let order = t(30);
        for (pp, m, ell) in [(4i64, 0i64, 0i64), (4, 2, 2), (5, 1, 1), (5, 3, 1)] {
            let n = pp - 2;
            let a_spec = StringSpec::new(1, pp, ell, m).unwrap();
            let b_spec = StringSpec::new(1, pp, n - ell, n - m).unwrap();
            let a = string_c(&a_spec, &order).unwrap();
            let b = string_c(&b_spec, &order).unwrap();
            let common = rint(25);
            assert_eq!(
                a.eq_to_order(&b, &common).unwrap(),
                Match::Equal,
                "diagram symmetry at p' = {pp}, m = {m}, ell = {ell}"
            );
        }
    }

    #[test]
    fn character_at_level_one_vacuum_is_one() {
        let spec = StringSpec::new(1, 3, 0, 0).unwrap();
        let chi = pf_character(&spec, &t(25)).unwrap();
        assert_eq!(chi.eq_to_order(&PuiseuxSeries::one(), &t(25)).unwrap(), Match::Equal);
    }

    #[test]
    fn negative_level_script_series_exists() {
        // At negative level the double sums still localise; the script
        // series of (2, 3) opens with integer coefficients.
        let spec = StringSpec::new(2, 3, 0, 0).unwrap();
        let s = string_script(&spec, &t(25)).unwrap();
        assert_eq!(s.coeff_int(0).unwrap(), rint(1));
        for (e, c) in s.iter_terms() {
            assert!(c.is_integer(), "coefficient at {e} is {c}");
        }
    }
}

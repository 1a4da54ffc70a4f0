//! Jacobi theta products and the classical identity toolkit around them.
//!
//! The central object is the theta function
//! `j(x; p) = (x; p)_inf (p/x; p)_inf (p; p)_inf` with `p = q^rho`, equal to
//! the alternating bilateral sum over `(-1)^n p^(n(n-1)/2) x^n`. Arguments
//! are signed q-powers, which keeps coefficients rational and exponents on a
//! finite grid. `j(q^(k rho); q^rho)` vanishes identically for integer `k`;
//! [`theta_vanishes`] detects that case and [`jacobi_j`] returns the zero
//! series for it.
//!
//! Shorthands follow the usual pattern:
//! `J_{a,b} = j(q^a; q^b)`, `Jbar_{a,b} = j(-q^a; q^b)`, and
//! `J_b = (q^b; q^b)_inf`.
//!
//! The `check_*` functions each verify one classical identity by expanding
//! both sides to a requested order; divisions are cross-multiplied away
//! where possible so only honest series operations remain.

use crate::qpower::{QPower, Sign};
use crate::series::{compare_with_padding, Match, Order, PuiseuxSeries};
use crate::{binom2, rat, rint, sums, Error, Rat, Result};
use num_traits::{Signed, Zero};

/// The Euler product `(q^rho; q^rho)_inf` truncated at `t`.
pub fn euler_infinite(rho: &Rat, t: &Rat) -> Result<PuiseuxSeries> {
    if !rho.is_positive() {
        return Err(Error::Divergent {
            context: format!("infinite product with step exponent {rho} <= 0"),
        });
    }
    let mut acc = PuiseuxSeries::one().truncated(t);
    let mut n = 1i64;
    loop {
        let e = rho * rint(n);
        if &e > t {
            break;
        }
        let factor = PuiseuxSeries::from_terms(
            [(Rat::zero(), rint(1)), (e, rint(-1))],
            Order::Exact,
        )?;
        acc = acc.checked_mul(&factor)?;
        n += 1;
    }
    Ok(acc)
}

/// The finite q-Pochhammer `(x; q^rho)_n`, exact.
pub fn pochhammer(x: &QPower, rho: &Rat, n: i64) -> Result<PuiseuxSeries> {
    if n < 0 {
        return Err(Error::InvalidParameter("finite Pochhammer length must be non-negative".into()));
    }
    let mut acc = PuiseuxSeries::one();
    for k in 0..n {
        let e = x.exponent() + rho * rint(k);
        let factor = PuiseuxSeries::from_terms(
            [(Rat::zero(), rint(1)), (e, -x.sign().to_rat())],
            Order::Exact,
        )?;
        acc = acc.checked_mul(&factor)?;
    }
    Ok(acc)
}

/// The infinite q-Pochhammer `(x; q^rho)_inf` truncated at `t`.
///
/// Finitely many factors have non-positive q-exponent; they are multiplied
/// exactly first so the truncation budget of the rising factors is not
/// eroded. A factor `1 - q^0` makes the whole product exactly zero.
pub fn pochhammer_infinite(x: &QPower, rho: &Rat, t: &Rat) -> Result<PuiseuxSeries> {
    if !rho.is_positive() {
        return Err(Error::Divergent {
            context: format!("infinite product with step exponent {rho} <= 0"),
        });
    }
    let mut exact_part = PuiseuxSeries::one();
    let mut k = 0i64;
    loop {
        let e = x.exponent() + rho * rint(k);
        if e.is_positive() {
            break;
        }
        if e.is_zero() && x.sign() == Sign::Plus {
            return Ok(PuiseuxSeries::zero_exact());
        }
        let factor = PuiseuxSeries::from_terms(
            [(Rat::zero(), rint(1)), (e, -x.sign().to_rat())],
            Order::Exact,
        )?;
        exact_part = exact_part.checked_mul(&factor)?;
        k += 1;
    }
    let v = exact_part.val().expect("factors 1 - c q^e have nonzero terms");
    let t_rise = t - &v;
    let mut acc = PuiseuxSeries::one().truncated(&t_rise);
    loop {
        let e = x.exponent() + rho * rint(k);
        if e > t_rise {
            break;
        }
        let factor = PuiseuxSeries::from_terms(
            [(Rat::zero(), rint(1)), (e, -x.sign().to_rat())],
            Order::Exact,
        )?;
        acc = acc.checked_mul(&factor)?;
        k += 1;
    }
    exact_part.checked_mul(&acc)
}

/// Whether `j(x; q^rho)` is identically zero, which happens exactly for
/// `x = +q^(k rho)` with integer `k`.
pub fn theta_vanishes(x: &QPower, rho: &Rat) -> bool {
    x.sign() == Sign::Plus && (x.exponent() / rho).is_integer()
}

/// The theta function `j(x; q^rho)` truncated at `t`, via the bilateral sum.
pub fn jacobi_j(x: &QPower, rho: &Rat, t: &Rat) -> Result<PuiseuxSeries> {
    if !rho.is_positive() {
        return Err(Error::Divergent {
            context: format!("theta base exponent {rho} <= 0"),
        });
    }
    if theta_vanishes(x, rho) {
        return Ok(PuiseuxSeries::zero(Order::UpTo(t.clone())));
    }
    let pairs = sums::bilateral(t, |n| {
        let e = rho * rint(binom2(n)) + x.exponent_times(n);
        let mut c = x.sign_pow(n);
        if n.rem_euclid(2) == 1 {
            c = -c;
        }
        (e, c)
    });
    PuiseuxSeries::from_terms(pairs, Order::UpTo(t.clone()))
}

/// `j(x; q^rho)` from its three infinite products. Slower than the sum; kept
/// as the independent route for the product-sum check.
pub fn jacobi_j_product(x: &QPower, rho: &Rat, t: &Rat) -> Result<PuiseuxSeries> {
    let complement = QPower::new(x.sign(), rho - x.exponent());
    let a = pochhammer_infinite(x, rho, t)?;
    let b = pochhammer_infinite(&complement, rho, t)?;
    let c = euler_infinite(rho, t)?;
    a.checked_mul(&b)?.checked_mul(&c)
}

/// `J_{a,b} = j(q^a; q^b)`.
pub fn j_ab(a: i64, b: i64, t: &Rat) -> Result<PuiseuxSeries> {
    jacobi_j(&QPower::qi(a), &rint(b), t)
}

/// `Jbar_{a,b} = j(-q^a; q^b)`.
pub fn j_bar_ab(a: i64, b: i64, t: &Rat) -> Result<PuiseuxSeries> {
    jacobi_j(&QPower::neg_qi(a), &rint(b), t)
}

/// `J_a = (q^a; q^a)_inf`.
pub fn j_a(a: i64, t: &Rat) -> Result<PuiseuxSeries> {
    euler_infinite(&rint(a), t)
}

/// The eta-like series `q^(k/24) (q^k; q^k)_inf`.
pub fn eta_series(k: i64, t: &Rat) -> Result<PuiseuxSeries> {
    if k < 1 {
        return Err(Error::InvalidParameter("eta argument multiplier must be positive".into()));
    }
    euler_infinite(&rint(k), t)?.mul_monomial(&rat(1, 1), &rat(k, 24))
}

/// A product of eta-like series with integer exponents,
/// `prod_k eta(k tau)^(e_k)` as a q-series.
pub fn eta_quotient(factors: &[(i64, i32)], t: &Rat) -> Result<PuiseuxSeries> {
    let mut acc = PuiseuxSeries::one().truncated(t);
    for (k, e) in factors {
        let base = eta_series(*k, t)?;
        acc = acc.checked_mul(&base.powi(*e as i64)?)?;
    }
    Ok(acc)
}

// ---- identity checks ----

use crate::alt;

fn monomial_times(series: &PuiseuxSeries, coeff: Rat, exp: Rat) -> Result<PuiseuxSeries> {
    series.mul_monomial(&coeff, &exp)
}

/// Product route and sum route for `j(x; q^rho)` agree.
pub fn check_triple_product(x: &QPower, rho: &Rat, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        Ok((jacobi_j(x, rho, tw)?, jacobi_j_product(x, rho, tw)?))
    })
}

/// `j(q^(n rho) x; q^rho) = (-1)^n q^(-rho n(n-1)/2) x^(-n) j(x; q^rho)`.
pub fn check_elliptic_shift(x: &QPower, rho: &Rat, n: i64, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let shifted = x.shift(&(rho * rint(n)));
        let lhs = jacobi_j(&shifted, rho, tw)?;
        let base = jacobi_j(x, rho, tw)?;
        let coeff = alt(n) * x.sign_pow(-n);
        let exp = -(rho * rint(binom2(n))) + x.exponent_times(-n);
        Ok((lhs, monomial_times(&base, coeff, exp)?))
    })
}

/// `j(x; q^rho) = j(q^rho / x; q^rho)`.
pub fn check_flip_complement(x: &QPower, rho: &Rat, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let complement = QPower::new(x.sign(), rho - x.exponent());
        Ok((jacobi_j(x, rho, tw)?, jacobi_j(&complement, rho, tw)?))
    })
}

/// `j(x; q^rho) = -x j(x^(-1); q^rho)`.
pub fn check_flip_inverse(x: &QPower, rho: &Rat, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let lhs = jacobi_j(x, rho, tw)?;
        let inv = jacobi_j(&x.invert(), rho, tw)?;
        let rhs = monomial_times(&inv, -x.sign().to_rat(), x.exponent().clone())?;
        Ok((lhs, rhs))
    })
}

/// `j(x; q^rho) J_{n rho}^n = J_rho prod_{i<n} j(q^(i rho) x; q^(n rho))`
/// for `n = 2` or `n = 3`, stated with both sides cross-multiplied.
pub fn check_modulus_product(x: &QPower, rho: &Rat, n: i64, t: &Rat) -> Result<Match> {
    if !(n == 2 || n == 3) {
        return Err(Error::InvalidParameter("modulus product check supports n = 2 and n = 3".into()));
    }
    compare_with_padding(t, |tw| {
        let n_rho = rho * rint(n);
        let lhs = jacobi_j(x, rho, tw)?.checked_mul(&euler_infinite(&n_rho, tw)?.powi(n)?)?;
        let mut rhs = euler_infinite(rho, tw)?;
        for i in 0..n {
            let arg = x.shift(&(rho * rint(i)));
            rhs = rhs.checked_mul(&jacobi_j(&arg, &n_rho, tw)?)?;
        }
        Ok((lhs, rhs))
    })
}

/// Splitting of `j(z; q^rho)` along residues of the index modulo `m`:
/// a sum of `m` theta functions to the base `q^(rho m^2)`.
pub fn check_split(z: &QPower, rho: &Rat, m: i64, t: &Rat) -> Result<Match> {
    if m < 1 {
        return Err(Error::InvalidParameter("splitting modulus must be positive".into()));
    }
    compare_with_padding(t, |tw| {
        let lhs = jacobi_j(z, rho, tw)?;
        let mm = rho * rint(m * m);
        let mut rhs = PuiseuxSeries::zero(Order::UpTo(tw.clone()));
        for k in 0..m {
            let inner_sign = z.sign().pow(m).mul(if m % 2 == 0 { Sign::Minus } else { Sign::Plus });
            let inner_exp = rho * rint(binom2(m) + m * k) + z.exponent_times(m);
            let inner = QPower::new(inner_sign, inner_exp);
            let part = jacobi_j(&inner, &mm, tw)?;
            let coeff = alt(k) * z.sign_pow(k);
            let exp = rho * rint(binom2(k)) + z.exponent_times(k);
            rhs = rhs.checked_add(&monomial_times(&part, coeff, exp)?)?;
        }
        Ok((lhs, rhs))
    })
}

/// Quintuple product identity, cross-multiplied:
/// `(j(q^rho x^3; q^(3 rho)) + x j(q^(2 rho) x^3; q^(3 rho))) j(x; q^rho)
///  = J_rho j(x^2; q^rho)`.
///
/// Fails with a non-generic argument error when `j(x; q^rho)` vanishes,
/// since then the uncrossed statement divides by zero.
pub fn check_quintuple(x: &QPower, rho: &Rat, t: &Rat) -> Result<Match> {
    if theta_vanishes(x, rho) {
        return Err(Error::NonGeneric {
            context: format!("j({x}; q^({rho})) vanishes identically"),
        });
    }
    compare_with_padding(t, |tw| {
        let three = rho * rint(3);
        let a1 = QPower::new(x.sign().pow(3), rho + x.exponent_times(3));
        let a2 = QPower::new(x.sign().pow(3), rho * rint(2) + x.exponent_times(3));
        let sum = jacobi_j(&a1, &three, tw)?
            .checked_add(&monomial_times(&jacobi_j(&a2, &three, tw)?, x.sign().to_rat(), x.exponent().clone())?)?;
        let lhs = sum.checked_mul(&jacobi_j(x, rho, tw)?)?;
        let rhs = euler_infinite(rho, tw)?.checked_mul(&jacobi_j(&x.pow(2), rho, tw)?)?;
        Ok((lhs, rhs))
    })
}

/// Expansion of a product of two thetas with bases `q^rho` and `q^(n rho)`
/// into `n + 1` products of theta pairs on finer bases.
pub fn check_theta_pair_expansion(x: &QPower, y: &QPower, rho: &Rat, n: i64, t: &Rat) -> Result<Match> {
    if n < 1 {
        return Err(Error::InvalidParameter("pair expansion index must be positive".into()));
    }
    compare_with_padding(t, |tw| {
        let lhs = jacobi_j(x, rho, tw)?.checked_mul(&jacobi_j(y, &(rho * rint(n)), tw)?)?;
        let base_a = rho * rint(n * (n + 1));
        let base_b = rho * rint(n + 1);
        let mut rhs = PuiseuxSeries::zero(Order::UpTo(tw.clone()));
        for k in 0..=n {
            let a_sign = x
                .sign()
                .pow(n)
                .mul(y.sign())
                .mul(if n % 2 == 0 { Sign::Plus } else { Sign::Minus });
            let a_exp = rho * rint(binom2(n) + k * n) + x.exponent_times(n) + y.exponent();
            let a = QPower::new(a_sign, a_exp);
            let b_sign = Sign::Minus.mul(x.sign()).mul(y.sign());
            let b_exp = rho * (rint(1) - rint(k)) - x.exponent() + y.exponent();
            let b = QPower::new(b_sign, b_exp);
            let part = jacobi_j(&a, &base_a, tw)?.checked_mul(&jacobi_j(&b, &base_b, tw)?)?;
            let coeff = alt(k) * x.sign_pow(k);
            let exp = rho * rint(binom2(k)) + x.exponent_times(k);
            rhs = rhs.checked_add(&monomial_times(&part, coeff, exp)?)?;
        }
        Ok((lhs, rhs))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rint;

    /// Brute-force truncated product of (1 - q^(rho n)) over n >= 1 with
    /// plain integer vectors: an independent oracle for the Euler product.
    fn brute_euler(rho: i64, order: usize) -> Vec<i64> {
        let mut coeffs = vec![0i64; order + 1];
        coeffs[0] = 1;
        let mut n = 1i64;
        while (n * rho) as usize <= order {
            let shift = (n * rho) as usize;
            for k in (shift..=order).rev() {
                let sub = coeffs[k - shift];
                coeffs[k] -= sub;
            }
            n += 1;
        }
        coeffs
    }

    /// Partition counts by the classic dynamic programme over part sizes.
    fn partition_numbers(order: usize) -> Vec<i64> {
        let mut p = vec![0i64; order + 1];
        p[0] = 1;
        for part in 1..=order {
            for k in part..=order {
                p[k] += p[k - part];
            }
        }
        p
    }

    #[test]
    fn euler_product_matches_brute_force_expansion() {
        let t = rint(60);
        for rho in [1i64, 2, 5] {
            let series = euler_infinite(&rint(rho), &t).unwrap();
            let brute = brute_euler(rho, 60);
            for (k, c) in brute.iter().enumerate() {
                assert_eq!(
                    series.coeff_int(k as i64).unwrap(),
                    rint(*c),
                    "coefficient of q^{k} in the step-{rho} Euler product"
                );
            }
        }
    }

    #[test]
    fn euler_inverse_generates_partition_numbers() {
        let t = rint(100);
        let inv = euler_infinite(&rint(1), &t).unwrap().inverted().unwrap();
        let p = partition_numbers(100);
        for (n, c) in p.iter().enumerate() {
            assert_eq!(inv.coeff_int(n as i64).unwrap(), rint(*c), "p({n})");
        }
        // Spot values frozen independently of the dynamic programme.
        for (n, v) in [(10i64, 42i64), (15, 176), (20, 627), (50, 204_226), (100, 190_569_292)] {
            assert_eq!(inv.coeff_int(n).unwrap(), rint(v), "p({n}) literal");
        }
    }

    #[test]
    fn euler_rejects_nonpositive_step() {
        assert!(matches!(euler_infinite(&rint(0), &rint(5)), Err(Error::Divergent { .. })));
        assert!(matches!(euler_infinite(&rat(-1, 2), &rint(5)), Err(Error::Divergent { .. })));
    }

    #[test]
    fn finite_pochhammer_odd_steps() {
        // (q; q^2)_3 = (1 - q)(1 - q^3)(1 - q^5).
        let p = pochhammer(&QPower::qi(1), &rint(2), 3).unwrap();
        let expect = [(0, 1), (1, -1), (3, -1), (4, 1), (5, -1), (6, 1), (8, 1), (9, -1)];
        assert_eq!(p.term_count(), expect.len());
        for (e, c) in expect {
            assert_eq!(p.coeff_int(e).unwrap(), rint(c));
        }
    }

    #[test]
    fn infinite_pochhammer_at_one_is_zero() {
        let z = pochhammer_infinite(&QPower::one(), &rint(1), &rint(10)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.order(), &Order::Exact);
    }

    #[test]
    fn pochhammer_with_negative_argument_exponents_keeps_full_order() {
        let s = pochhammer_infinite(&QPower::neg_qi(-2), &rint(1), &rint(8)).unwrap();
        assert!(s.order().allows(&rint(8)));
        assert_eq!(s.val().unwrap(), rint(-3), "factors q^-2, q^-1 contribute val -3");
    }

    #[test]
    fn theta_vanishing_is_detected() {
        assert!(theta_vanishes(&QPower::qi(3), &rint(1)));
        assert!(theta_vanishes(&QPower::qi(-2), &rint(2)));
        assert!(!theta_vanishes(&QPower::neg_qi(3), &rint(1)));
        assert!(!theta_vanishes(&QPower::qi(3), &rint(2)));
        let z = jacobi_j(&QPower::qi(3), &rint(1), &rint(12)).unwrap();
        assert!(z.is_zero());
        // The product route hits the literal zero factor.
        let zp = jacobi_j_product(&QPower::qi(3), &rint(1), &rint(12)).unwrap();
        assert!(zp.is_zero());
    }

    #[test]
    fn theta_one_five_opening_coefficients() {
        let s = j_ab(1, 5, &rint(30)).unwrap();
        let expect = [(0, 1), (1, -1), (4, -1), (7, 1), (13, 1), (18, -1), (27, -1)];
        assert_eq!(s.term_count(), expect.len());
        for (e, c) in expect {
            assert_eq!(s.coeff_int(e).unwrap(), rint(c), "J_{{1,5}} at q^{e}");
        }
    }

    #[test]
    fn theta_bar_at_zero_doubles() {
        // j(-1; q^b) = 2 sum q^(b n(n-1)/2) over n, so every coefficient is 2.
        let s = j_bar_ab(0, 4, &rint(50)).unwrap();
        for (e, c) in [(0i64, 2i64), (4, 2), (12, 2), (24, 2), (40, 2), (8, 0), (16, 0)] {
            assert_eq!(s.coeff_int(e).unwrap(), rint(c), "Jbar_{{0,4}} at q^{e}");
        }
    }

    #[test]
    fn eta_series_cube_has_odd_coefficients() {
        // q^(1/8) sum (-1)^n (2n+1) q^(n(n+1)/2).
        let cube = eta_series(1, &rint(25)).unwrap().powi(3).unwrap();
        let eighth = rat(1, 8);
        for (base, c) in [(0i64, 1i64), (1, -3), (3, 5), (6, -7), (10, 9), (15, -11), (21, 13)] {
            assert_eq!(cube.coeff(&(rint(base) + &eighth)).unwrap(), rint(c));
        }
        assert_eq!(cube.coeff(&rat(1, 2)).unwrap(), rint(0), "off-support exponent");
    }

    #[test]
    fn eta_quotient_inverse_counts_partitions() {
        let s = eta_quotient(&[(1, -1)], &rint(30)).unwrap();
        let off = rat(-1, 24);
        for (n, v) in [(0i64, 1i64), (5, 7), (10, 42), (20, 627)] {
            assert_eq!(s.coeff(&(rint(n) + &off)).unwrap(), rint(v));
        }
    }

    #[test]
    fn product_and_sum_routes_agree() {
        let t = rint(30);
        let cases = [
            (QPower::neg_qi(1), rint(1)),
            (QPower::qi(2), rint(5)),
            (QPower::neg_q(rat(1, 2)), rint(1)),
            (QPower::qi(-1), rint(3)),
        ];
        for (x, rho) in cases {
            assert!(
                check_triple_product(&x, &rho, &t).unwrap().is_equal(),
                "triple product at x = {x}, rho = {rho}"
            );
        }
    }

    #[test]
    fn elliptic_shift_holds_for_negative_and_fractional_data() {
        let t = rint(25);
        for (x, rho, n) in [
            (QPower::neg_qi(1), rint(1), 2),
            (QPower::qi(1), rint(3), -2),
            (QPower::neg_q(rat(1, 2)), rint(1), 3),
            (QPower::qi(2), rint(5), -1),
        ] {
            assert!(
                check_elliptic_shift(&x, &rho, n, &t).unwrap().is_equal(),
                "elliptic shift x = {x}, rho = {rho}, n = {n}"
            );
        }
    }

    #[test]
    fn flip_identities_hold() {
        let t = rint(25);
        for (x, rho) in [
            (QPower::neg_qi(2), rint(3)),
            (QPower::qi(1), rint(4)),
            (QPower::neg_q(rat(3, 2)), rint(2)),
        ] {
            assert!(check_flip_complement(&x, &rho, &t).unwrap().is_equal());
            assert!(check_flip_inverse(&x, &rho, &t).unwrap().is_equal());
        }
    }

    #[test]
    fn modulus_product_holds_for_two_and_three() {
        let t = rint(25);
        for (x, rho, n) in [
            (QPower::neg_qi(1), rint(1), 2),
            (QPower::qi(1), rint(2), 2),
            (QPower::neg_qi(2), rint(3), 3),
            (QPower::qi(2), rint(5), 3),
        ] {
            assert!(
                check_modulus_product(&x, &rho, n, &t).unwrap().is_equal(),
                "modulus product x = {x}, rho = {rho}, n = {n}"
            );
        }
    }

    #[test]
    fn split_identity_holds_including_vanishing_argument() {
        let t = rint(25);
        for (z, rho, m) in [
            (QPower::neg_qi(1), rint(1), 2),
            (QPower::qi(2), rint(5), 2),
            (QPower::qi(1), rint(1), 3),
            (QPower::neg_qi(0), rint(1), 3),
            (QPower::qi(3), rint(7), 5),
        ] {
            assert!(
                check_split(&z, &rho, m, &t).unwrap().is_equal(),
                "split z = {z}, rho = {rho}, m = {m}"
            );
        }
    }

    #[test]
    fn quintuple_holds_and_rejects_vanishing_denominator() {
        let t = rint(25);
        for (x, rho) in [
            (QPower::neg_qi(1), rint(1)),
            (QPower::qi(1), rint(3)),
            (QPower::neg_q(rat(1, 2)), rint(2)),
        ] {
            assert!(
                check_quintuple(&x, &rho, &t).unwrap().is_equal(),
                "quintuple x = {x}, rho = {rho}"
            );
        }
        assert!(matches!(
            check_quintuple(&QPower::qi(2), &rint(1), &t),
            Err(Error::NonGeneric { .. })
        ));
    }

    #[test]
    fn theta_pair_expansion_holds() {
        let t = rint(22);
        for (x, y, rho, n) in [
            (QPower::neg_qi(1), QPower::neg_qi(2), rint(1), 2),
            (QPower::neg_qi(1), QPower::qi(1), rint(2), 2),
            (QPower::qi(1), QPower::neg_qi(3), rint(3), 3),
        ] {
            assert!(
                check_theta_pair_expansion(&x, &y, &rho, n, &t).unwrap().is_equal(),
                "pair expansion x = {x}, y = {y}, rho = {rho}, n = {n}"
            );
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_arg() -> impl Strategy<Value = (QPower, Rat)> {
            (
                prop::bool::ANY,
                -4i64..=6,
                1i64..=2,
                1i64..=5,
            )
                .prop_map(|(neg, num, den, rho)| {
                    let sign = if neg { Sign::Minus } else { Sign::Plus };
                    (QPower::new(sign, rat(num, den)), rint(rho))
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn flip_inverse_always_holds((x, rho) in arb_arg()) {
                prop_assert!(check_flip_inverse(&x, &rho, &rint(18)).unwrap().is_equal());
            }

            #[test]
            fn elliptic_shift_always_holds((x, rho) in arb_arg(), n in -3i64..=3) {
                prop_assert!(check_elliptic_shift(&x, &rho, n, &rint(18)).unwrap().is_equal());
            }
        }
    }
}

//! Level-one Appell sums and the Eulerian series they complete.
//!
//! The Appell sum is
//! `m(x, z; q^rho) = (1 / j(z; q^rho)) sum_r (-1)^r q^(rho r(r-1)/2) z^r / (1 - q^(rho(r-1)) x z)`
//! over all integers `r`, with `x`, `z` signed q-powers. Each denominator
//! `1 - w` expands as a geometric series towards positive exponents when the
//! q-exponent of `w` is positive, as `-1/w * 1/(1 - 1/w)` when it is
//! negative, and contributes the constant `1/2` when `w = -1`. A denominator
//! `w = +q^0` is a genuine pole and is reported as such; a vanishing theta
//! prefactor `j(z; q^rho)` is rejected up front.
//!
//! On top of the sum sit the Eulerian q-hypergeometric series it completes
//! (two third-order-style series and one fifth-order series), an unwinding
//! identity stepping `x = q^m` down to `m(1, -1; q)`, a two-term and a
//! general modulus-splitting identity, and the ten-term split at modulus
//! ten that produces the residue series [`psi_series`].

use crate::qpower::{QPower, Sign};
use crate::series::{build_to_order, compare_with_padding, Match, Order, PuiseuxSeries};
use crate::theta::{j_a, j_ab, j_bar_ab, jacobi_j, pochhammer, theta_vanishes};
use crate::{alt, binom2, rat, rint, Error, Rat, Result};
use num_traits::{Signed, Zero};

/// Collect the numerator terms of the Appell sum up to order `t`.
fn appell_numerator(x: &QPower, z: &QPower, rho: &Rat, t: &Rat) -> Result<Vec<(Rat, Rat)>> {
    let mut out = Vec::new();
    for dir in [1i64, -1] {
        let mut r = if dir == 1 { 0 } else { -1 };
        let mut misses = 0;
        while misses < 5 {
            let base_c = alt(r) * z.sign_pow(r);
            let base_e = rho * rint(binom2(r)) + z.exponent_times(r);
            let w_sign = x.sign().mul(z.sign());
            let w_exp = x.exponent() + z.exponent() + rho * rint(r - 1);
            let min_e;
            if w_exp.is_zero() {
                if w_sign == Sign::Plus {
                    return Err(Error::AppellPole { r });
                }
                min_e = base_e.clone();
                if &base_e <= t {
                    out.push((base_e, base_c * rat(1, 2)));
                }
            } else if w_exp.is_positive() {
                min_e = base_e.clone();
                let mut k = 0i64;
                loop {
                    let e = &base_e + &w_exp * rint(k);
                    if &e > t {
                        break;
                    }
                    out.push((e, &base_c * w_sign.pow(k).to_rat()));
                    k += 1;
                }
            } else {
                // 1/(1 - w) = -sum_{k >= 1} w^(-k) when w has negative exponent.
                min_e = &base_e - &w_exp;
                let mut k = 1i64;
                loop {
                    let e = &base_e - &w_exp * rint(k);
                    if &e > t {
                        break;
                    }
                    out.push((e, -(&base_c * w_sign.pow(k).to_rat())));
                    k += 1;
                }
            }
            if &min_e > t {
                misses += 1;
            } else {
                misses = 0;
            }
            r += dir;
            assert!(r.abs() < 1_000_000, "Appell sum failed to localise");
        }
    }
    Ok(out)
}

/// The Appell sum `m(x, z; q^rho)` truncated at `t`.
pub fn appell_m(x: &QPower, z: &QPower, rho: &Rat, t: &Rat) -> Result<PuiseuxSeries> {
    if !rho.is_positive() {
        return Err(Error::Divergent { context: format!("Appell base exponent {rho} <= 0") });
    }
    if theta_vanishes(z, rho) {
        return Err(Error::ZeroThetaDenominator {
            context: format!("j({z}; q^({rho})) in the Appell prefactor"),
        });
    }
    build_to_order(t, |tw| {
        let num = PuiseuxSeries::from_terms(appell_numerator(x, z, rho, tw)?, Order::UpTo(tw.clone()))?;
        let den = jacobi_j(z, rho, tw)?;
        num.checked_mul(&den.inverted()?)
    })
}

// ---- Eulerian series ----

/// `sum_{n>=0} (-1)^n q^(n^2) (q; q^2)_n / (-q^2; q^2)_n^2`.
pub fn mu_eulerian(t: &Rat) -> Result<PuiseuxSeries> {
    build_to_order(t, |tw| {
        let mut acc = PuiseuxSeries::zero(Order::UpTo(tw.clone()));
        let mut n = 0i64;
        while &rint(n * n) <= tw {
            let num = pochhammer(&QPower::qi(1), &rint(2), n)?;
            let den = pochhammer(&QPower::neg_qi(2), &rint(2), n)?.powi(2)?;
            let term = num
                .checked_mul(&den.truncated(tw).inverted()?)?
                .mul_monomial(&alt(n), &rint(n * n))?;
            acc = acc.checked_add(&term)?;
            n += 1;
        }
        Ok(acc)
    })
}

/// `sum_{n>=0} q^((n+1)^2) (-q; q^2)_n / (q; q^2)_(n+1)^2`.
pub fn cap_a_eulerian(t: &Rat) -> Result<PuiseuxSeries> {
    build_to_order(t, |tw| {
        let mut acc = PuiseuxSeries::zero(Order::UpTo(tw.clone()));
        let mut n = 0i64;
        while &rint((n + 1) * (n + 1)) <= tw {
            let num = pochhammer(&QPower::neg_qi(1), &rint(2), n)?;
            let den = pochhammer(&QPower::qi(1), &rint(2), n + 1)?.powi(2)?;
            let term = num
                .checked_mul(&den.truncated(tw).inverted()?)?
                .mul_monomial(&rint(1), &rint((n + 1) * (n + 1)))?;
            acc = acc.checked_add(&term)?;
            n += 1;
        }
        Ok(acc)
    })
}

/// `sum_{n>=0} q^(n^2) / (-q; q)_n`, the fifth-order series.
pub fn f0_eulerian(t: &Rat) -> Result<PuiseuxSeries> {
    build_to_order(t, |tw| {
        let mut acc = PuiseuxSeries::zero(Order::UpTo(tw.clone()));
        let mut n = 0i64;
        while &rint(n * n) <= tw {
            let den = pochhammer(&QPower::neg_qi(1), &rint(1), n)?;
            let term = den.truncated(tw).inverted()?.mul_monomial(&rint(1), &rint(n * n))?;
            acc = acc.checked_add(&term)?;
            n += 1;
        }
        Ok(acc)
    })
}

/// The theta quotient `J_{2,4}^4 / J_1^3` completing `mu` against its
/// Appell form.
pub fn mu_theta_correction(t: &Rat) -> Result<PuiseuxSeries> {
    build_to_order(t, |tw| {
        j_ab(2, 4, tw)?.powi(4)?.checked_mul(&j_a(1, tw)?.powi(3)?.inverted()?)
    })
}

/// The theta correction in the two-term splitting of `m(1, -1; q)`:
/// `(J_2^3 / (Jbar_{0,1} Jbar_{0,4} J_{1,2})) *
///  (Jbar_{1,2} Jbar_{0,4} / Jbar_{0,2} + Jbar_{0,2} Jbar_{2,4} / Jbar_{1,2})`.
pub fn split_correction_term(t: &Rat) -> Result<PuiseuxSeries> {
    build_to_order(t, |tw| {
        let pref_den = j_bar_ab(0, 1, tw)?
            .checked_mul(&j_bar_ab(0, 4, tw)?)?
            .checked_mul(&j_ab(1, 2, tw)?)?;
        let pref = j_a(2, tw)?.powi(3)?.checked_mul(&pref_den.inverted()?)?;
        let first = j_bar_ab(1, 2, tw)?
            .checked_mul(&j_bar_ab(0, 4, tw)?)?
            .checked_mul(&j_bar_ab(0, 2, tw)?.inverted()?)?;
        let second = j_bar_ab(0, 2, tw)?
            .checked_mul(&j_bar_ab(2, 4, tw)?)?
            .checked_mul(&j_bar_ab(1, 2, tw)?.inverted()?)?;
        pref.checked_mul(&first.checked_add(&second)?)
    })
}

// ---- identity checks ----

/// `m(x, z; q^rho) = m(x, q^rho z; q^rho)`.
pub fn check_z_shift(x: &QPower, z: &QPower, rho: &Rat, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let lhs = appell_m(x, z, rho, tw)?;
        let rhs = appell_m(x, &z.shift(rho), rho, tw)?;
        Ok((lhs, rhs))
    })
}

/// `m(x, z; q^rho) = x^(-1) m(x^(-1), z^(-1); q^rho)`.
pub fn check_inversion(x: &QPower, z: &QPower, rho: &Rat, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let lhs = appell_m(x, z, rho, tw)?;
        let rhs = appell_m(&x.invert(), &z.invert(), rho, tw)?
            .mul_monomial(&x.sign().to_rat(), &-x.exponent().clone())?;
        Ok((lhs, rhs))
    })
}

/// `m(q^rho x, z; q^rho) = 1 - x m(x, z; q^rho)`.
pub fn check_x_shift(x: &QPower, z: &QPower, rho: &Rat, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let lhs = appell_m(&x.shift(rho), z, rho, tw)?;
        let scaled = appell_m(x, z, rho, tw)?
            .mul_monomial(&x.sign().to_rat(), x.exponent())?;
        let rhs = PuiseuxSeries::one().truncated(tw).checked_sub(&scaled)?;
        Ok((lhs, rhs))
    })
}

/// The finite unwinding sum `sum_{k=0}^{m-1} (-1)^k q^(mk - k(k+1)/2)`, with
/// the empty-range convention `sum_{k=a}^{b} = -sum_{k=b+1}^{a-1}` when
/// `b < a` (so negative `m` produces a genuinely two-sided polynomial).
pub fn unwind_sum(m: i64) -> Result<PuiseuxSeries> {
    let mut pairs = Vec::new();
    if m >= 0 {
        for k in 0..m {
            pairs.push((rint(m * k - binom2(k + 1)), alt(k)));
        }
    } else {
        for k in m..0 {
            pairs.push((rint(m * k - binom2(k + 1)), -alt(k)));
        }
    }
    PuiseuxSeries::from_terms(pairs, Order::Exact)
}

/// `m(q^m, -1; q) = unwind_sum(m) + (-1)^m q^(m(m-1)/2) m(1, -1; q)`.
pub fn check_appell_unwind(m: i64, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let lhs = appell_m(&QPower::qi(m), &QPower::minus_one(), &rint(1), tw)?;
        let tail = appell_m(&QPower::one(), &QPower::minus_one(), &rint(1), tw)?
            .mul_monomial(&alt(m), &rint(binom2(m)))?;
        let rhs = unwind_sum(m)?.truncated(tw).checked_add(&tail)?;
        Ok((lhs, rhs))
    })
}

/// The residue series of the modulus-ten splitting at `x = q^m`:
/// a theta quotient times a ten-term sum of theta products.
pub fn psi_series(m: i64, t: &Rat) -> Result<PuiseuxSeries> {
    let ten = rint(10);
    let hundred = rint(100);
    build_to_order(t, |tw| {
        let pref_den = jacobi_j(&QPower::neg_qi(m), &rint(1), tw)?
            .checked_mul(&jacobi_j(&QPower::minus_one(), &hundred, tw)?)?;
        let pref = j_a(10, tw)?.powi(3)?.checked_mul(&pref_den.inverted()?)?;
        let shared = jacobi_j(&QPower::qi(5 + 10 * m), &ten, tw)?.inverted()?;
        let mut sum = PuiseuxSeries::zero(Order::UpTo(tw.clone()));
        for r in 0..10i64 {
            let n1 = jacobi_j(&QPower::neg_qi(r + 5 + 10 * m), &ten, tw)?;
            let n2 = jacobi_j(&QPower::neg_qi(10 * r), &hundred, tw)?;
            let dr = jacobi_j(&QPower::neg_qi(r), &ten, tw)?;
            let mono = rat(r * (r - 9), 2) + rint(m * r);
            let term = n1
                .checked_mul(&n2)?
                .checked_mul(&dr.inverted()?)?
                .mul_monomial(&rint(1), &mono)?;
            sum = sum.checked_add(&term)?;
        }
        pref.checked_mul(&shared)?.checked_mul(&sum)
    })
}

/// The modulus-ten splitting at `x = q^m`, `z = -1`:
/// `m(q^m, -1; q) = sum_{r=0}^{9} (-1)^r q^(-r(r+1)/2 + mr)
///   m(-q^(45 - 10r + 10m), -1; q^100) - psi_series(m)`.
pub fn check_psi_relation(m: i64, t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let lhs = appell_m(&QPower::qi(m), &QPower::minus_one(), &rint(1), tw)?;
        let mut sum = PuiseuxSeries::zero(Order::UpTo(tw.clone()));
        for r in 0..10i64 {
            let inner = appell_m(
                &QPower::neg_qi(45 - 10 * r + 10 * m),
                &QPower::minus_one(),
                &rint(100),
                tw,
            )?;
            let term = inner.mul_monomial(&alt(r), &rint(-binom2(r + 1) + m * r))?;
            sum = sum.checked_add(&term)?;
        }
        let rhs = sum.checked_sub(&psi_series(m, tw)?)?;
        Ok((lhs, rhs))
    })
}

/// The two-term splitting specialised to `x = 1`, `z = -1`:
/// `m(1, -1; q) = 2 m(-q, -1; q^4) - split_correction_term`.
pub fn check_msplit_two_corollary(t: &Rat) -> Result<Match> {
    compare_with_padding(t, |tw| {
        let lhs = appell_m(&QPower::one(), &QPower::minus_one(), &rint(1), tw)?;
        let doubled = appell_m(&QPower::neg_qi(1), &QPower::minus_one(), &rint(4), tw)?
            .times_rat(&rint(2));
        let rhs = doubled.checked_sub(&split_correction_term(tw)?)?;
        Ok((lhs, rhs))
    })
}

/// The general modulus-`n` splitting of an Appell sum:
/// `m(x, z; q^rho)` equals a sum of `n` Appell sums to the base `q^(rho n^2)`
/// plus an `n`-term theta correction. Every theta appearing in a denominator
/// must be non-vanishing.
pub fn check_msplit_general(
    x: &QPower,
    z: &QPower,
    zp: &QPower,
    rho: &Rat,
    n: i64,
    t: &Rat,
) -> Result<Match> {
    if n < 1 {
        return Err(Error::InvalidParameter("splitting modulus must be positive".into()));
    }
    let rho_n = rho * rint(n);
    let rho_nn = rho * rint(n * n);
    let minus_x = x.negate();
    let mxn = minus_x.pow(n);
    // Denominators of the correction term.
    let den_xz = x.mul(z);
    let den_a = mxn.mul(zp).negate().shift(&(rho * rint(binom2(n))));
    for (arg, base, what) in [
        (z.clone(), rho.clone(), "z prefactor"),
        (zp.clone(), rho_nn.clone(), "z' prefactor"),
        (den_xz.clone(), rho.clone(), "j(xz)"),
        (den_a.clone(), rho_n.clone(), "leading correction denominator"),
    ] {
        if theta_vanishes(&arg, &base) {
            return Err(Error::ZeroThetaDenominator {
                context: format!("{what}: j({arg}; q^({base}))"),
            });
        }
    }
    for r in 0..n {
        let dr = z.shift(&(rho * rint(r)));
        if theta_vanishes(&dr, &rho_n) {
            return Err(Error::ZeroThetaDenominator {
                context: format!("j({dr}; q^({rho_n})) in the correction sum"),
            });
        }
    }
    compare_with_padding(t, |tw| {
        let lhs = appell_m(x, z, rho, tw)?;
        // Appell part.
        let mut appell_part = PuiseuxSeries::zero(Order::UpTo(tw.clone()));
        for r in 0..n {
            let arg = mxn.negate().shift(&(rho * rint(binom2(n) - n * r)));
            let inner = appell_m(&arg, zp, &rho_nn, tw)?;
            let coeff = minus_x.sign_pow(r);
            let exp = -(rho * rint(binom2(r + 1))) + minus_x.exponent_times(r);
            appell_part = appell_part.checked_add(&inner.mul_monomial(&coeff, &exp)?)?;
        }
        // Theta correction.
        let pref = jacobi_j(&den_xz, rho, tw)?
            .checked_mul(&jacobi_j(zp, &rho_nn, tw)?)?
            .inverted()?
            .checked_mul(&crate::theta::euler_infinite(&rho_n, tw)?.powi(3)?)?
            .mul_monomial(&zp.sign().to_rat(), zp.exponent())?;
        let da_inv = jacobi_j(&den_a, &rho_n, tw)?.inverted()?;
        let mut corr = PuiseuxSeries::zero(Order::UpTo(tw.clone()));
        let mxz = minus_x.mul(z);
        for r in 0..n {
            let n1_arg = mxn.mul(z).mul(zp).negate().shift(&(rho * rint(binom2(n) + r)));
            let n2_arg = z.pow(n).mul(&zp.invert()).shift(&(rho * rint(n * r)));
            let dr = z.shift(&(rho * rint(r)));
            let term = jacobi_j(&n1_arg, &rho_n, tw)?
                .checked_mul(&jacobi_j(&n2_arg, &rho_nn, tw)?)?
                .checked_mul(&jacobi_j(&dr, &rho_n, tw)?.inverted()?)?;
            let coeff = mxz.sign_pow(r);
            let exp = rho * rint(binom2(r)) + mxz.exponent_times(r);
            corr = corr.checked_add(&term.mul_monomial(&coeff, &exp)?)?;
        }
        let rhs = appell_part.checked_add(&pref.checked_mul(&da_inv)?.checked_mul(&corr)?)?;
        Ok((lhs, rhs))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: i64) -> Rat {
        rint(n)
    }

    #[test]
    fn appell_rejects_pole_and_vanishing_prefactor() {
        // x z = q^0 with plus sign at r = 1 is a pole (rho = 2, x = z = q).
        // Here w = q^(2(r-1)) x z = q^(2r), so r = 0 hits 1 - q^0.
        let err = appell_m(&QPower::qi(1), &QPower::qi(1), &rint(2), &t(10)).unwrap_err();
        assert!(matches!(err, Error::AppellPole { .. }), "got {err}");
        let err = appell_m(&QPower::qi(1), &QPower::qi(2), &rint(2), &t(10)).unwrap_err();
        assert!(matches!(err, Error::ZeroThetaDenominator { .. }), "got {err}");
    }

    #[test]
    fn functional_equations_hold() {
        let order = t(25);
        let cases = [
            (QPower::qi(1), QPower::neg_qi(0), rint(1)),
            (QPower::neg_qi(2), QPower::qi(1), rint(2)),
            (QPower::qi(-1), QPower::neg_qi(1), rint(3)),
        ];
        for (x, z, rho) in cases {
            assert!(check_z_shift(&x, &z, &rho, &order).unwrap().is_equal(), "z-shift {x}, {z}");
            assert!(check_inversion(&x, &z, &rho, &order).unwrap().is_equal(), "inversion {x}, {z}");
            assert!(check_x_shift(&x, &z, &rho, &order).unwrap().is_equal(), "x-shift {x}, {z}");
        }
    }

    #[test]
    fn unwind_sum_matches_small_literals() {
        // m = -2: the reversed range gives q^2 - q^3.
        let s = unwind_sum(-2).unwrap();
        assert_eq!(s.term_count(), 2);
        assert_eq!(s.coeff_int(2).unwrap(), rint(1));
        assert_eq!(s.coeff_int(3).unwrap(), rint(-1));
        // m = 0 and m = 1: empty and single-term sums.
        assert!(unwind_sum(0).unwrap().is_zero());
        let one_term = unwind_sum(1).unwrap();
        assert_eq!(one_term.coeff_int(0).unwrap(), rint(1));
        assert_eq!(one_term.term_count(), 1);
    }

    #[test]
    fn unwinding_identity_holds_for_small_m() {
        let order = t(30);
        for m in -2..=4 {
            assert!(
                check_appell_unwind(m, &order).unwrap().is_equal(),
                "unwinding at m = {m}"
            );
        }
    }

    #[test]
    fn mu_matches_its_appell_form() {
        let order = t(60);
        let check = compare_with_padding(&order, |tw| {
            let lhs = mu_eulerian(tw)?;
            let appell =
                appell_m(&QPower::neg_qi(1), &QPower::minus_one(), &rint(4), tw)?.times_rat(&rint(4));
            let rhs = appell.checked_sub(&mu_theta_correction(tw)?)?;
            Ok((lhs, rhs))
        })
        .unwrap();
        assert!(check.is_equal(), "{check}");
    }

    #[test]
    fn cap_a_matches_its_appell_form() {
        let order = t(60);
        let check = compare_with_padding(&order, |tw| {
            let lhs = cap_a_eulerian(tw)?;
            let rhs = appell_m(&QPower::qi(1), &QPower::qi(2), &rint(4), tw)?.times_rat(&rint(-1));
            Ok((lhs, rhs))
        })
        .unwrap();
        assert!(check.is_equal(), "{check}");
    }

    #[test]
    fn mu_and_cap_a_combine_to_a_theta_quotient() {
        let order = t(60);
        let check = compare_with_padding(&order, |tw| {
            let mu = mu_eulerian(tw)?;
            let a_neg = cap_a_eulerian(tw)?.substituted(Sign::Minus, &rint(1))?;
            let lhs = mu.checked_add(&a_neg.times_rat(&rint(4)))?;
            let rhs = j_a(1, tw)?.powi(5)?.checked_mul(&j_a(2, tw)?.powi(4)?.inverted()?)?;
            Ok((lhs, rhs))
        })
        .unwrap();
        assert!(check.is_equal(), "{check}");
    }

    #[test]
    fn fifth_order_series_matches_its_theta_form() {
        let order = t(60);
        let check = compare_with_padding(&order, |tw| {
            let lhs = f0_eulerian(tw)?;
            let mut sum = PuiseuxSeries::zero(Order::UpTo(tw.clone()));
            let mut n = 0i64;
            while &rint(10 * n * n) <= tw {
                let d1 = pochhammer(&QPower::qi(2), &rint(10), n + 1)?;
                let d2 = pochhammer(&QPower::qi(8), &rint(10), n)?;
                let term = d1
                    .checked_mul(&d2)?
                    .truncated(tw)
                    .inverted()?
                    .mul_monomial(&rint(1), &rint(10 * n * n))?;
                sum = sum.checked_add(&term)?;
                n += 1;
            }
            let quot = j_a(5, tw)?
                .checked_mul(&j_ab(5, 10, tw)?)?
                .checked_mul(&j_ab(1, 5, tw)?.inverted()?)?;
            let rhs = PuiseuxSeries::constant(rint(2))
                .truncated(tw)
                .checked_sub(&sum.times_rat(&rint(2)))?
                .checked_add(&quot)?;
            Ok((lhs, rhs))
        })
        .unwrap();
        assert!(check.is_equal(), "{check}");
    }

    #[test]
    fn two_term_split_corollary_holds() {
        assert!(check_msplit_two_corollary(&t(50)).unwrap().is_equal());
    }

    #[test]
    fn general_split_holds_for_small_moduli() {
        let order = t(25);
        let cases = [
            (QPower::qi(2), QPower::neg_qi(1), QPower::neg_qi(4), rint(1), 2i64),
            (QPower::qi(3), QPower::minus_one(), QPower::minus_one(), rint(1), 2),
            (QPower::qi(1), QPower::neg_qi(2), QPower::neg_qi(1), rint(2), 3),
        ];
        for (x, z, zp, rho, n) in cases {
            assert!(
                check_msplit_general(&x, &z, &zp, &rho, n, &order).unwrap().is_equal(),
                "general split x = {x}, z = {z}, z' = {zp}, rho = {rho}, n = {n}"
            );
        }
    }

    #[test]
    fn general_split_rejects_vanishing_theta() {
        // z' = +q^4 vanishes against the base q^(rho n^2) = q^4.
        let err = check_msplit_general(
            &QPower::qi(2),
            &QPower::neg_qi(1),
            &QPower::qi(4),
            &rint(1),
            2,
            &t(20),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ZeroThetaDenominator { .. }), "got {err}");
    }

    #[test]
    fn modulus_ten_relation_holds_at_origin() {
        assert!(check_psi_relation(0, &t(40)).unwrap().is_equal());
    }
}

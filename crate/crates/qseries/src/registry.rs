//! Named catalogue of every machine-checkable identity in the crate, plus a
//! scan routine matching string functions against eta quotients.
//!
//! - [`case_names`], [`run_case`], and [`run_suite`] expose the catalogue:
//!   each case has a stable hierarchical name, a default truncation order,
//!   and produces a [`CaseReport`] with pass/fail status and timing.
//! - Case names beginning with an underscore are diagnostic plumbing and are
//!   skipped unless explicitly selected by filter.
//! - [`kp_scan`] searches string functions (and optionally differences of
//!   two of them) for rescalings that match a target eta quotient.

use crate::appell::{
    appell_m, cap_a_eulerian, check_appell_unwind, check_inversion, check_msplit_general,
    check_msplit_two_corollary, check_psi_relation, check_x_shift, check_z_shift, f0_eulerian,
    mu_eulerian, mu_theta_correction,
};
use crate::decomp::{
    check_eta_theta_bridge, check_half_level_mock_a_form, check_half_level_mu_form,
    check_hecke_theta_pairing, check_level_minus_half, check_level_minus_two_thirds,
    check_negative_disc, check_negative_level_theta_sum, check_positive_disc,
    check_residual_scaling, check_string_mu_expansion, check_theta_quotient_identity,
};
use crate::hecke::{
    hecke_double_sum, hecke_double_sum_reference, level_one_closed, string_c,
    string_integer_compact, string_script, string_script_direct, HeckeParams, StringSpec,
};
use crate::qpower::{QPower, Sign};
use crate::series::{build_to_order, compare_with_padding, Match, PuiseuxSeries};
use crate::theta::{
    check_elliptic_shift, check_flip_complement, check_flip_inverse, check_modulus_product,
    check_quintuple, check_split, check_theta_pair_expansion, check_triple_product, eta_quotient,
    j_a, j_ab, jacobi_j, jacobi_j_product, pochhammer,
};
use crate::{rat, rint, Error, Rat, Result};
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

type CaseFn = Box<dyn Fn(&Rat) -> Result<Match> + Send + Sync>;

/// A catalogued identity check with a stable name and default order.
struct Case {
    name: String,
    order: Rat,
    run: CaseFn,
}

/// Outcome of running one catalogued case.
#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub order: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub millis: u64,
}

/// Outcome of running a set of catalogued cases.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub cases: Vec<CaseReport>,
}

struct Catalogue(Vec<Case>);

impl Catalogue {
    fn add<F>(&mut self, name: impl Into<String>, order: i64, f: F)
    where
        F: Fn(&Rat) -> Result<Match> + Send + Sync + 'static,
    {
        self.0.push(Case {
            name: name.into(),
            order: rint(order),
            run: Box::new(f),
        });
    }
}

fn theta_cases(cat: &mut Catalogue) {
    let triples = [
        ("x=q,rho=1", QPower::qi(1), rint(1)),
        ("x=-q,rho=1", QPower::neg_qi(1), rint(1)),
        ("x=q^2,rho=3", QPower::qi(2), rint(3)),
        ("x=q^(1/2),rho=3/2", QPower::q(rat(1, 2)), rat(3, 2)),
    ];
    for (tag, x, rho) in triples {
        cat.add(format!("theta/triple-product/{tag}"), 50, move |t| {
            check_triple_product(&x, &rho, t)
        });
    }
    let shifts = [
        ("x=q^2,rho=1,n=1", QPower::qi(2), rint(1), 1i64),
        ("x=-q,rho=3,n=-2", QPower::neg_qi(1), rint(3), -2),
        ("x=q^(1/2),rho=1,n=2", QPower::q(rat(1, 2)), rint(1), 2),
    ];
    for (tag, x, rho, n) in shifts {
        cat.add(format!("theta/elliptic-shift/{tag}"), 50, move |t| {
            check_elliptic_shift(&x, &rho, n, t)
        });
    }
    let complements = [
        ("x=q,rho=3", QPower::qi(1), rint(3)),
        ("x=-q^2,rho=5", QPower::neg_qi(2), rint(5)),
    ];
    for (tag, x, rho) in complements {
        cat.add(format!("theta/flip-complement/{tag}"), 50, move |t| {
            check_flip_complement(&x, &rho, t)
        });
    }
    let inverses = [
        ("x=q,rho=3", QPower::qi(1), rint(3)),
        ("x=-q,rho=1", QPower::neg_qi(1), rint(1)),
    ];
    for (tag, x, rho) in inverses {
        cat.add(format!("theta/flip-inverse/{tag}"), 50, move |t| {
            check_flip_inverse(&x, &rho, t)
        });
    }
    let modulus = [
        ("x=q,rho=1,n=2", QPower::qi(1), rint(1), 2i64),
        ("x=q^2,rho=1,n=3", QPower::qi(2), rint(1), 3),
        ("x=-q,rho=2,n=2", QPower::neg_qi(1), rint(2), 2),
    ];
    for (tag, x, rho, n) in modulus {
        cat.add(format!("theta/modulus-product/{tag}"), 50, move |t| {
            check_modulus_product(&x, &rho, n, t)
        });
    }
    let splits = [
        ("z=q,rho=1,n=2", QPower::qi(1), rint(1), 2i64),
        ("z=-q^2,rho=3,n=3", QPower::neg_qi(2), rint(3), 3),
    ];
    for (tag, z, rho, n) in splits {
        cat.add(format!("theta/split/{tag}"), 50, move |t| {
            check_split(&z, &rho, n, t)
        });
    }
    let quintuples = [
        ("x=q,rho=3", QPower::qi(1), rint(3)),
        ("x=-q,rho=4", QPower::neg_qi(1), rint(4)),
    ];
    for (tag, x, rho) in quintuples {
        cat.add(format!("theta/quintuple/{tag}"), 50, move |t| {
            check_quintuple(&x, &rho, t)
        });
    }
    let pairs = [
        ("x=q,y=q^2,rho=1,n=1", QPower::qi(1), QPower::qi(2), rint(1), 1i64),
        ("x=q,y=-q,rho=1,n=2", QPower::qi(1), QPower::neg_qi(1), rint(1), 2),
    ];
    for (tag, x, y, rho, n) in pairs {
        cat.add(format!("theta/pair-expansion/{tag}"), 50, move |t| {
            check_theta_pair_expansion(&x, &y, &rho, n, t)
        });
    }
    let sum_product = [
        ("x=q,rho=1", QPower::qi(1), rint(1)),
        ("x=-q^(1/2),rho=5/2", QPower::neg_q(rat(1, 2)), rat(5, 2)),
    ];
    for (tag, x, rho) in sum_product {
        cat.add(format!("series/jtp-sum-product/{tag}"), 60, move |t| {
            compare_with_padding(t, |tw| {
                Ok((jacobi_j(&x, &rho, tw)?, jacobi_j_product(&x, &rho, tw)?))
            })
        });
    }
}

fn hecke_cases(cat: &mut Catalogue) {
    let oracles = [
        ("a=1,b=2,c=1,x=q,y=q", 1, 2, 1, QPower::qi(1), QPower::qi(1)),
        (
            "a=1,b=5,c=20,x=q,y=-q^12",
            1,
            5,
            20,
            QPower::qi(1),
            QPower::neg_qi(12),
        ),
    ];
    for (tag, a, b, c, x, y) in oracles {
        cat.add(format!("hecke/quadrant-oracle/{tag}"), 30, move |t| {
            let params = HeckeParams::new(a, b, c)?;
            compare_with_padding(t, |tw| {
                Ok((
                    hecke_double_sum(&params, &x, &y, tw)?,
                    hecke_double_sum_reference(&params, &x, &y, 60, tw)?,
                ))
            })
        });
    }
    for which in [1u8, 2] {
        cat.add(format!("hecke/theta-pairing/{which}"), 100, move |t| {
            check_hecke_theta_pairing(which, t)
        });
    }
}

fn string_cases(cat: &mut Catalogue) {
    let dual = [
        (1, 3, 1, 1),
        (1, 4, 0, 0),
        (1, 5, 2, 0),
        (2, 5, 1, 1),
        (2, 7, 2, 2),
        (2, 3, 0, 0),
        (3, 4, 1, 1),
        (3, 5, 2, 0),
    ];
    for (p, pp, m, ell) in dual {
        cat.add(
            format!("strings/dual-route/p={p},pp={pp},m={m},ell={ell}"),
            100,
            move |t| {
                let spec = StringSpec::new(p, pp, ell, m)?;
                compare_with_padding(t, |tw| {
                    Ok((string_script(&spec, tw)?, string_script_direct(&spec, tw)?))
                })
            },
        );
    }
    for (m, ell) in [(0, 0), (1, 1), (2, 0), (3, 1), (4, 0)] {
        cat.add(
            format!("strings/level-one-closed/m={m},ell={ell}"),
            200,
            move |t| {
                let spec = StringSpec::new(1, 3, ell, m)?;
                compare_with_padding(t, |tw| {
                    Ok((string_script(&spec, tw)?, level_one_closed(m, ell, tw)?))
                })
            },
        );
    }
    for (n, m, ell) in [(1, 0, 0), (2, 1, 1), (2, 2, 0), (3, 1, 1)] {
        cat.add(
            format!("strings/integer-compact/n={n},m={m},ell={ell}"),
            100,
            move |t| {
                let spec = StringSpec::new(1, n + 2, ell, m)?;
                compare_with_padding(t, |tw| {
                    Ok((
                        string_script(&spec, tw)?,
                        string_integer_compact(n, m, ell, tw)?,
                    ))
                })
            },
        );
    }
    cat.add("strings/symmetry/negation/p=2,pp=5,m=3,ell=1", 60, |t| {
        let spec = StringSpec::new(2, 5, 1, 3)?;
        let flipped = spec.with_m(-3)?;
        compare_with_padding(t, |tw| {
            Ok((string_c(&spec, tw)?, string_c(&flipped, tw)?))
        })
    });
    cat.add("strings/symmetry/period/p=1,pp=4,m=0,ell=0", 60, |t| {
        let base = StringSpec::new(1, 4, 0, 0)?;
        let shifted = base.with_m(4)?;
        compare_with_padding(t, |tw| {
            let lhs = string_script(&shifted, tw)?;
            let rhs = string_script(&base, tw)?.mul_monomial(&Rat::one(), &rint(2))?;
            Ok((lhs, rhs))
        })
    });
    cat.add("strings/symmetry/diagram/p=1,pp=4,m=0,ell=0", 60, |t| {
        let spec = StringSpec::new(1, 4, 0, 0)?;
        let mirrored = StringSpec::new(1, 4, 2, 2)?;
        compare_with_padding(t, |tw| {
            Ok((string_c(&spec, tw)?, string_c(&mirrored, tw)?))
        })
    });
    let negative_level = [
        (2, 3, 0, 0),
        (2, 3, 1, 1),
        (3, 4, 0, 0),
        (3, 4, 2, 2),
        (3, 5, 0, 0),
        (3, 5, 1, 1),
        (5, 7, 0, 0),
        (5, 7, 1, 1),
    ];
    for (p, pp, m, ell) in negative_level {
        cat.add(
            format!("strings/negative-level-theta-sum/p={p},pp={pp},m={m},ell={ell}"),
            100,
            move |t| {
                let spec = StringSpec::new(p, pp, ell, m)?;
                check_negative_level_theta_sum(&spec, t)
            },
        );
    }
    for (m, ell) in [(0, 0), (2, 0), (-2, 0), (1, 1), (5, 1)] {
        cat.add(
            format!("strings/level-minus-half/m={m},ell={ell}"),
            300,
            move |t| check_level_minus_half(m, ell, t),
        );
    }
    let minus_two_thirds = [
        (0, 0),
        (-2, 0),
        (2, 0),
        (4, 0),
        (1, 1),
        (-1, 1),
        (3, 1),
        (5, 1),
        (2, 2),
        (0, 2),
        (4, 2),
        (6, 2),
    ];
    for (m, ell) in minus_two_thirds {
        cat.add(
            format!("strings/level-minus-two-thirds/m={m},ell={ell}"),
            150,
            move |t| check_level_minus_two_thirds(m, ell, t),
        );
    }
    for (m, ell) in [(0, 0), (2, 0), (1, 1), (3, 1)] {
        cat.add(
            format!("strings/mu-expansion/m={m},ell={ell}"),
            80,
            move |t| check_string_mu_expansion(m, ell, t),
        );
    }
    for k in [1i64, 2, 3] {
        cat.add(format!("strings/residual-scaling/k={k}"), 80, move |t| {
            check_residual_scaling(k, t)
        });
    }
    for ell in [0i64, 2] {
        cat.add(
            format!("strings/half-level-closed/mu-form/ell={ell}"),
            300,
            move |t| check_half_level_mu_form(ell, t),
        );
        cat.add(
            format!("strings/half-level-closed/mock-a-form/ell={ell}"),
            300,
            move |t| check_half_level_mock_a_form(ell, t),
        );
    }
}

fn appell_cases(cat: &mut Catalogue) {
    cat.add("appell/shift-z/x=q,z=-q,rho=3", 100, |t| {
        check_z_shift(&QPower::qi(1), &QPower::neg_qi(1), &rint(3), t)
    });
    cat.add("appell/inversion/x=q^2,z=-q,rho=3", 100, |t| {
        check_inversion(&QPower::qi(2), &QPower::neg_qi(1), &rint(3), t)
    });
    cat.add("appell/shift-x/x=q,z=-q^2,rho=2", 100, |t| {
        check_x_shift(&QPower::qi(1), &QPower::neg_qi(2), &rint(2), t)
    });
    for m in -2i64..=4 {
        cat.add(format!("appell/unwind/m={m}"), 100, move |t| {
            check_appell_unwind(m, t)
        });
    }
    cat.add("appell/mu-appell-theta", 100, |t| {
        compare_with_padding(t, |tw| {
            let lhs = mu_eulerian(tw)?;
            let rhs = appell_m(&QPower::neg_qi(1), &QPower::minus_one(), &rint(4), tw)?
                .times_rat(&rint(4))
                .checked_sub(&mu_theta_correction(tw)?)?;
            Ok((lhs, rhs))
        })
    });
    cat.add("appell/cap-a-appell", 100, |t| {
        compare_with_padding(t, |tw| {
            let lhs = cap_a_eulerian(tw)?;
            let rhs = appell_m(&QPower::qi(1), &QPower::qi(2), &rint(4), tw)?.negated();
            Ok((lhs, rhs))
        })
    });
    cat.add("appell/mu-a-euler", 100, |t| {
        compare_with_padding(t, |tw| {
            let a_neg = cap_a_eulerian(tw)?.substituted(Sign::Minus, &rint(1))?;
            let lhs = mu_eulerian(tw)?.checked_add(&a_neg.times_rat(&rint(4)))?;
            let rhs = j_a(1, tw)?
                .powi(5)?
                .checked_mul(&j_a(2, tw)?.powi(4)?.inverted()?)?;
            Ok((lhs, rhs))
        })
    });
    cat.add("appell/mock-theta-conjecture-f0", 100, |t| {
        compare_with_padding(t, |tw| {
            let lhs = f0_eulerian(tw)?;
            let mut tail = PuiseuxSeries::zero(crate::series::Order::UpTo(tw.clone()));
            let mut n = 0i64;
            while &rint(10 * n * n) <= tw {
                let den = pochhammer(&QPower::qi(2), &rint(10), n + 1)?
                    .checked_mul(&pochhammer(&QPower::qi(8), &rint(10), n)?)?;
                let term = den.truncated(tw).inverted()?.mul_monomial(&Rat::one(), &rint(10 * n * n))?;
                tail = tail.checked_add(&term)?;
                n += 1;
            }
            let quot = j_a(5, tw)?
                .checked_mul(&j_ab(5, 10, tw)?)?
                .checked_mul(&j_ab(1, 5, tw)?.inverted()?)?;
            let rhs = PuiseuxSeries::constant(rint(2))
                .checked_sub(&tail.times_rat(&rint(2)))?
                .checked_add(&quot)?;
            Ok((lhs, rhs))
        })
    });
    let msplits = [
        (
            "n=2/x=q^2,z=-q,zp=-q^4,rho=1",
            QPower::qi(2),
            QPower::neg_qi(1),
            QPower::neg_qi(4),
            rint(1),
            2i64,
        ),
        (
            "n=2/x=q^3,z=-1,zp=-1,rho=1",
            QPower::qi(3),
            QPower::minus_one(),
            QPower::minus_one(),
            rint(1),
            2,
        ),
        (
            "n=3/x=q,z=-q^2,zp=-q,rho=2",
            QPower::qi(1),
            QPower::neg_qi(2),
            QPower::neg_qi(1),
            rint(2),
            3,
        ),
    ];
    for (tag, x, z, zp, rho, n) in msplits {
        cat.add(format!("appell/modulus-split/{tag}"), 100, move |t| {
            check_msplit_general(&x, &z, &zp, &rho, n, t)
        });
    }
    cat.add("appell/modulus-split/n=2-corollary", 100, |t| {
        check_msplit_two_corollary(t)
    });
    for m in [0i64, 1, -1, 2] {
        cat.add(format!("appell/modulus-split/n=10/m={m}"), 100, move |t| {
            check_psi_relation(m, t)
        });
    }
}

fn decomp_cases(cat: &mut Catalogue) {
    let positive = vec![
        (
            1,
            2,
            1,
            vec![
                (QPower::qi(1), QPower::qi(1)),
                (QPower::qi(3), QPower::qi(2)),
                (QPower::q(rat(1, 2)), QPower::qi(1)),
                (QPower::qi(1), QPower::qi(4)),
                (QPower::qi(2), QPower::qi(2)),
            ],
        ),
        (
            2,
            3,
            4,
            vec![
                (QPower::qi(1), QPower::qi(1)),
                (QPower::qi(1), QPower::qi(3)),
                (QPower::qi(2), QPower::qi(1)),
                (QPower::q(rat(3, 2)), QPower::qi(1)),
                (QPower::qi(1), QPower::qi(2)),
            ],
        ),
        (
            1,
            5,
            20,
            vec![
                (QPower::qi(1), QPower::qi(1)),
                (QPower::qi(1), QPower::qi(2)),
                (QPower::qi(2), QPower::qi(1)),
                (QPower::qi(1), QPower::qi(3)),
                (QPower::qi(3), QPower::qi(4)),
            ],
        ),
        (
            1,
            4,
            8,
            vec![
                (QPower::qi(1), QPower::qi(2)),
                (QPower::qi(3), QPower::qi(2)),
                (QPower::qi(1), QPower::qi(4)),
                (QPower::qi(5), QPower::qi(2)),
                (QPower::qi(1), QPower::qi(6)),
            ],
        ),
    ];
    for (a, b, c, pairs) in positive {
        for (x, y) in pairs {
            cat.add(
                format!("decomp/positive-discriminant/a={a},b={b},c={c}/x={x},y={y}"),
                60,
                move |t| {
                    let params = HeckeParams::new(a, b, c)?;
                    check_positive_disc(&params, &x, &y, t)
                },
            );
        }
    }
    let negative = vec![
        (
            1,
            3,
            12,
            vec![
                (QPower::qi(1), QPower::qi(1)),
                (QPower::qi(1), QPower::neg_qi(2)),
                (QPower::q(rat(1, 2)), QPower::qi(1)),
                (QPower::qi(2), QPower::qi(1)),
                (QPower::qi(3), QPower::qi(2)),
            ],
        ),
        (
            1,
            4,
            24,
            vec![
                (QPower::qi(1), QPower::qi(1)),
                (QPower::qi(3), QPower::qi(1)),
                (QPower::qi(1), QPower::neg_qi(1)),
                (QPower::qi(1), QPower::qi(5)),
                (QPower::q(rat(1, 2)), QPower::qi(1)),
            ],
        ),
        (
            2,
            3,
            5,
            vec![
                (QPower::qi(1), QPower::qi(1)),
                (QPower::qi(1), QPower::qi(2)),
                (QPower::neg_qi(1), QPower::qi(1)),
                (QPower::qi(2), QPower::qi(3)),
                (QPower::qi(1), QPower::q(rat(1, 2))),
            ],
        ),
        (
            1,
            2,
            5,
            vec![
                (QPower::qi(1), QPower::qi(1)),
                (QPower::qi(2), QPower::qi(3)),
                (QPower::qi(1), QPower::neg_qi(4)),
                (QPower::q(rat(1, 2)), QPower::q(rat(1, 2))),
                (QPower::qi(3), QPower::qi(1)),
            ],
        ),
    ];
    for (a, b, c, pairs) in negative {
        for (x, y) in pairs {
            cat.add(
                format!("decomp/negative-discriminant/a={a},b={b},c={c}/x={x},y={y}"),
                60,
                move |t| {
                    let params = HeckeParams::new(a, b, c)?;
                    check_negative_disc(&params, &x, &y, t)
                },
            );
        }
    }
    for which in [1u8, 2] {
        cat.add(
            format!("theta-quotients/evaluation/{which}"),
            100,
            move |t| check_theta_quotient_identity(which, t),
        );
        cat.add(
            format!("theta-quotients/eta-bridge/{which}"),
            100,
            move |t| check_eta_theta_bridge(which, t),
        );
    }
}

fn selftest_cases(cat: &mut Catalogue) {
    cat.add("_selftest/fail", 10, |t| {
        let one = PuiseuxSeries::one();
        let shifted = one.checked_add(&PuiseuxSeries::q_power(rint(1))?)?;
        one.truncated(t).eq_to_order(&shifted, t)
    });
}

fn catalogue() -> Vec<Case> {
    let mut cat = Catalogue(Vec::new());
    theta_cases(&mut cat);
    hecke_cases(&mut cat);
    string_cases(&mut cat);
    appell_cases(&mut cat);
    decomp_cases(&mut cat);
    selftest_cases(&mut cat);
    cat.0
}

/// Names of every catalogued case, in catalogue order.
pub fn case_names() -> Vec<String> {
    catalogue().into_iter().map(|c| c.name).collect()
}

fn execute(case: &Case, order: &Rat) -> CaseReport {
    let start = Instant::now();
    let outcome = (case.run)(order);
    let millis = start.elapsed().as_millis() as u64;
    match outcome {
        Ok(m) => CaseReport {
            name: case.name.clone(),
            order: order.to_string(),
            passed: m.is_equal(),
            detail: if m.is_equal() {
                None
            } else {
                Some(m.to_string())
            },
            millis,
        },
        Err(e) => CaseReport {
            name: case.name.clone(),
            order: order.to_string(),
            passed: false,
            detail: Some(format!("error: {e}")),
            millis,
        },
    }
}

/// Run a single case by exact name, optionally overriding its order.
pub fn run_case(name: &str, order: Option<&Rat>) -> Result<CaseReport> {
    let cat = catalogue();
    let case = cat
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownCase {
            pattern: name.to_string(),
        })?;
    Ok(execute(case, order.unwrap_or(&case.order)))
}

/// Run every case whose name contains `filter` (all non-diagnostic cases if
/// `filter` is `None`), in parallel, optionally overriding every order.
pub fn run_suite(filter: Option<&str>, order: Option<&Rat>) -> Result<SuiteReport> {
    let cat = catalogue();
    let selected: Vec<&Case> = cat
        .iter()
        .filter(|c| match filter {
            Some(f) => c.name.contains(f),
            None => !c.name.starts_with('_'),
        })
        .collect();
    if selected.is_empty() {
        return Err(Error::UnknownCase {
            pattern: filter.unwrap_or("<all>").to_string(),
        });
    }
    let mut cases: Vec<CaseReport> = selected
        .par_iter()
        .map(|c| execute(c, order.unwrap_or(&c.order)))
        .collect();
    cases.sort_by(|a, b| a.name.cmp(&b.name));
    let passed = cases.iter().filter(|c| c.passed).count();
    Ok(SuiteReport {
        total: cases.len(),
        passed,
        failed: cases.len() - passed,
        cases,
    })
}

/// One hit from [`kp_scan`]: the string-function label, the optional second
/// label subtracted from the first, the argument rescaling exponent, and the
/// power of `q` multiplying the string function.
#[derive(Clone, Debug, Serialize)]
pub struct KpMatch {
    pub m: i64,
    pub ell: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partner: Option<(i64, i64)>,
    pub sigma: String,
    pub shift: String,
}

/// Scan level-`level` string functions against a target eta quotient.
///
/// The target is the product of `eta(k tau)^e` over the `(k, e)` factors. For
/// every admissible label `(m, ell)` (or difference of two labels when
/// `difference` is set) and every rescaling `sigma` in `{1/2, 1, 2}`, the
/// scan reports the labels for which some shift `q^delta` times the rescaled
/// string function matches the target through order `t`.
pub fn kp_scan(
    level: i64,
    factors: &[(i64, i32)],
    difference: bool,
    t: &Rat,
) -> Result<Vec<KpMatch>> {
    if level < 1 {
        return Err(Error::InvalidParameter(format!(
            "scan level must be a positive integer, got {level}"
        )));
    }
    let target = build_to_order(t, |tw| eta_quotient(factors, tw))?;
    let target_val = target.val().ok_or_else(|| {
        Error::InvalidParameter("scan target vanishes to the working order".into())
    })?;
    let sigmas = [rat(1, 2), rint(1), rint(2)];
    let pp = level + 2;
    let mut labels = Vec::new();
    for ell in 0..=level {
        for m in 0..=level {
            if (m - ell) % 2 == 0 {
                labels.push((m, ell));
            }
        }
    }
    // Try to match `q^delta * series(q^sigma)` against the target, choosing
    // the working order so the candidate is known through order `t`.
    let try_match = |build: &dyn Fn(&Rat) -> Result<PuiseuxSeries>,
                     sigma: &Rat|
     -> Result<Option<Rat>> {
        let mut base_order = t / sigma + rint(4);
        for _ in 0..4 {
            let scaled = build(&base_order)?.substituted(Sign::Plus, sigma)?;
            let v = match scaled.val() {
                Some(v) => v,
                None => return Ok(None),
            };
            let delta = &target_val - &v;
            if &(sigma * &base_order + &delta) < t {
                base_order = (t - &delta) / sigma + rint(1);
                continue;
            }
            let candidate = scaled.mul_monomial(&Rat::one(), &delta)?;
            return Ok(if candidate.eq_to_order(&target, t)?.is_equal() {
                Some(delta)
            } else {
                None
            });
        }
        Ok(None)
    };
    let mut out = Vec::new();
    if !difference {
        for &(m, ell) in &labels {
            let spec = StringSpec::new(1, pp, ell, m)?;
            for sigma in &sigmas {
                let build = |o: &Rat| string_c(&spec, o);
                if let Some(delta) = try_match(&build, sigma)? {
                    out.push(KpMatch {
                        m,
                        ell,
                        partner: None,
                        sigma: sigma.to_string(),
                        shift: delta.to_string(),
                    });
                }
            }
        }
    } else {
        for i in 0..labels.len() {
            for j in (i + 1)..labels.len() {
                let (m1, ell1) = labels[i];
                let (m2, ell2) = labels[j];
                let first = StringSpec::new(1, pp, ell1, m1)?;
                let second = StringSpec::new(1, pp, ell2, m2)?;
                for sigma in &sigmas {
                    let build = |o: &Rat| {
                        string_c(&first, o)?.checked_sub(&string_c(&second, o)?)
                    };
                    if let Some(delta) = try_match(&build, sigma)? {
                        out.push(KpMatch {
                            m: m1,
                            ell: ell1,
                            partner: Some((m2, ell2)),
                            sigma: sigma.to_string(),
                            shift: delta.to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

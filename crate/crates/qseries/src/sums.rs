//! Enumerators for lattice sums whose exponents are convex in each index.
//!
//! Every bilateral or double sum in this crate has a q-exponent that is a
//! positive-definite quadratic (plus linear terms) on the summation region,
//! so along each index the exponent descends to a vertex and then rises.
//! The scans below exploit exactly that: they walk until the exponent both
//! exceeds the target order and has started rising, which bounds the region
//! touching the truncated series.

use crate::Rat;

/// Collect `(exponent, coefficient)` over all integers `n`.
///
/// `term` must have an exponent convex in `n`. Terms beyond `t` are skipped.
pub(crate) fn bilateral<F>(t: &Rat, mut term: F) -> Vec<(Rat, Rat)>
where
    F: FnMut(i64) -> (Rat, Rat),
{
    let mut out = Vec::new();
    for dir in [1i64, -1] {
        let mut n = if dir == 1 { 0 } else { -1 };
        let mut prev: Option<Rat> = None;
        loop {
            let (e, c) = term(n);
            let rising = prev.as_ref().map_or(false, |p| &e >= p);
            if &e > t && rising {
                break;
            }
            if &e <= t && !num_traits::Zero::is_zero(&c) {
                out.push((e.clone(), c));
            }
            prev = Some(e);
            n += dir;
            assert!(n.abs() < 1_000_000, "bilateral scan failed to localise; exponent not convex?");
        }
    }
    out
}

/// Collect `(exponent, coefficient)` over the quadrant `u, v >= 0`.
///
/// `term` must have an exponent convex in each index separately, with the
/// row minimum convex in the row index; both hold for positive-definite
/// quadratics with non-negative cross terms.
pub(crate) fn quadrant<F>(t: &Rat, mut term: F) -> Vec<(Rat, Rat)>
where
    F: FnMut(i64, i64) -> (Rat, Rat),
{
    let mut out = Vec::new();
    let mut prev_min: Option<Rat> = None;
    let mut u = 0i64;
    loop {
        let mut row_min: Option<Rat> = None;
        let mut vprev: Option<Rat> = None;
        let mut v = 0i64;
        loop {
            let (e, c) = term(u, v);
            row_min = Some(match row_min.take() {
                Some(m) if m <= e => m,
                _ => e.clone(),
            });
            let rising = vprev.as_ref().map_or(false, |p| &e >= p);
            if &e > t && rising {
                break;
            }
            if &e <= t && !num_traits::Zero::is_zero(&c) {
                out.push((e.clone(), c));
            }
            vprev = Some(e);
            v += 1;
            assert!(v < 1_000_000, "quadrant scan failed to localise a row");
        }
        let m = row_min.expect("each row probes at least one term");
        let outer_rising = prev_min.as_ref().map_or(false, |p| &m >= p);
        if &m > t && outer_rising {
            break;
        }
        prev_min = Some(m);
        u += 1;
        assert!(u < 1_000_000, "quadrant scan failed to localise");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rint};

    #[test]
    fn bilateral_covers_both_directions() {
        // exponent n^2, coefficient 1: all |n| with n^2 <= 10.
        let got = bilateral(&rint(10), |n| (rint(n * n), rint(1)));
        let mut exps: Vec<Rat> = got.into_iter().map(|(e, _)| e).collect();
        exps.sort();
        assert_eq!(exps, vec![rint(0), rint(1), rint(1), rint(4), rint(4), rint(9), rint(9)]);
    }

    #[test]
    fn bilateral_handles_shifted_vertex() {
        // exponent (n - 5)^2 / 3: vertex away from the origin.
        let got = bilateral(&rat(4, 3), |n| (rat((n - 5) * (n - 5), 3), rint(1)));
        assert_eq!(got.len(), 5, "n in 3..=7 satisfies (n-5)^2 <= 4");
    }

    #[test]
    fn quadrant_matches_brute_force() {
        // exponent u(u+1)/2 + 2uv + 3v(v+1)/2 - v: convex with cross term.
        let e = |u: i64, v: i64| rint(u * (u + 1) / 2 + 2 * u * v + 3 * v * (v + 1) / 2 - v);
        let t = rint(40);
        let got = quadrant(&t, |u, v| (e(u, v), rint(1)));
        let mut brute = 0usize;
        for u in 0..200 {
            for v in 0..200 {
                if e(u, v) <= rint(40) {
                    brute += 1;
                }
            }
        }
        assert_eq!(got.len(), brute);
    }
}

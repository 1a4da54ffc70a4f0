//! Signed rational powers of `q`.
//!
//! The symbolic layers only ever substitute arguments of the shape
//! `x = +q^e` or `x = -q^e` with rational `e` into theta and Appell sums.
//! [`QPower`] captures exactly that shape, so argument algebra (products,
//! inverses, integer powers, extra factors of `q^t`) stays exact and
//! sign bookkeeping stays explicit.

use crate::series::PuiseuxSeries;
use crate::{rint, Rat, Result};
use num_traits::{One, Zero};
use std::fmt;

/// Sign of a q-power argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Product of two signs.
    pub fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Sign raised to an integer power.
    pub fn pow(self, n: i64) -> Sign {
        if self == Sign::Plus || n % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// The opposite sign.
    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `+1` or `-1` as a rational.
    pub fn to_rat(self) -> Rat {
        match self {
            Sign::Plus => Rat::one(),
            Sign::Minus => -Rat::one(),
        }
    }
}

/// A monomial argument `sign * q^exponent` with rational exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPower {
    sign: Sign,
    exponent: Rat,
}

impl QPower {
    /// `sign * q^exponent`.
    pub fn new(sign: Sign, exponent: Rat) -> Self {
        QPower { sign, exponent }
    }

    /// `+q^exponent`.
    pub fn q(exponent: Rat) -> Self {
        QPower::new(Sign::Plus, exponent)
    }

    /// `-q^exponent`.
    pub fn neg_q(exponent: Rat) -> Self {
        QPower::new(Sign::Minus, exponent)
    }

    /// `+q^n` for a machine integer `n`.
    pub fn qi(n: i64) -> Self {
        QPower::q(rint(n))
    }

    /// `-q^n` for a machine integer `n`.
    pub fn neg_qi(n: i64) -> Self {
        QPower::neg_q(rint(n))
    }

    /// The constant `+1`.
    pub fn one() -> Self {
        QPower::q(Rat::zero())
    }

    /// The constant `-1`.
    pub fn minus_one() -> Self {
        QPower::neg_q(Rat::zero())
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn exponent(&self) -> &Rat {
        &self.exponent
    }

    /// True for `+q^0`.
    pub fn is_one(&self) -> bool {
        self.sign == Sign::Plus && self.exponent.is_zero()
    }

    /// Product of two arguments.
    pub fn mul(&self, other: &QPower) -> QPower {
        QPower::new(self.sign.mul(other.sign), &self.exponent + &other.exponent)
    }

    /// Multiply by an extra factor `q^t`.
    pub fn shift(&self, t: &Rat) -> QPower {
        QPower::new(self.sign, &self.exponent + t)
    }

    /// The reciprocal argument `x^{-1}`.
    pub fn invert(&self) -> QPower {
        QPower::new(self.sign, -&self.exponent)
    }

    /// The negated argument `-x`.
    pub fn negate(&self) -> QPower {
        QPower::new(self.sign.negate(), self.exponent.clone())
    }

    /// Integer power `x^n` (negative `n` allowed).
    pub fn pow(&self, n: i64) -> QPower {
        QPower::new(self.sign.pow(n), &self.exponent * rint(n))
    }

    /// The coefficient contribution `sign^k` of `x^k` as a rational.
    pub fn sign_pow(&self, k: i64) -> Rat {
        self.sign.pow(k).to_rat()
    }

    /// Exponent contribution of `x^k`, namely `k * exponent`.
    pub fn exponent_times(&self, k: i64) -> Rat {
        &self.exponent * rint(k)
    }

    /// The argument as an exact one-term series.
    pub fn to_series(&self) -> Result<PuiseuxSeries> {
        PuiseuxSeries::monomial(self.sign.to_rat(), self.exponent.clone())
    }
}

impl fmt::Display for QPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.sign {
            Sign::Plus => "",
            Sign::Minus => "-",
        };
        if self.exponent.is_zero() {
            write!(f, "{}1", sign)
        } else if self.exponent.is_one() {
            write!(f, "{}q", sign)
        } else {
            write!(f, "{}q^({})", sign, self.exponent)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn sign_algebra_matches_rational_signs() {
        assert_eq!(Sign::Minus.mul(Sign::Minus), Sign::Plus);
        assert_eq!(Sign::Minus.pow(3), Sign::Minus);
        assert_eq!(Sign::Minus.pow(-2), Sign::Plus);
        assert_eq!(Sign::Minus.pow(-3), Sign::Minus);
        assert_eq!(Sign::Plus.pow(5), Sign::Plus);
    }

    #[test]
    fn product_and_power_compose_exponents() {
        let x = QPower::neg_q(rat(3, 2));
        let y = QPower::q(rat(1, 2));
        assert_eq!(x.mul(&y), QPower::neg_q(rat(2, 1)));
        assert_eq!(x.pow(2), QPower::q(rat(3, 1)));
        assert_eq!(x.pow(-3), QPower::neg_q(rat(-9, 2)));
        assert_eq!(x.invert().mul(&x), QPower::one().negate().negate());
    }

    #[test]
    fn display_is_compact() {
        assert_eq!(QPower::minus_one().to_string(), "-1");
        assert_eq!(QPower::qi(1).to_string(), "q");
        assert_eq!(QPower::neg_q(rat(5, 4)).to_string(), "-q^(5/4)");
    }
}

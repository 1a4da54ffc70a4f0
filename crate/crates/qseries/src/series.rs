//! Exact truncated Laurent-Puiseux series in `q`.
//!
//! A [`PuiseuxSeries`] stores finitely many exact rational coefficients on
//! the grid `q^(k/scale)` together with an [`Order`]: either the series is
//! exact (a Laurent polynomial in `q^(1/scale)`) or its coefficients are
//! known for every exponent up to and including a rational bound.
//!
//! Invariants kept by every operation:
//!
//! - no zero coefficients are stored, and no stored exponent exceeds the
//!   truncation bound;
//! - sums are known up to the smaller of the two bounds;
//! - products are known up to `min(Ta + val(b), Tb + val(a))`, where `val`
//!   is the least stored exponent (for a termless truncated series, its
//!   bound stands in for `val`);
//! - inverting a series with valuation `v` known up to `T` yields a series
//!   known up to `T - 2v`;
//! - exponent grids never renormalise silently: when a combination of
//!   series needs a common denominator above [`SCALE_CAP`], checked entry
//!   points report [`Error::ScaleCapExceeded`] and the operator sugar on
//!   references panics with the same message.

use crate::{Error, Rat, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// Largest supported common denominator of the exponent grid.
pub const SCALE_CAP: i64 = 12_000;

/// Truncation state of a series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    /// The stored terms are the whole series (a Laurent polynomial).
    Exact,
    /// Coefficients are known exactly for every exponent `e <= bound`.
    UpTo(Rat),
}

impl Order {
    /// Truncation at an integer exponent.
    pub fn up_to(n: i64) -> Order {
        Order::UpTo(crate::rint(n))
    }

    /// The finite bound, if any.
    pub fn bound(&self) -> Option<&Rat> {
        match self {
            Order::Exact => None,
            Order::UpTo(t) => Some(t),
        }
    }

    /// Whether information at exponent `e` is available.
    pub fn allows(&self, e: &Rat) -> bool {
        match self {
            Order::Exact => true,
            Order::UpTo(t) => e <= t,
        }
    }

    /// The weaker of two truncation states.
    pub fn min_with(&self, other: &Order) -> Order {
        match (self, other) {
            (Order::Exact, o) => o.clone(),
            (o, Order::Exact) => o.clone(),
            (Order::UpTo(a), Order::UpTo(b)) => Order::UpTo(if a <= b { a.clone() } else { b.clone() }),
        }
    }

    /// Bound shifted by `d` (exactness is preserved).
    pub fn shifted(&self, d: &Rat) -> Order {
        match self {
            Order::Exact => Order::Exact,
            Order::UpTo(t) => Order::UpTo(t + d),
        }
    }

    /// Bound multiplied by a positive factor (exactness is preserved).
    pub fn scaled(&self, f: &Rat) -> Order {
        match self {
            Order::Exact => Order::Exact,
            Order::UpTo(t) => Order::UpTo(t * f),
        }
    }
}

/// Outcome of comparing two series up to an order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Match {
    /// All coefficients agree up to the requested order.
    Equal,
    /// First disagreeing exponent, with both coefficients.
    Mismatch { exponent: Rat, lhs: Rat, rhs: Rat },
}

impl Match {
    pub fn is_equal(&self) -> bool {
        matches!(self, Match::Equal)
    }
}

impl fmt::Display for Match {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Match::Equal => write!(f, "equal"),
            Match::Mismatch { exponent, lhs, rhs } => {
                write!(f, "mismatch at q^({}): {} vs {}", exponent, lhs, rhs)
            }
        }
    }
}

/// A truncated Laurent-Puiseux series with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxSeries {
    scale: i64,
    terms: BTreeMap<i64, Rat>,
    order: Order,
}

fn lcm_scale(a: i64, b: i64) -> Result<i64> {
    let l = a.lcm(&b);
    if l > SCALE_CAP {
        return Err(Error::ScaleCapExceeded { needed: BigInt::from(l), cap: SCALE_CAP });
    }
    Ok(l)
}

fn scale_of_denominator(d: &BigInt) -> Result<i64> {
    match d.to_i64() {
        Some(v) if v <= SCALE_CAP => Ok(v),
        _ => Err(Error::ScaleCapExceeded { needed: d.clone(), cap: SCALE_CAP }),
    }
}

/// Largest integer `k` with `k / scale <= t`.
fn floor_key(t: &Rat, scale: i64) -> i64 {
    let x = t * crate::rint(scale);
    x.floor().to_integer().to_i64().unwrap_or(i64::MAX / 4)
}

impl PuiseuxSeries {
    // ---- construction ----

    /// The zero series, known up to the given order.
    pub fn zero(order: Order) -> Self {
        PuiseuxSeries { scale: 1, terms: BTreeMap::new(), order }
    }

    /// The zero series as an exact object.
    pub fn zero_exact() -> Self {
        Self::zero(Order::Exact)
    }

    /// The constant series `1`, exact.
    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    /// A constant series, exact.
    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        PuiseuxSeries { scale: 1, terms, order: Order::Exact }
    }

    /// The exact monomial `coeff * q^exp`.
    pub fn monomial(coeff: Rat, exp: Rat) -> Result<Self> {
        if coeff.is_zero() {
            return Ok(Self::zero_exact());
        }
        let scale = scale_of_denominator(exp.denom())?;
        let key = (exp * crate::rint(scale)).to_integer().to_i64().ok_or_else(|| {
            Error::InvalidParameter("monomial exponent is out of the representable range".into())
        })?;
        let mut terms = BTreeMap::new();
        terms.insert(key, coeff);
        Ok(PuiseuxSeries { scale, terms, order: Order::Exact })
    }

    /// The exact monomial `q^exp`.
    pub fn q_power(exp: Rat) -> Result<Self> {
        Self::monomial(Rat::one(), exp)
    }

    /// Build a series from `(exponent, coefficient)` pairs.
    ///
    /// Zero coefficients and terms beyond the order are dropped; repeated
    /// exponents are summed.
    pub fn from_terms<I>(pairs: I, order: Order) -> Result<Self>
    where
        I: IntoIterator<Item = (Rat, Rat)>,
    {
        let pairs: Vec<(Rat, Rat)> = pairs.into_iter().collect();
        let mut scale: i64 = 1;
        for (e, _) in &pairs {
            scale = lcm_scale(scale, scale_of_denominator(e.denom())?)?;
        }
        let mut terms: BTreeMap<i64, Rat> = BTreeMap::new();
        for (e, c) in pairs {
            if c.is_zero() || !order.allows(&e) {
                continue;
            }
            let key = (e * crate::rint(scale)).to_integer().to_i64().ok_or_else(|| {
                Error::InvalidParameter("series exponent is out of the representable range".into())
            })?;
            let slot = terms.entry(key).or_insert_with(Rat::zero);
            *slot += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(PuiseuxSeries { scale, terms, order }.normalized())
    }

    // ---- accessors ----

    /// Common denominator of the exponent grid.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// Truncation state.
    pub fn order(&self) -> &Order {
        &self.order
    }

    /// Number of stored (nonzero) terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// True when no nonzero coefficient is stored.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least stored exponent, if any term is present.
    pub fn val(&self) -> Option<Rat> {
        self.terms.keys().next().map(|k| crate::rat(*k, self.scale))
    }

    /// Iterate over `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (Rat, &Rat)> + '_ {
        self.terms.iter().map(move |(k, c)| (crate::rat(*k, self.scale), c))
    }

    /// Coefficient of `q^e`.
    ///
    /// Exponents beyond the truncation bound are unknown and reported as
    /// [`Error::OrderExceeded`]; exponents off the stored grid are zero.
    pub fn coeff(&self, e: &Rat) -> Result<Rat> {
        if !self.order.allows(e) {
            return Err(Error::OrderExceeded {
                requested: e.clone(),
                known: self.order.bound().cloned().unwrap_or_else(Rat::zero),
            });
        }
        let scaled = e * crate::rint(self.scale);
        if !scaled.is_integer() {
            return Ok(Rat::zero());
        }
        match scaled.to_integer().to_i64() {
            Some(k) => Ok(self.terms.get(&k).cloned().unwrap_or_else(Rat::zero)),
            None => Ok(Rat::zero()),
        }
    }

    /// Coefficient of `q^n` for a machine integer exponent.
    pub fn coeff_int(&self, n: i64) -> Result<Rat> {
        self.coeff(&crate::rint(n))
    }

    // ---- normalisation ----

    fn normalized(mut self) -> Self {
        if self.terms.is_empty() {
            self.scale = 1;
            return self;
        }
        let mut g: i64 = self.scale;
        for k in self.terms.keys() {
            g = g.gcd(k);
            if g == 1 {
                return self;
            }
        }
        if g > 1 {
            self.terms = self.terms.iter().map(|(k, c)| (k / g, c.clone())).collect();
            self.scale /= g;
        }
        self
    }

    fn rebased(&self, new_scale: i64) -> BTreeMap<i64, Rat> {
        debug_assert!(new_scale % self.scale == 0);
        let f = new_scale / self.scale;
        self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect()
    }

    /// Valuation used by the product order rule: least stored exponent, or
    /// the truncation bound when no term is stored, or `None` for the exact
    /// zero series.
    fn val_for_order(&self) -> Option<Rat> {
        match self.val() {
            Some(v) => Some(v),
            None => self.order.bound().cloned(),
        }
    }

    // ---- arithmetic ----

    /// Sum, with the weaker of the two truncation states.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let scale = lcm_scale(self.scale, other.scale)?;
        let order = self.order.min_with(&other.order);
        let mut terms = self.rebased(scale);
        for (k, c) in other.rebased(scale) {
            let slot = terms.entry(k).or_insert_with(Rat::zero);
            *slot += c;
        }
        if let Some(t) = order.bound() {
            let kmax = floor_key(t, scale);
            terms.retain(|k, _| *k <= kmax);
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(PuiseuxSeries { scale, terms, order }.normalized())
    }

    /// Product, with the order rule described in the module docs.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if (self.is_zero() && self.order == Order::Exact)
            || (other.is_zero() && other.order == Order::Exact)
        {
            return Ok(Self::zero_exact());
        }
        let scale = lcm_scale(self.scale, other.scale)?;
        let order = match (&self.order, &other.order) {
            (Order::Exact, Order::Exact) => Order::Exact,
            _ => {
                let mut best: Option<Rat> = None;
                if let Some(ta) = self.order.bound() {
                    // other.val_for_order() is Some: the exact zero case was
                    // handled above.
                    let cand = ta + other.val_for_order().expect("nonzero factor");
                    best = Some(cand);
                }
                if let Some(tb) = other.order.bound() {
                    let cand = tb + self.val_for_order().expect("nonzero factor");
                    best = Some(match best {
                        Some(b) if b <= cand => b,
                        _ => cand,
                    });
                }
                Order::UpTo(best.expect("at least one factor is truncated"))
            }
        };
        let a = self.rebased(scale);
        let b = other.rebased(scale);
        let (small, big) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
        let kmax = order.bound().map(|t| floor_key(t, scale));
        let mut terms: BTreeMap<i64, Rat> = BTreeMap::new();
        for (k1, c1) in small {
            for (k2, c2) in big {
                let k = k1 + k2;
                if let Some(m) = kmax {
                    if k > m {
                        break;
                    }
                }
                let slot = terms.entry(k).or_insert_with(Rat::zero);
                *slot += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(PuiseuxSeries { scale, terms, order }.normalized())
    }

    /// Difference, with the weaker of the two truncation states.
    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.clone().negated())
    }

    /// The series with every coefficient negated.
    pub fn negated(mut self) -> Self {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }

    /// Multiply every coefficient by a rational scalar.
    ///
    /// Multiplying by zero gives the exact zero series.
    pub fn times_rat(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero_exact();
        }
        let terms = self.terms.iter().map(|(k, v)| (*k, v * c)).collect();
        PuiseuxSeries { scale: self.scale, terms, order: self.order.clone() }
    }

    /// Divide every coefficient by a nonzero rational scalar.
    pub fn div_rat(&self, c: &Rat) -> Self {
        assert!(!c.is_zero(), "division of a series by the zero scalar");
        self.times_rat(&c.recip())
    }

    /// Multiply by the monomial `coeff * q^exp`.
    pub fn mul_monomial(&self, coeff: &Rat, exp: &Rat) -> Result<Self> {
        if coeff.is_zero() {
            return Ok(Self::zero_exact());
        }
        let scale = lcm_scale(self.scale, scale_of_denominator(exp.denom())?)?;
        let shift = (exp * crate::rint(scale)).to_integer().to_i64().ok_or_else(|| {
            Error::InvalidParameter("monomial exponent is out of the representable range".into())
        })?;
        let terms = self
            .rebased(scale)
            .into_iter()
            .map(|(k, c)| (k + shift, c * coeff))
            .collect();
        Ok(PuiseuxSeries { scale, terms, order: self.order.shifted(exp) }.normalized())
    }

    /// Restrict knowledge to exponents `<= t`, dropping later terms.
    pub fn truncated(&self, t: &Rat) -> Self {
        let order = self.order.min_with(&Order::UpTo(t.clone()));
        let kmax = floor_key(order.bound().expect("finite order"), self.scale);
        let terms = self.terms.iter().filter(|(k, _)| **k <= kmax).map(|(k, c)| (*k, c.clone())).collect();
        PuiseuxSeries { scale: self.scale, terms, order }.normalized()
    }

    /// Multiplicative inverse.
    ///
    /// An exact monomial inverts exactly. An exact series with several terms
    /// has an infinite inverse, so the caller must truncate first. A
    /// truncated series must have at least one stored term; the result is
    /// known up to `T - 2 val`.
    pub fn inverted(&self) -> Result<Self> {
        match &self.order {
            Order::Exact => {
                if self.terms.is_empty() {
                    return Err(Error::ZeroLeadingTerm);
                }
                if self.terms.len() > 1 {
                    return Err(Error::InvalidParameter(
                        "inverse of an exact series with several terms is an infinite series; truncate first".into(),
                    ));
                }
                let (k, c) = self.terms.iter().next().expect("one term");
                let mut terms = BTreeMap::new();
                terms.insert(-k, c.recip());
                Ok(PuiseuxSeries { scale: self.scale, terms, order: Order::Exact }.normalized())
            }
            Order::UpTo(t) => {
                if self.terms.is_empty() {
                    return Err(Error::ZeroLeadingTerm);
                }
                let (v_key, c0) = {
                    let (k, c) = self.terms.iter().next().expect("leading term");
                    (*k, c.clone())
                };
                let v = crate::rat(v_key, self.scale);
                // Relative budget in grid steps.
                let m = floor_key(&(t - &v), self.scale);
                debug_assert!(m >= 0);
                if m > 20_000_000 {
                    return Err(Error::InvalidParameter(
                        "inverse would need an unreasonably fine dense workspace".into(),
                    ));
                }
                let reduced: Vec<(i64, Rat)> = self
                    .terms
                    .iter()
                    .skip(1)
                    .map(|(k, c)| (k - v_key, c / &c0))
                    .collect();
                let mut w: Vec<Rat> = vec![Rat::zero(); (m + 1) as usize];
                w[0] = Rat::one();
                for t_idx in 1..=m {
                    let mut s = Rat::zero();
                    for (d, u) in &reduced {
                        if *d > t_idx {
                            break;
                        }
                        let prev = &w[(t_idx - d) as usize];
                        if !prev.is_zero() {
                            s += u * prev;
                        }
                    }
                    w[t_idx as usize] = -s;
                }
                let mut terms = BTreeMap::new();
                for (t_idx, val) in w.into_iter().enumerate() {
                    if !val.is_zero() {
                        terms.insert(-v_key + t_idx as i64, val / &c0);
                    }
                }
                let order = Order::UpTo(t - &v - &v);
                Ok(PuiseuxSeries { scale: self.scale, terms, order }.normalized())
            }
        }
    }

    /// Integer power, with negative exponents routed through [`Self::inverted`].
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inverted()?.powi(-n);
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Substitute `q -> sign * q^ratio` with a positive rational `ratio`.
    ///
    /// For the minus sign the stored exponents must be integers (the series
    /// must live on the integer grid), since `(-q)^e` is otherwise
    /// undefined; the unknown tail is assumed to live on the same grid.
    pub fn substituted(&self, sign: crate::qpower::Sign, ratio: &Rat) -> Result<Self> {
        if !ratio.is_positive() {
            return Err(Error::InvalidParameter(
                "substitution ratio must be positive to preserve truncation".into(),
            ));
        }
        let base = self.clone().normalized();
        if sign == crate::qpower::Sign::Minus && base.scale != 1 {
            return Err(Error::InvalidParameter(
                "sign-flipping substitution needs integer exponents".into(),
            ));
        }
        let order = base.order.scaled(ratio);
        let pairs: Vec<(Rat, Rat)> = base
            .terms
            .iter()
            .map(|(k, c)| {
                let e = crate::rat(*k, base.scale);
                let flip = match sign {
                    crate::qpower::Sign::Plus => Rat::one(),
                    crate::qpower::Sign::Minus => {
                        if k % 2 == 0 {
                            Rat::one()
                        } else {
                            -Rat::one()
                        }
                    }
                };
                (e * ratio, c * flip)
            })
            .collect();
        Self::from_terms(pairs, order)
    }

    // ---- comparison ----

    /// Compare coefficients of both series for all exponents `<= t`.
    ///
    /// Both series must be known at least up to `t`.
    pub fn eq_to_order(&self, other: &Self, t: &Rat) -> Result<Match> {
        for s in [self, other] {
            if !s.order.allows(t) {
                return Err(Error::OrderExceeded {
                    requested: t.clone(),
                    known: s.order.bound().cloned().unwrap_or_else(Rat::zero),
                });
            }
        }
        let scale = lcm_scale(self.scale, other.scale)?;
        let a = self.rebased(scale);
        let b = other.rebased(scale);
        let kmax = floor_key(t, scale);
        let mut keys: Vec<i64> = a.keys().chain(b.keys()).copied().filter(|k| *k <= kmax).collect();
        keys.sort_unstable();
        keys.dedup();
        for k in keys {
            let ca = a.get(&k).cloned().unwrap_or_else(Rat::zero);
            let cb = b.get(&k).cloned().unwrap_or_else(Rat::zero);
            if ca != cb {
                return Ok(Match::Mismatch { exponent: crate::rat(k, scale), lhs: ca, rhs: cb });
            }
        }
        Ok(Match::Equal)
    }

    /// Whether every coefficient up to `t` vanishes.
    pub fn is_zero_to(&self, t: &Rat) -> Result<bool> {
        Ok(self.eq_to_order(&Self::zero(Order::UpTo(t.clone())), t)?.is_equal())
    }

    // ---- serialization ----

    /// JSON form: `{"scale": D, "order": "p/q" | "exact", "terms": [[k, "c"], ...]}`
    /// with `k` the numerator of the exponent `k/D` and `c` the coefficient
    /// as a reduced rational string.
    pub fn to_json(&self) -> Value {
        let order = match &self.order {
            Order::Exact => "exact".to_string(),
            Order::UpTo(t) => t.to_string(),
        };
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, c)| json!([k, c.to_string()]))
            .collect();
        json!({ "scale": self.scale, "order": order, "terms": terms })
    }

    /// Parse the JSON form produced by [`Self::to_json`].
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidParameter(format!("malformed series JSON: {what}"));
        let obj = v.as_object().ok_or_else(|| bad("not an object"))?;
        let scale = obj
            .get("scale")
            .and_then(Value::as_i64)
            .ok_or_else(|| bad("missing integer `scale`"))?;
        if scale < 1 || scale > SCALE_CAP {
            return Err(bad("scale out of range"));
        }
        let order_str = obj
            .get("order")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing string `order`"))?;
        let order = if order_str == "exact" {
            Order::Exact
        } else {
            Order::UpTo(Rat::from_str(order_str).map_err(|_| bad("unparsable order"))?)
        };
        let mut terms = BTreeMap::new();
        for item in obj.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing `terms`"))? {
            let pair = item.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("term is not a pair"))?;
            let k = pair[0].as_i64().ok_or_else(|| bad("term key is not an integer"))?;
            let c = pair[1]
                .as_str()
                .and_then(|s| Rat::from_str(s).ok())
                .ok_or_else(|| bad("term coefficient is not a rational string"))?;
            if !c.is_zero() {
                terms.insert(k, c);
            }
        }
        Ok(PuiseuxSeries { scale, terms, order }.normalized())
    }
}

/// Build a series that is guaranteed to be known up to `t`.
///
/// `build` receives a working order; if internal divisions leave the result
/// short of `t`, it is re-run with the order enlarged by the shortfall. The
/// final series is truncated to exactly `t`.
pub fn build_to_order<F>(t: &Rat, mut build: F) -> Result<PuiseuxSeries>
where
    F: FnMut(&Rat) -> Result<PuiseuxSeries>,
{
    let mut pad = Rat::zero();
    for _ in 0..6 {
        let tw = t + &pad;
        let s = build(&tw)?;
        match s.order() {
            Order::UpTo(b) if b < t => pad += t - b + Rat::one(),
            _ => return Ok(s.truncated(t)),
        }
    }
    Err(Error::InsufficientPrecision {
        context: "series order kept falling short of the requested order".into(),
    })
}

/// Compare two sides of an identity at exactly the order `t`.
///
/// `build` receives a working order and returns both sides computed at it.
/// Divisions and products with negative valuations can leave a result known
/// to less than the working order; in that case the builder is re-run with
/// the order enlarged by the observed shortfall, so the final comparison
/// always happens at `t` itself and never silently weakens.
pub fn compare_with_padding<F>(t: &Rat, mut build: F) -> Result<Match>
where
    F: FnMut(&Rat) -> Result<(PuiseuxSeries, PuiseuxSeries)>,
{
    let mut pad = Rat::zero();
    for _ in 0..6 {
        let tw = t + &pad;
        let (lhs, rhs) = build(&tw)?;
        let mut shortfall: Option<Rat> = None;
        for side in [&lhs, &rhs] {
            if let Order::UpTo(b) = side.order() {
                if b < t {
                    let d = t - b;
                    shortfall = Some(match shortfall {
                        Some(cur) if cur >= d => cur,
                        _ => d,
                    });
                }
            }
        }
        match shortfall {
            None => return lhs.eq_to_order(&rhs, t),
            Some(d) => pad += d + Rat::one(),
        }
    }
    Err(Error::InsufficientPrecision {
        context: "series orders kept falling short of the comparison order".into(),
    })
}

impl Add for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn add(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.checked_add(rhs).expect("series sum exceeded the exponent grid cap")
    }
}

impl Sub for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn sub(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.checked_sub(rhs).expect("series difference exceeded the exponent grid cap")
    }
}

impl Mul for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn mul(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.checked_mul(rhs).expect("series product exceeded the exponent grid cap")
    }
}

impl Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        self.clone().negated()
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_exp(f: &mut fmt::Formatter<'_>, e: &Rat) -> fmt::Result {
            if e.is_one() {
                write!(f, "q")
            } else if e.is_integer() {
                write!(f, "q^{}", e)
            } else {
                write!(f, "q^({})", e)
            }
        }
        if self.terms.is_empty() {
            write!(f, "0")?;
        } else {
            for (i, (k, c)) in self.terms.iter().enumerate() {
                let e = crate::rat(*k, self.scale);
                let mag = c.abs();
                if i == 0 {
                    if c.is_negative() {
                        write!(f, "-")?;
                    }
                } else if c.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                if e.is_zero() {
                    write!(f, "{}", mag)?;
                } else {
                    if !mag.is_one() {
                        write!(f, "{}*", mag)?;
                    }
                    write_exp(f, &e)?;
                }
            }
        }
        if let Order::UpTo(t) = &self.order {
            let next = t + crate::rat(1, self.scale);
            write!(f, " + O(")?;
            write_exp(f, &next)?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpower::Sign;
    use crate::{rat, rint};

    fn poly(pairs: &[(i64, i64)]) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(
            pairs.iter().map(|(e, c)| (rint(*e), rint(*c))),
            Order::Exact,
        )
        .expect("small integer polynomial")
    }

    #[test]
    fn geometric_series_from_inverting_one_minus_q() {
        let s = poly(&[(0, 1), (1, -1)]).truncated(&rint(30));
        let inv = s.inverted().expect("invertible");
        for n in 0..=30 {
            assert_eq!(inv.coeff_int(n).unwrap(), rint(1), "coefficient of q^{n}");
        }
        assert_eq!(inv.order(), &Order::up_to(30));
    }

    #[test]
    fn fibonacci_series_from_inverting_quadratic() {
        // 1 / (1 - q - q^2) generates the Fibonacci numbers.
        let s = poly(&[(0, 1), (1, -1), (2, -1)]).truncated(&rint(12));
        let inv = s.inverted().expect("invertible");
        let fib = [1i64, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233];
        for (n, f) in fib.iter().enumerate() {
            assert_eq!(inv.coeff_int(n as i64).unwrap(), rint(*f), "Fibonacci at q^{n}");
        }
    }

    #[test]
    fn inverse_respects_valuation_budget() {
        // val = 2, known to 10: the inverse must be known to 10 - 4 = 6.
        let s = PuiseuxSeries::from_terms(
            [(rint(2), rint(3)), (rint(5), rint(-1))],
            Order::up_to(10),
        )
        .unwrap();
        let inv = s.inverted().unwrap();
        assert_eq!(inv.order(), &Order::up_to(6));
        assert_eq!(inv.val().unwrap(), rint(-2));
        assert_eq!(inv.coeff(&rint(-2)).unwrap(), rat(1, 3));
        // (3 q^2 - q^5) * inverse == 1 to the available order.
        let prod = &s * &inv;
        assert!(prod.eq_to_order(&PuiseuxSeries::one(), &rint(4)).unwrap().is_equal());
    }

    #[test]
    fn product_order_uses_both_valuations() {
        let a = PuiseuxSeries::from_terms([(rint(1), rint(1))], Order::up_to(5)).unwrap();
        let b = PuiseuxSeries::from_terms([(rint(2), rint(1))], Order::up_to(4)).unwrap();
        // min(5 + 2, 4 + 1) = 5.
        assert_eq!((&a * &b).order(), &Order::up_to(5));
    }

    #[test]
    fn sum_truncates_to_weaker_order_and_drops_late_terms() {
        let a = poly(&[(0, 1)]).truncated(&rint(3));
        let b = poly(&[(0, 1), (5, 7)]);
        let s = &a + &b;
        assert_eq!(s.order(), &Order::up_to(3));
        assert_eq!(s.coeff_int(2).unwrap(), rint(0));
        assert!(s.coeff_int(5).is_err(), "beyond the order the sum is unknown");
    }

    #[test]
    fn exact_zero_annihilates_products() {
        let z = PuiseuxSeries::zero_exact();
        let a = poly(&[(0, 1), (1, 4)]).truncated(&rint(9));
        assert_eq!(&z * &a, PuiseuxSeries::zero_exact());
    }

    #[test]
    fn fractional_grids_combine_and_normalise() {
        let a = PuiseuxSeries::q_power(rat(1, 2)).unwrap();
        let b = PuiseuxSeries::q_power(rat(1, 3)).unwrap();
        let p = &a * &b;
        assert_eq!(p.scale(), 6);
        assert_eq!(p.coeff(&rat(5, 6)).unwrap(), rint(1));
        let sq = &a * &a;
        assert_eq!(sq.scale(), 1, "q^(1/2) squared lands back on the integer grid");
        assert_eq!(sq.coeff_int(1).unwrap(), rint(1));
    }

    #[test]
    fn scale_cap_is_enforced() {
        let err = PuiseuxSeries::q_power(rat(1, SCALE_CAP + 1)).unwrap_err();
        assert!(matches!(err, crate::Error::ScaleCapExceeded { .. }));
    }

    #[test]
    fn substitution_scales_exponents_and_order() {
        let s = poly(&[(0, 1), (1, -2), (3, 5)]).truncated(&rint(10));
        let t = s.substituted(Sign::Plus, &rat(1, 2)).unwrap();
        assert_eq!(t.order(), &Order::UpTo(rint(5)));
        assert_eq!(t.coeff(&rat(1, 2)).unwrap(), rint(-2));
        let u = s.substituted(Sign::Minus, &rint(1)).unwrap();
        assert_eq!(u.coeff_int(1).unwrap(), rint(2));
        assert_eq!(u.coeff_int(3).unwrap(), rint(-5));
    }

    #[test]
    fn sign_substitution_rejects_fractional_grid() {
        let s = PuiseuxSeries::q_power(rat(1, 2)).unwrap();
        assert!(s.substituted(Sign::Minus, &rint(1)).is_err());
    }

    #[test]
    fn powi_handles_negative_exponents() {
        let s = poly(&[(0, 1), (1, -1)]).truncated(&rint(8));
        let m2 = s.powi(-2).unwrap();
        // 1 / (1 - q)^2 = sum (n + 1) q^n.
        for n in 0..=6 {
            assert_eq!(m2.coeff_int(n).unwrap(), rint(n + 1));
        }
    }

    #[test]
    fn eq_to_order_reports_first_mismatch() {
        let a = poly(&[(0, 1), (2, 3)]);
        let b = poly(&[(0, 1), (2, 4)]);
        match a.eq_to_order(&b, &rint(5)).unwrap() {
            Match::Mismatch { exponent, lhs, rhs } => {
                assert_eq!(exponent, rint(2));
                assert_eq!(lhs, rint(3));
                assert_eq!(rhs, rint(4));
            }
            Match::Equal => panic!("expected a mismatch"),
        }
    }

    #[test]
    fn eq_to_order_rejects_unknown_range() {
        let a = poly(&[(0, 1)]).truncated(&rint(4));
        let b = poly(&[(0, 1)]);
        assert!(matches!(
            a.eq_to_order(&b, &rint(9)),
            Err(crate::Error::OrderExceeded { .. })
        ));
    }

    #[test]
    fn json_round_trip_is_identity() {
        let s = PuiseuxSeries::from_terms(
            [(rat(-1, 4), rat(3, 2)), (rint(2), rint(-7))],
            Order::UpTo(rat(17, 3)),
        )
        .unwrap();
        let v = s.to_json();
        let back = PuiseuxSeries::from_json(&v).unwrap();
        assert_eq!(s, back);
        let exact = poly(&[(0, 1), (5, -1)]);
        assert_eq!(PuiseuxSeries::from_json(&exact.to_json()).unwrap(), exact);
    }

    #[test]
    fn display_is_readable() {
        let s = PuiseuxSeries::from_terms(
            [(rint(0), rint(1)), (rint(1), rint(-1)), (rat(5, 2), rat(3, 2))],
            Order::UpTo(rint(4)),
        )
        .unwrap();
        assert_eq!(s.to_string(), "1 - q + 3/2*q^(5/2) + O(q^(9/2))");
        assert_eq!(PuiseuxSeries::zero_exact().to_string(), "0");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_series() -> impl Strategy<Value = PuiseuxSeries> {
            let term = (1i64..=4, -6i64..=24, -5i64..=5).prop_map(|(d, k, c)| (rat(k, d), rint(c)));
            proptest::collection::vec(term, 0..8).prop_map(|pairs| {
                PuiseuxSeries::from_terms(pairs, Order::up_to(25)).expect("small grid")
            })
        }

        fn arb_invertible() -> impl Strategy<Value = PuiseuxSeries> {
            arb_series().prop_filter("needs a leading term", |s| !s.is_zero())
        }

        proptest! {
            #[test]
            fn addition_commutes(a in arb_series(), b in arb_series()) {
                prop_assert_eq!(&a + &b, &b + &a);
            }

            #[test]
            fn multiplication_commutes(a in arb_series(), b in arb_series()) {
                prop_assert_eq!(&a * &b, &b * &a);
            }

            #[test]
            fn multiplication_distributes(a in arb_series(), b in arb_series(), c in arb_series()) {
                let lhs = &a * &(&b + &c);
                let rhs = &(&a * &b) + &(&a * &c);
                // Orders may differ (the distributed form can know less), so
                // compare coefficients on the common range.
                let t = lhs.order().bound().unwrap().clone();
                let t = match rhs.order().bound() {
                    Some(u) if u < &t => u.clone(),
                    _ => t,
                };
                prop_assert!(lhs.eq_to_order(&rhs, &t).unwrap().is_equal());
            }

            #[test]
            fn inverse_is_right_inverse(a in arb_invertible()) {
                let inv = a.inverted().unwrap();
                let prod = &a * &inv;
                if let Some(t) = prod.order().bound() {
                    let t = t.clone();
                    prop_assert!(prod.eq_to_order(&PuiseuxSeries::one(), &t).unwrap().is_equal());
                }
            }

            #[test]
            fn json_round_trip(a in arb_series()) {
                prop_assert_eq!(PuiseuxSeries::from_json(&a.to_json()).unwrap(), a);
            }
        }
    }
}

//! Desk-scale non-archimedean base fields.
//!
//! The completed field `ℚ_p` is modelled by its dense subfield `ℚ` with the
//! `p`-adic valuation; the pseudouniformizer is `ϖ = p`. Radii that are not
//! in `|ℚ^×|` (for example `|ϖ|^{1/m}`) appear as formal powers `ϖ^q`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::valgroup::Value;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("ambient rank must be positive")]
    ZeroRank,
    #[error("cannot add ϖ^{left} and ϖ^{right}: exponents differ by a non-integer")]
    IncompatibleFormalPowers { left: Rational, right: Rational },
    #[error("division by zero")]
    DivisionByZero,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `v_p(n)` for a nonzero integer.
pub fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(q)`, or `None` for `q = 0`.
pub fn rational_valuation(q: &Rational, p: &BigInt) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(int_valuation(q.numer(), p) - int_valuation(q.denom(), p))
}

/// Parses `"3"`, `"-3/5"` and similar literals.
/// `p^k` as an exact rational, `k` of either sign.
pub fn prime_power(p: u64, k: i64) -> Rational {
    let p = Rational::from_integer(BigInt::from(p));
    if k >= 0 {
        num_traits::pow(p, k as usize)
    } else {
        num_traits::pow(p.recip(), k.unsigned_abs() as usize)
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseField {
    prime: u64,
    label: String,
    ambient_rank: usize,
    residue_algebraic_over_finite: bool,
}

impl BaseField {
    pub fn new(prime: u64) -> Result<Self, FieldError> {
        if !is_prime(prime) {
            return Err(FieldError::NotPrime(prime));
        }
        Ok(Self {
            prime,
            label: "Qp-model".to_string(),
            ambient_rank: 1,
            residue_algebraic_over_finite: true,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_ambient_rank(mut self, rank: usize) -> Result<Self, FieldError> {
        if rank == 0 {
            return Err(FieldError::ZeroRank);
        }
        self.ambient_rank = rank;
        Ok(self)
    }

    pub fn with_residue_algebraic_over_finite(mut self, flag: bool) -> Self {
        self.residue_algebraic_over_finite = flag;
        self
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn prime_big(&self) -> BigInt {
        BigInt::from(self.prime)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn residue_algebraic_over_finite(&self) -> bool {
        self.residue_algebraic_over_finite
    }

    /// Number of continuous valuations of the field itself (ignoring `k⁺`):
    /// exactly one when the residue field has no nontrivial valuations.
    pub fn continuous_valuation_count(&self) -> Option<usize> {
        self.residue_algebraic_over_finite.then_some(1)
    }

    pub fn valuation(&self, q: &Rational) -> Option<i64> {
        rational_valuation(q, &self.prime_big())
    }

    /// `p^k` as an exact rational.
    pub fn pi_pow(&self, k: i64) -> Rational {
        prime_power(self.prime, k)
    }

    /// `|q|` in rank 1 (log-coordinate `-v_p(q)`).
    pub fn abs_rational_rank1(&self, q: &Rational) -> Value {
        match self.valuation(q) {
            None => Value::Zero,
            Some(v) => Value::from_ints(&[-v]),
        }
    }

    /// `|a|` embedded into the ambient rank of this field.
    pub fn abs(&self, a: &FieldElement) -> Value {
        let base = match a.valuation(self) {
            None => Value::Zero,
            Some(v) => Value::rank1(-v),
        };
        base.embed(self.ambient_rank)
            .expect("rank-1 values embed into any rank")
    }

    pub fn abs_rational(&self, q: &Rational) -> Value {
        self.abs(&FieldElement::rational(q.clone()))
    }

    pub fn is_topologically_nilpotent(&self, a: &FieldElement) -> bool {
        match a.valuation(self) {
            None => true,
            Some(v) => v.is_positive(),
        }
    }

    pub fn is_powerbounded(&self, a: &FieldElement) -> bool {
        match a.valuation(self) {
            None => true,
            Some(v) => !v.is_negative(),
        }
    }

    /// `v_p(q) ≥ n`, with `0` divisible by everything.
    pub fn divisible_by_pi_pow(&self, q: &Rational, n: i64) -> bool {
        self.valuation(q).is_none_or(|v| v >= n)
    }
}

/// A scalar `c · ϖ^e` with `c ∈ ℚ` and `e ∈ ℚ`; integral parts of `e` are
/// folded into `c`, so rational field elements have `e = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeff: Rational,
    pi_exp: Rational,
}

impl FieldElement {
    pub fn rational(q: Rational) -> Self {
        Self {
            coeff: q,
            pi_exp: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rational::from_integer(n.into()))
    }

    /// `c · ϖ^e` over the field `k`.
    pub fn new(k: &BaseField, coeff: Rational, pi_exp: Rational) -> Self {
        let whole = pi_exp.floor();
        let frac = &pi_exp - &whole;
        let shift = whole.to_integer().to_i64().expect("ϖ exponent fits in i64");
        let coeff = coeff * k.pi_pow(shift);
        if coeff.is_zero() {
            return Self::rational(coeff);
        }
        Self { coeff, pi_exp: frac }
    }

    pub fn pi_power(k: &BaseField, e: Rational) -> Self {
        Self::new(k, Rational::one(), e)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn pi_exp(&self) -> &Rational {
        &self.pi_exp
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.pi_exp.is_zero().then_some(&self.coeff)
    }

    /// `v_p` on the log scale, `None` for zero.
    pub fn valuation(&self, k: &BaseField) -> Option<Rational> {
        k.valuation(&self.coeff)
            .map(|v| Rational::from_integer(v.into()) + &self.pi_exp)
    }

    pub fn mul(&self, k: &BaseField, other: &Self) -> Self {
        Self::new(k, &self.coeff * &other.coeff, &self.pi_exp + &other.pi_exp)
    }

    pub fn inv(&self, k: &BaseField) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::new(k, self.coeff.recip(), -&self.pi_exp))
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_exp != other.pi_exp {
            return Err(FieldError::IncompatibleFormalPowers {
                left: self.pi_exp.clone(),
                right: other.pi_exp.clone(),
            });
        }
        let coeff = &self.coeff + &other.coeff;
        if coeff.is_zero() {
            return Ok(Self::rational(coeff));
        }
        Ok(Self {
            coeff,
            pi_exp: self.pi_exp.clone(),
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi_exp.is_zero() {
            write!(f, "{}", self.coeff)
        } else if self.coeff.is_one() {
            write!(f, "w^({})", self.pi_exp)
        } else {
            write!(f, "{}*w^({})", self.coeff, self.pi_exp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rejects_composite_primes() {
        assert_eq!(BaseField::new(12), Err(FieldError::NotPrime(12)));
        assert_eq!(BaseField::new(1), Err(FieldError::NotPrime(1)));
        assert!(BaseField::new(7).is_ok());
    }

    #[test]
    fn absolute_values() {
        let k5 = BaseField::new(5).unwrap();
        let k2 = BaseField::new(2).unwrap();
        assert_eq!(k5.abs(&FieldElement::from_int(5)), Value::from_ints(&[-1]));
        // 12 = 2^2 * 3
        assert_eq!(k2.abs(&FieldElement::from_int(12)), Value::from_ints(&[-2]));
        assert_eq!(k2.abs(&FieldElement::from_int(0)), Value::Zero);
    }

    #[test]
    fn nilpotent_and_powerbounded() {
        let k5 = BaseField::new(5).unwrap();
        let p = FieldElement::from_int(5);
        assert!(k5.is_topologically_nilpotent(&p));
        assert!(!k5.is_topologically_nilpotent(&FieldElement::from_int(1)));
        assert!(!k5.is_topologically_nilpotent(&FieldElement::rational(q(1, 5))));
        assert!(k5.is_powerbounded(&p));
        assert!(!k5.is_powerbounded(&FieldElement::rational(q(3, 5))));
        assert!(k5.is_powerbounded(&FieldElement::from_int(7)));
        assert!(k5.is_topologically_nilpotent(&FieldElement::from_int(0)));
    }

    #[test]
    fn formal_powers_fold_integer_parts() {
        let k = BaseField::new(3).unwrap();
        let a = FieldElement::pi_power(&k, q(5, 2));
        assert_eq!(a.coeff(), &q(9, 1));
        assert_eq!(a.pi_exp(), &q(1, 2));
        assert_eq!(k.abs(&a), Value::rank1(q(-5, 2)));
        let b = FieldElement::pi_power(&k, q(2, 1));
        assert_eq!(b.as_rational(), Some(&q(9, 1)));
        assert!(a.add(&b).is_err());
        assert_eq!(a.mul(&k, &a).as_rational(), Some(&q(243, 1)));
    }

    #[test]
    fn ambient_rank_embedding() {
        let k = BaseField::new(3).unwrap().with_ambient_rank(2).unwrap();
        assert_eq!(k.abs(&FieldElement::from_int(9)), Value::from_ints(&[-2, 0]));
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational(" -3/6 "), Some(q(-1, 2)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}

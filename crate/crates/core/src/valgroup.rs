//! Totally ordered value groups `Γ ∪ {0}`.
//!
//! Non-zero values live in a lexicographically ordered `ℚⁿ` and are stored
//! additively: the vector `(l₁, …, lₙ)` stands for the multiplicative value
//! `γ₁^{l₁} ⋯ γₙ^{lₙ}`. The first coordinate is the rank-1 (archimedean)
//! part, later coordinates are infinitesimal corrections. The base
//! pseudouniformizer has log-vector `(-1, 0, …, 0)`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::Rational;

/// Largest rank accepted by [`Value::from_logvec`].
pub const DEFAULT_MAX_RANK: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("rank mismatch between values of rank {left} and {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("rank {rank} is outside the supported range 1..={max}")]
    BadRank { rank: usize, max: usize },
    #[error("operation is undefined on the zero value")]
    ZeroOperand,
    #[error("cannot embed a rank-{from} value into rank {to}")]
    Narrowing { from: usize, to: usize },
}

/// An element of `Γ ∪ {0}` for a lexicographic group `Γ = ℚⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Zero,
    Elem(Vec<Rational>),
}

impl Value {
    pub fn from_logvec(logvec: Vec<Rational>) -> Result<Self, ValueError> {
        Self::from_logvec_with_max(logvec, DEFAULT_MAX_RANK)
    }

    pub fn from_logvec_with_max(logvec: Vec<Rational>, max_rank: usize) -> Result<Self, ValueError> {
        let rank = logvec.len();
        if rank == 0 || rank > max_rank {
            return Err(ValueError::BadRank { rank, max: max_rank });
        }
        Ok(Value::Elem(logvec))
    }

    /// Convenience constructor from integer log-coordinates.
    ///
    /// Panics on an empty slice.
    pub fn from_ints(coords: &[i64]) -> Self {
        assert!(!coords.is_empty(), "a value needs at least one coordinate");
        Value::Elem(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn identity(rank: usize) -> Self {
        Value::Elem(vec![Rational::zero(); rank.max(1)])
    }

    /// `|p|^{-log}` in rank 1, i.e. the value with log-vector `(log)`.
    pub fn rank1(log: Rational) -> Self {
        Value::Elem(vec![log])
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Value::Zero)
    }

    pub fn rank(&self) -> Option<usize> {
        match self {
            Value::Zero => None,
            Value::Elem(v) => Some(v.len()),
        }
    }

    pub fn logvec(&self) -> Option<&[Rational]> {
        match self {
            Value::Zero => None,
            Value::Elem(v) => Some(v),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Value::Elem(v) if v.iter().all(Zero::is_zero))
    }

    fn check_rank(a: &[Rational], b: &[Rational]) -> Result<(), ValueError> {
        if a.len() != b.len() {
            return Err(ValueError::RankMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        Ok(())
    }

    /// Group law; zero is absorbing.
    pub fn mul(&self, other: &Value) -> Result<Value, ValueError> {
        match (self, other) {
            (Value::Zero, _) | (_, Value::Zero) => Ok(Value::Zero),
            (Value::Elem(a), Value::Elem(b)) => {
                Self::check_rank(a, b)?;
                Ok(Value::Elem(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
        }
    }

    pub fn inv(&self) -> Result<Value, ValueError> {
        match self {
            Value::Zero => Err(ValueError::ZeroOperand),
            Value::Elem(a) => Ok(Value::Elem(a.iter().map(|x| -x).collect())),
        }
    }

    pub fn div(&self, other: &Value) -> Result<Value, ValueError> {
        self.mul(&other.inv()?)
    }

    /// Integer power. Negative exponents of zero are rejected.
    pub fn pow(&self, n: i64) -> Result<Value, ValueError> {
        match self {
            Value::Zero if n > 0 => Ok(Value::Zero),
            Value::Zero => Err(ValueError::ZeroOperand),
            Value::Elem(a) => {
                let n = Rational::from_integer(n.into());
                Ok(Value::Elem(a.iter().map(|x| x * &n).collect()))
            }
        }
    }

    /// Rational power on the log scale (used for radii such as `|ϖ|^{1/m}`).
    pub fn pow_rational(&self, q: &Rational) -> Result<Value, ValueError> {
        match self {
            Value::Zero if q.is_positive() => Ok(Value::Zero),
            Value::Zero => Err(ValueError::ZeroOperand),
            Value::Elem(a) => Ok(Value::Elem(a.iter().map(|x| x * q).collect())),
        }
    }

    /// Lexicographic comparison; zero sits below every group element.
    pub fn try_cmp(&self, other: &Value) -> Result<Ordering, ValueError> {
        match (self, other) {
            (Value::Zero, Value::Zero) => Ok(Ordering::Equal),
            (Value::Zero, Value::Elem(_)) => Ok(Ordering::Less),
            (Value::Elem(_), Value::Zero) => Ok(Ordering::Greater),
            (Value::Elem(a), Value::Elem(b)) => {
                Self::check_rank(a, b)?;
                Ok(a.cmp(b))
            }
        }
    }

    pub fn try_max(self, other: Value) -> Result<Value, ValueError> {
        Ok(match self.try_cmp(&other)? {
            Ordering::Less => other,
            _ => self,
        })
    }

    /// Whether every element of the group is eventually exceeded from below by
    /// powers of `self`. For lexicographic `ℚⁿ` this is exactly `l₁ < 0`.
    pub fn is_cofinal(&self) -> Result<bool, ValueError> {
        match self {
            Value::Zero => Err(ValueError::ZeroOperand),
            Value::Elem(a) => Ok(a[0].is_negative()),
        }
    }

    /// Image in `Γ/Δ`, where `Δ` is the convex subgroup of elements `γ` with
    /// neither `γ` nor `γ⁻¹` cofinal. The result has rank 1.
    pub fn convex_quotient(&self) -> Value {
        match self {
            Value::Zero => Value::Zero,
            Value::Elem(a) => Value::Elem(vec![a[0].clone()]),
        }
    }

    /// Pads with zero coordinates, i.e. `r ↦ (r, 1, …)` multiplicatively.
    pub fn embed(&self, rank: usize) -> Result<Value, ValueError> {
        match self {
            Value::Zero => Ok(Value::Zero),
            Value::Elem(a) if a.len() > rank => Err(ValueError::Narrowing {
                from: a.len(),
                to: rank,
            }),
            Value::Elem(a) => {
                let mut v = a.clone();
                v.resize(rank, Rational::zero());
                Ok(Value::Elem(v))
            }
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Zero => write!(f, "0"),
            Value::Elem(a) => {
                write!(f, "g^(")?;
                for (i, x) in a.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

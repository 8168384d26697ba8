//! Gauss-point evaluation and membership in the standard function algebras.

use num_traits::{Signed, ToPrimitive, Zero};

use super::{Series, SeriesError, Shape, Tail};
use crate::basefield::{BaseField, FieldElement};
use crate::valgroup::Value;
use crate::Rational;

/// Coefficients of `f(T + α)` from those of `f(T)` (index = degree).
pub fn taylor_shift_coefficients(coeffs: &[Rational], alpha: &Rational) -> Vec<Rational> {
    let mut c = coeffs.to_vec();
    let n = c.len();
    if n < 2 || alpha.is_zero() {
        return c;
    }
    for i in 0..n - 1 {
        for j in (i..n - 1).rev() {
            let add = alpha * &c[j + 1];
            c[j] += add;
        }
    }
    c
}

/// Weight sets `M_i` attached to the variables of a weighted Tate algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDescriptor {
    pub sets: Vec<Vec<FieldElement>>,
}

impl WeightDescriptor {
    pub fn singletons(weights: Vec<FieldElement>) -> Self {
        WeightDescriptor {
            sets: weights.into_iter().map(|w| vec![w]).collect(),
        }
    }

    /// Valuations `w_i = v(m_i)` of the singleton weights.
    fn valuations(&self, k: &BaseField, arity: usize) -> Result<Vec<Rational>, SeriesError> {
        if self.sets.len() != arity {
            return Err(SeriesError::WeightArity {
                expected: arity,
                got: self.sets.len(),
            });
        }
        let mut out = Vec::with_capacity(arity);
        for (i, set) in self.sets.iter().enumerate() {
            if set.iter().all(FieldElement::is_zero) {
                return Err(SeriesError::NotVoluminous(i));
            }
            if set.len() != 1 {
                return Err(SeriesError::UnsupportedWeights(i, set.len()));
            }
            out.push(set[0].valuation(k).expect("nonzero weight"));
        }
        Ok(out)
    }
}

fn ceil_to_i64(q: &Rational) -> i64 {
    q.ceil().to_integer().to_i64().unwrap_or(i64::MAX / 4)
}

/// Lexicographic sign of a log-vector.
fn lex_sign(v: &[Rational]) -> std::cmp::Ordering {
    for x in v {
        if !x.is_zero() {
            return if x.is_positive() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Less
            };
        }
    }
    std::cmp::Ordering::Equal
}

impl Series {
    /// `|f(x_{α,r})|`, the Gauss-point value of a univariate series.
    ///
    /// At finite p-adic precision `N`, coefficients with `v ≥ N` are unknown
    /// and the answer is only returned when the known part dominates the
    /// uncertainty `|ϖ^N| · max r^i` over the head.
    pub fn gauss_eval(&self, k: &BaseField, alpha: &Rational, r: &Value) -> Result<Value, SeriesError> {
        self.require_univariate()?;
        let r_logs = r.logvec().ok_or(SeriesError::ZeroRadius)?.to_vec();
        let rank = r_logs.len().max(k.ambient_rank());
        let r = r.embed(rank)?;
        let r_logs = r.logvec().expect("nonzero").to_vec();

        let mut coeffs: Vec<(i64, Rational)> = self.head.iter().map(|(e, c)| (e[0], c.clone())).collect();
        if !alpha.is_zero() {
            if self.has_laurent_terms() {
                return Err(SeriesError::LaurentUnsupported("re-centering"));
            }
            if self.is_polynomial() {
                let n = self.max_index().unwrap_or(0) as usize;
                let mut dense = vec![Rational::zero(); n + 1];
                for (i, c) in &coeffs {
                    dense[*i as usize] = c.clone();
                }
                coeffs = taylor_shift_coefficients(&dense, alpha)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i as i64, c))
                    .collect();
            } else {
                // The disc around α of radius r is the disc around 0 when |α| ≤ r.
                let a = k.abs_rational(alpha).embed(rank)?;
                if a.try_cmp(&r)? == std::cmp::Ordering::Greater {
                    return Err(SeriesError::CannotRecenter);
                }
            }
        }
        if let Shape::Truncated(d) = self.shape() {
            return Err(SeriesError::UnknownTail(d));
        }

        let term_value = |i: i64, c: &Rational| -> Result<Value, SeriesError> {
            let a = k.abs_rational(c).embed(rank)?;
            Ok(a.mul(&r.pow(i)?)?)
        };

        let padic = self.precision.padic;
        let mut known = Value::Zero;
        for (i, c) in &coeffs {
            if let Some(n) = padic {
                if k.valuation(c).is_none_or(|v| v >= n) {
                    continue;
                }
            }
            known = known.try_max(term_value(*i, c)?)?;
        }
        let tail_sup = match (&self.tail, self.precision.degree) {
            (Some(t), Some(d)) => self.tail_supremum(t, d as i64, &r_logs)?,
            _ => Value::Zero,
        };
        let total = known.clone().try_max(tail_sup.clone())?;
        let Some(n) = padic else {
            return Ok(total);
        };
        let lo = self.min_index().unwrap_or(0).min(0);
        let hi = self.cutoff_or_degree().max(0);
        let bound = k
            .abs_rational(&k.pi_pow(n))
            .embed(rank)?
            .mul(&r.pow(lo)?.try_max(r.pow(hi)?)?)?;
        if total.try_cmp(&bound)? == std::cmp::Ordering::Greater {
            Ok(total)
        } else if known.is_zero() && tail_sup.is_zero() {
            Err(SeriesError::ZeroAtPrecision(n))
        } else {
            Err(SeriesError::Undecidable(n))
        }
    }

    /// `|f(α)|` at a classical point. Infinite series need a strictly dominant
    /// head term.
    pub fn classical_eval(&self, k: &BaseField, alpha: &Rational) -> Result<Value, SeriesError> {
        if let Shape::Truncated(d) = self.shape() {
            return Err(SeriesError::UnknownTail(d));
        }
        let rank = k.ambient_rank();
        if self.is_polynomial() {
            let point = vec![alpha.clone(); self.vars.len()];
            let exact = self.evaluate(&point)?;
            let value = k.abs_rational(&exact);
            let Some(n) = self.precision.padic else {
                return Ok(value);
            };
            let a = if alpha.is_zero() {
                Value::identity(rank)
            } else {
                k.abs_rational(alpha)
            };
            let lo = self.min_index().unwrap_or(0).min(0);
            let hi = self.cutoff_or_degree().max(0);
            let bound = k.abs_rational(&k.pi_pow(n)).mul(&a.pow(lo)?.try_max(a.pow(hi)?)?)?;
            return if value.try_cmp(&bound)? == std::cmp::Ordering::Greater {
                Ok(value)
            } else if value.is_zero() {
                Err(SeriesError::ZeroAtPrecision(n))
            } else {
                Err(SeriesError::Undecidable(n))
            };
        }
        self.require_univariate()?;
        if alpha.is_zero() {
            return Ok(k.abs_rational(&self.constant_term()));
        }
        let r = k.abs_rational(alpha);
        let mut best = Value::Zero;
        let mut ties = 0;
        for (e, c) in &self.head {
            let v = k.abs_rational(c).mul(&r.pow(e[0])?)?;
            match v.try_cmp(&best)? {
                std::cmp::Ordering::Greater => {
                    best = v;
                    ties = 1;
                }
                std::cmp::Ordering::Equal => ties += 1,
                std::cmp::Ordering::Less => {}
            }
        }
        let (Some(t), Some(d)) = (&self.tail, self.precision.degree) else {
            unreachable!("non-polynomial, non-truncated series has a tail")
        };
        let tail = self.tail_supremum(t, d as i64, r.logvec().expect("nonzero"))?;
        if ties == 1 && best.try_cmp(&tail)? == std::cmp::Ordering::Greater {
            Ok(best)
        } else {
            Err(SeriesError::NoDominantTerm)
        }
    }

    /// `sup_{i > d} |t_i| r^i` for a closed-form tail.
    fn tail_supremum(&self, tail: &Tail, d: i64, r: &[Rational]) -> Result<Value, SeriesError> {
        let Some(vc) = tail.leading_valuation() else {
            return Ok(Value::Zero);
        };
        let value_at = |first_const: Rational, first_lin: Rational, first_quad: i64, i: i64| {
            let ii = Rational::from_integer(i.into());
            let mut v: Vec<Rational> = r.iter().map(|x| x * &ii).collect();
            v[0] = first_const + first_lin * &ii - Rational::from_integer((first_quad * i * i).into()) + &v[0];
            Value::from_logvec(v)
        };
        let start = d + 1;
        let (lin_a, quad_a, b) = match tail {
            Tail::Geometric { a, b, .. } => (*a, 0i64, *b),
            Tail::SuperGeometric { a, .. } if *a == 0 => (0, 0, 0),
            Tail::SuperGeometric { a, .. } if *a < 0 => return Err(SeriesError::NonDominatedTail),
            Tail::SuperGeometric { a, .. } => (0, *a, 0),
        };
        let constant = Rational::from_integer((-(vc + b)).into());
        let lin = Rational::from_integer((-lin_a).into());
        if quad_a == 0 {
            let mut slope = r.to_vec();
            slope[0] += &lin;
            return match lex_sign(&slope) {
                std::cmp::Ordering::Greater => Err(SeriesError::NonDominatedTail),
                _ => Ok(value_at(constant, lin, 0, start)?),
            };
        }
        // First coordinate -vc - a i² + i r₁ decreases strictly past the vertex.
        let vertex = ceil_to_i64(&(&r[0] / Rational::from_integer((2 * quad_a).into())));
        let end = start.max(vertex + 1);
        let mut best = Value::Zero;
        for i in start..=end {
            best = best.try_max(value_at(constant.clone(), lin.clone(), quad_a, i)?)?;
        }
        Ok(best)
    }

    /// Known-zero tail guard shared by the membership tests.
    fn tail_for_membership(&self) -> Result<Option<&Tail>, SeriesError> {
        match self.shape() {
            Shape::Truncated(d) => Err(SeriesError::UnknownTail(d)),
            _ => Ok(self.tail.as_ref()),
        }
    }

    /// Membership in `k⟨ϖ^m T⟩`: `|a_i| p^{i m} → 0`.
    pub fn in_restricted(&self, m: i64) -> Result<bool, SeriesError> {
        Ok(match self.tail_for_membership()? {
            None => true,
            Some(Tail::Geometric { a, .. }) => *a > m,
            Some(Tail::SuperGeometric { a, .. }) => *a > 0 || (*a == 0 && m < 0),
        })
    }

    /// Membership in `O(𝔸¹)`: restricted for every `m`.
    pub fn is_entire(&self) -> Result<bool, SeriesError> {
        Ok(match self.tail_for_membership()? {
            None => true,
            Some(Tail::Geometric { .. }) => false,
            Some(Tail::SuperGeometric { a, .. }) => *a > 0,
        })
    }

    /// Membership in `k⟨T^m / ϖ⟩` for `m ≥ 1`: `|a_i| p^{-i/m} → 0`. Sections
    /// over the open disc are the series lying here for every `m`.
    pub fn in_open_disc_piece(&self, m: i64) -> Result<bool, SeriesError> {
        if m < 1 {
            return Err(SeriesError::InvalidArgument(format!("disc index {m} must be positive")));
        }
        Ok(match self.tail_for_membership()? {
            None => true,
            // a + 1/m > 0
            Some(Tail::Geometric { a, .. }) => a * m + 1 > 0,
            Some(Tail::SuperGeometric { a, .. }) => *a >= 0,
        })
    }

    /// Membership in `O(D°)`: every piece of the open disc.
    pub fn in_open_disc(&self) -> Result<bool, SeriesError> {
        Ok(match self.tail_for_membership()? {
            None => true,
            Some(Tail::Geometric { a, .. }) => *a >= 0,
            Some(Tail::SuperGeometric { a, .. }) => *a >= 0,
        })
    }

    /// Membership in the weighted Tate algebra `A⟨X⟩_M` (or its ring of
    /// definition `A₀⟨X⟩_M` when `integral`), for singleton weights.
    pub fn in_weighted(&self, k: &BaseField, weights: &WeightDescriptor, integral: bool) -> Result<bool, SeriesError> {
        let w = weights.valuations(k, self.vars.len())?;
        if self.has_laurent_terms() {
            return Err(SeriesError::LaurentUnsupported("weighted algebras"));
        }
        let tail = self.tail_for_membership()?;
        let converges = match tail {
            None => true,
            Some(Tail::Geometric { a, .. }) => Rational::from_integer((*a).into()) > w[0],
            Some(Tail::SuperGeometric { a, .. }) => *a > 0 || (*a == 0 && w[0].is_negative()),
        };
        if !converges || !integral {
            return Ok(converges);
        }
        for (e, c) in &self.head {
            let need: Rational = e
                .iter()
                .zip(&w)
                .map(|(x, wi)| wi * Rational::from_integer((*x).into()))
                .sum();
            let v = k.valuation(c).expect("head coefficients are nonzero");
            if Rational::from_integer(v.into()) < need {
                return Ok(false);
            }
        }
        let (Some(t), Some(d)) = (tail, self.precision.degree) else {
            return Ok(true);
        };
        let vc = t.leading_valuation().expect("nonzero tail");
        let start = d as i64 + 1;
        let excess = |i: i64| -> Rational {
            let vi = match t {
                Tail::Geometric { a, b, .. } => vc + a * i + b,
                Tail::SuperGeometric { a, .. } => vc + a * i * i,
            };
            Rational::from_integer(vi.into()) - &w[0] * Rational::from_integer(i.into())
        };
        let ok = match t {
            // Convergence gives a > w, so the excess grows with i.
            Tail::Geometric { .. } => !excess(start).is_negative(),
            Tail::SuperGeometric { a, .. } if *a == 0 => !excess(start).is_negative(),
            Tail::SuperGeometric { a, .. } => {
                let vertex = ceil_to_i64(&(&w[0] / Rational::from_integer((2 * a).into())));
                (start..=start.max(vertex + 1)).all(|i| !excess(i).is_negative())
            }
        };
        Ok(ok)
    }

    /// Whether every known coefficient has `v ≥ 0`.
    pub fn has_integral_coefficients(&self, k: &BaseField) -> bool {
        let head_ok = self.head.values().all(|c| k.valuation(c).is_none_or(|v| v >= 0));
        let tail_ok = match (&self.tail, self.precision.degree) {
            (Some(t), Some(d)) => {
                let vc = t.leading_valuation().unwrap_or(0);
                let i = d as i64 + 1;
                match t {
                    Tail::Geometric { a, b, .. } => *a >= 0 && vc + a * i + b >= 0,
                    Tail::SuperGeometric { a, .. } => *a >= 0 && vc + a * i * i >= 0,
                }
            }
            _ => true,
        };
        head_ok && tail_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn k5() -> BaseField {
        BaseField::new(5).unwrap()
    }

    #[test]
    fn gauss_values_match_hand_computation() {
        let k = k5();
        // T^2 + 5 at radius 1 over 0 is 1; at radius |5| it is |5|^2 ∨ |5| = |5|.
        let f = Series::univariate("T", &[q(5), q(0), q(1)]);
        assert_eq!(
            f.gauss_eval(&k, &q(0), &Value::from_ints(&[0])).unwrap(),
            Value::from_ints(&[0])
        );
        assert_eq!(
            f.gauss_eval(&k, &q(0), &Value::from_ints(&[-1])).unwrap(),
            Value::from_ints(&[-1])
        );
        // T - 5 at the point x_{5, |25|}: the shifted polynomial is T.
        let g = Series::univariate("T", &[q(-5), q(1)]);
        assert_eq!(
            g.gauss_eval(&k, &q(5), &Value::from_ints(&[-2])).unwrap(),
            Value::from_ints(&[-2])
        );
    }

    #[test]
    fn precision_limits_decisions() {
        let k = k5();
        let f = Series::univariate("T", &[q(625)]).with_padic_precision(3);
        assert_eq!(
            f.gauss_eval(&k, &q(0), &Value::from_ints(&[0])),
            Err(SeriesError::ZeroAtPrecision(3))
        );
        let g = Series::univariate("T", &[q(1)]).with_padic_precision(3);
        assert_eq!(
            g.gauss_eval(&k, &q(0), &Value::from_ints(&[0])).unwrap(),
            Value::from_ints(&[0])
        );
    }

    #[test]
    fn tails_are_scanned() {
        let k = k5();
        let f = Series::geometric(5, "T", 1, 0, 3);
        assert_eq!(
            f.gauss_eval(&k, &q(0), &Value::from_ints(&[1])).unwrap(),
            Value::from_ints(&[0])
        );
        assert_eq!(
            f.gauss_eval(&k, &q(0), &Value::from_ints(&[2])),
            Err(SeriesError::NonDominatedTail)
        );
        // Σ 5^{i²} T^i at radius |5|^{-3}: max of -i² + 3i is at i ∈ {1, 2}.
        let g = Series::super_geometric(5, "T", 1, 0);
        assert_eq!(
            g.gauss_eval(&k, &q(0), &Value::from_ints(&[3])).unwrap(),
            Value::from_ints(&[2])
        );
        let g = Series::super_geometric(5, "T", 1, 4);
        assert_eq!(
            g.gauss_eval(&k, &q(0), &Value::from_ints(&[3])).unwrap(),
            Value::from_ints(&[2])
        );
    }

    #[test]
    fn membership_catalog() {
        let g = Series::geometric(5, "T", 1, 0, 4);
        assert!(g.in_restricted(0).unwrap());
        assert!(!g.in_restricted(1).unwrap());
        assert!(!g.is_entire().unwrap());
        let e = Series::super_geometric(5, "T", 1, 4);
        assert!(e.is_entire().unwrap());
        let o = Series::geometric(5, "T", 0, 0, 4);
        assert!(o.in_open_disc().unwrap());
        assert!(!o.in_restricted(0).unwrap());
        let bad = Series::geometric(5, "T", -1, 0, 4);
        assert!(!bad.in_open_disc().unwrap());
        assert!(!bad.in_open_disc_piece(2).unwrap());
        let edge = Series::geometric(5, "T", 0, 0, 4);
        assert!(edge.in_open_disc_piece(3).unwrap());
    }

    #[test]
    fn weighted_membership() {
        let k = k5();
        let w = WeightDescriptor::singletons(vec![FieldElement::from_int(5)]);
        let f = Series::geometric(5, "T", 2, 0, 3);
        assert!(f.in_weighted(&k, &w, false).unwrap());
        assert!(f.in_weighted(&k, &w, true).unwrap());
        let g = Series::univariate("T", &[q(0), q(1)]);
        assert!(!g.in_weighted(&k, &w, true).unwrap());
        let zero = WeightDescriptor::singletons(vec![FieldElement::from_int(0)]);
        assert_eq!(g.in_weighted(&k, &zero, false), Err(SeriesError::NotVoluminous(0)));
        let pair = WeightDescriptor {
            sets: vec![vec![FieldElement::from_int(1), FieldElement::from_int(5)]],
        };
        assert_eq!(
            g.in_weighted(&k, &pair, false),
            Err(SeriesError::UnsupportedWeights(0, 2))
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        /// Gauss norm is multiplicative at exact precision.
        #[test]
        fn gauss_norm_is_multiplicative(
            a in prop::collection::vec(-30i64..30, 1..5),
            b in prop::collection::vec(-30i64..30, 1..5),
            alpha in -10i64..10,
            r in -3i64..3,
        ) {
            let k = k5();
            let f = Series::univariate("T", &a.iter().map(|x| q(*x)).collect::<Vec<_>>());
            let g = Series::univariate("T", &b.iter().map(|x| q(*x)).collect::<Vec<_>>());
            let r = Value::from_ints(&[r]);
            let fg = f.mul(&g).unwrap().gauss_eval(&k, &q(alpha), &r).unwrap();
            let prod = f.gauss_eval(&k, &q(alpha), &r).unwrap().mul(&g.gauss_eval(&k, &q(alpha), &r).unwrap());
            match prod {
                Ok(v) => prop_assert_eq!(fg, v),
                Err(_) => prop_assert!(fg.is_zero()),
            }
        }

        #[test]
        fn taylor_shift_round_trips(a in prop::collection::vec(-20i64..20, 1..6), alpha in -7i64..7) {
            let c: Vec<Rational> = a.iter().map(|x| q(*x)).collect();
            let there = taylor_shift_coefficients(&c, &q(alpha));
            let back = taylor_shift_coefficients(&there, &q(-alpha));
            prop_assert_eq!(back, c);
        }
    }
}

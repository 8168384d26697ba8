//! Points of discs and of the affine and projective lines.
//!
//! Classical points `α`, Gauss points `x_{α,r}` and the rank-2 points
//! `x_{α,r±}`. The signed points never store the infinitesimal `ε`: the
//! radius is realized as the rank-2 value `(log r, ∓1)`, and
//! [`DiscPoint::eval_with_epsilon`] exists to exercise other choices.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::basefield::BaseField;
use crate::series::{Series, SeriesError};
use crate::valgroup::{Value, ValueError};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointError {
    #[error("charts differ: {0} vs {1}")]
    ChartMismatch(Chart, Chart),
    #[error("radius must be a rank-1 nonzero value, got {0}")]
    BadRadius(Value),
    #[error("the pair of definition lists no ideal generators")]
    EmptyGenerators,
    #[error("the point is only defined on integral coefficients")]
    NonIntegral,
    #[error("epsilon scale must be positive")]
    BadEpsilon,
    #[error("an analytic field needs a valuation of rank at least 1")]
    AnalyticRankZero,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Value(#[from] ValueError),
}

/// Where a point lives; each chart has one coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Chart {
    /// The disc `|T| ≤ p^s`.
    Disc { log_radius: i64 },
    /// `k⟨ϖ^m T⟩`, the `m`-th piece of the affine line.
    AffineLine { m: i64 },
    /// Chart `1` (coordinate `T`) or `2` (coordinate `S = 1/T`) of `ℙ¹`.
    Projective { index: u8 },
}

impl Chart {
    pub const UNIT_DISC: Chart = Chart::Disc { log_radius: 0 };

    pub fn variable(&self) -> &'static str {
        match self {
            Chart::Projective { index: 2 } => "S",
            _ => "T",
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chart::Disc { log_radius } => write!(f, "disc(p^{log_radius})"),
            Chart::AffineLine { m } => write!(f, "affine-line[{m}]"),
            Chart::Projective { index } => write!(f, "P1[{index}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PointKind {
    Classical {
        alpha: Rational,
    },
    Gauss {
        alpha: Rational,
        r: Value,
    },
    GaussSigned {
        alpha: Rational,
        r: Value,
        sign: Sign,
    },
    /// The trivial valuation: `|f| = 1` for every `f ≠ 0`.
    Trivial,
    /// The valuation with support `(p, T)` on integral series: `|f| = 1`
    /// when `f(0)` is a unit and `0` otherwise.
    NonAnalytic,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscPoint {
    pub kind: PointKind,
    pub chart: Chart,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportIdeal {
    ZeroIdeal,
    Principal(Series),
    Maximal(Vec<Series>),
}

impl fmt::Display for SupportIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportIdeal::ZeroIdeal => f.write_str("(0)"),
            SupportIdeal::Principal(g) => write!(f, "({g})"),
            SupportIdeal::Maximal(gs) => {
                let parts: Vec<String> = gs.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

/// Generators of a pair of definition `(A₀, I)` used for continuity checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairOfDefinition {
    pub ideal: Vec<Series>,
    pub ring: Vec<Series>,
}

impl PairOfDefinition {
    /// `(k°⟨T⟩, (ϖ))` in the coordinate `var`.
    pub fn unit_disc(k: &BaseField, var: &str) -> Self {
        PairOfDefinition {
            ideal: vec![Series::constant(&[var], k.pi_pow(1))],
            ring: vec![Series::variable(&[var], var).expect("own variable")],
        }
    }

    /// `(A₀, I^n)`: the ideal generated by `n`-fold products of generators.
    pub fn ideal_power(&self, n: u32) -> Result<Self, PointError> {
        let mut gens = vec![Series::one(self.ideal.first().map(|g| g.vars()).unwrap_or(&[]))];
        for _ in 0..n {
            let mut next = Vec::new();
            for a in &gens {
                for b in &self.ideal {
                    next.push(a.mul(b)?);
                }
            }
            gens = next;
        }
        Ok(PairOfDefinition {
            ideal: gens,
            ring: self.ring.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointType {
    Classical,
    GaussRationalRadius,
    GaussIrrationalRadiusUnsupported,
    Rank2Signed,
    Trivial,
    NonAnalytic,
}

impl PointType {
    pub fn label(self) -> &'static str {
        match self {
            PointType::Classical => "classical",
            PointType::GaussRationalRadius => "gauss-rational-radius",
            PointType::GaussIrrationalRadiusUnsupported => "gauss-irrational-radius-unsupported",
            PointType::Rank2Signed => "rank2-signed",
            PointType::Trivial => "trivial",
            PointType::NonAnalytic => "non-analytic",
        }
    }
}

fn rank1_radius(r: &Value) -> Result<Rational, PointError> {
    match r.logvec() {
        Some([l]) => Ok(l.clone()),
        _ => Err(PointError::BadRadius(r.clone())),
    }
}

impl DiscPoint {
    pub fn classical(alpha: Rational, chart: Chart) -> Self {
        DiscPoint {
            kind: PointKind::Classical { alpha },
            chart,
        }
    }

    pub fn gauss(alpha: Rational, r: Value, chart: Chart) -> Result<Self, PointError> {
        rank1_radius(&r)?;
        Ok(DiscPoint {
            kind: PointKind::Gauss { alpha, r },
            chart,
        })
    }

    pub fn gauss_signed(alpha: Rational, r: Value, sign: Sign, chart: Chart) -> Result<Self, PointError> {
        rank1_radius(&r)?;
        Ok(DiscPoint {
            kind: PointKind::GaussSigned { alpha, r, sign },
            chart,
        })
    }

    /// `x_{0,1−}` on the unit disc.
    pub fn unit_minus() -> Self {
        Self::gauss_signed(Rational::zero(), Value::from_ints(&[0]), Sign::Minus, Chart::UNIT_DISC)
            .expect("rank-1 radius")
    }

    /// `x_{0,1+}` on the unit disc.
    pub fn unit_plus() -> Self {
        Self::gauss_signed(Rational::zero(), Value::from_ints(&[0]), Sign::Plus, Chart::UNIT_DISC)
            .expect("rank-1 radius")
    }

    pub fn trivial(chart: Chart) -> Self {
        DiscPoint {
            kind: PointKind::Trivial,
            chart,
        }
    }

    pub fn non_analytic(chart: Chart) -> Self {
        DiscPoint {
            kind: PointKind::NonAnalytic,
            chart,
        }
    }

    /// `|f(x)|`.
    pub fn eval(&self, k: &BaseField, f: &Series) -> Result<Value, PointError> {
        self.eval_scaled(k, f, &Rational::one())
    }

    /// Evaluation of a signed point with `ε = (1, ε₂)` where `ε₂` has
    /// log-scale `∓scale`. The second coordinate of the result is divided
    /// by `scale`, so equivalent choices give identical output.
    pub fn eval_with_epsilon(&self, k: &BaseField, f: &Series, scale: &Rational) -> Result<Value, PointError> {
        if !scale.is_positive() {
            return Err(PointError::BadEpsilon);
        }
        self.eval_scaled(k, f, scale)
    }

    fn eval_scaled(&self, k: &BaseField, f: &Series, scale: &Rational) -> Result<Value, PointError> {
        match &self.kind {
            PointKind::Classical { alpha } => Ok(f.classical_eval(k, alpha)?),
            PointKind::Gauss { alpha, r } => Ok(f.gauss_eval(k, alpha, r)?),
            PointKind::GaussSigned { alpha, r, sign } => {
                let l = rank1_radius(r)?;
                let eps = match sign {
                    Sign::Minus => -scale.clone(),
                    Sign::Plus => scale.clone(),
                };
                let radius = Value::from_logvec(vec![l, eps])?;
                let v = f.gauss_eval(k, alpha, &radius)?;
                Ok(match v {
                    Value::Zero => Value::Zero,
                    Value::Elem(mut lv) => {
                        lv[1] /= scale;
                        Value::from_logvec(lv)?
                    }
                })
            }
            PointKind::Trivial => {
                let zero = f.is_polynomial() && f.num_terms() == 0;
                if f.precision().degree.is_some() && f.tail().is_none() {
                    return Err(SeriesError::UnknownTail(f.precision().degree.unwrap_or(0)).into());
                }
                Ok(if zero {
                    Value::Zero
                } else {
                    Value::identity(k.ambient_rank())
                })
            }
            PointKind::NonAnalytic => {
                if !f.has_integral_coefficients(k) || f.has_laurent_terms() {
                    return Err(PointError::NonIntegral);
                }
                let unit = k.valuation(&f.constant_term()) == Some(0);
                Ok(if unit {
                    Value::identity(k.ambient_rank())
                } else {
                    Value::Zero
                })
            }
        }
    }

    /// `supp x = {f : |f(x)| = 0}` in the chart coordinate.
    pub fn support(&self, k: &BaseField) -> SupportIdeal {
        let var = self.chart.variable();
        match &self.kind {
            PointKind::Classical { alpha } => SupportIdeal::Principal(Series::from_terms(
                &[var],
                vec![(vec![1], Rational::one()), (vec![0], -alpha.clone())],
            )),
            PointKind::Gauss { .. } | PointKind::GaussSigned { .. } | PointKind::Trivial => SupportIdeal::ZeroIdeal,
            PointKind::NonAnalytic => SupportIdeal::Maximal(vec![
                Series::constant(&[var], k.pi_pow(1)),
                Series::variable(&[var], var).expect("own variable"),
            ]),
        }
    }

    /// Continuity against a pair of definition: every ideal generator has a
    /// cofinal (or zero) value, and `|ϖ a(x)| < 1` for every product `a` of
    /// ring generators. The latter is equivalent to `|a(x)|` having rank-1
    /// image at most `1` for each generator.
    pub fn is_continuous(&self, k: &BaseField, pod: &PairOfDefinition) -> Result<bool, PointError> {
        if pod.ideal.is_empty() {
            return Err(PointError::EmptyGenerators);
        }
        for b in &pod.ideal {
            let v = self.eval(k, b)?;
            if !v.is_zero() && !v.is_cofinal()? {
                return Ok(false);
            }
        }
        let one = Value::from_ints(&[0]);
        for a in &pod.ring {
            let v = self.eval(k, a)?.convex_quotient();
            if v.try_cmp(&one)? == Ordering::Greater {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equivalence: equal kinds up to re-centering within the radius, checked
    /// against the probe list as a falsification oracle.
    pub fn equivalent(&self, other: &DiscPoint, k: &BaseField, probes: &[Series]) -> Result<bool, PointError> {
        if self.chart != other.chart {
            return Err(PointError::ChartMismatch(self.chart.clone(), other.chart.clone()));
        }
        let structural = match (&self.kind, &other.kind) {
            (PointKind::Gauss { alpha: a, r }, PointKind::Gauss { alpha: b, r: s }) => {
                r == s && within(k, a, b, r, false)?
            }
            (
                PointKind::GaussSigned { alpha: a, r, sign },
                PointKind::GaussSigned {
                    alpha: b,
                    r: s,
                    sign: t,
                },
            ) => r == s && sign == t && within(k, a, b, r, *sign == Sign::Minus)?,
            (x, y) => x == y,
        };
        if !structural {
            return Ok(false);
        }
        let mut values = Vec::new();
        for f in probes {
            match (self.eval(k, f), other.eval(k, f)) {
                (Ok(u), Ok(v)) => values.push((u, v)),
                (Err(PointError::Series(_)), _) | (_, Err(PointError::Series(_))) => {}
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
        for (i, (u1, v1)) in values.iter().enumerate() {
            for (u2, v2) in &values[i + 1..] {
                if u1.try_cmp(u2)? != v1.try_cmp(v2)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn classify(&self) -> PointType {
        match &self.kind {
            PointKind::Classical { .. } => PointType::Classical,
            PointKind::Gauss { .. } => PointType::GaussRationalRadius,
            PointKind::GaussSigned { .. } => PointType::Rank2Signed,
            PointKind::Trivial => PointType::Trivial,
            PointKind::NonAnalytic => PointType::NonAnalytic,
        }
    }
}

/// `|a − b| ≤ r`, or `< r` when `strict`.
fn within(k: &BaseField, a: &Rational, b: &Rational, r: &Value, strict: bool) -> Result<bool, PointError> {
    let d = k.abs_rational(&(a - b)).embed(r.rank().unwrap_or(1))?;
    let ord = d.try_cmp(r)?;
    Ok(ord == Ordering::Less || (!strict && ord == Ordering::Equal))
}

impl fmt::Display for DiscPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PointKind::Classical { alpha } => write!(f, "classical({alpha}) on {}", self.chart),
            PointKind::Gauss { alpha, r } => write!(f, "gauss({alpha}, {r}) on {}", self.chart),
            PointKind::GaussSigned { alpha, r, sign } => {
                let s = if *sign == Sign::Minus { "-" } else { "+" };
                write!(f, "gauss({alpha}, {r}{s}) on {}", self.chart)
            }
            PointKind::Trivial => write!(f, "trivial on {}", self.chart),
            PointKind::NonAnalytic => write!(f, "non-analytic on {}", self.chart),
        }
    }
}

/// Continuous valuations of an affinoid field `(k, k⁺)` with `k⁺` of rank
/// `n`: one per nonzero prime of `k⁺`, plus the trivial valuation when the
/// topology is discrete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinoidFieldPoints {
    pub count: usize,
    /// `height-h` labels of the primes whose localizations give the points.
    pub chain: Vec<String>,
}

pub fn affinoid_field_points(rank: usize, discrete: bool) -> Result<AffinoidFieldPoints, PointError> {
    if !discrete && rank == 0 {
        return Err(PointError::AnalyticRankZero);
    }
    let lowest = if discrete { 0 } else { 1 };
    let chain: Vec<String> = (lowest..=rank).map(|h| format!("height-{h}")).collect();
    Ok(AffinoidFieldPoints {
        count: chain.len(),
        chain,
    })
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

    fn t() -> Series {
        Series::variable(&["T"], "T").unwrap()
    }

    #[test]
    fn signed_points_are_infinitesimally_off_the_unit_circle() {
        let k = k5();
        assert_eq!(
            DiscPoint::unit_minus().eval(&k, &t()).unwrap(),
            Value::from_ints(&[0, -1])
        );
        assert_eq!(
            DiscPoint::unit_plus().eval(&k, &t()).unwrap(),
            Value::from_ints(&[0, 1])
        );
        let x = DiscPoint::classical(q(5), Chart::UNIT_DISC);
        assert_eq!(x.eval(&k, &t().pow(2).unwrap()).unwrap(), Value::from_ints(&[-2]));
    }

    #[test]
    fn supports() {
        let k = BaseField::new(3).unwrap();
        let x = DiscPoint::classical(q(0), Chart::Projective { index: 2 });
        assert_eq!(x.support(&k).to_string(), "(S)");
        let g = DiscPoint::gauss(q(0), Value::from_ints(&[-1]), Chart::UNIT_DISC).unwrap();
        assert_eq!(g.support(&k), SupportIdeal::ZeroIdeal);
        let h = DiscPoint::classical(Rational::new(1.into(), 2.into()), Chart::UNIT_DISC);
        assert_eq!(h.support(&k).to_string(), "(T - 1/2)");
    }

    #[test]
    fn continuity() {
        let k = k5();
        let pod = PairOfDefinition::unit_disc(&k, "T");
        assert!(DiscPoint::unit_minus().is_continuous(&k, &pod).unwrap());
        assert!(DiscPoint::unit_plus().is_continuous(&k, &pod).unwrap());
        assert!(!DiscPoint::trivial(Chart::UNIT_DISC).is_continuous(&k, &pod).unwrap());
        // |T(x)| = |p|^{-1} makes p·T^2 large.
        let far = DiscPoint::gauss(q(0), Value::from_ints(&[1]), Chart::UNIT_DISC).unwrap();
        assert!(!far.is_continuous(&k, &pod).unwrap());
        let empty = PairOfDefinition {
            ideal: vec![],
            ring: vec![],
        };
        assert_eq!(far.is_continuous(&k, &empty), Err(PointError::EmptyGenerators));
    }

    #[test]
    fn equivalence() {
        let k = k5();
        let probes = vec![t(), Series::one(&["T"]), Series::constant(&["T"], q(5))];
        let g = DiscPoint::gauss(q(0), Value::from_ints(&[0]), Chart::UNIT_DISC).unwrap();
        assert!(!g.equivalent(&DiscPoint::unit_minus(), &k, &probes).unwrap());
        assert!(g.equivalent(&g, &k, &probes).unwrap());
        let g1 = DiscPoint::gauss(q(1), Value::from_ints(&[0]), Chart::UNIT_DISC).unwrap();
        assert!(g.equivalent(&g1, &k, &probes).unwrap());
        let m1 = DiscPoint::gauss_signed(q(1), Value::from_ints(&[0]), Sign::Minus, Chart::UNIT_DISC).unwrap();
        assert!(!DiscPoint::unit_minus().equivalent(&m1, &k, &probes).unwrap());
        let other = DiscPoint::classical(q(0), Chart::Projective { index: 1 });
        assert!(matches!(
            g.equivalent(&other, &k, &probes),
            Err(PointError::ChartMismatch(..))
        ));
    }

    #[test]
    fn epsilon_choice_does_not_matter() {
        let k = k5();
        let f = Series::parse(5, "T^3 + 5*T - 1", &["T"]).unwrap();
        let x = DiscPoint::unit_minus();
        let a = x.eval_with_epsilon(&k, &f, &Rational::new(1.into(), 2.into())).unwrap();
        let b = x.eval_with_epsilon(&k, &f, &Rational::new(1.into(), 3.into())).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn labels() {
        assert_eq!(
            DiscPoint::classical(q(5), Chart::UNIT_DISC).classify().label(),
            "classical"
        );
        let g = DiscPoint::gauss(
            q(0),
            Value::rank1(Rational::new((-1).into(), 2.into())),
            Chart::UNIT_DISC,
        );
        assert_eq!(g.unwrap().classify().label(), "gauss-rational-radius");
        assert_eq!(DiscPoint::unit_plus().classify().label(), "rank2-signed");
    }

    #[test]
    fn affinoid_field_counts() {
        assert_eq!(affinoid_field_points(1, false).unwrap().count, 1);
        assert_eq!(affinoid_field_points(1, true).unwrap().count, 2);
        assert_eq!(affinoid_field_points(3, false).unwrap().count, 3);
        assert_eq!(affinoid_field_points(0, false), Err(PointError::AnalyticRankZero));
        assert_eq!(affinoid_field_points(0, true).unwrap().count, 1);
    }

    fn poly() -> impl Strategy<Value = Series> {
        prop::collection::vec((-30i64..30, 0i64..4), 1..5)
            .prop_map(|cs| Series::from_terms(&["T"], cs.into_iter().map(|(c, e)| (vec![e], q(c)))))
    }

    fn point() -> impl Strategy<Value = DiscPoint> {
        prop_oneof![
            (-20i64..20).prop_map(|a| DiscPoint::classical(q(a), Chart::UNIT_DISC)),
            (-20i64..20, -2i64..2)
                .prop_map(|(a, r)| { DiscPoint::gauss(q(a), Value::from_ints(&[r]), Chart::UNIT_DISC).unwrap() }),
            (-20i64..20, -2i64..2, any::<bool>()).prop_map(|(a, r, plus)| {
                let s = if plus { Sign::Plus } else { Sign::Minus };
                DiscPoint::gauss_signed(q(a), Value::from_ints(&[r]), s, Chart::UNIT_DISC).unwrap()
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn points_are_valuations(x in point(), f in poly(), g in poly()) {
            let k = k5();
            let fv = x.eval(&k, &f).unwrap();
            let gv = x.eval(&k, &g).unwrap();
            let prod = x.eval(&k, &f.mul(&g).unwrap()).unwrap();
            let expected = if fv.is_zero() || gv.is_zero() { Value::Zero } else { fv.mul(&gv).unwrap() };
            prop_assert_eq!(prod, expected);
            let sum = x.eval(&k, &f.add(&g).unwrap()).unwrap();
            let max = fv.clone().try_max(gv.clone()).unwrap();
            prop_assert!(sum.try_cmp(&max).unwrap() != Ordering::Greater);
            if fv != gv {
                prop_assert_eq!(sum, max);
            }
        }

        /// Fifty probes per case; the dominant index is computed directly.
        #[test]
        fn epsilon_invariance_on_probe_sets(
            probes in prop::collection::vec(prop::collection::vec(-30i64..30, 1..5), 50),
            e1 in 1i64..20,
            e2 in 1i64..20,
        ) {
            let k = k5();
            let x = DiscPoint::unit_minus();
            let (s1, s2) = (Rational::new(1.into(), e1.into()), Rational::new(1.into(), (e2 + 20).into()));
            for c in probes {
                let coeffs: Vec<Rational> = c.iter().map(|x| q(*x)).collect();
                let f = Series::univariate("T", &coeffs);
                let argmax = |scale: &Rational| {
                    let mut best: Option<(usize, Value)> = None;
                    for (i, a) in coeffs.iter().enumerate() {
                        let Some(v) = k.valuation(a) else { continue };
                        let term = Value::from_logvec(vec![q(-v), -scale * q(i as i64)]).unwrap();
                        if best.as_ref().is_none_or(|(_, b)| term > *b) {
                            best = Some((i, term));
                        }
                    }
                    best.map(|(i, _)| i)
                };
                prop_assert_eq!(argmax(&s1), argmax(&s2));
                prop_assert_eq!(
                    x.eval_with_epsilon(&k, &f, &s1).unwrap(),
                    x.eval_with_epsilon(&k, &f, &s2).unwrap()
                );
            }
        }

        #[test]
        fn continuity_survives_ideal_powers(x in point(), n in 1u32..3) {
            let k = k5();
            let pod = PairOfDefinition::unit_disc(&k, "T");
            if x.is_continuous(&k, &pod).unwrap() {
                prop_assert!(x.is_continuous(&k, &pod.ideal_power(n).unwrap()).unwrap());
            }
        }
    }
}

//! Elements of Tate-type algebras.
//!
//! A [`Series`] has an exact finite head, an optional closed-form tail for
//! univariate series, and a precision `(N, D)`: coefficients are known
//! modulo `ϖ^N` and terms are known up to total degree `D`. A series with
//! finite `D` and no tail is *truncated*, its coefficients beyond `D` are
//! unknown.

mod analysis;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::basefield::{prime_power, rational_valuation};
use crate::valgroup::ValueError;
use crate::Rational;

pub use analysis::{taylor_shift_coefficients, WeightDescriptor};
pub use parse::{identifiers, ParseError};

/// Exponent tuple, one entry per variable. Negative entries are Laurent terms.
pub type Exponent = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("variable mismatch: [{left}] vs [{right}]")]
    VariableMismatch { left: String, right: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("operation needs a univariate series, got [{0}]")]
    NotUnivariate(String),
    #[error("coefficients beyond degree {0} are unknown")]
    UnknownTail(u32),
    #[error("tail is not dominated: the supremum over the tail is unbounded")]
    NonDominatedTail,
    #[error("value is zero at p-adic precision {0}")]
    ZeroAtPrecision(i64),
    #[error("value cannot be decided at p-adic precision {0}")]
    Undecidable(i64),
    #[error("Laurent terms are not supported in {0}")]
    LaurentUnsupported(&'static str),
    #[error("no single term dominates the evaluation")]
    NoDominantTerm,
    #[error("cannot re-center an infinite series outside its disc of definition")]
    CannotRecenter,
    #[error("radius must be a nonzero value")]
    ZeroRadius,
    #[error("weights are not voluminous: variable {0} has no nonzero weight")]
    NotVoluminous(usize),
    #[error("only singleton weights are supported, variable {0} has {1}")]
    UnsupportedWeights(usize, usize),
    #[error("expected {expected} weight sets, got {got}")]
    WeightArity { expected: usize, got: usize },
    #[error("primes differ: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Value(#[from] ValueError),
}

/// Closed-form coefficient rule for indices beyond the head.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tail {
    /// `c · ϖ^{a·i + b}` with `ϖ = p`.
    Geometric { p: u64, c: Rational, a: i64, b: i64 },
    /// `c · ϖ^{a·i²}` with `ϖ = p`.
    SuperGeometric { p: u64, c: Rational, a: i64 },
}

impl Tail {
    pub fn coefficient(&self, i: i64) -> Rational {
        match self {
            Tail::Geometric { p, c, a, b } => c * prime_power(*p, a * i + b),
            Tail::SuperGeometric { p, c, a } => c * prime_power(*p, a * i * i),
        }
    }

    pub fn prime(&self) -> u64 {
        match self {
            Tail::Geometric { p, .. } | Tail::SuperGeometric { p, .. } => *p,
        }
    }

    pub fn leading(&self) -> &Rational {
        match self {
            Tail::Geometric { c, .. } | Tail::SuperGeometric { c, .. } => c,
        }
    }

    /// `v_p(c)`; `None` when `c = 0`.
    pub fn leading_valuation(&self) -> Option<i64> {
        rational_valuation(self.leading(), &self.prime().into())
    }

    fn with_leading(&self, c: Rational) -> Tail {
        match self {
            Tail::Geometric { p, a, b, .. } => Tail::Geometric { p: *p, c, a: *a, b: *b },
            Tail::SuperGeometric { p, a, .. } => Tail::SuperGeometric { p: *p, c, a: *a },
        }
    }

    fn same_shape(&self, other: &Tail) -> bool {
        match (self, other) {
            (
                Tail::Geometric { p, a, b, .. },
                Tail::Geometric {
                    p: p2, a: a2, b: b2, ..
                },
            ) => p == p2 && a == a2 && b == b2,
            (Tail::SuperGeometric { p, a, .. }, Tail::SuperGeometric { p: p2, a: a2, .. }) => p == p2 && a == a2,
            _ => false,
        }
    }
}

/// `(N, D)`: p-adic precision and degree cutoff; `None` means exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Precision {
    pub padic: Option<i64>,
    pub degree: Option<u32>,
}

fn min_opt<T: Ord>(a: Option<T>, b: Option<T>) -> Option<T> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Precision {
    pub const EXACT: Precision = Precision {
        padic: None,
        degree: None,
    };

    pub fn new(padic: i64, degree: u32) -> Self {
        Precision {
            padic: Some(padic),
            degree: Some(degree),
        }
    }

    pub fn meet(self, other: Precision) -> Precision {
        Precision {
            padic: min_opt(self.padic, other.padic),
            degree: min_opt(self.degree, other.degree),
        }
    }
}

/// Total degree used for truncation windows: `Σ |e_i|`.
pub fn total_degree(e: &[i64]) -> u64 {
    e.iter().map(|x| x.unsigned_abs()).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Series {
    vars: Vec<String>,
    head: BTreeMap<Exponent, Rational>,
    tail: Option<Tail>,
    precision: Precision,
}

enum Shape {
    Exact,
    Tailed(u32),
    Truncated(u32),
}

impl Series {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        Series {
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
            head: BTreeMap::new(),
            tail: None,
            precision: Precision::EXACT,
        }
    }

    pub fn constant<S: AsRef<str>>(vars: &[S], c: Rational) -> Self {
        let n = vars.len();
        Self::monomial(vars, vec![0; n], c)
    }

    pub fn one<S: AsRef<str>>(vars: &[S]) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn monomial<S: AsRef<str>>(vars: &[S], exponent: Exponent, c: Rational) -> Self {
        assert_eq!(exponent.len(), vars.len(), "exponent arity");
        let mut s = Self::zero(vars);
        s.add_term(exponent, c);
        s
    }

    /// The coordinate function `name`.
    pub fn variable<S: AsRef<str>>(vars: &[S], name: &str) -> Result<Self, SeriesError> {
        let idx = vars
            .iter()
            .position(|v| v.as_ref() == name)
            .ok_or_else(|| SeriesError::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Ok(Self::monomial(vars, e, Rational::one()))
    }

    /// Univariate polynomial `Σ a_i T^i`.
    pub fn univariate(var: &str, coeffs: &[Rational]) -> Self {
        let mut s = Self::zero(&[var]);
        for (i, c) in coeffs.iter().enumerate() {
            s.add_term(vec![i as i64], c.clone());
        }
        s
    }

    /// Univariate series with the given head coefficients up to `cutoff` and a
    /// closed-form tail beyond it. Head entries past `cutoff` are ignored.
    pub fn with_tail(var: &str, head: &[Rational], cutoff: u32, tail: Tail) -> Self {
        let mut s = Self::zero(&[var]);
        for (i, c) in head.iter().enumerate().take(cutoff as usize + 1) {
            s.add_term(vec![i as i64], c.clone());
        }
        if !tail.leading().is_zero() {
            s.precision.degree = Some(cutoff);
            s.tail = Some(tail);
        }
        s
    }

    /// `Σ_{i≥0} p^{a i + b} T^i` with the head materialized up to `cutoff`.
    pub fn geometric(p: u64, var: &str, a: i64, b: i64, cutoff: u32) -> Self {
        let tail = Tail::Geometric {
            p,
            c: Rational::one(),
            a,
            b,
        };
        let head: Vec<Rational> = (0..=cutoff as i64).map(|i| tail.coefficient(i)).collect();
        Self::with_tail(var, &head, cutoff, tail)
    }

    /// `Σ_{i≥0} p^{a i²} T^i` with the head materialized up to `cutoff`.
    pub fn super_geometric(p: u64, var: &str, a: i64, cutoff: u32) -> Self {
        let tail = Tail::SuperGeometric {
            p,
            c: Rational::one(),
            a,
        };
        let head: Vec<Rational> = (0..=cutoff as i64).map(|i| tail.coefficient(i)).collect();
        Self::with_tail(var, &head, cutoff, tail)
    }

    /// Builds a series from explicit terms; repeated exponents are summed.
    pub fn from_terms<S, I>(vars: &[S], terms: I) -> Self
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        let mut s = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent arity");
            s.add_term(e, c);
        }
        s
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.head.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Forgets everything beyond total degree `d`.
    pub fn truncate(mut self, d: u32) -> Self {
        let known = if self.tail.is_some() {
            None
        } else {
            self.precision.degree
        };
        self.materialize_to(d as i64);
        self.head.retain(|e, _| total_degree(e) <= d as u64);
        self.tail = None;
        self.precision.degree = Some(known.map_or(d, |old| old.min(d)));
        self
    }

    pub fn with_padic_precision(mut self, n: i64) -> Self {
        self.precision.padic = Some(self.precision.padic.map_or(n, |old| old.min(n)));
        self
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.head.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.head.len()
    }

    pub fn coefficient(&self, e: &[i64]) -> Rational {
        if let (Some(t), Some(d)) = (&self.tail, self.precision.degree) {
            if e.len() == 1 && e[0] > d as i64 {
                return t.coefficient(e[0]);
            }
        }
        self.head.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn tail(&self) -> Option<&Tail> {
        self.tail.as_ref()
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Exactly zero.
    pub fn is_zero(&self) -> bool {
        self.head.is_empty() && self.tail.is_none() && self.precision.degree.is_none()
    }

    /// Known exactly with finite support.
    pub fn is_polynomial(&self) -> bool {
        self.tail.is_none() && self.precision.degree.is_none()
    }

    pub fn is_truncated(&self) -> bool {
        self.tail.is_none() && self.precision.degree.is_some()
    }

    pub fn has_laurent_terms(&self) -> bool {
        self.head.keys().any(|e| e.iter().any(|x| *x < 0))
    }

    pub fn is_constant(&self) -> bool {
        self.is_polynomial() && self.head.keys().all(|e| e.iter().all(|x| *x == 0))
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.vars.len()])
    }

    /// The single term of an exact monomial `c · x^e`.
    pub fn as_monomial(&self) -> Option<(&Exponent, &Rational)> {
        if !self.is_polynomial() || self.head.len() != 1 {
            return None;
        }
        self.head.iter().next()
    }

    /// Largest total degree in the head.
    pub fn head_degree(&self) -> Option<u64> {
        self.head.keys().map(|e| total_degree(e)).max()
    }

    /// Degree in variable `idx` over the head.
    pub fn degree_in(&self, idx: usize) -> Option<i64> {
        self.head.keys().map(|e| e[idx]).max()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Whether variable `idx` occurs in the head.
    pub fn uses_var(&self, idx: usize) -> bool {
        self.head.keys().any(|e| e[idx] != 0)
    }

    fn max_index(&self) -> Option<i64> {
        self.head.keys().map(|e| e[0]).max()
    }

    fn min_index(&self) -> Option<i64> {
        self.head.keys().map(|e| e[0]).min()
    }

    fn require_univariate(&self) -> Result<(), SeriesError> {
        if self.vars.len() != 1 {
            return Err(SeriesError::NotUnivariate(self.vars.join(",")));
        }
        Ok(())
    }

    fn require_same_vars(&self, other: &Series) -> Result<(), SeriesError> {
        if self.vars != other.vars {
            return Err(SeriesError::VariableMismatch {
                left: self.vars.join(","),
                right: other.vars.join(","),
            });
        }
        Ok(())
    }

    fn shape(&self) -> Shape {
        match (self.precision.degree, &self.tail) {
            (None, _) => Shape::Exact,
            (Some(d), Some(_)) => Shape::Tailed(d),
            (Some(d), None) => Shape::Truncated(d),
        }
    }

    /// Moves tail coefficients up to index `d` into the head.
    fn materialize_to(&mut self, d: i64) {
        let (Some(tail), Some(cutoff)) = (self.tail.clone(), self.precision.degree) else {
            return;
        };
        if d <= cutoff as i64 {
            return;
        }
        for i in (cutoff as i64 + 1)..=d {
            self.add_term(vec![i], tail.coefficient(i));
        }
        self.precision.degree = Some(d as u32);
    }

    fn cutoff_or_degree(&self) -> i64 {
        match self.shape() {
            Shape::Exact => self.max_index().unwrap_or(0).max(0),
            Shape::Tailed(d) | Shape::Truncated(d) => d as i64,
        }
    }

    pub fn neg(&self) -> Series {
        self.scale(&-Rational::one())
    }

    /// Multiplication by a constant.
    pub fn scale(&self, q: &Rational) -> Series {
        if q.is_zero() {
            let mut z = Series::zero(&self.vars);
            z.precision.padic = self.precision.padic;
            return z;
        }
        let mut out = self.clone();
        for c in out.head.values_mut() {
            *c *= q;
        }
        out.tail = out.tail.map(|t| {
            let c = t.leading() * q;
            t.with_leading(c)
        });
        out
    }

    pub fn add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.require_same_vars(other)?;
        let padic = min_opt(self.precision.padic, other.precision.padic);
        let mut a = self.clone();
        let mut b = other.clone();
        let truncation = match (a.shape(), b.shape()) {
            (Shape::Truncated(x), Shape::Truncated(y)) => Some(x.min(y)),
            (Shape::Truncated(x), _) | (_, Shape::Truncated(x)) => Some(x),
            _ => None,
        };
        let mut out = Series::zero(&self.vars);
        out.precision.padic = padic;
        if let Some(d) = truncation {
            a.materialize_to(d as i64);
            b.materialize_to(d as i64);
            for (e, c) in a.head.into_iter().chain(b.head) {
                if total_degree(&e) <= d as u64 {
                    out.add_term(e, c);
                }
            }
            out.precision.degree = Some(d);
            return Ok(out);
        }
        if a.tail.is_none() && b.tail.is_none() {
            for (e, c) in a.head.into_iter().chain(b.head) {
                out.add_term(e, c);
            }
            return Ok(out);
        }
        let d = a.cutoff_or_degree().max(b.cutoff_or_degree());
        a.materialize_to(d);
        b.materialize_to(d);
        for (e, c) in a.head.into_iter().chain(b.head) {
            out.add_term(e, c);
        }
        match (a.tail, b.tail) {
            (Some(t), None) | (None, Some(t)) => {
                out.tail = Some(t);
                out.precision.degree = Some(d as u32);
            }
            (Some(t), Some(u)) if t.same_shape(&u) => {
                let c = t.leading() + u.leading();
                if !c.is_zero() {
                    out.tail = Some(t.with_leading(c));
                    out.precision.degree = Some(d as u32);
                }
            }
            (Some(_), Some(_)) => out.precision.degree = Some(d as u32),
            (None, None) => unreachable!("handled above"),
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.require_same_vars(other)?;
        let padic = min_opt(self.precision.padic, other.precision.padic);
        let laurent = self.has_laurent_terms() || other.has_laurent_terms();
        let mut a = self.clone();
        let mut b = other.clone();
        let mut out = Series::zero(&self.vars);
        out.precision.padic = padic;

        let truncation = match (a.shape(), b.shape()) {
            (Shape::Truncated(x), Shape::Truncated(y)) => Some(x.min(y)),
            (Shape::Truncated(x), _) | (_, Shape::Truncated(x)) => Some(x),
            _ => None,
        };
        if let Some(d) = truncation {
            if laurent {
                return Err(SeriesError::LaurentUnsupported("products of truncated series"));
            }
            a.materialize_to(d as i64);
            b.materialize_to(d as i64);
            out.head = convolve(&a.head, &b.head, Some(d as u64));
            out.precision.degree = Some(d);
            return Ok(out);
        }
        if a.tail.is_none() && b.tail.is_none() {
            out.head = convolve(&a.head, &b.head, None);
            return Ok(out);
        }
        if laurent {
            return Err(SeriesError::LaurentUnsupported("products with infinite tails"));
        }
        if a.tail.is_none() {
            std::mem::swap(&mut a, &mut b);
        }
        let Shape::Tailed(df) = a.shape() else {
            unreachable!("a has a tail")
        };
        let tail = a.tail.clone().expect("a has a tail");
        if b.is_zero() {
            return Ok(out);
        }
        match (&tail, b.tail.is_some()) {
            (Tail::Geometric { p, a: slope, .. }, false) => {
                let dg = b.max_index().unwrap_or(0);
                let cutoff = df as i64 + dg;
                a.materialize_to(cutoff);
                out.head = convolve(&a.head, &b.head, Some(cutoff as u64));
                let factor: Rational = b
                    .head
                    .iter()
                    .map(|(e, g)| g * prime_power(*p, -slope * e[0]))
                    .fold(Rational::zero(), |acc, x| acc + x);
                let c = tail.leading() * factor;
                if !c.is_zero() {
                    out.tail = Some(tail.with_leading(c));
                    out.precision.degree = Some(cutoff as u32);
                }
                Ok(out)
            }
            (Tail::SuperGeometric { .. }, false) if b.is_constant() => Ok(a.scale(&b.constant_term())),
            (_, false) => {
                let cutoff = df as i64 + b.max_index().unwrap_or(0);
                a.materialize_to(cutoff);
                out.head = convolve(&a.head, &b.head, Some(cutoff as u64));
                out.precision.degree = Some(cutoff as u32);
                Ok(out)
            }
            (_, true) => {
                let cutoff = a.cutoff_or_degree().max(b.cutoff_or_degree());
                a.materialize_to(cutoff);
                b.materialize_to(cutoff);
                out.head = convolve(&a.head, &b.head, Some(cutoff as u64));
                out.precision.degree = Some(cutoff as u32);
                Ok(out)
            }
        }
    }

    /// `self^n` for `n ≥ 0`; negative powers need an exact monomial.
    pub fn pow(&self, n: i64) -> Result<Series, SeriesError> {
        if n < 0 {
            let (e, c) = self
                .as_monomial()
                .ok_or_else(|| SeriesError::InvalidArgument("negative power of a non-monomial".into()))?;
            let m = n.unsigned_abs() as i64;
            let e: Exponent = e.iter().map(|x| -x * m).collect();
            let c = num_traits::pow(c.recip(), m as usize);
            return Ok(Series::monomial(&self.vars, e, c));
        }
        let mut acc = Series::one(&self.vars);
        acc.precision.padic = self.precision.padic;
        let mut base = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Re-expresses the series over `new_vars`, which must contain every
    /// variable that occurs.
    pub fn with_vars<S: AsRef<str>>(&self, new_vars: &[S]) -> Result<Series, SeriesError> {
        let new_vars: Vec<String> = new_vars.iter().map(|s| s.as_ref().to_string()).collect();
        if self.tail.is_some() && new_vars.len() != 1 {
            return Err(SeriesError::NotUnivariate(new_vars.join(",")));
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match new_vars.iter().position(|w| w == v) {
                Some(j) => map.push(Some(j)),
                None if !self.uses_var(i) => map.push(None),
                None => return Err(SeriesError::UnknownVariable(v.clone())),
            }
        }
        let mut out = Series::zero(&new_vars);
        out.precision = self.precision;
        out.tail = self.tail.clone();
        for (e, c) in &self.head {
            let mut ne = vec![0; new_vars.len()];
            for (i, j) in map.iter().enumerate() {
                if let Some(j) = j {
                    ne[*j] = e[i];
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Exact evaluation of a polynomial at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, SeriesError> {
        if !self.is_polynomial() {
            return Err(SeriesError::UnknownTail(self.precision.degree.unwrap_or(0)));
        }
        if point.len() != self.vars.len() {
            return Err(SeriesError::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                self.vars.len(),
                point.len()
            )));
        }
        let mut total = Rational::zero();
        for (e, c) in &self.head {
            let mut term = c.clone();
            for (x, k) in point.iter().zip(e) {
                if *k < 0 && x.is_zero() {
                    return Err(SeriesError::InvalidArgument("Laurent term at zero".into()));
                }
                term *= num_traits::pow(if *k < 0 { x.recip() } else { x.clone() }, k.unsigned_abs() as usize);
            }
            total += term;
        }
        Ok(total)
    }

    /// Replaces variable `var` by `replacement` (same variable list). Negative
    /// powers of `var` require `replacement` to be an exact monomial.
    pub fn substitute(&self, var: &str, replacement: &Series) -> Result<Series, SeriesError> {
        self.require_same_vars(replacement)?;
        let idx = self
            .var_index(var)
            .ok_or_else(|| SeriesError::UnknownVariable(var.into()))?;
        if !self.is_polynomial() {
            return Err(SeriesError::UnknownTail(self.precision.degree.unwrap_or(0)));
        }
        let mut out = Series::zero(&self.vars);
        out.precision = self.precision.meet(replacement.precision);
        let mut cache: BTreeMap<i64, Series> = BTreeMap::new();
        for (e, c) in &self.head {
            let k = e[idx];
            let power = match cache.get(&k) {
                Some(s) => s.clone(),
                None => {
                    let s = replacement.pow(k)?;
                    cache.insert(k, s.clone());
                    s
                }
            };
            let mut rest = e.clone();
            rest[idx] = 0;
            let term = Series::monomial(&self.vars, rest, c.clone()).mul(&power)?;
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Equality of the known parts modulo `ϖ^n` up to total degree `d`.
    pub fn eq_at_precision(&self, other: &Series, n: i64, d: u32) -> Result<bool, SeriesError> {
        let diff = self.sub(other)?.truncate(d);
        let p = self.prime_hint().or_else(|| other.prime_hint());
        Ok(diff.head.values().all(|c| match p {
            Some(p) => rational_valuation(c, &p.into()).is_none_or(|v| v >= n),
            None => c.is_zero(),
        }))
    }

    fn prime_hint(&self) -> Option<u64> {
        self.tail.as_ref().map(Tail::prime)
    }

    /// Maps every coefficient through `f`, dropping zeros. Tails are kept only
    /// if `f` is multiplicative on them, so callers must pass exact series.
    pub fn map_coefficients(&self, f: impl Fn(&Rational) -> Rational) -> Series {
        let mut out = Series::zero(&self.vars);
        out.precision = self.precision;
        for (e, c) in &self.head {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Keeps only terms satisfying `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&[i64], &Rational) -> bool) -> Series {
        let mut out = self.clone();
        out.head.retain(|e, c| keep(e, c));
        out
    }
}

fn convolve(
    a: &BTreeMap<Exponent, Rational>,
    b: &BTreeMap<Exponent, Rational>,
    max_degree: Option<u64>,
) -> BTreeMap<Exponent, Rational> {
    let mut out: BTreeMap<Exponent, Rational> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if max_degree.is_some_and(|d| total_degree(&e) > d) {
                continue;
            }
            *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn fmt_monomial(vars: &[String], e: &[i64]) -> String {
    let mut parts = Vec::new();
    for (v, k) in vars.iter().zip(e) {
        match *k {
            0 => {}
            1 => parts.push(v.clone()),
            k => parts.push(format!("{v}^{k}")),
        }
    }
    parts.join("*")
}

fn fmt_term(vars: &[String], e: &[i64], c: &Rational, first: bool) -> String {
    let mono = fmt_monomial(vars, e);
    let sign = if c.is_negative() { "-" } else { "+" };
    let mag = c.abs();
    let body = if mono.is_empty() {
        mag.to_string()
    } else if mag.is_one() {
        mono
    } else {
        format!("{mag}*{mono}")
    };
    match (first, sign) {
        (true, "+") => body,
        (true, _) => format!("-{body}"),
        (false, s) => format!(" {s} {body}"),
    }
}

impl fmt::Display for Series {
    /// Terms in descending exponent order, then any tail or truncation marker.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, (e, c)) in self.head.iter().rev().enumerate() {
            out.push_str(&fmt_term(&self.vars, e, c, i == 0));
        }
        let var = self.vars.first().map(String::as_str).unwrap_or("T");
        match (&self.tail, self.precision.degree) {
            (Some(Tail::Geometric { p, c, a, b }), Some(d)) => {
                let lead = if c.is_one() { String::new() } else { format!("{c}*") };
                out.push_str(&format!(" + sum_{{i>{d}}} {lead}{p}^({a}*i{b:+})*{var}^i"));
            }
            (Some(Tail::SuperGeometric { p, c, a }), Some(d)) => {
                let lead = if c.is_one() { String::new() } else { format!("{c}*") };
                out.push_str(&format!(" + sum_{{i>{d}}} {lead}{p}^({a}*i^2)*{var}^i"));
            }
            (None, Some(d)) => out.push_str(&format!(" + O(deg>{d})")),
            _ => {}
        }
        if out.is_empty() || out.starts_with(" + ") {
            out.insert(0, '0');
        }
        if let Some(n) = self.precision.padic {
            out.push_str(&format!(" + O(p^{n})"));
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn truncated_geometric_times_linear_is_one() {
        let f = Series::geometric(5, "T", 1, 0, 4).truncate(4);
        let g = Series::univariate("T", &[q(1), q(-5)]);
        let prod = f.mul(&g).unwrap();
        assert_eq!(prod.terms().count(), 1);
        assert_eq!(prod.constant_term(), q(1));
        assert_eq!(prod.precision().degree, Some(4));
    }

    #[test]
    fn exact_geometric_times_linear_is_exactly_one() {
        let f = Series::geometric(5, "T", 1, 0, 4);
        let g = Series::univariate("T", &[q(1), q(-5)]);
        let prod = f.mul(&g).unwrap();
        assert_eq!(prod, Series::one(&["T"]));
    }

    #[test]
    fn tails_of_equal_shape_cancel() {
        let f = Series::geometric(3, "T", 1, 0, 2);
        let g = Series::geometric(3, "T", 1, 0, 6);
        let d = f.sub(&g).unwrap();
        assert!(d.is_zero(), "{d}");
    }

    #[test]
    fn display_is_canonical() {
        let s = Series::from_terms(
            &["S", "T"],
            vec![(vec![0, 0], q(1)), (vec![1, 0], q(5)), (vec![0, 3], q(-1))],
        );
        assert_eq!(s.to_string(), "5*S - T^3 + 1");
        assert_eq!(Series::zero(&["T"]).to_string(), "0");
        let t = Series::monomial(&["T"], vec![-1], Rational::new(1.into(), 2.into()));
        assert_eq!(t.to_string(), "1/2*T^-1");
    }

    #[test]
    fn substitution_inverts_monomials() {
        let vars = ["S", "T"];
        let s = Series::monomial(&vars, vec![-2, 1], q(3));
        let r = Series::monomial(&vars, vec![0, 2], q(2));
        let out = s.substitute("S", &r).unwrap();
        assert_eq!(
            out,
            Series::monomial(&vars, vec![0, -3], Rational::new(3.into(), 4.into()))
        );
    }

    fn small_poly() -> impl Strategy<Value = Series> {
        prop::collection::vec((-4i64..=4, 0i64..5), 0..5)
            .prop_map(|cs| Series::from_terms(&["T"], cs.into_iter().map(|(c, e)| (vec![e], q(c)))))
    }

    proptest! {
        #[test]
        fn ring_axioms_on_polynomials(a in small_poly(), b in small_poly(), c in small_poly()) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(&ab, &b.mul(&a).unwrap());
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = ab.add(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert!(a.sub(&a).unwrap().is_zero());
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in small_poly(), b in small_poly(), x in -5i64..5) {
            let x = [q(x)];
            let prod = a.mul(&b).unwrap().evaluate(&x).unwrap();
            prop_assert_eq!(prod, a.evaluate(&x).unwrap() * b.evaluate(&x).unwrap());
        }

        #[test]
        fn geometric_product_matches_materialized(a in 0i64..3, b in 0i64..3, g in small_poly()) {
            let f = Series::geometric(3, "T", a, b, 3);
            let exact = f.mul(&g).unwrap().truncate(10);
            let approx = f.clone().truncate(10).mul(&g).unwrap();
            prop_assert_eq!(exact, approx);
        }
    }
}

//! Rational subsets `R(f₁,…,fₙ / g)` and coverings by them.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::basefield::BaseField;
use crate::linalg;
use crate::point::{DiscPoint, PointError};
use crate::series::{total_degree, Exponent, Series, SeriesError};
use crate::valgroup::Value;
use crate::Rational;

/// Largest ideal power tried when searching for an open-ideal witness.
pub const MAX_IDEAL_POWER: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubsetError {
    #[error("no certificate that ({0}) generates an open ideal")]
    NotOpen(String),
    #[error("standard rational covering needs a unit-ideal certificate")]
    MissingCertificate,
    #[error("certificate does not verify")]
    BadCertificate,
    #[error("generator list is empty")]
    NoGenerators,
    #[error(transparent)]
    Point(#[from] PointError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// The ring the subsets live over, as far as openness of ideals is concerned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ambient {
    /// A Tate ring: the only open ideal is the unit ideal.
    Tate,
    /// A ring whose ideal of definition is generated by these monomials.
    Adic { ideal: Vec<Series> },
}

/// Why `(f₁,…,fₙ,g)` is open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpenIdealWitness {
    /// `Σ mᵢ eᵢ = 1` over the elements `f₁,…,fₙ,g` in order. Over an adic
    /// ambient the multipliers must have integral coefficients.
    Bezout { multipliers: Vec<Series> },
    /// Element `index` is a unit: in a Tate ring it has a strictly dominant
    /// constant term, in an adic ring it is a unit constant plus an element
    /// of the ideal of definition.
    Unit { index: usize },
    /// Every monomial generator of `I^r` is a multiple of some element.
    ContainsIdealPower { r: u32 },
    /// The subset is the intersection of two witnessed subsets.
    Product(Box<RationalSubset>, Box<RationalSubset>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSubset {
    pub numerators: Vec<Series>,
    pub denominator: Series,
    pub witness: Option<OpenIdealWitness>,
}

impl RationalSubset {
    /// The set `{|fᵢ| ≤ |g| ≠ 0}` without any openness certificate.
    pub fn generalized(numerators: Vec<Series>, denominator: Series) -> Self {
        RationalSubset {
            numerators,
            denominator,
            witness: None,
        }
    }

    /// A rational subset, with a witness found by bounded search.
    pub fn new(
        k: &BaseField,
        ambient: &Ambient,
        numerators: Vec<Series>,
        denominator: Series,
    ) -> Result<Self, SubsetError> {
        let mut s = Self::generalized(numerators, denominator);
        match find_witness(k, ambient, &s.elements()) {
            Some(w) => {
                s.witness = Some(w);
                Ok(s)
            }
            None => Err(SubsetError::NotOpen(s.elements_string())),
        }
    }

    /// `f₁,…,fₙ,g`.
    pub fn elements(&self) -> Vec<Series> {
        let mut v = self.numerators.clone();
        v.push(self.denominator.clone());
        v
    }

    fn elements_string(&self) -> String {
        self.elements()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn is_rational(&self) -> bool {
        self.witness.is_some()
    }

    /// Whether `f` is a unit of the ambient ring, by the witness rules.
    pub fn is_unit(k: &BaseField, ambient: &Ambient, f: &Series) -> bool {
        is_unit(k, ambient, f)
    }

    /// Re-checks the stored witness.
    pub fn verify_witness(&self, k: &BaseField, ambient: &Ambient) -> Result<bool, SubsetError> {
        match &self.witness {
            None => Ok(false),
            Some(OpenIdealWitness::Product(a, b)) => {
                let joint = a.intersect(b)?;
                Ok(a.verify_witness(k, ambient)?
                    && b.verify_witness(k, ambient)?
                    && joint.numerators == self.numerators
                    && joint.denominator == self.denominator)
            }
            Some(w) => verify_witness(k, ambient, &self.elements(), w),
        }
    }

    /// `|fᵢ(x)| ≤ |g(x)| ≠ 0` for all `i`.
    pub fn contains(&self, k: &BaseField, x: &DiscPoint) -> Result<bool, SubsetError> {
        let g = x.eval(k, &self.denominator)?;
        if g.is_zero() {
            return Ok(false);
        }
        for f in &self.numerators {
            let v = x.eval(k, f)?;
            if v.try_cmp(&g).map_err(PointError::from)? == std::cmp::Ordering::Greater {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `R(f/g) ∩ R(f'/g') = R(f f', f g', g f' / g g')`.
    pub fn intersect(&self, other: &RationalSubset) -> Result<RationalSubset, SubsetError> {
        let mut nums = Vec::new();
        for f in &self.numerators {
            for h in &other.numerators {
                nums.push(f.mul(h)?);
            }
            nums.push(f.mul(&other.denominator)?);
        }
        for h in &other.numerators {
            nums.push(self.denominator.mul(h)?);
        }
        let den = self.denominator.mul(&other.denominator)?;
        let witness = (self.witness.is_some() && other.witness.is_some())
            .then(|| OpenIdealWitness::Product(Box::new(self.clone()), Box::new(other.clone())));
        Ok(RationalSubset {
            numerators: nums,
            denominator: den,
            witness,
        })
    }

    /// `R(f ∪ E_r / g)` where `E_r` generates `I^r`; always rational.
    pub fn expansion(&self, ideal: &[Series], r: u32) -> Result<RationalSubset, SubsetError> {
        let mut nums = self.numerators.clone();
        nums.extend(ideal_power_generators(ideal, r)?);
        Ok(RationalSubset {
            numerators: nums,
            denominator: self.denominator.clone(),
            witness: Some(OpenIdealWitness::ContainsIdealPower { r }),
        })
    }
}

impl fmt::Display for RationalSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nums: Vec<String> = self.numerators.iter().map(ToString::to_string).collect();
        write!(f, "R({} / {})", nums.join(", "), self.denominator)
    }
}

/// Generators of `I^r`: all products of `r` generators, deduplicated.
pub fn ideal_power_generators(ideal: &[Series], r: u32) -> Result<Vec<Series>, SubsetError> {
    let Some(first) = ideal.first() else {
        return Err(SubsetError::NoGenerators);
    };
    let mut layer: Vec<(usize, Series)> = vec![(0, Series::one(first.vars()))];
    for _ in 0..r {
        let mut next = Vec::new();
        for (start, s) in &layer {
            for (j, g) in ideal.iter().enumerate().skip(*start) {
                next.push((j, s.mul(g)?));
            }
        }
        layer = next;
    }
    let mut out: Vec<Series> = Vec::new();
    for (_, s) in layer {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

/// `e` is a multiple of the monomial `h` inside the integral ring.
fn monomial_divides(k: &BaseField, h: &Series, e: &Series) -> bool {
    let (Some((eh, ch)), Some((ee, ce))) = (h.as_monomial(), e.as_monomial()) else {
        return false;
    };
    eh.iter().zip(ee).all(|(a, b)| a <= b) && k.valuation(&(ce / ch)).is_some_and(|v| v >= 0)
}

fn has_dominant_constant(k: &BaseField, f: &Series) -> bool {
    if f.has_laurent_terms() || f.vars().len() != 1 {
        return false;
    }
    let c = f.constant_term();
    if c.is_zero() {
        return false;
    }
    let rest = match f.sub(&Series::constant(f.vars(), c.clone())) {
        Ok(r) => r,
        Err(_) => return false,
    };
    let lead = k.abs_rational(&c);
    match rest.gauss_eval(k, &Rational::zero(), &Value::from_ints(&[0])) {
        Ok(v) => v.try_cmp(&lead).is_ok_and(|o| o == std::cmp::Ordering::Less),
        Err(_) => false,
    }
}

fn is_unit(k: &BaseField, ambient: &Ambient, f: &Series) -> bool {
    match ambient {
        Ambient::Tate => has_dominant_constant(k, f),
        Ambient::Adic { ideal } => {
            let zero = vec![0i64; f.vars().len()];
            f.is_polynomial()
                && k.valuation(&f.constant_term()) == Some(0)
                && f.terms().filter(|(e, _)| **e != zero).all(|(e, c)| {
                    let term = Series::monomial(f.vars(), e.clone(), c.clone());
                    ideal.iter().any(|h| monomial_divides(k, h, &term))
                })
        }
    }
}

fn verify_witness(
    k: &BaseField,
    ambient: &Ambient,
    elements: &[Series],
    w: &OpenIdealWitness,
) -> Result<bool, SubsetError> {
    match w {
        OpenIdealWitness::Bezout { multipliers } => {
            if multipliers.len() != elements.len() {
                return Ok(false);
            }
            let mut total = Series::zero(elements[0].vars());
            for (m, e) in multipliers.iter().zip(elements) {
                total = total.add(&m.mul(e)?)?;
            }
            let integral = match ambient {
                Ambient::Tate => true,
                Ambient::Adic { .. } => multipliers.iter().all(|m| m.has_integral_coefficients(k)),
            };
            Ok(integral && total == Series::one(elements[0].vars()))
        }
        OpenIdealWitness::Unit { index } => Ok(elements.get(*index).is_some_and(|f| is_unit(k, ambient, f))),
        OpenIdealWitness::ContainsIdealPower { r } => {
            let Ambient::Adic { ideal } = ambient else {
                return Ok(false);
            };
            let gens = ideal_power_generators(ideal, *r)?;
            Ok(gens.iter().all(|e| elements.iter().any(|h| monomial_divides(k, h, e))))
        }
        OpenIdealWitness::Product(..) => Err(SubsetError::BadCertificate),
    }
}

/// Monomials with nonnegative exponents of total degree at most `d`.
fn monomials_up_to(n: usize, d: u64) -> Vec<Exponent> {
    let mut out = vec![vec![0i64; n]];
    for _ in 0..d {
        let mut next = out.clone();
        for e in &out {
            for i in 0..n {
                let mut f = e.clone();
                f[i] += 1;
                if !next.contains(&f) {
                    next.push(f);
                }
            }
        }
        out = next;
    }
    out.retain(|e| total_degree(e) <= d);
    out
}

/// `Σ mᵢ eᵢ = 1` with polynomial multipliers of degree at most `d`.
fn bezout_search(elements: &[Series], d: u64) -> Option<Vec<Series>> {
    if elements.iter().any(|e| !e.is_polynomial() || e.has_laurent_terms()) {
        return None;
    }
    let vars = elements[0].vars().to_vec();
    let multipliers = monomials_up_to(vars.len(), d);
    let unknowns: Vec<(usize, &Exponent)> = (0..elements.len())
        .flat_map(|i| multipliers.iter().map(move |m| (i, m)))
        .collect();
    let mut rows: Vec<Exponent> = Vec::new();
    let mut columns: Vec<Vec<(Exponent, Rational)>> = Vec::new();
    for (i, m) in &unknowns {
        let col: Vec<(Exponent, Rational)> = elements[*i]
            .terms()
            .map(|(e, c)| (e.iter().zip(m.iter()).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        for (e, _) in &col {
            if !rows.contains(e) {
                rows.push(e.clone());
            }
        }
        columns.push(col);
    }
    let zero_exp = vec![0i64; vars.len()];
    if !rows.contains(&zero_exp) {
        rows.push(zero_exp.clone());
    }
    let mut a = vec![vec![Rational::zero(); unknowns.len()]; rows.len()];
    for (j, col) in columns.iter().enumerate() {
        for (e, c) in col {
            let r = rows.iter().position(|x| x == e).expect("row registered");
            a[r][j] += c;
        }
    }
    let b: Vec<Rational> = rows
        .iter()
        .map(|e| {
            if *e == zero_exp {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let x = linalg::solve(&a, &b)?;
    let mut out = vec![Series::zero(&vars); elements.len()];
    for ((i, m), c) in unknowns.iter().zip(x) {
        out[*i] = out[*i].add(&Series::monomial(&vars, (*m).clone(), c)).ok()?;
    }
    Some(out)
}

/// Searches, in order: Bézout identities of degree ≤ 2, unit elements, and
/// ideal powers `I^r ⊆ (elements)` for `r ≤ 8`.
pub fn find_witness(k: &BaseField, ambient: &Ambient, elements: &[Series]) -> Option<OpenIdealWitness> {
    if elements.is_empty() {
        return None;
    }
    for d in 0..=2 {
        if let Some(multipliers) = bezout_search(elements, d) {
            let w = OpenIdealWitness::Bezout { multipliers };
            if verify_witness(k, ambient, elements, &w).unwrap_or(false) {
                return Some(w);
            }
        }
    }
    if let Some(index) = elements.iter().position(|f| is_unit(k, ambient, f)) {
        return Some(OpenIdealWitness::Unit { index });
    }
    match ambient {
        Ambient::Tate => None,
        Ambient::Adic { .. } => (1..=MAX_IDEAL_POWER)
            .map(|r| OpenIdealWitness::ContainsIdealPower { r })
            .find(|w| verify_witness(k, ambient, elements, w).unwrap_or(false)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoveringKind {
    StandardRational,
    StandardLaurent,
    SimpleLaurent,
    /// An explicit list of subsets, covering or not.
    Family,
}

impl CoveringKind {
    pub fn label(self) -> &'static str {
        match self {
            CoveringKind::StandardRational => "standard_rational",
            CoveringKind::StandardLaurent => "standard_laurent",
            CoveringKind::SimpleLaurent => "simple_laurent",
            CoveringKind::Family => "family",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub label: String,
    pub subset: RationalSubset,
    /// For Laurent pieces, `pattern[i]` means `|tᵢ| ≤ 1` on the piece.
    pub pattern: Option<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringSpec {
    pub kind: CoveringKind,
    pub generators: Vec<Series>,
    pub certificate: Option<OpenIdealWitness>,
    pub family: Vec<Piece>,
}

impl CoveringSpec {
    pub fn standard_rational(k: &BaseField, ambient: &Ambient, generators: Vec<Series>) -> Self {
        let certificate = match find_witness(k, ambient, &generators) {
            Some(OpenIdealWitness::ContainsIdealPower { .. }) | None => None,
            w => w,
        };
        CoveringSpec {
            kind: CoveringKind::StandardRational,
            generators,
            certificate,
            family: vec![],
        }
    }

    pub fn standard_laurent(generators: Vec<Series>) -> Self {
        CoveringSpec {
            kind: CoveringKind::StandardLaurent,
            generators,
            certificate: None,
            family: vec![],
        }
    }

    pub fn simple_laurent(t: Series) -> Self {
        CoveringSpec {
            kind: CoveringKind::SimpleLaurent,
            generators: vec![t],
            certificate: None,
            family: vec![],
        }
    }

    pub fn family(pieces: Vec<Piece>) -> Self {
        CoveringSpec {
            kind: CoveringKind::Family,
            generators: vec![],
            certificate: None,
            family: pieces,
        }
    }

    pub fn pieces(&self, k: &BaseField, ambient: &Ambient) -> Result<Vec<Piece>, SubsetError> {
        match self.kind {
            CoveringKind::Family => Ok(self.family.clone()),
            CoveringKind::StandardRational => self.rational_pieces(k, ambient),
            CoveringKind::SimpleLaurent | CoveringKind::StandardLaurent => {
                if self.generators.is_empty() {
                    return Err(SubsetError::NoGenerators);
                }
                let n = self.generators.len();
                let mut out = Vec::with_capacity(1 << n);
                for mask in (0..1u64 << n).rev() {
                    let pattern: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                    out.push(self.laurent_piece(&pattern)?);
                }
                Ok(out)
            }
        }
    }

    fn rational_pieces(&self, k: &BaseField, ambient: &Ambient) -> Result<Vec<Piece>, SubsetError> {
        if self.generators.is_empty() {
            return Err(SubsetError::NoGenerators);
        }
        let cert = self.certificate.as_ref().ok_or(SubsetError::MissingCertificate)?;
        if !verify_witness(k, ambient, &self.generators, cert)? {
            return Err(SubsetError::BadCertificate);
        }
        let vars = self.generators[0].vars().to_vec();
        let mut out = Vec::new();
        for (i, t) in self.generators.iter().enumerate() {
            let witness = match cert {
                OpenIdealWitness::Bezout { multipliers } => {
                    let mut m = multipliers.clone();
                    m.push(Series::zero(&vars));
                    OpenIdealWitness::Bezout { multipliers: m }
                }
                w => w.clone(),
            };
            out.push(Piece {
                label: format!("U{}", i + 1),
                subset: RationalSubset {
                    numerators: self.generators.clone(),
                    denominator: t.clone(),
                    witness: Some(witness),
                },
                pattern: None,
            });
        }
        Ok(out)
    }

    fn laurent_piece(&self, pattern: &[bool]) -> Result<Piece, SubsetError> {
        let vars = self.generators[0].vars().to_vec();
        let one = Series::one(&vars);
        let zero = Series::zero(&vars);
        let mut acc: Option<RationalSubset> = None;
        for (t, below) in self.generators.iter().zip(pattern) {
            let cond = if *below {
                RationalSubset {
                    numerators: vec![t.clone()],
                    denominator: one.clone(),
                    witness: Some(OpenIdealWitness::Bezout {
                        multipliers: vec![zero.clone(), one.clone()],
                    }),
                }
            } else {
                RationalSubset {
                    numerators: vec![one.clone()],
                    denominator: t.clone(),
                    witness: Some(OpenIdealWitness::Bezout {
                        multipliers: vec![one.clone(), zero.clone()],
                    }),
                }
            };
            acc = Some(match acc {
                None => cond,
                Some(a) => a.intersect(&cond)?,
            });
        }
        let label = if self.kind == CoveringKind::SimpleLaurent {
            if pattern[0] {
                "W-".to_string()
            } else {
                "W+".to_string()
            }
        } else {
            let idx: Vec<String> = pattern
                .iter()
                .enumerate()
                .filter(|(_, b)| **b)
                .map(|(i, _)| (i + 1).to_string())
                .collect();
            format!("U{{{}}}", idx.join(","))
        };
        Ok(Piece {
            label,
            subset: acc.expect("nonempty generators"),
            pattern: Some(pattern.to_vec()),
        })
    }

    /// Verifies the covering property at each sample point.
    pub fn verify_on_samples(
        &self,
        k: &BaseField,
        ambient: &Ambient,
        points: &[DiscPoint],
    ) -> Result<SampleReport, SubsetError> {
        let pieces = self.pieces(k, ambient)?;
        let outcomes = points.par_iter().map(|x| self.sample_outcome(k, &pieces, x)).collect();
        Ok(SampleReport {
            pieces: pieces.iter().map(|p| p.label.clone()).collect(),
            outcomes,
        })
    }

    fn sample_outcome(&self, k: &BaseField, pieces: &[Piece], x: &DiscPoint) -> SampleOutcome {
        let mut containing = Vec::new();
        for (i, p) in pieces.iter().enumerate() {
            match p.subset.contains(k, x) {
                Ok(true) => containing.push(i),
                Ok(false) => {}
                Err(e) => return SampleOutcome::Undecidable(e.to_string()),
            }
        }
        let witness = match self.kind {
            CoveringKind::StandardRational => {
                let mut best: Option<(usize, Value)> = None;
                for (i, t) in self.generators.iter().enumerate() {
                    let Ok(v) = x.eval(k, t) else {
                        return SampleOutcome::Undecidable(format!("generator {}", i + 1));
                    };
                    if best.as_ref().is_none_or(|(_, b)| v.try_cmp(b).is_ok_and(|o| o.is_gt())) {
                        best = Some((i, v));
                    }
                }
                best.filter(|(_, v)| !v.is_zero()).map(|(i, _)| i)
            }
            CoveringKind::SimpleLaurent | CoveringKind::StandardLaurent => {
                let one = Value::identity(k.ambient_rank());
                let mut pattern = Vec::new();
                for t in &self.generators {
                    let Ok(v) = x.eval(k, t) else {
                        return SampleOutcome::Undecidable("generator".into());
                    };
                    let one = one.embed(v.rank().unwrap_or(1)).unwrap_or(one.clone());
                    pattern.push(v.try_cmp(&one).is_ok_and(|o| o.is_le()));
                }
                pieces.iter().position(|p| p.pattern.as_deref() == Some(&pattern[..]))
            }
            CoveringKind::Family => containing.first().copied(),
        };
        match witness {
            Some(w) if containing.contains(&w) => SampleOutcome::Covered { witness: w, containing },
            _ if containing.is_empty() => SampleOutcome::Uncovered,
            _ => SampleOutcome::Covered {
                witness: containing[0],
                containing,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleOutcome {
    Covered { witness: usize, containing: Vec<usize> },
    Uncovered,
    Undecidable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleReport {
    pub pieces: Vec<String>,
    pub outcomes: Vec<SampleOutcome>,
}

impl SampleReport {
    pub fn all_covered(&self) -> bool {
        self.outcomes.iter().all(|o| matches!(o, SampleOutcome::Covered { .. }))
    }

    pub fn uncovered(&self) -> Vec<usize> {
        self.outcomes
            .iter()
            .enumerate()
            .filter(|(_, o)| matches!(o, SampleOutcome::Uncovered))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Binary refinement of a standard Laurent covering into simple ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefinementTree {
    Split {
        /// Generators still in play at this node, `t₁..t_m`.
        generators: Vec<Series>,
        /// Index (0-based) of the generator split on, always `m − 1`.
        on: usize,
        minus: Box<RefinementTree>,
        plus: Box<RefinementTree>,
    },
    Leaf {
        pattern: Vec<bool>,
    },
}

impl RefinementTree {
    pub fn depth(&self) -> usize {
        match self {
            RefinementTree::Leaf { .. } => 0,
            RefinementTree::Split { minus, plus, .. } => 1 + minus.depth().max(plus.depth()),
        }
    }

    pub fn leaves(&self) -> Vec<&[bool]> {
        match self {
            RefinementTree::Leaf { pattern } => vec![pattern],
            RefinementTree::Split { minus, plus, .. } => {
                let mut v = minus.leaves();
                v.extend(plus.leaves());
                v
            }
        }
    }

    /// Follows the splits at `x`, taking `W₋` on ties.
    pub fn locate(&self, k: &BaseField, x: &DiscPoint) -> Result<Vec<bool>, SubsetError> {
        match self {
            RefinementTree::Leaf { pattern } => Ok(pattern.clone()),
            RefinementTree::Split {
                generators,
                on,
                minus,
                plus,
            } => {
                let v = x.eval(k, &generators[*on])?;
                let one = Value::identity(v.rank().unwrap_or(k.ambient_rank()));
                if v.try_cmp(&one).map_err(PointError::from)?.is_le() {
                    minus.locate(k, x)
                } else {
                    plus.locate(k, x)
                }
            }
        }
    }
}

/// Splits on `tₙ` first, then recursively on `t₁..t_{n−1}`.
pub fn reduce_to_simple(generators: &[Series]) -> Result<RefinementTree, SubsetError> {
    if generators.is_empty() {
        return Err(SubsetError::NoGenerators);
    }
    fn build(gens: &[Series], suffix: Vec<bool>) -> RefinementTree {
        if gens.is_empty() {
            return RefinementTree::Leaf { pattern: suffix };
        }
        let m = gens.len();
        let child = |below: bool| {
            let mut s = vec![below];
            s.extend(suffix.iter().copied());
            Box::new(build(&gens[..m - 1], s))
        };
        RefinementTree::Split {
            generators: gens.to_vec(),
            on: m - 1,
            minus: child(true),
            plus: child(false),
        }
    }
    Ok(build(generators, Vec::new()))
}

/// `{R(s₁,…,sₙ / sᵢ)}` for generators of an ideal of definition.
pub fn analytic_locus(k: &BaseField, ambient: &Ambient, gens: &[Series]) -> Result<Vec<Piece>, SubsetError> {
    if gens.is_empty() {
        return Err(SubsetError::NoGenerators);
    }
    gens.iter()
        .map(|s| {
            let subset = RationalSubset::new(k, ambient, gens.to_vec(), s.clone())
                .unwrap_or_else(|_| RationalSubset::generalized(gens.to_vec(), s.clone()));
            Ok(Piece {
                label: subset.to_string(),
                subset,
                pattern: None,
            })
        })
        .collect()
}

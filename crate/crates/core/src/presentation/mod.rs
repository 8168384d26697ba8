//! Symbolic presentations of Huber pairs and their normal forms.
//!
//! A [`Presentation`] is a quotient of a coefficient ring (`Qp`, `Zp` or
//! `Fp`) adjoined with at most a few variables, each polynomial, restricted
//! (with a radius `p^w`), power series, or Laurent. Operations rewrite a
//! presentation by a fixed set of rules; anything outside the catalog is
//! rejected with [`PresentationError::OutOfCatalog`].

mod family;
mod ops;

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::basefield::{rational_valuation, BaseField};
use crate::series::{identifiers, ParseError, Series, SeriesError};
use crate::subset::SubsetError;
use crate::Rational;

pub use family::{
    FamilyKind, PresentationFamily, SectionPredicate, Sections, Transition, UnionSemantics, DEFAULT_TRUNCATION,
};
pub use ops::{FiberMode, FiberProduct, Localization};

/// Ring of definition of the `not-sheafy` entry, by its monomial basis.
pub const NOT_SHEAFY_DEF: &str = "Zp-span{p^|n|*T^n, p^-|n|*T^n*Z : n in Z}";

/// Most variables a catalog presentation may carry.
pub const MAX_VARS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("outside the presentation catalog: {0}")]
    OutOfCatalog(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownBase(String),
    #[error("rational subset has no open-ideal certificate")]
    MissingCertificate,
    #[error("presentation is not an integral model (coefficients {0})")]
    NotIntegral(String),
    #[error("the uniformizer does not lie in the ideal of definition")]
    PiNotInIdeal,
    #[error("fiber product precondition violated: {0}")]
    ModeViolation(String),
    #[error("transition maps are not injective at precision")]
    NonInjective,
    #[error("too many variables ({0}, at most {MAX_VARS})")]
    TooManyVariables(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Subset(#[from] SubsetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    /// `Qp`, the base field.
    Field,
    /// `Zp`, its ring of integers.
    Integers,
    /// `Fp`, the residue field.
    Residue,
}

impl CoeffRing {
    pub fn label(self) -> &'static str {
        match self {
            CoeffRing::Field => "Qp",
            CoeffRing::Integers => "Zp",
            CoeffRing::Residue => "Fp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Polynomial,
    Restricted,
    PowerSeries,
    Laurent,
}

impl VarKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "polynomial" => VarKind::Polynomial,
            "restricted" => VarKind::Restricted,
            "power_series" => VarKind::PowerSeries,
            "laurent" => VarKind::Laurent,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSpec {
    pub name: String,
    pub kind: VarKind,
    /// Restricted variables range over `|T| ≤ p^weight`.
    pub weight: i64,
    /// Introduced by a localization (a fraction `f/g`).
    pub adjoined: bool,
}

impl VarSpec {
    pub fn new(name: &str, kind: VarKind) -> Self {
        VarSpec {
            name: name.to_string(),
            kind,
            weight: 0,
            adjoined: false,
        }
    }

    pub fn weighted(name: &str, weight: i64) -> Self {
        VarSpec {
            name: name.to_string(),
            kind: VarKind::Restricted,
            weight,
            adjoined: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Tate,
    Adic,
    Discrete,
}

impl Topology {
    pub fn label(self) -> &'static str {
        match self {
            Topology::Tate => "tate",
            Topology::Adic => "adic",
            Topology::Discrete => "discrete",
        }
    }
}

/// The ring of integral elements, stored by description.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PlusRing {
    /// The powerbounded elements, presented by the ring of definition.
    PowerBounded,
    /// `{Σ aᵢ Tⁱ : |a₀| ≤ 1, |aᵢ| < 1 for i ≥ 1}`.
    ClosureOfDisc { var: String },
    /// Integral closure of the ring of definition.
    ClosureOfDefinition,
    /// Integral closure of the described subring.
    IntegralClosure(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    pub(crate) prime: u64,
    pub(crate) coeffs: CoeffRing,
    pub(crate) vars: Vec<VarSpec>,
    pub(crate) relations: Vec<Series>,
    pub(crate) inverted: Vec<Series>,
    pub(crate) ideal: Vec<Series>,
    pub(crate) plus: PlusRing,
    pub(crate) topology: Topology,
    pub(crate) zero: bool,
    /// Variables removed by linear relations, with their values.
    pub(crate) eliminated: Vec<(String, Series)>,
    /// Strictly of topologically finite type, when known. A label only.
    pub(crate) strict_tft: Option<bool>,
    /// Explicit ring of definition for entries not generated by an ideal power.
    pub(crate) def_label: Option<String>,
}

/// String form of every component; equality of normal forms is equality here.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub ring: String,
    pub ring_of_def: String,
    pub ideal: String,
    pub plus: String,
    pub topology: String,
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}) ring_of_def={} ideal={} topology={}",
            self.ring, self.plus, self.ring_of_def, self.ideal, self.topology
        )
    }
}

impl Presentation {
    pub fn base(prime: u64, coeffs: CoeffRing) -> Self {
        let (topology, ideal) = match coeffs {
            CoeffRing::Field => (
                Topology::Tate,
                vec![Series::constant::<&str>(&[], Rational::from(prime_int(prime)))],
            ),
            CoeffRing::Integers => (
                Topology::Adic,
                vec![Series::constant::<&str>(&[], Rational::from(prime_int(prime)))],
            ),
            CoeffRing::Residue => (Topology::Discrete, vec![]),
        };
        Presentation {
            prime,
            coeffs,
            vars: vec![],
            relations: vec![],
            inverted: vec![],
            ideal,
            plus: PlusRing::PowerBounded,
            topology,
            zero: false,
            eliminated: vec![],
            strict_tft: None,
            def_label: None,
        }
    }

    /// Catalog entries: `Qp`, `Zp`, `Fp`, `Qp<T>`, `Zp<T>`, `Zp[T]`, `Qp[T]`,
    /// `Zp[[T]]`, `Fp[T]`, `Fp[[T]]`, `Qp<T,T^-1>`, `Zp<T>_{p}`, the closed
    /// unit disc `Qp<T>+` and `not-sheafy`, `Qp[T,T^-1,Z]/(Z^2)` with the
    /// ring of definition spanned by `p^|n| T^n` and `p^-|n| T^n Z`.
    pub fn catalog(name: &str, prime: u64) -> Result<Self, PresentationError> {
        let p = |c| Self::base(prime, c);
        let pres = match name.replace(' ', "").as_str() {
            "Qp" => p(CoeffRing::Field),
            "Zp" => p(CoeffRing::Integers),
            "Fp" => p(CoeffRing::Residue),
            "Qp<T>" => p(CoeffRing::Field)
                .with_var(VarSpec::new("T", VarKind::Restricted))?
                .strict(true),
            "Zp<T>" => p(CoeffRing::Integers).with_var(VarSpec::new("T", VarKind::Restricted))?,
            "Zp[T]" => p(CoeffRing::Integers).with_var(VarSpec::new("T", VarKind::Polynomial))?,
            "Qp[T]" => p(CoeffRing::Field).with_var(VarSpec::new("T", VarKind::Polynomial))?,
            "Qp[S,T]" => p(CoeffRing::Field)
                .with_var(VarSpec::new("S", VarKind::Polynomial))?
                .with_var(VarSpec::new("T", VarKind::Polynomial))?,
            "Zp[[T]]" => {
                let mut r = p(CoeffRing::Integers).with_var(VarSpec::new("T", VarKind::PowerSeries))?;
                r.ideal.push(Series::variable(&r.var_names(), "T")?);
                r
            }
            "Fp[T]" => p(CoeffRing::Residue).with_var(VarSpec::new("T", VarKind::Polynomial))?,
            "Fp[[T]]" => {
                let mut r = p(CoeffRing::Residue).with_var(VarSpec::new("T", VarKind::PowerSeries))?;
                r.ideal.push(Series::variable(&r.var_names(), "T")?);
                r.topology = Topology::Adic;
                r
            }
            "Qp<T,T^-1>" => p(CoeffRing::Field).with_var(VarSpec::new("T", VarKind::Laurent))?,
            "Zp<T>_{p}" => p(CoeffRing::Integers).with_var(VarSpec::weighted("T", 1))?,
            "Qp<T>+" => {
                let mut r = p(CoeffRing::Field).with_var(VarSpec::new("T", VarKind::Restricted))?;
                r.plus = PlusRing::ClosureOfDisc { var: "T".into() };
                r
            }
            "not-sheafy" => {
                let mut r = p(CoeffRing::Field)
                    .with_var(VarSpec::new("T", VarKind::Laurent))?
                    .with_var(VarSpec::new("Z", VarKind::Polynomial))?;
                r.relations.push(Series::parse(prime, "Z^2", &r.var_names())?);
                r.def_label = Some(NOT_SHEAFY_DEF.into());
                r.plus = PlusRing::ClosureOfDefinition;
                r
            }
            _ => return Err(PresentationError::UnknownBase(name.to_string())),
        };
        Ok(pres)
    }

    /// A presentation assembled from parts; relations and ideal generators
    /// are parsed over the variable names.
    pub fn custom(
        prime: u64,
        coeffs: CoeffRing,
        vars: Vec<VarSpec>,
        relations: &[String],
        ideal: Option<&[String]>,
    ) -> Result<Self, PresentationError> {
        let mut pres = Self::base(prime, coeffs);
        for v in vars {
            pres = pres.with_var(v)?;
        }
        let names = pres.var_names();
        if let Some(ideal) = ideal {
            pres.ideal = ideal
                .iter()
                .map(|s| Series::parse(prime, s, &names))
                .collect::<Result<_, _>>()?;
            if coeffs != CoeffRing::Field {
                pres.topology = if pres.ideal.is_empty() {
                    Topology::Discrete
                } else {
                    Topology::Adic
                };
            }
        }
        for r in relations {
            for name in identifiers(r)? {
                if !names.contains(&name) {
                    return Err(ParseError::UnknownVariable(name).into());
                }
            }
            pres.relations.push(Series::parse(prime, r, &names)?);
        }
        pres.normalize()
    }

    pub fn strict(mut self, flag: bool) -> Self {
        self.strict_tft = Some(flag);
        self
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn coefficients(&self) -> CoeffRing {
        self.coeffs
    }

    pub fn variables(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn relations(&self) -> &[Series] {
        &self.relations
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn plus(&self) -> &PlusRing {
        &self.plus
    }

    pub fn is_zero_ring(&self) -> bool {
        self.zero
    }

    pub fn strict_tft(&self) -> Option<bool> {
        self.strict_tft
    }

    pub fn eliminated(&self) -> &[(String, Series)] {
        &self.eliminated
    }

    pub fn var_names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }

    pub fn var(&self, name: &str) -> Option<&VarSpec> {
        self.vars.iter().find(|v| v.name == name)
    }

    pub fn field(&self) -> BaseField {
        BaseField::new(self.prime).expect("presentations carry a prime")
    }

    /// Parses an element; eliminated variables are replaced by their values.
    pub fn parse_element(&self, src: &str) -> Result<Series, PresentationError> {
        let names = self.var_names();
        let mut all = names.clone();
        for (n, _) in self.eliminated.iter().rev() {
            if !all.contains(n) {
                all.push(n.clone());
            }
        }
        let mut f = Series::parse(self.prime, src, &all)?;
        for (n, value) in self.eliminated.iter().rev() {
            let i = f.var_index(n).expect("listed");
            if f.uses_var(i) {
                let value = value.with_vars(&all)?;
                f = f.substitute(n, &value)?;
            }
        }
        Ok(f.with_vars(&names)?)
    }

    /// The uniformizer as an element.
    pub fn pi(&self) -> Series {
        Series::constant(&self.var_names(), Rational::from(prime_int(self.prime)))
    }

    /// Adds a variable, keeping the variable list sorted.
    pub(crate) fn with_var(mut self, v: VarSpec) -> Result<Self, PresentationError> {
        if self.vars.iter().any(|w| w.name == v.name) {
            return Err(PresentationError::OutOfCatalog(format!(
                "duplicate variable {}",
                v.name
            )));
        }
        if self.vars.len() >= MAX_VARS {
            return Err(PresentationError::TooManyVariables(self.vars.len() + 1));
        }
        self.vars.push(v);
        self.vars.sort_by(|a, b| a.name.cmp(&b.name));
        self.reexpress()?;
        Ok(self)
    }

    /// Drops a variable that no longer occurs anywhere.
    pub(crate) fn without_var(mut self, name: &str) -> Result<Self, PresentationError> {
        self.vars.retain(|v| v.name != name);
        self.reexpress()?;
        Ok(self)
    }

    fn reexpress(&mut self) -> Result<(), PresentationError> {
        let names = self.var_names();
        for s in self
            .relations
            .iter_mut()
            .chain(self.ideal.iter_mut())
            .chain(self.inverted.iter_mut())
        {
            *s = s.with_vars(&names)?;
        }
        Ok(())
    }

    pub(crate) fn fresh_name(&self) -> String {
        for cand in ["S", "U", "V", "W", "X", "Y"] {
            if self.var(cand).is_none() && !self.eliminated.iter().any(|(n, _)| n == cand) {
                return cand.to_string();
            }
        }
        for i in 1.. {
            let cand = format!("S{i}");
            if self.var(&cand).is_none() {
                return cand;
            }
        }
        unreachable!()
    }

    pub(crate) fn zero_ring(&self) -> Self {
        let mut z = Self::base(self.prime, self.coeffs);
        z.zero = true;
        z.ideal.clear();
        z.topology = self.topology;
        z
    }

    /// `log_p` of the sup norm of `f` over the domain of the variables, or
    /// `None` if some variable is not restricted or Laurent.
    pub(crate) fn sup_log(&self, f: &Series) -> Option<Option<Rational>> {
        let mut best: Option<Rational> = None;
        for (e, c) in f.terms() {
            let v = rational_valuation(c, &self.prime.into()).expect("nonzero term");
            let mut log = Rational::from_integer((-v).into());
            for (spec, k) in self.vars.iter().zip(e) {
                if *k == 0 {
                    continue;
                }
                match spec.kind {
                    VarKind::Restricted | VarKind::Laurent => {
                        log += Rational::from_integer((spec.weight * k).into());
                    }
                    _ => return None,
                }
            }
            best = Some(match best {
                Some(b) if b >= log => b,
                _ => log,
            });
        }
        Some(best)
    }

    fn coeff_label_for_vars(&self, coeffs: CoeffRing) -> String {
        if self.zero {
            return "0".into();
        }
        let mut out = coeffs.label().to_string();
        let field_over_series = coeffs == CoeffRing::Field
            && self
                .vars
                .iter()
                .any(|v| matches!(v.kind, VarKind::PowerSeries | VarKind::Polynomial))
            && self.topology != Topology::Tate;
        let base = if field_over_series {
            CoeffRing::Integers.label().to_string()
        } else {
            out.clone()
        };
        out = base;
        let rank = |k: VarKind| match k {
            VarKind::PowerSeries => 0,
            VarKind::Restricted => 1,
            VarKind::Laurent => 2,
            VarKind::Polynomial => 3,
        };
        let mut ordered = self.vars.clone();
        ordered.sort_by(|a, b| (rank(a.kind), a.weight, &a.name).cmp(&(rank(b.kind), b.weight, &b.name)));
        let mut i = 0;
        while i < ordered.len() {
            let v = &ordered[i];
            let mut j = i + 1;
            while j < ordered.len() && ordered[j].kind == v.kind && ordered[j].weight == v.weight {
                j += 1;
            }
            let group = &ordered[i..j];
            let names: Vec<String> = group
                .iter()
                .map(|g| match (g.kind, g.weight, coeffs) {
                    (VarKind::Restricted, 0, _) | (_, _, CoeffRing::Integers) => g.name.clone(),
                    (VarKind::Restricted, 1, _) => format!("p*{}", g.name),
                    (VarKind::Restricted, w, _) => format!("p^{w}*{}", g.name),
                    _ => g.name.clone(),
                })
                .collect();
            let body = names.join(",");
            match v.kind {
                VarKind::Polynomial => out.push_str(&format!("[{body}]")),
                VarKind::PowerSeries => out.push_str(&format!("[[{body}]]")),
                VarKind::Laurent => {
                    let inv: Vec<String> = group.iter().map(|g| format!("{}^-1", g.name)).collect();
                    out.push_str(&format!("<{body},{}>", inv.join(",")));
                }
                VarKind::Restricted if coeffs == CoeffRing::Integers && v.weight != 0 => {
                    let w = if v.weight == 1 {
                        "p".to_string()
                    } else {
                        format!("p^{}", v.weight)
                    };
                    out.push_str(&format!("<{body}>_{{{w}}}"));
                }
                VarKind::Restricted => out.push_str(&format!("<{body}>")),
            }
            i = j;
        }
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(ToString::to_string).collect();
            out.push_str(&format!("/({})", rels.join(", ")));
        }
        if !self.inverted.is_empty() {
            let inv: Vec<String> = self.inverted.iter().map(|s| format!("[1/{s}]")).collect();
            out.push_str(&inv.concat());
        }
        if field_over_series {
            out.push_str("[1/p]");
        }
        out
    }

    /// `A`.
    pub fn ring_string(&self) -> String {
        self.coeff_label_for_vars(self.coeffs)
    }

    /// `A₀`: integral coefficients, weighted variables rescaled.
    pub fn ring_of_def_string(&self) -> String {
        if self.zero {
            return "0".into();
        }
        if let Some(label) = &self.def_label {
            return label.clone();
        }
        match self.coeffs {
            CoeffRing::Residue => self.ring_string(),
            _ => {
                let mut integral = self.clone();
                integral.coeffs = CoeffRing::Integers;
                // Weighted variables appear through their rescaled coordinate.
                let mut s = integral.coeff_label_for_vars(CoeffRing::Field);
                s.replace_range(0..2, "Zp");
                s.replace("[1/p]", "")
            }
        }
    }

    pub fn ideal_string(&self) -> String {
        if self.ideal.is_empty() {
            return "(0)".into();
        }
        let gens: Vec<String> = self.ideal.iter().map(ToString::to_string).collect();
        format!("({})", gens.join(", "))
    }

    pub fn plus_string(&self) -> String {
        match &self.plus {
            PlusRing::PowerBounded => match self.coeffs {
                CoeffRing::Field => self.ring_of_def_string(),
                _ => self.ring_string(),
            },
            PlusRing::ClosureOfDisc { var } => {
                format!("{{sum a_i*{var}^i : |a_0| <= 1, |a_i| < 1 for i >= 1}}")
            }
            PlusRing::ClosureOfDefinition => format!("integral closure of {}", self.ring_of_def_string()),
            PlusRing::IntegralClosure(d) => format!("integral closure of {d}"),
        }
    }

    pub fn normal_form(&self) -> NormalForm {
        NormalForm {
            ring: self.ring_string(),
            ring_of_def: self.ring_of_def_string(),
            ideal: self.ideal_string(),
            plus: self.plus_string(),
            topology: self.topology.label().to_string(),
        }
    }

    /// Same shape, with relations equal modulo `p^n` up to degree `d`.
    pub fn eq_at_precision(&self, other: &Presentation, n: i64, d: u32) -> Result<bool, PresentationError> {
        if self.coeffs != other.coeffs
            || self.vars != other.vars
            || self.zero != other.zero
            || self.topology != other.topology
            || self.relations.len() != other.relations.len()
            || self.ideal_string() != other.ideal_string()
            || self.plus_string() != other.plus_string()
        {
            return Ok(false);
        }
        for (a, b) in self.relations.iter().zip(&other.relations) {
            let k = self.field();
            let diff = a.sub(b)?.truncate(d);
            if !diff.terms().all(|(_, c)| k.valuation(c).is_none_or(|v| v >= n)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership of `f` in the plus ring, when the description decides it.
    pub fn plus_contains(&self, f: &Series) -> Option<bool> {
        let k = self.field();
        match &self.plus {
            PlusRing::ClosureOfDisc { .. } => {
                if !f.is_polynomial() {
                    return None;
                }
                Some(f.terms().all(|(e, c)| {
                    let v = k.valuation(c).expect("nonzero");
                    if e.iter().all(|x| *x == 0) {
                        v >= 0
                    } else {
                        v >= 1 && e.iter().all(|x| *x >= 0)
                    }
                }))
            }
            PlusRing::PowerBounded if self.relations.is_empty() => {
                let w: Vec<i64> = self.vars.iter().map(|v| v.weight).collect();
                Some(
                    f.is_polynomial()
                        && f.terms().all(|(e, c)| {
                            let need: i64 = e.iter().zip(&w).map(|(a, b)| a * b).sum();
                            k.valuation(c).expect("nonzero") >= need
                        }),
                )
            }
            _ => None,
        }
    }

    /// Applies the rewrite rules until none fires, then canonicalizes.
    pub(crate) fn normalize(mut self) -> Result<Self, PresentationError> {
        loop {
            if self.zero {
                return Ok(self.zero_ring());
            }
            let before = self.clone();
            self = self.rewrite_once()?;
            if self == before {
                break;
            }
        }
        self.canonicalize()
    }

    fn rewrite_once(mut self) -> Result<Self, PresentationError> {
        self.relations.retain(|r| !r.is_zero());
        // Drop duplicate relations (up to sign).
        let mut seen: Vec<Series> = Vec::new();
        self.relations.retain(|r| {
            let canon = canonical_sign(r);
            if seen.contains(&canon) {
                false
            } else {
                seen.push(canon);
                true
            }
        });
        for idx in 0..self.relations.len() {
            let r = self.relations[idx].clone();
            if r.is_constant() {
                let c = r.constant_term();
                let unit = match self.coeffs {
                    CoeffRing::Field | CoeffRing::Residue => true,
                    CoeffRing::Integers => rational_valuation(&c, &self.prime.into()) == Some(0),
                };
                if unit {
                    self.zero = true;
                    return Ok(self);
                }
                return Err(PresentationError::OutOfCatalog(format!("torsion relation {r}")));
            }
            if let Some(out) = self.try_laurent(idx)? {
                return Ok(out);
            }
            if let Some(out) = self.try_linear(idx)? {
                return Ok(out);
            }
        }
        if let Some(out) = self.try_redundant_fraction()? {
            return Ok(out);
        }
        Ok(self)
    }

    /// `X·Y − 1` with both restricted of radius 1: `Y` becomes Laurent.
    fn try_laurent(&self, idx: usize) -> Result<Option<Self>, PresentationError> {
        let r = &self.relations[idx];
        if r.num_terms() != 2 || !r.is_polynomial() {
            return Ok(None);
        }
        let c = r.constant_term();
        if c.is_zero() {
            return Ok(None);
        }
        let Some((e, lead)) = r.terms().find(|(e, _)| e.iter().any(|x| *x != 0)) else {
            return Ok(None);
        };
        if *lead != -c.clone() {
            return Ok(None);
        }
        let ones: Vec<usize> = e.iter().enumerate().filter(|(_, x)| **x == 1).map(|(i, _)| i).collect();
        if ones.len() != 2 || e.iter().filter(|x| **x != 0).count() != 2 {
            return Ok(None);
        }
        let (a, b) = (ones[0], ones[1]);
        let ok = |i: usize| self.vars[i].kind == VarKind::Restricted && self.vars[i].weight == 0;
        if !ok(a) || !ok(b) {
            return Ok(None);
        }
        // Eliminate the adjoined variable, or else the first one.
        let (gone, keep) = if self.vars[b].adjoined && !self.vars[a].adjoined {
            (b, a)
        } else {
            (a, b)
        };
        let names = self.var_names();
        let mut inv_exp = vec![0i64; names.len()];
        inv_exp[keep] = -1;
        let replacement = Series::monomial(&names, inv_exp, Rational::one());
        let mut out = self.clone();
        out.relations.remove(idx);
        out.substitute_everywhere(&names[gone], &replacement)?;
        out.vars[keep].kind = VarKind::Laurent;
        let gone_name = names[gone].clone();
        out.eliminated.push((gone_name.clone(), replacement));
        Ok(Some(out.without_var(&gone_name)?))
    }

    /// `c·X − d` with `X` absent from `d`: eliminate `X = d/c` when the root
    /// lies in the domain of `X`; a constant root outside it makes the
    /// relation a unit.
    fn try_linear(&self, idx: usize) -> Result<Option<Self>, PresentationError> {
        let r = &self.relations[idx];
        if !r.is_polynomial() {
            return Ok(None);
        }
        let names = self.var_names();
        for (i, spec) in self.vars.iter().enumerate() {
            let with_x: Vec<_> = r.terms().filter(|(e, _)| e[i] != 0).collect();
            if with_x.len() != 1 {
                continue;
            }
            let (e, c) = with_x[0];
            if e[i] != 1 || e.iter().enumerate().any(|(j, x)| j != i && *x != 0) {
                continue;
            }
            let c = c.clone();
            let mut unit_e = vec![0i64; names.len()];
            unit_e[i] = 1;
            let rest = r.sub(&Series::monomial(&names, unit_e, c.clone()))?;
            let root = rest.scale(&(-c.recip()));
            let decision = self.root_decision(spec, &root);
            match decision {
                RootDecision::Keep => continue,
                RootDecision::Unit => {
                    let mut out = self.clone();
                    out.zero = true;
                    return Ok(Some(out));
                }
                RootDecision::Eliminate => {
                    let mut out = self.clone();
                    out.relations.remove(idx);
                    out.substitute_everywhere(&names[i], &root)?;
                    out.eliminated.push((names[i].clone(), root.clone()));
                    if out.coeffs == CoeffRing::Integers
                        && root
                            .terms()
                            .any(|(_, c)| rational_valuation(c, &self.prime.into()).is_some_and(|v| v < 0))
                    {
                        out.coeffs = CoeffRing::Field;
                        out.topology = Topology::Tate;
                        out.ideal.retain(|g| g.is_constant());
                    }
                    return Ok(Some(out.without_var(&names[i])?));
                }
            }
        }
        Ok(None)
    }

    fn root_decision(&self, spec: &VarSpec, root: &Series) -> RootDecision {
        let constant = root.is_constant();
        let log = |s: &Series| self.sup_log(s);
        match spec.kind {
            VarKind::Polynomial => {
                let integral = root
                    .terms()
                    .all(|(_, c)| rational_valuation(c, &self.prime.into()).is_some_and(|v| v >= 0));
                let algebraic = !spec.adjoined && self.coeffs == CoeffRing::Field;
                if integral || algebraic || self.coeffs == CoeffRing::Residue {
                    RootDecision::Eliminate
                } else {
                    RootDecision::Keep
                }
            }
            VarKind::Restricted => match log(root) {
                None => RootDecision::Keep,
                Some(None) => RootDecision::Eliminate,
                Some(Some(l)) if l <= Rational::from_integer(spec.weight.into()) => RootDecision::Eliminate,
                Some(Some(_)) if constant => RootDecision::Unit,
                Some(Some(_)) => RootDecision::Keep,
            },
            VarKind::Laurent | VarKind::PowerSeries if !constant => RootDecision::Keep,
            VarKind::Laurent => match log(root) {
                Some(Some(l)) if l.is_zero() => RootDecision::Eliminate,
                _ => RootDecision::Unit,
            },
            VarKind::PowerSeries => {
                let c = root.constant_term();
                match rational_valuation(&c, &self.prime.into()) {
                    None => RootDecision::Eliminate,
                    Some(v) if v >= 1 && self.coeffs != CoeffRing::Residue => RootDecision::Eliminate,
                    _ => RootDecision::Unit,
                }
            }
        }
    }

    /// Two adjoined fractions `c·S − T^a` and `c·S' − T^b` with `a ≤ b`:
    /// `S' = T^{b−a} S`, so `S'` is redundant.
    fn try_redundant_fraction(&self) -> Result<Option<Self>, PresentationError> {
        let fractions: Vec<(usize, usize, Rational, usize, i64)> = self
            .relations
            .iter()
            .enumerate()
            .filter_map(|(ri, r)| self.monomial_fraction(r, true).map(|(s, c, t, a)| (ri, s, c, t, a)))
            .collect();
        for (ri, s, c, t, a) in &fractions {
            for (rj, s2, c2, t2, b) in &fractions {
                if ri == rj || c != c2 || t != t2 || a > b || (a == b && ri > rj) {
                    continue;
                }
                let names = self.var_names();
                let mut e = vec![0i64; names.len()];
                e[*t] = b - a;
                e[*s] = 1;
                let replacement = Series::monomial(&names, e, Rational::one());
                let mut out = self.clone();
                out.relations.remove(*rj);
                let gone = names[*s2].clone();
                out.substitute_everywhere(&gone, &replacement)?;
                out.eliminated.push((gone.clone(), replacement));
                return Ok(Some(out.without_var(&gone)?));
            }
        }
        Ok(None)
    }

    /// Recognizes `c·S − T^a` with `S` adjoined: `(S, c, T, a)`.
    fn monomial_fraction(&self, r: &Series, adjoined_only: bool) -> Option<(usize, Rational, usize, i64)> {
        if r.num_terms() != 2 || !r.is_polynomial() {
            return None;
        }
        let terms: Vec<_> = r.terms().collect();
        for (x, y) in [(0, 1), (1, 0)] {
            let (es, cs) = terms[x];
            let (et, ct) = terms[y];
            let Some(s) = es.iter().position(|v| *v == 1) else {
                continue;
            };
            if es.iter().filter(|v| **v != 0).count() != 1 || (adjoined_only && !self.vars[s].adjoined) {
                continue;
            }
            if *ct != -Rational::one() || et.iter().filter(|v| **v != 0).count() != 1 {
                continue;
            }
            let Some(t) = et.iter().position(|v| *v > 0) else {
                continue;
            };
            if t == s || (adjoined_only && self.vars[t].adjoined) {
                continue;
            }
            return Some((s, cs.clone(), t, et[t]));
        }
        None
    }

    pub(crate) fn substitute_everywhere(&mut self, var: &str, value: &Series) -> Result<(), PresentationError> {
        for s in self
            .relations
            .iter_mut()
            .chain(self.ideal.iter_mut())
            .chain(self.inverted.iter_mut())
        {
            if s.var_index(var).is_some_and(|i| s.uses_var(i)) {
                *s = s.substitute(var, value)?;
            }
        }
        for (_, e) in self.eliminated.iter_mut() {
            if e.vars() == value.vars() && e.var_index(var).is_some_and(|i| e.uses_var(i)) {
                *e = e.substitute(var, value)?;
            }
        }
        Ok(())
    }

    /// Sorted relations with positive leading coefficients, adjoined
    /// variables renamed in order to `S, U, V, …`, and duplicate ideal
    /// generators removed.
    fn canonicalize(mut self) -> Result<Self, PresentationError> {
        let adjoined: Vec<String> = self
            .vars
            .iter()
            .filter(|v| v.adjoined)
            .map(|v| v.name.clone())
            .collect();
        if !adjoined.is_empty() {
            let taken: Vec<String> = self
                .vars
                .iter()
                .filter(|v| !v.adjoined)
                .map(|v| v.name.clone())
                .collect();
            let pool: Vec<String> = ["S", "U", "V", "W", "X", "Y"]
                .iter()
                .map(|s| s.to_string())
                .filter(|s| !taken.contains(s))
                .collect();
            let mapping: Vec<(String, String)> = adjoined.iter().cloned().zip(pool).collect();
            if mapping.iter().any(|(a, b)| a != b) {
                self = self.rename(&mapping)?;
            }
        }
        for r in self.relations.iter_mut() {
            *r = canonical_sign(r);
        }
        self.relations.sort_by_key(|r| r.to_string());
        let mut ideal: Vec<Series> = Vec::new();
        for g in std::mem::take(&mut self.ideal) {
            if !ideal.contains(&g) {
                ideal.push(g);
            }
        }
        self.ideal = ideal;
        Ok(self)
    }

    /// Simultaneous renaming of variables.
    pub fn rename(mut self, mapping: &[(String, String)]) -> Result<Self, PresentationError> {
        let old = self.var_names();
        let new_names: Vec<String> = old
            .iter()
            .map(|n| {
                mapping
                    .iter()
                    .find(|(a, _)| a == n)
                    .map_or(n.clone(), |(_, b)| b.clone())
            })
            .collect();
        let convert = |s: &Series| -> Result<Series, PresentationError> {
            let terms: Vec<(Vec<i64>, Rational)> = s.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
            Ok(Series::from_terms(&new_names, terms))
        };
        self.relations = self.relations.iter().map(convert).collect::<Result<_, _>>()?;
        self.ideal = self.ideal.iter().map(convert).collect::<Result<_, _>>()?;
        self.inverted = self.inverted.iter().map(convert).collect::<Result<_, _>>()?;
        for (v, n) in self.vars.iter_mut().zip(&new_names) {
            v.name = n.clone();
        }
        for (name, _) in self.eliminated.iter_mut() {
            if let Some((_, b)) = mapping.iter().find(|(a, _)| a == name) {
                *name = b.clone();
            }
        }
        if let PlusRing::ClosureOfDisc { var } = &mut self.plus {
            if let Some((_, b)) = mapping.iter().find(|(a, _)| a == var) {
                *var = b.clone();
            }
        }
        let order: Vec<usize> = {
            let mut idx: Vec<usize> = (0..self.vars.len()).collect();
            idx.sort_by(|a, b| self.vars[*a].name.cmp(&self.vars[*b].name));
            idx
        };
        let sorted_names: Vec<String> = order.iter().map(|i| self.vars[*i].name.clone()).collect();
        self.vars = order.iter().map(|i| self.vars[*i].clone()).collect();
        for s in self
            .relations
            .iter_mut()
            .chain(self.ideal.iter_mut())
            .chain(self.inverted.iter_mut())
        {
            *s = s.with_vars(&sorted_names)?;
        }
        Ok(self)
    }

    /// Isomorphic up to renaming of variables (tries every bijection).
    pub fn same_up_to_renaming(&self, other: &Presentation) -> Result<bool, PresentationError> {
        if self.vars.len() != other.vars.len() {
            return Ok(false);
        }
        let names = self.var_names();
        let targets = other.var_names();
        for perm in permutations(targets.len()) {
            let mapping: Vec<(String, String)> = names
                .iter()
                .cloned()
                .zip(perm.iter().map(|i| targets[*i].clone()))
                .collect();
            let renamed = self.clone().rename(&mapping)?.canonicalize()?;
            if renamed.normal_form() == other.normal_form() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

enum RootDecision {
    Eliminate,
    Unit,
    Keep,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn prime_int(p: u64) -> num_bigint::BigInt {
    num_bigint::BigInt::from(p)
}

/// Flips the sign so the first displayed coefficient is positive.
fn canonical_sign(r: &Series) -> Series {
    match r.terms().last() {
        Some((_, c)) if c.is_negative() => r.neg(),
        _ => r.clone(),
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.normal_form())
    }
}

#[cfg(test)]
mod tests;

use num_traits::One;

use super::{CoeffRing, PlusRing, Presentation, PresentationError, PresentationFamily, Topology, VarKind, VarSpec};
use crate::basefield::rational_valuation;
use crate::series::Series;
use crate::subset::{ideal_power_generators, OpenIdealWitness, RationalSubset};
use crate::Rational;

/// Result of localizing along a rational subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Localization {
    pub presentation: Presentation,
    /// `A⟨S₁,…,Sₙ⟩/(g Sᵢ − fᵢ)` before any rewriting.
    pub quotient_form: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberMode {
    /// Both structure maps adic: the completed tensor product.
    Adic,
    /// One factor is `A⟨X⟩_{c}/(cX − 1)`: an ascending union of rational pieces.
    Ascending,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberProduct {
    Single(Presentation),
    Family(PresentationFamily),
}

impl Presentation {
    fn valuation(&self, q: &Rational) -> Option<i64> {
        rational_valuation(q, &self.prime.into())
    }

    fn has_pi_in_ideal(&self) -> bool {
        self.coeffs == CoeffRing::Field
            || self
                .ideal
                .iter()
                .any(|g| g.is_constant() && self.valuation(&g.constant_term()).is_some_and(|v| v >= 1))
    }

    /// `(A_U, A_U⁺)` for a rational subset `U = R(f₁,…,fₙ / g)`.
    ///
    /// Over a Tate ring the result is already complete. Otherwise the
    /// adjoined fractions stay polynomial and `g` is inverted; call
    /// [`Presentation::complete`] afterwards.
    pub fn localize(&self, u: &RationalSubset) -> Result<Localization, PresentationError> {
        if !u.is_rational() {
            return Err(PresentationError::MissingCertificate);
        }
        if self.zero {
            return Ok(Localization {
                presentation: self.clone(),
                quotient_form: "0".into(),
            });
        }
        let tate = self.topology == Topology::Tate;
        let mut out = self.clone();
        let mut new_vars = Vec::new();
        let mut rel_strings = Vec::new();
        let mut fractions = Vec::new();
        let g0 = u.denominator.with_vars(&self.var_names())?;
        for f in &u.numerators {
            let f0 = f.with_vars(&self.var_names())?;
            if !f0.is_polynomial() || !g0.is_polynomial() {
                return Err(PresentationError::OutOfCatalog(
                    "localization at a non-polynomial".into(),
                ));
            }
            if f0 == g0 {
                continue;
            }
            let name = out.fresh_name();
            let kind = if tate { VarKind::Restricted } else { VarKind::Polynomial };
            out = out.with_var(VarSpec {
                name: name.clone(),
                kind,
                weight: 0,
                adjoined: true,
            })?;
            let names = out.var_names();
            let s = Series::variable(&names, &name)?;
            let rel = g0.with_vars(&names)?.mul(&s)?.sub(&f0.with_vars(&names)?)?;
            rel_strings.push(rel.to_string());
            fractions.push(format!("{f0}/{g0}"));
            out.relations.push(rel);
            new_vars.push(name);
        }
        let brackets = if tate { ("<", ">") } else { ("[", "]") };
        let quotient_form = if new_vars.is_empty() {
            self.ring_string()
        } else {
            format!(
                "{}{}{}{}/({})",
                self.ring_string(),
                brackets.0,
                new_vars.join(","),
                brackets.1,
                rel_strings.join(", ")
            )
        };
        if !tate {
            let names = out.var_names();
            let g = g0.with_vars(&names)?;
            if g.is_constant() {
                match self.valuation(&g.constant_term()) {
                    Some(v) if v > 0 => out.invert_pi(),
                    Some(0) => {}
                    _ => return Err(PresentationError::OutOfCatalog(format!("denominator {g0}"))),
                }
            } else if g.as_monomial().is_some() {
                out.inverted.push(g);
            } else {
                return Err(PresentationError::OutOfCatalog(format!("inverting {g0}")));
            }
        }
        if !fractions.is_empty() {
            out.plus = match (&self.plus, tate) {
                (PlusRing::PowerBounded, true) => PlusRing::PowerBounded,
                (PlusRing::ClosureOfDefinition, true) => PlusRing::ClosureOfDefinition,
                _ => PlusRing::IntegralClosure(format!("{}[{}]", self.plus_string(), fractions.join(", "))),
            };
        }
        Ok(Localization {
            presentation: out.normalize()?,
            quotient_form,
        })
    }

    pub(crate) fn invert_pi(&mut self) {
        self.coeffs = CoeffRing::Field;
        self.topology = Topology::Tate;
    }

    /// Completion with respect to the ideal of definition.
    pub fn complete(&self) -> Result<Presentation, PresentationError> {
        if self.zero || self.topology == Topology::Discrete {
            return Ok(self.clone());
        }
        let mut out = self.clone();
        let names = self.var_names();
        for (i, spec) in self.vars.iter().enumerate() {
            if spec.kind != VarKind::PowerSeries {
                continue;
            }
            // T^a = c·S with p | c: T is topologically nilpotent p-adically.
            let nilpotent = self.relations.iter().any(|r| {
                self.monomial_fraction(r, false)
                    .is_some_and(|(_, c, t, _)| t == i && self.valuation(&c).is_some_and(|v| v >= 1))
            });
            if nilpotent && self.has_pi_in_ideal() {
                out.vars[i].kind = VarKind::Restricted;
                let t = Series::variable(&names, &spec.name)?;
                out.ideal.retain(|g| *g != t);
            }
        }
        let p_adic = self.has_pi_in_ideal();
        for i in 0..out.vars.len() {
            if out.vars[i].kind != VarKind::Polynomial {
                continue;
            }
            let t = Series::variable(&names, &out.vars[i].name)?;
            out.vars[i].kind = if p_adic {
                VarKind::Restricted
            } else if out.ideal.contains(&t) {
                VarKind::PowerSeries
            } else {
                return Err(PresentationError::OutOfCatalog(format!(
                    "completing {} along {}",
                    self.ring_string(),
                    self.ideal_string()
                )));
            };
        }
        if out.topology == Topology::Tate && matches!(out.plus, PlusRing::IntegralClosure(_)) {
            out.plus = PlusRing::ClosureOfDefinition;
        }
        out.normalize()
    }

    /// `A/(r)` with the integral closure of the image as plus ring.
    pub fn quotient(&self, relation: &Series) -> Result<Presentation, PresentationError> {
        let mut out = self.clone();
        let r = relation.with_vars(&self.var_names())?;
        if !r.is_polynomial() {
            return Err(PresentationError::OutOfCatalog("non-polynomial relation".into()));
        }
        out.relations.push(r);
        if let PlusRing::ClosureOfDisc { .. } = out.plus {
            out.plus = PlusRing::IntegralClosure(format!("image of {}", self.plus_string()));
        }
        out.normalize()
    }

    pub fn quotient_str(&self, relation: &str) -> Result<Presentation, PresentationError> {
        let r = self.parse_element(relation)?;
        self.quotient(&r)
    }

    /// An element `e` with `p·e = 1`, found among the eliminated variables.
    pub fn inverse_of_pi(&self) -> Option<(String, Rational)> {
        let p = Rational::from_integer(self.prime.into());
        self.eliminated
            .iter()
            .filter(|(_, v)| v.is_constant())
            .map(|(n, v)| (n.clone(), v.constant_term()))
            .find(|(_, c)| &p * c == Rational::one())
    }

    /// The generic fiber of an integral model: one piece when the ideal of
    /// definition is `(p)`, otherwise the pieces `R(Iⁿ / p)` for `n ≤ n_max`
    /// with `I` the remaining generators.
    pub fn generic_fiber(&self, n_max: usize) -> Result<PresentationFamily, PresentationError> {
        if self.coeffs != CoeffRing::Integers {
            return Err(PresentationError::NotIntegral(self.coeffs.label().into()));
        }
        if !self.has_pi_in_ideal() {
            return Err(PresentationError::PiNotInIdeal);
        }
        let others: Vec<Series> = self.ideal.iter().filter(|g| !g.is_constant()).cloned().collect();
        if others.is_empty() {
            let mut piece = self.clone();
            piece.invert_pi();
            piece.ideal.retain(|g| g.is_constant());
            let piece = piece.complete()?;
            return Ok(PresentationFamily::single("generic fiber", piece));
        }
        let pi = self.pi();
        let mut pieces = Vec::new();
        for n in 1..=n_max.max(1) {
            let numerators = ideal_power_generators(&others, n as u32)?;
            let u = RationalSubset {
                numerators,
                denominator: pi.clone(),
                witness: Some(OpenIdealWitness::ContainsIdealPower { r: n as u32 }),
            };
            pieces.push(self.localize(&u)?.presentation.complete()?);
        }
        let open_disc = self.vars.len() == 1 && self.relations.is_empty() && others.len() == 1;
        Ok(PresentationFamily::ascending_pieces(
            "generic fiber",
            pieces,
            open_disc,
            n_max,
        ))
    }

    /// Reduction modulo `p` of an integral model.
    pub fn special_fiber(&self) -> Result<Presentation, PresentationError> {
        if self.coeffs != CoeffRing::Integers {
            return Err(PresentationError::NotIntegral(self.coeffs.label().into()));
        }
        if self.vars.iter().any(|v| v.weight != 0) {
            return Err(PresentationError::OutOfCatalog(
                "special fiber of a weighted algebra".into(),
            ));
        }
        let p = self.prime;
        let reduce = |s: &Series| -> Result<Series, PresentationError> {
            if s.terms().any(|(_, c)| reduce_mod(c, p).is_none()) {
                return Err(PresentationError::NotIntegral(format!("relation {s}")));
            }
            Ok(s.map_coefficients(|c| Rational::from_integer(reduce_mod(c, p).expect("checked").into())))
        };
        let mut out = self.clone();
        out.coeffs = CoeffRing::Residue;
        out.relations = self.relations.iter().map(reduce).collect::<Result<_, _>>()?;
        out.ideal = self
            .ideal
            .iter()
            .map(reduce)
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|g| !g.is_zero())
            .collect();
        out.plus = PlusRing::PowerBounded;
        if out.ideal.is_empty() {
            out.topology = Topology::Discrete;
            for v in out.vars.iter_mut() {
                if v.kind == VarKind::Restricted {
                    v.kind = VarKind::Polynomial;
                }
            }
        } else {
            out.topology = Topology::Adic;
        }
        out.normalize()
    }

    /// `B ×_A C`.
    pub fn fiber_product(
        b: &Presentation,
        c: &Presentation,
        over: &Presentation,
        mode: FiberMode,
        n_max: usize,
    ) -> Result<FiberProduct, PresentationError> {
        if b.prime != c.prime || b.prime != over.prime {
            return Err(PresentationError::ModeViolation("different primes".into()));
        }
        match mode {
            FiberMode::Adic => {
                if b.normal_form() == over.normal_form() {
                    return Ok(FiberProduct::Single(c.clone()));
                }
                if c.normal_form() == over.normal_form() {
                    return Ok(FiberProduct::Single(b.clone()));
                }
                if b.coeffs != over.coeffs || c.coeffs != over.coeffs {
                    return Err(PresentationError::ModeViolation(
                        "structure maps change the coefficients".into(),
                    ));
                }
                if !over.ideal.is_empty() {
                    for side in [b, c] {
                        if side.ideal.iter().any(|g| !g.is_constant()) {
                            return Err(PresentationError::ModeViolation(format!(
                                "{} -> {} is not adic",
                                over.ring_string(),
                                side.ring_string()
                            )));
                        }
                    }
                }
                Ok(FiberProduct::Single(tensor(b, c)?))
            }
            FiberMode::Ascending => {
                let is_inverse_side = |s: &Presentation| {
                    s.coeffs == CoeffRing::Field && s.vars.is_empty() && over.coeffs == CoeffRing::Integers
                };
                let other = if is_inverse_side(c) && b.coeffs == CoeffRing::Integers {
                    b
                } else if is_inverse_side(b) && c.coeffs == CoeffRing::Integers {
                    c
                } else {
                    return Err(PresentationError::ModeViolation(
                        "ascending mode needs one factor of the form A<X>_{c}/(cX - 1)".into(),
                    ));
                };
                let fam = other.generic_fiber(n_max)?;
                Ok(if fam.pieces.len() == 1 {
                    FiberProduct::Single(fam.pieces[0].clone())
                } else {
                    FiberProduct::Family(fam)
                })
            }
        }
    }
}

fn tensor(b: &Presentation, c: &Presentation) -> Result<Presentation, PresentationError> {
    let mut out = b.clone();
    let mut mapping = Vec::new();
    for v in &c.vars {
        let name = if out.var(&v.name).is_some() {
            out.fresh_name()
        } else {
            v.name.clone()
        };
        mapping.push((v.name.clone(), name.clone()));
        out = out.with_var(VarSpec { name, ..v.clone() })?;
    }
    let renamed = c.clone().rename(&mapping)?;
    let names = out.var_names();
    for r in &renamed.relations {
        out.relations.push(r.with_vars(&names)?);
    }
    for g in &renamed.ideal {
        let g = g.with_vars(&names)?;
        if !out.ideal.contains(&g) {
            out.ideal.push(g);
        }
    }
    out.plus = match (&b.plus, &c.plus) {
        (PlusRing::PowerBounded, PlusRing::PowerBounded) => PlusRing::PowerBounded,
        _ => PlusRing::IntegralClosure(format!("{} (x) {}", b.plus_string(), renamed.plus_string())),
    };
    out.strict_tft = match (b.strict_tft, c.strict_tft) {
        (Some(x), Some(y)) => Some(x && y),
        _ => None,
    };
    out.normalize()
}

/// `q mod p` for `v_p(q) ≥ 0`.
fn reduce_mod(q: &Rational, p: u64) -> Option<u64> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let p = BigInt::from(p);
    let den = q.denom().mod_floor(&p);
    if den == BigInt::from(0) {
        return None;
    }
    let inv = den.modpow(&(&p - 2u32), &p);
    let r = (q.numer().mod_floor(&p) * inv).mod_floor(&p);
    u64::try_from(r).ok()
}

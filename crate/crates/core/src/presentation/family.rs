use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{CoeffRing, PlusRing, Presentation, PresentationError, Topology, VarKind, VarSpec};
use crate::linalg::kernel;
use crate::series::Series;
use crate::Rational;

/// Default cut-off for ascending families.
pub const DEFAULT_TRUNCATION: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnionSemantics {
    Single,
    /// Each piece is a rational subset of the next.
    AscendingUnion,
    /// A finite cover glued along the listed overlaps.
    Cover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    OpenDisc,
    AffineLine,
    ProjectiveLine,
    Generic,
}

/// A restriction map between two pieces, as a substitution of coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub source: usize,
    pub target: usize,
    pub rule: String,
    /// For rescaled coordinates: `ϖ^m T ↦ ϖ^{scale}(ϖ^k T)`.
    pub scale: Option<i64>,
}

impl Transition {
    /// `self` followed by `next`.
    pub fn then(&self, next: &Transition) -> Option<Transition> {
        if self.target != next.source {
            return None;
        }
        Some(Transition {
            source: self.source,
            target: next.target,
            rule: format!("{}; {}", self.rule, next.rule),
            scale: match (self.scale, next.scale) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationFamily {
    pub label: String,
    pub kind: FamilyKind,
    pub semantics: UnionSemantics,
    pub pieces: Vec<Presentation>,
    pub overlaps: Vec<Presentation>,
    pub transitions: Vec<Transition>,
    /// Last index kept when an infinite family was cut off.
    pub truncated_at: Option<usize>,
}

/// Global sections of a glued family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sections {
    Constants { dimension: usize, degree: u32 },
    Predicate(SectionPredicate),
    Ring(Presentation),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionPredicate {
    /// `v(aᵢ)/i → ∞`.
    Entire,
    /// `|aᵢ| rⁱ → 0` for every `r < 1`.
    OpenDisc,
}

impl Sections {
    pub fn describe(&self) -> String {
        match self {
            Sections::Constants { dimension, degree } => {
                format!("constants Qp (kernel dimension {dimension} at degree {degree})")
            }
            Sections::Predicate(SectionPredicate::Entire) => {
                "entire series: sum a_i*T^i with v(a_i)/i -> infinity".into()
            }
            Sections::Predicate(SectionPredicate::OpenDisc) => {
                "bounded-on-subdiscs series: |a_i| r^i -> 0 for all r < 1".into()
            }
            Sections::Ring(p) => p.ring_string(),
        }
    }

    pub fn contains(&self, f: &Series) -> Result<bool, PresentationError> {
        Ok(match self {
            Sections::Constants { .. } => f.is_polynomial() && f.is_constant(),
            Sections::Predicate(SectionPredicate::Entire) => f.is_entire()?,
            Sections::Predicate(SectionPredicate::OpenDisc) => f.in_open_disc()?,
            Sections::Ring(p) => match p.variables() {
                [] => f.is_polynomial() && f.is_constant(),
                [v] if v.kind == VarKind::Restricted && p.relations().is_empty() => f.in_restricted(v.weight)?,
                _ => return Err(PresentationError::OutOfCatalog("membership in a quotient".into())),
            },
        })
    }
}

impl PresentationFamily {
    pub fn single(label: &str, piece: Presentation) -> Self {
        PresentationFamily {
            label: label.to_string(),
            kind: FamilyKind::Generic,
            semantics: UnionSemantics::Single,
            pieces: vec![piece],
            overlaps: vec![],
            transitions: vec![],
            truncated_at: None,
        }
    }

    pub(crate) fn ascending_pieces(label: &str, pieces: Vec<Presentation>, open_disc: bool, n_max: usize) -> Self {
        let transitions = (1..pieces.len())
            .map(|i| Transition {
                source: i,
                target: i - 1,
                rule: match i {
                    1 => "T^2/p -> T*(T/p)".to_string(),
                    _ => format!("T^{}/p -> T*(T^{}/p)", i + 1, i),
                },
                scale: None,
            })
            .collect();
        PresentationFamily {
            label: label.to_string(),
            kind: if open_disc {
                FamilyKind::OpenDisc
            } else {
                FamilyKind::Generic
            },
            semantics: UnionSemantics::AscendingUnion,
            pieces,
            overlaps: vec![],
            transitions,
            truncated_at: Some(n_max),
        }
    }

    /// Two charts `Qp<T>`, `Qp<S>` glued along `Qp<T,T^-1>` by `T ↦ S^-1`.
    pub fn projective_line(prime: u64) -> Result<Self, PresentationError> {
        let chart_t = Presentation::catalog("Qp<T>", prime)?;
        let chart_s = Presentation::base(prime, CoeffRing::Field)
            .with_var(VarSpec::new("S", VarKind::Restricted))?
            .strict(true);
        let overlap = Presentation::catalog("Qp<T,T^-1>", prime)?;
        Ok(PresentationFamily {
            label: "projective line".into(),
            kind: FamilyKind::ProjectiveLine,
            semantics: UnionSemantics::Cover,
            pieces: vec![chart_t, chart_s],
            overlaps: vec![overlap],
            transitions: vec![Transition {
                source: 1,
                target: 0,
                rule: "S -> T^-1".into(),
                scale: None,
            }],
            truncated_at: None,
        })
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated_at.is_some()
    }

    pub fn marker(&self) -> Option<String> {
        self.truncated_at
            .map(|n| format!("truncated ascending union (n <= {n})"))
    }

    /// First index from which all pieces share one normal form.
    pub fn stabilizes_at(&self) -> Option<usize> {
        let last = self.pieces.last()?.normal_form();
        let mut idx = self.pieces.len() - 1;
        while idx > 0 && self.pieces[idx - 1].normal_form() == last {
            idx -= 1;
        }
        (self.pieces.len() - idx >= 2).then_some(idx)
    }

    /// Global sections: a kernel computation for the projective line, a
    /// membership predicate for ascending unions of discs, the ring itself
    /// for a single chart.
    pub fn glue_sections(&self, degree: u32) -> Result<Sections, PresentationError> {
        match (self.semantics, self.kind) {
            (UnionSemantics::Single, _) => Ok(Sections::Ring(self.pieces[0].clone())),
            (_, FamilyKind::ProjectiveLine) => projective_sections(degree),
            (UnionSemantics::AscendingUnion, FamilyKind::AffineLine) => {
                Ok(Sections::Predicate(SectionPredicate::Entire))
            }
            (UnionSemantics::AscendingUnion, FamilyKind::OpenDisc) => {
                Ok(Sections::Predicate(SectionPredicate::OpenDisc))
            }
            _ => Err(PresentationError::OutOfCatalog(format!("gluing {}", self.label))),
        }
    }
}

/// Pairs `(f, g)` of degree ≤ `d` polynomials in `T` and `S` agreeing on the
/// overlap after `S ↦ T^-1`.
fn projective_sections(d: u32) -> Result<Sections, PresentationError> {
    let d = d as i64;
    let from_t: Vec<i64> = (0..=d).collect();
    let from_s: Vec<i64> = (0..=d).map(|j| -j).collect();
    let distinct = |v: &[i64]| v.iter().collect::<BTreeSet<_>>().len() == v.len();
    if !distinct(&from_t) || !distinct(&from_s) {
        return Err(PresentationError::NonInjective);
    }
    let cols = 2 * (d as usize + 1);
    let mut rows = Vec::new();
    for e in -d..=d {
        let mut row = vec![Rational::zero(); cols];
        if e >= 0 {
            row[e as usize] += Rational::one();
        }
        if e <= 0 {
            row[d as usize + 1 + (-e) as usize] -= Rational::one();
        }
        rows.push(row);
    }
    let basis = kernel(&rows, cols);
    let constants_only = basis.iter().all(|v| {
        v.iter()
            .enumerate()
            .all(|(i, x)| i == 0 || i == d as usize + 1 || x.is_zero())
    });
    if !constants_only {
        return Err(PresentationError::OutOfCatalog("non-constant global sections".into()));
    }
    Ok(Sections::Constants {
        dimension: basis.len(),
        degree: d as u32,
    })
}

impl Presentation {
    /// The analytification of an affine scheme of finite type over `Qp`:
    /// the discs `Qp<p^k T>/I` for `k ≤ k_max`.
    pub fn analytify(&self, k_max: usize) -> Result<PresentationFamily, PresentationError> {
        if self.coeffs != CoeffRing::Field || self.vars.iter().any(|v| v.kind != VarKind::Polynomial) {
            return Err(PresentationError::OutOfCatalog(format!(
                "analytification of {} (need a polynomial algebra over Qp)",
                self.ring_string()
            )));
        }
        if self.vars.is_empty() {
            let mut point = self.clone();
            point.topology = Topology::Tate;
            return Ok(PresentationFamily::single("analytification", point));
        }
        let mut pieces = Vec::new();
        for k in 0..=k_max {
            let mut piece = self.clone();
            for v in piece.vars.iter_mut() {
                v.kind = VarKind::Restricted;
                v.weight = k as i64;
            }
            piece.topology = Topology::Tate;
            piece.plus = PlusRing::PowerBounded;
            piece.strict_tft = Some(true);
            pieces.push(piece.normalize()?);
        }
        let transitions = (1..pieces.len())
            .map(|m| Transition {
                source: m,
                target: m - 1,
                rule: format!("p^{m}*T -> p*(p^{}*T)", m - 1),
                scale: Some(1),
            })
            .collect();
        let line = self.vars.len() == 1 && self.relations.is_empty();
        Ok(PresentationFamily {
            label: "analytification".into(),
            kind: if line {
                FamilyKind::AffineLine
            } else {
                FamilyKind::Generic
            },
            semantics: UnionSemantics::AscendingUnion,
            pieces,
            overlaps: vec![],
            transitions,
            truncated_at: Some(k_max),
        })
    }
}

//! Scenario documents: a field, named definitions and an ordered query list.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value as Json;

use spa_core::point::{Chart, DiscPoint, Sign};
use spa_core::presentation::{CoeffRing, Presentation, VarKind, VarSpec};
use spa_core::subset::{Ambient, CoveringSpec, RationalSubset};
use spa_core::{BaseField, Rational, Series, Tail, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub prime: u64,
    #[serde(default = "yes")]
    pub residue_algebraic_over_finite: bool,
}

fn yes() -> bool {
    true
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec {
            prime: 5,
            residue_algebraic_over_finite: true,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub kind: String,
    #[serde(default)]
    pub alpha: Option<String>,
    /// Log-vector of the radius, one rational per coordinate.
    #[serde(default)]
    pub radius: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailSpec {
    pub kind: String,
    pub a: i64,
    #[serde(default)]
    pub b: i64,
    #[serde(default)]
    pub c: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SeriesSpec {
    Literal(String),
    Detailed {
        #[serde(default)]
        terms: Option<String>,
        #[serde(default)]
        tail: Option<TailSpec>,
        #[serde(default)]
        cutoff: Option<u32>,
        /// Forget everything above this degree.
        #[serde(default)]
        truncate: Option<u32>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsetSpec {
    pub numerators: Vec<String>,
    pub denominator: String,
    /// `"tate"` or a list of ideal generators for an adic ambient.
    #[serde(default)]
    pub ambient: Option<Json>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringDef {
    /// `rational`, `laurent`, `simple_laurent` or `analytic_locus`.
    pub kind: String,
    pub generators: Vec<String>,
    #[serde(default)]
    pub ambient: Option<Json>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarDef {
    pub name: String,
    pub kind: String,
    #[serde(default)]
    pub weight: i64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDef {
    #[serde(default)]
    pub catalog: Option<String>,
    #[serde(default)]
    pub coefficients: Option<String>,
    #[serde(default)]
    pub variables: Vec<VarDef>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub ideal: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    pub command: String,
    #[serde(default)]
    pub args: BTreeMap<String, Json>,
    /// Expected machine-block entries.
    #[serde(default)]
    pub expect: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub title: Option<String>,
    #[serde(default)]
    pub field: FieldSpec,
    #[serde(default)]
    pub points: BTreeMap<String, PointSpec>,
    #[serde(default)]
    pub series: BTreeMap<String, SeriesSpec>,
    #[serde(default)]
    pub subsets: BTreeMap<String, SubsetSpec>,
    #[serde(default)]
    pub coverings: BTreeMap<String, CoveringDef>,
    #[serde(default)]
    pub presentations: BTreeMap<String, PresentationDef>,
    #[serde(default)]
    pub queries: Vec<Query>,
}

impl Scenario {
    pub fn parse(src: &str) -> Result<Self, CliError> {
        serde_json::from_str(src).map_err(|e| CliError::Scenario(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let src = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))?;
        Self::parse(&src)
    }
}

/// A scenario with every definition built.
pub struct Env {
    pub field: BaseField,
    pub points: BTreeMap<String, DiscPoint>,
    pub series: BTreeMap<String, Series>,
    pub subsets: BTreeMap<String, (RationalSubset, Ambient)>,
    pub coverings: BTreeMap<String, (CoveringDef, CoveringSpec, Ambient)>,
    pub presentations: BTreeMap<String, Presentation>,
}

/// Name of the subset `R(1 / 1)`, always defined.
pub const WHOLE: &str = "whole";

impl Env {
    pub fn build(sc: &Scenario, degree: u32) -> Result<Self, CliError> {
        let field = BaseField::new(sc.field.prime)
            .map_err(|e| CliError::Scenario(format!("field: {e}")))?
            .with_residue_algebraic_over_finite(sc.field.residue_algebraic_over_finite);
        let mut env = Env {
            field,
            points: BTreeMap::new(),
            series: BTreeMap::new(),
            subsets: BTreeMap::new(),
            coverings: BTreeMap::new(),
            presentations: BTreeMap::new(),
        };
        for (name, spec) in &sc.series {
            let s = env.build_series(name, spec, degree)?;
            env.series.insert(name.clone(), s);
        }
        for (name, spec) in &sc.points {
            let x = env.build_point(name, spec)?;
            env.points.insert(name.clone(), x);
        }
        let whole = (env.series_arg("1")?, Ambient::Tate);
        let whole = RationalSubset::new(&env.field, &whole.1, vec![whole.0.clone()], whole.0)
            .map_err(|e| CliError::precondition(WHOLE, e))?;
        env.subsets.insert(WHOLE.into(), (whole, Ambient::Tate));
        for (name, spec) in &sc.subsets {
            let ambient = env.ambient(name, spec.ambient.as_ref())?;
            let nums = spec
                .numerators
                .iter()
                .map(|s| env.series_arg(s))
                .collect::<Result<Vec<_>, _>>()?;
            let den = env.series_arg(&spec.denominator)?;
            let u =
                RationalSubset::new(&env.field, &ambient, nums, den).map_err(|e| CliError::precondition(name, e))?;
            env.subsets.insert(name.clone(), (u, ambient));
        }
        for (name, def) in &sc.coverings {
            let ambient = env.ambient(name, def.ambient.as_ref())?;
            let gens = def
                .generators
                .iter()
                .map(|s| env.series_arg(s))
                .collect::<Result<Vec<_>, _>>()?;
            let spec = match def.kind.as_str() {
                "rational" => CoveringSpec::standard_rational(&env.field, &ambient, gens),
                "laurent" => CoveringSpec::standard_laurent(gens),
                "simple_laurent" if gens.len() == 1 => CoveringSpec::simple_laurent(gens[0].clone()),
                "analytic_locus" => {
                    let pieces = spa_core::subset::analytic_locus(&env.field, &ambient, &gens)
                        .map_err(|e| CliError::precondition(name, e))?;
                    CoveringSpec::family(pieces)
                }
                other => return Err(CliError::Resolve(format!("covering `{name}`: unknown kind `{other}`"))),
            };
            env.coverings.insert(name.clone(), (def.clone(), spec, ambient));
        }
        for (name, def) in &sc.presentations {
            let p = build_presentation(sc.field.prime, name, def)?;
            env.presentations.insert(name.clone(), p);
        }
        Ok(env)
    }

    pub fn prime(&self) -> u64 {
        self.field.prime()
    }

    fn ambient(&self, owner: &str, spec: Option<&Json>) -> Result<Ambient, CliError> {
        match spec {
            None => Ok(Ambient::Tate),
            Some(Json::String(s)) if s == "tate" => Ok(Ambient::Tate),
            Some(Json::Array(gens)) => {
                let ideal = gens
                    .iter()
                    .map(|g| match g {
                        Json::String(s) => self.series_arg(s),
                        _ => Err(CliError::Resolve(format!(
                            "`{owner}`: ideal generators must be strings"
                        ))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Ambient::Adic { ideal })
            }
            Some(other) => Err(CliError::Resolve(format!("`{owner}`: bad ambient {other}"))),
        }
    }

    fn build_series(&self, name: &str, spec: &SeriesSpec, degree: u32) -> Result<Series, CliError> {
        let p = self.prime();
        let parse = |s: &str| Series::parse(p, s, &["T"]).map_err(|e| CliError::precondition(name, e));
        match spec {
            SeriesSpec::Literal(s) => parse(s),
            SeriesSpec::Detailed {
                terms,
                tail,
                cutoff,
                truncate,
            } => {
                let head = terms.as_deref().map(parse).transpose()?;
                let mut s = match tail {
                    None => {
                        head.ok_or_else(|| CliError::Resolve(format!("series `{name}` has neither terms nor tail")))?
                    }
                    Some(t) => {
                        let c = match &t.c {
                            Some(c) => parse(c)?.constant_term(),
                            None => Rational::from_integer(1.into()),
                        };
                        let tail = match t.kind.as_str() {
                            "geometric" => Tail::Geometric { p, c, a: t.a, b: t.b },
                            "supergeometric" => Tail::SuperGeometric { p, c, a: t.a },
                            other => return Err(CliError::Resolve(format!("series `{name}`: unknown tail `{other}`"))),
                        };
                        let cutoff = cutoff.unwrap_or(degree);
                        let coeffs: Vec<Rational> = (0..=cutoff as i64)
                            .map(|i| match &head {
                                Some(h) => h.coefficient(&[i]),
                                None => tail.coefficient(i),
                            })
                            .collect();
                        Series::with_tail("T", &coeffs, cutoff, tail)
                    }
                };
                if let Some(d) = truncate {
                    s = s.truncate(*d);
                }
                Ok(s)
            }
        }
    }

    fn build_point(&self, name: &str, spec: &PointSpec) -> Result<DiscPoint, CliError> {
        let alpha = match &spec.alpha {
            Some(a) => Series::parse(self.prime(), a, &[] as &[&str])
                .map_err(|e| CliError::precondition(name, e))?
                .constant_term(),
            None => Rational::from_integer(0.into()),
        };
        let radius = || -> Result<Value, CliError> {
            let logvec = spec
                .radius
                .iter()
                .map(|r| {
                    spa_core::basefield::parse_rational(r)
                        .ok_or_else(|| CliError::Resolve(format!("point `{name}`: bad radius coordinate `{r}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Value::from_logvec(logvec).map_err(|e| CliError::precondition(name, e))
        };
        let signed = |sign| -> Result<DiscPoint, CliError> {
            DiscPoint::gauss_signed(alpha.clone(), radius()?, sign, Chart::UNIT_DISC)
                .map_err(|e| CliError::precondition(name, e))
        };
        Ok(match spec.kind.as_str() {
            "classical" => DiscPoint::classical(alpha.clone(), Chart::UNIT_DISC),
            "gauss" => DiscPoint::gauss(alpha.clone(), radius()?, Chart::UNIT_DISC)
                .map_err(|e| CliError::precondition(name, e))?,
            "gauss_minus" => signed(Sign::Minus)?,
            "gauss_plus" => signed(Sign::Plus)?,
            "unit_minus" => DiscPoint::unit_minus(),
            "unit_plus" => DiscPoint::unit_plus(),
            "trivial" => DiscPoint::trivial(Chart::UNIT_DISC),
            "non_analytic" => DiscPoint::non_analytic(Chart::UNIT_DISC),
            other => return Err(CliError::Resolve(format!("point `{name}`: unknown kind `{other}`"))),
        })
    }

    /// A defined series name, or else a literal in `T`.
    pub fn series_arg(&self, s: &str) -> Result<Series, CliError> {
        if let Some(f) = self.series.get(s) {
            return Ok(f.clone());
        }
        Series::parse(self.prime(), s, &["T"]).map_err(|e| CliError::precondition(s, e))
    }

    pub fn point(&self, name: &str) -> Result<&DiscPoint, CliError> {
        self.points.get(name).ok_or_else(|| CliError::unknown("point", name))
    }

    pub fn subset(&self, name: &str) -> Result<&(RationalSubset, Ambient), CliError> {
        self.subsets.get(name).ok_or_else(|| CliError::unknown("subset", name))
    }

    pub fn covering(&self, name: &str) -> Result<&(CoveringDef, CoveringSpec, Ambient), CliError> {
        self.coverings
            .get(name)
            .ok_or_else(|| CliError::unknown("covering", name))
    }

    /// A scenario name, a presentation file, or a catalog entry.
    pub fn presentation(&self, name: &str) -> Result<Presentation, CliError> {
        if let Some(p) = self.presentations.get(name) {
            return Ok(p.clone());
        }
        let path = Path::new(name);
        if path.extension().is_some_and(|e| e == "json") && path.is_file() {
            let src = std::fs::read_to_string(path).map_err(|e| CliError::Io(name.into(), e.to_string()))?;
            let def: PresentationDef = serde_json::from_str(&src).map_err(|e| CliError::Scenario(e.to_string()))?;
            return build_presentation(self.prime(), name, &def);
        }
        Presentation::catalog(name, self.prime()).map_err(|e| CliError::precondition(name, e))
    }
}

pub fn build_presentation(prime: u64, name: &str, def: &PresentationDef) -> Result<Presentation, CliError> {
    if let Some(c) = &def.catalog {
        if def.coefficients.is_some() || !def.variables.is_empty() || !def.relations.is_empty() {
            return Err(CliError::Resolve(format!(
                "presentation `{name}`: catalog entries take no other fields"
            )));
        }
        return Presentation::catalog(c, prime).map_err(|e| CliError::precondition(name, e));
    }
    let coeffs = match def.coefficients.as_deref().unwrap_or("Qp") {
        "Qp" => CoeffRing::Field,
        "Zp" => CoeffRing::Integers,
        "Fp" => CoeffRing::Residue,
        other => {
            return Err(CliError::Resolve(format!(
                "presentation `{name}`: unknown coefficients `{other}`"
            )))
        }
    };
    let vars = def
        .variables
        .iter()
        .map(|v| {
            let kind = VarKind::parse(&v.kind)
                .ok_or_else(|| CliError::Resolve(format!("presentation `{name}`: unknown kind `{}`", v.kind)))?;
            let mut spec = VarSpec::new(&v.name, kind);
            spec.weight = v.weight;
            Ok(spec)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Presentation::custom(prime, coeffs, vars, &def.relations, def.ideal.as_deref())
        .map_err(|e| CliError::precondition(name, e))
}

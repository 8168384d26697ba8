//! Scenario execution and the bundled gallery.

use crate::commands::{dispatch, Settings};
use crate::error::CliError;
use crate::report::{Args, Report};
use crate::scenario::{Env, Scenario};

pub const GALLERY: &[(&str, &str)] = &[
    ("unit-disc-points", include_str!("../gallery/unit_disc_points.json")),
    (
        "affinoid-field-points",
        include_str!("../gallery/affinoid_field_points.json"),
    ),
    ("rational-subsets", include_str!("../gallery/rational_subsets.json")),
    ("laurent-covering", include_str!("../gallery/laurent_covering.json")),
    ("disc-localization", include_str!("../gallery/disc_localization.json")),
    ("completion", include_str!("../gallery/completion.json")),
    ("generic-fibers", include_str!("../gallery/generic_fibers.json")),
    ("special-fibers", include_str!("../gallery/special_fibers.json")),
    ("fiber-products", include_str!("../gallery/fiber_products.json")),
    ("analytification", include_str!("../gallery/analytification.json")),
    ("projective-line", include_str!("../gallery/projective_line.json")),
    ("weighted-algebra", include_str!("../gallery/weighted_algebra.json")),
    ("non-sheafy", include_str!("../gallery/non_sheafy.json")),
    ("tate-acyclicity", include_str!("../gallery/tate_acyclicity.json")),
    ("analytic-locus", include_str!("../gallery/analytic_locus.json")),
];

/// One executed query.
pub struct Outcome {
    pub index: usize,
    pub command: String,
    pub result: Result<Report, CliError>,
    /// `(key, expected, actual)` for every failed expectation.
    pub mismatches: Vec<(String, String, Option<String>)>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.result.is_ok() && self.mismatches.is_empty()
    }
}

pub fn run_scenario(sc: &Scenario, set: Settings) -> Result<Vec<Outcome>, CliError> {
    let env = Env::build(sc, set.precision.1)?;
    Ok(sc
        .queries
        .iter()
        .enumerate()
        .map(|(index, q)| {
            let result = dispatch(&q.command, &env, &Args::from_json(&q.args), set);
            let mismatches = match &result {
                Ok(rep) => q
                    .expect
                    .iter()
                    .filter(|(k, v)| rep.get(k) != Some(v.as_str()))
                    .map(|(k, v)| (k.clone(), v.clone(), rep.get(k).map(str::to_string)))
                    .collect(),
                Err(_) => vec![],
            };
            Outcome {
                index,
                command: q.command.clone(),
                result,
                mismatches,
            }
        })
        .collect())
}

pub struct GalleryRow {
    pub name: String,
    pub queries: usize,
    pub passed: usize,
    pub failures: Vec<String>,
}

pub fn run_gallery(entries: &[(&str, &str)], set: Settings) -> Vec<GalleryRow> {
    entries
        .iter()
        .map(|(name, src)| {
            let outcomes = Scenario::parse(src).and_then(|sc| run_scenario(&sc, set));
            match outcomes {
                Err(e) => GalleryRow {
                    name: name.to_string(),
                    queries: 0,
                    passed: 0,
                    failures: vec![e.to_string()],
                },
                Ok(outs) => GalleryRow {
                    name: name.to_string(),
                    queries: outs.len(),
                    passed: outs.iter().filter(|o| o.passed()).count(),
                    failures: outs.iter().filter(|o| !o.passed()).map(describe_failure).collect(),
                },
            }
        })
        .collect()
}

pub fn describe_failure(o: &Outcome) -> String {
    match &o.result {
        Err(e) => format!("query {} ({}): {e}", o.index + 1, o.command),
        Ok(_) => {
            let parts: Vec<String> = o
                .mismatches
                .iter()
                .map(|(k, want, got)| format!("{k}: want `{want}`, got `{}`", got.as_deref().unwrap_or("<missing>")))
                .collect();
            format!("query {} ({}): {}", o.index + 1, o.command, parts.join("; "))
        }
    }
}

pub fn render_table(rows: &[GalleryRow]) -> String {
    let mut out = String::new();
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in rows {
        let status = if r.failures.is_empty() && r.queries > 0 {
            "PASS"
        } else {
            "FAIL"
        };
        out.push_str(&format!("{status} {:<width$} {}/{}\n", r.name, r.passed, r.queries));
        for f in &r.failures {
            out.push_str(&format!("     {f}\n"));
        }
    }
    let ok = rows.iter().filter(|r| r.failures.is_empty() && r.queries > 0).count();
    out.push_str(&format!("{ok}/{} scenarios pass\n", rows.len()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_gallery_entry_parses() {
        for (name, src) in GALLERY {
            let sc = Scenario::parse(src).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(!sc.queries.is_empty(), "{name} has no queries");
            assert!(
                sc.queries.iter().all(|q| !q.expect.is_empty()),
                "{name} has an unchecked query"
            );
        }
    }

    #[test]
    fn dropping_a_scenario_drops_a_row() {
        let rows = run_gallery(&GALLERY[1..3], Settings::default());
        assert_eq!(rows.len(), 2);
    }
}

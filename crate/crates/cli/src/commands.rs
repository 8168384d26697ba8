use spa_core::point::{affinoid_field_points, Chart, DiscPoint, PairOfDefinition, Sign};
use spa_core::presentation::{FiberMode, FiberProduct, Presentation, PresentationFamily};
use spa_core::sheafcheck::{buzver_witness, simple_laurent, stably_uniform_strictness};
use spa_core::subset::{reduce_to_simple, CoveringKind, SampleOutcome};
use spa_core::{Rational, Value};

use crate::error::CliError;
use crate::report::{Args, Report};
use crate::scenario::Env;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub precision: (i64, u32),
    pub n_max: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            precision: (8, 32),
            n_max: 8,
        }
    }
}

pub fn dispatch(command: &str, env: &Env, args: &Args, set: Settings) -> Result<Report, CliError> {
    let mut r = Report::new(command);
    match command {
        "eval" => eval(env, args, &mut r)?,
        "classify" => classify(env, args, &mut r)?,
        "member" => member(env, args, &mut r)?,
        "cover" => cover(env, args, &mut r)?,
        "reduce" => reduce(env, args, &mut r)?,
        "localize" => localize(env, args, &mut r)?,
        "complete" => {
            let name = args.req("presentation")?;
            let p = env
                .presentation(name)?
                .complete()
                .map_err(|e| CliError::precondition(name, e))?;
            presentation_lines(&mut r, "", &p);
        }
        "quotient" => {
            let name = args.req("presentation")?;
            let rel = args.req("relation")?;
            let p = env
                .presentation(name)?
                .quotient_str(rel)
                .map_err(|e| CliError::precondition(name, e))?;
            presentation_lines(&mut r, "", &p);
            if let Some((var, value)) = p.inverse_of_pi() {
                r.line(format!("p is inverted: 1/p = {value} ({var})"));
                r.kv("inverse_of_p", value);
            }
        }
        "generic-fiber" => {
            let name = args.req("presentation")?;
            let n_max = args.parsed("n_max", set.n_max)?;
            let fam = env
                .presentation(name)?
                .generic_fiber(n_max)
                .map_err(|e| CliError::precondition(name, e))?;
            family_lines(&mut r, &fam);
        }
        "special-fiber" => {
            let name = args.req("presentation")?;
            let p = env
                .presentation(name)?
                .special_fiber()
                .map_err(|e| CliError::precondition(name, e))?;
            presentation_lines(&mut r, "", &p);
        }
        "fiber-product" => fiber_product(env, args, set, &mut r)?,
        "analytify" => {
            let name = args.req("presentation")?;
            let k_max = args.parsed("n_max", set.n_max)?;
            let fam = env
                .presentation(name)?
                .analytify(k_max)
                .map_err(|e| CliError::precondition(name, e))?;
            family_lines(&mut r, &fam);
            sections_lines(env, args, set, &mut r, &fam)?;
        }
        "projective-line" => {
            let fam = PresentationFamily::projective_line(env.prime()).map_err(|e| CliError::precondition("P1", e))?;
            family_lines(&mut r, &fam);
            sections_lines(env, args, set, &mut r, &fam)?;
        }
        "sheaf-check" => sheaf_check(env, args, set, &mut r)?,
        "buzver" => {
            let n_max = args.parsed("n_max", set.n_max)? as u32;
            let rep = buzver_witness(n_max);
            for row in &rep.rows {
                r.line(format!(
                    "n={}: p^-{}*Z = {} = {}; {}",
                    row.n, row.n, row.minus, row.plus, row.not_divisible
                ));
            }
            r.kv("rows", rep.rows.len()).kv("all_verified", rep.all_verified());
        }
        "spa-count" => {
            let rank = args.parsed("rank", 1usize)?;
            let discrete = args.parsed("discrete", false)?;
            let pts = affinoid_field_points(rank, discrete).map_err(|e| CliError::precondition("rank", e))?;
            r.line(format!(
                "rank-{rank} valuation ring, {} topology: {} points ({})",
                if discrete { "discrete" } else { "analytic" },
                pts.count,
                pts.chain.join(", ")
            ));
            r.kv("count", pts.count).kv("primes", pts.chain.join(","));
        }
        other => return Err(CliError::UnknownCommand(other.to_string())),
    }
    Ok(r)
}

fn eval(env: &Env, args: &Args, r: &mut Report) -> Result<(), CliError> {
    let (pn, sn) = (args.req("point")?, args.req("series")?);
    let x = env.point(pn)?;
    let f = env.series_arg(sn)?;
    let v = x.eval(&env.field, &f).map_err(|e| CliError::precondition(sn, e))?;
    r.line(format!("x = {x}")).line(format!("|{f}|(x) = {v}"));
    r.kv("point", pn).kv("series", sn).kv("value", v);
    Ok(())
}

fn classify(env: &Env, args: &Args, r: &mut Report) -> Result<(), CliError> {
    let pn = args.req("point")?;
    let x = env.point(pn)?;
    let ty = x.classify().label();
    let support = x.support(&env.field);
    let pod = PairOfDefinition::unit_disc(&env.field, "T");
    let continuous = x
        .is_continuous(&env.field, &pod)
        .map_err(|e| CliError::precondition(pn, e))?;
    r.line(format!("x = {x}"))
        .line(format!("type: {ty}"))
        .line(format!("support: {support}"))
        .line(format!("continuous on Zp<T>: {continuous}"));
    r.kv("point", pn)
        .kv("type", ty)
        .kv("support", support)
        .kv("continuous", continuous);
    Ok(())
}

fn member(env: &Env, args: &Args, r: &mut Report) -> Result<(), CliError> {
    let (pn, un) = (args.req("point")?, args.req("subset")?);
    let x = env.point(pn)?;
    let (u, _) = env.subset(un)?;
    let inside = u.contains(&env.field, x).map_err(|e| CliError::precondition(un, e))?;
    r.line(format!("x = {x}")).line(format!("{u}: {inside}"));
    r.kv("point", pn).kv("subset", u).kv("member", inside);
    Ok(())
}

/// Sample points used when a scenario defines none.
fn default_samples(p: u64) -> Vec<(String, DiscPoint)> {
    let q = |n: i64| Rational::from_integer(n.into());
    let mut out = vec![
        ("classical(0)".to_string(), DiscPoint::classical(q(0), Chart::UNIT_DISC)),
        ("classical(1)".to_string(), DiscPoint::classical(q(1), Chart::UNIT_DISC)),
        (
            format!("classical({p})"),
            DiscPoint::classical(q(p as i64), Chart::UNIT_DISC),
        ),
    ];
    for l in [-2i64, -1, 0] {
        let x = DiscPoint::gauss(q(0), Value::rank1(q(l)), Chart::UNIT_DISC).expect("rank-1 radius");
        out.push((format!("gauss(0, g^({l}))"), x));
    }
    for (tag, sign) in [("-", Sign::Minus), ("+", Sign::Plus)] {
        let x = DiscPoint::gauss_signed(q(0), Value::rank1(q(0)), sign, Chart::UNIT_DISC).expect("rank-1 radius");
        out.push((format!("gauss(0, g^(0){tag})"), x));
    }
    out
}

fn cover(env: &Env, args: &Args, r: &mut Report) -> Result<(), CliError> {
    let cn = args.req("covering")?;
    let (_, spec, ambient) = env.covering(cn)?;
    let pieces = spec
        .pieces(&env.field, ambient)
        .map_err(|e| CliError::precondition(cn, e))?;
    let samples: Vec<(String, DiscPoint)> = match args.opt("samples") {
        Some(list) => list
            .split(',')
            .map(|n| env.point(n.trim()).map(|x| (n.trim().to_string(), x.clone())))
            .collect::<Result<_, _>>()?,
        None if !env.points.is_empty() => env.points.iter().map(|(n, x)| (n.clone(), x.clone())).collect(),
        None => default_samples(env.prime()),
    };
    let points: Vec<DiscPoint> = samples.iter().map(|(_, x)| x.clone()).collect();
    let rep = spec
        .verify_on_samples(&env.field, ambient, &points)
        .map_err(|e| CliError::precondition(cn, e))?;
    r.line(format!(
        "covering {cn} ({}), {} pieces:",
        spec.kind.label(),
        pieces.len()
    ));
    for p in &pieces {
        r.line(format!("  {}", p.label));
    }
    let mut undecided = Vec::new();
    for ((name, _), o) in samples.iter().zip(&rep.outcomes) {
        let status = match o {
            SampleOutcome::Covered { witness, .. } => format!("in {}", pieces[*witness].label),
            SampleOutcome::Uncovered => "UNCOVERED".to_string(),
            SampleOutcome::Undecidable(why) => {
                undecided.push(name.clone());
                format!("undecidable ({why})")
            }
        };
        r.line(format!("  sample {name}: {status}"));
    }
    let scope = match spec.kind {
        CoveringKind::SimpleLaurent | CoveringKind::StandardLaurent => {
            "verified on samples / exhaustive over sign patterns"
        }
        _ => "verified on samples",
    };
    r.line(scope);
    let uncovered: Vec<&str> = rep.uncovered().iter().map(|&i| samples[i].0.as_str()).collect();
    r.kv("covering", cn)
        .kv("kind", spec.kind.label())
        .kv(
            "pieces",
            pieces.iter().map(|p| p.label.as_str()).collect::<Vec<_>>().join("; "),
        )
        .kv("samples", samples.len())
        .kv("uncovered", uncovered.join(","))
        .kv("undecidable", undecided.join(","))
        .kv("covers", rep.all_covered())
        .kv("scope", scope);
    Ok(())
}

fn reduce(env: &Env, args: &Args, r: &mut Report) -> Result<(), CliError> {
    let cn = args.req("covering")?;
    let (_, spec, _) = env.covering(cn)?;
    if !matches!(spec.kind, CoveringKind::StandardLaurent | CoveringKind::SimpleLaurent) {
        return Err(CliError::Precondition {
            name: cn.to_string(),
            message: "only Laurent coverings reduce to simple ones".into(),
        });
    }
    let tree = reduce_to_simple(&spec.generators).map_err(|e| CliError::precondition(cn, e))?;
    let leaves: Vec<String> = tree
        .leaves()
        .iter()
        .map(|pat| pat.iter().map(|&b| if b { "-" } else { "+" }).collect())
        .collect();
    r.line(format!(
        "refinement of {cn} into simple Laurent coverings, depth {}",
        tree.depth()
    ));
    r.line(format!("leaf sign patterns (- means |t_i| <= 1): {}", leaves.join(" ")));
    r.kv("covering", cn)
        .kv("depth", tree.depth())
        .kv("leaves", leaves.join(","));
    Ok(())
}

fn localize(env: &Env, args: &Args, r: &mut Report) -> Result<(), CliError> {
    let (pn, un) = (args.req("presentation")?, args.req("subset")?);
    let a = env.presentation(pn)?;
    let (u, _) = env.subset(un)?;
    let loc = a.localize(u).map_err(|e| CliError::precondition(un, e))?;
    r.line(format!("localization of {} along {u}", a.ring_string()));
    r.line(format!("quotient form: {}", loc.quotient_form));
    r.kv("quotient_form", &loc.quotient_form);
    presentation_lines(r, "", &loc.presentation);
    Ok(())
}

fn fiber_product(env: &Env, args: &Args, set: Settings, r: &mut Report) -> Result<(), CliError> {
    let names = [args.req("left")?, args.req("right")?, args.req("over")?];
    let [b, c, a] = [
        env.presentation(names[0])?,
        env.presentation(names[1])?,
        env.presentation(names[2])?,
    ];
    let mode = match args.opt("mode").unwrap_or("adic") {
        "adic" => FiberMode::Adic,
        "ascending" => FiberMode::Ascending,
        other => return Err(CliError::Resolve(format!("argument `mode`: unknown mode `{other}`"))),
    };
    let n_max = args.parsed("n_max", set.n_max)?;
    let out = Presentation::fiber_product(&b, &c, &a, mode, n_max).map_err(|e| CliError::precondition(names[0], e))?;
    match out {
        FiberProduct::Single(p) => presentation_lines(r, "", &p),
        FiberProduct::Family(f) => family_lines(r, &f),
    }
    Ok(())
}

fn presentation_lines(r: &mut Report, prefix: &str, p: &Presentation) {
    let nf = p.normal_form();
    r.line(format!("{prefix}ring: {}", nf.ring))
        .line(format!("{prefix}ring of definition: {}", nf.ring_of_def))
        .line(format!("{prefix}ideal of definition: {}", nf.ideal))
        .line(format!("{prefix}plus ring: {}", nf.plus))
        .line(format!("{prefix}topology: {}", nf.topology));
    r.kv(&format!("{prefix}ring"), nf.ring)
        .kv(&format!("{prefix}ring_of_definition"), nf.ring_of_def)
        .kv(&format!("{prefix}ideal"), nf.ideal)
        .kv(&format!("{prefix}plus"), nf.plus)
        .kv(&format!("{prefix}topology"), nf.topology);
}

fn family_lines(r: &mut Report, fam: &PresentationFamily) {
    r.line(format!("{} ({} pieces)", fam.label, fam.pieces.len()));
    r.kv("pieces", fam.pieces.len());
    for (i, p) in fam.pieces.iter().enumerate() {
        r.line(format!("  piece {}: {}", i + 1, p.normal_form()));
        r.kv(&format!("piece.{}", i + 1), p.ring_string());
    }
    for t in &fam.transitions {
        r.line(format!("  transition {} -> {}: {}", t.source + 1, t.target + 1, t.rule));
    }
    if let Some(k) = fam.stabilizes_at() {
        r.line(format!("normal forms stabilize from piece {}", k + 1));
        r.kv("stabilizes_at", k + 1);
    }
    if let Some(m) = fam.marker() {
        r.line(m.clone());
        r.kv("marker", m);
    }
}

fn sections_lines(
    env: &Env,
    args: &Args,
    set: Settings,
    r: &mut Report,
    fam: &PresentationFamily,
) -> Result<(), CliError> {
    let s = fam
        .glue_sections(set.precision.1)
        .map_err(|e| CliError::precondition(&fam.label, e))?;
    r.line(format!("global sections: {}", s.describe()));
    r.kv("sections", s.describe());
    if let Some(list) = args.opt("test") {
        for name in list.split(',').map(str::trim) {
            let f = env.series_arg(name)?;
            let inside = s.contains(&f).map_err(|e| CliError::precondition(name, e))?;
            r.line(format!("  {name} is a global section: {inside}"));
            r.kv(&format!("section.{name}"), inside);
        }
    }
    Ok(())
}

fn sheaf_check(env: &Env, args: &Args, set: Settings, r: &mut Report) -> Result<(), CliError> {
    let pn = args.req("presentation")?;
    let a = env.presentation(pn)?;
    let tn = args.opt("t").unwrap_or("T");
    let t = a.parse_element(tn).map_err(|e| CliError::precondition(tn, e))?;
    let rep = simple_laurent(&a, &t, set.precision).map_err(|e| CliError::precondition(pn, e))?;
    let strict =
        stably_uniform_strictness(&a, &t, set.precision, set.precision.0).map_err(|e| CliError::precondition(pn, e))?;
    for l in rep.to_string().lines() {
        r.line(l);
    }
    let lengths: Vec<String> = rep.lengths.iter().map(u64::to_string).collect();
    r.line(format!("Zp-lengths (terms, images): {}", lengths.join(" ")));
    match (strict.m, &strict.failure) {
        (Some(m), _) => r.line(format!("strictness: p^{m} S0 lies in A0")),
        (None, Some(w)) => r.line(format!("strictness fails at {w}")),
        (None, None) => r.line(format!("strictness: no bound up to p^{}", strict.m_max)),
    };
    r.kv("presentation", pn)
        .kv("t", tn)
        .kv("precision", format!("{},{}", rep.precision.0, rep.precision.1))
        .kv("injective", rep.injective)
        .kv(
            "kernel_witness",
            rep.kernel_witness.as_ref().map_or("", |w| w.element.as_str()),
        )
        .kv(
            "witness_verified",
            rep.kernel_witness.as_ref().is_some_and(|w| w.verified),
        )
        .kv("middle_exact", rep.middle_exact)
        .kv("surjective", rep.surjective)
        .kv("exact", rep.exact())
        .kv("lengths", lengths.join(","))
        .kv("strictness", strict.m.map_or("none".to_string(), |m| m.to_string()))
        .kv("verdict", rep.verdict());
    Ok(())
}

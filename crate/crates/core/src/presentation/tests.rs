use super::*;
use crate::series::Series;
use crate::subset::{find_witness, Ambient, OpenIdealWitness, RationalSubset};

const P: u64 = 5;

fn cat(name: &str) -> Presentation {
    Presentation::catalog(name, P).unwrap()
}

fn subset(pres: &Presentation, nums: &[&str], den: &str, ambient: &Ambient) -> RationalSubset {
    let k = pres.field();
    let nums = nums.iter().map(|s| pres.parse_element(s).unwrap()).collect();
    let den = pres.parse_element(den).unwrap();
    RationalSubset::new(&k, ambient, nums, den).unwrap()
}

#[test]
fn catalog_rendering() {
    assert_eq!(cat("Qp<T>").ring_string(), "Qp<T>");
    assert_eq!(cat("Qp<T>").plus_string(), "Zp<T>");
    assert_eq!(cat("Zp[[T]]").ideal_string(), "(5, T)");
    assert_eq!(cat("Zp[[T]]").topology(), Topology::Adic);
    assert_eq!(cat("Fp[T]").topology(), Topology::Discrete);
    assert_eq!(cat("Qp<T,T^-1>").ring_string(), "Qp<T,T^-1>");
    assert_eq!(cat("Zp<T>_{p}").ring_string(), "Zp<T>_{p}");
    assert_eq!(cat("Zp<T>_{p}").ring_of_def_string(), "Zp<p*T>");
    assert!(cat("Qp<T>+").plus_string().contains("|a_0| <= 1"));
    assert!(matches!(
        Presentation::catalog("Qp<<T>>", P),
        Err(PresentationError::UnknownBase(_))
    ));
}

#[test]
fn disc_localization() {
    let disc = cat("Qp<T>");
    let u = subset(&disc, &["T^3"], "p", &Ambient::Tate);
    let loc = disc.localize(&u).unwrap();
    assert_eq!(loc.presentation.ring_string(), "Qp<S,T>/(5*S - T^3)");
    assert_eq!(loc.presentation.ring_of_def_string(), "Zp<S,T>/(5*S - T^3)");
    assert_eq!(loc.quotient_form, "Qp<T><S>/(5*S - T^3)");
    assert_eq!(loc.presentation.topology(), Topology::Tate);
}

#[test]
fn laurent_pieces_of_the_disc() {
    let disc = cat("Qp<T>");
    let minus = disc.localize(&subset(&disc, &["T"], "1", &Ambient::Tate)).unwrap();
    assert_eq!(minus.presentation.normal_form(), disc.normal_form());
    let plus = disc.localize(&subset(&disc, &["1"], "T", &Ambient::Tate)).unwrap();
    assert_eq!(plus.presentation.ring_string(), "Qp<T,T^-1>");
    let whole = disc.localize(&subset(&disc, &["1"], "1", &Ambient::Tate)).unwrap();
    assert_eq!(whole.presentation, disc);
}

#[test]
fn localization_needs_certificate() {
    let disc = cat("Qp<T>");
    let g = RationalSubset::generalized(vec![disc.parse_element("T").unwrap()], disc.parse_element("T").unwrap());
    assert_eq!(disc.localize(&g).unwrap_err(), PresentationError::MissingCertificate);
}

#[test]
fn completion_rules() {
    let zt = cat("Zp[[T]]");
    let pi = zt.pi();
    for n in 2..=5u32 {
        let u = RationalSubset {
            numerators: vec![zt.parse_element(&format!("T^{n}")).unwrap()],
            denominator: pi.clone(),
            witness: Some(OpenIdealWitness::ContainsIdealPower { r: n }),
        };
        let loc = zt.localize(&u).unwrap().presentation;
        assert_eq!(loc.ring_of_def_string(), format!("Zp[[T]][S]/(5*S - T^{n})"));
        let c = loc.complete().unwrap();
        assert_eq!(c.ring_string(), format!("Qp<S,T>/(5*S - T^{n})"));
        assert_eq!(c.ring_of_def_string(), format!("Zp<S,T>/(5*S - T^{n})"));
        assert_eq!(c.ideal_string(), "(5)");
    }
    assert_eq!(cat("Zp[T]").complete().unwrap().ring_string(), "Zp<T>");
    assert_eq!(cat("Fp[T]").complete().unwrap(), cat("Fp[T]"));
}

#[test]
fn integral_ring_of_definition_completes() {
    let base = cat("Zp[[T]]");
    let pres = Presentation::custom(
        P,
        CoeffRing::Integers,
        vec![
            VarSpec::new("S", VarKind::Polynomial),
            VarSpec::new("T", VarKind::PowerSeries),
        ],
        &["p*S - T^4".to_string()],
        Some(&["p".to_string(), "T".to_string()]),
    )
    .unwrap();
    assert_eq!(base.ideal_string(), pres.ideal_string());
    let c = pres.complete().unwrap();
    assert_eq!(c.ring_string(), "Zp<S,T>/(5*S - T^4)");
    assert_eq!(c.ideal_string(), "(5)");
}

#[test]
fn weighted_quotient_inverts_p() {
    let w = cat("Zp<T>_{p}");
    let q = w.quotient_str("p*T - 1").unwrap();
    assert_eq!(q.ring_string(), "Qp");
    assert_eq!(q.topology(), Topology::Tate);
    let (name, e) = q.inverse_of_pi().unwrap();
    assert_eq!(name, "T");
    assert_eq!(e * Rational::from_integer(5.into()), Rational::one());
}

#[test]
fn quotient_rules() {
    let two = Presentation::custom(
        P,
        CoeffRing::Field,
        vec![
            VarSpec::new("S", VarKind::Restricted),
            VarSpec::new("T", VarKind::Restricted),
        ],
        &["S*T - 1".to_string()],
        None,
    )
    .unwrap();
    assert_eq!(two.ring_string(), "Qp<T,T^-1>");
    let disc = cat("Qp<T>");
    assert!(disc.quotient_str("p*T - 1").unwrap().is_zero_ring());
    assert_eq!(disc.quotient_str("T - p").unwrap().ring_string(), "Qp");
    assert_eq!(disc.quotient_str("0").unwrap(), disc);
    assert!(cat("Zp[[T]]").quotient_str("T - 1").unwrap().is_zero_ring());
    assert_eq!(cat("Zp[[T]]").quotient_str("T - p").unwrap().ring_string(), "Zp");
}

#[test]
fn generic_fibers() {
    let g = cat("Zp<T>").generic_fiber(8).unwrap();
    assert_eq!(g.pieces.len(), 1);
    assert_eq!(g.pieces[0].ring_string(), "Qp<T>");
    assert_eq!(g.pieces[0].plus_string(), "Zp<T>");
    assert_eq!(cat("Zp").generic_fiber(8).unwrap().pieces[0].ring_string(), "Qp");
    let od = cat("Zp[[T]]").generic_fiber(8).unwrap();
    assert_eq!(od.pieces.len(), 8);
    assert_eq!(od.kind, FamilyKind::OpenDisc);
    assert_eq!(od.pieces[0].ring_string(), "Qp<S>");
    for n in 2..=8 {
        assert_eq!(od.pieces[n - 1].ring_string(), format!("Qp<S,T>/(5*S - T^{n})"));
    }
    assert!(od.marker().unwrap().contains("truncated ascending union"));
    assert!(matches!(
        cat("Qp<T>").generic_fiber(8),
        Err(PresentationError::NotIntegral(_))
    ));
    assert!(matches!(
        cat("Fp[[T]]").generic_fiber(8),
        Err(PresentationError::NotIntegral(_))
    ));
}

#[test]
fn special_fibers() {
    let a = cat("Zp<T>").special_fiber().unwrap();
    assert_eq!(a.ring_string(), "Fp[T]");
    assert_eq!(a.topology(), Topology::Discrete);
    let b = cat("Zp[[T]]").special_fiber().unwrap();
    assert_eq!(b.ring_string(), "Fp[[T]]");
    assert_eq!(b.ideal_string(), "(T)");
    assert_eq!(b.topology(), Topology::Adic);
    assert_eq!(cat("Zp").special_fiber().unwrap().ring_string(), "Fp");
    let q = cat("Zp<T>").quotient_str("T^2 - 6").unwrap().special_fiber().unwrap();
    assert_eq!(q.ring_string(), "Fp[T]/(T^2 + 4)");
}

#[test]
fn fiber_products() {
    let d = cat("Qp<T>");
    let FiberProduct::Single(dd) = Presentation::fiber_product(&d, &d, &cat("Qp"), FiberMode::Adic, 8).unwrap() else {
        panic!()
    };
    assert_eq!(dd.ring_string(), "Qp<S,T>");
    assert_eq!(dd.plus_string(), "Zp<S,T>");
    let zt = cat("Zp[[T]]");
    let err = Presentation::fiber_product(&zt, &cat("Qp"), &cat("Zp"), FiberMode::Adic, 8);
    assert!(matches!(err, Err(PresentationError::ModeViolation(_))));
    let FiberProduct::Family(f) =
        Presentation::fiber_product(&zt, &cat("Qp"), &cat("Zp"), FiberMode::Ascending, 8).unwrap()
    else {
        panic!()
    };
    assert_eq!(f.pieces.len(), 8);
    assert_eq!(f.pieces[2].ring_string(), "Qp<S,T>/(5*S - T^3)");
    let FiberProduct::Single(same) =
        Presentation::fiber_product(&zt, &cat("Zp"), &cat("Zp"), FiberMode::Adic, 8).unwrap()
    else {
        panic!()
    };
    assert_eq!(same, zt);
}

#[test]
fn fiber_product_is_symmetric() {
    let a = cat("Qp");
    let x = cat("Qp<T>").quotient_str("T^2 - p").unwrap();
    let y = cat("Qp<T,T^-1>");
    let FiberProduct::Single(xy) = Presentation::fiber_product(&x, &y, &a, FiberMode::Adic, 8).unwrap() else {
        panic!()
    };
    let FiberProduct::Single(yx) = Presentation::fiber_product(&y, &x, &a, FiberMode::Adic, 8).unwrap() else {
        panic!()
    };
    assert!(xy.same_up_to_renaming(&yx).unwrap());
}

#[test]
fn analytification_of_a_point() {
    let line = cat("Qp[T]");
    let pt = line.quotient_str("T - 1/25").unwrap();
    assert_eq!(pt.ring_string(), "Qp");
    let scheme = Presentation::custom(
        P,
        CoeffRing::Field,
        vec![VarSpec::new("T", VarKind::Polynomial)],
        &[],
        None,
    )
    .unwrap();
    let mut with_rel = scheme.clone();
    with_rel.relations.push(scheme.parse_element("T - 1/25").unwrap());
    let fam = with_rel.analytify(6).unwrap();
    assert!(fam.pieces[0].is_zero_ring());
    assert!(fam.pieces[1].is_zero_ring());
    assert_eq!(fam.pieces[2].ring_string(), "Qp");
    assert_eq!(fam.stabilizes_at(), Some(2));
    let t = fam.transitions[3].then(&fam.transitions[2]).unwrap();
    assert_eq!(t.scale, Some(2));
}

#[test]
fn affine_line_sections_are_entire() {
    let fam = cat("Qp[T]").analytify(DEFAULT_TRUNCATION).unwrap();
    assert_eq!(fam.pieces[3].ring_string(), "Qp<p^3*T>");
    assert_eq!(fam.kind, FamilyKind::AffineLine);
    let s = fam.glue_sections(32).unwrap();
    assert!(s.contains(&Series::super_geometric(P, "T", 1, 4)).unwrap());
    assert!(!s.contains(&Series::geometric(P, "T", 1, 0, 4)).unwrap());
}

#[test]
fn projective_line_sections_are_constants() {
    let fam = PresentationFamily::projective_line(P).unwrap();
    assert_eq!(
        fam.glue_sections(32).unwrap(),
        Sections::Constants {
            dimension: 1,
            degree: 32
        }
    );
}

#[test]
fn nested_localizations_compose() {
    let zt = cat("Zp[[T]]");
    let frac = |pres: &Presentation, n: u32| RationalSubset {
        numerators: vec![pres.parse_element(&format!("T^{n}")).unwrap()],
        denominator: pres.pi(),
        witness: Some(OpenIdealWitness::ContainsIdealPower { r: n }),
    };
    for (outer, inner) in [(4, 2), (5, 3), (3, 2), (6, 6)] {
        let once = zt.localize(&frac(&zt, inner)).unwrap().presentation.complete().unwrap();
        let first = zt.localize(&frac(&zt, outer)).unwrap().presentation.complete().unwrap();
        let k = first.field();
        let u = frac(&first, inner);
        let amb = Ambient::Tate;
        let _ = find_witness(&k, &amb, &u.elements());
        let twice = first.localize(&u).unwrap().presentation;
        assert_eq!(twice.normal_form(), once.normal_form(), "{outer} then {inner}");
        assert!(twice.eq_at_precision(&once, 8, 32).unwrap());
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn frac(pres: &Presentation, n: u32) -> RationalSubset {
        RationalSubset {
            numerators: vec![pres.parse_element(&format!("T^{n}")).unwrap()],
            denominator: pres.pi(),
            witness: Some(OpenIdealWitness::ContainsIdealPower { r: n }),
        }
    }

    fn relation(a: u32, b: u32, c: i64) -> String {
        format!("T^{a} - {c}*p^{b}")
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn nested_localization(inner in 1u32..=8, extra in 0u32..=8) {
            let zt = cat("Zp[[T]]");
            let outer = inner + extra;
            let once = zt.localize(&frac(&zt, inner)).unwrap().presentation.complete().unwrap();
            let first = zt.localize(&frac(&zt, outer)).unwrap().presentation.complete().unwrap();
            let twice = first.localize(&frac(&first, inner)).unwrap().presentation;
            prop_assert!(twice.eq_at_precision(&once, 8, 32).unwrap());
            prop_assert_eq!(twice.normal_form(), once.normal_form());
        }

        #[test]
        fn generic_fiber_round_trip(a in 1u32..=4, b in 0u32..=4, c in 1i64..=4) {
            let rel = relation(a, b, c);
            let model = cat("Zp<T>").quotient_str(&rel).unwrap();
            let fam = model.generic_fiber(8).unwrap();
            prop_assert_eq!(fam.pieces.len(), 1);
            let direct = cat("Qp<T>").quotient_str(&rel).unwrap();
            prop_assert_eq!(fam.pieces[0].normal_form().ring, direct.normal_form().ring);
            prop_assert!(fam.pieces[0].eq_at_precision(&direct, 8, 32).unwrap());
        }

        #[test]
        fn fiber_product_symmetry(i in 0usize..4, j in 0usize..4, b in 0u32..=3) {
            let rel = relation(2, b, 1);
            let menu = [
                cat("Qp<T>"),
                cat("Qp<T,T^-1>"),
                cat("Qp<T>").quotient_str(&rel).unwrap(),
                cat("Qp"),
            ];
            let over = cat("Qp");
            let FiberProduct::Single(x) =
                Presentation::fiber_product(&menu[i], &menu[j], &over, FiberMode::Adic, 8).unwrap() else { unreachable!() };
            let FiberProduct::Single(y) =
                Presentation::fiber_product(&menu[j], &menu[i], &over, FiberMode::Adic, 8).unwrap() else { unreachable!() };
            prop_assert!(x.same_up_to_renaming(&y).unwrap(), "{} vs {}", x, y);
        }
    }
}

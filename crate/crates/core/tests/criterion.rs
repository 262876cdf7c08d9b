use std::path::PathBuf;

use modhyp::algebra::{q, QPoly};
use modhyp::criterion::{attempt_equation, canonical_h_basis, compose_product, verify_equation, CandidateSpace, CurveRecord};
use modhyp::newform::{ingest_fixture, label, Newform};
use modhyp::hypgeom::is_isomorphic;
use modhyp::recover::{expand_model, ExpansionPoint, HyperellipticModel, PointType};
use modhyp::Error;

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn space(level: u64, letters: &[&str]) -> CandidateSpace {
    let forms = ingest_fixture(fixture_dir().join(format!("{level}.nfqx"))).unwrap();
    let labels = label(&forms).unwrap();
    let mut orbits: Vec<Newform> = Vec::new();
    let mut names = Vec::new();
    for l in letters {
        let want = format!("{level}{l}");
        let i = labels
            .iter()
            .position(|x| x == &want)
            .unwrap_or_else(|| panic!("no orbit {want} in {labels:?}"));
        orbits.push(forms[i].clone());
        names.push(labels[i].clone());
    }
    CandidateSpace::new(orbits, names).unwrap()
}

fn poly(c: &[i64]) -> QPoly {
    QPoly::from_i64(c)
}

fn assert_same_curve(got: &QPoly, want: &QPoly) {
    if got != want {
        assert!(is_isomorphic(got, want, (want.deg() as usize - 1) / 2, 6).is_some(), "y^2 = {got} is not y^2 = {want}");
    }
}

#[test]
fn level_39_genus_three() {
    let c = space(39, &["A", "B"]);
    assert_eq!(c.dominating_genus(), 3);
    let hb = canonical_h_basis(&c).unwrap();
    assert_eq!(hb.point_type, PointType::NonWeierstrass);
    for (j, h) in hb.h.iter().enumerate() {
        for n in 1..=3 {
            assert_eq!(h.coeff(n), q((n == j as i64 + 1) as i64));
        }
    }
    let r = attempt_equation(&c).unwrap();
    let want = &poly(&[-1, -2, -4, -3, 1]) * &poly(&[3, 6, 8, 5, 1]);
    assert_same_curve(r.model.f(), &want);
    assert_eq!(r.label, "C_{39}^{A,B}");
    // x has a simple pole, y a pole of order g + 1
    let x = r.x.as_ref().unwrap();
    assert_eq!(x.valuation(), Some(-1));
}

#[test]
fn level_41_simple_genus_three() {
    let r = attempt_equation(&space(41, &["A"])).unwrap();
    assert_same_curve(r.model.f(), &poly(&[-16, 36, 53, -56, -120, -66, -8, 4, 1]));
}

#[test]
fn level_48_weierstrass_cusp() {
    let c = space(48, &["A", "A_{{1,0},1}"]);
    assert!(!c.trivial_character());
    let hb = canonical_h_basis(&c).unwrap();
    assert_eq!(hb.point_type, PointType::Weierstrass);
    for h in &hb.h {
        assert!((1..40).all(|k| h.coeff(2 * k) == q(0)));
    }
    let r = attempt_equation(&c).unwrap();
    assert_eq!(r.model.point_type(), PointType::Weierstrass);
    assert_eq!(r.x.as_ref().unwrap().valuation(), Some(-2));
    let want = &(&poly(&[1, 1]) * &poly(&[-2, -2, 1])) * &(&poly(&[1, 1, 1]) * &poly(&[2, 2, 1]));
    assert_same_curve(r.model.f(), &want);
}

#[test]
fn level_21_nontrivial_character() {
    let c = space(21, &["A", "A_{0,2}"]);
    assert_eq!(c.genus(), 3);
    let r = attempt_equation(&c).unwrap();
    assert_eq!(r.label, "C_{21A_{0,2}}^{A}");
    assert_same_curve(r.model.f(), &(&poly(&[1, -1, 1]) * &poly(&[1, -7, 14, -3, -6, 1, 1])));
}

#[test]
fn two_elliptic_orbits_fail() {
    // two copies of one elliptic orbit: a_2 and a_3 agree coordinatewise
    let forms = ingest_fixture(fixture_dir().join("39.nfqx")).unwrap();
    let e = forms.iter().find(|f| f.dimension() == 1).unwrap().clone();
    let c = CandidateSpace::new(vec![e.clone(), e], vec!["39A".into(), "39A".into()]).unwrap();
    assert!(matches!(canonical_h_basis(&c), Err(Error::NotHyperelliptic(_))));
    assert!(attempt_equation(&c).is_err());
}

#[test]
fn verification_examples() {
    let m = HyperellipticModel::new(poly(&[1, 0, 0, 0, 0, 1])).unwrap();
    let b = expand_model(&m, &ExpansionPoint::Infinity, 40).unwrap();
    // w_i = x^i (dx/dq)/y
    let w = b.series();
    let x = w[1].div(&w[0]).unwrap();
    let y = x.ddq().div(&w[0]).unwrap();
    assert_eq!(y.valuation(), Some(-5));
    assert!(verify_equation(&x, &y, m.f(), 2).unwrap());
    assert!(!verify_equation(&x, &y, &poly(&[2, 0, 0, 0, 0, 1]), 2).unwrap());
    assert!(matches!(
        verify_equation(&x.truncate(3), &y, m.f(), 2),
        Err(Error::InsufficientPrecision { needed: 13, .. })
    ));
}

#[test]
fn level_376_products() {
    let pa = poly(&[1, -2, 2, -1, 0, 1]);
    let pb = poly(&[5, 2, -2, 3, 4, 1]);
    let qq = poly(&[-4, 4, -3, -2, 1]);
    let a = attempt_equation(&space(376, &["A"])).unwrap();
    let b = attempt_equation(&space(376, &["B"])).unwrap();
    let d = attempt_equation(&space(376, &["D"])).unwrap();
    let ab = compose_product(&a, &b).unwrap();
    assert_eq!(ab.label, "C_{376}^{2,2}");
    assert_eq!(ab.genus(), 4);
    assert_same_curve(ab.model.f(), &(&pa * &pb));
    let bd = compose_product(&b, &d).unwrap();
    assert_eq!(bd.label, "C_{376}^{2,4}");
    assert_eq!(bd.genus(), 6);
    assert_same_curve(bd.model.f(), &(&(&pa * &pb) * &qq));
    assert_eq!(compose_product(&a, &a), Err(Error::GenusTooSmall));
}

#[test]
fn record_text_round_trip() {
    let r = attempt_equation(&space(41, &["A"])).unwrap();
    let text = r.to_string();
    assert!(text.starts_with("curve C_{41}^{A} : genus 3 : non-Weierstrass : F = "));
    let back: CurveRecord = text.parse().unwrap();
    assert_eq!(back.model, r.model);
    assert_eq!(back.level, 41);
}

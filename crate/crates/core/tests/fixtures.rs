use std::path::PathBuf;

use modhyp::algebra::q;
use modhyp::newform::{ingest_fixture, label, oldform_expand, parse_nfqx, write_nfqx, Constraint, Status};
use modhyp::Error;

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load(level: u64) -> Vec<modhyp::newform::Newform> {
    ingest_fixture(fixture_dir().join(format!("{level}.nfqx"))).unwrap()
}

#[test]
fn every_fixture_loads_and_validates() {
    let mut n = 0;
    for entry in std::fs::read_dir(fixture_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "nfqx") {
            let forms = ingest_fixture(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert!(!forms.is_empty());
            for f in &forms {
                assert!(f.check_local_constraints().passed());
                assert!(f.check_ramanujan().is_ok());
            }
            n += 1;
        }
    }
    assert!(n >= 40);
}

#[test]
fn level_39_has_dimensions_one_and_two() {
    let forms = load(39);
    let mut dims: Vec<usize> = forms.iter().map(|f| f.dimension()).collect();
    dims.sort();
    assert_eq!(dims, vec![1, 2]);
    let labels = label(&forms).unwrap();
    for (f, l) in forms.iter().zip(&labels) {
        let expected = if f.dimension() == 1 { "39A" } else { "39B" };
        assert_eq!(l, expected);
    }
    // a_3^2 = 1 for both orbits; 39A itself has a_3 = -1
    let a = forms.iter().find(|f| f.dimension() == 1).unwrap();
    assert_eq!(a.coeff(3), &[q(-1)]);
    assert_eq!(a.check_local_constraints().status(3, Constraint::SquareAp), Some(Status::Pass));
}

#[test]
fn level_13_label_and_character() {
    let forms = load(13);
    assert_eq!(forms.len(), 1);
    assert_eq!(label(&forms).unwrap(), vec!["13A_{2}".to_string()]);
    assert_eq!(forms[0].character().order(), 6);
    let r = forms[0].check_local_constraints();
    assert_eq!(r.status(13, Constraint::AbsAp), Some(Status::Pass));
    assert_eq!(r.unchecked().count(), 0);
}

#[test]
fn labels_are_permutation_invariant() {
    for level in [91, 128, 160, 208] {
        let forms = load(level);
        let labels = label(&forms).unwrap();
        let mut rev = forms.clone();
        rev.reverse();
        let mut rl = label(&rev).unwrap();
        rl.reverse();
        assert_eq!(labels, rl);
    }
}

#[test]
fn wp_levels_have_vanishing_even_coefficients() {
    // trivial character and 4 | N force a_2 = 0, hence a_{2n} = 0
    for level in [36, 52, 56, 72, 80, 88, 104, 112, 116, 128, 144, 152, 164, 176, 184, 196, 200, 208, 376] {
        for f in load(level) {
            assert!(f.has_vanishing_even_coefficients(), "level {level}");
        }
    }
}

#[test]
fn writer_round_trips_and_truncation_is_consistent() {
    let forms = load(21);
    assert_eq!(parse_nfqx(&write_nfqx(&forms)).unwrap(), forms);
    for f in &forms {
        let t = f.truncate(20);
        let primes: std::collections::BTreeMap<u64, Vec<_>> =
            modhyp::arith::primes_up_to(f.precision()).into_iter().map(|p| (p, f.coeff(p).to_vec())).collect();
        assert_eq!(t.extend_coefficients(f.precision(), &primes).unwrap(), *f);
    }
}

#[test]
fn level_94_from_level_47() {
    // h = f(q) - 2 f(q^2) for the level-47 orbit lies in S_2(94)
    let f = &load(47)[0];
    assert_eq!(f.dimension(), 4);
    let g = f.coordinate_series(0);
    let h = g.sub(&oldform_expand(&g, 2).scale(&q(2)));
    assert_eq!(h.coeff(2), g.coeff(2) - q(2));
}

#[test]
fn rejects_modified_fixture() {
    let text = std::fs::read_to_string(fixture_dir().join("39.nfqx")).unwrap();
    let bad = text.replacen("a 1 : 1", "a 1 : -1", 1);
    assert!(matches!(parse_nfqx(&bad), Err(Error::Constraint(_))));
}

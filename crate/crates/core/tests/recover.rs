use std::path::PathBuf;

use modhyp::algebra::{q, Matrix, QPoly, QSeries, Q};
use modhyp::newform::{ingest_fixture, RationalOrbitBasis};
use modhyp::recover::{
    detect_point_type, expand_model, find_relations, format_basis, parse_basis, recover,
    recover_hyperelliptic, recover_ramified, required_precision, DifferentialBasis, ExpansionPoint,
    HyperellipticModel, PointType, PrecisionMode, ProfileType, Recovered,
};
use modhyp::hypgeom::is_isomorphic;
use modhyp::Error;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn isomorphic(f: &QPoly, g: &QPoly, height: i64) -> bool {
    is_isomorphic(f, g, (f.deg() as usize - 1) / 2, height).is_some()
}

fn model(c: &[i64]) -> HyperellipticModel {
    HyperellipticModel::new(QPoly::from_i64(c)).unwrap()
}

fn precision_for(m: &HyperellipticModel) -> i64 {
    let mode = match m.point_type() {
        PointType::Weierstrass => PrecisionMode::HyperellipticWp,
        PointType::NonWeierstrass => PrecisionMode::HyperellipticNonWp,
    };
    required_precision(m.genus(), mode).unwrap()
}

#[test]
fn quintic_at_infinity() {
    let m = model(&[1, 0, 0, 0, 0, 1]);
    let b = expand_model(&m, &ExpansionPoint::Infinity, 13).unwrap();
    // dx/y = -2 q^2 (1 - q^10/2 + ...) dq
    let w = &b.series()[0];
    assert_eq!(w.valuation(), Some(2));
    assert_eq!(w.coeff(2), q(-2));
    assert_eq!(w.coeff(12), q(1));
    let (_, profile) = b.normalize().unwrap();
    assert_eq!(profile, vec![0, 2]);
    assert_eq!(detect_point_type(&profile), ProfileType::Point(PointType::Weierstrass));
    assert_eq!(recover_hyperelliptic(&b).unwrap(), m);
}

#[test]
fn sextic_at_infinity() {
    let m = model(&[1, 1, 0, 0, 0, 0, 1]);
    let b = expand_model(&m, &ExpansionPoint::Infinity, 8).unwrap();
    assert_eq!(recover_hyperelliptic(&b).unwrap(), m);
    let short = b.truncate(7).unwrap();
    assert!(matches!(recover_hyperelliptic(&short), Err(Error::InsufficientPrecision { needed: 8, have: 7 })));
}

fn random_squarefree(rng: &mut ChaCha8Rng, deg: usize, monic: bool) -> QPoly {
    loop {
        let mut c: Vec<Q> = (0..deg).map(|_| q(rng.gen_range(-10..=10))).collect();
        let lead = if monic { 1 } else { rng.gen_range(1..=10) * if rng.gen_bool(0.5) { 1 } else { -1 } };
        c.push(q(lead));
        let f = QPoly::new(c);
        if f.is_squarefree() {
            return f;
        }
    }
}

#[test]
fn round_trip_on_random_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..200 {
        let g = 2 + trial % 5;
        let deg = if trial % 2 == 0 { 2 * g + 1 } else { 2 * g + 2 };
        let m = HyperellipticModel::new(random_squarefree(&mut rng, deg, true)).unwrap();
        let b = expand_model(&m, &ExpansionPoint::Infinity, precision_for(&m)).unwrap();
        assert_eq!(recover_hyperelliptic(&b).unwrap(), m, "trial {trial}");
    }
}

#[test]
fn non_monic_models_recover_up_to_isomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 10 {
        let f = random_squarefree(&mut rng, 5, false);
        let m = HyperellipticModel::new(f.clone()).unwrap();
        let Ok(b) = expand_model(&m, &ExpansionPoint::Infinity, 13) else {
            continue;
        };
        let r = recover_hyperelliptic(&b).unwrap();
        assert!(r.f().is_monic());
        assert!(isomorphic(r.f(), &f, 12) || isomorphic(&f, r.f(), 12), "{f}");
        done += 1;
    }
}

#[test]
fn finite_point_expansion() {
    // y^2 = x^6 + x + 1 at (0, 1)
    let m = model(&[1, 1, 0, 0, 0, 0, 1]);
    let b = expand_model(&m, &ExpansionPoint::Finite(q(0)), 12).unwrap();
    let r = recover_hyperelliptic(&b).unwrap();
    assert_eq!(r.genus(), 2);
    assert!(isomorphic(m.f(), r.f(), 3));
    let bad = expand_model(&model(&[0, 1, 0, 0, 0, 1]), &ExpansionPoint::Finite(q(0)), 12);
    assert!(matches!(bad, Err(Error::BadPoint(_))));
}

#[test]
fn basis_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for deg in [7, 8, 9, 10] {
        let m = HyperellipticModel::new(random_squarefree(&mut rng, deg, true)).unwrap();
        let b = expand_model(&m, &ExpansionPoint::Infinity, precision_for(&m)).unwrap();
        let g = b.genus();
        let mat = loop {
            let rows = (0..g).map(|_| (0..g).map(|_| q(rng.gen_range(-5..=5))).collect()).collect();
            let mat = Matrix::from_rows(rows);
            if !mat.det().is_zero() {
                break mat;
            }
        };
        let scrambled = b.transform(&mat).unwrap();
        assert_eq!(scrambled.normalize().unwrap(), b.normalize().unwrap());
        assert_eq!(recover_hyperelliptic(&scrambled).unwrap(), m);
    }
}

#[test]
fn precision_bound_is_sharp_in_genus_two() {
    // F and F + 1 become indistinguishable mod q^{4g+4} after q = Q + αQ^{4g+3}
    let g = 2i64;
    let p = 4 * g + 6;
    let f = model(&[3, -2, 1, 0, 0, 1]);
    let f1 = model(&[4, -2, 1, 0, 0, 1]);
    let b = expand_model(&f, &ExpansionPoint::Infinity, p).unwrap();
    let b1 = expand_model(&f1, &ExpansionPoint::Infinity, p).unwrap();
    let top = 4 * g + 2;
    // w for x^{g-1} dx/y is the series of valuation 0
    let w = &b.series()[g as usize - 1];
    let w1 = &b1.series()[g as usize - 1];
    assert!(w.agrees_to(w1, top));
    assert_ne!(w.coeff(top), w1.coeff(top));
    let alpha = (w1.coeff(top) - w.coeff(top)) / (q(-2) * q(4 * g + 3));
    let qs = QSeries::monomial(1, q(1), p + 1).add(&QSeries::monomial(4 * g + 3, alpha, p + 1));
    let dq = qs.ddq();
    for (s, s1) in b.series().iter().zip(b1.series()) {
        let moved = s.compose(&qs).unwrap().mul(&dq);
        assert!(moved.agrees_to(s1, 4 * g + 4));
    }
    // and the two curves are different
    assert_ne!(recover_hyperelliptic(&b).unwrap(), recover_hyperelliptic(&b1).unwrap());
}

fn quartic_basis(p: i64) -> DifferentialBasis {
    // x^4 + y^4 = 1 near (0, 1), parameter x; differentials {1, x, y} dx / y^3
    let y = QSeries::new(0, vec![q(1), q(0), q(0), q(0), q(-1)], p).nth_root(4).unwrap();
    let inv_y3 = y.pow(3).unwrap().inv().unwrap();
    let xs = QSeries::monomial(1, q(1), p + 1);
    DifferentialBasis::new(vec![inv_y3.clone(), xs.mul(&inv_y3), y.mul(&inv_y3)]).unwrap()
}

fn trigonal_basis(p: i64) -> DifferentialBasis {
    // y^3 = x^5 + 1 near (0, 1): dx/y, dx/y^2, x dx/y^2, x^2 dx/y^2
    let y = QSeries::new(0, vec![q(1), q(0), q(0), q(0), q(0), q(1)], p).nth_root(3).unwrap();
    let iy = y.inv().unwrap();
    let iy2 = iy.mul(&iy);
    let x = QSeries::monomial(1, q(1), p + 1);
    DifferentialBasis::new(vec![iy, iy2.clone(), x.mul(&iy2), x.mul(&x).mul(&iy2)]).unwrap()
}

#[test]
fn relation_spaces() {
    let hyp3 = expand_model(&model(&[1, 2, 0, -1, 0, 0, 0, 1]), &ExpansionPoint::Infinity, 20).unwrap();
    let r = find_relations(&hyp3, 2).unwrap();
    assert_eq!(r.dimension(), 1);
    let quartic = quartic_basis(20);
    assert_eq!(find_relations(&quartic, 2).unwrap().dimension(), 0);
    let r4 = find_relations(&quartic, 4).unwrap();
    assert_eq!(r4.dimension(), 1);
    let hyp4 = expand_model(&model(&[1, 0, 3, 0, -2, 0, 0, 0, 0, 1]), &ExpansionPoint::Infinity, 21).unwrap();
    assert_eq!(find_relations(&hyp4, 2).unwrap().dimension(), 3);
    let trig = trigonal_basis(21);
    assert_eq!(find_relations(&trig, 2).unwrap().dimension(), 1);
    assert!(matches!(find_relations(&trigonal_basis(12), 2), Err(Error::InsufficientPrecision { needed: 13, have: 12 })));

    // relations still vanish on longer expansions
    let long = quartic_basis(60);
    for k in 0..r4.dimension() {
        assert!(r4.evaluate(k, long.series()).is_zero());
    }
    let long = trigonal_basis(60);
    let r = find_relations(&trig, 2).unwrap();
    assert!(r.evaluate(0, long.series()).is_zero());
}

#[test]
fn general_recovery_distinguishes_cases() {
    let hyp3 = expand_model(&model(&[1, 2, 0, -1, 0, 0, 0, 1]), &ExpansionPoint::Infinity, 17).unwrap();
    assert!(matches!(recover(&hyp3).unwrap(), Recovered::Hyperelliptic(_)));
    match recover(&quartic_basis(17)).unwrap() {
        Recovered::Canonical(ideal) => {
            assert_eq!(ideal[0].dimension(), 0);
            assert_eq!(ideal[1].degree, 4);
            assert_eq!(ideal[1].dimension(), 1);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn ramified_parameter() {
    let m = model(&[1, -1, 0, 2, 0, 1]);
    let b = expand_model(&m, &ExpansionPoint::Infinity, 13).unwrap();
    assert_eq!(recover_ramified(&b, 1).unwrap(), m);
    // q' = q^2: w(q') dq' = 2q w(q^2) dq
    let lifted: Vec<QSeries> = b.series().iter().map(|s| s.substitute_power(2).shift(1).scale(&q(2))).collect();
    let lb = DifferentialBasis::new(lifted).unwrap();
    assert_eq!(recover_ramified(&lb, 2).unwrap(), m);
    assert!(matches!(recover_ramified(&lb, 3), Err(Error::NoPowerStructure(_))));
    // q' = q^2 + q^3 needs the integral route
    let p = 2 * 13 + 4;
    let b = expand_model(&m, &ExpansionPoint::Infinity, p).unwrap();
    let qp = QSeries::new(2, vec![q(1), q(1)], p + 2);
    let dqp = qp.ddq();
    let general: Vec<QSeries> = b.series().iter().map(|s| s.compose(&qp).unwrap().mul(&dqp)).collect();
    let gb = DifferentialBasis::new(general).unwrap();
    let r = recover_ramified(&gb, 2).unwrap();
    assert!(isomorphic(m.f(), r.f(), 4), "{r}");
}

#[test]
fn basis_text_round_trip() {
    let b = expand_model(&model(&[1, 0, 0, 0, 0, 1]), &ExpansionPoint::Infinity, 13).unwrap();
    assert_eq!(parse_basis(&format_basis(&b)).unwrap(), b);
    assert!(matches!(parse_basis("genus 2\nprecision 3\nw 1 : 0 : 1\n"), Err(Error::Parse { .. })));
}

#[test]
fn level_39_genus_three_curve() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let forms = ingest_fixture(dir.join("39.nfqx")).unwrap();
    let refs: Vec<_> = forms.iter().collect();
    let rb = RationalOrbitBasis::new(&refs).unwrap();
    let ws: Vec<QSeries> = rb.series_over_q().iter().map(|h| h.truncate(40).shift(-1)).collect();
    let b = DifferentialBasis::new(ws).unwrap();
    let m = recover_hyperelliptic(&b).unwrap();
    let paper = &QPoly::from_i64(&[-1, -2, -4, -3, 1]) * &QPoly::from_i64(&[3, 6, 8, 5, 1]);
    assert_eq!(m.genus(), 3);
    assert!(m.f() == &paper || isomorphic(m.f(), &paper, 4), "{m}");
}

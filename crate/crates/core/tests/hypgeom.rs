use modhyp::algebra::{q, QPoly};
use modhyp::hypgeom::{
    apply_transform, count_points, count_points_naive, is_isomorphic, normalize_transform_pair, ModelTransform,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_transform(rng: &mut ChaCha8Rng, h: i64) -> ModelTransform {
    loop {
        let m = [0; 4].map(|_| rng.gen_range(-h..=h));
        let e = rng.gen_range(1..=h) * if rng.gen_bool(0.5) { 1 } else { -1 };
        if let Ok(t) = ModelTransform::from_i64(m, e) {
            return t;
        }
    }
}

fn random_squarefree(rng: &mut ChaCha8Rng, deg: usize) -> QPoly {
    loop {
        let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-10..=10)).collect();
        c.push(rng.gen_range(1..=3));
        let f = QPoly::from_i64(&c);
        if f.is_squarefree() {
            return f;
        }
    }
}

#[test]
fn transforms_form_a_group_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let g = rng.gen_range(2..=4);
        let deg = 2 * g + 1 + rng.gen_range(0..=1);
        let f = random_squarefree(&mut rng, deg);
        let t1 = random_transform(&mut rng, 3);
        let t2 = random_transform(&mut rng, 3);
        let step = apply_transform(&apply_transform(&f, g, &t1).unwrap(), g, &t2).unwrap();
        assert_eq!(step, apply_transform(&f, g, &t2.compose(&t1)).unwrap());
        // (M, e) and (λM, eλ^{g+1}) act identically
        assert_eq!(apply_transform(&f, g, &t1).unwrap(), apply_transform(&f, g, &t1.rescale(&q(-3), g)).unwrap());
    }
}

#[test]
fn normalization_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let g = 2 * rng.gen_range(1..=3);
        let t = random_transform(&mut rng, 5);
        let n = normalize_transform_pair(&t, g).unwrap();
        assert_eq!(n.e, num_traits::pow(n.det(), g / 2));
        assert_eq!(normalize_transform_pair(&n, g).unwrap(), n);
    }
}

#[test]
fn planted_isomorphisms_are_found() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = QPoly::from_i64(&[1, -1, 0, 2, 0, 1]);
    assert_eq!(is_isomorphic(&f, &f, 2, 1).map(|t| apply_transform(&f, 2, &t).unwrap()), Some(f.clone()));
    for _ in 0..5 {
        let t = random_transform(&mut rng, 3);
        let g = apply_transform(&f, 2, &t).unwrap();
        let w = is_isomorphic(&f, &g, 2, 3).expect("planted transform");
        assert_eq!(apply_transform(&f, 2, &w).unwrap(), g);
    }
}

#[test]
fn twisted_level_128_pair_is_not_found() {
    let a = QPoly::from_i64(&[0, 16, 0, -24, 0, 1]);
    let b = QPoly::from_i64(&[0, 16, 0, 24, 0, 1]);
    assert!(is_isomorphic(&a, &b, 2, 10).is_none());
}

#[test]
fn point_counts_match_enumeration() {
    let odd_q: Vec<u64> = (3..=49u64).filter(|&n| n % 2 == 1 && modhyp::arith::factorize(n).len() == 1).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut checked = 0;
    for _ in 0..100 {
        let g = rng.gen_range(2..=4);
        let deg = 2 * g + 1 + rng.gen_range(0..=1);
        let f = random_squarefree(&mut rng, deg);
        for &qq in &odd_q {
            let Ok(n) = count_points(&f, g, qq) else { continue };
            assert_eq!(n, count_points_naive(&f, g, qq).unwrap(), "{f} over F_{qq}");
            let dev = (n as f64 - (qq as f64 + 1.0)).abs();
            assert!(dev <= 2.0 * g as f64 * (qq as f64).sqrt(), "Weil bound fails for {f} over F_{qq}");
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn sextic_over_f5() {
    let f = QPoly::from_i64(&[1, 0, 0, 0, 0, 0, 1]);
    // F(x) = x^2 + 1 on F_5: two points over x = 0, one each over x = 2, 3,
    // and two at infinity since the leading coefficient is a square
    assert_eq!(count_points(&f, 2, 5).unwrap(), 6);
    assert_eq!(count_points_naive(&f, 2, 5).unwrap(), 6);
}

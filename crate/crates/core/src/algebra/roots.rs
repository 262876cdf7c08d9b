//! Sturm sequences and certified real root isolation.

use num_traits::{One, Signed, Zero};

use super::poly::QPoly;
use super::rational::{q, Q};

/// Sturm sequence of the squarefree part of `p`, with each member scaled
/// by a positive rational to keep coefficients small.
pub fn sturm_sequence(p: &QPoly) -> Vec<QPoly> {
    let f = p.radical();
    let mut seq = vec![f.primitive_part(), f.derivative().primitive_part()];
    loop {
        let n = seq.len();
        if seq[n - 1].deg() <= 0 {
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        let c = r.content();
        seq.push((-&r).scale(&c.recip()));
    }
    seq
}

fn sign(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0;
    let mut v = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn var_at(seq: &[QPoly], x: &Q) -> usize {
    variations(seq.iter().map(|p| sign(&p.eval(x))))
}

fn var_at_pos_inf(seq: &[QPoly]) -> usize {
    variations(seq.iter().map(|p| sign(&p.lead())))
}

fn var_at_neg_inf(seq: &[QPoly]) -> usize {
    variations(seq.iter().map(|p| {
        let s = sign(&p.lead());
        if p.deg() % 2 == 1 {
            -s
        } else {
            s
        }
    }))
}

/// Number of distinct real roots of `p` in the closed interval `[a, b]`.
pub fn count_roots_in(p: &QPoly, a: &Q, b: &Q) -> usize {
    if p.deg() < 1 || a > b {
        return 0;
    }
    let seq = sturm_sequence(p);
    let at_a = usize::from(seq[0].eval(a).is_zero());
    var_at(&seq, a) - var_at(&seq, b) + at_a
}

/// Number of distinct real roots of `p` strictly greater than `a`.
pub fn count_roots_above(p: &QPoly, a: &Q) -> usize {
    if p.deg() < 1 {
        return 0;
    }
    let seq = sturm_sequence(p);
    var_at(&seq, a) - var_at_pos_inf(&seq)
}

/// Number of distinct real roots.
pub fn count_real_roots(p: &QPoly) -> usize {
    if p.deg() < 1 {
        return 0;
    }
    let seq = sturm_sequence(p);
    var_at_neg_inf(&seq) - var_at_pos_inf(&seq)
}

/// Isolating interval: either an exact rational root (`lo == hi`) or an
/// open interval `(lo, hi)` containing exactly one simple root, with the
/// polynomial nonzero at both endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isolated {
    pub lo: Q,
    pub hi: Q,
}

/// Cauchy bound: every complex root has absolute value below it.
pub(crate) fn root_bound(p: &QPoly) -> Q {
    let l = p.lead().abs();
    let m = p
        .coeffs()
        .iter()
        .take(p.coeffs().len() - 1)
        .map(|c| c.abs() / &l)
        .fold(Q::zero(), |a, b| if b > a { b } else { a });
    m + Q::one()
}

/// Isolate the distinct real roots of `p`, in increasing order.
pub fn isolate_real_roots(p: &QPoly) -> Vec<Isolated> {
    if p.deg() < 1 {
        return Vec::new();
    }
    let f = p.radical();
    let seq = sturm_sequence(&f);
    let b = root_bound(&f);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        // roots in (lo, hi]
        let n = var_at(&seq, &lo) - var_at(&seq, &hi);
        if n == 0 {
            continue;
        }
        let hi_root = f.eval(&hi).is_zero();
        if n == 1 {
            if hi_root {
                out.push(Isolated { lo: hi.clone(), hi });
            } else {
                out.push(Isolated { lo, hi });
            }
            continue;
        }
        let mid = (&lo + &hi) / q(2);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    // endpoints of open intervals must not be roots; nudge if needed
    for iv in out.iter_mut() {
        if iv.lo != iv.hi && f.eval(&iv.lo).is_zero() {
            let mut d = (&iv.hi - &iv.lo) / q(2);
            loop {
                let cand = &iv.lo + &d;
                if !f.eval(&cand).is_zero() && count_in_open(&seq, &iv.lo, &cand) == 0 {
                    iv.lo = cand;
                    break;
                }
                d /= q(2);
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

fn count_in_open(seq: &[QPoly], a: &Q, b: &Q) -> usize {
    let n = var_at(seq, a) - var_at(seq, b);
    if seq[0].eval(b).is_zero() {
        n - 1
    } else {
        n
    }
}

/// Halve an isolating interval of the squarefree polynomial `f`
/// until its width is at most `width`.
pub(crate) fn refine(f: &QPoly, iv: &Isolated, width: &Q) -> Isolated {
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    if lo == hi {
        return iv.clone();
    }
    let slo = sign(&f.eval(&lo));
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / q(2);
        let s = sign(&f.eval(&mid));
        if s == 0 {
            return Isolated { lo: mid.clone(), hi: mid };
        }
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Isolated { lo, hi }
}

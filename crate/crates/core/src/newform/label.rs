use crate::algebra::Q;
use crate::error::{Error, Result};

use super::Newform;

/// Letters for the `i`-th isogeny class: `A … Z, AA, BB, …, ZZ, AAA, …`.
pub fn letters(i: usize) -> String {
    let c = (b'A' + (i % 26) as u8) as char;
    std::iter::repeat(c).take(i / 26 + 1).collect()
}

/// Labels `N X` or `N X_{ε}` for orbits at one level, in input order.
///
/// Letters are assigned separately for each Galois orbit of characters.
/// Within one, orbits are sorted by the dictionary order of
/// `(Tr a₁, Tr a₂, …)`. Orbits with equal trace sequences share a letter
/// when they are Galois conjugate (equal characteristic polynomials of
/// every compared `a_n`); otherwise they cannot be told apart and an
/// error is returned.
pub fn label(fs: &[Newform]) -> Result<Vec<String>> {
    if fs.is_empty() {
        return Ok(Vec::new());
    }
    let level = fs[0].level();
    if fs.iter().any(|f| f.level() != level) {
        return Err(Error::Invalid("labels are assigned within a single level".into()));
    }
    let mut out = vec![String::new(); fs.len()];
    let mut done = vec![false; fs.len()];
    for i in 0..fs.len() {
        if done[i] {
            continue;
        }
        let orbit = fs[i].character().galois_orbit();
        let group: Vec<usize> = (i..fs.len()).filter(|&j| !done[j] && orbit.contains(fs[j].character())).collect();
        let forms: Vec<&Newform> = group.iter().map(|&j| &fs[j]).collect();
        for (&j, c) in group.iter().zip(classes(&forms)?) {
            done[j] = true;
            let f = &fs[j];
            out[j] = if f.character().is_trivial() {
                format!("{level}{}", letters(c))
            } else {
                format!("{level}{}_{}", letters(c), f.character())
            };
        }
    }
    Ok(out)
}

fn classes(fs: &[&Newform]) -> Result<Vec<usize>> {
    // every stored coefficient is compared
    let len = fs.iter().map(|f| f.precision()).min().unwrap();
    let traces: Vec<Vec<Q>> = fs.iter().map(|f| f.trace_sequence(len)).collect();
    let mut order: Vec<usize> = (0..fs.len()).collect();
    order.sort_by(|&i, &j| traces[i].cmp(&traces[j]));

    let mut class = vec![0usize; fs.len()];
    let mut next = 0;
    for (pos, &i) in order.iter().enumerate() {
        if pos == 0 {
            continue;
        }
        let j = order[pos - 1];
        if traces[i] == traces[j] {
            if !conjugate(fs[i], fs[j], len) {
                return Err(Error::Indistinguishable);
            }
            class[i] = class[j];
        } else {
            next += 1;
            class[i] = next;
        }
    }
    Ok(class)
}

fn conjugate(f: &Newform, g: &Newform, len: u64) -> bool {
    f.dimension() == g.dimension()
        && (1..=len).all(|n| f.field().charpoly(f.coeff(n)) == g.field().charpoly(g.coeff(n)))
}

/// `E_{label}` for an elliptic curve, `A_{label}` otherwise.
pub fn abelian_variety_name(label: &str, dimension: usize) -> String {
    if dimension == 1 {
        format!("E_{{{label}}}")
    } else {
        format!("A_{{{label}}}")
    }
}

//! The line-oriented NFQX fixture format.
//!
//! ```text
//! # comment
//! level 13
//! char 13 {2}
//! field 2 : 1 -1 1
//! zeta 6 : 0 1
//! conj : 1 -1
//! precision 39
//! eps 2 : 0 1
//! a 1 : 1 0
//! a 2 : -1 0
//! ```
//!
//! One orbit per block, blocks separated by blank lines. `zeta o` gives
//! the image of `exp(2πi/o)` for characters of order `o > 2`; `eps p`
//! lines are cross-checked against it.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::algebra::{parse_q, NumberField, QPoly, Q};
use crate::arith::primes_up_to;
use crate::dirichlet::DirichletCharacter;
use crate::error::{Error, Result};

use super::Newform;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn coords(s: &str, line: usize) -> Result<Vec<Q>> {
    s.split_whitespace()
        .map(|t| parse_q(t).map_err(|_| perr(line, format!("bad rational `{t}`"))))
        .collect()
}

/// `head : rest`, with the head split on whitespace.
fn split_colon(s: &str, line: usize) -> Result<(Vec<&str>, &str)> {
    let (h, r) = s.split_once(':').ok_or_else(|| perr(line, "expected `:`"))?;
    Ok((h.split_whitespace().collect(), r))
}

fn int(s: &str, line: usize) -> Result<u64> {
    s.parse().map_err(|_| perr(line, format!("bad integer `{s}`")))
}

#[derive(Default)]
struct Block {
    start: usize,
    level: Option<u64>,
    character: Option<DirichletCharacter>,
    field: Option<QPoly>,
    conj: Option<Vec<Q>>,
    zeta: Option<(u64, Vec<Q>)>,
    precision: Option<u64>,
    eps: BTreeMap<u64, Vec<Q>>,
    a: BTreeMap<u64, Vec<Q>>,
}

impl Block {
    fn line(&mut self, text: &str, ln: usize) -> Result<()> {
        let key = text.split_whitespace().next().unwrap();
        let rest = text[key.len()..].trim();
        match key {
            "level" => self.level = Some(int(rest, ln)?),
            "char" => {
                let c: DirichletCharacter = rest.parse().map_err(|e: Error| perr(ln, e.to_string()))?;
                self.character = Some(c);
            }
            "field" => {
                let (h, r) = split_colon(rest, ln)?;
                let d = int(h.first().ok_or_else(|| perr(ln, "missing degree"))?, ln)?;
                let c = coords(r, ln)?;
                if c.len() as u64 != d + 1 {
                    return Err(perr(ln, format!("field of degree {d} needs {} coefficients", d + 1)));
                }
                self.field = Some(QPoly::new(c));
            }
            "conj" => self.conj = Some(coords(split_colon(rest, ln)?.1, ln)?),
            "zeta" => {
                let (h, r) = split_colon(rest, ln)?;
                let o = int(h.first().ok_or_else(|| perr(ln, "missing order"))?, ln)?;
                self.zeta = Some((o, coords(r, ln)?));
            }
            "precision" => self.precision = Some(int(rest, ln)?),
            "eps" | "a" => {
                let (h, r) = split_colon(rest, ln)?;
                let n = int(h.first().ok_or_else(|| perr(ln, "missing index"))?, ln)?;
                let map = if key == "eps" { &mut self.eps } else { &mut self.a };
                if map.insert(n, coords(r, ln)?).is_some() {
                    return Err(perr(ln, format!("duplicate `{key} {n}`")));
                }
            }
            _ => return Err(perr(ln, format!("unknown keyword `{key}`"))),
        }
        Ok(())
    }

    fn finish(self) -> Result<Newform> {
        let ln = self.start;
        let character = self.character.ok_or_else(|| perr(ln, "block has no `char` line"))?;
        let level = self.level.unwrap_or(character.modulus());
        if level != character.modulus() {
            return Err(perr(ln, format!("level {level} differs from character modulus {}", character.modulus())));
        }
        let poly = self.field.ok_or_else(|| perr(ln, "block has no `field` line"))?;
        let mut field = NumberField::new(poly).map_err(|e| perr(ln, e.to_string()))?;
        if let Some(c) = self.conj {
            field = field.with_conjugation(c).map_err(|e| perr(ln, e.to_string()))?;
        }
        let precision = self.precision.ok_or_else(|| perr(ln, "block has no `precision` line"))?;
        let zeta = match self.zeta {
            Some((o, z)) => {
                if o != character.order() {
                    return Err(perr(ln, format!("zeta order {o} but character order {}", character.order())));
                }
                if z.len() != field.degree() || field.pow(&z, o as u32) != field.one() {
                    return Err(perr(ln, format!("zeta is not a root of unity of order {o}")));
                }
                Some(z)
            }
            None if character.order() > 2 && !self.eps.is_empty() => None,
            None if character.order() > 2 => return Err(perr(ln, "character of order > 2 needs `zeta` or `eps` lines")),
            None => None,
        };
        if !self.a.contains_key(&1) {
            return Err(perr(ln, "a_1 missing"));
        }
        if let Some(p) = primes_up_to(precision).into_iter().find(|p| !self.a.contains_key(p)) {
            return Err(perr(ln, format!("a_{p} missing below precision {precision}")));
        }
        let f = Newform::from_coefficients(character, field, zeta, self.eps, &self.a, precision)?;
        f.validate()?;
        Ok(f)
    }
}

/// Parse NFQX text into newform orbits, validating each one.
pub fn parse_nfqx(text: &str) -> Result<Vec<Newform>> {
    let mut blocks = Vec::new();
    let mut cur: Option<Block> = None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let t = raw.split('#').next().unwrap().trim();
        if t.is_empty() {
            // comment-only lines do not end a block
            if raw.trim().is_empty() {
                blocks.extend(cur.take());
            }
            continue;
        }
        cur.get_or_insert_with(|| Block { start: ln, ..Block::default() }).line(t, ln)?;
    }
    blocks.extend(cur);
    blocks.into_iter().map(Block::finish).collect()
}

/// Read and validate a fixture file.
pub fn ingest_fixture(path: impl AsRef<Path>) -> Result<Vec<Newform>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    parse_nfqx(&text)
}

fn join(v: &[Q]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

/// Serialize orbits as NFQX (only `a_1` and `a_p` lines are written).
pub fn write_nfqx(forms: &[Newform]) -> String {
    let mut out = String::new();
    for (i, f) in forms.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let k = f.field();
        let _ = writeln!(out, "level {}", f.level());
        let _ = writeln!(out, "char {} {}", f.level(), f.character());
        let _ = writeln!(out, "field {} : {}", k.degree(), join(k.min_poly().coeffs()));
        if let Some(z) = f.zeta() {
            let _ = writeln!(out, "zeta {} : {}", f.character().order(), join(z));
        }
        if let Some(c) = k.conjugation() {
            let _ = writeln!(out, "conj : {}", join(c));
        }
        let _ = writeln!(out, "precision {}", f.precision());
        for (p, e) in f.eps_table() {
            let _ = writeln!(out, "eps {p} : {}", join(e));
        }
        for n in std::iter::once(1).chain(primes_up_to(f.precision())) {
            let _ = writeln!(out, "a {n} : {}", join(f.coeff(n)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CURVE_11A: &str = "level 11\nchar 11 {0}\nfield 1 : 0 1\nprecision 10\n\
        a 1 : 1\na 2 : -2\na 3 : -1\na 5 : 1\na 7 : -2\n";

    #[test]
    fn round_trip() {
        let fs = parse_nfqx(CURVE_11A).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].coeff(10), &[Q::from_integer((-2).into())]);
        assert_eq!(parse_nfqx(&write_nfqx(&fs)).unwrap(), fs);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = CURVE_11A.replace("a 1 : 1", "a 1 : 2");
        assert!(matches!(parse_nfqx(&bad), Err(Error::Constraint(_))));
        let bad = CURVE_11A.replace("a 7 : -2\n", "a 7 : -2\na 6 : 3\n");
        assert_eq!(parse_nfqx(&bad), Err(Error::EulerInconsistency(6)));
        let bad = CURVE_11A.replace("a 5 : 1\n", "");
        assert!(matches!(parse_nfqx(&bad), Err(Error::Parse { line: 1, .. })));
        let bad = CURVE_11A.replace("precision", "precisoin");
        assert!(matches!(parse_nfqx(&bad), Err(Error::Parse { line: 4, .. })));
        // |a_7| > 2√7
        let bad = CURVE_11A.replace("a 7 : -2", "a 7 : 6");
        assert!(matches!(parse_nfqx(&bad), Err(Error::Constraint(_))));
    }
}

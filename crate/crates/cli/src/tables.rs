//! Expected curves from the appendix tables, transcribed as printed.
//!
//! Each row carries the curve label in the crate's labeling convention
//! and the right-hand side `F(x)` in the notation of the paper, e.g.
//! `x(x^2 - 4 x + 2)(x^2 - 2)`. Levels and genera are derived from the
//! label and the degree of `F`.

use std::fmt;

use anyhow::{anyhow, bail, Context, Result};
use modhyp::algebra::{q, QPoly};

/// Which table a row comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TableId {
    Appendix(u8),
    /// The fibre products at level 376.
    Products,
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableId::Appendix(n) => write!(f, "T{n}"),
            TableId::Products => f.write_str("P"),
        }
    }
}

impl std::str::FromStr for TableId {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches(['T', 't']);
        if t.eq_ignore_ascii_case("p") || t.eq_ignore_ascii_case("products") {
            return Ok(TableId::Products);
        }
        match t.parse::<u8>() {
            Ok(n) if (1..=10).contains(&n) => Ok(TableId::Appendix(n)),
            _ => bail!("unknown table `{s}` (expected 1..10 or P)"),
        }
    }
}

/// How the curve of a row arises from newform orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    /// The span of the listed orbits.
    Orbits(Vec<String>),
    /// `y² = F₁F₂` from two curves sharing `x`.
    Product(Vec<String>, Vec<String>),
}

#[derive(Clone, Debug)]
pub struct ExpectedRow {
    pub label: String,
    pub f: QPoly,
    pub level: u64,
    pub genus: usize,
    pub construction: Construction,
}

#[derive(Clone, Debug)]
pub struct TableExpectation {
    pub id: TableId,
    pub rows: Vec<ExpectedRow>,
}

const APPENDIX: &[(u8, &str, &str)] = &[
    (1, "C_{26}^{A,B}", "x^6 + 4 x^5 - 12 x^4 - 114 x^3 - 308 x^2 - 384 x - 191"),
    (1, "C_{37}^{A,B}", "x^6 - 4 x^5 - 40 x^4 + 348 x^3 - 1072 x^2 + 1532 x - 860"),
    (1, "C_{50}^{A,B}", "x^6 + 2 x^5 - 5 x^4 - 30 x^3 - 55 x^2 - 48 x - 16"),
    (1, "C_{54}^{A,B}", "x^6 - 34 x^3 + 1"),
    (1, "C_{56}^{A,B}", "x^5 + 6 x^4 - 45 x^3 - 490 x^2 - 1503 x - 1564"),
    (1, "C_{58}^{A,B}", "x^6 - 2 x^5 + 11 x^4 - 22 x^3 + 21 x^2 - 12 x + 4"),
    (1, "C_{66}^{A,B}", "x^6 + 2 x^5 - 5 x^4 - 22 x^3 - 31 x^2 - 24 x - 8"),
    (1, "C_{80}^{A,B}", "x^5 + 2 x^4 - 26 x^3 - 132 x^2 - 231 x - 142"),
    (1, "C_{84}^{A,B}", "x^5 + 4 x^4 - 25 x^3 - 172 x^2 - 339 x - 222"),
    (1, "C_{90}^{A,B}", "x^6 - 18 x^3 + 1"),
    (1, "C_{91}^{A,B}", "x^6 + 2 x^5 - x^4 - 8 x^3 - x^2 + 2 x + 1"),
    (1, "C_{96}^{A,B}", "x^5 - 34 x^3 + x"),
    (1, "C_{112}^{A,C}", "x^5 - 2 x^4 + 10 x^3 - 16 x^2 + 21 x - 14"),
    (1, "C_{112}^{A,B}", "x^5 - 6 x^4 - 45 x^3 + 490 x^2 - 1503 x + 1564"),
    (1, "C_{128}^{B,D}", "x^5 - 24 x^3 + 16 x"),
    (1, "C_{128}^{A,C}", "x^5 + 24 x^3 + 16 x"),
    (1, "C_{138}^{A,C}", "x^6 + 8 x^4 + 6 x^3 + 8 x^2 + 1"),
    (1, "C_{142}^{B,D}", "x^6 - 2 x^5 - 5 x^4 + 18 x^3 - 19 x^2 + 12 x - 4"),
    (1, "C_{160}^{A,B}", "x^5 + 12 x^3 + 16 x"),
    (1, "C_{162}^{A,D}", "x^6 + 14 x^3 + 1"),
    (1, "C_{162}^{B,C}", "x^6 - 10 x^3 + 1"),
    (1, "C_{184}^{C,D}", "x^5 - 10 x^3 - 15 x^2 - 9 x - 7"),
    (1, "C_{189}^{A,C}", "x^6 - 12 x^4 + 36 x^3 - 48 x^2 + 36 x - 12"),
    (1, "C_{189}^{A,B}", "x^6 - 12 x^4 + 12 x^3 + 24 x^2 - 36 x + 12"),
    (1, "C_{192}^{C,D}", "x^5 - 14 x^3 + x"),
    (1, "C_{192}^{B,D}", "x^5 + 4 x^4 - 6 x^3 - 58 x^2 - 111 x - 70"),
    (1, "C_{192}^{A,C}", "x^5 - 4 x^4 - 6 x^3 + 58 x^2 - 111 x + 70"),
    (1, "C_{192}^{A,B}", "x^5 + 34 x^3 + x"),
    (1, "C_{200}^{C,E}", "x^5 - 10 x^3 - 15 x^2 + 8"),
    (1, "C_{240}^{C,D}", "x^5 - 2 x^4 + 6 x^3 - 13 x^2 + 12 x - 4"),
    (1, "C_{256}^{A,D}", "x^5 + 16 x"),
    (1, "C_{264}^{A,B}", "x^5 + 2 x^4 - 6 x^3 - 23 x^2 - 24 x - 8"),
    (1, "C_{312}^{B,C}", "x^5 - 2 x^4 - x^3 + 8 x^2 - 9 x + 3"),
    (1, "C_{320}^{A,C}", "x^5 - 2 x^4 - 2 x^3 - 2 x^2 + x"),
    (1, "C_{320}^{D,E}", "x^5 - 12 x^3 + 16 x"),
    (1, "C_{320}^{B,F}", "x^5 + 2 x^4 - 2 x^3 + 2 x^2 + x"),
    (1, "C_{336}^{A,F}", "x^5 - 4 x^4 - 25 x^3 + 172 x^2 - 339 x + 222"),
    (1, "C_{368}^{A,G}", "x^5 - 10 x^3 + 15 x^2 - 9 x + 7"),
    (1, "C_{384}^{A,D}", "x^5 + 10 x^3 + x"),
    (1, "C_{384}^{B,C}", "x^5 - 10 x^3 + x"),
    (1, "C_{400}^{B,E}", "x^5 - 25 x^2 + 20 x - 4"),
    (1, "C_{400}^{A,H}", "x^5 - 10 x^3 + 15 x^2 - 8"),
    (1, "C_{405}^{A,F}", "x^6 - 12 x^4 + 28 x^3 - 24 x^2 + 12 x - 4"),
    (1, "C_{405}^{B,F}", "x^6 - 12 x^4 + 20 x^3 - 12 x + 4"),
    (1, "C_{448}^{A,D}", "x^5 - 2 x^4 + 10 x^3 - 2 x^2 + x"),
    (1, "C_{448}^{B,G}", "x^5 + 2 x^4 + 10 x^3 + 2 x^2 + x"),
    (1, "C_{480}^{B,C}", "x^5 + 2 x^4 - 4 x^3 - 17 x^2 - 18 x - 6"),
    (1, "C_{480}^{B,G}", "x^5 - 7 x^3 + x"),
    (1, "C_{480}^{A,G}", "x^5 - 2 x^4 - 4 x^3 + 17 x^2 - 18 x + 6"),
    (1, "C_{528}^{A,D}", "x^5 - 2 x^4 - 6 x^3 + 23 x^2 - 24 x + 8"),
    (1, "C_{544}^{B,C}", "x^5 - 9 x^3 + 16 x"),
    (1, "C_{624}^{C,D}", "x^5 + 2 x^4 - x^3 - 8 x^2 - 9 x - 3"),
    (1, "C_{672}^{A,G}", "x^5 + 5 x^3 + x"),
    (1, "C_{760}^{A,E}", "x^5 + 3 x^3 + 14 x^2 + 15 x + 5"),
    (1, "C_{768}^{D,F}", "x^5 - 4 x^3 + x"),
    (1, "C_{768}^{B,H}", "x^5 + 4 x^3 + x"),
    (1, "C_{960}^{A,F}", "x^5 + 7 x^3 + x"),
    (1, "C_{1088}^{L,N}", "x^5 + 9 x^3 + 16 x"),
    (1, "C_{1344}^{C,F}", "x^5 - 5 x^3 + x"),
    (1, "C_{1520}^{B,D}", "x^5 + 3 x^3 - 14 x^2 + 15 x - 5"),
    (1, "C_{1664}^{F,G}", "x^5 - 2 x^4 + x^3 + 2 x - 4"),
    (1, "C_{1664}^{O,S}", "x^5 + 2 x^4 + x^3 + 2 x + 4"),
    (1, "C_{2208}^{A,E}", "x^5 + 2 x^4 + 8 x^3 + 19 x^2 + 18 x + 6"),
    (1, "C_{2208}^{G,I}", "x^5 - 2 x^4 + 8 x^3 - 19 x^2 + 18 x - 6"),
    (2, "C_{41}^{A}", "x^8 + 4 x^7 - 8 x^6 - 66 x^5 - 120 x^4 - 56 x^3 + 53 x^2 + 36 x - 16"),
    (2, "C_{95}^{A}", "(x^4 + x^3 - 6 x^2 - 10 x - 5)(x^4 + x^3 - 2 x^2 + 2 x - 1)"),
    (2, "C_{152}^{C}", "x(x^3 - 2 x^2 - 7 x - 8)(x^3 + 4 x^2 + 4 x + 4)"),
    (2, "C_{248}^{E}", "(x^3 + x - 1)(x^4 - 2 x^3 - 3 x^2 - 4 x + 4)"),
    (2, "C_{284}^{A}", "x^7 + 4 x^6 + 5 x^5 + x^4 - 3 x^3 - 2 x^2 + 1"),
    (2, "C_{284}^{B}", "x^7 - 7 x^5 - 11 x^4 + 5 x^3 + 18 x^2 + 4 x - 11"),
    (2, "C_{304}^{G}", "x(x^3 - 4 x^2 + 4 x - 4)(x^3 + 2 x^2 - 7 x + 8)"),
    (2, "C_{496}^{J}", "(x^3 + x + 1)(x^4 + 2 x^3 - 3 x^2 + 4 x + 4)"),
    (2, "C_{544}^{I}", "(x+1)(x^2 + x - 4)(x^4 - x^2 - 4)"),
    (2, "C_{544}^{J}", "(x-1)(x^2 - x - 4)(x^4 - x^2 - 4)"),
    (2, "C_{896}^{I}", "(x - 2)(x^2 + 2 x - 1)(x^4 - 2 x^2 - 7)"),
    (2, "C_{896}^{K}", "(x + 2)(x^2 - 2 x - 1)(x^4 - 2 x^2 - 7)"),
    (2, "C_{1136}^{G}", "x^7 - 7 x^5 + 11 x^4 + 5 x^3 - 18 x^2 + 4 x + 11"),
    (2, "C_{1136}^{J}", "x^7 - 4 x^6 + 5 x^5 - x^4 - 3 x^3 + 2 x^2 - 1"),
    (3, "C_{47}^{A}", "(x^5 - 5 x^3 - 20 x^2 - 24 x - 19)(x^5 + 4 x^4 + 7 x^3 + 8 x^2 + 4 x + 1)"),
    (3, "C_{119}^{A}", "(x^5 - 2 x^4 + 3 x^3 - 6 x^2 - 7)(x^5 + 2 x^4 + 3 x^3 + 6 x^2 + 4 x + 1)"),
    (3, "C_{164}^{A}", "x(x^8 + 4 x^7 - 8 x^6 - 66 x^5 - 120 x^4 - 56 x^3 + 53 x^2 + 36 x - 16)"),
    (3, "C_{376}^{C}", "(x^4 - 2 x^3 - 3 x^2 + 4 x - 4)(x^5 + 4 x^4 + 3 x^3 - 2 x^2 + 2 x + 5)"),
    (3, "C_{376}^{D}", "(x^4 - 2 x^3 - 3 x^2 + 4 x - 4)(x^5 - x^3 + 2 x^2 - 2 x + 1)"),
    (3, "C_{416}^{F}", "x(x^2 + 4)(x^3 - 2 x^2 + x - 4)(x^3 + 2 x^2 + x + 4)"),
    (3, "C_{512}^{G}", "x(x^4 - 4 x^2 - 4)(x^4 + 4 x^2 - 4)"),
    (3, "C_{656}^{I}", "x(x^8 - 4 x^7 - 8 x^6 + 66 x^5 - 120 x^4 + 56 x^3 + 53 x^2 - 36 x - 16)"),
    (3, "C_{752}^{G}", "(x^4 + 2 x^3 - 3 x^2 - 4 x - 4)(x^5 - x^3 - 2 x^2 - 2 x - 1)"),
    (3, "C_{752}^{I}", "(x^4 + 2 x^3 - 3 x^2 - 4 x - 4)(x^5 - 4 x^4 + 3 x^3 + 2 x^2 + 2 x - 5)"),
    (3, "C_{832}^{P}", "x(x+2)(x-2)(x^6 + 2 x^4 - 15 x^2 + 16)"),
    (3, "C_{1216}^{W}", "(x^3 - 2 x + 2)(x^6 + 2 x^4 - 7 x^2 + 8)"),
    (3, "C_{1216}^{X}", "(x^3 - 2 x - 2)(x^6 + 2 x^4 - 7 x^2 + 8)"),
    (4, "C_{59}^{A}", "(x^9+ 2 x^8- 4 x^7- 21 x^6 - 44 x^5 -60 x^4- 61 x^3-46 x^2-24 x-11)(x^3+2 x^2+1)"),
    (4, "C_{1664}^{Y}", "(x^2 + 2 x + 2)(x^3 - x + 2)(x^6 + 2 x^4 + x^2 + 4)"),
    (4, "C_{1664}^{AA}", "(x^2 - 2 x + 2)(x^3 - x - 2)(x^6 + 2 x^4 + x^2 + 4)"),
    (5, "C_{35}^{A,B}", "(x^2 + 3 x + 1)(x^6 + x^5 - 10 x^4 - 39 x^3 - 62 x^2 - 51 x - 19)"),
    (5, "C_{39}^{A,B}", "(x^4 - 3 x^3 - 4 x^2 - 2 x - 1)(x^4 + 5 x^3 + 8 x^2 + 6 x + 3)"),
    (5, "C_{88}^{A,B}", "(x - 2)(x^3 - 2 x^2 + 4 x - 4)(x^3 + 2 x^2 - 4 x + 8)"),
    (5, "C_{104}^{A,B}", "(x + 2)(x^6 + 4 x^5 - 12 x^4 - 114 x^3 - 308 x^2 - 384 x - 191)"),
    (5, "C_{116}^{A,B,C}", "(x + 2)(x^6 + 2 x^5 - 17 x^4 - 66 x^3 - 83 x^2 - 32 x - 4)"),
    (5, "C_{128}^{A,B,D}", "(x - 2)(x^2 - 2 x + 2)(x^4 - 12 x^2 + 32 x - 28)"),
    (5, "C_{128}^{B,C,D}", "(x + 2)(x^2 + 2 x + 2)(x^4 - 12 x^2 - 32 x - 28)"),
    (5, "C_{160}^{A,C}", "(x - 2)(x^2 + 2 x - 7)(x^4 - 4 x^3 + 10 x^2 - 20 x + 17)"),
    (5, "C_{160}^{B,C}", "(x + 2)(x^2 - 2 x - 7)(x^4 + 4 x^3 + 10 x^2 + 20 x + 17)"),
    (5, "C_{176}^{A,D}", "(x + 2)(x^3 - 2 x^2 - 4 x - 8)(x^3 + 2 x^2 + 4 x + 4)"),
    (5, "C_{184}^{B,E}", "(x - 1)(x^3 - 2 x^2 + 3 x - 1)(x^3 + x^2 - x + 7)"),
    (5, "C_{184}^{A,C,D}", "(x - 1)(x^6 - x^5 + 4 x^4 - x^3 + 2 x^2 + 2 x + 1)"),
    (5, "C_{196}^{B,C}", "(x^3 + 2 x^2 - x - 1)(x^4 - 2 x^3 - 9 x^2 + 10 x - 3)"),
    (5, "C_{208}^{B,E}", "(x - 2)(x^6 - 4 x^5 - 12 x^4 + 114 x^3 - 308 x^2 + 384 x - 191)"),
    (5, "C_{224}^{A,D}", "x(x - 1)(x + 1)(x^4 - 6 x^2 + 16 x - 7)"),
    (5, "C_{224}^{B,C}", "x(x - 1)(x + 1)(x^4 - 6 x^2 - 16 x - 7)"),
    (5, "C_{248}^{B,D}", "(x^3 + 4 x^2 + 5 x + 3)(x^4 - 2 x^3 - 3 x^2 - 4 x + 4)"),
    (5, "C_{256}^{B,E}", "x(x^2 + 2)(x^4 + 12 x^2 + 4)"),
    (5, "C_{256}^{C,E}", "x(x^2 - 4 x + 2)(x^2 - 2)(x^2 + 4 x + 2)"),
    (5, "C_{280}^{A,D}", "(x - 1)(x^6 - x^5 + 7 x^3 - 16 x^2 + 15 x - 5)"),
    (5, "C_{368}^{C,I}", "(x + 1)(x^3 - x^2 - x - 7)(x^3 + 2 x^2 + 3 x + 1)"),
    (5, "C_{368}^{A,D,G}", "(x + 1)(x^6 + x^5 + 4 x^4 + x^3 + 2 x^2 - 2 x + 1)"),
    (5, "C_{416}^{A,E}", "x(x^6 - 2 x^5 - 2 x^4 + 2 x^2 - 2 x - 1)"),
    (5, "C_{416}^{B,C}", "x(x^6 + 2 x^5 - 2 x^4 + 2 x^2 + 2 x - 1)"),
    (5, "C_{464}^{D,E,F}", "(x - 2)(x^6 - 2 x^5 - 17 x^4 + 66 x^3 - 83 x^2 + 32 x - 4)"),
    (5, "C_{496}^{C,G}", "(x^3 - 4 x^2 + 5 x - 3)(x^4 + 2 x^3 - 3 x^2 + 4 x + 4)"),
    (5, "C_{560}^{A,G}", "(x + 1)(x^6 + x^5 - 7 x^3 - 16 x^2 - 15 x - 5)"),
    (5, "C_{640}^{C,K}", "x(x^2 - 2 x - 1)(x^4 + 2 x^3 - 2 x + 1)"),
    (5, "C_{640}^{G,I}", "x(x^2 + 2 x - 1)(x^4 - 2 x^3 + 2 x + 1)"),
    (5, "C_{704}^{B,N}", "x(x^3 - 4 x + 4)(x^3 + 2 x^2 - 2)"),
    (5, "C_{704}^{C,O}", "x(x^3 - 2 x^2 + 2)(x^3 - 4 x - 4)"),
    (5, "C_{784}^{G,M}", "(x^3 - 2 x^2 - x + 1)(x^4 + 2 x^3 - 9 x^2 - 10 x - 3)"),
    (6, "C_{224}^{C,D}", "x(x^4-2 x^3-5 x^2-2 x+1)(x^4 + 2 x^3 - 5 x^2 + 2 x + 1)"),
    (6, "C_{236}^{B,C}", "x^9 + 2 x^8 - 4 x^7 - 21 x^6 - 44 x^5 - 60 x^4 - 61 x^3 - 46 x^2 - 24 x - 11"),
    (6, "C_{368}^{B,F,H}", "(x^3 - x^2 - x - 7)(x^6 + x^5 + 4 x^4 + x^3 + 2 x^2 - 2 x + 1)"),
    (6, "C_{448}^{I,J}", "x(x^8 + 14 x^6 + 19 x^4 + 14 x^2 +1)"),
    (6, "C_{704}^{D,E,M}", "(x^3 - 4 x - 4)(x^3 - 4 x + 4)(x^3 + 2 x^2 - 2)"),
    (6, "C_{704}^{F,I,P}", "(x^3 - 2 x^2 + 2)(x^3 - 4 x - 4)(x^3 - 4 x + 4)"),
    (6, "C_{944}^{J,L}", "x^9 - 2 x^8 - 4 x^7 + 21 x^6 - 44 x^5 + 60 x^4 - 61 x^3 + 46 x^2 - 24 x + 11"),
    (7, "C_{71}^{A,B}", "(x^7 - 7 x^5 - 11 x^4 + 5 x^3 + 18 x^2 + 4 x - 11)(x^7 + 4 x^6 + 5 x^5 + x^4 - 3 x^3 - 2 x^2 + 1)"),
    (8, "C_{21A_{0,2}}^{A}", "(x^2-x+1)(x^6+ x^5-6 x^4-3 x^3+14 x^2-7 x+1)"),
    (8, "C_{36A_{0,2}}^{A}", "(x+1)(x+2)(x^2+3 x+3)(x^3-9 x-9)"),
    (8, "C_{72A_{{0,0},2}}^{A}", "x(x+1)(x^2+x+1)(x^3-3 x-1)"),
    (8, "C_{144A_{{0,0},2}}^{A}", "(x-2)(x-1)(x^2-3 x+3)(x^3-9 x+9)"),
    (8, "C_{144B_{{0,0},2}}^{B}", "(x-1)x(x^2-x+1)(x^3-3 x+1)"),
    (9, "C_{40A_{{0,0},2}}^{A}", "x(x + 1)(x + 2)(x^2 - 2 x - 4)(x^2 + 3 x + 1)"),
    (9, "C_{48A_{{1,0},1}}^{A}", "(x + 1)(x^2 - 2 x - 2)(x^2 + x + 1)(x^2 + 2 x + 2)"),
    (9, "C_{64A_{{0,8}}}^{A}", "x(x-1)(x+1)(x^2-2 x-1)(x^2+2 x-1)"),
    (9, "C_{80A_{{0,0},2}}^{A}", "x(x-1)(x - 2)(x^2 - 3 x + 1)(x^2 + 2 x - 4)"),
    (9, "C_{80A_{{0,0},2}}^{B}", "(x+1)(x^2-x-1)(x^4+4 x^2+8 x+4)"),
    (9, "C_{128A_{{0,16}}}^{B}", "(x - 2)(x^2 - 2 x - 1)(x^4 - 6 x^2 - 16 x + 41)"),
    (9, "C_{128A_{{0,16}}}^{D}", "(x + 2)(x^2 + 2 x - 1)(x^4 - 6 x^2 + 16 x + 41)"),
    (10, "C_{52A,B_{0,4}}^{A}", "x(x+1)(x^3-x^2-4 x-1)(x^6+4 x^5+6 x^4+2 x^3+x^2+2 x+ 1)"),
    (10, "C_{160A,E_{{1,0},1}}", "(x-1)(x^2-2 x +2)(x^2-x-1)(x^4-8 x+8)"),
    (10, "C_{160B,F_{{1,0},1}}", "(x+1)(x^2+2 x +2)(x^2+x-1)(x^4+8 x+8)"),
    (10, "C_{208A,D_{{0,0},4}}^{C}", "x(x-1)(x^3+x^2-4 x+1)(x^6-4 x^5+6 x^4-2 x^3+x^2-2 x+ 1)"),
    (10, "C_{512D_{{0,64}}}", "x(x^8+24 x^4+16)"),
];

const PRODUCTS: &[(&str, &str, &str, &str)] = &[
    (
        "C_{376}^{2,2}",
        "(x^5 - x^3 + 2 x^2 - 2 x + 1)(x^5 + 4 x^4 + 3 x^3 - 2 x^2 + 2 x + 5)",
        "376A",
        "376B",
    ),
    (
        "C_{376}^{2,4}",
        "(x^5 - x^3 + 2 x^2 - 2 x + 1)(x^5 + 4 x^4 + 3 x^3 - 2 x^2 + 2 x + 5)(x^4 - 2 x^3 - 3 x^2 + 4 x - 4)",
        "376B",
        "376D",
    ),
];

/// All tables, in order, with the products last.
pub fn all_tables() -> Result<Vec<TableExpectation>> {
    let mut out: Vec<TableExpectation> = (1..=10).map(|n| TableExpectation { id: TableId::Appendix(n), rows: Vec::new() }).collect();
    for &(t, label, f) in APPENDIX {
        let (level, orbits) = orbits_of_label(label)?;
        let row = expected_row(label, f, level, Construction::Orbits(orbits))?;
        out[t as usize - 1].rows.push(row);
    }
    let mut products = TableExpectation { id: TableId::Products, rows: Vec::new() };
    for &(label, f, a, b) in PRODUCTS {
        let (level, _) = orbits_of_label(label)?;
        let c = Construction::Product(vec![a.to_string()], vec![b.to_string()]);
        products.rows.push(expected_row(label, f, level, c)?);
    }
    out.push(products);
    Ok(out)
}

fn expected_row(label: &str, f: &str, level: u64, construction: Construction) -> Result<ExpectedRow> {
    let f = parse_paper_poly(f).with_context(|| format!("row {label}"))?;
    let d = f.degree().unwrap_or(0);
    if d < 5 || !f.is_squarefree() {
        bail!("row {label}: F is not squarefree of degree at least 5");
    }
    Ok(ExpectedRow { label: label.to_string(), genus: (d - 1) / 2, f, level, construction })
}

/// Level and orbit names of a curve label.
///
/// Superscript letters name trivial-character orbits; the subscript may
/// add orbits with a character, written `NX,Y_{χ}` for the orbits `NX_{χ}`
/// and `NY_{χ}`. Fibre product labels such as `C_{376}^{2,2}` have no
/// orbit letters.
pub fn orbits_of_label(label: &str) -> Result<(u64, Vec<String>)> {
    let bad = || anyhow!("malformed curve label `{label}`");
    let rest = label.strip_prefix("C_{").ok_or_else(bad)?;
    let close = matching_brace(rest).ok_or_else(bad)?;
    let (sub, after) = (&rest[..close], &rest[close + 1..]);
    let digits: String = sub.chars().take_while(char::is_ascii_digit).collect();
    let level: u64 = digits.parse().map_err(|_| bad())?;
    let mut orbits = Vec::new();
    if let Some(sup) = after.strip_prefix("^{").and_then(|s| s.strip_suffix('}')) {
        for l in sup.split(',') {
            if l.chars().all(|c| c.is_ascii_uppercase()) {
                orbits.push(format!("{level}{l}"));
            }
        }
    } else if !after.is_empty() {
        return Err(bad());
    }
    let tail = &sub[digits.len()..];
    if !tail.is_empty() {
        let (letters, ch) = tail.split_once("_{").ok_or_else(bad)?;
        let ch = ch.strip_suffix('}').ok_or_else(bad)?;
        for l in letters.split(',') {
            orbits.push(format!("{level}{l}_{{{ch}}}"));
        }
    }
    Ok((level, orbits))
}

fn matching_brace(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '{' => depth += 1,
            '}' if depth == 0 => return Some(i),
            '}' => depth -= 1,
            _ => {}
        }
    }
    None
}

/// Parse a polynomial in `x` written with integer coefficients, powers
/// `^k`, parentheses and implicit multiplication.
pub fn parse_paper_poly(s: &str) -> Result<QPoly> {
    let tokens: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { t: &tokens, i: 0, src: s };
    let f = p.expr()?;
    if p.i != tokens.len() {
        bail!("unexpected `{}` in `{s}`", tokens[p.i]);
    }
    Ok(f)
}

struct Parser<'a> {
    t: &'a [char],
    i: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.t.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<QPoly> {
        let mut acc = QPoly::zero();
        let mut sign = match self.peek() {
            Some('-') => {
                self.i += 1;
                -1
            }
            Some('+') => {
                self.i += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                _ => return Ok(acc),
            }
            self.i += 1;
        }
    }

    fn term(&mut self) -> Result<QPoly> {
        let mut acc = self.power()?;
        while matches!(self.peek(), Some(c) if c == 'x' || c == '(' || c.is_ascii_digit()) {
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<QPoly> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.i += 1;
        let k = self.integer()?;
        Ok(base.pow(usize::try_from(k)?))
    }

    fn atom(&mut self) -> Result<QPoly> {
        match self.peek() {
            Some('x') => {
                self.i += 1;
                Ok(QPoly::x())
            }
            Some('(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    bail!("unbalanced parentheses in `{}`", self.src);
                }
                self.i += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(QPoly::constant(q(self.integer()?))),
            other => bail!("unexpected {:?} in `{}`", other, self.src),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.i;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.i += 1;
        }
        let s: String = self.t[start..self.i].iter().collect();
        s.parse().map_err(|_| anyhow!("expected an integer in `{}`", self.src))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_paper_notation() {
        let f = parse_paper_poly("x(x+1)(x^2 - x - 1)").unwrap();
        assert_eq!(f, QPoly::from_i64(&[0, -1, -2, 0, 1]));
        let g = parse_paper_poly("x^6 + 4 x^5 - 12 x^4 - 191").unwrap();
        assert_eq!(g, QPoly::from_i64(&[-191, 0, 0, 0, -12, 4, 1]));
        assert_eq!(parse_paper_poly("-x^2+2 x").unwrap(), QPoly::from_i64(&[0, 2, -1]));
        assert!(parse_paper_poly("(x+1").is_err());
        assert!(parse_paper_poly("x + y").is_err());
    }

    #[test]
    fn label_orbits() {
        assert_eq!(orbits_of_label("C_{39}^{A,B}").unwrap(), (39, vec!["39A".into(), "39B".into()]));
        assert_eq!(orbits_of_label("C_{21A_{0,2}}^{A}").unwrap(), (21, vec!["21A".into(), "21A_{0,2}".into()]));
        assert_eq!(
            orbits_of_label("C_{52A,B_{0,4}}^{A}").unwrap().1,
            vec!["52A", "52A_{0,4}", "52B_{0,4}"]
        );
        assert_eq!(
            orbits_of_label("C_{160A,E_{{1,0},1}}").unwrap().1,
            vec!["160A_{{1,0},1}", "160E_{{1,0},1}"]
        );
        assert_eq!(orbits_of_label("C_{376}^{2,4}").unwrap(), (376, vec![]));
        assert!(orbits_of_label("X_{3}").is_err());
    }

    #[test]
    fn every_row_is_admissible() {
        let tables = all_tables().unwrap();
        let sizes: Vec<usize> = tables.iter().map(|t| t.rows.len()).collect();
        assert_eq!(sizes, vec![64, 14, 13, 3, 32, 7, 1, 5, 7, 5, 2]);
        let c41 = &tables[1].rows[0];
        assert_eq!((c41.level, c41.genus), (41, 3));
        assert_eq!(tables[10].rows[1].genus, 6);
    }
}

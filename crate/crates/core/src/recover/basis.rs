use std::fmt::Write as _;

use num_traits::Zero;

use crate::algebra::{parse_q, rref, Matrix, QSeries, Q};
use crate::error::{Error, Result};

/// The series `w_1, …, w_g` of a basis `w_i dq` of regular differentials,
/// all known modulo `q^P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialBasis {
    series: Vec<QSeries>,
    precision: i64,
}

impl DifferentialBasis {
    /// Truncates every series to the smallest precision among them and
    /// checks that they are independent at that precision.
    pub fn new(series: Vec<QSeries>) -> Result<Self> {
        let g = series.len();
        if g < 2 {
            return Err(Error::GenusTooSmall);
        }
        let precision = series.iter().map(|s| s.prec()).min().unwrap();
        if let Some(s) = series.iter().find(|s| s.val_or_prec() < 0) {
            return Err(Error::Invalid(format!("series with a pole: {s}")));
        }
        let series: Vec<QSeries> = series.iter().map(|s| s.truncate(precision)).collect();
        let b = DifferentialBasis { series, precision };
        let rank = b.coefficient_matrix().rank();
        if rank < g {
            return Err(Error::RankDeficient { rank, expected: g });
        }
        Ok(b)
    }

    pub fn genus(&self) -> usize {
        self.series.len()
    }

    pub fn series(&self) -> &[QSeries] {
        &self.series
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// The `g × P` matrix of coefficients of `q⁰ … q^{P−1}`.
    pub fn coefficient_matrix(&self) -> Matrix {
        Matrix::from_rows(self.series.iter().map(|s| s.window(0, self.precision)).collect())
    }

    /// Reduced row echelon form: strictly increasing valuations, leading
    /// coefficients 1 and zeros above every pivot. Returns the valuation
    /// profile alongside.
    pub fn normalize(&self) -> Result<(DifferentialBasis, Vec<i64>)> {
        let r = rref(&self.coefficient_matrix());
        let g = self.genus();
        if r.rank < g {
            return Err(Error::RankDeficient { rank: r.rank, expected: g });
        }
        let series = (0..g)
            .map(|i| QSeries::new(0, r.matrix.row(i).to_vec(), self.precision))
            .collect();
        let profile = r.pivots.iter().map(|&c| c as i64).collect();
        Ok((DifferentialBasis { series, precision: self.precision }, profile))
    }

    /// `M · (w_1, …, w_g)ᵀ` for a `g × g` rational matrix.
    pub fn transform(&self, m: &Matrix) -> Result<DifferentialBasis> {
        let g = self.genus();
        assert_eq!((m.rows, m.cols), (g, g));
        let series = (0..g)
            .map(|i| {
                (0..g).fold(QSeries::zero(self.precision), |acc, j| {
                    let c = &m[(i, j)];
                    if c.is_zero() {
                        acc
                    } else {
                        acc.add(&self.series[j].scale(c))
                    }
                })
            })
            .collect();
        DifferentialBasis::new(series)
    }

    pub fn truncate(&self, p: i64) -> Result<DifferentialBasis> {
        DifferentialBasis::new(self.series.iter().map(|s| s.truncate(p)).collect())
    }
}

/// Parse the text form
///
/// ```text
/// genus 2
/// precision 13
/// w 1 : 0 : 1 0 -1/2
/// w 2 : 2 : 1 0 3
/// ```
///
/// where `w i : v : c_v c_{v+1} …` lists coefficients from `q^v` on.
pub fn parse_basis(text: &str) -> Result<DifferentialBasis> {
    let mut genus = None;
    let mut prec = None;
    let mut rows: Vec<(usize, i64, Vec<Q>, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let perr = |msg: String| Error::Parse { line: ln, msg };
        let t = raw.split('#').next().unwrap().trim();
        if t.is_empty() {
            continue;
        }
        let mut parts = t.splitn(2, char::is_whitespace);
        let key = parts.next().unwrap();
        let rest = parts.next().unwrap_or("").trim();
        match key {
            "genus" => genus = Some(rest.parse::<usize>().map_err(|_| perr(format!("bad genus `{rest}`")))?),
            "precision" => prec = Some(rest.parse::<i64>().map_err(|_| perr(format!("bad precision `{rest}`")))?),
            "w" => {
                let f: Vec<&str> = rest.split(':').map(str::trim).collect();
                if f.len() != 3 {
                    return Err(perr("expected `w i : v : coefficients`".into()));
                }
                let idx = f[0].parse::<usize>().map_err(|_| perr(format!("bad index `{}`", f[0])))?;
                let v = f[1].parse::<i64>().map_err(|_| perr(format!("bad valuation `{}`", f[1])))?;
                let cs = f[2].split_whitespace().map(parse_q).collect::<Result<Vec<Q>>>().map_err(|e| perr(e.to_string()))?;
                rows.push((idx, v, cs, ln));
            }
            _ => return Err(perr(format!("unknown keyword `{key}`"))),
        }
    }
    let g = genus.ok_or(Error::Parse { line: 0, msg: "missing `genus`".into() })?;
    let p = prec.ok_or(Error::Parse { line: 0, msg: "missing `precision`".into() })?;
    rows.sort_by_key(|r| r.0);
    if rows.len() != g || rows.iter().enumerate().any(|(i, r)| r.0 != i + 1) {
        return Err(Error::Parse { line: 0, msg: format!("expected series w 1 … w {g}") });
    }
    let series = rows.into_iter().map(|(_, v, cs, _)| QSeries::new(v, cs, p)).collect();
    DifferentialBasis::new(series)
}

/// Inverse of [`parse_basis`].
pub fn format_basis(b: &DifferentialBasis) -> String {
    let mut out = format!("genus {}\nprecision {}\n", b.genus(), b.precision());
    for (i, s) in b.series().iter().enumerate() {
        let v = s.val_or_prec();
        let cs: Vec<String> = (v..b.precision()).map(|n| s.coeff(n).to_string()).collect();
        let _ = writeln!(out, "w {} : {} : {}", i + 1, v, cs.join(" "));
    }
    out
}

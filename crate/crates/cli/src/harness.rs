//! Checks the table rows against curves computed from the bundled
//! newform fixtures.
//!
//! For each row whose level has a fixture, the named orbits are run
//! through the criterion and the resulting `F` is compared with the
//! printed one, first literally and then by a bounded search for a
//! change of model. Orbit letters are assigned by this crate's labeling
//! and may differ from the printed ones, so when the named orbits do not
//! give the printed curve, every other set of at most four orbits of the
//! right total dimension is tried before the row is reported as a
//! mismatch.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use anyhow::{Context, Result};
use itertools::Itertools;
use modhyp::criterion::{attempt_equation, compose_product, CandidateSpace, CurveRecord};
use modhyp::hypgeom::{count_points, is_isomorphic};
use modhyp::newform::{ingest_fixture, label, Newform};
use modhyp::QPoly;
use rayon::prelude::*;

use crate::tables::{Construction, ExpectedRow, TableExpectation, TableId};

/// Largest height searched for an isomorphism.
pub const MAX_HEIGHT: i64 = 20;

const HEIGHTS: [i64; 6] = [1, 2, 4, 8, 14, MAX_HEIGHT];

/// Largest number of orbits tried together when searching for a row.
const MAX_ORBITS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Match,
    Mismatch,
    Uncovered,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Match => "match",
            Status::Mismatch => "mismatch",
            Status::Uncovered => "uncovered",
            Status::Error => "error",
        })
    }
}

/// One line of the report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReport {
    pub table: TableId,
    /// Position of the row in its table, from 1.
    pub row: usize,
    pub label: String,
    pub status: Status,
    pub detail: String,
}

impl RowReport {
    pub fn id(&self) -> String {
        format!("{}.{:02}", self.table, self.row)
    }
}

impl fmt::Display for RowReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.id(), self.status, self.label)?;
        if !self.detail.is_empty() {
            write!(f, " : {}", self.detail)?;
        }
        Ok(())
    }
}

/// The orbits of one fixture together with their labels.
pub struct LevelData {
    pub forms: Vec<Newform>,
    pub labels: Vec<String>,
}

impl LevelData {
    pub fn load(dir: &Path, level: u64) -> Result<Option<LevelData>> {
        let path = dir.join(format!("{level}.nfqx"));
        if !path.exists() {
            return Ok(None);
        }
        let forms = ingest_fixture(&path).with_context(|| format!("reading {}", path.display()))?;
        let labels = label(&forms).with_context(|| format!("labeling level {level}"))?;
        Ok(Some(LevelData { forms, labels }))
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    fn space(&self, idx: &[usize]) -> modhyp::Result<CandidateSpace> {
        let forms = idx.iter().map(|&i| self.forms[i].clone()).collect();
        let names = idx.iter().map(|&i| self.labels[i].clone()).collect();
        CandidateSpace::new(forms, names)
    }

    fn curve(&self, idx: &[usize]) -> modhyp::Result<CurveRecord> {
        attempt_equation(&self.space(idx)?)
    }

    fn names(&self, idx: &[usize]) -> String {
        idx.iter().map(|&i| self.labels[i].as_str()).join("+")
    }
}

/// Outcome of comparing a computed curve with an expected one.
enum Comparison {
    Same(String),
    Different(String),
}

/// Compare `y² = got` with `y² = want`. Point counts over small fields
/// refute an isomorphism; otherwise a witness is searched for with
/// increasing height.
fn compare(got: &QPoly, want: &QPoly, genus: usize) -> Comparison {
    if got == want {
        return Comparison::Same("equal".into());
    }
    let dg = got.degree().unwrap_or(0);
    if (dg - 1) / 2 != genus {
        return Comparison::Different(format!("genus {} instead of {genus}", (dg - 1) / 2));
    }
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
        if let (Ok(a), Ok(b)) = (count_points(got, genus, p), count_points(want, genus, p)) {
            if a != b {
                return Comparison::Different(format!("{a} != {b} points over F_{p}"));
            }
        }
    }
    for h in HEIGHTS {
        if let Some(t) = is_isomorphic(got, want, genus, h) {
            let [a, b, c, d] = &t.m;
            return Comparison::Same(format!("isomorphic via M = [{a} {b}; {c} {d}], e = {}", t.e));
        }
    }
    Comparison::Different(format!("no isomorphism of height <= {MAX_HEIGHT}"))
}

fn check_curve(r: &modhyp::Result<CurveRecord>, row: &ExpectedRow) -> Option<Comparison> {
    r.as_ref().ok().map(|c| compare(c.model.f(), &row.f, row.genus))
}

/// Try every set of orbits of the row's total dimension other than
/// `skip`, in a fixed order, and return the first that gives the curve.
fn search_orbits(data: &LevelData, row: &ExpectedRow, skip: &[usize]) -> Option<(Vec<usize>, String)> {
    let n = data.forms.len();
    for k in 1..=MAX_ORBITS.min(n) {
        for idx in (0..n).combinations(k) {
            if idx == skip || idx.iter().map(|&i| data.forms[i].dimension()).sum::<usize>() != row.genus {
                continue;
            }
            if let Some(Comparison::Same(how)) = check_curve(&data.curve(&idx), row) {
                return Some((idx, how));
            }
        }
    }
    None
}

fn verify_orbits(data: &LevelData, row: &ExpectedRow, names: &[String]) -> (Status, String) {
    let idx: Option<Vec<usize>> = names.iter().map(|n| data.index_of(n)).collect();
    let first = match &idx {
        Some(idx) => {
            let r = data.curve(idx);
            match check_curve(&r, row) {
                Some(Comparison::Same(how)) => return (Status::Match, format!("{} : {how}", data.names(idx))),
                Some(Comparison::Different(why)) => format!("{} gives another curve ({why})", data.names(idx)),
                None => format!("{} : {}", data.names(idx), r.unwrap_err()),
            }
        }
        None => {
            let missing = names.iter().filter(|n| data.index_of(n).is_none()).join(", ");
            format!("no orbit {missing}")
        }
    };
    let skip = idx.clone().unwrap_or_default();
    match search_orbits(data, row, &skip) {
        Some((found, how)) => (Status::Match, format!("{} : {how} : in place of {first}", data.names(&found))),
        None if idx.is_none() => (Status::Uncovered, first),
        None => (Status::Mismatch, first),
    }
}

fn verify_product(data: &LevelData, row: &ExpectedRow, a: &[String], b: &[String]) -> (Status, String) {
    let idx = |names: &[String]| names.iter().map(|n| data.index_of(n)).collect::<Option<Vec<usize>>>();
    let (Some(ia), Some(ib)) = (idx(a), idx(b)) else {
        return (Status::Uncovered, format!("no orbits {} and {}", a.join("+"), b.join("+")));
    };
    let composed = data.curve(&ia).and_then(|ca| compose_product(&ca, &data.curve(&ib)?));
    match composed {
        Ok(c) => match compare(c.model.f(), &row.f, row.genus) {
            Comparison::Same(how) => (Status::Match, format!("{} x {} : {how}", data.names(&ia), data.names(&ib))),
            Comparison::Different(why) => (Status::Mismatch, why),
        },
        Err(e) => (Status::Mismatch, e.to_string()),
    }
}

fn verify_row(row: &ExpectedRow, data: Option<&Result<LevelData>>) -> (Status, String) {
    let data = match data {
        None => return (Status::Uncovered, format!("no fixture for level {}", row.level)),
        Some(Err(e)) => return (Status::Error, format!("{e:#}")),
        Some(Ok(d)) => d,
    };
    match &row.construction {
        Construction::Orbits(names) => verify_orbits(data, row, names),
        Construction::Product(a, b) => verify_product(data, row, a, b),
    }
}

/// Check every row of the given tables against the fixtures in `dir`.
/// The report is sorted by table and row regardless of scheduling.
pub fn verify_tables(tables: &[TableExpectation], dir: &Path) -> Vec<RowReport> {
    let levels: Vec<u64> = tables.iter().flat_map(|t| t.rows.iter().map(|r| r.level)).sorted().dedup().collect();
    let fixtures: BTreeMap<u64, Result<LevelData>> = levels
        .par_iter()
        .filter_map(|&n| match LevelData::load(dir, n) {
            Ok(None) => None,
            Ok(Some(d)) => Some((n, Ok(d))),
            Err(e) => Some((n, Err(e))),
        })
        .collect();
    let jobs: Vec<(TableId, usize, &ExpectedRow)> =
        tables.iter().flat_map(|t| t.rows.iter().enumerate().map(move |(i, r)| (t.id, i + 1, r))).collect();
    let mut out: Vec<RowReport> = jobs
        .par_iter()
        .map(|&(table, row, r)| {
            let (status, detail) = verify_row(r, fixtures.get(&r.level));
            RowReport { table, row, label: r.label.clone(), status, detail }
        })
        .collect();
    out.sort_by_key(|r| (r.table, r.row));
    out
}

/// Counts of each status and the share of rows covered by fixtures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub matched: usize,
    pub mismatched: usize,
    pub uncovered: usize,
    pub errors: usize,
}

impl Summary {
    pub fn of(reports: &[RowReport]) -> Summary {
        let mut s = Summary::default();
        for r in reports {
            match r.status {
                Status::Match => s.matched += 1,
                Status::Mismatch => s.mismatched += 1,
                Status::Uncovered => s.uncovered += 1,
                Status::Error => s.errors += 1,
            }
        }
        s
    }

    pub fn ok(&self) -> bool {
        self.mismatched == 0 && self.errors == 0
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let total = self.matched + self.mismatched + self.uncovered + self.errors;
        let covered = total - self.uncovered;
        let pct = if total == 0 { 0.0 } else { 100.0 * covered as f64 / total as f64 };
        write!(
            f,
            "summary : {} match, {} mismatch, {} uncovered, {} error : coverage {covered}/{total} ({pct:.1}%)",
            self.matched, self.mismatched, self.uncovered, self.errors
        )
    }
}

//! Reference values for the permutation tables, the external lines and the
//! first-row construction, with routines that recompute and compare them.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::construct::{initial_data, run_all_mu};
use crate::error::{Error, Result};
use crate::exactalg::{rat_frac, CycElem, FieldContext, Rat};
use crate::perms::{
    admissible_sigma_sets, mobius_fixed_points, mobius_from_permutation, normalized_quadruple, FixedPointReport,
    Mobius, PermS4,
};
use crate::projgeom::ProjPoint;

#[derive(Debug, Clone, Deserialize)]
pub enum QMinusOne {
    /// points with Gaussian-integer coordinates `[re, im]`
    #[serde(rename = "in_field")]
    InField([[[i64; 2]; 2]; 2]),
    /// `[center, radicand]`
    #[serde(rename = "symbolic")]
    Symbolic([i64; 2]),
}

#[derive(Debug, Clone, Deserialize)]
pub struct GeneralRow {
    pub perm: String,
    /// entries `[constant, coefficient of q]`
    pub matrix: [[[i64; 2]; 2]; 2],
    /// polynomials in `q`, constant term first
    pub center: Vec<i64>,
    pub radicand: Vec<i64>,
    pub at_q_minus_one: QMinusOne,
}

#[derive(Debug, Clone, Deserialize)]
pub struct HarmonicRow {
    pub perm: String,
    pub matrix: [[i64; 2]; 2],
    pub fixed_points: [[[i64; 2]; 2]; 2],
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExternalRow {
    pub sigma2: String,
    pub sigma3: String,
    pub ideal: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FirstRow {
    pub r: [[i64; 4]; 4],
    pub p4: [[i64; 4]; 4],
    pub l4: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Goldens {
    pub table1: Vec<GeneralRow>,
    pub table2: Vec<HarmonicRow>,
    pub table3: Vec<ExternalRow>,
    pub first_row: FirstRow,
    pub pairing: Vec<Vec<usize>>,
    pub admissible_harmonic: Vec<String>,
}

pub fn goldens() -> &'static Goldens {
    static G: OnceLock<Goldens> = OnceLock::new();
    G.get_or_init(|| serde_json::from_str(include_str!("../data/goldens.json")).expect("embedded goldens parse"))
}

/// Recomputed rows and any disagreement with the reference values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub table: u8,
    pub rows: Vec<String>,
    pub mismatches: Vec<String>,
}

impl TableReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("Table {}\n", self.table);
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        for m in &self.mismatches {
            s.push_str(&format!("MISMATCH: {m}\n"));
        }
        s.push_str(if self.ok() { "all rows match\n" } else { "regression detected\n" });
        s
    }
}

/// Parameter values at which the general table is checked.
const SAMPLE_Q: [(i64, i64); 5] = [(5, 1), (7, 1), (-3, 1), (1, 2), (-2, 3)];

fn poly_at(c: &[i64], q: &Rat) -> Rat {
    c.iter().rev().fold(Rat::from_integer(0.into()), |acc, &k| acc * q + Rat::from_integer(k.into()))
}

fn gaussian_point(p: &[[i64; 2]; 2]) -> ProjPoint {
    let c4 = FieldContext::get(4);
    let i = CycElem::zeta_pow(&c4, 1);
    let e = |[re, im]: [i64; 2]| &CycElem::from_i64(&c4, re) + &i.scale_i64(im);
    ProjPoint::new(vec![e(p[0]), e(p[1])]).expect("nonzero")
}

fn same_points(a: &[ProjPoint; 2], b: &[ProjPoint; 2]) -> bool {
    (a[0] == b[0] && a[1] == b[1]) || (a[0] == b[1] && a[1] == b[0])
}

/// `true` when `report` describes `[1 : center ± √radicand]`.
fn matches_center_radicand(report: &FixedPointReport, center: &CycElem, radicand: &CycElem) -> bool {
    match report {
        FixedPointReport::Symbolic { center: c, radicand: r } => c == center && r == radicand,
        FixedPointReport::InField(pts) => pts.iter().all(|p| {
            let c = p.coords();
            let Ok(inv) = c[0].inv() else { return false };
            let t = &(&c[1] * &inv) - center;
            &t * &t == *radicand
        }),
    }
}

fn describe(report: &FixedPointReport) -> String {
    match report {
        FixedPointReport::InField(p) => format!("{} and {}", p[0], p[1]),
        FixedPointReport::Symbolic { center, radicand } if center.is_zero() => format!("[1:±a], a² = {radicand}"),
        FixedPointReport::Symbolic { center, radicand } => format!("[1:{center} ± a], a² = {radicand}"),
    }
}

fn perm(s: &str) -> Result<PermS4> {
    s.parse()
}

pub fn check_table1() -> Result<TableReport> {
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    let c1 = FieldContext::get(1);
    for row in &goldens().table1 {
        let sigma = perm(&row.perm)?;
        for (n, d) in SAMPLE_Q {
            let q = rat_frac(n, d);
            let pts = normalized_quadruple(&CycElem::from_rat(&c1, &q));
            let f = mobius_from_permutation(&pts, &sigma)?;
            let ent = |e: [i64; 2]| CycElem::from_rat(&c1, &(Rat::from_integer(e[0].into()) + Rat::from_integer(e[1].into()) * &q));
            let want = Mobius::new([
                [ent(row.matrix[0][0]), ent(row.matrix[0][1])],
                [ent(row.matrix[1][0]), ent(row.matrix[1][1])],
            ])?;
            if f != want {
                mismatches.push(format!("{} at q = {q}: matrix {f:?}", row.perm));
            }
            let fp = mobius_fixed_points(&f)?;
            let center = CycElem::from_rat(&c1, &poly_at(&row.center, &q));
            let radicand = CycElem::from_rat(&c1, &poly_at(&row.radicand, &q));
            if !matches_center_radicand(&fp, &center, &radicand) {
                mismatches.push(format!("{} at q = {q}: fixed points {}", row.perm, describe(&fp)));
            }
        }
        let c4 = FieldContext::get(4);
        let pts = normalized_quadruple(&CycElem::from_i64(&c4, -1));
        let f = mobius_from_permutation(&pts, &sigma)?;
        let fp = mobius_fixed_points(&f)?;
        let ok = match (&row.at_q_minus_one, &fp) {
            (QMinusOne::InField(want), FixedPointReport::InField(got)) => {
                same_points(got, &[gaussian_point(&want[0]), gaussian_point(&want[1])])
            }
            (QMinusOne::Symbolic([c, r]), FixedPointReport::Symbolic { center, radicand }) => {
                *center == CycElem::from_i64(&c4, *c) && *radicand == CycElem::from_i64(&c4, *r)
            }
            _ => false,
        };
        if !ok {
            mismatches.push(format!("{} at q = -1: fixed points {}", row.perm, describe(&fp)));
        }
        let m = &row.matrix;
        let show = |e: [i64; 2]| match e {
            [c, 0] => c.to_string(),
            [0, 1] => "q".into(),
            [0, -1] => "-q".into(),
            [c, k] => format!("{c}+{k}q"),
        };
        rows.push(format!(
            "{}  [[{}, {}], [{}, {}]]  center {:?} radicand {:?} (coefficients in q)  q=-1: {}",
            row.perm,
            show(m[0][0]),
            show(m[0][1]),
            show(m[1][0]),
            show(m[1][1]),
            row.center,
            row.radicand,
            describe(&fp)
        ));
    }
    Ok(TableReport { table: 1, rows, mismatches })
}

pub fn check_table2() -> Result<TableReport> {
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    let c4 = FieldContext::get(4);
    let pts = normalized_quadruple(&CycElem::from_i64(&c4, -1));
    for row in &goldens().table2 {
        let f = mobius_from_permutation(&pts, &perm(&row.perm)?)?;
        if f != Mobius::from_ints(&c4, row.matrix) {
            mismatches.push(format!("{}: matrix {f:?}", row.perm));
        }
        let fp = mobius_fixed_points(&f)?;
        let want = [gaussian_point(&row.fixed_points[0]), gaussian_point(&row.fixed_points[1])];
        if !matches!(&fp, FixedPointReport::InField(got) if same_points(got, &want)) {
            mismatches.push(format!("{}: fixed points {}", row.perm, describe(&fp)));
        }
        let [[a, b], [c, d]] = row.matrix;
        rows.push(format!("{}  [[{a}, {b}], [{c}, {d}]]  {}", row.perm, describe(&fp)));
    }
    let sets = admissible_sigma_sets(&CycElem::from_i64(&c4, -1))?;
    let want = goldens().admissible_harmonic.iter().map(|s| perm(s)).collect::<Result<Vec<_>>>()?;
    if sets.len() != 1 || sets[0].perms != want {
        mismatches.push("admissible permutations at q = -1 differ".into());
    }
    Ok(TableReport { table: 2, rows, mismatches })
}

pub fn check_table3() -> Result<TableReport> {
    let report = run_all_mu()?;
    let g = goldens();
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for (row, want) in report.rows.iter().zip(&g.table3) {
        if row.sigma2 != perm(&want.sigma2)? || row.sigma3 != perm(&want.sigma3)? {
            mismatches.push(format!("row {}: permutations out of order", row.row));
        }
        if row.external != want.ideal {
            mismatches.push(format!("row {}: {} instead of {}", row.row, row.external, want.ideal));
        }
        rows.push(format!("{}  {}  {}  {}", row.row, row.sigma2, row.sigma3, row.external));
    }
    if report.rows.len() != g.table3.len() {
        mismatches.push(format!("{} rows instead of {}", report.rows.len(), g.table3.len()));
    }
    let first = &report.results[0];
    let c1 = initial_data().context().clone();
    let ints = |v: &[[i64; 4]; 4]| v.map(|p| ProjPoint::from_ints(&c1, &p));
    if first.r != ints(&g.first_row.r) {
        mismatches.push("row 1: R points differ".into());
    }
    if first.p4 != ints(&g.first_row.p4) {
        mismatches.push("row 1: fourth-line points differ".into());
    }
    if report.rows[0].l4 != g.first_row.l4 {
        mismatches.push(format!("row 1: fourth line {}", report.rows[0].l4));
    }
    if report.pairing != g.pairing {
        mismatches.push(format!("rows sharing the fourth line: {:?}", report.pairing));
    }
    rows.push(format!("rows sharing L4: {:?}", report.pairing));
    Ok(TableReport { table: 3, rows, mismatches })
}

pub fn check_table(which: u8) -> Result<TableReport> {
    match which {
        1 => check_table1(),
        2 => check_table2(),
        3 => check_table3(),
        _ => Err(Error::Input(format!("no table {which}; choose 1, 2 or 3"))),
    }
}

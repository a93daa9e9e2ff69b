//! Completion of a harmonic (4,4)-grid to a 24-point half grid: from three
//! grid lines and a choice of permutations, find the external line, its
//! points, and the fourth grid line.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{lcm, sqrt_in_field, CycElem, FieldContext, SquareTest};
use crate::halfgrid::Config;
use crate::perms::PermS4;
use crate::projgeom::{
    format_line_ideal, line_through, lines_meet, second_intersection_with_quadric, second_line_meeting_four,
    transversal_through_point, ProjLine3, ProjPoint, Quadric3,
};


/// The three fixed-point-free permutations available for the external line.
pub const SIGMA_CHOICES: [&str; 3] = ["(2,1,4,3)", "(3,4,2,1)", "(4,3,1,2)"];

/// Expected ideals of the external line, one per row of [`all_mu`].
pub const EXTERNAL_LINE_IDEALS: [&str; 6] = [
    "(y+z,x-w)",
    "(y-z,x+w)",
    "(y-z+w,x-z+2w)",
    "(y-2z+w,x-z+w)",
    "(y+z-w,x+z-2w)",
    "(y+2z-w,x+z-w)",
];

/// Rows sharing a fourth grid line.
pub const EXPECTED_PAIRING: [[usize; 2]; 3] = [[1, 2], [3, 5], [4, 6]];

/// Three skew lines on `xw - yz` with four harmonic points each.
#[derive(Debug, Clone)]
pub struct InitialData {
    /// `points[i][j]` is `P[i+1][j+1]`.
    pub points: [[ProjPoint; 4]; 3],
    pub lines: [ProjLine3; 3],
    pub quadric: Quadric3,
    pub harmonic_parameter: CycElem,
}

impl InitialData {
    /// `P[i][j]` with 1-based indices.
    pub fn point(&self, i: usize, j: usize) -> &ProjPoint {
        &self.points[i - 1][j - 1]
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        self.harmonic_parameter.context()
    }
}

pub fn initial_data() -> InitialData {
    let ctx = FieldContext::get(1);
    let pt = |xs: [i64; 4]| ProjPoint::from_ints(&ctx, &xs);
    let points = [
        [pt([1, 0, 0, 0]), pt([0, 0, 1, 0]), pt([1, 0, 1, 0]), pt([1, 0, -1, 0])],
        [pt([0, 1, 0, 0]), pt([0, 0, 0, 1]), pt([0, 1, 0, 1]), pt([0, 1, 0, -1])],
        [pt([1, 1, 0, 0]), pt([0, 0, 1, 1]), pt([1, 1, 1, 1]), pt([1, 1, -1, -1])],
    ];
    let lines = [0, 1, 2].map(|i| line_through(&points[i][0], &points[i][1]).expect("distinct points"));
    let mut coeffs = vec![CycElem::zero(&ctx); 10];
    coeffs[3] = CycElem::one(&ctx);
    coeffs[5] = CycElem::from_i64(&ctx, -1);
    InitialData {
        points,
        lines,
        quadric: Quadric3::from_monomial_coeffs(&coeffs).expect("symmetric"),
        harmonic_parameter: CycElem::from_i64(&ctx, -1),
    }
}

/// Which permutation governs the external line's incidences with grid lines 2, 3 and 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MuAssignment {
    pub sigma2: PermS4,
    pub sigma3: PermS4,
    pub sigma4: PermS4,
}

impl MuAssignment {
    pub fn new(sigma2: PermS4, sigma3: PermS4, sigma4: PermS4) -> Result<MuAssignment> {
        let mut got = [sigma2, sigma3, sigma4];
        got.sort();
        let mut want = SIGMA_CHOICES.map(|s| s.parse::<PermS4>().expect("valid literal"));
        want.sort();
        if got != want {
            return Err(Error::Input(format!(
                "({sigma2}, {sigma3}, {sigma4}) is not a bijection onto the three admissible permutations"
            )));
        }
        Ok(MuAssignment { sigma2, sigma3, sigma4 })
    }

    /// Completes `(σ₂, σ₃)` with the remaining permutation.
    pub fn from_pair(sigma2: PermS4, sigma3: PermS4) -> Result<MuAssignment> {
        let rest = SIGMA_CHOICES
            .iter()
            .map(|s| s.parse::<PermS4>().expect("valid literal"))
            .find(|s| *s != sigma2 && *s != sigma3)
            .ok_or_else(|| Error::Input("σ₂ and σ₃ must differ".into()))?;
        MuAssignment::new(sigma2, sigma3, rest)
    }

    pub fn sigma(&self, i: usize) -> &PermS4 {
        match i {
            2 => &self.sigma2,
            3 => &self.sigma3,
            4 => &self.sigma4,
            _ => panic!("grid line index {i} out of range"),
        }
    }
}

impl fmt::Display for MuAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ2={} σ3={} σ4={}", self.sigma2, self.sigma3, self.sigma4)
    }
}

/// The six bijections, ordered by `(σ₂, σ₃)`.
pub fn all_mu() -> Vec<MuAssignment> {
    let perms = SIGMA_CHOICES.map(|s| s.parse::<PermS4>().expect("valid literal"));
    let mut out = Vec::new();
    for a in perms {
        for b in perms {
            if a != b {
                out.push(MuAssignment::from_pair(a, b).expect("distinct"));
            }
        }
    }
    out
}

/// Line through `P[1][σ(j)]` and `P[i][j]`, for `j = 1..4`.
fn cross_lines(data: &InitialData, i: usize, sigma: &PermS4) -> Result<[ProjLine3; 4]> {
    let mk = |j: usize| line_through(data.point(1, sigma.apply(j)), data.point(i, j));
    Ok([mk(1)?, mk(2)?, mk(3)?, mk(4)?])
}

/// The line other than `L₁` meeting the σ₂ and σ₃ cross-lines.
pub fn external_line(data: &InitialData, mu: &MuAssignment) -> Result<ProjLine3> {
    let c2 = cross_lines(data, 2, &mu.sigma2)?;
    let c3 = cross_lines(data, 3, &mu.sigma3)?;
    // the σ₂ cross-lines form one ruling of a quadric, so any three are skew;
    // a σ₃ cross-line cuts the remaining pencil down to L₁ and L
    let mut found = None;
    for extra in &c3 {
        match second_line_meeting_four([&c2[0], &c2[1], &c2[2], extra], &data.lines[0]) {
            Ok(l) => {
                found = Some(l);
                break;
            }
            Err(Error::DegeneratePencil) => continue,
            Err(e) => return Err(e),
        }
    }
    let l = found.ok_or(Error::DegeneratePencil)?;
    for (k, c) in c2.iter().chain(&c3).enumerate() {
        if c.is_skew_to(&l) {
            return Err(Error::Invariant(format!(
                "external line for {mu} misses cross-line {} of σ{}",
                k % 4 + 1,
                k / 4 + 2
            )));
        }
    }
    Ok(l.normalized())
}

/// `R_i`: the point where the σ₂ cross-line through `P[2][i]` meets `l`,
/// checked against the σ₃ cross-line through `P[3][i]`.
pub fn r_points(data: &InitialData, l: &ProjLine3, mu: &MuAssignment) -> Result<[ProjPoint; 4]> {
    if !l.is_skew_to(&data.lines[0]) || !l.is_skew_to(&data.lines[1]) {
        return Err(Error::NotSkew);
    }
    let c2 = cross_lines(data, 2, &mu.sigma2)?;
    let c3 = cross_lines(data, 3, &mu.sigma3)?;
    let mut out = Vec::with_capacity(4);
    for i in 0..4 {
        let r = lines_meet(&c2[i], l).ok_or(Error::LinesSkew)?;
        if !c3[i].contains(&r) {
            return Err(Error::Invariant(format!("R[{}] is not on the σ3 cross-line", i + 1)));
        }
        out.push(r.normalized());
    }
    Ok(out.try_into().expect("four points"))
}

/// Fourth grid line: `P[4][i]` is the second point of the quadric on the line
/// through `P[1][σ₄(i)]` and `R_i`.
pub fn fourth_line(data: &InitialData, mu: &MuAssignment, r: &[ProjPoint; 4]) -> Result<(ProjLine3, [ProjPoint; 4])> {
    let mut p4 = Vec::with_capacity(4);
    for (i, ri) in r.iter().enumerate() {
        let base = data.point(1, mu.sigma4.apply(i + 1));
        let l = line_through(base, ri)?;
        p4.push(second_intersection_with_quadric(&l, &data.quadric, base)?.normalized());
    }
    let l4 = line_through(&p4[0], &p4[1])?;
    if !p4.iter().all(|p| l4.contains(p)) {
        return Err(Error::NotCollinear);
    }
    Ok((l4.normalized(), p4.try_into().expect("four points")))
}

#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub mu: MuAssignment,
    pub external: ProjLine3,
    pub r: [ProjPoint; 4],
    pub l4: ProjLine3,
    pub p4: [ProjPoint; 4],
    /// The 16 grid points and the four `R` points, with lines `L[1..4]`,
    /// the external line `E` and, when defined over a small cyclotomic field,
    /// the transversals `T1`, `T2`.
    pub z20: Config,
}

/// Runs the whole construction for one bijection.
pub fn construct(data: &InitialData, mu: &MuAssignment) -> Result<ConstructionResult> {
    let external = external_line(data, mu)?;
    let r = r_points(data, &external, mu)?;
    let (l4, p4) = fourth_line(data, mu, &r)?;
    let mut points = grid_points(data, &p4);
    points.extend(r.iter().enumerate().map(|(i, p)| (format!("R[{}]", i + 1), p.clone())));
    let mut lines = grid_lines(data, &l4);
    lines.push(("E".to_string(), external.clone()));
    let mut conductor = 1;
    if let Some((n, t)) = transversals(data, &l4, &external)? {
        conductor = n;
        lines.extend(t.into_iter().enumerate().map(|(k, t)| (format!("T{}", k + 1), t)));
    }
    let z20 = Config::new(conductor, points, lines)?;
    if z20.len() != 20 {
        return Err(Error::Invariant(format!("expected 20 distinct points, found {}", z20.len())));
    }
    Ok(ConstructionResult {
        mu: *mu,
        external,
        r,
        l4,
        p4,
        z20,
    })
}

fn grid_points(data: &InitialData, p4: &[ProjPoint; 4]) -> Vec<(String, ProjPoint)> {
    let mut out = Vec::with_capacity(16);
    for i in 1..=4 {
        for j in 1..=4 {
            let p = if i == 4 { p4[j - 1].clone() } else { data.point(i, j).clone() };
            out.push((format!("P[{i}][{j}]"), p));
        }
    }
    out
}

fn grid_lines(data: &InitialData, l4: &ProjLine3) -> Vec<(String, ProjLine3)> {
    let mut out: Vec<(String, ProjLine3)> =
        data.lines.iter().enumerate().map(|(i, l)| (format!("L[{}]", i + 1), l.clone())).collect();
    out.push(("L[4]".into(), l4.clone()));
    out
}

/// The two lines of the second ruling through the points where `external`
/// meets the quadric, when those points are defined over `Q(ζ₄)` or `Q(ζ₁₂)`.
fn transversals(data: &InitialData, l4: &ProjLine3, external: &ProjLine3) -> Result<Option<(u32, [ProjLine3; 2])>> {
    let q = &data.quadric;
    let (a, b) = external.spanning_points();
    // Q(s a + t b) = s² Q(a) + 2 s t B(a,b) + t² Q(b)
    let (qa, bab, qb) = (q.eval(&a), q.bilinear(&a, &b), q.eval(&b));
    let disc = &(&bab * &bab) - &(&qa * &qb);
    for n in [4u32, 12, 24] {
        let n = lcm(n, disc.conductor());
        let SquareTest::Square(root) = sqrt_in_field(&disc.embed(n)?) else { continue };
        let (a, b) = (a.embed(n)?, b.embed(n)?);
        let (qa, bab, qb) = (qa.embed(n)?, bab.embed(n)?, qb.embed(n)?);
        let hits: Vec<ProjPoint> = if qa.is_zero() {
            // s = 1, t = 0 is one root; the other solves 2 s B + t Q(b) = 0
            vec![a.clone(), combine(&qb, &-&(&bab + &bab), &a, &b)?]
        } else {
            [&root, &-&root]
                .iter()
                .map(|r| combine(&(&-&bab + *r), &qa, &a, &b))
                .collect::<Result<_>>()?
        };
        let lines = data.lines.iter().map(|l| l.embed(n)).collect::<Result<Vec<_>>>()?;
        let t: Vec<ProjLine3> = hits
            .iter()
            .map(|h| transversal_through_point(h, &lines[0], &lines[1]))
            .collect::<Result<_>>()?;
        let l4 = l4.embed(n)?;
        for t in &t {
            if t.is_skew_to(&lines[2]) || t.is_skew_to(&l4) {
                return Err(Error::Invariant("transversal misses a grid line".into()));
            }
        }
        return Ok(Some((n, [t[0].normalized(), t[1].normalized()])));
    }
    Ok(None)
}

fn combine(s: &CycElem, t: &CycElem, a: &ProjPoint, b: &ProjPoint) -> Result<ProjPoint> {
    ProjPoint::new(a.coords().iter().zip(b.coords()).map(|(x, y)| &(s * x) + &(t * y)).collect())
}

/// One line of the report produced by [`run_all_mu`].
#[derive(Debug, Clone, Serialize)]
pub struct RowReport {
    pub row: usize,
    pub sigma2: PermS4,
    pub sigma3: PermS4,
    pub sigma4: PermS4,
    pub external: String,
    pub expected_external: String,
    pub matches: bool,
    pub r: Vec<String>,
    pub p4: Vec<String>,
    pub l4: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MuReport {
    pub rows: Vec<RowReport>,
    /// Groups of 1-based rows sharing the fourth grid line.
    pub pairing: Vec<Vec<usize>>,
    pub pairing_matches: bool,
    #[serde(skip)]
    pub results: Vec<ConstructionResult>,
}

impl MuReport {
    pub fn all_match(&self) -> bool {
        self.pairing_matches && self.rows.iter().all(|r| r.matches)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            s.push_str(&format!(
                "{}  {} {}  L = {}  {}  L4 = {}\n",
                r.row,
                r.sigma2,
                r.sigma3,
                r.external,
                if r.matches { "ok" } else { "MISMATCH" },
                r.l4
            ));
        }
        let groups: Vec<String> = self
            .pairing
            .iter()
            .map(|g| format!("{{{}}}", g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        s.push_str(&format!(
            "rows sharing L4: {}  {}\n",
            groups.join(" "),
            if self.pairing_matches { "ok" } else { "MISMATCH" }
        ));
        s
    }
}

/// Runs the construction for all six bijections in parallel.
pub fn run_all_mu() -> Result<MuReport> {
    let data = initial_data();
    let results: Vec<ConstructionResult> =
        all_mu().par_iter().map(|mu| construct(&data, mu)).collect::<Result<_>>()?;
    let mut pairing: Vec<Vec<usize>> = Vec::new();
    for (k, res) in results.iter().enumerate() {
        match pairing.iter_mut().find(|g| results[g[0] - 1].l4 == res.l4) {
            Some(g) => g.push(k + 1),
            None => pairing.push(vec![k + 1]),
        }
    }
    let pairing_matches = pairing.iter().map(|g| g.as_slice()).eq(EXPECTED_PAIRING.iter().map(|g| g.as_slice()));
    let rows = results
        .iter()
        .enumerate()
        .map(|(k, res)| {
            let external = format_line_ideal(&res.external);
            RowReport {
                row: k + 1,
                sigma2: res.mu.sigma2,
                sigma3: res.mu.sigma3,
                sigma4: res.mu.sigma4,
                matches: external == EXTERNAL_LINE_IDEALS[k],
                external,
                expected_external: EXTERNAL_LINE_IDEALS[k].to_string(),
                r: res.r.iter().map(|p| p.to_string()).collect(),
                p4: res.p4.iter().map(|p| p.to_string()).collect(),
                l4: format_line_ideal(&res.l4),
            }
        })
        .collect();
    Ok(MuReport {
        rows,
        pairing,
        pairing_matches,
        results,
    })
}

/// The 24-point configuration from two rows sharing a fourth grid line:
/// 16 grid points and the points of both external lines, labeled
/// `R[row][i]`, with lines `L[1..4]` and `E[row]`.
pub fn assemble_pair(rows: [usize; 2]) -> Result<Config> {
    let mus = all_mu();
    if rows.iter().any(|&r| !(1..=6).contains(&r)) || rows[0] == rows[1] {
        return Err(Error::Input(format!("rows must be two distinct values in 1..=6, got {rows:?}")));
    }
    let data = initial_data();
    let a = construct(&data, &mus[rows[0] - 1])?;
    let b = construct(&data, &mus[rows[1] - 1])?;
    if a.l4 != b.l4 || a.p4 != b.p4 {
        return Err(Error::Input(format!("rows {} and {} have different fourth grid lines", rows[0], rows[1])));
    }
    let mut points = grid_points(&data, &a.p4);
    let mut lines = grid_lines(&data, &a.l4);
    for (row, res) in [(rows[0], &a), (rows[1], &b)] {
        points.extend(res.r.iter().enumerate().map(|(i, p)| (format!("R[{row}][{}]", i + 1), p.clone())));
        lines.push((format!("E[{row}]"), res.external.clone()));
    }
    let z = Config::new(1, points, lines)?;
    if z.len() != 24 {
        return Err(Error::Invariant(format!("expected 24 distinct points, found {}", z.len())));
    }
    Ok(z)
}

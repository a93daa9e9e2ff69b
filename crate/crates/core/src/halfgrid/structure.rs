use rayon::prelude::*;
use serde::Serialize;

use super::config::Config;
use crate::error::{Error, Result};
use crate::projgeom::{lines_meet, transversal_through_point, ProjLine3};

/// A line together with the labels of the configuration points on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineIncidence {
    pub line: ProjLine3,
    pub labels: Vec<String>,
}

/// All lines spanned by pairs of points that carry at least `k` points.
pub fn incidence_lines(z: &Config, k: usize) -> Vec<LineIncidence> {
    let pts = z.points();
    let n = pts.len();
    if k < 2 || n < k {
        return Vec::new();
    }
    // For each first point i, scan partners j > i whose pair is not yet covered by a
    // line through an earlier point; rows are independent so they run in parallel.
    let rows: Vec<Vec<(usize, Vec<usize>)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut covered = vec![false; n];
            let mut out = Vec::new();
            for j in i + 1..n {
                if covered[j] {
                    continue;
                }
                let line = ProjLine3::through(&pts[i].coords, &pts[j].coords).expect("distinct points");
                let on: Vec<usize> = (0..n)
                    .filter(|&t| t == i || t == j || line.contains(&pts[t].coords))
                    .collect();
                for &t in &on {
                    covered[t] = true;
                }
                // report each line once, from its lowest-index point
                if on[0] == i && on.len() >= k {
                    out.push((j, on));
                }
            }
            out
        })
        .collect();
    let mut lines: Vec<LineIncidence> = rows
        .into_iter()
        .enumerate()
        .flat_map(|(i, row)| {
            row.into_iter().map(move |(j, on)| (i, j, on))
        })
        .map(|(i, j, on)| LineIncidence {
            line: ProjLine3::through(&pts[i].coords, &pts[j].coords).unwrap().normalized(),
            labels: on.iter().map(|&t| pts[t].label.clone()).collect(),
        })
        .collect();
    lines.sort_by(|a, b| {
        b.labels
            .len()
            .cmp(&a.labels.len())
            .then_with(|| cmp_label_lists(&a.labels, &b.labels))
    });
    lines
}

fn cmp_label_lists(a: &[String], b: &[String]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = super::config::natural_cmp(x, y);
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridCert {
    pub a_lines: Vec<LineIncidence>,
    pub b_lines: Vec<LineIncidence>,
    /// `incidence[i][j]`: label of the point on both `a_lines[i]` and `b_lines[j]`.
    pub incidence: Vec<Vec<Option<String>>>,
}

/// Evidence that no skew family of the required shape exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridRefutation {
    pub points_per_line: usize,
    pub lines_needed: usize,
    pub candidates: Vec<LineIncidence>,
    pub largest_skew_family: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfGridCert {
    pub lines: Vec<LineIncidence>,
    pub grid_refutation: GridRefutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Structure {
    Grid(GridCert),
    HalfGrid(HalfGridCert),
    Neither,
}

/// Largest pairwise skew subfamily, preferring lexicographically first choices;
/// stops as soon as one of size `target` is found.
fn skew_family(cands: &[LineIncidence], target: usize) -> Vec<usize> {
    let m = cands.len();
    let skew: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..m).map(|j| i != j && cands[i].line.is_skew_to(&cands[j].line)).collect())
        .collect();
    let mut best = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, skew: &[Vec<bool>], cur: &mut Vec<usize>, best: &mut Vec<usize>, target: usize) -> bool {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        if best.len() >= target {
            return true;
        }
        for c in start..skew.len() {
            if cur.len() + (skew.len() - c) <= best.len() {
                break;
            }
            if cur.iter().all(|&x| skew[x][c]) {
                cur.push(c);
                if go(c + 1, skew, cur, best, target) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    go(0, &skew, &mut cur, &mut best, target);
    best
}

/// Lines carrying exactly `count` points, and a skew family of `needed` of them if one exists.
fn family(lines: &[LineIncidence], count: usize, needed: usize) -> (Vec<LineIncidence>, Option<Vec<LineIncidence>>, usize) {
    let cands: Vec<LineIncidence> = lines.iter().filter(|l| l.labels.len() == count).cloned().collect();
    let fam = skew_family(&cands, needed);
    let size = fam.len();
    let found = (size >= needed).then(|| fam.into_iter().map(|i| cands[i].clone()).collect());
    (cands, found, size)
}

fn incidence_matrix(a: &[LineIncidence], b: &[LineIncidence]) -> Vec<Vec<Option<String>>> {
    a.iter()
        .map(|x| {
            b.iter()
                .map(|y| x.labels.iter().find(|l| y.labels.contains(l)).cloned())
                .collect()
        })
        .collect()
}

/// Classifies `z` as an `(a,b)` grid, half grid, or neither, purely from line incidences.
pub fn detect_structure(z: &Config, a: usize, b: usize) -> Result<Structure> {
    if z.len() != a * b {
        return Err(Error::Input(format!("{} points cannot form an ({a},{b}) structure", z.len())));
    }
    let lines = incidence_lines(z, a.min(b).max(2));
    // A: a skew lines with b points each; B: b skew lines with a points each
    let (a_cands, a_fam, a_size) = family(&lines, b, a);
    let (b_cands, b_fam, b_size) = if a == b {
        // disjoint families: search B among lines not used by A
        let rest: Vec<LineIncidence> = match &a_fam {
            Some(f) => lines.iter().filter(|l| !f.contains(l)).cloned().collect(),
            None => lines.clone(),
        };
        family(&rest, a, b)
    } else {
        family(&lines, a, b)
    };
    Ok(match (a_fam, b_fam) {
        (Some(af), Some(bf)) => Structure::Grid(GridCert {
            incidence: incidence_matrix(&af, &bf),
            a_lines: af,
            b_lines: bf,
        }),
        (Some(af), None) => Structure::HalfGrid(HalfGridCert {
            lines: af,
            grid_refutation: GridRefutation {
                points_per_line: a,
                lines_needed: b,
                candidates: b_cands,
                largest_skew_family: b_size,
            },
        }),
        (None, Some(bf)) => Structure::HalfGrid(HalfGridCert {
            lines: bf,
            grid_refutation: GridRefutation {
                points_per_line: b,
                lines_needed: a,
                candidates: a_cands,
                largest_skew_family: a_size,
            },
        }),
        (None, None) => Structure::Neither,
    })
}

fn validate_family(z: &Config, fam: &[LineIncidence], count: usize) -> Result<()> {
    for (i, l) in fam.iter().enumerate() {
        let on = z.points_on(&l.line);
        if on.len() != count || on.iter().zip(&l.labels).any(|(x, y)| x != y) || on.len() != l.labels.len() {
            return Err(Error::Invariant(format!("line {i} does not carry the listed {count} points")));
        }
        for other in &fam[i + 1..] {
            if !l.line.is_skew_to(&other.line) {
                return Err(Error::Invariant("certificate lines are not pairwise skew".into()));
            }
        }
    }
    Ok(())
}

impl GridCert {
    /// Re-checks every incidence and skewness claim against `z`.
    pub fn validate(&self, z: &Config) -> Result<()> {
        let (a, b) = (self.a_lines.len(), self.b_lines.len());
        validate_family(z, &self.a_lines, b)?;
        validate_family(z, &self.b_lines, a)?;
        if self.a_lines.iter().any(|l| self.b_lines.contains(l)) {
            return Err(Error::Invariant("grid families share a line".into()));
        }
        if incidence_matrix(&self.a_lines, &self.b_lines) != self.incidence {
            return Err(Error::Invariant("incidence matrix does not match".into()));
        }
        Ok(())
    }
}

impl HalfGridCert {
    /// Re-checks the line family and re-runs the refutation search.
    pub fn validate(&self, z: &Config) -> Result<()> {
        let r = &self.grid_refutation;
        validate_family(z, &self.lines, z.len() / self.lines.len().max(1))?;
        let lines = incidence_lines(z, r.points_per_line.min(self.lines.len()).max(2));
        let (cands, fam, size) = family(&lines, r.points_per_line, r.lines_needed);
        if fam.is_some() || size != r.largest_skew_family || cands != r.candidates {
            return Err(Error::Invariant("grid refutation does not reproduce".into()));
        }
        Ok(())
    }
}

/// For three skew lines each carrying `m` points of `z`, finds the `m`
/// transversals through points of `z` on all three.
pub fn three_line_grid_check(z: &Config, lines: [&ProjLine3; 3]) -> Result<GridCert> {
    for i in 0..3 {
        for j in i + 1..3 {
            if !lines[i].is_skew_to(lines[j]) {
                return Err(Error::NotSkew);
            }
        }
    }
    let on: Vec<Vec<&str>> = lines.iter().map(|l| z.points_on(l)).collect();
    let m = on[0].len();
    if on.iter().any(|o| o.len() != m) || m == 0 {
        return Err(Error::Input("the three lines must carry equally many points".into()));
    }
    let mut transversals = Vec::new();
    for label in &on[0] {
        let p = z.point(label).expect("label from config");
        let t = transversal_through_point(p, lines[1], lines[2])?;
        let mut labels = vec![label.to_string()];
        for l in &lines[1..] {
            let hit = lines_meet(&t, l).ok_or(Error::Invariant("transversal misses a line".into()))?;
            match z.find(&hit) {
                Some(h) => labels.push(h.to_string()),
                None => {
                    return Err(Error::NotHalfGrid(format!(
                        "transversal through {label} meets a chosen line off the configuration"
                    )))
                }
            }
        }
        labels.sort_by(|a, b| super::config::natural_cmp(a, b));
        transversals.push(LineIncidence {
            line: t.normalized(),
            labels,
        });
    }
    let a_lines: Vec<LineIncidence> = lines
        .iter()
        .zip(&on)
        .map(|(l, o)| LineIncidence {
            line: l.normalized(),
            labels: o.iter().map(|s| s.to_string()).collect(),
        })
        .collect();
    // transversals carry only the three chosen points when restricted to the sub-configuration
    Ok(GridCert {
        incidence: incidence_matrix(&a_lines, &transversals),
        a_lines,
        b_lines: transversals,
    })
}

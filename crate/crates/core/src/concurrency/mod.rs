//! Points of concurrence in the planes spanned by a row and a column of the
//! standard (m,m)-grid `p[i][j] = [1 : u^j : u^i : u^(i+j)]`.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{CycElem, FieldContext};
use crate::projgeom::{lines_meet, Plane3, ProjLine3, ProjPoint};


/// Largest `m` for which the count of two is independently established.
pub const VERIFIED_UP_TO: u32 = 11;

/// Powers of a primitive `m`-th root of unity, indexed by exponent mod `m`.
struct RootPowers {
    ctx: Arc<FieldContext>,
    pow: Vec<CycElem>,
}

impl RootPowers {
    fn new(m: u32) -> RootPowers {
        let ctx = FieldContext::get(m);
        let pow = (0..m as i64).map(|k| CycElem::zeta_pow(&ctx, k)).collect();
        RootPowers { ctx, pow }
    }

    fn u(&self, e: i64) -> &CycElem {
        &self.pow[e.rem_euclid(self.pow.len() as i64) as usize]
    }

    fn grid_point(&self, i: i64, j: i64) -> ProjPoint {
        ProjPoint::new(vec![CycElem::one(&self.ctx), self.u(j).clone(), self.u(i).clone(), self.u(i + j).clone()])
            .expect("nonzero")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConcurrencyQuery {
    pub m: u32,
    pub i: u32,
    pub j: u32,
    /// `w - u^j z - u^i y + u^(i+j) x`
    pub plane: Plane3,
}

impl ConcurrencyQuery {
    pub fn new(m: u32, i: u32, j: u32) -> Result<ConcurrencyQuery> {
        if m < 3 || i >= m || j >= m {
            return Err(Error::Input(format!("need m ≥ 3 and 0 ≤ i, j < m, got m={m}, i={i}, j={j}")));
        }
        let r = RootPowers::new(m);
        let (i, j) = (i as i64, j as i64);
        let plane = Plane3::new(vec![r.u(i + j).clone(), -r.u(i), -r.u(j), CycElem::one(&r.ctx)])?;
        Ok(ConcurrencyQuery {
            m,
            i: i as u32,
            j: j as u32,
            plane,
        })
    }
}

/// A point `q` of the plane off the row and column such that, for every
/// `k ≠ j`, the line through `q` and `p[i][k]` passes through `p[l][j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConcurrencyPoint {
    pub q: ProjPoint,
    /// `(k, l)` pairs, one for each `k ≠ j`.
    pub witness: Vec<(u32, u32)>,
}

impl ConcurrencyPoint {
    /// Re-checks plane membership, avoidance and every witness line.
    pub fn validate(&self, query: &ConcurrencyQuery) -> Result<()> {
        let r = RootPowers::new(query.m);
        let (i, j) = (query.i as i64, query.j as i64);
        let q = self.q.embed(query.m)?;
        if !query.plane.contains(&q) {
            return Err(Error::Invariant(format!("{} is not in the plane", self.q)));
        }
        let row = ProjLine3::through(&r.grid_point(i, 0), &r.grid_point(i, 1))?;
        let col = ProjLine3::through(&r.grid_point(0, j), &r.grid_point(1, j))?;
        if row.contains(&q) || col.contains(&q) {
            return Err(Error::Invariant(format!("{} lies on a grid line", self.q)));
        }
        let ks: Vec<u32> = self.witness.iter().map(|w| w.0).collect();
        let want: Vec<u32> = (0..query.m).filter(|&k| k != query.j).collect();
        if ks != want {
            return Err(Error::Invariant("witness does not cover every k ≠ j".into()));
        }
        for &(k, l) in &self.witness {
            let line = ProjLine3::through(&r.grid_point(i, k as i64), &r.grid_point(l as i64, j))?;
            if !line.contains(&q) {
                return Err(Error::Invariant(format!("witness line ({k}, {l}) misses {}", self.q)));
            }
        }
        Ok(())
    }
}

/// All points of concurrence in the plane of row `i` and column `j`, sorted.
pub fn concurrency_points(m: u32, i: u32, j: u32) -> Result<Vec<ConcurrencyPoint>> {
    let query = ConcurrencyQuery::new(m, i, j)?;
    let r = RootPowers::new(m);
    let (mi, i, j) = (m as i64, i as i64, j as i64);
    let row = ProjLine3::through(&r.grid_point(i, 0), &r.grid_point(i, 1))?;
    let col = ProjLine3::through(&r.grid_point(0, j), &r.grid_point(1, j))?;
    // lines[k][l] joins p[i][k] and p[l][j]; l = i would give the row itself
    let lines: Vec<Vec<Option<ProjLine3>>> = (0..mi)
        .map(|k| {
            (0..mi)
                .map(|l| {
                    (k != j && l != i).then(|| ProjLine3::through(&r.grid_point(i, k), &r.grid_point(l, j)).expect("distinct"))
                })
                .collect()
        })
        .collect();
    let ks: Vec<i64> = (0..mi).filter(|&k| k != j).collect();
    let (k1, k2) = (ks[0], ks[1]);
    let candidates: Vec<ProjPoint> = (0..mi)
        .flat_map(|l1| (0..mi).map(move |l2| (l1, l2)))
        .collect::<Vec<_>>()
        .par_iter()
        .filter_map(|&(l1, l2)| {
            let a = lines[k1 as usize][l1 as usize].as_ref()?;
            let b = lines[k2 as usize][l2 as usize].as_ref()?;
            let q = lines_meet(a, b)?;
            (!row.contains(&q) && !col.contains(&q)).then(|| q.normalized())
        })
        .collect();
    let mut unique: Vec<ProjPoint> = Vec::new();
    for q in candidates {
        if !unique.contains(&q) {
            unique.push(q);
        }
    }
    let mut found: Vec<ConcurrencyPoint> = unique
        .into_par_iter()
        .filter_map(|q| {
            let witness = ks
                .iter()
                .map(|&k| {
                    (0..mi)
                        .find(|&l| lines[k as usize][l as usize].as_ref().is_some_and(|line| line.contains(&q)))
                        .map(|l| (k as u32, l as u32))
                })
                .collect::<Option<Vec<_>>>()?;
            Some(ConcurrencyPoint { q, witness })
        })
        .collect();
    found.sort_by(|a, b| a.q.cmp_canonical(&b.q));
    debug_assert!(found.iter().all(|p| p.validate(&query).is_ok()));
    Ok(found)
}

/// The two points predicted by the standard construction:
/// `[-1:0:0:u^(i+j)]` and `[0:-1:u^(i-j):0]`.
pub fn formula_points(m: u32, i: u32, j: u32) -> [ProjPoint; 2] {
    let r = RootPowers::new(m);
    let (i, j) = (i as i64, j as i64);
    let (zero, one) = (CycElem::zero(&r.ctx), CycElem::one(&r.ctx));
    [
        ProjPoint::new(vec![-&one, zero.clone(), zero.clone(), r.u(i + j).clone()]).expect("nonzero"),
        ProjPoint::new(vec![zero.clone(), -&one, r.u(i - j).clone(), zero]).expect("nonzero"),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub m: u32,
    pub ij: (u32, u32),
    pub count: usize,
    pub points: Vec<String>,
    pub formula_points_found: bool,
    pub spot_check_ij: (u32, u32),
    pub spot_check_count: usize,
    /// true when only the two formula points occur, so the standard half grid is maximal
    pub maximal: bool,
    /// false beyond the range where the count is independently established
    pub verified_range: bool,
    #[serde(skip)]
    pub seconds: f64,
}

/// Runs one representative plane per `m`, plus a second plane as a spot check.
pub fn concurrency_scan(m_min: u32, m_max: u32) -> Result<Vec<ScanRow>> {
    if m_min < 3 || m_min > m_max {
        return Err(Error::Input(format!("need 3 ≤ m_min ≤ m_max, got {m_min}..{m_max}")));
    }
    (m_min..=m_max)
        .into_par_iter()
        .map(|m| {
            let start = Instant::now();
            let pts = concurrency_points(m, 0, 0)?;
            let spot = (1, 2 % m);
            let spot_count = concurrency_points(m, spot.0, spot.1)?.len();
            let formula = formula_points(m, 0, 0);
            let formula_points_found = formula.iter().all(|f| pts.iter().any(|p| p.q == *f));
            Ok(ScanRow {
                m,
                ij: (0, 0),
                count: pts.len(),
                points: pts.iter().map(|p| p.q.to_string()).collect(),
                formula_points_found,
                spot_check_ij: spot,
                spot_check_count: spot_count,
                maximal: pts.len() == 2 && formula_points_found,
                verified_range: m <= VERIFIED_UP_TO,
                seconds: start.elapsed().as_secs_f64(),
            })
        })
        .collect()
}

/// Plain-text table, one row per `m`. Timings are left out so that reruns
/// print identical bytes.
pub fn format_scan(rows: &[ScanRow]) -> String {
    let mut s = String::from("m   count  spot  points\n");
    for r in rows {
        s.push_str(&format!(
            "{:<3} {:<6} {:<5} {}{}\n",
            r.m,
            r.count,
            r.spot_check_count,
            r.points.join(" "),
            if r.verified_range { "" } else { "  (observational)" }
        ));
    }
    s
}

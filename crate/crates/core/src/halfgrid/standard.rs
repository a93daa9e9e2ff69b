use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::config::Config;
use crate::error::{Error, Result};
use crate::exactalg::{lcm, CycElem, FieldContext};
use crate::projgeom::{Plane3, ProjLine3, ProjPoint};

/// Field and `u = ζ_m` for the standard construction.
pub fn standard_field(m: u32) -> (Arc<FieldContext>, u32) {
    let n = lcm(m, 4);
    (FieldContext::get(n), n / m)
}

/// `u^k` for `u = ζ_m` inside conductor `lcm(m, 4)`.
pub fn u_pow(m: u32, k: i64) -> CycElem {
    let (ctx, step) = standard_field(m);
    CycElem::zeta_pow(&ctx, k.rem_euclid(m as i64) * step as i64)
}

fn check_m(m: u32) -> Result<()> {
    if m < 3 {
        return Err(Error::Input(format!("the standard construction needs m >= 3, got {m}")));
    }
    Ok(())
}

fn point(coords: Vec<CycElem>) -> ProjPoint {
    ProjPoint::new(coords).expect("nonzero point")
}

fn plane(coords: Vec<CycElem>) -> Plane3 {
    Plane3::new(coords).expect("nonzero plane")
}

/// `p_ij = [1 : u^j : u^i : u^(i+j)]`.
pub fn grid_point(m: u32, i: i64, j: i64) -> ProjPoint {
    let (ctx, _) = standard_field(m);
    point(vec![CycElem::one(&ctx), u_pow(m, j), u_pow(m, i), u_pow(m, i + j)])
}

/// `M_i : w - u^i y = u^i x - z = 0`.
pub fn grid_row_line(m: u32, i: i64) -> ProjLine3 {
    let (ctx, _) = standard_field(m);
    let (z, one, u) = (CycElem::zero(&ctx), CycElem::one(&ctx), u_pow(m, i));
    let h1 = plane(vec![z.clone(), -&u, z.clone(), one.clone()]);
    let h2 = plane(vec![u, z.clone(), -&one, z]);
    ProjLine3::meet_planes(&h1, &h2).expect("distinct planes")
}

/// `L_j : w - u^j z = u^j x - y = 0`.
pub fn grid_column_line(m: u32, j: i64) -> ProjLine3 {
    let (ctx, _) = standard_field(m);
    let (z, one, u) = (CycElem::zero(&ctx), CycElem::one(&ctx), u_pow(m, j));
    let h1 = plane(vec![z.clone(), z.clone(), -&u, one.clone()]);
    let h2 = plane(vec![u, -&one, z.clone(), z]);
    ProjLine3::meet_planes(&h1, &h2).expect("distinct planes")
}

fn coordinate_line(ctx: &Arc<FieldContext>, a: usize, b: usize) -> ProjLine3 {
    let mut h1 = vec![CycElem::zero(ctx); 4];
    let mut h2 = h1.clone();
    h1[a] = CycElem::one(ctx);
    h2[b] = CycElem::one(ctx);
    ProjLine3::meet_planes(&plane(h1), &plane(h2)).expect("distinct planes")
}

/// `T1 = {x = y = 0}` and `T2 = {z = w = 0}`.
pub fn transversals(m: u32) -> [ProjLine3; 2] {
    let (ctx, _) = standard_field(m);
    [coordinate_line(&ctx, 0, 1), coordinate_line(&ctx, 2, 3)]
}

/// The `m²` orbit points with lines `M[i]`, `L[j]`, `T1`, `T2`.
pub fn standard_grid(m: u32) -> Result<Config> {
    check_m(m)?;
    let (ctx, _) = standard_field(m);
    let mi = m as i64;
    let mut points = Vec::new();
    for i in 0..mi {
        for j in 0..mi {
            points.push((format!("p[{i}][{j}]"), grid_point(m, i, j)));
        }
    }
    let mut lines = Vec::new();
    for i in 0..mi {
        lines.push((format!("M[{i}]"), grid_row_line(m, i)));
    }
    for j in 0..mi {
        lines.push((format!("L[{j}]"), grid_column_line(m, j)));
    }
    let [t1, t2] = transversals(m);
    lines.push(("T1".into(), t1));
    lines.push(("T2".into(), t2));
    Config::new(ctx.conductor(), points, lines)
}

/// `Y1 = {[-1:0:0:u^j]}` and `Y2 = {[0:-1:u^j:0]}` for `0 <= j < m`.
pub fn y_sets(m: u32) -> Result<(Vec<ProjPoint>, Vec<ProjPoint>)> {
    check_m(m)?;
    let (ctx, _) = standard_field(m);
    let (z, neg) = (CycElem::zero(&ctx), CycElem::from_i64(&ctx, -1));
    let y1 = (0..m as i64)
        .map(|j| point(vec![neg.clone(), z.clone(), z.clone(), u_pow(m, j)]))
        .collect();
    let y2 = (0..m as i64)
        .map(|j| point(vec![z.clone(), neg.clone(), u_pow(m, j), z.clone()]))
        .collect();
    Ok((y1, y2))
}

/// Line carrying `Y1` (`y = z = 0`) and `Y2` (`x = w = 0`).
pub fn y_lines(m: u32) -> [ProjLine3; 2] {
    let (ctx, _) = standard_field(m);
    [coordinate_line(&ctx, 1, 2), coordinate_line(&ctx, 0, 3)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HalfGridVariant {
    Y1,
    Y2,
    Full,
}

impl std::str::FromStr for HalfGridVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<HalfGridVariant> {
        match s.to_ascii_lowercase().as_str() {
            "y1" => Ok(HalfGridVariant::Y1),
            "y2" => Ok(HalfGridVariant::Y2),
            "full" => Ok(HalfGridVariant::Full),
            _ => Err(Error::Input(format!("unknown variant {s:?} (expected y1, y2 or full)"))),
        }
    }
}

/// The grid together with one or both Y-sets; declared lines are the
/// `L[j]`, the Y-lines and the transversals.
pub fn standard_halfgrid(m: u32, variant: HalfGridVariant) -> Result<Config> {
    check_m(m)?;
    let grid = standard_grid(m)?;
    let (y1, y2) = y_sets(m)?;
    let [l1, l2] = y_lines(m);
    let mut points: Vec<(String, ProjPoint)> = grid
        .points()
        .iter()
        .map(|p| (p.label.clone(), p.coords.clone()))
        .collect();
    let mut lines: Vec<(String, ProjLine3)> = grid
        .lines()
        .iter()
        .filter(|l| !l.label.starts_with('M'))
        .map(|l| (l.label.clone(), l.pluecker.clone()))
        .collect();
    if matches!(variant, HalfGridVariant::Y1 | HalfGridVariant::Full) {
        points.extend(y1.into_iter().enumerate().map(|(j, p)| (format!("Y1[{j}]"), p)));
        lines.push(("Y1".into(), l1));
    }
    if matches!(variant, HalfGridVariant::Y2 | HalfGridVariant::Full) {
        points.extend(y2.into_iter().enumerate().map(|(j, p)| (format!("Y2[{j}]"), p)));
        lines.push(("Y2".into(), l2));
    }
    let mut c = Config::new(grid.conductor(), points, lines)?;
    if variant == HalfGridVariant::Full && m % 2 == 1 {
        c.caveat = Some(format!("m = {m} is odd: the [m,m+2] half-grid property is only claimed for even m"));
    }
    Ok(c)
}

/// The 24 points of the F4 root system up to sign.
pub fn f4_root_model() -> Config {
    let ctx = FieldContext::get(1);
    let mut coords: Vec<[i64; 4]> = Vec::new();
    for i in 0..4 {
        let mut e = [0; 4];
        e[i] = 1;
        coords.push(e);
    }
    for i in 0..4 {
        for j in i + 1..4 {
            for s in [1, -1] {
                let mut e = [0; 4];
                e[i] = 1;
                e[j] = s;
                coords.push(e);
            }
        }
    }
    for a in [1, -1] {
        for b in [1, -1] {
            for c in [1, -1] {
                coords.push([1, a, b, c]);
            }
        }
    }
    let points = coords
        .iter()
        .enumerate()
        .map(|(k, c)| (format!("F[{k}]"), ProjPoint::from_ints(&ctx, c)))
        .collect();
    Config::new(1, points, Vec::new()).expect("distinct roots")
}

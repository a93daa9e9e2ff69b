use super::PermS4;
use crate::error::{Error, Result};
use crate::halfgrid::Config;
use crate::projgeom::{lines_meet, quadric_through_three_skew_lines, transversal_through_point, ProjLine3, ProjPoint};

fn grid_point(grid: &Config, i: usize, j: usize) -> Result<&ProjPoint> {
    grid.point(&format!("P[{i}][{j}]"))
        .ok_or_else(|| Error::Input(format!("grid has no point P[{i}][{j}]")))
}

fn grid_line(grid: &Config, i: usize) -> Result<ProjLine3> {
    ProjLine3::through(grid_point(grid, i, 1)?, grid_point(grid, i, 2)?)
}

/// Reads off the permutation that `l` induces between the points of grid
/// line `i` and those of the first grid line: `σ(j) = k` when the
/// transversal of the first line and `l` through `P[i][j]` passes through `P[1][k]`.
pub fn sigma_from_external_line(grid: &Config, i: usize, l: &ProjLine3) -> Result<PermS4> {
    if !(2..=4).contains(&i) {
        return Err(Error::Input(format!("line index must be 2, 3 or 4, got {i}")));
    }
    let first = grid_line(grid, 1)?;
    let target = grid_line(grid, i)?;
    if !l.is_skew_to(&first) || !l.is_skew_to(&target) {
        return Err(Error::NotSkew);
    }
    let quadric = quadric_through_three_skew_lines(&first, &grid_line(grid, 2)?, &grid_line(grid, 3)?)?;
    if quadric.contains_line(l) {
        return Err(Error::NotHalfGrid("external line lies on the grid quadric".into()));
    }
    let mut images = [0u8; 4];
    for (j, slot) in images.iter_mut().enumerate() {
        let p = grid_point(grid, i, j + 1)?;
        let t = transversal_through_point(p, &first, l)?;
        let hit = lines_meet(&t, &first).ok_or(Error::Invariant("transversal misses the first line".into()))?;
        let k = (1..=4)
            .find(|&k| grid_point(grid, 1, k).map(|q| *q == hit).unwrap_or(false))
            .ok_or_else(|| {
                Error::NotHalfGrid(format!("transversal through P[{i}][{}] meets the first line off the grid", j + 1))
            })?;
        *slot = k as u8;
    }
    PermS4::new(images).map_err(|_| Error::NotHalfGrid(format!("induced map {images:?} is not a bijection")))
}

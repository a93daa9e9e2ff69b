use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::config::Config;
use super::structure::incidence_lines;
use crate::error::Result;
use crate::exactalg::{lcm, linalg, CycElem, Matrix};
use crate::projgeom::{apply_transform, transform_from_point_correspondence, Plane3, ProjPoint};

/// A projective transformation carrying one configuration onto another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivCert {
    pub matrix: Matrix,
    /// `(label in A, label in B)` for every point of A.
    pub point_map: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Equivalence {
    Equivalent(EquivCert),
    NotEquivalent,
}

/// Incidence data used to prune candidate frames.
struct Profile {
    points: Vec<ProjPoint>,
    /// sorted sizes of the ≥3-point lines through each point
    point_profile: Vec<Vec<usize>>,
    /// number of points on the line through a pair (2 when no third point)
    pair_size: Vec<Vec<usize>>,
    lookup: HashMap<Vec<CycElem>, usize>,
}

impl Profile {
    fn new(z: &Config) -> Profile {
        let n = z.len();
        let index: HashMap<&str, usize> = z.points().iter().enumerate().map(|(i, p)| (p.label.as_str(), i)).collect();
        let mut point_profile = vec![Vec::new(); n];
        let mut pair_size = vec![vec![2usize; n]; n];
        for l in incidence_lines(z, 3) {
            let idx: Vec<usize> = l.labels.iter().map(|s| index[s.as_str()]).collect();
            for &i in &idx {
                point_profile[i].push(idx.len());
                for &j in &idx {
                    pair_size[i][j] = idx.len();
                }
            }
        }
        for p in point_profile.iter_mut() {
            p.sort_unstable();
        }
        let points: Vec<ProjPoint> = z.points().iter().map(|p| p.coords.normalized()).collect();
        let lookup = points.iter().enumerate().map(|(i, p)| (p.coords().to_vec(), i)).collect();
        Profile {
            points,
            point_profile,
            pair_size,
            lookup,
        }
    }

    fn plane_count(&self, idx: [usize; 3]) -> Option<usize> {
        let h = Plane3::through_points(&self.points[idx[0]], &self.points[idx[1]], &self.points[idx[2]]).ok()?;
        Some(self.points.iter().filter(|p| h.contains(p)).count())
    }
}

/// Picks five points of `a` in general position, preferring rare profiles.
fn choose_frame(prof: &Profile) -> Option<[usize; 5]> {
    let n = prof.points.len();
    let mut freq: HashMap<&Vec<usize>, usize> = HashMap::new();
    for p in &prof.point_profile {
        *freq.entry(p).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (freq[&prof.point_profile[i]], i));
    let mut frame: Vec<usize> = Vec::new();
    fn general(prof: &Profile, idx: &[usize]) -> bool {
        let pts: Vec<ProjPoint> = idx.iter().map(|&i| prof.points[i].clone()).collect();
        match pts.len() {
            0 | 1 => true,
            2 => pts[0] != pts[1],
            3 => Plane3::through_points(&pts[0], &pts[1], &pts[2]).is_ok(),
            _ => {
                // no four coplanar
                let k = pts.len();
                let last = &pts[k - 1];
                (0..k - 1).all(|a| {
                    (a + 1..k - 1).all(|b| {
                        (b + 1..k - 1).all(|c| match Plane3::through_points(&pts[a], &pts[b], &pts[c]) {
                            Ok(h) => !h.contains(last),
                            Err(_) => false,
                        })
                    })
                })
            }
        }
    }
    fn go(prof: &Profile, order: &[usize], frame: &mut Vec<usize>) -> bool {
        if frame.len() == 5 {
            return true;
        }
        for &i in order {
            if frame.contains(&i) {
                continue;
            }
            frame.push(i);
            if general(prof, frame) && go(prof, order, frame) {
                return true;
            }
            frame.pop();
        }
        false
    }
    go(prof, &order, &mut frame).then(|| frame.try_into().unwrap())
}

/// Searches for a projective transformation mapping `a` onto `b` setwise.
pub fn find_projective_equivalence(a: &Config, b: &Config) -> Result<Equivalence> {
    if a.len() != b.len() || a.len() < 5 {
        return Ok(Equivalence::NotEquivalent);
    }
    let n = lcm(a.conductor(), b.conductor());
    let (a, b) = (a.embed(n)?, b.embed(n)?);
    let pa = Profile::new(&a);
    let pb = Profile::new(&b);
    let mut sa: Vec<&Vec<usize>> = pa.point_profile.iter().collect();
    let mut sb: Vec<&Vec<usize>> = pb.point_profile.iter().collect();
    sa.sort();
    sb.sort();
    if sa != sb {
        return Ok(Equivalence::NotEquivalent);
    }
    let Some(frame) = choose_frame(&pa) else {
        return Ok(Equivalence::NotEquivalent);
    };
    let src: Vec<ProjPoint> = frame.iter().map(|&i| pa.points[i].clone()).collect();
    let a_planes: HashMap<[usize; 3], usize> = triples(5)
        .into_iter()
        .map(|[x, y, z]| ([x, y, z], pa.plane_count([frame[x], frame[y], frame[z]]).unwrap_or(0)))
        .collect();
    let first: Vec<usize> = (0..b.len())
        .filter(|&j| pb.point_profile[j] == pa.point_profile[frame[0]])
        .collect();
    let found = first.par_iter().find_map_first(|&j0| {
        let mut img = vec![j0];
        extend(&pa, &pb, &frame, &a_planes, &src, &mut img)
    });
    Ok(match found {
        Some(matrix_and_map) => {
            let (matrix, map) = matrix_and_map;
            Equivalence::Equivalent(EquivCert {
                matrix,
                point_map: map
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| (a.points()[i].label.clone(), b.points()[j].label.clone()))
                    .collect(),
            })
        }
        None => Equivalence::NotEquivalent,
    })
}

fn triples(k: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for x in 0..k {
        for y in x + 1..k {
            for z in y + 1..k {
                out.push([x, y, z]);
            }
        }
    }
    out
}

fn extend(
    pa: &Profile,
    pb: &Profile,
    frame: &[usize; 5],
    a_planes: &HashMap<[usize; 3], usize>,
    src: &[ProjPoint],
    img: &mut Vec<usize>,
) -> Option<(Matrix, Vec<usize>)> {
    let k = img.len();
    if k == 5 {
        let dst: Vec<ProjPoint> = img.iter().map(|&j| pb.points[j].clone()).collect();
        let t = transform_from_point_correspondence(src, &dst).ok()?;
        let map = point_map(pa, pb, &t)?;
        return Some((t, map));
    }
    for j in 0..pb.points.len() {
        if img.contains(&j) || pb.point_profile[j] != pa.point_profile[frame[k]] {
            continue;
        }
        let pairs_ok = (0..k).all(|s| pb.pair_size[img[s]][j] == pa.pair_size[frame[s]][frame[k]]);
        if !pairs_ok {
            continue;
        }
        let planes_ok = (0..k).all(|x| {
            (x + 1..k).all(|y| pb.plane_count([img[x], img[y], j]) == Some(a_planes[&[x, y, k]]))
        });
        if !planes_ok {
            continue;
        }
        img.push(j);
        if let Some(found) = extend(pa, pb, frame, a_planes, src, img) {
            return Some(found);
        }
        img.pop();
    }
    None
}

/// Images of all points of A under `t`, as indices into B; `None` unless a bijection.
fn point_map(pa: &Profile, pb: &Profile, t: &Matrix) -> Option<Vec<usize>> {
    let mut used = vec![false; pb.points.len()];
    let mut map = Vec::with_capacity(pa.points.len());
    for p in &pa.points {
        let q = apply_transform(t, p).ok()?.normalized();
        let &j = pb.lookup.get(q.coords())?;
        if used[j] {
            return None;
        }
        used[j] = true;
        map.push(j);
    }
    Some(map)
}

impl EquivCert {
    /// Re-applies the matrix and checks the claimed label bijection.
    pub fn validate(&self, a: &Config, b: &Config) -> Result<()> {
        let n = lcm(a.conductor(), b.conductor());
        let (a, b) = (a.embed(n)?, b.embed(n)?);
        let ctx = a.context().clone();
        let matrix: Matrix = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|c| c.embed(n)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        if matrix.len() != 4 || matrix.iter().any(|r| r.len() != 4) {
            return Err(crate::Error::Invariant("equivalence matrix must be 4x4".into()));
        }
        if linalg::det(&matrix, &ctx)?.is_zero() {
            return Err(crate::Error::Invariant("singular equivalence matrix".into()));
        }
        if self.point_map.len() != a.len() || a.len() != b.len() {
            return Err(crate::Error::Invariant("point map is not a bijection".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for (la, lb) in &self.point_map {
            let p = a.point(la).ok_or_else(|| crate::Error::Invariant(format!("unknown label {la}")))?;
            let q = b.point(lb).ok_or_else(|| crate::Error::Invariant(format!("unknown label {lb}")))?;
            if apply_transform(&matrix, p)? != *q || !seen.insert(lb) {
                return Err(crate::Error::Invariant(format!("{la} does not map to {lb}")));
            }
        }
        Ok(())
    }
}

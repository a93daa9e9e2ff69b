//! Permutations of four points on a line, the Möbius maps they induce, their
//! fixed points, and the admissibility filters on candidate permutation sets.

mod external;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{linalg, sqrt_in_field, CycElem, FieldContext, Matrix, SquareTest};
use crate::projgeom::{cross_ratio, ProjPoint};

pub use external::sigma_from_external_line;

/// A permutation of {1,2,3,4} in one-line notation: `images[k-1] = σ(k)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct PermS4 {
    images: [u8; 4],
}

impl PermS4 {
    pub fn new(images: [u8; 4]) -> Result<PermS4> {
        let mut seen = [false; 4];
        for &v in &images {
            if !(1..=4).contains(&v) || seen[v as usize - 1] {
                return Err(Error::Input(format!("{images:?} is not a permutation of 1..4")));
            }
            seen[v as usize - 1] = true;
        }
        Ok(PermS4 { images })
    }

    pub fn identity() -> PermS4 {
        PermS4 { images: [1, 2, 3, 4] }
    }

    /// All 24 permutations in lexicographic order.
    pub fn all() -> Vec<PermS4> {
        let mut out = Vec::with_capacity(24);
        for a in 1..=4u8 {
            for b in 1..=4u8 {
                for c in 1..=4u8 {
                    for d in 1..=4u8 {
                        if let Ok(p) = PermS4::new([a, b, c, d]) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn images(&self) -> [u8; 4] {
        self.images
    }

    /// `σ(k)` for `k` in 1..=4.
    pub fn apply(&self, k: usize) -> usize {
        self.images[k - 1] as usize
    }

    /// `(self ∘ other)(k) = self(other(k))`.
    pub fn compose(&self, other: &PermS4) -> PermS4 {
        PermS4 {
            images: other.images.map(|k| self.images[k as usize - 1]),
        }
    }

    pub fn inverse(&self) -> PermS4 {
        let mut images = [0u8; 4];
        for (k, &v) in self.images.iter().enumerate() {
            images[v as usize - 1] = k as u8 + 1;
        }
        PermS4 { images }
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (1..=4).filter(|&k| self.apply(k) == k).collect()
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self) == PermS4::identity()
    }

    pub fn order(&self) -> usize {
        let mut p = *self;
        let mut n = 1;
        while p != PermS4::identity() {
            p = p.compose(self);
            n += 1;
        }
        n
    }
}

impl TryFrom<Vec<u8>> for PermS4 {
    type Error = Error;
    fn try_from(v: Vec<u8>) -> Result<PermS4> {
        let arr: [u8; 4] = v
            .try_into()
            .map_err(|v: Vec<u8>| Error::Input(format!("a permutation has 4 entries, got {}", v.len())))?;
        PermS4::new(arr)
    }
}

impl From<PermS4> for Vec<u8> {
    fn from(p: PermS4) -> Vec<u8> {
        p.images.to_vec()
    }
}

impl std::str::FromStr for PermS4 {
    type Err = Error;
    /// Accepts `(2,1,4,3)`, `2,1,4,3` or `2143`.
    fn from_str(s: &str) -> Result<PermS4> {
        let digits: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | ',' | ' '))
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Input(format!("cannot parse permutation {s:?}")))?;
        PermS4::try_from(digits)
    }
}

impl fmt::Display for PermS4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.images;
        write!(f, "({a},{b},{c},{d})")
    }
}

impl fmt::Debug for PermS4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An automorphism of P¹ acting on column vectors `[x:y]`.
#[derive(Clone)]
pub struct Mobius {
    mat: [[CycElem; 2]; 2],
}

impl Mobius {
    pub fn new(mat: [[CycElem; 2]; 2]) -> Result<Mobius> {
        let flat = crate::projgeom::ProjPoint::new(mat.iter().flatten().cloned().collect())
            .map_err(|_| Error::Input("zero matrix".into()))?;
        let c = flat.coords();
        let mat = [[c[0].clone(), c[1].clone()], [c[2].clone(), c[3].clone()]];
        let m = Mobius { mat };
        if m.det().is_zero() {
            return Err(Error::Input("singular Möbius matrix".into()));
        }
        Ok(m)
    }

    pub fn from_ints(ctx: &Arc<FieldContext>, m: [[i64; 2]; 2]) -> Mobius {
        Mobius::new(m.map(|r| r.map(|x| CycElem::from_i64(ctx, x)))).expect("invertible integer matrix")
    }

    pub fn mat(&self) -> &[[CycElem; 2]; 2] {
        &self.mat
    }

    pub fn det(&self) -> CycElem {
        let m = &self.mat;
        &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        if p.dim() != 1 {
            return Err(Error::Input("Möbius maps act on P^1".into()));
        }
        let n = crate::exactalg::lcm(p.conductor(), self.mat[0][0].conductor());
        let p = p.embed(n)?;
        let m = self.embed(n)?;
        let c = p.coords();
        let img = m.mat.iter().map(|r| &(&r[0] * &c[0]) + &(&r[1] * &c[1])).collect();
        Ok(ProjPoint::new(img).expect("invertible map"))
    }

    fn embed(&self, n: u32) -> Result<Mobius> {
        let mut out = self.mat.clone();
        for r in out.iter_mut() {
            for c in r.iter_mut() {
                *c = c.embed(n)?;
            }
        }
        Ok(Mobius { mat: out })
    }

    /// `(b, a-d, -c)`: coefficients of `b t² + (a-d) t - c` whose roots `[1:t]` are the fixed points.
    pub fn fixed_point_quadratic(&self) -> [CycElem; 3] {
        let [[a, b], [c, d]] = &self.mat;
        [b.clone(), a - d, -c]
    }

    pub fn is_identity(&self) -> bool {
        let [[a, b], [c, d]] = &self.mat;
        b.is_zero() && c.is_zero() && a == d
    }
}

impl PartialEq for Mobius {
    fn eq(&self, other: &Mobius) -> bool {
        let flat = |m: &Mobius| ProjPoint::new(m.mat.iter().flatten().cloned().collect()).expect("nonzero");
        flat(self) == flat(other)
    }
}

impl Eq for Mobius {}

impl fmt::Debug for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.mat;
        write!(f, "(({a}, {b}), ({c}, {d}))")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FixedPointReport {
    /// Both fixed points lie in the working field (equal when tangent).
    InField([ProjPoint; 2]),
    /// Fixed points `[1 : center ± a]` with `a² = radicand`, `a` not found in the field.
    Symbolic { center: CycElem, radicand: CycElem },
}

/// All σ with the same cross ratio on `(P_σ(1), …, P_σ(4))` as on `(P_1, …, P_4)`.
pub fn stabilizer_permutations(pts: &[ProjPoint; 4]) -> Result<Vec<PermS4>> {
    let base = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3])?.value;
    Ok(PermS4::all()
        .into_iter()
        .filter(|s| {
            let p = |k| &pts[s.apply(k) - 1];
            cross_ratio(p(1), p(2), p(3), p(4)).map(|c| c.value == base).unwrap_or(false)
        })
        .collect())
}

/// Matrix sending `[1:0], [0:1], [1:1]` to the three given points.
fn frame2(p: &[&ProjPoint; 3]) -> Result<Matrix> {
    let s: Matrix = (0..2).map(|i| vec![p[0].coords()[i].clone(), p[1].coords()[i].clone()]).collect();
    let lambda = linalg::solve(&s, p[2].coords())?.ok_or(Error::CoincidentPoints)?;
    if lambda.iter().any(CycElem::is_zero) {
        return Err(Error::CoincidentPoints);
    }
    Ok(s.into_iter()
        .map(|r| r.iter().zip(&lambda).map(|(x, l)| x * l).collect())
        .collect())
}

/// The unique Möbius map with `F(P_i) = P_σ(i)`.
pub fn mobius_from_permutation(pts: &[ProjPoint; 4], sigma: &PermS4) -> Result<Mobius> {
    if pts.iter().any(|p| p.dim() != 1) {
        return Err(Error::Input("Möbius maps act on P^1".into()));
    }
    let n = pts.iter().fold(1, |acc, p| crate::exactalg::lcm(acc, p.conductor()));
    let ctx = FieldContext::get(n);
    let pts: Vec<ProjPoint> = pts.iter().map(|p| p.embed(n)).collect::<Result<_>>()?;
    let src = frame2(&[&pts[0], &pts[1], &pts[2]])?;
    let img = |k: usize| &pts[sigma.apply(k) - 1];
    let dst = frame2(&[img(1), img(2), img(3)])?;
    let inv = linalg::inverse(&src, &ctx)?.ok_or(Error::CoincidentPoints)?;
    let m = linalg::mat_mul(&dst, &inv, &ctx);
    let f = Mobius::new([[m[0][0].clone(), m[0][1].clone()], [m[1][0].clone(), m[1][1].clone()]])?;
    if f.apply(&pts[3])? != *img(4) {
        return Err(Error::NotCrossRatioPreserving(sigma.to_string()));
    }
    Ok(f)
}

/// Fixed points of a non-identity Möbius map.
pub fn mobius_fixed_points(f: &Mobius) -> Result<FixedPointReport> {
    if f.is_identity() {
        return Err(Error::IdentityMap);
    }
    let ctx = f.mat[0][0].context().clone();
    let [b, amd, minus_c] = f.fixed_point_quadratic();
    let point = |x: CycElem, y: CycElem| ProjPoint::new(vec![x, y]).expect("nonzero");
    if b.is_zero() {
        // one root at t = ∞, the other at (a-d) t = c
        let inf = point(CycElem::zero(&ctx), CycElem::one(&ctx));
        let other = if amd.is_zero() { inf.clone() } else { point(amd, -&minus_c) };
        return Ok(FixedPointReport::InField([inf, other]));
    }
    let two_b = b.scale_i64(2);
    let center = &(-&amd) / &two_b;
    let radicand = &(&(&amd * &amd) + &(&b * &minus_c).scale_i64(-4)) / &(&two_b * &two_b);
    match sqrt_in_field(&radicand) {
        SquareTest::Square(a) => {
            let one = CycElem::one(&ctx);
            Ok(FixedPointReport::InField([
                point(one.clone(), &center + &a),
                point(one, &center - &a),
            ]))
        }
        SquareTest::NonSquare | SquareTest::Undecided => Ok(FixedPointReport::Symbolic { center, radicand }),
    }
}

/// The four normalized points `[1:0], [0:1], [1:1], [1:q]`.
pub fn normalized_quadruple(q: &CycElem) -> [ProjPoint; 4] {
    let ctx = q.context().clone();
    let (zero, one) = (CycElem::zero(&ctx), CycElem::one(&ctx));
    [
        ProjPoint::new(vec![one.clone(), zero.clone()]).unwrap(),
        ProjPoint::new(vec![zero, one.clone()]).unwrap(),
        ProjPoint::new(vec![one.clone(), one.clone()]).unwrap(),
        ProjPoint::new(vec![one, q.clone()]).unwrap(),
    ]
}

/// A group of permutations sharing one fixed-point pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibleSet {
    pub perms: Vec<PermS4>,
    pub fixed_points: FixedPointReport,
}

fn same_up_to_scalar(a: &[CycElem; 3], b: &[CycElem; 3]) -> bool {
    let k = a.iter().position(|c| !c.is_zero()).expect("nonzero quadratic");
    !b[k].is_zero() && a.iter().zip(b).all(|(x, y)| x * &b[k] == y * &a[k])
}

/// Why a fixed-point group was kept or dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupVerdict {
    Kept,
    /// no other permutation shares its fixed points
    Alone,
    /// two members agree on some k
    ColumnClash,
    /// three or more members, all involutions
    AllInvolutions,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointGroup {
    pub perms: Vec<PermS4>,
    pub fixed_points: FixedPointReport,
    pub verdict: GroupVerdict,
}

/// Every step of the admissibility search for one parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibleReport {
    pub stabilizer: Vec<PermS4>,
    /// stabilizer members with a fixed point, excluded first
    pub with_fixed_points: Vec<PermS4>,
    pub groups: Vec<FixedPointGroup>,
}

impl AdmissibleReport {
    pub fn admissible(&self) -> Vec<AdmissibleSet> {
        self.groups
            .iter()
            .filter(|g| g.verdict == GroupVerdict::Kept)
            .map(|g| AdmissibleSet {
                perms: g.perms.clone(),
                fixed_points: g.fixed_points.clone(),
            })
            .collect()
    }
}

pub fn admissible_report(q: &CycElem) -> Result<AdmissibleReport> {
    let ctx = q.context().clone();
    if q.is_zero() || *q == CycElem::one(&ctx) {
        return Err(Error::DegenerateParameter(format!("q = {q} gives coincident points")));
    }
    let pts = normalized_quadruple(q);
    let stabilizer = stabilizer_permutations(&pts)?;
    let mut with_fixed_points = Vec::new();
    let mut raw: Vec<([CycElem; 3], Mobius, Vec<PermS4>)> = Vec::new();
    for s in stabilizer.iter().copied() {
        if !s.fixed_points().is_empty() {
            with_fixed_points.push(s);
            continue;
        }
        let f = mobius_from_permutation(&pts, &s)?;
        let quad = f.fixed_point_quadratic();
        match raw.iter_mut().find(|(g, ..)| same_up_to_scalar(g, &quad)) {
            Some(g) => g.2.push(s),
            None => raw.push((quad, f, vec![s])),
        }
    }
    let mut groups = Vec::new();
    for (_, f, mut perms) in raw {
        perms.sort();
        let columns_distinct = perms
            .iter()
            .enumerate()
            .all(|(i, a)| perms[i + 1..].iter().all(|b| (1..=4).all(|k| a.apply(k) != b.apply(k))));
        let verdict = if perms.len() < 2 {
            GroupVerdict::Alone
        } else if !columns_distinct {
            GroupVerdict::ColumnClash
        } else if perms.len() >= 3 && perms.iter().all(PermS4::is_involution) {
            GroupVerdict::AllInvolutions
        } else {
            GroupVerdict::Kept
        };
        groups.push(FixedPointGroup {
            perms,
            fixed_points: mobius_fixed_points(&f)?,
            verdict,
        });
    }
    groups.sort_by(|a, b| a.perms.cmp(&b.perms));
    Ok(AdmissibleReport {
        stabilizer,
        with_fixed_points,
        groups,
    })
}

/// Candidate permutation sets for the parameter `q`, grouped by shared fixed points.
pub fn admissible_sigma_sets(q: &CycElem) -> Result<Vec<AdmissibleSet>> {
    Ok(admissible_report(q)?.admissible())
}

#[cfg(test)]
mod tests;

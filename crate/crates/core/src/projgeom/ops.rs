use super::line::{Plane3, ProjLine3, Quadric3, QUADRIC_MONOMIALS};
use super::point::{common_field, ProjPoint};
use crate::error::{Error, Result};
use crate::exactalg::{linalg, lcm, rat_frac, CycElem, FieldContext, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CrossRatioKind {
    General,
    Harmonic,
    Anharmonic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossRatioClass {
    pub value: CycElem,
    pub kind: CrossRatioKind,
}

impl CrossRatioClass {
    pub fn classify(value: CycElem) -> CrossRatioClass {
        let ctx = value.context().clone();
        let harmonic = [rat_frac(-1, 1), rat_frac(1, 2), rat_frac(2, 1)]
            .iter()
            .any(|h| value == CycElem::from_rat(&ctx, h));
        let kind = if harmonic {
            CrossRatioKind::Harmonic
        } else if (&(&value * &value) - &value + CycElem::one(&ctx)).is_zero() {
            CrossRatioKind::Anharmonic
        } else {
            CrossRatioKind::General
        };
        CrossRatioClass { value, kind }
    }
}

/// Coordinates `(k0, k1)` of `p` in the basis `a, b` of the line they span,
/// or `None` when `p` is off that line.
pub fn coords_in_basis(p: &ProjPoint, a: &ProjPoint, b: &ProjPoint) -> Option<(CycElem, CycElem)> {
    let v = common_field(
        p.coords()
            .iter()
            .chain(a.coords())
            .chain(b.coords())
            .cloned()
            .collect(),
    );
    let n = p.coords().len();
    let (p, a, b) = (&v[..n], &v[n..2 * n], &v[2 * n..]);
    let minor = |x: &[CycElem], y: &[CycElem], i: usize, j: usize| &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
    let mut best = None;
    'outer: for i in 0..n {
        for j in i + 1..n {
            let d = minor(a, b, i, j);
            if !d.is_zero() {
                best = Some((i, j, d));
                break 'outer;
            }
        }
    }
    let (i, j, d) = best?;
    let dinv = d.inv().ok()?;
    let k0 = &minor(p, b, i, j) * &dinv;
    let k1 = &minor(a, p, i, j) * &dinv;
    let ok = (0..n).all(|t| p[t] == &(&k0 * &a[t]) + &(&k1 * &b[t]));
    ok.then_some((k0, k1))
}

/// Cross ratio of four distinct points of P¹, or four distinct collinear points of P³.
pub fn cross_ratio(p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint, p4: &ProjPoint) -> Result<CrossRatioClass> {
    let pts = [p1, p2, p3, p4];
    let dim = p1.dim();
    if pts.iter().any(|p| p.dim() != dim) {
        return Err(Error::Input("mixed dimensions".into()));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i] == pts[j] {
                return Err(Error::CoincidentPoints);
            }
        }
    }
    let pairs: Vec<(CycElem, CycElem)> = if dim == 1 {
        let v = common_field(pts.iter().flat_map(|p| p.coords().to_vec()).collect());
        v.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect()
    } else {
        let ctx = FieldContext::get(pts.iter().fold(1, |acc, p| lcm(acc, p.conductor())));
        let mut out = vec![
            (CycElem::one(&ctx), CycElem::zero(&ctx)),
            (CycElem::zero(&ctx), CycElem::one(&ctx)),
        ];
        for p in [p3, p4] {
            out.push(coords_in_basis(p, p1, p2).ok_or(Error::NotCollinear)?);
        }
        out
    };
    let det = |i: usize, j: usize| &(&pairs[i].0 * &pairs[j].1) - &(&pairs[i].1 * &pairs[j].0);
    let num = &det(0, 2) * &det(1, 3);
    let den = &det(0, 3) * &det(1, 2);
    Ok(CrossRatioClass::classify(&num / &den))
}

pub fn line_through(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine3> {
    ProjLine3::through(p, q)
}

pub fn plane_through(l: &ProjLine3, p: &ProjPoint) -> Result<Plane3> {
    l.plane_through(p)
}

pub fn meet_line_plane(l: &ProjLine3, h: &Plane3) -> Result<ProjPoint> {
    l.meet_plane(h)
}

pub fn meet_planes(h1: &Plane3, h2: &Plane3) -> Result<ProjLine3> {
    ProjLine3::meet_planes(h1, h2)
}

pub fn on_line(p: &ProjPoint, l: &ProjLine3) -> bool {
    l.contains(p)
}

/// Intersection of two coplanar lines; `None` when they are skew or equal.
pub fn lines_meet(l1: &ProjLine3, l2: &ProjLine3) -> Option<ProjPoint> {
    l1.meet(l2).ok().flatten()
}

/// The line through `p` meeting both `a` and `b`.
pub fn transversal_through_point(p: &ProjPoint, a: &ProjLine3, b: &ProjLine3) -> Result<ProjLine3> {
    if !a.is_skew_to(b) {
        return Err(Error::NotSkew);
    }
    let ha = a.plane_through(p)?;
    let hb = b.plane_through(p)?;
    ProjLine3::meet_planes(&ha, &hb)
}

/// Evaluations of the ten quadric monomials at a point.
fn monomial_row(p: &ProjPoint) -> Vec<CycElem> {
    let c = p.coords();
    QUADRIC_MONOMIALS.iter().map(|&(i, j)| &c[i] * &c[j]).collect()
}

/// Three points on a line (parameters 0, ∞ and 1 of its spanning pair).
fn three_points(l: &ProjLine3) -> [ProjPoint; 3] {
    let (a, b) = l.spanning_points();
    let ab = ProjPoint::from_vec_unchecked(a.coords().iter().zip(b.coords()).map(|(x, y)| x + y).collect());
    [a, b, ab]
}

/// The unique quadric containing three pairwise skew lines.
pub fn quadric_through_three_skew_lines(l1: &ProjLine3, l2: &ProjLine3, l3: &ProjLine3) -> Result<Quadric3> {
    let n = [l1, l2, l3].iter().fold(1, |acc, l| lcm(acc, l.conductor()));
    let ls: Vec<ProjLine3> = [l1, l2, l3].iter().map(|l| l.embed(n)).collect::<Result<_>>()?;
    for i in 0..3 {
        for j in i + 1..3 {
            if !ls[i].is_skew_to(&ls[j]) {
                return Err(Error::NotSkew);
            }
        }
    }
    let rows: Matrix = ls.iter().flat_map(three_points).map(|p| monomial_row(&p)).collect();
    let ctx = FieldContext::get(n);
    let ker = linalg::kernel(&rows, 10, &ctx)?;
    if ker.len() != 1 {
        return Err(Error::KernelDimension {
            expected: 1,
            found: ker.len(),
        });
    }
    Quadric3::from_monomial_coeffs(&ker[0])
}

/// The point where `l` meets `q` besides `known` (or `known` itself when tangent).
pub fn second_intersection_with_quadric(l: &ProjLine3, q: &Quadric3, known: &ProjPoint) -> Result<ProjPoint> {
    let n = lcm(lcm(l.conductor(), q.context().conductor()), known.conductor());
    let l = l.embed(n)?;
    let known = known.embed(n)?;
    let q = embed_quadric(q, n)?;
    if !l.contains(&known) {
        return Err(Error::NotIncident("known point is not on the line"));
    }
    if !q.contains(&known) {
        return Err(Error::NotIncident("known point is not on the quadric"));
    }
    let (a, b) = l.spanning_points();
    let r = if a == known { b } else { a };
    let qr = q.eval(&r);
    let bkr = q.bilinear(&known, &r);
    if qr.is_zero() && bkr.is_zero() {
        return Err(Error::LineOnQuadric);
    }
    let two_b = bkr.scale_i64(2);
    let coords: Vec<CycElem> = known
        .coords()
        .iter()
        .zip(r.coords())
        .map(|(k, x)| &(&qr * k) - &(&two_b * x))
        .collect();
    Ok(ProjPoint::from_vec_unchecked(coords).normalized())
}

fn embed_quadric(q: &Quadric3, n: u32) -> Result<Quadric3> {
    Quadric3::new(
        q.sym()
            .iter()
            .map(|row| row.iter().map(|c| c.embed(n)).collect::<Result<_>>())
            .collect::<Result<_>>()?,
    )
}

/// Given four lines and one common transversal `known`, returns the other
/// common transversal. The first three must be pairwise skew; the fourth
/// only has to leave the quadric through them.
pub fn second_line_meeting_four(ns: [&ProjLine3; 4], known: &ProjLine3) -> Result<ProjLine3> {
    let n = ns.iter().fold(known.conductor(), |acc, l| lcm(acc, l.conductor()));
    let ns: Vec<ProjLine3> = ns.iter().map(|l| l.embed(n)).collect::<Result<_>>()?;
    let known = known.embed(n)?;
    let ctx = FieldContext::get(n);
    // the first three fix a quadric whose other ruling is searched; the fourth may meet them
    for i in 0..3 {
        for j in i + 1..3 {
            if !ns[i].is_skew_to(&ns[j]) {
                return Err(Error::NotSkew);
            }
        }
    }
    if ns.iter().any(|n| n.is_skew_to(&known)) {
        return Err(Error::NotIncident("known line misses one of the four"));
    }
    let (a, b) = ns[0].spanning_points();
    let point = |s0: &CycElem, s1: &CycElem| {
        ProjPoint::from_vec(a.coords().iter().zip(b.coords()).map(|(x, y)| &(s0 * x) + &(s1 * y)).collect())
    };
    // incidence of N4 with the N2,N3-transversal through a + t b, as a binary quadratic
    let meeting = |s0: i64, s1: i64| -> Result<CycElem> {
        let p = point(&CycElem::from_i64(&ctx, s0), &CycElem::from_i64(&ctx, s1)).expect("independent");
        let l = transversal_through_point(&p, &ns[1], &ns[2])?;
        Ok(l.incidence(&ns[3]))
    };
    let f10 = meeting(1, 0)?;
    let f01 = meeting(0, 1)?;
    let f11 = meeting(1, 1)?;
    let c0 = f10;
    let c2 = f01;
    let c1 = &(&f11 - &c0) - &c2;
    if c0.is_zero() && c1.is_zero() && c2.is_zero() {
        return Err(Error::DegeneratePencil);
    }
    let x0 = lines_meet(&known, &ns[0]).ok_or(Error::NotIncident("known line misses N1"))?;
    let (k0, k1) = coords_in_basis(&x0, &a, &b).expect("meet point lies on N1");
    let (m0, m1) = deflate(&c0, &c1, &c2, &k0, &k1)?;
    let other = point(&-&m1, &m0).ok_or(Error::Tangency)?;
    if other == x0 {
        return Err(Error::Tangency);
    }
    let line = transversal_through_point(&other, &ns[1], &ns[2])?;
    if line == known || ns.iter().any(|l| line.is_skew_to(l)) {
        return Err(Error::Invariant("second transversal fails to meet all four lines".into()));
    }
    Ok(line)
}

/// Divides `c0 s0² + c1 s0 s1 + c2 s1²` by `k1 s0 − k0 s1`, returning the cofactor `(m0, m1)`.
fn deflate(c0: &CycElem, c1: &CycElem, c2: &CycElem, k0: &CycElem, k1: &CycElem) -> Result<(CycElem, CycElem)> {
    let (m0, m1) = if !k1.is_zero() {
        let m0 = c0 / k1;
        let m1 = &(c1 + &(k0 * &m0)) / k1;
        (m0, m1)
    } else {
        (-&(c1 / k0), -&(c2 / k0))
    };
    // the known root must actually be a root
    let residual = if !k1.is_zero() { c2 + &(k0 * &m1) } else { c0.clone() };
    if !residual.is_zero() {
        return Err(Error::NotIncident("known line is not a root of the meeting condition"));
    }
    if m0.is_zero() && m1.is_zero() {
        return Err(Error::DegeneratePencil);
    }
    Ok((m0, m1))
}

/// Matrix sending the standard frame `e1..e4, e1+..+e4` to the five points.
fn frame_matrix(pts: &[ProjPoint]) -> Result<Matrix> {
    let s: Matrix = (0..4).map(|i| (0..4).map(|j| pts[j].coords()[i].clone()).collect()).collect();
    let lambda = linalg::solve(&s, pts[4].coords())?.ok_or(Error::GeneralPosition)?;
    if lambda.iter().any(CycElem::is_zero) {
        return Err(Error::GeneralPosition);
    }
    Ok(s.into_iter()
        .map(|row| row.iter().zip(&lambda).map(|(x, l)| x * l).collect())
        .collect())
}

/// The projective transformation sending `src[i]` to `dst[i]` for five points in general position.
pub fn transform_from_point_correspondence(src: &[ProjPoint], dst: &[ProjPoint]) -> Result<Matrix> {
    if src.len() != 5 || dst.len() != 5 || src.iter().chain(dst).any(|p| p.dim() != 3) {
        return Err(Error::Input("need five points of P^3 on each side".into()));
    }
    let n = src.iter().chain(dst).fold(1, |acc, p| lcm(acc, p.conductor()));
    let src: Vec<ProjPoint> = src.iter().map(|p| p.embed(n)).collect::<Result<_>>()?;
    let dst: Vec<ProjPoint> = dst.iter().map(|p| p.embed(n)).collect::<Result<_>>()?;
    let a_src = frame_matrix(&src)?;
    let a_dst = frame_matrix(&dst)?;
    let ctx = FieldContext::get(n);
    let inv = linalg::inverse(&a_src, &ctx)?.ok_or(Error::GeneralPosition)?;
    Ok(linalg::mat_mul(&a_dst, &inv, &ctx))
}

/// Applies a 4×4 matrix to a point.
pub fn apply_transform(t: &Matrix, p: &ProjPoint) -> Result<ProjPoint> {
    let n = lcm(t[0][0].conductor(), p.conductor());
    let p = p.embed(n)?;
    let t: Matrix = t
        .iter()
        .map(|r| r.iter().map(|c| c.embed(n)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    ProjPoint::from_vec(linalg::mat_vec(&t, p.coords(), p.context())).ok_or(Error::Invariant("singular transform".into()))
}

use std::fmt;
use std::sync::Arc;

use super::point::{common_field, ProjPoint};
use crate::error::{Error, Result};
use crate::exactalg::{CycElem, FieldContext};

/// Index pairs of the Plücker coordinates, in storage order.
pub const PLUECKER_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pair_index(i: usize, j: usize) -> usize {
    match (i, j) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => unreachable!("not an ordered pair"),
    }
}

/// Antisymmetric 4×4 entry `m_ij` read off a 6-vector.
fn antisym(v: &[CycElem; 6], i: usize, j: usize, ctx: &Arc<FieldContext>) -> CycElem {
    use std::cmp::Ordering::*;
    match i.cmp(&j) {
        Less => v[pair_index(i, j)].clone(),
        Greater => -&v[pair_index(j, i)],
        Equal => CycElem::zero(ctx),
    }
}

fn apply_antisym(v: &[CycElem; 6], x: &[CycElem], ctx: &Arc<FieldContext>) -> Vec<CycElem> {
    (0..4)
        .map(|i| {
            let mut acc = CycElem::zero(ctx);
            for (j, xj) in x.iter().enumerate() {
                if i != j && !xj.is_zero() {
                    let m = antisym(v, i, j, ctx);
                    if !m.is_zero() {
                        acc = &acc + &(&m * xj);
                    }
                }
            }
            acc
        })
        .collect()
}

fn wedge(a: &[CycElem], b: &[CycElem]) -> [CycElem; 6] {
    PLUECKER_PAIRS.map(|(i, j)| &(&a[i] * &b[j]) - &(&a[j] * &b[i]))
}

/// Hodge dual on 6-vectors: p01 ↔ π23, p02 ↔ -π13, p03 ↔ π12, ...
fn hodge(v: &[CycElem; 6]) -> [CycElem; 6] {
    [
        v[5].clone(),
        -&v[4],
        v[3].clone(),
        v[2].clone(),
        -&v[1],
        v[0].clone(),
    ]
}

/// A plane in P³ given by its four coefficients, compared up to scalar.
#[derive(Clone)]
pub struct Plane3 {
    coeffs: Vec<CycElem>,
}

impl Plane3 {
    pub fn new(coeffs: Vec<CycElem>) -> Result<Plane3> {
        if coeffs.len() != 4 || coeffs.iter().all(CycElem::is_zero) {
            return Err(Error::Input("a plane needs 4 coefficients, not all zero".into()));
        }
        Ok(Plane3 {
            coeffs: common_field(coeffs),
        })
    }

    pub fn from_ints(ctx: &Arc<FieldContext>, xs: &[i64]) -> Plane3 {
        Plane3::new(xs.iter().map(|&x| CycElem::from_i64(ctx, x)).collect())
            .expect("nonzero integer plane")
    }

    pub(crate) fn from_vec(coeffs: Vec<CycElem>) -> Option<Plane3> {
        if coeffs.iter().all(CycElem::is_zero) {
            None
        } else {
            Some(Plane3 { coeffs })
        }
    }

    pub fn coeffs(&self) -> &[CycElem] {
        &self.coeffs
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        self.coeffs[0].context()
    }

    /// The linear form evaluated at a point.
    pub fn eval(&self, p: &ProjPoint) -> CycElem {
        let mut acc = CycElem::zero(self.context());
        for (h, x) in self.coeffs.iter().zip(p.coords()) {
            if !h.is_zero() && !x.is_zero() {
                acc = &acc + &(h * x);
            }
        }
        acc
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval(p).is_zero()
    }

    /// Plane through three non-collinear points.
    pub fn through_points(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Result<Plane3> {
        let l = ProjLine3::through(a, b)?;
        l.plane_through(c)
    }
}

impl PartialEq for Plane3 {
    fn eq(&self, other: &Plane3) -> bool {
        ProjPoint::from_vec_unchecked(self.coeffs.clone())
            == ProjPoint::from_vec_unchecked(other.coeffs.clone())
    }
}

impl Eq for Plane3 {}

impl fmt::Debug for Plane3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "Plane({})", parts.join(", "))
    }
}

/// A line in P³ in Plücker coordinates `(p01, p02, p03, p12, p13, p23)`,
/// with the dual (pencil-of-planes) coordinates cached alongside.
#[derive(Clone)]
pub struct ProjLine3 {
    pluecker: [CycElem; 6],
    dual: [CycElem; 6],
}

impl ProjLine3 {
    /// Builds a line from Plücker coordinates, checking the Plücker relation.
    pub fn from_pluecker(p: Vec<CycElem>) -> Result<ProjLine3> {
        if p.len() != 6 || p.iter().all(CycElem::is_zero) {
            return Err(Error::Input("a line needs 6 Plücker coordinates, not all zero".into()));
        }
        let p: [CycElem; 6] = common_field(p).try_into().expect("six entries");
        let line = ProjLine3 {
            dual: hodge(&p),
            pluecker: p,
        };
        if !line.pluecker_relation().is_zero() {
            return Err(Error::Input("Plücker relation fails".into()));
        }
        Ok(line)
    }

    pub fn through(a: &ProjPoint, b: &ProjPoint) -> Result<ProjLine3> {
        if a.dim() != 3 || b.dim() != 3 {
            return Err(Error::Input("lines join points of P^3".into()));
        }
        if a == b {
            return Err(Error::CoincidentPoints);
        }
        let (a, b) = unify_points(a, b);
        let p = wedge(a.coords(), b.coords());
        Ok(ProjLine3 {
            dual: hodge(&p),
            pluecker: p,
        })
    }

    /// Intersection of two distinct planes.
    pub fn meet_planes(h: &Plane3, g: &Plane3) -> Result<ProjLine3> {
        let cs = common_field(h.coeffs.iter().chain(&g.coeffs).cloned().collect());
        let dual = wedge(&cs[..4], &cs[4..]);
        if dual.iter().all(CycElem::is_zero) {
            return Err(Error::EqualPlanes);
        }
        Ok(ProjLine3 {
            pluecker: hodge(&dual),
            dual,
        })
    }

    pub fn pluecker(&self) -> &[CycElem; 6] {
        &self.pluecker
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        self.pluecker[0].context()
    }

    pub fn conductor(&self) -> u32 {
        self.pluecker[0].conductor()
    }

    pub fn embed(&self, n: u32) -> Result<ProjLine3> {
        ProjLine3::from_pluecker(
            self.pluecker
                .iter()
                .map(|c| c.embed(n))
                .collect::<Result<_>>()?,
        )
    }

    /// `p01 p23 - p02 p13 + p03 p12`; zero for every genuine line.
    pub fn pluecker_relation(&self) -> CycElem {
        let p = &self.pluecker;
        &(&(&p[0] * &p[5]) - &(&p[1] * &p[4])) + &(&p[2] * &p[3])
    }

    fn lift(&self, x: &[CycElem]) -> Vec<CycElem> {
        common_field(x.to_vec())
            .into_iter()
            .map(|c| c.embed(crate::exactalg::lcm(c.conductor(), self.conductor())).unwrap())
            .collect()
    }

    /// `l ∩ h`, failing when the line lies in the plane.
    pub fn meet_plane(&self, h: &Plane3) -> Result<ProjPoint> {
        let (line, coeffs) = self.with_common_field(h.coeffs());
        let x = apply_antisym(&line.pluecker, &coeffs, line.context());
        ProjPoint::from_vec(x).ok_or(Error::LineInPlane)
    }

    /// Plane spanned by the line and a point off it.
    pub fn plane_through(&self, p: &ProjPoint) -> Result<Plane3> {
        let (line, coords) = self.with_common_field(p.coords());
        let h = apply_antisym(&line.dual, &coords, line.context());
        Plane3::from_vec(h).ok_or(Error::PointOnLine)
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        let (line, coords) = self.with_common_field(p.coords());
        apply_antisym(&line.dual, &coords, line.context())
            .iter()
            .all(CycElem::is_zero)
    }

    fn with_common_field(&self, x: &[CycElem]) -> (std::borrow::Cow<'_, ProjLine3>, Vec<CycElem>) {
        let x = self.lift(x);
        let n = x[0].conductor();
        if n == self.conductor() {
            (std::borrow::Cow::Borrowed(self), x)
        } else {
            (std::borrow::Cow::Owned(self.embed(n).expect("lcm embedding")), x)
        }
    }

    /// Bilinear incidence form; zero iff the two lines are coplanar.
    pub fn incidence(&self, other: &ProjLine3) -> CycElem {
        let mut acc = CycElem::zero(self.context());
        for (p, q) in self.pluecker.iter().zip(&other.dual) {
            if !p.is_zero() && !q.is_zero() {
                acc = &acc + &(p * q);
            }
        }
        acc
    }

    pub fn is_skew_to(&self, other: &ProjLine3) -> bool {
        !self.incidence(other).is_zero()
    }

    /// Intersection point of two distinct coplanar lines; `None` when skew.
    /// Equal lines are reported as an error.
    pub fn meet(&self, other: &ProjLine3) -> Result<Option<ProjPoint>> {
        if self.is_skew_to(other) {
            return Ok(None);
        }
        for plane in other.pencil() {
            if let Ok(p) = self.meet_plane(&plane) {
                return Ok(Some(p));
            }
        }
        Err(Error::Input("lines coincide".into()))
    }

    /// Planes `D e_k` through the line (the nonzero ones).
    pub fn pencil(&self) -> Vec<Plane3> {
        let ctx = self.context().clone();
        (0..4)
            .filter_map(|k| {
                let mut e = vec![CycElem::zero(&ctx); 4];
                e[k] = CycElem::one(&ctx);
                Plane3::from_vec(apply_antisym(&self.dual, &e, &ctx))
            })
            .collect()
    }

    /// Two distinct points spanning the line.
    pub fn spanning_points(&self) -> (ProjPoint, ProjPoint) {
        let ctx = self.context().clone();
        let pts: Vec<ProjPoint> = (0..4)
            .filter_map(|k| {
                let mut e = vec![CycElem::zero(&ctx); 4];
                e[k] = CycElem::one(&ctx);
                ProjPoint::from_vec(apply_antisym(&self.pluecker, &e, &ctx))
            })
            .collect();
        let a = pts[0].clone();
        let b = pts
            .iter()
            .find(|p| **p != a)
            .expect("a line has two independent points")
            .clone();
        (a, b)
    }

    /// Canonical representative: first nonzero Plücker coordinate equal to 1.
    pub fn normalized(&self) -> ProjLine3 {
        let lead = self.pluecker.iter().find(|c| !c.is_zero()).expect("nonzero line");
        let inv = lead.inv().expect("nonzero lead");
        let p = self.pluecker.clone().map(|c| &c * &inv);
        ProjLine3 {
            dual: hodge(&p),
            pluecker: p,
        }
    }
}

fn unify_points(a: &ProjPoint, b: &ProjPoint) -> (ProjPoint, ProjPoint) {
    let n = crate::exactalg::lcm(a.conductor(), b.conductor());
    (a.embed(n).unwrap(), b.embed(n).unwrap())
}

impl PartialEq for ProjLine3 {
    fn eq(&self, other: &ProjLine3) -> bool {
        let a = ProjPoint::from_vec_unchecked(self.pluecker.to_vec());
        let b = ProjPoint::from_vec_unchecked(other.pluecker.to_vec());
        // six coordinates are not a P^1/P^3 point, but the scalar test is the same
        a == b
    }
}

impl Eq for ProjLine3 {}

impl fmt::Debug for ProjLine3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pluecker.iter().map(ToString::to_string).collect();
        write!(f, "Line({})", parts.join(", "))
    }
}

/// A quadric surface given by a symmetric 4×4 matrix.
#[derive(Clone)]
pub struct Quadric3 {
    sym: Vec<Vec<CycElem>>,
}

/// Degree-2 monomials in x, y, z, w, in the order used for fitting.
pub const QUADRIC_MONOMIALS: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

impl Quadric3 {
    pub fn new(sym: Vec<Vec<CycElem>>) -> Result<Quadric3> {
        if sym.len() != 4 || sym.iter().any(|r| r.len() != 4) {
            return Err(Error::Input("a quadric needs a 4x4 matrix".into()));
        }
        if (0..4).any(|i| (0..i).any(|j| sym[i][j] != sym[j][i])) {
            return Err(Error::Input("quadric matrix is not symmetric".into()));
        }
        if sym.iter().flatten().all(CycElem::is_zero) {
            return Err(Error::Input("zero quadric".into()));
        }
        Ok(Quadric3 { sym })
    }

    /// From coefficients of the ten monomials in [`QUADRIC_MONOMIALS`] order.
    pub fn from_monomial_coeffs(c: &[CycElem]) -> Result<Quadric3> {
        let ctx = c[0].context().clone();
        let half = CycElem::from_rat(&ctx, &crate::exactalg::rat_frac(1, 2));
        let mut sym = vec![vec![CycElem::zero(&ctx); 4]; 4];
        for (coef, &(i, j)) in c.iter().zip(&QUADRIC_MONOMIALS) {
            if i == j {
                sym[i][i] = coef.clone();
            } else {
                let v = coef * &half;
                sym[i][j] = v.clone();
                sym[j][i] = v;
            }
        }
        Quadric3::new(sym)
    }

    pub fn sym(&self) -> &[Vec<CycElem>] {
        &self.sym
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        self.sym[0][0].context()
    }

    pub fn bilinear(&self, p: &ProjPoint, q: &ProjPoint) -> CycElem {
        let ctx = self.context().clone();
        let mut acc = CycElem::zero(&ctx);
        for (i, row) in self.sym.iter().enumerate() {
            if p.coords()[i].is_zero() {
                continue;
            }
            for (j, s) in row.iter().enumerate() {
                if !s.is_zero() && !q.coords()[j].is_zero() {
                    acc = &acc + &(&(&p.coords()[i] * s) * &q.coords()[j]);
                }
            }
        }
        acc
    }

    pub fn eval(&self, p: &ProjPoint) -> CycElem {
        self.bilinear(p, p)
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval(p).is_zero()
    }

    /// A line lies on the quadric iff three of its points do.
    pub fn contains_line(&self, l: &ProjLine3) -> bool {
        let (a, b) = l.spanning_points();
        let ab = ProjPoint::from_vec_unchecked(
            a.coords().iter().zip(b.coords()).map(|(x, y)| x + y).collect(),
        );
        self.contains(&a) && self.contains(&b) && self.contains(&ab)
    }
}

impl PartialEq for Quadric3 {
    fn eq(&self, other: &Quadric3) -> bool {
        let flat = |q: &Quadric3| QUADRIC_MONOMIALS.map(|(i, j)| q.sym[i][j].clone()).to_vec();
        let (a, b) = (flat(self), flat(other));
        let Some(k) = a.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        !b[k].is_zero() && a.iter().zip(&b).all(|(x, y)| x * &b[k] == y * &a[k])
    }
}

impl Eq for Quadric3 {}

impl fmt::Debug for Quadric3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quadric{:?}", self.sym)
    }
}

//! Projection from random centers and complete-intersection certificates
//! for the planar images.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{lcm, linalg, CycElem, FieldContext, Matrix};
use crate::halfgrid::Config;
use crate::projgeom::{Plane3, ProjPoint};

#[cfg(test)]
mod tests;

/// Integer box for random projection centers.
pub const CENTER_BOX: i64 = 997;
/// Image plane used by [`is_geproci`].
pub const IMAGE_PLANE: [i64; 4] = [2, -3, 5, 7];
/// Centers drawn per trial before giving up.
pub const MAX_RETRIES: usize = 20;

/// Points of P², each normalized so its first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarConfig {
    pub points: Vec<Vec<CycElem>>,
    pub center: Option<ProjPoint>,
    pub plane: Option<Plane3>,
}

impl PlanarConfig {
    /// Normalizes and checks the points are pairwise distinct.
    pub fn new(points: Vec<Vec<CycElem>>) -> Result<PlanarConfig> {
        let n = points.iter().flatten().fold(1, |acc, c| lcm(acc, c.conductor()));
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(points.len());
        for p in points {
            if p.len() != 3 {
                return Err(Error::Input(format!("planar points need 3 coordinates, got {}", p.len())));
            }
            let p = p.iter().map(|c| c.embed(n)).collect::<Result<Vec<_>>>()?;
            let p = normalize(&p).ok_or_else(|| Error::Input("all coordinates are zero".into()))?;
            if !seen.insert(p.clone()) {
                return Err(Error::SecantCollision);
            }
            out.push(p);
        }
        Ok(PlanarConfig {
            points: out,
            center: None,
            plane: None,
        })
    }

    pub fn from_ints(points: &[[i64; 3]]) -> Result<PlanarConfig> {
        let ctx = FieldContext::get(1);
        PlanarConfig::new(points.iter().map(|p| p.iter().map(|&x| CycElem::from_i64(&ctx, x)).collect()).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn context(&self) -> Arc<FieldContext> {
        match self.points.first() {
            Some(p) => p[0].context().clone(),
            None => FieldContext::get(1),
        }
    }
}

fn normalize(p: &[CycElem]) -> Option<Vec<CycElem>> {
    let lead = p.iter().find(|c| !c.is_zero())?;
    let inv = lead.inv().ok()?;
    Some(p.iter().map(|c| c * &inv).collect())
}

/// Projects `z` from `center` onto `plane`, in the chart of the plane that
/// forgets the last coordinate with a nonzero plane coefficient.
pub fn project(z: &Config, center: &ProjPoint, plane: &Plane3) -> Result<PlanarConfig> {
    let n = lcm(lcm(z.conductor(), center.conductor()), plane.context().conductor());
    let z = z.embed(n)?;
    let center = center.embed(n)?;
    let h = Plane3::new(plane.coeffs().iter().map(|c| c.embed(n)).collect::<Result<_>>()?)?;
    let hc = h.eval(&center);
    if hc.is_zero() {
        return Err(Error::CenterOnPlane);
    }
    if z.find(&center).is_some() {
        return Err(Error::Input("projection center is a point of the configuration".into()));
    }
    let drop = (0..4).rev().find(|&k| !h.coeffs()[k].is_zero()).expect("nonzero plane");
    let images = z
        .points()
        .iter()
        .map(|p| {
            // h(p) c - h(c) p lies on the line through c and p and on the plane
            let hp = h.eval(&p.coords);
            let q: Vec<CycElem> = center
                .coords()
                .iter()
                .zip(p.coords.coords())
                .map(|(c, x)| &(&hp * c) - &(&hc * x))
                .collect();
            (0..4).filter(|&k| k != drop).map(|k| q[k].clone()).collect()
        })
        .collect();
    let mut s = PlanarConfig::new(images)?;
    s.center = Some(center);
    s.plane = Some(h);
    Ok(s)
}

/// Exponents `(i, j, k)` of `x^i y^j z^k` with `i + j + k = d`, in graded-lex order.
pub fn monomials(d: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity((d + 1) * (d + 2) / 2);
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push([i, j, d - i - j]);
        }
    }
    out
}

fn powers(x: &CycElem, d: usize) -> Vec<CycElem> {
    let mut out = vec![CycElem::one(x.context())];
    for k in 1..=d {
        let next = &out[k - 1] * x;
        out.push(next);
    }
    out
}

/// Value of the dense degree-`d` form `f` at `p`.
pub fn eval_form(f: &[CycElem], d: usize, p: &[CycElem]) -> CycElem {
    let pw: Vec<Vec<CycElem>> = p.iter().map(|x| powers(x, d)).collect();
    let mut acc = CycElem::zero(p[0].context());
    for (c, [i, j, k]) in f.iter().zip(monomials(d)) {
        if !c.is_zero() {
            acc = &acc + &(&(&(c * &pw[0][i]) * &pw[1][j]) * &pw[2][k]);
        }
    }
    acc
}

fn evaluation_matrix(s: &PlanarConfig, d: usize) -> Matrix {
    let mons = monomials(d);
    s.points
        .iter()
        .map(|p| {
            let pw: Vec<Vec<CycElem>> = p.iter().map(|x| powers(x, d)).collect();
            mons.iter().map(|&[i, j, k]| &(&pw[0][i] * &pw[1][j]) * &pw[2][k]).collect()
        })
        .collect()
}

/// Basis of the degree-`d` forms vanishing on `s`.
pub fn vanishing_forms(s: &PlanarConfig, d: usize) -> Result<Vec<Vec<CycElem>>> {
    if d == 0 {
        return Err(Error::Input("degree must be at least 1".into()));
    }
    let cols = (d + 1) * (d + 2) / 2;
    linalg::kernel(&evaluation_matrix(s, d), cols, &s.context())
}

/// `f · x^e` for the degree-`d` form `f`, as a dense form of degree `d + |e|`.
fn times_monomial(f: &[CycElem], d: usize, e: [usize; 3], ctx: &Arc<FieldContext>) -> Vec<CycElem> {
    let total = d + e.iter().sum::<usize>();
    let index: HashMap<[usize; 3], usize> = monomials(total).into_iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mut out = vec![CycElem::zero(ctx); index.len()];
    for (c, m) in f.iter().zip(monomials(d)) {
        out[index[&[m[0] + e[0], m[1] + e[1], m[2] + e[2]]]] = c.clone();
    }
    out
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, r| acc * (n - r) as i64 / (r as i64 + 1))
}

/// Coefficients (constant term first) of `f(x0 + s0·z, y0 + s1·z, z)` as a polynomial in `z`.
fn restrict(f: &[CycElem], d: usize, shear: [i64; 2], at: [i64; 2], ctx: &Arc<FieldContext>) -> Vec<CycElem> {
    let mut out = vec![CycElem::zero(ctx); d + 1];
    let int = |v: i64| CycElem::from_i64(ctx, v);
    let pw = |b: i64, e: usize| int(b).pow(e as i64).expect("integer power");
    for (c, [i, j, k]) in f.iter().zip(monomials(d)) {
        if c.is_zero() {
            continue;
        }
        for r in 0..=i {
            let xr = &(&int(binomial(i, r)) * &pw(at[0], i - r)) * &pw(shear[0], r);
            for t in 0..=j {
                let yt = &(&int(binomial(j, t)) * &pw(at[1], j - t)) * &pw(shear[1], t);
                out[r + t + k] = &out[r + t + k] + &(c * &(&xr * &yt));
            }
        }
    }
    out
}

/// Sylvester determinant of two univariate polynomials (constant term first).
fn sylvester(p: &[CycElem], q: &[CycElem], ctx: &Arc<FieldContext>) -> Result<CycElem> {
    let (m, n) = (p.len() - 1, q.len() - 1);
    let size = m + n;
    let mut s = vec![vec![CycElem::zero(ctx); size]; size];
    for r in 0..n {
        for (k, c) in p.iter().rev().enumerate() {
            s[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in q.iter().rev().enumerate() {
            s[n + r][r + k] = c.clone();
        }
    }
    linalg::det(&s, ctx)
}

/// A nonzero value of the `z`-resultant of the two forms after `x ← x + s0·z, y ← y + s1·z`,
/// taken at `x = at[0], y = at[1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultantWitness {
    pub shear: [i64; 2],
    pub at: [i64; 2],
    pub value: CycElem,
}

/// Shear `x ← x + s0·z, y ← y + s1·z` giving both forms a nonzero `z`-leading
/// coefficient `f(s0, s1, 1)`: smallest `s0 ≥ 1` with `s1 = 0` when possible.
/// A nonzero form of degree `d` cannot vanish on a `(d+1) × (d+2)` grid, so the search ends.
fn choose_shear(fa: &[CycElem], a: usize, fb: &[CycElem], b: usize, ctx: &Arc<FieldContext>) -> [i64; 2] {
    let pt = |s: [i64; 2]| [CycElem::from_i64(ctx, s[0]), CycElem::from_i64(ctx, s[1]), CycElem::one(ctx)];
    let bound = (a + b + 2) as i64;
    (0..=bound)
        .flat_map(|s1| (1..=bound).map(move |s0| [s0, s1]))
        .find(|&s| !eval_form(fa, a, &pt(s)).is_zero() && !eval_form(fb, b, &pt(s)).is_zero())
        .expect("nonzero forms have a common nonvanishing grid point")
}

/// Looks for a point where the resultant does not vanish. The resultant is a
/// binary form of degree `a·b`, so `a·b + 1` zeros mean it vanishes identically.
fn resultant_witness(fa: &[CycElem], a: usize, fb: &[CycElem], b: usize, ctx: &Arc<FieldContext>) -> Result<Option<ResultantWitness>> {
    let shear = choose_shear(fa, a, fb, b, ctx);
    for t in 0..=(a * b) as i64 {
        let at = [1, t];
        let value = sylvester(&restrict(fa, a, shear, at, ctx), &restrict(fb, b, shear, at, ctx), ctx)?;
        if !value.is_zero() {
            return Ok(Some(ResultantWitness { shear, at, value }));
        }
    }
    Ok(None)
}

/// One certified projection: both forms vanish on the `a·b` image points and
/// share no component, so by Bézout they cut out exactly those points, transversally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub center: Option<ProjPoint>,
    pub image: Vec<Vec<CycElem>>,
    pub f_a: Vec<CycElem>,
    pub f_b: Vec<CycElem>,
    pub witness: ResultantWitness,
}

fn rank_increases(base: &Matrix, v: &[CycElem]) -> Result<bool> {
    let mut m = base.clone();
    m.push(v.to_vec());
    Ok(linalg::rank(&m)? > linalg::rank(base)?)
}

/// Certifies `s` as a transverse complete intersection of type `(a, b)`.
pub fn ci_certify(s: &PlanarConfig, a: usize, b: usize) -> Result<TrialRecord> {
    if a == 0 || a > b {
        return Err(Error::Input(format!("need 1 ≤ a ≤ b, got ({a}, {b})")));
    }
    if s.len() != a * b {
        return Err(Error::Input(format!("{} points cannot be a complete intersection of type ({a}, {b})", s.len())));
    }
    let ctx = s.context();
    let ka = vanishing_forms(s, a)?;
    if ka.is_empty() {
        return Err(Error::NotCompleteIntersection(format!("no curve of degree {a} through the points")));
    }
    let kb = if a == b { ka.clone() } else { vanishing_forms(s, b)? };
    for (ia, fa) in ka.iter().enumerate() {
        let multiples: Matrix = monomials(b - a).into_iter().map(|e| times_monomial(fa, a, e, &ctx)).collect();
        if kb.len() <= multiples.len() {
            return Err(Error::NotCompleteIntersection(format!(
                "every degree-{b} curve through the points is a multiple of the degree-{a} curve"
            )));
        }
        let mut candidates: Vec<Vec<CycElem>> = Vec::new();
        for (ib, g) in kb.iter().enumerate() {
            if a == b && ib == ia {
                continue;
            }
            if rank_increases(&multiples, g)? {
                candidates.push(g.clone());
            }
        }
        // a few combinations in case every basis vector shares a component with f_a
        let two = CycElem::from_i64(&ctx, 2);
        let extra: Vec<Vec<CycElem>> = candidates
            .iter()
            .skip(1)
            .map(|g| candidates[0].iter().zip(g).map(|(x, y)| x + &(&two * y)).collect())
            .collect();
        for fb in candidates.iter().chain(&extra) {
            if let Some(witness) = resultant_witness(fa, a, fb, b, &ctx)? {
                return Ok(TrialRecord {
                    center: s.center.clone(),
                    image: s.points.clone(),
                    f_a: fa.clone(),
                    f_b: fb.clone(),
                    witness,
                });
            }
        }
    }
    Err(Error::NotCompleteIntersection("all sampled curve pairs share a component".into()))
}

impl TrialRecord {
    /// Re-checks vanishing, distinctness and the resultant witness.
    pub fn validate(&self, a: usize, b: usize) -> Result<()> {
        let s = PlanarConfig::new(self.image.clone())?;
        if s.len() != a * b {
            return Err(Error::Invariant(format!("{} image points, expected {}", s.len(), a * b)));
        }
        let len = |d: usize| (d + 1) * (d + 2) / 2;
        if self.f_a.len() != len(a) || self.f_b.len() != len(b) {
            return Err(Error::Invariant("form has the wrong number of coefficients".into()));
        }
        let n = self.f_a.iter().chain(&self.f_b).fold(s.context().conductor(), |acc, c| lcm(acc, c.conductor()));
        let ctx = FieldContext::get(n);
        let emb = |f: &[CycElem]| f.iter().map(|c| c.embed(n)).collect::<Result<Vec<_>>>();
        let (fa, fb) = (emb(&self.f_a)?, emb(&self.f_b)?);
        for p in &s.points {
            let p = emb(p)?;
            if !eval_form(&fa, a, &p).is_zero() || !eval_form(&fb, b, &p).is_zero() {
                return Err(Error::Invariant("a form does not vanish at an image point".into()));
            }
        }
        let w = &self.witness;
        let pt = [CycElem::from_i64(&ctx, w.shear[0]), CycElem::from_i64(&ctx, w.shear[1]), CycElem::one(&ctx)];
        if eval_form(&fa, a, &pt).is_zero() || eval_form(&fb, b, &pt).is_zero() {
            return Err(Error::Invariant("shear leaves a leading coefficient zero".into()));
        }
        let value = sylvester(&restrict(&fa, a, w.shear, w.at, &ctx), &restrict(&fb, b, w.shear, w.at, &ctx), &ctx)?;
        if value.is_zero() || value != w.value.embed(n)? {
            return Err(Error::Invariant("resultant witness does not reproduce".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeprociCert {
    pub a: usize,
    pub b: usize,
    pub plane: Plane3,
    pub trials: Vec<TrialRecord>,
}

impl GeprociCert {
    /// Checks every trial record on its own data.
    pub fn validate(&self) -> Result<()> {
        if self.trials.is_empty() {
            return Err(Error::Invariant("certificate has no trials".into()));
        }
        self.trials.iter().try_for_each(|t| t.validate(self.a, self.b))
    }

    /// Also re-projects `z` from each recorded center and compares images.
    pub fn validate_against(&self, z: &Config) -> Result<()> {
        self.validate()?;
        for t in &self.trials {
            let center = t.center.as_ref().ok_or_else(|| Error::Invariant("trial without a center".into()))?;
            let s = project(z, center, &self.plane)?;
            let n = lcm(s.context().conductor(), t.image.iter().flatten().fold(1, |acc, c| lcm(acc, c.conductor())));
            let emb = |pts: &[Vec<CycElem>]| -> Result<Vec<Vec<CycElem>>> {
                pts.iter().map(|p| p.iter().map(|c| c.embed(n)).collect()).collect()
            };
            if emb(&s.points)? != emb(&t.image)? {
                return Err(Error::Invariant("recorded image is not the projection of the configuration".into()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<GeprociCert> {
        serde_json::from_str(s).map_err(|e| Error::Input(format!("certificate JSON: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialFailure {
    pub center: ProjPoint,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeprociVerdict {
    pub geproci: bool,
    /// Present when every trial certified.
    pub cert: Option<GeprociCert>,
    pub failures: Vec<TrialFailure>,
    /// Centers discarded because they lay on a secant.
    pub resampled: usize,
}

/// Draws random integer centers in `[-CENTER_BOX, CENTER_BOX]⁴`.
pub fn sample_centers(seed: u64, count: usize) -> impl Iterator<Item = [i64; 4]> {
    let mut rng = Pcg64::seed_from_u64(seed);
    std::iter::repeat_with(move || {
        let c: [i64; 4] = std::array::from_fn(|_| rng.random_range(-CENTER_BOX..=CENTER_BOX));
        c
    })
    .filter(|c| c.iter().any(|&x| x != 0))
    .take(count)
}

/// Projects `z` from `trials` random centers and certifies each image as a
/// complete intersection of type `(a, b)`.
pub fn is_geproci(z: &Config, a: usize, b: usize, trials: usize, seed: u64) -> Result<GeprociVerdict> {
    if trials == 0 {
        return Err(Error::Input("need at least one trial".into()));
    }
    if z.len() != a * b {
        return Err(Error::Input(format!("{} points cannot be geproci of type ({a}, {b})", z.len())));
    }
    let ctx = FieldContext::get(1);
    let plane = Plane3::from_ints(&ctx, &IMAGE_PLANE);
    let mut centers = sample_centers(seed, usize::MAX);
    let mut projections = Vec::with_capacity(trials);
    let mut resampled = 0;
    for _ in 0..trials {
        let mut attempts = 0;
        loop {
            let c = ProjPoint::from_ints(&ctx, &centers.next().expect("endless sampler"));
            match project(z, &c, &plane) {
                Ok(s) => {
                    projections.push((c, s));
                    break;
                }
                Err(Error::SecantCollision | Error::CenterOnPlane | Error::Input(_)) => {
                    attempts += 1;
                    resampled += 1;
                    if attempts >= MAX_RETRIES {
                        return Err(Error::RetryBudget(attempts));
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
    let outcomes: Vec<(ProjPoint, Result<TrialRecord>)> =
        projections.into_par_iter().map(|(c, s)| (c, ci_certify(&s, a, b))).collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (center, outcome) in outcomes {
        match outcome {
            Ok(r) => records.push(r),
            Err(e @ Error::NotCompleteIntersection(_)) => failures.push(TrialFailure {
                center,
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    let geproci = failures.is_empty();
    Ok(GeprociVerdict {
        geproci,
        cert: geproci.then(|| GeprociCert {
            a,
            b,
            plane: plane.clone(),
            trials: records,
        }),
        failures,
        resampled,
    })
}

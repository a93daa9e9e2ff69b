use std::borrow::Cow;
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::cyclotomic::FieldContext;
use super::rat::Rat;
use crate::error::{Error, Result};

/// Element of ℚ(ζ_N), kept fully reduced modulo `Φ_N`.
///
/// Stored as an integer coefficient vector over a common positive
/// denominator, with the content of the numerator coprime to the
/// denominator, so structural equality is field equality.
#[derive(Clone)]
pub struct CycElem {
    ctx: Arc<FieldContext>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycElem {
    fn from_parts(ctx: Arc<FieldContext>, mut num: Vec<BigInt>, mut den: BigInt) -> CycElem {
        debug_assert_eq!(num.len(), ctx.degree());
        if num.iter().all(Zero::is_zero) {
            return CycElem {
                ctx,
                num,
                den: BigInt::one(),
            };
        }
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                if !c.is_zero() {
                    g = g.gcd(c);
                }
            }
            if !g.is_one() {
                den /= &g;
                for c in num.iter_mut() {
                    *c /= &g;
                }
            }
        }
        CycElem { ctx, num, den }
    }

    pub fn zero(ctx: &Arc<FieldContext>) -> CycElem {
        CycElem {
            ctx: ctx.clone(),
            num: vec![BigInt::zero(); ctx.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(ctx: &Arc<FieldContext>) -> CycElem {
        CycElem::from_i64(ctx, 1)
    }

    pub fn from_i64(ctx: &Arc<FieldContext>, n: i64) -> CycElem {
        let mut num = vec![BigInt::zero(); ctx.degree()];
        num[0] = BigInt::from(n);
        CycElem {
            ctx: ctx.clone(),
            num,
            den: BigInt::one(),
        }
    }

    pub fn from_rat(ctx: &Arc<FieldContext>, r: &Rat) -> CycElem {
        let mut num = vec![BigInt::zero(); ctx.degree()];
        num[0] = r.numer().clone();
        CycElem::from_parts(ctx.clone(), num, r.denom().clone())
    }

    /// Builds an element from its power-basis coordinates; the vector must
    /// have length exactly `φ(N)`.
    pub fn from_coeffs(ctx: &Arc<FieldContext>, coeffs: &[Rat]) -> Result<CycElem> {
        if coeffs.len() != ctx.degree() {
            return Err(Error::Input(format!(
                "conductor {} needs {} coefficients, got {}",
                ctx.conductor(),
                ctx.degree(),
                coeffs.len()
            )));
        }
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(CycElem::from_parts(ctx.clone(), num, den))
    }

    /// `ζ_N^k`, exponent taken mod N.
    pub fn zeta_pow(ctx: &Arc<FieldContext>, k: i64) -> CycElem {
        let num = ctx
            .zeta_pow_coeffs(k)
            .iter()
            .map(|&c| BigInt::from(c))
            .collect();
        CycElem {
            ctx: ctx.clone(),
            num,
            den: BigInt::one(),
        }
    }

    /// A primitive m-th root of unity `ζ_N^(N/m)`; `m` must divide N.
    pub fn root_of_unity(ctx: &Arc<FieldContext>, m: u32) -> Result<CycElem> {
        let n = ctx.conductor();
        if m == 0 || !n.is_multiple_of(m) {
            return Err(Error::NotEmbeddable { from: m, to: n });
        }
        Ok(CycElem::zeta_pow(ctx, (n / m) as i64))
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn conductor(&self) -> u32 {
        self.ctx.conductor()
    }

    pub fn coeffs(&self) -> Vec<Rat> {
        self.num
            .iter()
            .map(|c| Rat::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The element as a rational, when it lies in ℚ.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(Rat::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Image under `ζ_N ↦ ζ_M^(M/N)`.
    pub fn embed(&self, m: u32) -> Result<CycElem> {
        let n = self.conductor();
        if m == 0 || !m.is_multiple_of(n) {
            return Err(Error::NotEmbeddable { from: n, to: m });
        }
        if m == n {
            return Ok(self.clone());
        }
        let target = FieldContext::get(m);
        let step = (m / n) as i64;
        let mut out = vec![BigInt::zero(); target.degree()];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &z) in out.iter_mut().zip(target.zeta_pow_coeffs(k as i64 * step)) {
                if z != 0 {
                    *o += c * z;
                }
            }
        }
        Ok(CycElem::from_parts(target, out, self.den.clone()))
    }

    /// Galois action `ζ ↦ ζ^k`; `k` must be coprime to N.
    pub fn galois(&self, k: i64) -> CycElem {
        debug_assert_eq!(k.gcd(&(self.conductor() as i64)), 1);
        let mut out = vec![BigInt::zero(); self.ctx.degree()];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &z) in out.iter_mut().zip(self.ctx.zeta_pow_coeffs(j as i64 * k)) {
                if z != 0 {
                    *o += c * z;
                }
            }
        }
        CycElem::from_parts(self.ctx.clone(), out, self.den.clone())
    }

    /// Complex conjugate, `ζ ↦ ζ^(-1)`.
    pub fn conj(&self) -> CycElem {
        self.galois(-1)
    }

    /// Field norm down to ℚ: the product of all Galois conjugates.
    pub fn norm(&self) -> Rat {
        let n = self.conductor() as i64;
        let mut acc = CycElem::one(&self.ctx);
        for k in 1..=n {
            if k.gcd(&n) == 1 {
                acc = &acc * &self.galois(k);
            }
        }
        acc.as_rational().expect("norm lies in Q")
    }

    fn unify<'a>(a: &'a CycElem, b: &'a CycElem) -> Result<(Cow<'a, CycElem>, Cow<'a, CycElem>)> {
        let (na, nb) = (a.conductor(), b.conductor());
        if na == nb {
            Ok((Cow::Borrowed(a), Cow::Borrowed(b)))
        } else if nb % na == 0 {
            Ok((Cow::Owned(a.embed(nb)?), Cow::Borrowed(b)))
        } else if na % nb == 0 {
            Ok((Cow::Borrowed(a), Cow::Owned(b.embed(na)?)))
        } else {
            Err(Error::ConductorMismatch(na, nb))
        }
    }

    pub fn checked_add(&self, other: &CycElem) -> Result<CycElem> {
        let (a, b) = CycElem::unify(self, other)?;
        Ok(a.add_same(&b, false))
    }

    pub fn checked_sub(&self, other: &CycElem) -> Result<CycElem> {
        let (a, b) = CycElem::unify(self, other)?;
        Ok(a.add_same(&b, true))
    }

    pub fn checked_mul(&self, other: &CycElem) -> Result<CycElem> {
        let (a, b) = CycElem::unify(self, other)?;
        Ok(a.mul_same(&b))
    }

    pub fn checked_div(&self, other: &CycElem) -> Result<CycElem> {
        let (a, b) = CycElem::unify(self, other)?;
        Ok(a.mul_same(&b.inv()?))
    }

    fn add_same(&self, other: &CycElem, subtract: bool) -> CycElem {
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(x, y)| if subtract { x - y } else { x + y })
                .collect();
            return CycElem::from_parts(self.ctx.clone(), num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(x, y)| {
                let l = x * &other.den;
                let r = y * &self.den;
                if subtract {
                    l - r
                } else {
                    l + r
                }
            })
            .collect();
        CycElem::from_parts(self.ctx.clone(), num, &self.den * &other.den)
    }

    fn mul_same(&self, other: &CycElem) -> CycElem {
        let d = self.ctx.degree();
        if self.is_zero() || other.is_zero() {
            return CycElem::zero(&self.ctx);
        }
        if d == 1 {
            return CycElem::from_parts(
                self.ctx.clone(),
                vec![&self.num[0] * &other.num[0]],
                &self.den * &other.den,
            );
        }
        let mut conv = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.num.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<BigInt> = conv.drain(..d).collect();
        for (k, c) in conv.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(self.ctx.reduction_row(k)) {
                if r != 0 {
                    *o += c * r;
                }
            }
        }
        CycElem::from_parts(self.ctx.clone(), out, &self.den * &other.den)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on
    /// the representative polynomial and `Φ_N`.
    pub fn inv(&self) -> Result<CycElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.ctx.degree();
        if d == 1 {
            return Ok(CycElem::from_parts(
                self.ctx.clone(),
                vec![self.den.clone()],
                self.num[0].clone(),
            ));
        }
        let a: Vec<Rat> = self.num.iter().map(|c| Rat::from_integer(c.clone())).collect();
        let m: Vec<Rat> = self
            .ctx
            .cyclotomic_polynomial()
            .iter()
            .map(|&c| Rat::from_integer(BigInt::from(c)))
            .collect();
        let t = poly_inverse_mod(&a, &m).ok_or(Error::DivisionByZero)?;
        // (num/den)^(-1) = den * num^(-1)
        let mut coeffs = t;
        coeffs.resize(d, Rat::zero());
        let den_r = Rat::from_integer(self.den.clone());
        for c in coeffs.iter_mut() {
            *c = &*c * &den_r;
        }
        CycElem::from_coeffs(&self.ctx, &coeffs)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<CycElem> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycElem::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same(&base);
            }
        }
        Ok(acc)
    }

    /// Canonical total order: by conductor, then coefficient-wise as rationals.
    pub fn cmp_canonical(&self, other: &CycElem) -> Ordering {
        self.conductor()
            .cmp(&other.conductor())
            .then_with(|| {
                for (x, y) in self.num.iter().zip(&other.num) {
                    let o = (x * &other.den).cmp(&(y * &self.den));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }

    /// Size proxy used to prefer small pivots: total bit length of the representation.
    pub fn bit_size(&self) -> u64 {
        self.num.iter().map(|c| c.bits()).sum::<u64>() + self.den.bits()
    }
}

fn trim(p: &mut Vec<Rat>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn is_zero_poly(p: &[Rat]) -> bool {
    p.iter().all(Zero::is_zero)
}

fn poly_divrem(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    if num.len() <= dn {
        return (vec![Rat::zero()], rem);
    }
    let lead_inv = den[dn].recip();
    let mut quot = vec![Rat::zero(); num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dn] * &lead_inv;
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
        }
        quot[k] = c;
    }
    rem.truncate(dn.max(1));
    trim(&mut rem);
    (quot, rem)
}

fn poly_sub_mul(a: &[Rat], q: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let len = a.len().max(q.len() + b.len() - 1);
    let mut out = vec![Rat::zero(); len];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in q.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] -= x * y;
        }
    }
    trim(&mut out);
    out
}

/// `a^(-1) mod m` over ℚ[x], or `None` when `gcd(a, m) ≠ 1`.
fn poly_inverse_mod(a: &[Rat], m: &[Rat]) -> Option<Vec<Rat>> {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let mut t0 = vec![Rat::zero()];
    let mut t1 = vec![Rat::one()];
    while r1.len() > 1 {
        let (q, r) = poly_divrem(&r0, &r1);
        let t2 = poly_sub_mul(&t0, &q, &t1);
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if is_zero_poly(&r1) {
        return None;
    }
    let c_inv = r1[0].recip();
    let (_, t) = poly_divrem(&t1, m);
    Some(t.into_iter().map(|x| x * &c_inv).collect())
}

impl PartialEq for CycElem {
    fn eq(&self, other: &CycElem) -> bool {
        if self.conductor() == other.conductor() {
            return self.den == other.den && self.num == other.num;
        }
        match CycElem::unify(self, other) {
            Ok((a, b)) => a.den == b.den && a.num == b.num,
            Err(_) => false,
        }
    }
}

impl Eq for CycElem {}

impl Hash for CycElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.conductor().hash(state);
        self.den.hash(state);
        self.num.hash(state);
    }
}

impl fmt::Debug for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let n = self.conductor();
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let base = match k {
                0 => String::new(),
                1 => format!("ζ{n}"),
                _ => format!("ζ{n}^{k}"),
            };
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "{base}")?,
                (_, false) => write!(f, "{a}*{base}")?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CycElem> for &CycElem {
            type Output = CycElem;
            fn $method(self, rhs: &CycElem) -> CycElem {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycElem> for CycElem {
            type Output = CycElem;
            fn $method(self, rhs: CycElem) -> CycElem {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycElem> for CycElem {
            type Output = CycElem;
            fn $method(self, rhs: &CycElem) -> CycElem {
                (&self).$method(rhs)
            }
        }
        impl $tr<CycElem> for &CycElem {
            type Output = CycElem;
            fn $method(self, rhs: CycElem) -> CycElem {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        CycElem {
            ctx: self.ctx.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycElem {
    type Output = CycElem;
    fn neg(mut self) -> CycElem {
        for c in self.num.iter_mut() {
            *c = -&*c;
        }
        self
    }
}

impl CycElem {
    /// Multiplies by a small integer without going through the field product.
    pub fn scale_i64(&self, k: i64) -> CycElem {
        if k == 0 {
            return CycElem::zero(&self.ctx);
        }
        CycElem::from_parts(
            self.ctx.clone(),
            self.num.iter().map(|c| c * k).collect(),
            self.den.clone(),
        )
    }
}

//! Square test in ℚ(ζ_N).
//!
//! For rational radicands the test is exact: `√d ∈ ℚ(ζ_N)` for squarefree
//! `d` iff the discriminant of `ℚ(√d)` divides N, and the root is assembled
//! from quadratic Gauss sums, `ζ_4` and `ζ_8 ± ζ_8^(-1)`. Non-rational
//! radicands are only refuted through the norm; otherwise the test reports
//! `Undecided` rather than extending the field.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::cyclotomic::FieldContext;
use super::elem::CycElem;
use super::rat::{integer_sqrt_exact, rat_sqrt_exact, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquareTest {
    Square(CycElem),
    NonSquare,
    Undecided,
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// Quadratic Gauss sum for an odd prime `p | N`; its square is `(-1)^((p-1)/2) p`.
fn gauss_sum(ctx: &Arc<FieldContext>, p: u32) -> CycElem {
    let step = (ctx.conductor() / p) as i64;
    let mut acc = CycElem::zero(ctx);
    for a in 1..p as i64 {
        let term = CycElem::zeta_pow(ctx, a * step);
        acc = if legendre(a as u64, p as u64) == 1 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}

/// Square root of `d ∈ ℤ` in `ℚ(ζ_N)` when it exists.
fn sqrt_integer(ctx: &Arc<FieldContext>, n: &BigInt) -> Option<CycElem> {
    if n.is_zero() {
        return Some(CycElem::zero(ctx));
    }
    let conductor = ctx.conductor();
    let mut primes = prime_factors(conductor);
    if !primes.contains(&2) {
        primes.insert(0, 2);
    }
    let mut rest = n.abs();
    let mut sign = if n.is_negative() { -1 } else { 1 };
    let mut rational = BigInt::one();
    let mut root = CycElem::one(ctx);
    let mut odd_two = false;
    for &p in &primes {
        let bp = BigInt::from(p);
        let mut e = 0u32;
        while rest.is_multiple_of(&bp) {
            rest /= &bp;
            e += 1;
        }
        for _ in 0..e / 2 {
            rational *= &bp;
        }
        if e % 2 == 1 {
            if p == 2 {
                odd_two = true;
            } else {
                root = &root * &gauss_sum(ctx, p);
                if p % 4 == 3 {
                    sign = -sign;
                }
            }
        }
    }
    rational *= integer_sqrt_exact(&rest)?;
    if odd_two {
        if !conductor.is_multiple_of(8) {
            return None;
        }
        // √2 = ζ8 + ζ8^7, √-2 = ζ8 + ζ8^3
        let s = (conductor / 8) as i64;
        let other = if sign < 0 { 3 * s } else { 7 * s };
        root = &root * &(CycElem::zeta_pow(ctx, s) + CycElem::zeta_pow(ctx, other));
        sign = 1;
    }
    if sign < 0 {
        if !conductor.is_multiple_of(4) {
            return None;
        }
        root = &root * &CycElem::zeta_pow(ctx, (conductor / 4) as i64);
    }
    Some(&root * &CycElem::from_rat(ctx, &Rat::from_integer(rational)))
}

/// Decides whether `r` is a square in its own field, returning a root when it is.
pub fn sqrt_in_field(r: &CycElem) -> SquareTest {
    let ctx = r.context().clone();
    if let Some(q) = r.as_rational() {
        // √(s/t) = √(s t) / t
        let st = q.numer() * q.denom();
        return match sqrt_integer(&ctx, &st) {
            Some(s) => {
                let root = &s * &CycElem::from_rat(&ctx, &Rat::new(BigInt::one(), q.denom().clone()));
                debug_assert_eq!(&root * &root, *r);
                SquareTest::Square(root)
            }
            None => SquareTest::NonSquare,
        };
    }
    if rat_sqrt_exact(&r.norm()).is_none() {
        return SquareTest::NonSquare;
    }
    SquareTest::Undecided
}

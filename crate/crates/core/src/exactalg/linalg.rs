//! Dense exact linear algebra over ℚ(ζ_N).
//!
//! Elimination normalizes each pivot row with a single field inversion and
//! then clears the pivot column with multiply-subtract updates only, so the
//! number of inversions equals the rank. Pivots are chosen by smallest
//! representation size to slow coefficient growth.

use std::sync::Arc;

use rayon::prelude::*;

use super::cyclotomic::FieldContext;
use super::elem::CycElem;
use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<CycElem>>;

/// Work threshold (rows × cols) above which row updates run in parallel.
const PAR_THRESHOLD: usize = 256;

fn pick_pivot(m: &Matrix, col: usize, from: usize) -> Option<usize> {
    (from..m.len())
        .filter(|&r| !m[r][col].is_zero())
        .min_by_key(|&r| m[r][col].bit_size())
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Result<Vec<usize>> {
    let rows = m.len();
    if rows == 0 {
        return Ok(Vec::new());
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pick_pivot(m, c, r) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv()?;
        for x in m[r][c..].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = m[r].clone();
        let update = |(i, row): (usize, &mut Vec<CycElem>)| {
            if i == r || row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        };
        if rows * cols >= PAR_THRESHOLD {
            m.par_iter_mut().enumerate().for_each(update);
        } else {
            m.iter_mut().enumerate().for_each(update);
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

/// Basis of `{v : M v = 0}`; `cols` is needed when `M` has no rows.
pub fn kernel(m: &Matrix, cols: usize, ctx: &Arc<FieldContext>) -> Result<Vec<Vec<CycElem>>> {
    let mut a = m.clone();
    if let Some(row) = a.iter().find(|row| row.len() != cols) {
        return Err(Error::Input(format!(
            "row of length {} in a matrix with {cols} columns",
            row.len()
        )));
    }
    let pivots = rref(&mut a)?;
    let mut is_pivot = vec![None; cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut basis = Vec::with_capacity(cols - pivots.len());
    for free in 0..cols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![CycElem::zero(ctx); cols];
        v[free] = CycElem::one(ctx);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&a[r][free];
        }
        basis.push(v);
    }
    Ok(basis)
}

pub fn rank(m: &Matrix) -> Result<usize> {
    let mut a = m.clone();
    Ok(rref(&mut a)?.len())
}

pub fn mat_vec(m: &Matrix, v: &[CycElem], ctx: &Arc<FieldContext>) -> Vec<CycElem> {
    m.iter()
        .map(|row| dot(row, v, ctx))
        .collect()
}

pub fn dot(a: &[CycElem], b: &[CycElem], ctx: &Arc<FieldContext>) -> CycElem {
    let mut acc = CycElem::zero(ctx);
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

pub fn mat_mul(a: &Matrix, b: &Matrix, ctx: &Arc<FieldContext>) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let col: Vec<CycElem> = b.iter().map(|r| r[j].clone()).collect();
                    dot(row, &col, ctx)
                })
                .collect()
        })
        .collect()
}

/// Determinant of a square matrix by elimination.
pub fn det(m: &Matrix, ctx: &Arc<FieldContext>) -> Result<CycElem> {
    let n = m.len();
    let mut a = m.clone();
    let mut acc = CycElem::one(ctx);
    for c in 0..n {
        let Some(p) = pick_pivot(&a, c, c) else {
            return Ok(CycElem::zero(ctx));
        };
        if p != c {
            a.swap(p, c);
            acc = -acc;
        }
        let piv = a[c][c].clone();
        acc = &acc * &piv;
        let inv = piv.inv()?;
        let (top, below) = a.split_at_mut(c + 1);
        let pivot_row = &top[c];
        for row in below.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] * &inv;
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        }
    }
    Ok(acc)
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(m: &Matrix, ctx: &Arc<FieldContext>) -> Result<Option<Matrix>> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    CycElem::one(ctx)
                } else {
                    CycElem::zero(ctx)
                }
            }));
            r
        })
        .collect();
    let pivots = rref(&mut aug)?;
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Ok(None);
    }
    Ok(Some(aug.into_iter().map(|r| r[n..].to_vec()).collect()))
}

/// Solution of `A x = b` for square invertible `A`.
pub fn solve(a: &Matrix, b: &[CycElem]) -> Result<Option<Vec<CycElem>>> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug)?;
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return Ok(None);
    }
    Ok(Some(aug.into_iter().map(|r| r[n].clone()).collect()))
}

//! Text form of a line as the ideal of two linear forms, e.g. `(y+z,x-w)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::line::{Plane3, ProjLine3};
use crate::error::{Error, Result};
use crate::exactalg::{linalg, CycElem, Matrix, Rat};

const VARS: [&str; 4] = ["x", "y", "z", "w"];

/// Two linear forms cutting out the line, reduced so that the first is
/// solved for `y` and the second for `x` when possible, otherwise in
/// reduced echelon form over `x, y, z, w`.
pub fn line_ideal_forms(l: &ProjLine3) -> [Vec<CycElem>; 2] {
    let pencil = l.pencil();
    let h0 = pencil[0].clone();
    let h1 = pencil
        .iter()
        .find(|h| **h != h0)
        .expect("a line lies on two distinct planes")
        .clone();
    let ctx = l.context().clone();
    let order = [1usize, 0, 2, 3];
    let mut m: Matrix = [&h0, &h1]
        .iter()
        .map(|h| order.iter().map(|&k| h.coeffs()[k].clone()).collect())
        .collect();
    let pivots = linalg::rref(&mut m).expect("same field");
    let rows: Vec<Vec<CycElem>> = if pivots == [0, 1] {
        m.iter()
            .map(|r| {
                let mut out = vec![CycElem::zero(&ctx); 4];
                for (c, &k) in r.iter().zip(&order) {
                    out[k] = c.clone();
                }
                out
            })
            .collect()
    } else {
        let mut m: Matrix = vec![h0.coeffs().to_vec(), h1.coeffs().to_vec()];
        linalg::rref(&mut m).expect("same field");
        m
    };
    [primitive(rows[0].clone()), primitive(rows[1].clone())]
}

/// Clears denominators and content when all coefficients are rational.
fn primitive(row: Vec<CycElem>) -> Vec<CycElem> {
    let rats: Option<Vec<Rat>> = row.iter().map(CycElem::as_rational).collect();
    let Some(rats) = rats else {
        return row;
    };
    let den = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * Rat::from_integer(den.clone())).to_integer()).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return row;
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    let ctx = row[0].context().clone();
    ints.iter()
        .map(|x| CycElem::from_rat(&ctx, &Rat::from_integer(x / &g)))
        .collect()
}

fn format_form(row: &[CycElem]) -> String {
    let mut out = String::new();
    for (c, v) in row.iter().zip(VARS) {
        if c.is_zero() {
            continue;
        }
        let term = match c.as_rational() {
            Some(r) if r.is_integer() => {
                let n = r.to_integer();
                let mag = n.abs();
                let sign = if n.is_negative() { "-" } else if out.is_empty() { "" } else { "+" };
                if mag.is_one() {
                    format!("{sign}{v}")
                } else {
                    format!("{sign}{mag}{v}")
                }
            }
            _ => {
                let sign = if out.is_empty() { "" } else { "+" };
                format!("{sign}({c}){v}")
            }
        };
        out.push_str(&term);
    }
    out
}

/// `(f,g)` with the forms of [`line_ideal_forms`].
pub fn format_line_ideal(l: &ProjLine3) -> String {
    let [a, b] = line_ideal_forms(l);
    format!("({},{})", format_form(&a), format_form(&b))
}

/// Parses a form such as `x-z+2w` with integer coefficients.
fn parse_form(s: &str) -> Result<Vec<i64>> {
    let mut coeffs = vec![0i64; 4];
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = s.as_str();
    let bad = || Error::Input(format!("cannot parse linear form {s:?}"));
    while !rest.is_empty() {
        let (sign, after) = match rest.as_bytes()[0] {
            b'-' => (-1, &rest[1..]),
            b'+' => (1, &rest[1..]),
            _ => (1, rest),
        };
        let digits = after.chars().take_while(char::is_ascii_digit).count();
        let mag: i64 = if digits == 0 { 1 } else { after[..digits].parse().map_err(|_| bad())? };
        let var = after[digits..].chars().next().ok_or_else(bad)?;
        let k = VARS.iter().position(|v| v.starts_with(var)).ok_or_else(bad)?;
        coeffs[k] += sign * mag;
        rest = &after[digits + var.len_utf8()..];
    }
    Ok(coeffs)
}

/// Inverse of [`format_line_ideal`] for integer forms.
pub fn parse_line_ideal(s: &str, ctx: &std::sync::Arc<crate::exactalg::FieldContext>) -> Result<ProjLine3> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Input(format!("expected (f,g), got {s:?}")))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Input(format!("expected two forms in {s:?}")));
    }
    let plane = |t: &str| -> Result<Plane3> {
        Plane3::new(parse_form(t)?.iter().map(|&c| CycElem::from_i64(ctx, c)).collect())
    };
    let (h0, h1) = (plane(parts[0])?, plane(parts[1])?);
    ProjLine3::meet_planes(&h0, &h1)
}

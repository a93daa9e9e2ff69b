use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use super::Rat;

/// Integer coefficients of the N-th cyclotomic polynomial, lowest degree first.
///
/// Computed as `x^N - 1` divided by every `Φ_d` with `d | N`, `d < N`.
pub fn cyclotomic_coeffs(n: u32) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic polynomial needs N >= 1");
    let mut memo: HashMap<u32, Vec<i64>> = HashMap::new();
    cyclotomic_memo(n, &mut memo)
}

fn cyclotomic_memo(n: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_memo(d, memo);
            num = div_monic_exact(&num, &phi_d);
        }
    }
    memo.insert(n, num.clone());
    num
}

/// Exact division of integer polynomials by a monic divisor.
fn div_monic_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "non-exact cyclotomic division");
    quot
}

/// `Φ_N` as a dense polynomial over ℚ, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<Rat> {
    cyclotomic_coeffs(n).into_iter().map(super::rat::rat).collect()
}

pub fn euler_phi(n: u32) -> usize {
    let mut result = n as u64;
    let mut m = n as u64;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result as usize
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Shared data for arithmetic in ℚ(ζ_N).
#[derive(Debug)]
pub struct FieldContext {
    conductor: u32,
    phi: Vec<i64>,
    /// `x^(deg + k) mod Φ_N` for `k in 0..deg-1`.
    reduction: Vec<Vec<i64>>,
    /// `ζ^k` reduced, for `k in 0..N`.
    zeta_pows: Vec<Vec<i64>>,
}

impl FieldContext {
    /// Shared context for conductor `n`; contexts are interned so equal
    /// conductors share one allocation.
    pub fn get(n: u32) -> Arc<FieldContext> {
        static REGISTRY: OnceLock<Mutex<HashMap<u32, Arc<FieldContext>>>> = OnceLock::new();
        let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = reg.lock().expect("field registry poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(FieldContext::build(n)))
            .clone()
    }

    fn build(n: u32) -> FieldContext {
        assert!(n >= 1, "conductor must be positive");
        let phi = cyclotomic_coeffs(n);
        let deg = phi.len() - 1;

        // x^deg = -(phi[0] + ... + phi[deg-1] x^(deg-1))
        let mut cur: Vec<i64> = phi[..deg].iter().map(|c| -c).collect();
        let mut reduction = Vec::with_capacity(deg.saturating_sub(1));
        for _ in 0..deg.saturating_sub(1) {
            reduction.push(cur.clone());
            cur = mul_x_mod(&cur, &phi);
        }

        let mut zeta_pows = Vec::with_capacity(n as usize);
        let mut z = vec![0i64; deg];
        z[0] = 1;
        for _ in 0..n {
            zeta_pows.push(z.clone());
            z = mul_x_mod(&z, &phi);
        }
        FieldContext {
            conductor: n,
            phi,
            reduction,
            zeta_pows,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Degree of the field over ℚ, i.e. `φ(N)`.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn cyclotomic_polynomial(&self) -> &[i64] {
        &self.phi
    }

    pub(crate) fn reduction_row(&self, k: usize) -> &[i64] {
        &self.reduction[k]
    }

    /// Power-basis coordinates of `ζ^k` (exponent taken mod N).
    pub fn zeta_pow_coeffs(&self, k: i64) -> &[i64] {
        let n = self.conductor as i64;
        &self.zeta_pows[k.rem_euclid(n) as usize]
    }
}

fn mul_x_mod(p: &[i64], phi: &[i64]) -> Vec<i64> {
    let deg = p.len();
    let top = p[deg - 1];
    let mut out = vec![0i64; deg];
    for i in (1..deg).rev() {
        out[i] = p[i - 1];
    }
    if top != 0 {
        for i in 0..deg {
            out[i] -= top * phi[i];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: Φ_N = Π_{d | N} (x^d - 1)^{μ(N/d)}, multiplied out
    // over the integers with numerator/denominator kept separately.
    fn mobius(n: u32) -> i32 {
        let mut m = n;
        let mut k = 0;
        let mut p = 2;
        while p * p <= m {
            if m.is_multiple_of(p) {
                m /= p;
                if m.is_multiple_of(p) {
                    return 0;
                }
                k += 1;
            }
            p += 1;
        }
        if m > 1 {
            k += 1;
        }
        if k % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn poly_div(num: &[i64], den: &[i64]) -> Vec<i64> {
        let mut rem = num.to_vec();
        let dn = den.len() - 1;
        let lead = den[dn];
        let mut q = vec![0; num.len() - dn];
        for k in (0..q.len()).rev() {
            assert_eq!(rem[k + dn] % lead, 0);
            let c = rem[k + dn] / lead;
            q[k] = c;
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
        assert!(rem.iter().all(|&r| r == 0));
        q
    }

    fn mobius_oracle(n: u32) -> Vec<i64> {
        let mut top = vec![1i64];
        let mut bottom = vec![1i64];
        for d in 1..=n {
            if !n.is_multiple_of(d) {
                continue;
            }
            let mut f = vec![0i64; d as usize + 1];
            f[0] = -1;
            f[d as usize] = 1;
            match mobius(n / d) {
                1 => top = poly_mul(&top, &f),
                -1 => bottom = poly_mul(&bottom, &f),
                _ => {}
            }
        }
        poly_div(&top, &bottom)
    }

    #[test]
    fn base_cases() {
        assert_eq!(cyclotomic_coeffs(1), vec![-1, 1]);
        assert_eq!(cyclotomic_coeffs(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_coeffs(6), vec![1, -1, 1]);
    }

    #[test]
    fn phi_12_by_division_oracle() {
        // x^12 - 1 = Φ1 Φ2 Φ3 Φ4 Φ6 Φ12
        let mut rest = vec![0i64; 13];
        rest[0] = -1;
        rest[12] = 1;
        for f in [vec![-1, 1], vec![1, 1], vec![1, 1, 1], vec![1, 0, 1], vec![1, -1, 1]] {
            rest = poly_div(&rest, &f);
        }
        assert_eq!(rest, vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_coeffs(12), rest);
    }

    #[test]
    fn agrees_with_mobius_product() {
        for n in 1..=60 {
            assert_eq!(cyclotomic_coeffs(n), mobius_oracle(n), "N = {n}");
            assert_eq!(cyclotomic_coeffs(n).len() - 1, euler_phi(n));
        }
        // first N with a coefficient outside {-1, 0, 1}
        assert!(cyclotomic_coeffs(105).contains(&-2));
        assert_eq!(cyclotomic_coeffs(105), mobius_oracle(105));
    }

    #[test]
    fn zeta_to_the_n_is_one() {
        for n in [1u32, 2, 3, 4, 5, 8, 12, 20, 44] {
            let ctx = FieldContext::get(n);
            let one = ctx.zeta_pow_coeffs(0).to_vec();
            // ζ^(N-1) · ζ = ζ^N = 1
            let last = ctx.zeta_pow_coeffs(n as i64 - 1).to_vec();
            let wrapped = mul_x_mod(&last, ctx.cyclotomic_polynomial());
            assert_eq!(wrapped, one, "N = {n}");
        }
    }
}

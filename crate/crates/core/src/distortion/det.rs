//! Exact integer determinants.
//!
//! Small matrices use fraction-free Bareiss elimination over `BigInt`. Larger
//! ones are reduced modulo a set of 62-bit primes whose product exceeds a
//! caller-supplied bound on `|det|`, then recombined by the Chinese remainder
//! theorem. Both paths return the same integer.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::par::{self, Exec};

/// Matrices at most this size go through Bareiss directly.
pub const BAREISS_MAX_DIM: usize = 48;

/// Determinant by Bareiss elimination. `pivot_order` permutes the order in
/// which columns are eliminated; the result does not depend on it.
pub fn bareiss(matrix: &[Vec<i64>], pivot_order: Option<&[usize]>) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let perm: Vec<usize> = match pivot_order {
        Some(p) => p.to_vec(),
        None => (0..n).collect(),
    };
    // conjugating by a permutation leaves the determinant unchanged
    let mut a: Vec<Vec<BigInt>> =
        perm.iter().map(|&i| perm.iter().map(|&j| BigInt::from(matrix[i][j])).collect()).collect();
    let mut sign = false;
    let mut prev = BigInt::one();
    for c in 0..n {
        if a[c][c].is_zero() {
            match (c + 1..n).find(|&r| !a[r][c].is_zero()) {
                Some(r) => {
                    a.swap(c, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        let (head, tail) = a.split_at_mut(c + 1);
        let pivot_row = &head[c];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..n {
                let v = &row[j] * &pivot_row[c] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[c][c].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// Determinant of a matrix known to satisfy `0 <= det < 2^bound_bits`.
///
/// The `Exec` strategy spreads the per-prime eliminations across threads.
pub fn nonnegative_det(matrix: &[Vec<i64>], bound_bits: u64, exec: Exec) -> BigUint {
    let n = matrix.len();
    if n <= BAREISS_MAX_DIM {
        let d = bareiss(matrix, None);
        return d.to_biguint().expect("determinant assumed nonnegative");
    }
    let primes = primes_for_bits(bound_bits + 1);
    let residues = par::map(exec, &primes, |&p| det_mod(matrix, p));
    crt(&residues, &primes)
}

/// Largest primes below 2^62, enough that their product has `bits` bits.
fn primes_for_bits(bits: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut covered = 0u64;
    let mut cand = (1u64 << 62) - 1;
    while covered < bits {
        if is_prime(cand) {
            out.push(cand);
            covered += 61;
        }
        cand -= 2;
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Montgomery arithmetic modulo an odd prime below 2^62.
struct Montgomery {
    p: u64,
    /// `-p^{-1} mod 2^64`
    neg_inv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl Montgomery {
    fn new(p: u64) -> Self {
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = mul_mod(r, r, p);
        Montgomery { p, neg_inv: inv.wrapping_neg(), r2 }
    }

    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    /// `a * b * 2^-64 mod p`.
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a, self.r2)
    }
}

fn det_mod(matrix: &[Vec<i64>], p: u64) -> u64 {
    let n = matrix.len();
    let mont = Montgomery::new(p);
    let mut a: Vec<Vec<u64>> = matrix
        .iter()
        .map(|row| row.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect())
        .collect();
    let mut det = 1u64;
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if r != c {
            a.swap(c, r);
            det = p - det;
        }
        let pivot = a[c][c];
        det = mul_mod(det, pivot, p);
        let inv = pow_mod(pivot, p - 2, p);
        let (head, tail) = a.split_at_mut(c + 1);
        let pivot_row = &head[c][c + 1..];
        for row in tail.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            // factor in Montgomery form so that mul(factor, x) = factor * x
            let factor = mont.to_mont(mul_mod(row[c], inv, p));
            row[c] = 0;
            for (x, &y) in row[c + 1..].iter_mut().zip(pivot_row) {
                if y != 0 {
                    let t = mont.mul(factor, y);
                    *x = if *x >= t { *x - t } else { *x + p - t };
                }
            }
        }
    }
    det % p
}

fn crt(residues: &[u64], primes: &[u64]) -> BigUint {
    let mut value = BigUint::zero();
    let mut modulus = BigUint::one();
    for (&r, &p) in residues.iter().zip(primes) {
        let pm = BigUint::from(p);
        let cur = (&value % &pm).to_u64_digits().first().copied().unwrap_or(0);
        let m_mod = (&modulus % &pm).to_u64_digits().first().copied().unwrap_or(0);
        let diff = (r + p - cur % p) % p;
        let t = mul_mod(diff, pow_mod(m_mod, p - 2, p), p);
        value += &modulus * BigUint::from(t);
        modulus *= pm;
    }
    value
}

/// Bit length of a nonnegative determinant bound given as a product of factors.
pub fn bits_of_product(factors: impl IntoIterator<Item = u64>) -> u64 {
    factors.into_iter().map(|f| 64 - f.max(1).leading_zeros() as u64).sum()
}

#[cfg(test)]
fn to_unsigned(d: BigInt) -> Option<BigUint> {
    use num_bigint::Sign;
    use num_traits::Signed;
    match d.sign() {
        Sign::Minus => None,
        _ => Some(d.abs().to_biguint().unwrap()),
    }
}

//! Square roots modulo an odd prime (Tonelli-Shanks).

use super::primes::{is_prime, mulmod, powmod};
use super::symbols::kronecker;
use crate::Error;

/// A square root of `a` mod the odd prime `p`, or `None` when `a` is a
/// non-residue. Deterministic: the auxiliary non-residue is the least one.
/// The returned root r satisfies 0 ≤ r < p; the other root is p − r.
pub fn sqrt_mod(a: i64, p: u64) -> Result<Option<u64>, Error> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidModulus(p));
    }
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return Ok(Some(0));
    }
    if kronecker(a as i64, p as i64) != 1 {
        return Ok(None);
    }
    if p % 4 == 3 {
        return Ok(Some(powmod(a, (p + 1) / 4, p)));
    }
    // Tonelli-Shanks: p − 1 = q·2^s with q odd.
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = (2..p)
        .find(|&z| kronecker(z as i64, p as i64) == -1)
        .expect("odd prime has a quadratic non-residue");
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, q.div_ceil(2), p);
    while t != 1 {
        // least i with t^(2^i) = 1; 0 < i < m
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Ok(Some(r))
}

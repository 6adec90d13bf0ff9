//! Independently coded oracles shared by the integration tests.  These
//! deliberately avoid the library's own routines: trial division instead
//! of Miller-Rabin, the Euler criterion instead of Kronecker reciprocity,
//! brute-force search instead of Cornacchia.
#![allow(dead_code)]

pub fn trial_division_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn powmod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut bb = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % m as u128;
        }
        bb = bb * bb % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// Euler criterion: is a a nonzero square mod the odd prime p?
pub fn is_qr(a: u64, p: u64) -> bool {
    !a.is_multiple_of(p) && powmod(a, (p - 1) / 2, p) == 1
}

/// Does x² + bxy + cy² = p have an integer solution, for the principal
/// form (1, b, c) of discriminant d?  Quadratic-formula search over y.
pub fn represented_brute_force(p: u64, d: i64) -> bool {
    let ad = d.unsigned_abs();
    let (b, c): (i64, i64) = if d % 2 == 0 {
        (0, (ad / 4) as i64)
    } else {
        (1, ((1 + ad) / 4) as i64)
    };
    let ymax = ((4 * p / ad).isqrt() + 1) as i64;
    let p = p as i64;
    for y in 0..=ymax {
        let disc = b * b * y * y - 4 * (c * y * y - p);
        if disc < 0 {
            continue;
        }
        let r = (disc as u64).isqrt() as i64;
        if r * r != disc {
            continue;
        }
        for x2 in [-b * y + r, -b * y - r] {
            if x2 % 2 == 0 {
                let x = x2 / 2;
                if x * x + b * x * y + c * y * y == p {
                    return true;
                }
            }
        }
    }
    false
}

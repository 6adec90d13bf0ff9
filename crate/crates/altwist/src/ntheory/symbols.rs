//! The Kronecker symbol (a|n), the single quadratic-symbol primitive of the
//! crate. Legendre and Jacobi evaluations are the special cases with n an odd
//! prime resp. odd positive.

/// Kronecker symbol (a|n) ∈ {−1, 0, 1}, defined for all (a, n) ≠ (0, 0).
///
/// Conventions: (a|0) = 1 iff a = ±1; (a|−1) = −1 iff a < 0;
/// (a|2) = 0 for even a, +1 for a ≡ ±1 (mod 8), −1 for a ≡ ±3 (mod 8).
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut a = a;
    let mut n = n;
    // Strip the 2-part of n; each factor contributes (a|2).
    let mut twos = 0u32;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    let mut k: i32 = if twos.is_multiple_of(2) {
        1
    } else {
        match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => return 0, // a even with n even was caught above; unreachable
        }
    };
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // n is now odd and positive: Jacobi with quadratic reciprocity.
    a = a.rem_euclid(n);
    while a != 0 {
        let mut v = 0u32;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            k = -k;
        }
        if a % 4 == 3 && n % 4 == 3 {
            k = -k;
        }
        let r = a;
        a = n % r;
        n = r;
    }
    if n == 1 {
        k
    } else {
        0
    }
}

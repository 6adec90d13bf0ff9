//! Deterministic primality, factorization and prime sieving for u64.

use crate::Error;

pub(crate) const fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) const fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    a %= m;
    let mut acc = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

pub(crate) const fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// These twelve bases decide primality for every n < 3.3·10^24, in particular
// for the whole u64 range.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin, exact on all of u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'base: for &a in &MR_BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Pollard rho with a deterministic parameter schedule; `n` must be odd,
/// composite and not divisible by small primes (callers guarantee this).
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n % 2 == 1 && !is_prime(n));
    let mut c = 1u64;
    loop {
        let step = |x: u64| (mulmod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = step(x);
            y = step(step(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Full factorization, exponents included, ascending by prime.
pub(crate) fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut n = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    // What is left has no prime factor below 53; split it recursively.
    let mut stack = Vec::new();
    if n > 1 {
        stack.push(n);
    }
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            match out.iter_mut().find(|(p, _)| *p == m) {
                Some((_, e)) => *e += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    out
}

/// The ascending prime factors of a squarefree `n` (empty for n = 1).
/// Rejects n = 0 and any n with a repeated prime factor.
pub fn factor_squarefree(n: u64) -> Result<Vec<u64>, Error> {
    if n == 0 {
        return Err(Error::invalid_input("cannot factor 0"));
    }
    let facs = factorize(n);
    if facs.iter().any(|&(_, e)| e > 1) {
        return Err(Error::NotSquarefree(n));
    }
    Ok(facs.into_iter().map(|(p, _)| p).collect())
}

/// All primes in [lo, hi], ascending. Simple odds-only sieve; memory is
/// hi/16 bytes, fine for every bound the interfaces admit.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    primes_up_to(hi).into_iter().filter(|&p| p >= lo).collect()
}

/// All primes ≤ n, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    // odd[i] represents 2i+1; index 0 (the number 1) is not prime.
    let mut odd = vec![true; n / 2 + 1];
    odd[0] = false;
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if odd[i] {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j < odd.len() {
                odd[j] = false;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(n / (64.max(n.ilog2() as usize)) + 8);
    primes.push(2);
    primes.extend(
        odd.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &live)| (2 * i + 1, live))
            .take_while(|&(v, _)| v <= n)
            .filter_map(|(v, live)| live.then_some(v as u64)),
    );
    primes
}

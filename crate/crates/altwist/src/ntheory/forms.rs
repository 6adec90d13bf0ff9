//! Binary quadratic forms of negative discriminant: reduction, class
//! numbers, and representation of primes by the principal form.

use super::primes::{factorize, factor_squarefree, gcd, is_prime};
use super::sqrt::sqrt_mod;
use crate::Error;

/// A negative discriminant, i.e. an integer d < 0 with d ≡ 0 or 1 (mod 4).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Discriminant(i64);

impl Discriminant {
    pub fn new(d: i64) -> Result<Self, Error> {
        if d >= 0 || d.rem_euclid(4) > 1 {
            return Err(Error::InvalidDiscriminantValue(d));
        }
        Ok(Discriminant(d))
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn abs(self) -> u64 {
        self.0.unsigned_abs()
    }

    /// Decompose d = d₀·f² with d₀ fundamental; returns (d₀, f).
    pub fn fundamental_part(self) -> (Discriminant, u64) {
        let mut f = 1u64;
        let mut m = 1u64;
        for (p, e) in factorize(self.abs()) {
            f *= p.pow(e / 2);
            if e % 2 == 1 {
                m *= p;
            }
        }
        let sm = -(m as i64);
        if sm.rem_euclid(4) == 1 {
            (Discriminant(sm), f)
        } else {
            // d ≡ 0,1 (mod 4) forces the square part even here
            debug_assert_eq!(f % 2, 0);
            (Discriminant(4 * sm), f / 2)
        }
    }

    pub fn conductor(self) -> u64 {
        self.fundamental_part().1
    }

    pub fn is_fundamental(self) -> bool {
        self.conductor() == 1
    }
}

/// A reduced primitive positive-definite form a·x² + b·xy + c·y²:
/// |b| ≤ a ≤ c, with b ≥ 0 whenever |b| = a or a = c, and gcd(a,b,c) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReducedForm {
    pub a: u64,
    pub b: i64,
    pub c: u64,
}

impl ReducedForm {
    pub fn discriminant(self) -> i64 {
        self.b * self.b - 4 * (self.a as i64) * (self.c as i64)
    }
}

/// Walk the reduced primitive forms of discriminant d in (a, b) order,
/// charging one unit of `budget` per candidate pair inspected.
fn scan_reduced(
    d: Discriminant,
    budget: Option<u64>,
    mut emit: impl FnMut(ReducedForm),
) -> Result<(), Error> {
    let abs = d.abs();
    let mut work = 0u64;
    for a in 1..=(abs / 3).isqrt().max(1) {
        // b ≡ d (mod 2); step 2 keeps the parity
        let parity = d.0.rem_euclid(2);
        let mut b = -(a as i64);
        if b.rem_euclid(2) != parity {
            b += 1;
        }
        while b <= a as i64 {
            if let Some(budget) = budget {
                work += 1;
                if work > budget {
                    return Err(Error::BudgetExceeded { disc: d.0, budget });
                }
            }
            let num = (b * b) as u64 + abs;
            if num.is_multiple_of(4 * a) {
                let c = num / (4 * a);
                let on_boundary = b.unsigned_abs() == a || c == a;
                if c >= a && !(on_boundary && b < 0) && gcd(gcd(a, b.unsigned_abs()), c) == 1 {
                    emit(ReducedForm { a, b, c });
                }
            }
            b += 2;
        }
    }
    Ok(())
}

/// All reduced primitive forms of discriminant d, in ascending (a, b) order.
pub fn reduced_forms(d: Discriminant) -> Vec<ReducedForm> {
    let mut out = Vec::new();
    scan_reduced(d, None, |f| out.push(f)).expect("unbudgeted scan cannot fail");
    out
}

/// The class number h(d): reduced primitive forms of discriminant d.
/// Valid for any negative discriminant, fundamental or not.
pub fn class_number(d: Discriminant) -> u64 {
    let mut h = 0;
    scan_reduced(d, None, |_| h += 1).expect("unbudgeted scan cannot fail");
    h
}

/// As `class_number`, but gives up once more than `budget` coefficient
/// pairs have been inspected (the scan touches about |d|/3 of them).
pub fn class_number_within(d: Discriminant, budget: u64) -> Result<u64, Error> {
    let mut h = 0;
    scan_reduced(d, Some(budget), |_| h += 1)?;
    Ok(h)
}

/// Class number of ℚ(√−n) for squarefree n ≥ 1: h of the fundamental
/// discriminant −n (n ≡ 3 mod 4) or −4n (otherwise).
pub fn field_class_number(n: u64) -> Result<u64, Error> {
    factor_squarefree(n)?;
    let d = if n % 4 == 3 {
        Discriminant::new(-(n as i64))?
    } else {
        Discriminant::new(-4 * n as i64)?
    };
    debug_assert!(d.is_fundamental());
    Ok(class_number(d))
}

/// The principal form of discriminant d: x² + c·y² (d even) or
/// x² + xy + c·y² (d odd).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrincipalForm {
    d: Discriminant,
}

impl PrincipalForm {
    pub fn new(d: Discriminant) -> Self {
        PrincipalForm { d }
    }

    pub fn discriminant(self) -> Discriminant {
        self.d
    }

    /// (a, b, c) with a = 1 and b ∈ {0, 1}.
    pub fn coefficients(self) -> (u64, u64, u64) {
        let b = self.d.abs() % 2;
        (1, b, (b + self.d.abs()) / 4)
    }

    pub fn evaluate(self, x: i64, y: i64) -> i128 {
        let (_, b, c) = self.coefficients();
        let (x, y) = (x as i128, y as i128);
        x * x + (b as i128) * x * y + (c as i128) * y * y
    }
}

fn exact_square(n: u128) -> Option<u128> {
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

/// Does the principal form of the fundamental discriminant d represent the
/// odd unramified prime p?  Returns a witness (x, y) with form(x, y) = p
/// when it does.
///
/// Runs the modified Cornacchia algorithm on u² + |d|·v² = 4p and converts
/// the solution; every returned witness is re-checkable via `evaluate`.
pub fn represented_by_principal_form(
    p: u64,
    d: Discriminant,
) -> Result<Option<(i64, i64)>, Error> {
    if !is_prime(p) {
        return Err(Error::invalid_input(format!(
            "representation test needs a prime, got {p}"
        )));
    }
    if !d.is_fundamental() {
        return Err(Error::NonFundamentalDiscriminant(d.value()));
    }
    if p == 2 || d.abs().is_multiple_of(p) {
        return Err(Error::RamifiedPrime { p, disc: d.value() });
    }
    let abs = d.abs() as u128;
    let fourp = 4 * p as u128;
    if abs > fourp {
        return Ok(None);
    }
    let x0 = match sqrt_mod(d.value(), p)? {
        Some(r) => r,
        None => return Ok(None),
    };
    // lift the root to x₀ ≡ d (mod 2), so x₀² ≡ d (mod 4p)
    let x0 = if x0 % 2 == d.abs() % 2 { x0 } else { p - x0 };
    let mut a = 2 * p as u128;
    let mut b = x0 as u128;
    let limit = fourp.isqrt();
    while b > limit {
        let r = a % b;
        a = b;
        b = r;
    }
    let t = fourp - b * b;
    if !t.is_multiple_of(abs) {
        return Ok(None);
    }
    let (u, v) = match exact_square(t / abs) {
        Some(v) => (b, v),
        None => return Ok(None),
    };
    let (u, v) = (u as i64, v as i64);
    // 4·form(x, y) = (2x + by)² + |d|y², so u ≡ d·v (mod 2) lets us split u
    let witness = if d.abs().is_multiple_of(2) {
        debug_assert_eq!(u % 2, 0);
        (u / 2, v)
    } else {
        debug_assert_eq!((u - v) % 2, 0);
        ((u - v) / 2, v)
    };
    debug_assert_eq!(
        PrincipalForm::new(d).evaluate(witness.0, witness.1),
        p as i128
    );
    Ok(Some(witness))
}

//! Invariants of the modular curves X₀(N) for squarefree N: genus,
//! elliptic-point and cusp counts, fixed points of the Fricke involution
//! w_N, the quotient genus of X₀⁺(N), and the minimal degree of a
//! w_N-fixed point.
//!
//! Every twist of X₀(N) by w_N and a quadratic character has the same
//! genus as X₀(N) itself, so these invariants drive the hypothesis
//! checks in [`crate::cert`].

use crate::ntheory::{
    class_number, factor_squarefree, field_class_number, kronecker, Discriminant,
};
use crate::Error;

fn divisor_products(factors: &[u64]) -> (u128, i128, i128, u128) {
    let mut mu = 1u128; // ∏ (p+1), index of Γ₀(N)
    let mut nu2 = 1i128; // ∏ (1 + (−4|p)), order-2 elliptic points
    let mut nu3 = 1i128; // ∏ (1 + (−3|p)), order-3 elliptic points
    for &p in factors {
        mu *= (p + 1) as u128;
        nu2 *= 1 + kronecker(-4, p as i64) as i128;
        nu3 *= 1 + kronecker(-3, p as i64) as i128;
    }
    let nu_inf = 1u128 << factors.len(); // cusps: 2^ω(N)
    (mu, nu2, nu3, nu_inf)
}

/// Genus of X₀(N) for squarefree N ≥ 1.
pub fn x0_genus(n: u64) -> Result<u64, Error> {
    let factors = factor_squarefree(n)?;
    let (mu, nu2, nu3, nu_inf) = divisor_products(&factors);
    let twelve_g = 12 + mu as i128 - 3 * nu2 - 4 * nu3 - 6 * nu_inf as i128;
    if twelve_g < 0 || twelve_g % 12 != 0 {
        return Err(Error::IntegralityViolation {
            context: "x0 genus formula",
            numerator: twelve_g,
            denominator: 12,
        });
    }
    Ok((twelve_g / 12) as u64)
}

fn require_involution(n: u64) -> Result<Vec<u64>, Error> {
    if n < 2 {
        return Err(Error::invalid_input(format!(
            "w_N needs N >= 2, got {n} (w_1 is the identity)"
        )));
    }
    factor_squarefree(n)
}

/// Number of fixed points of w_N on X₀(N) over the algebraic closure,
/// for squarefree N ≥ 2.  Counts CM points of discriminants −4N, and
/// −N when N ≡ 3 (mod 4); w₂ additionally fixes the two points of
/// discriminant −4.
pub fn wn_fixed_count(n: u64) -> Result<u64, Error> {
    require_involution(n)?;
    let mut nu = class_number(Discriminant::new(-4 * n as i64)?);
    if n % 4 == 3 {
        nu += class_number(Discriminant::new(-(n as i64))?);
    }
    if n == 2 {
        nu += class_number(Discriminant::new(-4)?);
    }
    Ok(nu)
}

/// Genus of X₀⁺(N) = X₀(N)/w_N via Riemann–Hurwitz:
/// g⁺ = (2g + 2 − ν)/4.
pub fn x0_plus_genus(n: u64) -> Result<u64, Error> {
    let g = x0_genus(n)?;
    let nu = wn_fixed_count(n)?;
    let numerator = 2 * g as i128 + 2 - nu as i128;
    if numerator < 0 || numerator % 4 != 0 {
        return Err(Error::IntegralityViolation {
            context: "x0 plus genus (Riemann-Hurwitz)",
            numerator,
            denominator: 4,
        });
    }
    Ok((numerator / 4) as u64)
}

/// Minimum of [ℚ(P) : ℚ] over the w_N-fixed points P of X₀(N): equals
/// the class number of ℚ(√−N).  In particular the fixed points are all
/// irrational exactly when that class number exceeds 1.
pub fn min_fixed_degree(n: u64) -> Result<u64, Error> {
    require_involution(n)?;
    field_class_number(n)
}

/// Largest squarefree N ≤ bound with x0_plus_genus(N) ≤ 1.
pub fn largest_low_genus_plus(bound: u64) -> Result<u64, Error> {
    if bound < 2 {
        return Err(Error::invalid_input(format!(
            "scan needs bound >= 2, got {bound}"
        )));
    }
    for n in (2..=bound).rev() {
        if factor_squarefree(n).is_err() {
            continue;
        }
        if x0_plus_genus(n)? <= 1 {
            return Ok(n);
        }
    }
    unreachable!("x0_plus_genus(2) = 0, so the scan always terminates")
}

/// The full invariant record for one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X0Invariants {
    pub n: u64,
    pub genus: u64,
    pub nu2: u64,
    pub nu3: u64,
    pub nu_inf: u64,
    pub wn_fixed: u64,
    pub genus_plus: u64,
    pub min_fixed_degree: u64,
}

impl X0Invariants {
    /// Compute all invariants of X₀(N), re-checking the two exact
    /// identities that tie them together:
    ///
    /// * 12(g − 1) + 3ν₂ + 4ν₃ + 6ν_∞ = ∏_{p|N}(p + 1)
    /// * 2g − 2 = 2(2g⁺ − 2) + ν  (with ν even)
    pub fn compute(n: u64) -> Result<Self, Error> {
        let factors = require_involution(n)?;
        let (mu, nu2, nu3, nu_inf) = divisor_products(&factors);
        let genus = x0_genus(n)?;
        let wn_fixed = wn_fixed_count(n)?;
        let genus_plus = x0_plus_genus(n)?;
        let inv = X0Invariants {
            n,
            genus,
            nu2: nu2 as u64,
            nu3: nu3 as u64,
            nu_inf: nu_inf as u64,
            wn_fixed,
            genus_plus,
            min_fixed_degree: min_fixed_degree(n)?,
        };
        let lhs = 12 * (genus as i128 - 1) + 3 * nu2 + 4 * nu3 + 6 * nu_inf as i128;
        if lhs != mu as i128 {
            return Err(Error::IntegralityViolation {
                context: "x0 index identity",
                numerator: lhs,
                denominator: mu as i128,
            });
        }
        let rh = 2 * (2 * genus_plus as i128 - 2) + wn_fixed as i128;
        if wn_fixed % 2 != 0 || 2 * genus as i128 - 2 != rh {
            return Err(Error::IntegralityViolation {
                context: "x0 Riemann-Hurwitz identity",
                numerator: rh,
                denominator: 2 * genus as i128 - 2,
            });
        }
        Ok(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_pinned() {
        // classical small levels, plus a value cross-checked by the
        // index identity below
        let cases = [
            (1, 0),
            (2, 0),
            (3, 0),
            (5, 0),
            (6, 0),
            (7, 0),
            (10, 0),
            (11, 1),
            (13, 0),
            (14, 1),
            (15, 1),
            (17, 1),
            (19, 1),
            (21, 1),
            (22, 2),
            (23, 2),
            (37, 2),
            (67, 5),
            (131, 11),
            (137, 11),
            (163, 13),
            (167, 14),
        ];
        for (n, g) in cases {
            assert_eq!(x0_genus(n).unwrap(), g, "genus of X0({n})");
        }
        assert_eq!(x0_genus(12), Err(Error::NotSquarefree(12)));
    }

    #[test]
    fn fixed_counts_pinned() {
        assert_eq!(wn_fixed_count(2).unwrap(), 2); // h(−8) + h(−4)
        assert_eq!(wn_fixed_count(3).unwrap(), 2); // h(−12) + h(−3)
        assert_eq!(wn_fixed_count(11).unwrap(), 4); // h(−44) + h(−11) = 3 + 1
        assert_eq!(wn_fixed_count(67).unwrap(), 4); // h(−268) + h(−67) = 3 + 1
        assert_eq!(wn_fixed_count(137).unwrap(), 8); // h(−548)
        assert!(wn_fixed_count(1).is_err());
    }

    #[test]
    fn plus_genus_pinned() {
        assert_eq!(x0_plus_genus(11).unwrap(), 0);
        assert_eq!(x0_plus_genus(67).unwrap(), 2);
        assert_eq!(x0_plus_genus(131).unwrap(), 1);
        assert_eq!(x0_plus_genus(137).unwrap(), 4);
        assert_eq!(x0_plus_genus(167).unwrap(), 2);
    }

    #[test]
    fn min_degrees_pinned() {
        assert_eq!(min_fixed_degree(163).unwrap(), 1);
        assert_eq!(min_fixed_degree(23).unwrap(), 3);
        assert_eq!(min_fixed_degree(14).unwrap(), 4); // h(−56), fundamental
        assert_eq!(min_fixed_degree(167).unwrap(), 11);
        assert!(min_fixed_degree(1).is_err());
    }

    #[test]
    fn rational_fixed_point_levels_up_to_200() {
        // levels whose w_N-fixed points include a rational point
        let got: Vec<u64> = (2..=200)
            .filter(|&n| factor_squarefree(n).is_ok())
            .filter(|&n| min_fixed_degree(n).unwrap() == 1)
            .collect();
        assert_eq!(got, vec![2, 3, 7, 11, 19, 43, 67, 163]);
    }

    #[test]
    fn scan_finds_131() {
        assert_eq!(largest_low_genus_plus(1000).unwrap(), 131);
        assert_eq!(largest_low_genus_plus(10).unwrap(), 10);
        assert_eq!(largest_low_genus_plus(2).unwrap(), 2);
        assert!(largest_low_genus_plus(1).is_err());
    }

    #[test]
    fn identities_hold_on_a_window() {
        for n in 2..=500 {
            if factor_squarefree(n).is_err() {
                continue;
            }
            let inv = X0Invariants::compute(n).unwrap();
            assert_eq!(inv.nu_inf, 1 << factor_squarefree(n).unwrap().len());
            assert_eq!(inv.wn_fixed % 2, 0, "nu odd at N = {n}");
        }
    }

    #[test]
    fn genus_grows_along_primes() {
        for n in 2..=500 {
            if crate::ntheory::is_prime(n) {
                let g = x0_genus(n).unwrap() as i128;
                assert!(g >= (n as i128 - 13) / 12 - 1, "N = {n}");
            }
        }
    }
}

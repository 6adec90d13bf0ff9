//! Invariants of Shimura curves X^D attached to indefinite rational
//! quaternion algebras of squarefree discriminant D (an even number of
//! prime factors): genus, Atkin-Lehner fixed-point counts, and the genera
//! of the quotients X^{D+} = X^D/w_D, X^D/⟨w_D, w_q⟩, and X^D/W for the
//! full Atkin-Lehner group W.
//!
//! These curves have no cusps, so all fixed-point counting is pure CM
//! arithmetic: ν(w_m) sums class numbers h(d) over the CM discriminants
//! d attached to m, with local embedding factors at the primes of D/m.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::ntheory::{
    class_number, factor_squarefree, field_class_number, is_prime, kronecker, Discriminant,
};
use crate::{Error, Rational};

/// A quaternion discriminant D = p₁⋯p_{2r}, optionally with a designated
/// prime divisor q (the involution w_q under study).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShimuraDescriptor {
    d: u64,
    factors: Vec<u64>,
    q: Option<u64>,
}

impl ShimuraDescriptor {
    pub fn new(d: u64) -> Result<Self, Error> {
        let factors = factor_squarefree(d).map_err(|e| match e {
            Error::NotSquarefree(_) => Error::InvalidDiscriminant {
                d,
                reason: "not squarefree",
            },
            other => other,
        })?;
        if factors.len() < 2 || factors.len() % 2 != 0 {
            return Err(Error::InvalidDiscriminant {
                d,
                reason: "needs an even number (at least 2) of prime factors",
            });
        }
        Ok(ShimuraDescriptor { d, factors, q: None })
    }

    pub fn with_involution(d: u64, q: u64) -> Result<Self, Error> {
        let mut desc = Self::new(d)?;
        if !desc.factors.contains(&q) {
            return Err(Error::invalid_input(format!(
                "q = {q} is not a prime divisor of D = {d}"
            )));
        }
        desc.q = Some(q);
        Ok(desc)
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn q(&self) -> Option<u64> {
        self.q
    }

    /// All exact divisors of D (including 1 and D), ascending.  For
    /// squarefree D every divisor is exact.
    pub fn exact_divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &p in &self.factors {
            let with_p: Vec<u64> = divs.iter().map(|m| m * p).collect();
            divs.extend(with_p);
        }
        divs.sort_unstable();
        divs
    }
}

/// Genus of X^D: 12(g − 1) = ∏(p − 1) − 3e₂ − 4e₃ with
/// e₂ = ∏(1 − (−4|p)) and e₃ = ∏(1 − (−3|p)).
pub fn xd_genus(desc: &ShimuraDescriptor) -> Result<u64, Error> {
    let (phi, e2, e3) = elliptic_data(desc);
    let twelve_g = 12 + phi as i128 - 3 * e2 as i128 - 4 * e3 as i128;
    if twelve_g < 0 || twelve_g % 12 != 0 {
        return Err(Error::IntegralityViolation {
            context: "xd genus formula",
            numerator: twelve_g,
            denominator: 12,
        });
    }
    Ok((twelve_g / 12) as u64)
}

fn elliptic_data(desc: &ShimuraDescriptor) -> (u128, u64, u64) {
    let mut phi = 1u128;
    let mut e2 = 1u64;
    let mut e3 = 1u64;
    for &p in desc.factors() {
        phi *= (p - 1) as u128;
        e2 *= (1 - kronecker(-4, p as i64)) as u64;
        e3 *= (1 - kronecker(-3, p as i64)) as u64;
    }
    (phi, e2, e3)
}

/// CM discriminants contributing fixed points to w_m.
fn cm_discriminants(m: u64) -> Vec<i64> {
    let mut ds = vec![-4 * m as i64];
    if m % 4 == 3 {
        ds.push(-(m as i64));
    }
    if m == 2 {
        ds.push(-4);
    }
    ds
}

/// Number of fixed points of w_m on X^D, for an exact divisor m > 1:
///
///   ν(w_m) = Σ_{d} h(d) · ∏_{p | D/m} local(d, p)
///
/// over the CM discriminants d of m, where local(d, p) = 0 when p divides
/// the conductor of d (no optimal embedding of a locally non-maximal
/// order) and 1 − (d|p) otherwise.
pub fn al_fixed_count(desc: &ShimuraDescriptor, m: u64) -> Result<u64, Error> {
    if m <= 1 || !desc.d.is_multiple_of(m) {
        return Err(Error::NotExactDivisor { d: desc.d, m });
    }
    let cofactor = desc.d / m;
    let mut nu = 0u64;
    for dv in cm_discriminants(m) {
        let disc = Discriminant::new(dv)?;
        let conductor = disc.conductor();
        let mut weight = 1u64;
        for &p in desc.factors().iter().filter(|&&p| cofactor.is_multiple_of(p)) {
            weight *= if conductor % p == 0 {
                0
            } else {
                (1 - kronecker(dv, p as i64)) as u64
            };
        }
        nu += class_number(disc) * weight;
    }
    Ok(nu)
}

/// Genus of X^{D+} = X^D/w_D: (2g + 2 − ν(w_D))/4.
pub fn xd_plus_genus(desc: &ShimuraDescriptor) -> Result<u64, Error> {
    let g = xd_genus(desc)?;
    let nu = al_fixed_count(desc, desc.d)?;
    quotient_genus(
        "xd plus genus (Riemann-Hurwitz)",
        2 * g as i128 + 2 - nu as i128,
        4,
    )
}

fn quotient_genus(context: &'static str, numerator: i128, denominator: i128) -> Result<u64, Error> {
    if numerator < 0 || numerator % denominator != 0 {
        return Err(Error::IntegralityViolation {
            context,
            numerator,
            denominator,
        });
    }
    Ok((numerator / denominator) as u64)
}

fn klein_from_counts(g: u64, nu_q: u64, nu_dq: u64, nu_d: u64) -> Result<u64, Error> {
    quotient_genus(
        "klein quotient genus (Riemann-Hurwitz)",
        2 * g as i128 + 6 - (nu_q + nu_dq + nu_d) as i128,
        8,
    )
}

/// Genus of X^D/⟨w_D, w_q⟩ for the designated q:
/// (2g + 6 − ν(w_q) − ν(w_{D/q}) − ν(w_D))/8.
///
/// Uses that distinct Atkin-Lehner involutions fix disjoint point sets
/// (their CM fields differ); a violation would surface as a failed
/// integrality check.
pub fn klein_quotient_genus(desc: &ShimuraDescriptor) -> Result<u64, Error> {
    let q = desc
        .q
        .ok_or_else(|| Error::invalid_input("descriptor has no designated prime q"))?;
    let g = xd_genus(desc)?;
    klein_from_counts(
        g,
        al_fixed_count(desc, q)?,
        al_fixed_count(desc, desc.d / q)?,
        al_fixed_count(desc, desc.d)?,
    )
}

/// Genus of the full Atkin-Lehner quotient X^D/W, |W| = 2^ω:
/// (2g − 2 + 2·2^ω − Σ_m ν(w_m)) / (2·2^ω).
pub fn full_quotient_genus(desc: &ShimuraDescriptor) -> Result<u64, Error> {
    let g = xd_genus(desc)?;
    let mut total = 0u64;
    for m in desc.exact_divisors() {
        if m > 1 {
            total += al_fixed_count(desc, m)?;
        }
    }
    let order = 1i128 << desc.factors().len();
    quotient_genus(
        "full quotient genus (Riemann-Hurwitz)",
        2 * g as i128 - 2 + 2 * order - total as i128,
        2 * order,
    )
}

/// The invariant record for one discriminant, with every Atkin-Lehner
/// fixed-point count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShimuraInvariants {
    pub d: u64,
    pub q: Option<u64>,
    pub genus_xd: u64,
    pub e2: u64,
    pub e3: u64,
    /// ν(w_m) for every exact divisor m > 1, keyed by m.
    pub al_fixed: BTreeMap<u64, u64>,
    pub genus_xd_plus: u64,
    /// Genus of X^D/⟨w_D, w_q⟩; present when q is designated.
    pub genus_klein: Option<u64>,
    /// Genus of the quotient by the full Atkin-Lehner group.
    pub genus_full: u64,
}

impl ShimuraInvariants {
    /// Compute everything and re-check the exact identities tying the
    /// fields together (index formula, parity, Riemann–Hurwitz for each
    /// quotient).  Any failure is an `IntegralityViolation`.
    pub fn compute(desc: &ShimuraDescriptor) -> Result<Self, Error> {
        let (phi, e2, e3) = elliptic_data(desc);
        let genus_xd = xd_genus(desc)?;
        let mut al_fixed = BTreeMap::new();
        for m in desc.exact_divisors() {
            if m > 1 {
                let nu = al_fixed_count(desc, m)?;
                if nu % 2 != 0 {
                    return Err(Error::IntegralityViolation {
                        context: "fixed-point parity",
                        numerator: nu as i128,
                        denominator: 2,
                    });
                }
                al_fixed.insert(m, nu);
            }
        }
        let lhs = 12 * (genus_xd as i128 - 1) + 3 * e2 as i128 + 4 * e3 as i128;
        if lhs != phi as i128 {
            return Err(Error::IntegralityViolation {
                context: "xd index identity",
                numerator: lhs,
                denominator: phi as i128,
            });
        }
        let genus_xd_plus = xd_plus_genus(desc)?;
        let genus_klein = match desc.q {
            Some(_) => Some(klein_quotient_genus(desc)?),
            None => None,
        };
        Ok(ShimuraInvariants {
            d: desc.d,
            q: desc.q,
            genus_xd,
            e2,
            e3,
            al_fixed,
            genus_xd_plus,
            genus_klein,
            genus_full: full_quotient_genus(desc)?,
        })
    }
}

/// One admissibility check for building a family D = q·p₂⋯p_{2r}: does
/// the involution w_q on X^{D+} have fixed points, none of them rational,
/// with a finite-point quotient?
///
/// The classical side condition "(q|pᵢ) ≠ 1 for all i" is evaluated both
/// literally and with −q (the CM-field reading); the decision rests on the
/// computed fixed-point count, and `divergence` flags any case where the
/// literal condition and the computed one disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub d: u64,
    pub q: u64,
    pub q_large: bool,
    pub legendre_literal: bool,
    pub legendre_negated: bool,
    pub fixed_points_exist: bool,
    pub no_rational_fixed: bool,
    pub quotient_finite: bool,
    pub divergence: bool,
    pub admissible: bool,
}

pub fn shimura_family_admissible(q: u64, rest: &[u64]) -> Result<AdmissibilityReport, Error> {
    if !is_prime(q) {
        return Err(Error::invalid_input(format!("q = {q} is not prime")));
    }
    if rest.len() % 2 != 1 {
        return Err(Error::invalid_input(
            "need an odd number of companion primes (so ω(D) is even)",
        ));
    }
    let mut d = q;
    for &p in rest {
        if !is_prime(p) {
            return Err(Error::invalid_input(format!("companion {p} is not prime")));
        }
        d = d
            .checked_mul(p)
            .ok_or_else(|| Error::invalid_input("discriminant overflows u64"))?;
    }
    // distinctness comes out in the wash: a repeated prime makes D
    // non-squarefree and the descriptor constructor rejects it
    let desc = ShimuraDescriptor::with_involution(d, q)?;
    let legendre_literal = rest
        .iter()
        .all(|&p| kronecker(q as i64, p as i64) != 1);
    let legendre_negated = rest
        .iter()
        .all(|&p| kronecker(-(q as i64), p as i64) != 1);
    let fixed_points_exist = al_fixed_count(&desc, q)? > 0;
    let no_rational_fixed = field_class_number(q)? >= 2;
    let quotient_finite = klein_quotient_genus(&desc)? >= 2;
    let q_large = q > 163;
    Ok(AdmissibilityReport {
        d,
        q,
        q_large,
        legendre_literal,
        legendre_negated,
        fixed_points_exist,
        no_rational_fixed,
        quotient_finite,
        divergence: legendre_literal != fixed_points_exist,
        admissible: q_large && fixed_points_exist && no_rational_fixed && quotient_finite,
    })
}

/// Largest D ≤ limit for which some prime q | D leaves the quotient
/// X^D/⟨w_D, w_q⟩ of genus ≤ 1 — the empirical threshold below which the
/// finiteness hypothesis can fail.
pub fn scan_d0(limit: u64) -> Result<u64, Error> {
    if limit < 6 {
        return Err(Error::invalid_input(format!(
            "no quaternion discriminant below 6; got limit {limit}"
        )));
    }
    for d in (6..=limit).rev() {
        let desc = match ShimuraDescriptor::new(d) {
            Ok(desc) => desc,
            Err(_) => continue,
        };
        let g = xd_genus(&desc)?;
        let counts: BTreeMap<u64, u64> = desc
            .exact_divisors()
            .into_iter()
            .filter(|&m| m > 1)
            .map(|m| Ok((m, al_fixed_count(&desc, m)?)))
            .collect::<Result<_, Error>>()?;
        for &q in desc.factors() {
            let klein = klein_from_counts(g, counts[&q], counts[&(d / q)], counts[&d])?;
            if klein <= 1 {
                return Ok(d);
            }
        }
    }
    unreachable!("D = 6 always qualifies (all quotients have genus 0)")
}

/// Exact value of 1 − (1 − num/den)^trials: the chance that at least one
/// of `trials` independent events of probability num/den occurs.
pub fn cm_density_heuristic(trials: u32, num: u64, den: u64) -> Result<Rational, Error> {
    if den == 0 || num > den {
        return Err(Error::InvalidProbability { num, den });
    }
    let miss = Rational::one() - Rational::new(BigInt::from(num), BigInt::from(den));
    let mut acc = Rational::one();
    let mut base = miss;
    let mut e = trials;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    Ok(Rational::one() - acc)
}

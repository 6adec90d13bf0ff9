//! Arithmetic of prime quadratic twists of modular curves by Atkin-Lehner
//! involutions.
//!
//! The library computes, with exact integer arithmetic throughout:
//!
//! * classical number theory: Kronecker symbols, deterministic primality,
//!   square roots mod p, class numbers of imaginary quadratic orders by
//!   reduced-form enumeration, and representability of primes by principal
//!   forms via Cornacchia's algorithm ([`ntheory`]);
//! * invariants of the modular curves X₀(N) and their Atkin-Lehner quotients
//!   X₀(N)/w_N: genus, elliptic point counts, fixed-point counts of w_N and
//!   the minimal degree of a fixed point ([`x0`]);
//! * invariants of Shimura curves X^D attached to indefinite quaternion
//!   algebras, their involutions w_m, and the quotients relevant to twisting
//!   ([`shimura`]);
//! * prime condition sets under which the quadratic twist of such a curve by
//!   a prime p is everywhere locally solvable while (for all but finitely
//!   many qualifying p) having no rational point, Chebotarev density lower
//!   bounds for those sets, and machine-checkable certificates ([`cert`]).
//!
//! Everything is a pure function of its arguments: no floats in any decision
//! path, no randomness, no global state, so byte-identical outputs across
//! runs. Rationals (densities, heuristics) use exact big rationals.

pub mod cert;
mod error;
pub mod ntheory;
pub mod shimura;
pub mod x0;

pub use error::Error;

/// Exact rational type used for densities and probabilities.
pub type Rational = num_rational::BigRational;

//! The twist-certificate engine.
//!
//! Given a curve with involution — X₀(N) with w_N, or X^{D+} with w_q —
//! this module checks the four hypotheses under which prime quadratic
//! twists violate the Hasse principle for all but finitely many
//! qualifying p, builds the explicit set of congruence/splitting
//! conditions a prime must satisfy, computes an exact Chebotarev density
//! lower bound for that set, enumerates qualifying primes up to a bound,
//! and assembles everything into a self-verifying certificate.
//!
//! Certificates never claim an unconditional Hasse-principle violation
//! for a listed prime: the finitely-many-exceptions step is ineffective,
//! and every certificate carries that caveat.

mod json;

pub use json::{certificate_from_json, certificate_to_canonical_json};

use num_bigint::BigInt;
use num_traits::One;

use crate::ntheory::{
    field_class_number, is_prime, kronecker, primes_up_to, represented_by_principal_form,
    Discriminant,
};
use crate::shimura::{al_fixed_count, klein_quotient_genus, xd_plus_genus, ShimuraDescriptor};
use crate::x0::{min_fixed_degree, wn_fixed_count, x0_genus, x0_plus_genus};
use crate::{Error, Rational};

/// The (curve, involution) pair under study.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveDescriptor {
    /// X₀(N) with the Fricke involution w_N, N squarefree ≥ 2.
    X0N { n: u64 },
    /// X^{D+} with the induced Atkin-Lehner involution w_q, q | D prime.
    XDPlus { shimura: ShimuraDescriptor },
}

impl CurveDescriptor {
    pub fn x0(n: u64) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::invalid_input(format!(
                "X0(N) needs N >= 2 for a nontrivial w_N, got {n}"
            )));
        }
        crate::ntheory::factor_squarefree(n)?;
        Ok(CurveDescriptor::X0N { n })
    }

    pub fn xd_plus(d: u64, q: u64) -> Result<Self, Error> {
        Ok(CurveDescriptor::XDPlus {
            shimura: ShimuraDescriptor::with_involution(d, q)?,
        })
    }

    pub fn label(&self) -> String {
        match self {
            CurveDescriptor::X0N { n } => format!("X0({n}) with w_{n}"),
            CurveDescriptor::XDPlus { shimura } => format!(
                "X^{}+ with w_{}",
                shimura.d(),
                shimura.q().expect("descriptor carries q")
            ),
        }
    }

    /// Primes of bad reduction of the curve being twisted.
    pub fn bad_primes(&self) -> Vec<u64> {
        match self {
            CurveDescriptor::X0N { n } => {
                crate::ntheory::factor_squarefree(*n).expect("validated at construction")
            }
            CurveDescriptor::XDPlus { shimura } => shimura.factors().to_vec(),
        }
    }

    /// The squarefree level whose imaginary quadratic field ℚ(√−level)
    /// contains the involution's fixed points.
    pub fn cm_level(&self) -> u64 {
        match self {
            CurveDescriptor::X0N { n } => *n,
            CurveDescriptor::XDPlus { shimura } => shimura.q().expect("descriptor carries q"),
        }
    }

    /// Fundamental discriminant of ℚ(√−cm_level).
    pub fn cm_discriminant(&self) -> Discriminant {
        let l = self.cm_level() as i64;
        let d = if l % 4 == 3 { -l } else { -4 * l };
        Discriminant::new(d).expect("level is squarefree, so this is a discriminant")
    }

    /// Genus of the curve the twists are made of (equal to the genus of
    /// every twist).
    pub fn genus(&self) -> Result<u64, Error> {
        match self {
            CurveDescriptor::X0N { n } => x0_genus(*n),
            CurveDescriptor::XDPlus { shimura } => xd_plus_genus(shimura),
        }
    }
}

/// How hypothesis (iii) — points everywhere locally on the untwisted
/// curve side — is discharged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalPointsEvidence {
    /// X₀(N): the rational cusps give points over every completion.
    ProvenCusps,
    /// X^{D+}: everywhere-local solvability is imported from the
    /// literature, not re-proven here.
    CitedFact,
    Unknown,
}

/// Verdict on the four hypotheses of the twisting criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    /// (i) no rational fixed point of the involution.
    pub h1_no_rational_fixed: bool,
    /// The class number deciding (i): every fixed point generates a
    /// field of this degree or larger.
    pub h1_class_number: u64,
    pub h1_justification: String,
    /// (ii) the involution has fixed points over the algebraic closure.
    pub h2_geometric_fixed: bool,
    pub fixed_points: u64,
    /// (iii) the curve has points everywhere locally.
    pub h3_local_points: LocalPointsEvidence,
    /// (iv) the quotient by the involution has finitely many rational
    /// points, forced by quotient genus ≥ 2.
    pub h4_quotient_finite: bool,
    pub genus: u64,
    pub quotient_genus: u64,
}

impl HypothesisReport {
    pub fn all_hold(&self) -> bool {
        self.h1_no_rational_fixed
            && self.h2_geometric_fixed
            && self.h3_local_points != LocalPointsEvidence::Unknown
            && self.h4_quotient_finite
    }

    pub fn first_failing(&self) -> Option<&'static str> {
        if !self.h1_no_rational_fixed {
            return Some("h1 (no rational fixed point)");
        }
        if !self.h2_geometric_fixed {
            return Some("h2 (geometric fixed points exist)");
        }
        if self.h3_local_points == LocalPointsEvidence::Unknown {
            return Some("h3 (points everywhere locally)");
        }
        if !self.h4_quotient_finite {
            return Some("h4 (finitely many quotient points)");
        }
        None
    }
}

pub fn check_hypotheses(desc: &CurveDescriptor) -> Result<HypothesisReport, Error> {
    match desc {
        CurveDescriptor::X0N { n } => {
            let h = min_fixed_degree(*n)?;
            let nu = wn_fixed_count(*n)?;
            let genus = x0_genus(*n)?;
            let quotient_genus = x0_plus_genus(*n)?;
            Ok(HypothesisReport {
                h1_no_rational_fixed: h >= 2,
                h1_class_number: h,
                h1_justification: format!(
                    "every w_{n}-fixed point generates a degree-h field, h(Q(sqrt(-{n}))) = {h}"
                ),
                h2_geometric_fixed: nu > 0,
                fixed_points: nu,
                h3_local_points: LocalPointsEvidence::ProvenCusps,
                h4_quotient_finite: quotient_genus >= 2,
                genus,
                quotient_genus,
            })
        }
        CurveDescriptor::XDPlus { shimura } => {
            let q = shimura.q().expect("descriptor carries q");
            let h = field_class_number(q)?;
            let nu = al_fixed_count(shimura, q)?;
            let genus = xd_plus_genus(shimura)?;
            let quotient_genus = klein_quotient_genus(shimura)?;
            Ok(HypothesisReport {
                // q > 163 keeps every CM point of class number 1 out of
                // the picture, not just the fixed ones of w_q
                h1_no_rational_fixed: h >= 2 && q > 163,
                h1_class_number: h,
                h1_justification: format!(
                    "fixed points of w_{q} generate the Hilbert class field of Q(sqrt(-{q})), \
                     h = {h}, and q > 163 rules out rational CM"
                ),
                h2_geometric_fixed: nu > 0,
                fixed_points: nu,
                h3_local_points: LocalPointsEvidence::CitedFact,
                h4_quotient_finite: quotient_genus >= 2,
                genus,
                quotient_genus,
            })
        }
    }
}

/// Largest ℓ ≥ 1 for which the Weil lower bound ℓ + 1 − 2g√ℓ fails to be
/// positive, by the exact integer test (ℓ+1)² ≤ 4g²ℓ.  Every prime above
/// this threshold carries a smooth point on any genus-g reduction.
pub fn weil_threshold(g: u64) -> u64 {
    let g = g as u128;
    (1..=4 * g * g)
        .rev()
        .find(|&l| (l + 1) * (l + 1) <= 4 * g * g * l)
        .unwrap_or(1) as u64
}

/// Which proof strategy the condition set encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// p splits completely in the fixed-point field (principal-form
    /// representation).
    Split,
    /// p inert in ℚ(√−N); needs N prime ≡ 3 (mod 4), N > 163, and pairs
    /// with the local analysis at N.
    Inert,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Split => "split",
            Variant::Inert => "inert",
        }
    }
}

/// The splitting condition at the CM field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplittingCondition {
    /// p is represented by the principal form of this fundamental
    /// discriminant (⇔ p splits completely in the Hilbert class field).
    PrincipalForm { disc: Discriminant },
    /// kronecker(n, p) = −1.
    Inert { n: u64 },
}

/// The full set of conditions a prime p must satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeConditionSet {
    /// Required residue of p mod 8 (always 1).
    pub residue_mod_8: u64,
    /// Ascending odd primes ℓ with required kronecker(p, ℓ) = 1.
    pub qr_primes: Vec<u64>,
    pub splitting: SplittingCondition,
    /// Primes of bad reduction, ascending.
    pub bad_primes: Vec<u64>,
    /// p must exceed this (and the conditions only reference ℓ ≤ here).
    pub weil_threshold_m: u64,
    pub variant: Variant,
}

impl PrimeConditionSet {
    /// Validating constructor; the invariants here are what
    /// `certificate_from_json` relies on for semantic soundness.
    pub fn new(
        qr_primes: Vec<u64>,
        splitting: SplittingCondition,
        bad_primes: Vec<u64>,
        weil_threshold_m: u64,
        variant: Variant,
    ) -> Result<Self, Error> {
        let ascending = |v: &[u64]| v.windows(2).all(|w| w[0] < w[1]);
        if !ascending(&qr_primes) || !ascending(&bad_primes) {
            return Err(Error::invalid_input("prime lists must be strictly ascending"));
        }
        if bad_primes.iter().any(|&p| !is_prime(p)) {
            return Err(Error::invalid_input("bad_primes must be prime"));
        }
        for &l in &qr_primes {
            if l == 2 || !is_prime(l) {
                return Err(Error::invalid_input(format!(
                    "qr prime {l} is not an odd prime"
                )));
            }
            if l > weil_threshold_m && !bad_primes.contains(&l) {
                return Err(Error::invalid_input(format!(
                    "qr prime {l} exceeds the threshold {weil_threshold_m} and is not bad"
                )));
            }
        }
        match (variant, &splitting) {
            (Variant::Split, SplittingCondition::PrincipalForm { disc }) => {
                if !disc.is_fundamental() {
                    return Err(Error::NonFundamentalDiscriminant(disc.value()));
                }
            }
            (Variant::Inert, SplittingCondition::Inert { n }) => {
                let n = *n;
                if !is_prime(n) || n % 4 != 3 || n <= 163 {
                    return Err(Error::VariantUnsupported {
                        variant: "inert",
                        reason: format!(
                            "needs a prime N > 163 with N ≡ 3 (mod 4); got N = {n}"
                        ),
                    });
                }
                if qr_primes.binary_search(&n).is_ok() {
                    return Err(Error::invalid_input(
                        "inert condition set must not also demand (p|N) = 1",
                    ));
                }
            }
            _ => {
                return Err(Error::VariantUnsupported {
                    variant: variant.name(),
                    reason: "variant and splitting condition do not match".into(),
                });
            }
        }
        Ok(PrimeConditionSet {
            residue_mod_8: 1,
            qr_primes,
            splitting,
            bad_primes,
            weil_threshold_m,
            variant,
        })
    }
}

/// Assemble the condition set for a descriptor whose hypotheses pass.
///
/// M = max(weil_threshold(genus), largest bad prime).  Split: p must be a
/// square modulo every odd ℓ ≤ M and split completely in the fixed-point
/// field.  Inert (X₀(N) only, N prime ≡ 3 mod 4, N > 163): the quadratic
/// conditions skip ℓ = N, and p is instead inert in ℚ(√−N) — the place N
/// is then handled by the local obstruction analysis, and the odd class
/// number of ℚ(√−N) still yields a degree-one prime of the fixed-point
/// field above p.
pub fn build_conditions(
    desc: &CurveDescriptor,
    variant: Variant,
) -> Result<PrimeConditionSet, Error> {
    let report = check_hypotheses(desc)?;
    if let Some(failing) = report.first_failing() {
        return Err(Error::HypothesisFailure {
            failing,
            descriptor: desc.label(),
        });
    }
    let bad = desc.bad_primes();
    let m = weil_threshold(report.genus).max(*bad.last().expect("level > 1 has a prime"));
    match variant {
        Variant::Split => {
            let qr = primes_up_to(m).into_iter().filter(|&l| l != 2).collect();
            PrimeConditionSet::new(
                qr,
                SplittingCondition::PrincipalForm {
                    disc: desc.cm_discriminant(),
                },
                bad,
                m,
                variant,
            )
        }
        Variant::Inert => {
            let n = match desc {
                CurveDescriptor::X0N { n } => *n,
                CurveDescriptor::XDPlus { .. } => {
                    return Err(Error::VariantUnsupported {
                        variant: "inert",
                        reason: "only X0(N) has the level-N local analysis".into(),
                    })
                }
            };
            if !is_prime(n) || n % 4 != 3 || n <= 163 {
                return Err(Error::VariantUnsupported {
                    variant: "inert",
                    reason: format!("needs a prime N > 163 with N ≡ 3 (mod 4); got N = {n}"),
                });
            }
            let qr = primes_up_to(m)
                .into_iter()
                .filter(|&l| l != 2 && l != n)
                .collect();
            PrimeConditionSet::new(qr, SplittingCondition::Inert { n }, bad, m, variant)
        }
    }
}

/// Exact Chebotarev-style lower bound for the density of primes meeting
/// the condition set.
///
/// The factor 1/4 covers p ≡ 1 (mod 8); each quadratic condition at a
/// prime ℓ not dividing the CM discriminant is linearly disjoint from the
/// rest and costs 1/2 (there are k' of them); the splitting condition
/// costs 1/(2h) (split in the Hilbert class field, h the class number)
/// or 1/2 (inert).
pub fn density_lower_bound(conds: &PrimeConditionSet, h: u64) -> Result<Rational, Error> {
    if h == 0 {
        return Err(Error::invalid_input("class number must be positive"));
    }
    let disc = match conds.splitting {
        SplittingCondition::PrincipalForm { disc } => disc.value(),
        SplittingCondition::Inert { n } => -(n as i64),
    };
    let k_prime = conds
        .qr_primes
        .iter()
        .filter(|&&l| disc % l as i64 != 0)
        .count();
    let splitting_cost = match conds.splitting {
        SplittingCondition::PrincipalForm { .. } => 2 * h,
        SplittingCondition::Inert { .. } => 2,
    };
    let denom = BigInt::from(4u64) * (BigInt::one() << k_prime) * BigInt::from(splitting_cost);
    Ok(Rational::new(BigInt::one(), denom))
}

/// Per-condition outcome for one candidate prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionTrace {
    /// p ≡ 1 (mod 8).
    pub residue_ok: bool,
    /// p > M.
    pub above_threshold: bool,
    /// p ∉ qr_primes ∪ bad_primes.
    pub unexcluded: bool,
    /// kronecker(p, ℓ) = 1 for every ℓ in qr_primes.
    pub qr_ok: bool,
    pub splitting_ok: bool,
    /// Principal-form witness (x, y) when the splitting condition is
    /// representability and it holds.
    pub witness: Option<(i64, i64)>,
}

impl ConditionTrace {
    pub fn all_ok(&self) -> bool {
        self.residue_ok && self.above_threshold && self.unexcluded && self.qr_ok && self.splitting_ok
    }
}

/// Evaluate every condition on one prime.  Never fails: impossible
/// sub-checks (e.g. a ramified representation test) count as unmet.
pub fn evaluate_conditions(conds: &PrimeConditionSet, p: u64) -> ConditionTrace {
    let residue_ok = p % 8 == conds.residue_mod_8;
    let above_threshold = p > conds.weil_threshold_m;
    let unexcluded =
        conds.qr_primes.binary_search(&p).is_err() && !conds.bad_primes.contains(&p);
    let qr_ok = conds
        .qr_primes
        .iter()
        .all(|&l| kronecker(p as i64, l as i64) == 1);
    let (splitting_ok, witness) = match conds.splitting {
        SplittingCondition::PrincipalForm { disc } => {
            if p == 2 || disc.abs() % p == 0 {
                (false, None)
            } else {
                match represented_by_principal_form(p, disc) {
                    Ok(Some(w)) => (true, Some(w)),
                    _ => (false, None),
                }
            }
        }
        SplittingCondition::Inert { n } => (kronecker(n as i64, p as i64) == -1, None),
    };
    ConditionTrace {
        residue_ok,
        above_threshold,
        unexcluded,
        qr_ok,
        splitting_ok,
        witness,
    }
}

/// All primes p ≤ bound satisfying every condition, each with its trace.
pub fn enumerate_primes(
    conds: &PrimeConditionSet,
    bound: u64,
) -> Result<Vec<(u64, ConditionTrace)>, Error> {
    let mut out = Vec::new();
    for p in primes_up_to(bound) {
        if p % 8 != conds.residue_mod_8 {
            continue;
        }
        let trace = evaluate_conditions(conds, p);
        if trace.all_ok() {
            out.push((p, trace));
        }
    }
    Ok(out)
}

/// Local analysis of the twist at the level prime itself:
/// the twisted curve has no points over ℚ_N exactly when N ≡ 1 (mod 4).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelObstruction {
    Obstructed,
    LocalPoints,
}

pub fn obstruction_at_level(n: u64) -> Result<LevelObstruction, Error> {
    if n == 2 || !is_prime(n) {
        return Err(Error::NotOddPrime(n));
    }
    Ok(if n % 4 == 1 {
        LevelObstruction::Obstructed
    } else {
        LevelObstruction::LocalPoints
    })
}

/// Genus bucket of X₀(N), which controls how useful the twist C(N, p) is
/// for realizing PSL₂(𝔽_p) Galois groups by Shih's strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenusClass {
    Zero,
    One,
    Higher(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShihReport {
    pub n: u64,
    pub p: u64,
    /// Shih's construction applies: kronecker(N, p) = −1.
    pub shih_applicable: bool,
    pub genus_class: GenusClass,
    /// Local verdict at a relevant place (the level prime, or 5 for
    /// N = 10), when one is known.
    pub local_obstruction: Option<(u64, LevelObstruction)>,
}

pub fn shih_classify(n: u64, p: u64) -> Result<ShihReport, Error> {
    if n < 2 {
        return Err(Error::invalid_input(format!("level must be >= 2, got {n}")));
    }
    crate::ntheory::factor_squarefree(n)?;
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if n.is_multiple_of(p) {
        return Err(Error::invalid_input(format!("p = {p} must not divide N = {n}")));
    }
    let genus_class = match x0_genus(n)? {
        0 => GenusClass::Zero,
        1 => GenusClass::One,
        g => GenusClass::Higher(g),
    };
    let local_obstruction = if n != 2 && is_prime(n) {
        Some((n, obstruction_at_level(n)?))
    } else if n == 10 {
        // the twist has ℚ₅-points iff 5 is a square mod p
        let verdict = if kronecker(5, p as i64) == 1 {
            LevelObstruction::LocalPoints
        } else {
            LevelObstruction::Obstructed
        };
        Some((5, verdict))
    } else {
        None
    };
    Ok(ShihReport {
        n,
        p,
        shih_applicable: kronecker(n as i64, p as i64) == -1,
        genus_class,
        local_obstruction,
    })
}

/// The assembled verdict for one descriptor: hypotheses, conditions,
/// density, enumerated primes, caveats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistCertificate {
    pub descriptor: CurveDescriptor,
    pub hypotheses: HypothesisReport,
    pub conditions: PrimeConditionSet,
    pub density_lower_bound: Rational,
    pub primes: Vec<(u64, ConditionTrace)>,
    pub caveats: Vec<String>,
}

impl TwistCertificate {
    /// Re-evaluate every condition on every listed prime; a certificate
    /// that lists a failing prime is rejected.
    pub fn verify(&self) -> Result<(), Error> {
        for &(p, ref trace) in &self.primes {
            if !is_prime(p) {
                return Err(Error::invalid_input(format!(
                    "certificate lists composite {p}"
                )));
            }
            let fresh = evaluate_conditions(&self.conditions, p);
            if !fresh.all_ok() || fresh != *trace {
                return Err(Error::invalid_input(format!(
                    "certificate trace for p = {p} does not re-verify"
                )));
            }
        }
        Ok(())
    }
}

pub fn certify(
    desc: &CurveDescriptor,
    variant: Variant,
    bound: u64,
) -> Result<TwistCertificate, Error> {
    let hypotheses = check_hypotheses(desc)?;
    if let Some(failing) = hypotheses.first_failing() {
        return Err(Error::HypothesisFailure {
            failing,
            descriptor: desc.label(),
        });
    }
    let conditions = build_conditions(desc, variant)?;
    let h = field_class_number(desc.cm_level())?;
    let density = density_lower_bound(&conditions, h)?;
    let primes = enumerate_primes(&conditions, bound)?;
    let mut caveats = vec![
        "Qualifying primes are certified members of the positive-density condition set; \
         the nonexistence of rational points on the twist holds for all but finitely many \
         of them, with no effective bound on the exceptions."
            .to_string(),
    ];
    if matches!(desc, CurveDescriptor::XDPlus { .. }) {
        caveats.push(
            "Everywhere-local solvability of the quotient curve is a cited fact, \
             not re-proven by this certificate."
                .to_string(),
        );
    }
    if variant == Variant::Inert {
        caveats.push(
            "Inert splitting: the class number of Q(sqrt(-N)) is odd for prime N ≡ 3 (mod 4), \
             so the inert condition still forces a degree-one prime of the fixed-point field \
             above p."
                .to_string(),
        );
    }
    Ok(TwistCertificate {
        descriptor: desc.clone(),
        hypotheses,
        conditions,
        density_lower_bound: density,
        primes,
        caveats,
    })
}

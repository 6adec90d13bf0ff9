mod common;

use altwist::cert::{
    certificate_from_json, certificate_to_canonical_json, check_hypotheses, density_lower_bound,
    enumerate_primes, CurveDescriptor, PrimeConditionSet, SplittingCondition, TwistCertificate,
    Variant,
};
use altwist::ntheory::{
    factor_squarefree, kronecker, represented_by_principal_form, sqrt_mod, Discriminant,
    PrincipalForm,
};
use altwist::shimura::{ShimuraDescriptor, ShimuraInvariants};
use altwist::x0::X0Invariants;
use common::{represented_brute_force, trial_division_prime};
use proptest::prelude::*;

fn odd_primes_below(hi: u64) -> impl Strategy<Value = u64> {
    (3..hi).prop_map(|n| {
        let mut p = n | 1;
        while !trial_division_prime(p) {
            p += 2;
        }
        p
    })
}

fn discriminants(lo: i64) -> impl Strategy<Value = Discriminant> {
    (lo..-2i64).prop_filter_map("not a discriminant", |d| Discriminant::new(d).ok())
}

fn fundamental_discriminants(lo: i64) -> impl Strategy<Value = Discriminant> {
    discriminants(lo).prop_filter("not fundamental", |d| d.is_fundamental())
}

proptest! {
    #[test]
    fn cornacchia_agrees_with_brute_force(
        p in odd_primes_below(30_000),
        d in fundamental_discriminants(-3_000),
    ) {
        prop_assume!(d.abs() % p != 0);
        let got = represented_by_principal_form(p, d).unwrap();
        let expected = represented_brute_force(p, d.value());
        prop_assert_eq!(got.is_some(), expected, "p = {}, d = {}", p, d.value());
        if let Some((x, y)) = got {
            prop_assert_eq!(PrincipalForm::new(d).evaluate(x, y), p as i128);
        }
    }

    #[test]
    fn fundamental_decomposition_recomposes(d in discriminants(-2_000_000)) {
        let (d0, f) = d.fundamental_part();
        prop_assert!(d0.is_fundamental());
        prop_assert_eq!(d0.value() * (f * f) as i64, d.value());
        prop_assert_eq!(f == 1, d.is_fundamental());
        prop_assert_eq!(d.conductor(), f);
    }

    #[test]
    fn sqrt_mod_round_trips(
        p in odd_primes_below(10_000),
        a in -1_000_000_000i64..1_000_000_000,
    ) {
        match sqrt_mod(a, p).unwrap() {
            Some(r) => {
                prop_assert!(r < p);
                let lhs = (r as i128 * r as i128 - a as i128).rem_euclid(p as i128);
                prop_assert_eq!(lhs, 0);
            }
            None => prop_assert_eq!(kronecker(a, p as i64), -1),
        }
    }

    #[test]
    fn x0_invariants_stay_consistent(n in 2u64..2_000) {
        prop_assume!(factor_squarefree(n).is_ok());
        let inv = X0Invariants::compute(n).unwrap();
        prop_assert!(inv.genus_plus <= inv.genus);
        prop_assert!(inv.min_fixed_degree >= 1);
        prop_assert_eq!(inv.wn_fixed % 2, 0);
    }

    #[test]
    fn shimura_invariants_stay_consistent(d in 6u64..2_000) {
        prop_assume!(ShimuraDescriptor::new(d).is_ok());
        let desc = ShimuraDescriptor::new(d).unwrap();
        let inv = ShimuraInvariants::compute(&desc).unwrap();
        prop_assert!(inv.genus_xd_plus <= inv.genus_xd);
        // one fixed count per nontrivial exact divisor
        prop_assert_eq!(inv.al_fixed.len(), (1 << desc.factors().len()) - 1);
    }

    #[test]
    fn from_json_never_panics_on_arbitrary_text(text in ".*") {
        let _ = certificate_from_json(&text);
    }

    #[test]
    fn from_json_never_panics_on_json_shaped_text(text in json_like()) {
        let _ = certificate_from_json(&text);
    }

    #[test]
    fn certificates_round_trip_through_canonical_json(cert in certificate_strategy()) {
        let text = certificate_to_canonical_json(&cert);
        let back = certificate_from_json(&text).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert_eq!(certificate_to_canonical_json(&back), text);
        cert.verify().unwrap();
    }
}

fn descriptor_strategy() -> impl Strategy<Value = CurveDescriptor> {
    prop_oneof![
        (2u64..400).prop_filter_map("not squarefree", |n| CurveDescriptor::x0(n).ok()),
        Just(CurveDescriptor::xd_plus(6, 2).unwrap()),
        Just(CurveDescriptor::xd_plus(26, 13).unwrap()),
        Just(CurveDescriptor::xd_plus(210, 7).unwrap()),
    ]
}

fn conditions_strategy() -> impl Strategy<Value = PrimeConditionSet> {
    let qr = proptest::sample::subsequence(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31], 0..=10);
    let split = prop_oneof![
        prop_oneof![Just(-4i64), Just(-8), Just(-20), Just(-167), Just(-548), Just(-644)]
            .prop_map(|d| {
                (
                    Variant::Split,
                    SplittingCondition::PrincipalForm {
                        disc: Discriminant::new(d).unwrap(),
                    },
                )
            }),
        prop_oneof![Just(167u64), Just(179), Just(251), Just(359)]
            .prop_map(|n| (Variant::Inert, SplittingCondition::Inert { n })),
    ];
    (qr, split).prop_map(|(qr, (variant, splitting))| {
        PrimeConditionSet::new(qr, splitting, vec![2, 167], 2_000, variant)
            .expect("strategy builds valid sets")
    })
}

fn certificate_strategy() -> impl Strategy<Value = TwistCertificate> {
    (
        descriptor_strategy(),
        conditions_strategy(),
        1u64..=120,
        0u64..=1_500,
        proptest::collection::vec(any::<String>(), 0..3),
    )
        .prop_map(|(descriptor, conditions, h, bound, caveats)| {
            let hypotheses = check_hypotheses(&descriptor).expect("valid descriptor");
            let density_lower_bound = density_lower_bound(&conditions, h).expect("h >= 1");
            let primes = enumerate_primes(&conditions, bound).expect("enumeration");
            TwistCertificate {
                descriptor,
                hypotheses,
                conditions,
                density_lower_bound,
                primes,
                caveats,
            }
        })
}

/// Structurally JSON-ish documents: nested arrays/objects over simple
/// leaves, to push the parser past the lexer more often than raw `.*`.
fn json_like() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("null".to_string()),
        any::<bool>().prop_map(|b| b.to_string()),
        any::<i64>().prop_map(|n| n.to_string()),
        "[0-9]{1,30}".prop_map(|s| format!("\"{s}\"")),
        "[a-z_]{0,8}".prop_map(|s| format!("\"{s}\"")),
    ];
    leaf.prop_recursive(3, 24, 4, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 0..4)
                .prop_map(|xs| format!("[{}]", xs.join(","))),
            proptest::collection::vec(
                (
                    prop_oneof![
                        "[a-z_0-9]{1,12}",
                        Just("version".to_string()),
                        Just("descriptor".to_string()),
                        Just("curve".to_string()),
                        Just("n".to_string()),
                        Just("density".to_string()),
                        Just("num".to_string()),
                        Just("den".to_string()),
                    ],
                    inner
                ),
                0..4
            )
            .prop_map(|kvs| {
                let body: Vec<String> = kvs
                    .into_iter()
                    .map(|(k, v)| format!("\"{k}\":{v}"))
                    .collect();
                format!("{{{}}}", body.join(","))
            }),
        ]
    })
}

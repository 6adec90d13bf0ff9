//! The certificate decoder is the crate's untrusted-input surface.
//! Invariants under fuzzing: it never panics, and any document it
//! accepts re-encodes canonically to a byte string that parses back to
//! the identical certificate.  (Semantic verification of the listed
//! primes is deliberately a separate step, `TwistCertificate::verify`,
//! so a structurally valid but lying certificate is Ok here.)

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(cert) = altwist::cert::certificate_from_json(text) else {
        return;
    };
    let canonical = altwist::cert::certificate_to_canonical_json(&cert);
    let reparsed = altwist::cert::certificate_from_json(&canonical)
        .expect("canonical encoding of an accepted certificate parses");
    assert_eq!(reparsed, cert, "canonical round-trip drifted");
});

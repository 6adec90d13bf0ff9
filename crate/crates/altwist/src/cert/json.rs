//! Canonical JSON encoding of [`TwistCertificate`].
//!
//! The encoding is deterministic: fixed key order (descriptor,
//! hypotheses, conditions, density, primes, caveats, version), no
//! whitespace, and integers whose magnitude exceeds 2⁵³ rendered as
//! decimal strings so consumers that read JSON numbers as doubles never
//! see a lossy value.  `certificate_from_json` accepts either integer
//! form and never panics on malformed input — it is the untrusted-input
//! surface of the crate and is fuzzed as such.

use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use super::{
    ConditionTrace, CurveDescriptor, HypothesisReport, LocalPointsEvidence, PrimeConditionSet,
    SplittingCondition, TwistCertificate, Variant,
};
use crate::ntheory::Discriminant;
use crate::{Error, Rational};

/// Largest integer magnitude an IEEE double represents exactly.
const SAFE_MAX: u64 = 1 << 53;

pub fn certificate_to_canonical_json(cert: &TwistCertificate) -> String {
    serde_json::to_string(&certificate_value(cert)).expect("plain data serializes")
}

pub fn certificate_from_json(text: &str) -> Result<TwistCertificate, Error> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| parse_err(format!("not valid JSON: {e}")))?;
    let root = root
        .as_object()
        .ok_or_else(|| parse_err("top level must be an object"))?;
    let version = as_u64(field(root, "version")?, "version")?;
    if version != 1 {
        return Err(parse_err(format!("unsupported version {version}")));
    }
    Ok(TwistCertificate {
        descriptor: parse_descriptor(field(root, "descriptor")?)?,
        hypotheses: parse_hypotheses(field(root, "hypotheses")?)?,
        conditions: parse_conditions(field(root, "conditions")?)?,
        density_lower_bound: parse_density(field(root, "density")?)?,
        primes: parse_primes(field(root, "primes")?)?,
        caveats: parse_caveats(field(root, "caveats")?)?,
    })
}

fn certificate_value(cert: &TwistCertificate) -> Value {
    obj(vec![
        ("descriptor", descriptor_value(&cert.descriptor)),
        ("hypotheses", hypotheses_value(&cert.hypotheses)),
        ("conditions", conditions_value(&cert.conditions)),
        (
            "density",
            obj(vec![
                ("num", bigint_value(cert.density_lower_bound.numer())),
                ("den", bigint_value(cert.density_lower_bound.denom())),
            ]),
        ),
        (
            "primes",
            Value::Array(
                cert.primes
                    .iter()
                    .map(|(p, trace)| {
                        obj(vec![("p", u64_value(*p)), ("trace", trace_value(trace))])
                    })
                    .collect(),
            ),
        ),
        (
            "caveats",
            Value::Array(cert.caveats.iter().map(|c| Value::String(c.clone())).collect()),
        ),
        ("version", Value::from(1u64)),
    ])
}

fn descriptor_value(desc: &CurveDescriptor) -> Value {
    match desc {
        CurveDescriptor::X0N { n } => {
            obj(vec![("curve", Value::from("x0")), ("n", u64_value(*n))])
        }
        CurveDescriptor::XDPlus { shimura } => obj(vec![
            ("curve", Value::from("xd_plus")),
            ("d", u64_value(shimura.d())),
            ("q", u64_value(shimura.q().expect("descriptor carries q"))),
        ]),
    }
}

fn hypotheses_value(h: &HypothesisReport) -> Value {
    let evidence = match h.h3_local_points {
        LocalPointsEvidence::ProvenCusps => "proven_cusps",
        LocalPointsEvidence::CitedFact => "cited_fact",
        LocalPointsEvidence::Unknown => "unknown",
    };
    obj(vec![
        ("h1_no_rational_fixed", Value::Bool(h.h1_no_rational_fixed)),
        ("h1_class_number", u64_value(h.h1_class_number)),
        ("h1_justification", Value::from(h.h1_justification.as_str())),
        ("h2_geometric_fixed", Value::Bool(h.h2_geometric_fixed)),
        ("fixed_points", u64_value(h.fixed_points)),
        ("h3_local_points", Value::from(evidence)),
        ("h4_quotient_finite", Value::Bool(h.h4_quotient_finite)),
        ("genus", u64_value(h.genus)),
        ("quotient_genus", u64_value(h.quotient_genus)),
    ])
}

fn conditions_value(c: &PrimeConditionSet) -> Value {
    let splitting = match c.splitting {
        SplittingCondition::PrincipalForm { disc } => obj(vec![
            ("kind", Value::from("principal_form")),
            ("disc", i64_value(disc.value())),
        ]),
        SplittingCondition::Inert { n } => {
            obj(vec![("kind", Value::from("inert")), ("n", u64_value(n))])
        }
    };
    obj(vec![
        ("variant", Value::from(c.variant.name())),
        ("residue_mod_8", u64_value(c.residue_mod_8)),
        (
            "qr_primes",
            Value::Array(c.qr_primes.iter().map(|&l| u64_value(l)).collect()),
        ),
        ("splitting", splitting),
        (
            "bad_primes",
            Value::Array(c.bad_primes.iter().map(|&p| u64_value(p)).collect()),
        ),
        ("weil_threshold", u64_value(c.weil_threshold_m)),
    ])
}

fn trace_value(t: &ConditionTrace) -> Value {
    let witness = match t.witness {
        Some((x, y)) => Value::Array(vec![i64_value(x), i64_value(y)]),
        None => Value::Null,
    };
    obj(vec![
        ("residue_ok", Value::Bool(t.residue_ok)),
        ("above_threshold", Value::Bool(t.above_threshold)),
        ("unexcluded", Value::Bool(t.unexcluded)),
        ("qr_ok", Value::Bool(t.qr_ok)),
        ("splitting_ok", Value::Bool(t.splitting_ok)),
        ("witness", witness),
    ])
}

fn obj(pairs: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

fn u64_value(v: u64) -> Value {
    if v <= SAFE_MAX {
        Value::from(v)
    } else {
        Value::String(v.to_string())
    }
}

fn i64_value(v: i64) -> Value {
    if v.unsigned_abs() <= SAFE_MAX {
        Value::from(v)
    } else {
        Value::String(v.to_string())
    }
}

fn bigint_value(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) if x.unsigned_abs() <= SAFE_MAX => Value::from(x),
        _ => Value::String(v.to_string()),
    }
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::CertificateParse(msg.into())
}

/// Wrap a domain error raised while rebuilding a parsed certificate.
fn semantic(e: Error) -> Error {
    Error::CertificateParse(format!("semantic check failed: {e}"))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str) -> Result<&'a Value, Error> {
    o.get(key)
        .ok_or_else(|| parse_err(format!("missing field `{key}`")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, Error> {
    v.as_object()
        .ok_or_else(|| parse_err(format!("{what} must be an object")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a [Value], Error> {
    v.as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| parse_err(format!("{what} must be an array")))
}

fn as_bool(v: &Value, what: &str) -> Result<bool, Error> {
    v.as_bool()
        .ok_or_else(|| parse_err(format!("{what} must be a boolean")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str, Error> {
    v.as_str()
        .ok_or_else(|| parse_err(format!("{what} must be a string")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64, Error> {
    match v {
        Value::Number(n) => n.as_u64(),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
    .ok_or_else(|| parse_err(format!("{what} must be a nonnegative integer")))
}

fn as_i64(v: &Value, what: &str) -> Result<i64, Error> {
    match v {
        Value::Number(n) => n.as_i64(),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
    .ok_or_else(|| parse_err(format!("{what} must be an integer")))
}

fn as_bigint(v: &Value, what: &str) -> Result<BigInt, Error> {
    match v {
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                Some(BigInt::from(u))
            } else {
                n.as_i64().map(BigInt::from)
            }
        }
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
    .ok_or_else(|| parse_err(format!("{what} must be an integer")))
}

fn parse_descriptor(v: &Value) -> Result<CurveDescriptor, Error> {
    let o = as_object(v, "descriptor")?;
    match as_str(field(o, "curve")?, "descriptor.curve")? {
        "x0" => {
            let n = as_u64(field(o, "n")?, "descriptor.n")?;
            CurveDescriptor::x0(n).map_err(semantic)
        }
        "xd_plus" => {
            let d = as_u64(field(o, "d")?, "descriptor.d")?;
            let q = as_u64(field(o, "q")?, "descriptor.q")?;
            CurveDescriptor::xd_plus(d, q).map_err(semantic)
        }
        other => Err(parse_err(format!("unknown curve kind `{other}`"))),
    }
}

fn parse_hypotheses(v: &Value) -> Result<HypothesisReport, Error> {
    let o = as_object(v, "hypotheses")?;
    let evidence = match as_str(field(o, "h3_local_points")?, "h3_local_points")? {
        "proven_cusps" => LocalPointsEvidence::ProvenCusps,
        "cited_fact" => LocalPointsEvidence::CitedFact,
        "unknown" => LocalPointsEvidence::Unknown,
        other => return Err(parse_err(format!("unknown local-points evidence `{other}`"))),
    };
    Ok(HypothesisReport {
        h1_no_rational_fixed: as_bool(field(o, "h1_no_rational_fixed")?, "h1_no_rational_fixed")?,
        h1_class_number: as_u64(field(o, "h1_class_number")?, "h1_class_number")?,
        h1_justification: as_str(field(o, "h1_justification")?, "h1_justification")?.to_string(),
        h2_geometric_fixed: as_bool(field(o, "h2_geometric_fixed")?, "h2_geometric_fixed")?,
        fixed_points: as_u64(field(o, "fixed_points")?, "fixed_points")?,
        h3_local_points: evidence,
        h4_quotient_finite: as_bool(field(o, "h4_quotient_finite")?, "h4_quotient_finite")?,
        genus: as_u64(field(o, "genus")?, "genus")?,
        quotient_genus: as_u64(field(o, "quotient_genus")?, "quotient_genus")?,
    })
}

fn parse_conditions(v: &Value) -> Result<PrimeConditionSet, Error> {
    let o = as_object(v, "conditions")?;
    let residue = as_u64(field(o, "residue_mod_8")?, "residue_mod_8")?;
    if residue != 1 {
        return Err(parse_err(format!(
            "residue_mod_8 must be 1, got {residue}"
        )));
    }
    let variant = match as_str(field(o, "variant")?, "variant")? {
        "split" => Variant::Split,
        "inert" => Variant::Inert,
        other => return Err(parse_err(format!("unknown variant `{other}`"))),
    };
    let qr_primes = as_array(field(o, "qr_primes")?, "qr_primes")?
        .iter()
        .map(|x| as_u64(x, "qr prime"))
        .collect::<Result<Vec<_>, _>>()?;
    let bad_primes = as_array(field(o, "bad_primes")?, "bad_primes")?
        .iter()
        .map(|x| as_u64(x, "bad prime"))
        .collect::<Result<Vec<_>, _>>()?;
    let weil = as_u64(field(o, "weil_threshold")?, "weil_threshold")?;
    let s = as_object(field(o, "splitting")?, "splitting")?;
    let splitting = match as_str(field(s, "kind")?, "splitting.kind")? {
        "principal_form" => {
            let d = as_i64(field(s, "disc")?, "splitting.disc")?;
            SplittingCondition::PrincipalForm {
                disc: Discriminant::new(d).map_err(semantic)?,
            }
        }
        "inert" => SplittingCondition::Inert {
            n: as_u64(field(s, "n")?, "splitting.n")?,
        },
        other => return Err(parse_err(format!("unknown splitting kind `{other}`"))),
    };
    PrimeConditionSet::new(qr_primes, splitting, bad_primes, weil, variant).map_err(semantic)
}

fn parse_density(v: &Value) -> Result<Rational, Error> {
    let o = as_object(v, "density")?;
    let num = as_bigint(field(o, "num")?, "density.num")?;
    let den = as_bigint(field(o, "den")?, "density.den")?;
    if num.sign() != Sign::Plus || den.sign() != Sign::Plus {
        return Err(parse_err("density must be a positive fraction"));
    }
    Ok(Rational::new(num, den))
}

fn parse_primes(v: &Value) -> Result<Vec<(u64, ConditionTrace)>, Error> {
    as_array(v, "primes")?
        .iter()
        .map(|entry| {
            let o = as_object(entry, "primes entry")?;
            let p = as_u64(field(o, "p")?, "primes.p")?;
            let t = as_object(field(o, "trace")?, "trace")?;
            let witness = match field(t, "witness")? {
                Value::Null => None,
                Value::Array(xs) if xs.len() == 2 => Some((
                    as_i64(&xs[0], "witness.x")?,
                    as_i64(&xs[1], "witness.y")?,
                )),
                _ => return Err(parse_err("witness must be null or a pair")),
            };
            Ok((
                p,
                ConditionTrace {
                    residue_ok: as_bool(field(t, "residue_ok")?, "residue_ok")?,
                    above_threshold: as_bool(field(t, "above_threshold")?, "above_threshold")?,
                    unexcluded: as_bool(field(t, "unexcluded")?, "unexcluded")?,
                    qr_ok: as_bool(field(t, "qr_ok")?, "qr_ok")?,
                    splitting_ok: as_bool(field(t, "splitting_ok")?, "splitting_ok")?,
                    witness,
                },
            ))
        })
        .collect()
}

fn parse_caveats(v: &Value) -> Result<Vec<String>, Error> {
    as_array(v, "caveats")?
        .iter()
        .map(|c| as_str(c, "caveat").map(str::to_string))
        .collect()
}

//! Command-line front end for the altwist library.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 hypothesis failure,
//! 3 internal integrality violation.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use altwist::cert::{
    build_conditions, certificate_to_canonical_json, certify, check_hypotheses,
    density_lower_bound, shih_classify, CurveDescriptor, GenusClass, HypothesisReport,
    LevelObstruction, LocalPointsEvidence, ShihReport, SplittingCondition, TwistCertificate,
    Variant,
};
use altwist::ntheory::{factor_squarefree, field_class_number, primes_up_to};
use altwist::shimura::{scan_d0, ShimuraDescriptor, ShimuraInvariants};
use altwist::x0::{x0_genus, x0_plus_genus, X0Invariants};
use altwist::{Error, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{Map, Value};

#[derive(Parser)]
#[command(
    name = "altwist",
    version,
    about = "Atkin-Lehner quadratic twists: hypothesis checks, prime condition sets, \
             density bounds, certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// write output to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check the four twisting hypotheses for one curve
    CheckCurve(CurveArgs),
    /// Build the full twist certificate and enumerate qualifying primes
    FindTwists {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_enum, default_value_t = VariantArg::Split)]
        variant: VariantArg,
        /// enumerate qualifying primes up to this bound
        #[arg(long, default_value_t = 100_000)]
        bound: u64,
    },
    /// Print the density lower bound for the prime condition set
    Density {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_enum, default_value_t = VariantArg::Split)]
        variant: VariantArg,
    },
    /// Batch scans over levels and discriminants
    #[command(subcommand)]
    Scan(ScanKind),
    /// Dump every computed invariant of one curve
    Invariants {
        /// level N of X0(N); squarefree, at least 2
        #[arg(long, value_name = "N", conflicts_with_all = ["xd", "q"])]
        x0: Option<u64>,
        /// quaternion discriminant D of X^D+
        #[arg(long, value_name = "D")]
        xd: Option<u64>,
        /// optional designated prime q | D (adds the Klein quotient row)
        #[arg(long, value_name = "Q", requires = "xd")]
        q: Option<u64>,
    },
}

#[derive(Subcommand)]
enum ScanKind {
    /// all squarefree N <= limit whose w_N-quotient has genus <= 1
    PlusGenus {
        #[arg(long)]
        limit: u64,
    },
    /// largest quaternion discriminant <= limit with a genus <= 1 Klein quotient
    D0 {
        #[arg(long)]
        limit: u64,
    },
    /// classify the twists C(N, p) over odd primes p <= pmax not dividing N
    Shih {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        pmax: u64,
    },
}

#[derive(Args)]
struct CurveArgs {
    /// level N of X0(N); squarefree, at least 2
    #[arg(long, value_name = "N", conflicts_with_all = ["xd", "q"])]
    x0: Option<u64>,
    /// quaternion discriminant D of X^D+; squarefree, even number of prime factors
    #[arg(long, value_name = "D")]
    xd: Option<u64>,
    /// the prime q | D whose involution w_q drives the twist
    #[arg(long, value_name = "Q", requires = "xd")]
    q: Option<u64>,
}

impl CurveArgs {
    fn descriptor(&self) -> Result<CurveDescriptor, Error> {
        match (self.x0, self.xd) {
            (Some(n), None) => CurveDescriptor::x0(n),
            (None, Some(d)) => {
                let q = self.q.ok_or_else(|| {
                    Error::InvalidInput(
                        "--xd needs --q, the prime whose involution is twisted".into(),
                    )
                })?;
                CurveDescriptor::xd_plus(d, q)
            }
            _ => Err(Error::InvalidInput(
                "pass exactly one of --x0 N or --xd D".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Split,
    Inert,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Split => Variant::Split,
            VariantArg::Inert => Variant::Inert,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = cli.out.clone();
    match run(cli) {
        Ok((code, text)) => {
            let write_result = match &out {
                Some(path) => std::fs::write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = write_result {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::HypothesisFailure { .. } => 2,
                Error::IntegralityViolation { .. } => 3,
                _ => 1,
            })
        }
    }
}

fn run(cli: Cli) -> Result<(u8, String), Error> {
    let format = cli.format;
    match cli.command {
        Command::CheckCurve(curve) => cmd_check_curve(&curve, format),
        Command::FindTwists {
            curve,
            variant,
            bound,
        } => cmd_find_twists(&curve, variant.into(), bound, format),
        Command::Density { curve, variant } => cmd_density(&curve, variant.into(), format),
        Command::Scan(kind) => cmd_scan(kind, format),
        Command::Invariants { x0, xd, q } => cmd_invariants(x0, xd, q, format),
    }
}

fn cmd_check_curve(args: &CurveArgs, format: Format) -> Result<(u8, String), Error> {
    let desc = args.descriptor()?;
    let report = check_hypotheses(&desc)?;
    let text = match format {
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "curve: {}", desc.label());
            s.push_str(&hypothesis_table(&report));
            match report.first_failing() {
                None => s.push_str("verdict: all hypotheses hold\n"),
                Some(f) => {
                    let _ = writeln!(s, "verdict: FAILS {f}");
                }
            }
            s
        }
        Format::Json => {
            let mut o = Map::new();
            o.insert("descriptor".into(), descriptor_json(&desc));
            o.insert("hypotheses".into(), hypotheses_json(&report));
            o.insert("all_hold".into(), Value::Bool(report.all_hold()));
            to_json_line(&o)
        }
        Format::Csv => {
            let mut s = String::from("field,value\n");
            let _ = writeln!(s, "curve,{}", desc.label());
            for (k, v) in hypothesis_fields(&report) {
                let _ = writeln!(s, "{k},{v}");
            }
            let _ = writeln!(s, "all_hold,{}", report.all_hold());
            s
        }
    };
    Ok((if report.all_hold() { 0 } else { 2 }, text))
}

fn cmd_find_twists(
    args: &CurveArgs,
    variant: Variant,
    bound: u64,
    format: Format,
) -> Result<(u8, String), Error> {
    let desc = args.descriptor()?;
    let cert = certify(&desc, variant, bound)?;
    let text = match format {
        Format::Json => {
            let mut s = certificate_to_canonical_json(&cert);
            s.push('\n');
            s
        }
        Format::Table => certificate_table(&cert, bound),
        Format::Csv => {
            let mut s = String::from(
                "p,residue_ok,above_threshold,unexcluded,qr_ok,splitting_ok,witness_x,witness_y\n",
            );
            for (p, t) in &cert.primes {
                let (wx, wy) = match t.witness {
                    Some((x, y)) => (x.to_string(), y.to_string()),
                    None => (String::new(), String::new()),
                };
                let _ = writeln!(
                    s,
                    "{p},{},{},{},{},{},{wx},{wy}",
                    t.residue_ok, t.above_threshold, t.unexcluded, t.qr_ok, t.splitting_ok
                );
            }
            s
        }
    };
    Ok((0, text))
}

fn cmd_density(args: &CurveArgs, variant: Variant, format: Format) -> Result<(u8, String), Error> {
    let desc = args.descriptor()?;
    let conds = build_conditions(&desc, variant)?;
    let h = field_class_number(desc.cm_level())?;
    let density = density_lower_bound(&conds, h)?;
    let text = match format {
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "curve: {}", desc.label());
            let _ = writeln!(s, "variant: {}", conds.variant.name());
            let _ = writeln!(s, "quadratic conditions: {}", conds.qr_primes.len());
            let _ = writeln!(s, "class number: {h}");
            let _ = writeln!(
                s,
                "density lower bound: {}/{} (= {})",
                density.numer(),
                density.denom(),
                sci_approx(&density)
            );
            s
        }
        Format::Json => {
            let mut o = Map::new();
            o.insert("descriptor".into(), descriptor_json(&desc));
            o.insert("variant".into(), Value::from(conds.variant.name()));
            o.insert("num".into(), bigint_json(density.numer()));
            o.insert("den".into(), bigint_json(density.denom()));
            o.insert("decimal".into(), Value::from(sci_approx(&density)));
            to_json_line(&o)
        }
        Format::Csv => format!("num,den\n{},{}\n", density.numer(), density.denom()),
    };
    Ok((0, text))
}

fn cmd_scan(kind: ScanKind, format: Format) -> Result<(u8, String), Error> {
    match kind {
        ScanKind::PlusGenus { limit } => scan_plus_genus(limit, format),
        ScanKind::D0 { limit } => {
            let d0 = scan_d0(limit)?;
            let text = match format {
                Format::Table => format!("largest low-genus Klein discriminant <= {limit}: {d0}\n"),
                Format::Json => {
                    let mut o = Map::new();
                    o.insert("limit".into(), Value::from(limit));
                    o.insert("d0".into(), Value::from(d0));
                    to_json_line(&o)
                }
                Format::Csv => format!("limit,d0\n{limit},{d0}\n"),
            };
            Ok((0, text))
        }
        ScanKind::Shih { n, pmax } => scan_shih(n, pmax, format),
    }
}

fn scan_plus_genus(limit: u64, format: Format) -> Result<(u8, String), Error> {
    let mut rows = Vec::new();
    for n in 2..=limit {
        if factor_squarefree(n).is_err() {
            continue;
        }
        let gp = x0_plus_genus(n)?;
        if gp <= 1 {
            rows.push((n, x0_genus(n)?, gp));
        }
    }
    if limit >= 131 {
        // the quotient genus grows with N; 131 is the proven cutoff
        assert_eq!(
            rows.last().map(|r| r.0),
            Some(131),
            "plus-genus boundary violated"
        );
    }
    let text = match format {
        Format::Table => {
            let mut s = String::from("     n  genus  genus_plus\n");
            for (n, g, gp) in &rows {
                let _ = writeln!(s, "{n:>6}  {g:>5}  {gp:>10}");
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("n,genus,genus_plus\n");
            for (n, g, gp) in &rows {
                let _ = writeln!(s, "{n},{g},{gp}");
            }
            s
        }
        Format::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|&(n, g, gp)| {
                    let mut o = Map::new();
                    o.insert("n".into(), Value::from(n));
                    o.insert("genus".into(), Value::from(g));
                    o.insert("genus_plus".into(), Value::from(gp));
                    Value::Object(o)
                })
                .collect();
            let mut s = serde_json::to_string(&Value::Array(arr)).expect("plain data");
            s.push('\n');
            s
        }
    };
    Ok((0, text))
}

fn scan_shih(n: u64, pmax: u64, format: Format) -> Result<(u8, String), Error> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "level must be at least 2, got {n}"
        )));
    }
    factor_squarefree(n)?;
    let mut rows: Vec<ShihReport> = Vec::new();
    for p in primes_up_to(pmax) {
        if p == 2 || n.is_multiple_of(p) {
            continue;
        }
        rows.push(shih_classify(n, p)?);
    }
    let genus_label = |g: GenusClass| match g {
        GenusClass::Zero => 0u64,
        GenusClass::One => 1,
        GenusClass::Higher(g) => g,
    };
    let obstruction_label = |o: LevelObstruction| match o {
        LevelObstruction::Obstructed => "obstructed",
        LevelObstruction::LocalPoints => "local_points",
    };
    let text = match format {
        Format::Table => {
            let mut s = String::from("     n      p  applicable  genus  local obstruction\n");
            for r in &rows {
                let obs = match r.local_obstruction {
                    Some((place, o)) => format!("{} at {place}", obstruction_label(o)),
                    None => "-".to_string(),
                };
                let _ = writeln!(
                    s,
                    "{:>6} {:>6}  {:>10}  {:>5}  {obs}",
                    r.n,
                    r.p,
                    if r.shih_applicable { "yes" } else { "no" },
                    genus_label(r.genus_class),
                );
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("n,p,applicable,genus_class,obstruction_place,obstruction\n");
            for r in &rows {
                let (place, obs) = match r.local_obstruction {
                    Some((place, o)) => (place.to_string(), obstruction_label(o).to_string()),
                    None => (String::new(), String::new()),
                };
                let _ = writeln!(
                    s,
                    "{},{},{},{},{place},{obs}",
                    r.n,
                    r.p,
                    r.shih_applicable,
                    genus_label(r.genus_class)
                );
            }
            s
        }
        Format::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut o = Map::new();
                    o.insert("n".into(), Value::from(r.n));
                    o.insert("p".into(), Value::from(r.p));
                    o.insert("applicable".into(), Value::Bool(r.shih_applicable));
                    o.insert("genus_class".into(), Value::from(genus_label(r.genus_class)));
                    let obs = match r.local_obstruction {
                        Some((place, v)) => {
                            let mut oo = Map::new();
                            oo.insert("place".into(), Value::from(place));
                            oo.insert("verdict".into(), Value::from(obstruction_label(v)));
                            Value::Object(oo)
                        }
                        None => Value::Null,
                    };
                    o.insert("obstruction".into(), obs);
                    Value::Object(o)
                })
                .collect();
            let mut s = serde_json::to_string(&Value::Array(arr)).expect("plain data");
            s.push('\n');
            s
        }
    };
    Ok((0, text))
}

fn cmd_invariants(
    x0: Option<u64>,
    xd: Option<u64>,
    q: Option<u64>,
    format: Format,
) -> Result<(u8, String), Error> {
    let fields: Vec<(String, Value)> = match (x0, xd) {
        (Some(n), None) => {
            let inv = X0Invariants::compute(n)?;
            vec![
                ("curve".into(), Value::from(format!("X0({n})"))),
                ("n".into(), Value::from(inv.n)),
                ("genus".into(), Value::from(inv.genus)),
                ("nu2".into(), Value::from(inv.nu2)),
                ("nu3".into(), Value::from(inv.nu3)),
                ("nu_inf".into(), Value::from(inv.nu_inf)),
                ("wn_fixed".into(), Value::from(inv.wn_fixed)),
                ("genus_plus".into(), Value::from(inv.genus_plus)),
                (
                    "min_fixed_degree".into(),
                    Value::from(inv.min_fixed_degree),
                ),
            ]
        }
        (None, Some(d)) => {
            let desc = match q {
                Some(q) => ShimuraDescriptor::with_involution(d, q)?,
                None => ShimuraDescriptor::new(d)?,
            };
            let inv = ShimuraInvariants::compute(&desc)?;
            let mut fields: Vec<(String, Value)> = vec![
                ("curve".into(), Value::from(format!("X^{d}"))),
                ("d".into(), Value::from(inv.d)),
                ("e2".into(), Value::from(inv.e2)),
                ("e3".into(), Value::from(inv.e3)),
                ("genus_xd".into(), Value::from(inv.genus_xd)),
            ];
            for (m, nu) in &inv.al_fixed {
                fields.push((format!("fixed_w_{m}"), Value::from(*nu)));
            }
            fields.push(("genus_xd_plus".into(), Value::from(inv.genus_xd_plus)));
            if let Some(k) = inv.genus_klein {
                fields.push(("genus_klein".into(), Value::from(k)));
            }
            fields.push(("genus_full".into(), Value::from(inv.genus_full)));
            fields
        }
        _ => {
            return Err(Error::InvalidInput(
                "pass exactly one of --x0 N or --xd D".into(),
            ))
        }
    };
    let text = match format {
        Format::Table => {
            let mut s = String::new();
            for (k, v) in &fields {
                let _ = writeln!(s, "{k}: {}", plain(v));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("field,value\n");
            for (k, v) in &fields {
                let _ = writeln!(s, "{k},{}", plain(v));
            }
            s
        }
        Format::Json => {
            let mut o = Map::new();
            for (k, v) in fields {
                o.insert(k, v);
            }
            to_json_line(&o)
        }
    };
    Ok((0, text))
}

// rendering helpers

fn hypothesis_fields(r: &HypothesisReport) -> Vec<(&'static str, String)> {
    vec![
        ("h1_no_rational_fixed", r.h1_no_rational_fixed.to_string()),
        ("h1_class_number", r.h1_class_number.to_string()),
        ("h2_geometric_fixed", r.h2_geometric_fixed.to_string()),
        ("fixed_points", r.fixed_points.to_string()),
        ("h3_local_points", evidence_name(r.h3_local_points).into()),
        ("h4_quotient_finite", r.h4_quotient_finite.to_string()),
        ("genus", r.genus.to_string()),
        ("quotient_genus", r.quotient_genus.to_string()),
    ]
}

fn hypothesis_table(r: &HypothesisReport) -> String {
    let yn = |b: bool| if b { "yes" } else { "NO" };
    let mut s = String::new();
    let _ = writeln!(s, "genus: {}  quotient genus: {}", r.genus, r.quotient_genus);
    let _ = writeln!(
        s,
        "h1 no rational fixed point: {} (class number {})",
        yn(r.h1_no_rational_fixed),
        r.h1_class_number
    );
    let _ = writeln!(
        s,
        "h2 geometric fixed points: {} ({} fixed points)",
        yn(r.h2_geometric_fixed),
        r.fixed_points
    );
    let _ = writeln!(
        s,
        "h3 points everywhere locally: {}",
        evidence_name(r.h3_local_points)
    );
    let _ = writeln!(
        s,
        "h4 finitely many quotient points: {} (quotient genus {})",
        yn(r.h4_quotient_finite),
        r.quotient_genus
    );
    s
}

fn evidence_name(e: LocalPointsEvidence) -> &'static str {
    match e {
        LocalPointsEvidence::ProvenCusps => "proven_cusps",
        LocalPointsEvidence::CitedFact => "cited_fact",
        LocalPointsEvidence::Unknown => "unknown",
    }
}

fn hypotheses_json(r: &HypothesisReport) -> Value {
    let mut o = Map::new();
    o.insert(
        "h1_no_rational_fixed".into(),
        Value::Bool(r.h1_no_rational_fixed),
    );
    o.insert("h1_class_number".into(), Value::from(r.h1_class_number));
    o.insert(
        "h1_justification".into(),
        Value::from(r.h1_justification.as_str()),
    );
    o.insert(
        "h2_geometric_fixed".into(),
        Value::Bool(r.h2_geometric_fixed),
    );
    o.insert("fixed_points".into(), Value::from(r.fixed_points));
    o.insert(
        "h3_local_points".into(),
        Value::from(evidence_name(r.h3_local_points)),
    );
    o.insert(
        "h4_quotient_finite".into(),
        Value::Bool(r.h4_quotient_finite),
    );
    o.insert("genus".into(), Value::from(r.genus));
    o.insert("quotient_genus".into(), Value::from(r.quotient_genus));
    Value::Object(o)
}

fn descriptor_json(desc: &CurveDescriptor) -> Value {
    let mut o = Map::new();
    match desc {
        CurveDescriptor::X0N { n } => {
            o.insert("curve".into(), Value::from("x0"));
            o.insert("n".into(), Value::from(*n));
        }
        CurveDescriptor::XDPlus { shimura } => {
            o.insert("curve".into(), Value::from("xd_plus"));
            o.insert("d".into(), Value::from(shimura.d()));
            o.insert(
                "q".into(),
                Value::from(shimura.q().expect("descriptor carries q")),
            );
        }
    }
    Value::Object(o)
}

fn certificate_table(cert: &TwistCertificate, bound: u64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "curve: {}", cert.descriptor.label());
    let _ = writeln!(s, "variant: {}", cert.conditions.variant.name());
    s.push_str(&hypothesis_table(&cert.hypotheses));
    let _ = writeln!(s, "threshold M: {}", cert.conditions.weil_threshold_m);
    let _ = writeln!(
        s,
        "residue condition: p = 1 (mod 8), p > M, p not in {} excluded primes",
        cert.conditions.qr_primes.len() + cert.conditions.bad_primes.len()
    );
    let qr: Vec<String> = cert
        .conditions
        .qr_primes
        .iter()
        .map(u64::to_string)
        .collect();
    let _ = writeln!(
        s,
        "quadratic conditions ({}): {}",
        qr.len(),
        if qr.is_empty() {
            "none".to_string()
        } else {
            qr.join(" ")
        }
    );
    let splitting = match cert.conditions.splitting {
        SplittingCondition::PrincipalForm { disc } => format!(
            "p represented by the principal form of discriminant {}",
            disc.value()
        ),
        SplittingCondition::Inert { n } => format!("p inert in Q(sqrt(-{n}))"),
    };
    let _ = writeln!(s, "splitting condition: {splitting}");
    let bad: Vec<String> = cert
        .conditions
        .bad_primes
        .iter()
        .map(u64::to_string)
        .collect();
    let _ = writeln!(s, "bad primes: {}", bad.join(" "));
    let _ = writeln!(
        s,
        "density lower bound: {}/{} (= {})",
        cert.density_lower_bound.numer(),
        cert.density_lower_bound.denom(),
        sci_approx(&cert.density_lower_bound)
    );
    let _ = writeln!(
        s,
        "qualifying primes up to {bound}: {}",
        cert.primes.len()
    );
    for (p, t) in &cert.primes {
        match t.witness {
            Some((x, y)) => {
                let _ = writeln!(s, "  {p}  witness ({x}, {y})");
            }
            None => {
                let _ = writeln!(s, "  {p}");
            }
        }
    }
    for (i, c) in cert.caveats.iter().enumerate() {
        let _ = writeln!(s, "caveat {}: {c}", i + 1);
    }
    s
}

/// Deterministic scientific-notation rendering with six significant
/// digits, computed by exact integer division (display only — callers
/// compare the num/den pair).
fn sci_approx(r: &Rational) -> String {
    let num = r.numer();
    let den = r.denom();
    if num >= den {
        return format!("{num}/{den}");
    }
    let ten = BigInt::from(10u32);
    let mut scaled = num.clone();
    let mut e = 0u64;
    while &scaled < den {
        scaled *= &ten;
        e += 1;
    }
    let mut mult = BigInt::one();
    for _ in 0..e + 5 {
        mult *= &ten;
    }
    let mant = (num * mult / den).to_string();
    format!("{}.{}e-{e}", &mant[..1], &mant[1..])
}

fn bigint_json(v: &BigInt) -> Value {
    use num_traits::ToPrimitive;
    match v.to_i64() {
        Some(x) if x.unsigned_abs() <= (1 << 53) => Value::from(x),
        _ => Value::String(v.to_string()),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn to_json_line(o: &Map<String, Value>) -> String {
    let mut s = serde_json::to_string(&Value::Object(o.clone())).expect("plain data");
    s.push('\n');
    s
}

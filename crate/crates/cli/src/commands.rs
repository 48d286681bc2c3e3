use std::fmt::Write as _;
use std::fs;
use std::time::Duration;

use mk3_core::corestrict;
use mk3_core::io::{
    self, CanonicalLatticeJson, DiscFormJson, FieldDescriptor, LatticeFile, OrderDescriptor, PrimeJson, QuatDescriptor,
    RamificationJson, VerdictJson,
};
use mk3_core::k3fib::{self, K3Context};
use mk3_core::lattice::{
    even_overlattice, format_primary, isotropic_subgroups, length, primary_parts, rank3_realizable, DiscForm,
    IntLattice, Rank3Outcome,
};
use mk3_core::numfield::splitting_type;
use mk3_core::quat::{Form, QuatOrder, QuaternionAlgebra};
use mk3_core::ramification::{self, RamificationReport, Resolution, SymbolSource};
use mk3_core::reproduce;
use mk3_core::{BigInt, Error, NumberField};
use num_traits::{Signed, Zero};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCONSISTENT: u8 = 3;
pub const DEFAULT_BOUND: i64 = 6;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }

    fn from_core(context: &str, e: Error) -> Self {
        let code = match e {
            Error::MismatchDetected { .. } => EXIT_INCONSISTENT,
            _ => EXIT_USAGE,
        };
        let message = if context.is_empty() { e.to_string() } else { format!("{context}: {e}") };
        CliError { code, message }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::from_core("", e)
    }
}

pub struct Output {
    pub text: String,
    pub json: Value,
    pub code: u8,
    pub warnings: Vec<String>,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, code: 0, warnings: Vec::new() }
    }
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn load<T: DeserializeOwned>(arg: &str) -> Result<T, CliError> {
    let (label, text) = if arg.trim_start().starts_with('{') {
        ("inline descriptor".to_string(), arg.to_string())
    } else {
        let text = fs::read_to_string(arg).map_err(|e| CliError::usage(format!("{arg}: {e}")))?;
        (arg.to_string(), text)
    };
    io::from_json(&text).map_err(|e| CliError::from_core(&label, e))
}

fn load_algebra(arg: &str) -> Result<QuaternionAlgebra, CliError> {
    load::<QuatDescriptor>(arg)?.build().map_err(|e| CliError::from_core(arg_label(arg), e))
}

fn load_order(alg: &str, order: &str) -> Result<QuatOrder, CliError> {
    let a = load_algebra(alg)?;
    load::<OrderDescriptor>(order)?.build(a).map_err(|e| CliError::from_core(arg_label(order), e))
}

fn load_lattice(arg: &str) -> Result<IntLattice, CliError> {
    load::<LatticeFile>(arg)?.build().map_err(|e| CliError::from_core(arg_label(arg), e))
}

fn arg_label(arg: &str) -> &str {
    if arg.trim_start().starts_with('{') {
        "inline descriptor"
    } else {
        arg
    }
}

fn poly_string(c: &[BigInt]) -> String {
    let mut terms: Vec<(bool, String)> = Vec::new();
    for (i, a) in c.iter().enumerate().rev() {
        if a.is_zero() {
            continue;
        }
        let m = a.abs();
        let mono = match i {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{i}"),
        };
        let body = if i > 0 && m == BigInt::from(1) { mono } else { format!("{m}{mono}") };
        terms.push((a.is_negative(), body));
    }
    let mut s = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(body);
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn field_info(poly: Option<&str>, field: Option<&str>, primes: &[u64]) -> Result<Output, CliError> {
    let k = match (poly, field) {
        (Some(p), _) => {
            let c = io::parse_poly(p).map_err(|e| CliError::from_core("--poly", e))?;
            NumberField::new(&c).map_err(|e| CliError::from_core("--poly", e))?
        }
        (None, Some(f)) => load::<FieldDescriptor>(f)?.build().map_err(|e| CliError::from_core(arg_label(f), e))?,
        (None, None) => return Err(CliError::usage("field info needs --poly or --field")),
    };
    let mut text = String::new();
    let _ = writeln!(text, "polynomial   {}", poly_string(k.min_poly()));
    let _ = writeln!(text, "degree       {}", k.degree());
    let _ = writeln!(text, "disc         {}", k.discriminant());
    let _ = writeln!(text, "real places  {}", k.degree());
    let mut rows = Vec::new();
    for &p in primes {
        let ps = k.factor_prime(p).map_err(|e| CliError::from_core("--primes", e))?;
        let kind = splitting_type(&ps, k.degree());
        let desc: Vec<String> = ps.iter().map(|q| format!("{q} e={} f={}", q.e, q.f)).collect();
        let _ = writeln!(text, "{p:<4} {kind:<17} {}", desc.join("  "));
        rows.push(json!({"p": p, "type": kind, "primes": ps.iter().map(PrimeJson::from).collect::<Vec<_>>()}));
    }
    let json = json!({
        "min_poly": k.min_poly().iter().map(io::int_value).collect::<Vec<_>>(),
        "degree": k.degree(),
        "disc": io::int_value(k.discriminant()),
        "primes": rows,
    });
    Ok(Output::ok(text, json))
}

fn source_label(s: SymbolSource) -> &'static str {
    match s {
        SymbolSource::Sign => "sign",
        SymbolSource::Tame => "tame",
        SymbolSource::Trivial => "trivial",
        SymbolSource::ProductFormula => "product formula",
        SymbolSource::Undetermined => "undetermined",
    }
}

fn render_ram(k: &NumberField, r: &RamificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<20} {:>6}  source", "place", "symbol");
    for sym in &r.symbols {
        let v = sym.value.map_or("?".to_string(), |v| v.to_string());
        let label = ramification::place_label(k, &sym.place);
        let pad = 20usize.saturating_sub(label.chars().count());
        let _ = writeln!(s, "{label}{} {v:>6}  {}", " ".repeat(pad), source_label(sym.source));
    }
    let ram: Vec<String> = r.ramified().iter().map(|p| ramification::place_label(k, p)).collect();
    let _ = writeln!(s, "ramified     {{{}}}", ram.join(", "));
    let _ = writeln!(s, "𝔇            {}  norm {}", r.disc_ideal.display(), r.disc_ideal.norm());
    let _ = writeln!(s, "resolution   {}", r.resolution);
    s
}

pub fn quat_ram(algebra: &str) -> Result<Output, CliError> {
    let alg = load_algebra(algebra)?;
    let k = alg.field();
    let r = ramification::ramification_partial(&alg)?;
    let mut text = format!("algebra      ({}, {}) over {}\n", alg.a(), alg.b(), poly_string(k.min_poly()));
    text.push_str(&render_ram(k, &r));
    let mut json = serde_json::to_value(RamificationJson::from(&r)).expect("serializes");
    if r.resolution == Resolution::Ambiguous {
        let e = Error::DyadicAmbiguity { count: r.undetermined() };
        return Ok(Output { text, json, code: EXIT_USAGE, warnings: vec![e.to_string()] });
    }
    let adm = ramification::is_mumford_admissible(&alg)?;
    let _ = writeln!(text, "admissible   {}", yes_no(adm.admissible));
    for why in &adm.reasons {
        let _ = writeln!(text, "  {why}");
    }
    json["admissible"] = json!(adm.admissible);
    Ok(Output::ok(text, json))
}

pub fn order_check(algebra: &str, order: &str) -> Result<Output, CliError> {
    let o = load_order(algebra, order)?;
    let alg = o.algebra();
    let disc = o.disc();
    let disc_ideal = o.disc_ideal()?;
    let mut text = String::new();
    let flags = o.flags();
    let _ = writeln!(text, "contains 1   {}", yes_no(flags.contains_one));
    let _ = writeln!(text, "ring         {}", yes_no(flags.is_ring));
    let _ = writeln!(text, "disc(O)      ({disc})  norm {}", disc_ideal.norm());
    let mut json = json!({
        "contains_one": flags.contains_one,
        "ring": flags.is_ring,
        "disc": disc.to_string(),
        "disc_norm": io::int_value(&disc_ideal.norm()),
    });
    match ramification::ramification_set(alg) {
        Ok(r) => {
            let max = o.is_maximal(&r.disc_ideal)?;
            let _ = writeln!(text, "𝔇            {}  norm {}", r.disc_ideal.display(), r.disc_ideal.norm());
            let _ = writeln!(text, "maximal      {}", yes_no(max));
            json["big_d"] = json!(r.disc_ideal.display());
            json["maximal"] = json!(max);
        }
        Err(e @ Error::DyadicAmbiguity { .. }) => {
            let _ = writeln!(text, "maximal      unknown");
            json["maximal"] = Value::Null;
            return Ok(Output { text, json, code: 0, warnings: vec![e.to_string()] });
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Output::ok(text, json))
}

pub fn lambda_can(algebra: &str, order: &str, form: &str) -> Result<Output, CliError> {
    let form: Form =
        form.parse().map_err(|_| CliError::usage(format!("--form: expected killing or twisted, got {form:?}")))?;
    let o = load_order(algebra, order)?;
    let r = corestrict::lambda_can(&o, form)?;
    let c = &r.lattice;
    let mut text = String::new();
    let _ = writeln!(text, "form         {}", r.form);
    if let Some(b) = &r.ok_basis {
        for (i, g) in b.iter().enumerate() {
            let _ = writeln!(text, "basis γ{}     {g}", i + 1);
        }
    }
    text.push_str(&reproduce::render_gram(c));
    let _ = writeln!(text, "det          {}", c.signed_det);
    let _ = writeln!(text, "signature    ({}, {})", c.signature.0, c.signature.1);
    if let Some(id) = &r.identity {
        let _ = writeln!(text, "identity     det Q₀ = disc(K)ⁿ·Nm(det Q) = {}", id.rhs);
    }
    if let Some(p) = &r.predicted_disc {
        let _ = writeln!(text, "predicted    {p}");
    }
    if let Some(m) = r.maximal {
        let _ = writeln!(text, "maximal      {}", yes_no(m));
    }
    if let Some(a) = &r.admissibility {
        let _ = writeln!(text, "admissible   {}", yes_no(a.admissible));
    }
    let json = serde_json::to_value(CanonicalLatticeJson::new(c, r.predicted_disc.as_ref())).expect("serializes");
    let mut out = Output { text, json, code: 0, warnings: r.warnings.clone() };
    if r.maximal == Some(true) && r.matches_prediction() == Some(false) {
        out.code = EXIT_INCONSISTENT;
        out.warnings.push(format!("|det| = {} differs from the predicted discriminant", c.abs_det()));
    }
    Ok(out)
}

fn nonunit_factors(l: &IntLattice) -> Vec<BigInt> {
    l.snf().diagonal().into_iter().map(|d| d.abs()).filter(|d| d != &BigInt::from(1)).collect()
}

pub fn snf(input: &str) -> Result<Output, CliError> {
    let l = load_lattice(input)?;
    let diag: Vec<BigInt> = l.snf().diagonal().into_iter().map(|d| d.abs()).collect();
    let factors = nonunit_factors(&l);
    let show = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    let mut text = String::new();
    let _ = writeln!(text, "diagonal     [{}]", show(&diag));
    let _ = writeln!(text, "factors      [{}]", show(&factors));
    let _ = writeln!(text, "det          {}", l.det());
    let json = json!({
        "diagonal": diag.iter().map(io::int_value).collect::<Vec<_>>(),
        "factors": factors.iter().map(io::int_value).collect::<Vec<_>>(),
        "det": io::int_value(&l.det()),
    });
    Ok(Output::ok(text, json))
}

fn render_discform(f: &DiscForm) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "group        {}", format_primary(&primary_parts(f.factors())));
    let _ = writeln!(s, "invariants   {f}");
    let _ = writeln!(s, "λ            {}", length(f.factors()).lambda);
    let j = DiscFormJson::from(f);
    for (i, (d, q)) in f.factors().iter().zip(&j.q).enumerate() {
        let _ = writeln!(s, "x{:<3} order {d:<4} q = {q}", i + 1);
    }
    if f.ngens() > 1 {
        s.push_str("b\n");
        for row in &j.b {
            let cells: Vec<String> = row.iter().map(|x| x.trim_end_matches(" mod 1").to_string()).collect();
            let _ = writeln!(s, "  [{}]", cells.join(", "));
        }
    }
    s
}

pub fn discform(input: &str) -> Result<Output, CliError> {
    let l = load_lattice(input)?;
    let f = l.disc_form().map_err(|e| CliError::from_core(arg_label(input), e))?;
    let json = serde_json::to_value(DiscFormJson::from(&f)).expect("serializes");
    Ok(Output::ok(render_discform(&f), json))
}

pub fn overlattices(input: &str, max_order: Option<u128>, cap: u128) -> Result<Output, CliError> {
    let l = load_lattice(input)?;
    let f = l.disc_form().map_err(|e| CliError::from_core(arg_label(input), e))?;
    let subs = isotropic_subgroups(&f, max_order.unwrap_or(f.order()), cap)?;
    let mut text = String::new();
    let _ = writeln!(text, "group        {}", format_primary(&primary_parts(f.factors())));
    let _ =
        writeln!(text, "{:<4} {:<6} {:<24} {:>8}  {:<10} index law", "#", "order", "generators", "det", "signature");
    let mut rows = Vec::new();
    let mut all_hold = true;
    for (i, h) in subs.iter().enumerate() {
        let o = even_overlattice(&l, h)?;
        all_hold &= o.index_law;
        let gens: Vec<String> = h
            .gens
            .iter()
            .map(|g| format!("({})", g.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        let gens = if gens.is_empty() { "-".to_string() } else { gens.join(" ") };
        let (p, q) = o.lattice.signature();
        let _ = writeln!(
            text,
            "{:<4} {:<6} {:<24} {:>8}  {:<10} {}",
            i + 1,
            h.order,
            gens,
            o.lattice.det(),
            format!("({p}, {q})"),
            if o.index_law { "holds" } else { "FAILS" }
        );
        rows.push(json!({
            "order": h.order as u64,
            "generators": h.gens,
            "det": io::int_value(&o.lattice.det()),
            "signature": [p, q],
            "index_law": o.index_law,
            "gram": o.lattice.gram().iter().map(|r| r.iter().map(io::int_value).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }));
    }
    let mut out = Output::ok(text, json!({"subgroups": rows}));
    if !all_hold {
        out.code = EXIT_INCONSISTENT;
        out.warnings.push("index law |A| = |H|²·|A′| violated".into());
    }
    Ok(out)
}

fn parse_signature(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::usage(format!("--signature: expected p,q, got {s:?}"));
    let (p, q) = s.split_once(',').ok_or_else(bad)?;
    Ok((p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

fn outcome_json(r: &Rank3Outcome) -> Value {
    match r {
        Rank3Outcome::Yes { witness } => json!({
            "outcome": "yes",
            "witness": witness.iter().map(|row| row.iter().map(io::int_value).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
        Rank3Outcome::No { reason } => json!({"outcome": "no", "reason": reason}),
        Rank3Outcome::Unknown { bound, reason } => json!({"outcome": "unknown", "bound": bound, "reason": reason}),
    }
}

pub fn rank3(input: &str, signature: &str, negate: bool, bound: i64, limit: Duration) -> Result<Output, CliError> {
    let sig = parse_signature(signature)?;
    let l = load_lattice(input)?;
    let mut f = l.disc_form().map_err(|e| CliError::from_core(arg_label(input), e))?;
    if negate {
        f = f.negate();
    }
    let r = rank3_realizable(&f, sig, bound, limit)?;
    let mut text = String::new();
    let _ =
        writeln!(text, "form         {}{}", if negate { "-" } else { "" }, format_primary(&primary_parts(f.factors())));
    let _ = writeln!(text, "signature    ({}, {})", sig.0, sig.1);
    let _ = writeln!(text, "bound        {bound}");
    match &r {
        Rank3Outcome::Yes { witness } => {
            text.push_str("outcome      yes\n");
            for row in witness {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                let _ = writeln!(text, "  [{}]", cells.join(", "));
            }
        }
        Rank3Outcome::No { reason } => {
            let _ = writeln!(text, "outcome      no ({reason})");
        }
        Rank3Outcome::Unknown { reason, .. } => {
            let _ = writeln!(text, "outcome      unknown ({reason})");
        }
    }
    Ok(Output::ok(text, outcome_json(&r)))
}

pub fn k3_analyze(input: &str, bound: i64, limit: Duration) -> Result<Output, CliError> {
    let l = load_lattice(input)?;
    let ctx = K3Context::new(l).map_err(|e| CliError::from_core(arg_label(input), e))?;
    let cert = k3fib::fibration_exists(&ctx);
    let v = k3fib::mw_torsion_verdict(&ctx, bound, limit)?;
    let mut text = String::new();
    let _ = writeln!(text, "disc group   {}", format_primary(&primary_parts(ctx.disc_form().factors())));
    let _ = writeln!(text, "picard rank  {}", ctx.picard_rank());
    let _ = writeln!(text, "λ            {}", cert.lambda);
    let _ = writeln!(text, "fibration    {} ({})", yes_no(cert.exists), cert.inequality);
    let t: Vec<String> = v.torsion_options.iter().map(ToString::to_string).collect();
    let _ = writeln!(text, "torsion      {{{}}}", t.join(", "));
    if !v.witnessing_configs.is_empty() {
        let c: Vec<String> = v.witnessing_configs.iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "configs      {}", c.join(", "));
    }
    for n in &v.notes {
        let _ = writeln!(text, "note         {n}");
    }
    let json = serde_json::to_value(VerdictJson::from(&v)).expect("serializes");
    Ok(Output::ok(text, json))
}

pub fn reproduce_example(bound: i64, limit: Duration) -> Result<Output, CliError> {
    let r = reproduce::reproduce_example31(bound, limit)?;
    let mut out = Output::ok(r.render(), r.to_json());
    if !r.identities_hold() {
        out.code = EXIT_INCONSISTENT;
        out.warnings.push("determinant, signature or discriminant group disagrees with the printed values".into());
    }
    Ok(out)
}

pub fn reproduce_cm() -> Result<Output, CliError> {
    let r = reproduce::reproduce_cm()?;
    Ok(Output::ok(r.render(), r.to_json()))
}

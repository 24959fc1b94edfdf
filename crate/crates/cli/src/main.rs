use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use aswkit::algebra::{FiniteField, Poly, PolyRing, RatFunField};
use aswkit::asw::{conductor_exponent, Asw, AswError, AswNormalForm};
use aswkit::carlitz::{self, CarlitzError, DEFAULT_U_DEGREE_CAP};
use aswkit::counting::{self, CountError, CountParams, Status, VerificationReport};
use aswkit::ring::Integers;
use aswkit::verify::{self, VerifyConfig, CRITERIA};
use aswkit::witt::{WittError, WittRing};

#[derive(Parser)]
#[command(name = "aswkit", version, about = "Witt vectors, Artin-Schreier-Witt normal forms and p^n-extension counts over F_q(T)")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Characteristic.
    #[arg(long, env = "ASWKIT_P", default_value_t = 2, global = true)]
    p: u32,
    /// q = p^s.
    #[arg(long, env = "ASWKIT_S", default_value_t = 1, global = true)]
    s: u32,
    /// Degree of the prime P.
    #[arg(long, env = "ASWKIT_D", default_value_t = 1, global = true)]
    d: u32,
    /// Conductor exponent bound α.
    #[arg(long, env = "ASWKIT_ALPHA", global = true)]
    alpha: Option<u32>,
    /// Witt length.
    #[arg(long, env = "ASWKIT_N", global = true)]
    n: Option<u32>,
    /// Use this irreducible instead of the canonical prime of degree d.
    #[arg(long, env = "ASWKIT_PRIME", global = true)]
    prime: Option<String>,
    #[arg(long, env = "ASWKIT_CAP", default_value_t = 1 << 20, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    cap: u64,
    #[arg(long, env = "ASWKIT_WITT_MAX", default_value_t = aswkit::witt::DEFAULT_MAX_LENGTH, value_parser = positive_usize, global = true)]
    witt_max: usize,
    #[arg(long, env = "ASWKIT_SATURATION_ROUNDS", default_value_t = 5, value_parser = positive_usize, global = true)]
    saturation_rounds: usize,
    #[arg(long, env = "ASWKIT_FORMAT", value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[arg(long, env = "ASWKIT_SEED", default_value_t = 0, global = true)]
    seed: u64,
    /// Report wall time per record.
    #[arg(long, env = "ASWKIT_TIMING", global = true)]
    timing: bool,
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Jsonl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WittOp {
    Add,
    Sub,
    Neg,
    Mul,
    Frobenius,
    Wp,
    IntMul,
    Ghost,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Domain {
    Ratfun,
    Integers,
}

#[derive(Subcommand)]
enum Command {
    /// Run the acceptance grid.
    VerifyAll {
        /// Restrict to these criteria (1-based, comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
    /// Closed-form counts, optionally against the enumeration oracle.
    Count {
        #[arg(long)]
        oracle: bool,
    },
    /// Normal form, certificate, conductor and behavior at infinity of a Witt vector over F_q(T).
    Normalize { beta: String },
    /// Witt vector arithmetic.
    WittEval {
        #[arg(value_enum)]
        op: WittOp,
        x: String,
        y: Option<String>,
        /// Integer for int-mul.
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
        #[arg(long, value_enum, default_value_t = Domain::Ratfun)]
        over: Domain,
    },
    /// Carlitz polynomial C_M, with optional evaluation and law checks against N.
    Carlitz {
        m: String,
        #[arg(long)]
        eval: Option<String>,
        #[arg(long)]
        with: Option<String>,
    },
    /// Splitting of the infinite place.
    Infinity { beta: String },
}

enum Failure {
    Usage(String),
    Cap(String),
    Failed,
}

impl From<AswError> for Failure {
    fn from(e: AswError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<WittError> for Failure {
    fn from(e: WittError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<aswkit::algebra::AlgebraError> for Failure {
    fn from(e: aswkit::algebra::AlgebraError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        if e.is_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<CarlitzError> for Failure {
    fn from(e: CarlitzError) -> Self {
        match e {
            CarlitzError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let o = &cli.opts;
    if let Some(n) = o.n {
        if n == 0 {
            return Err(Failure::Usage("n must be positive".into()));
        }
        if n as usize > o.witt_max {
            return Err(WittError::LengthBound { n: n as usize, max: o.witt_max }.into());
        }
    }
    match &cli.command {
        Command::VerifyAll { only } => verify_all(o, only),
        Command::Count { oracle } => count(o, *oracle),
        Command::Normalize { beta } => normalize(o, beta),
        Command::WittEval { op, x, y, m, over } => witt_eval(o, *op, x, y.as_deref(), *m, *over),
        Command::Carlitz { m, eval, with } => carlitz_cmd(o, m, eval.as_deref(), with.as_deref()),
        Command::Infinity { beta } => infinity(o, beta),
    }
}

fn n_or_one(o: &Opts) -> usize {
    o.n.unwrap_or(1) as usize
}

fn field(o: &Opts) -> Result<FiniteField, Failure> {
    Ok(FiniteField::new(o.p, o.s)?)
}

fn record_json(r: &VerificationReport, timing: bool) -> Value {
    let status = match r.status() {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Skipped => "skipped",
    };
    json!({
        "check_id": r.check_id,
        "params": r.params,
        "formula": r.formula_value.as_ref().map(|v| v.to_string()),
        "oracle": r.oracle_value.as_ref().map(|v| v.to_string()),
        "status": status,
        "millis": if timing { json!(r.wall_time.as_millis() as u64) } else { Value::Null },
    })
}

/// Prints records sorted by check id; fails if any record failed.
fn emit_records(o: &Opts, mut records: Vec<VerificationReport>) -> Result<(), Failure> {
    records.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    for r in &records {
        match o.format {
            Format::Jsonl => println!("{}", record_json(r, o.timing)),
            Format::Table => {
                let v = |x: &Option<BigInt>| x.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "-".into());
                let mut line = format!(
                    "{:<40} {:<7} formula={} oracle={}",
                    r.check_id,
                    format!("{:?}", r.status()).to_lowercase(),
                    v(&r.formula_value),
                    v(&r.oracle_value)
                );
                if o.timing {
                    line += &format!(" {}ms", r.wall_time.as_millis());
                }
                for (name, ok) in r.identity_checks.iter().filter(|(_, ok)| !ok) {
                    line += &format!(" [{name}: {ok}]");
                }
                if let Some(note) = &r.note {
                    line += &format!(" ({note})");
                }
                println!("{line}");
            }
        }
    }
    let fails = records.iter().filter(|r| r.status() == Status::Fail).count();
    if o.format == Format::Table {
        let skipped = records.iter().filter(|r| r.status() == Status::Skipped).count();
        println!("{} records: {} pass, {fails} fail, {skipped} skipped", records.len(), records.len() - fails - skipped);
    }
    if fails > 0 {
        Err(Failure::Failed)
    } else {
        Ok(())
    }
}

fn verify_all(o: &Opts, only: &[usize]) -> Result<(), Failure> {
    if let Some(k) = only.iter().find(|&&k| k == 0 || k > CRITERIA.len()) {
        return Err(Failure::Usage(format!("criterion {k} outside 1..={}", CRITERIA.len())));
    }
    let cfg = VerifyConfig {
        cap: o.cap,
        witt_max: o.witt_max,
        saturation_rounds: o.saturation_rounds,
        seed: o.seed,
        prime: o.prime.clone(),
    };
    let records = if only.is_empty() {
        verify::run_all(&cfg)
    } else {
        only.iter().flat_map(|&k| verify::run_criterion(k, &cfg)).collect()
    };
    emit_records(o, records)
}

fn count(o: &Opts, oracle: bool) -> Result<(), Failure> {
    let alpha = o.alpha.ok_or_else(|| Failure::Usage("count needs --alpha".into()))?;
    let n = n_or_one(o) as u32;
    let params = CountParams::new(o.p, o.s, o.d, alpha, n)?;
    let pj = json!({"q": params.q(), "p": o.p, "s": o.s, "d": o.d, "alpha": alpha, "n": n});
    let id = format!("count.q{:02}.d{}.a{:03}.n{}", params.q(), o.d, alpha, n);
    let start = std::time::Instant::now();
    let v = counting::v_n(&params)?;
    let mut rec = VerificationReport::new(format!("{id}.v_n"), pj.clone()).formula(v.clone());
    let mut extra = vec![
        VerificationReport::new(format!("{id}.w"), pj.clone()).formula(counting::w(&params, alpha)?),
        VerificationReport::new(format!("{id}.s_n"), pj.clone()).formula(counting::s_n(&params)?),
    ];
    if n == 1 {
        extra.push(VerificationReport::new(format!("{id}.t1"), pj.clone()).formula(counting::t1(&params, alpha)?));
    }
    if oracle {
        let ring = PolyRing::new(params.field()?);
        let prime = match &o.prime {
            Some(text) => Some(counting::oracle_prime(&params, &ring, Some(&ring.parse(text)?))?),
            None => None,
        };
        rec = rec.oracle(counting::oracle_cyclic_subgroups(&params, prime.as_ref(), o.cap)?);
    }
    rec.wall_time = start.elapsed();
    extra.push(rec);
    emit_records(o, extra)
}

fn conductor_text(prime: &Poly, m: u64) -> String {
    if prime.len() == 2 && prime.coeff(0).is_zero() {
        format!("{prime}^{}", m + 1)
    } else {
        format!("({prime})^{}", m + 1)
    }
}

fn normal_form_json(asw: &Asw, nf: &AswNormalForm, focus: &Poly) -> Result<Value, Failure> {
    let p = asw.witt().p();
    let mut conductors = Vec::new();
    for b in &nf.primes {
        let l = b.lambdas();
        let m = if l[0] > 0 {
            conductor_exponent(p, &l)?
        } else {
            // first layers unramified at this prime
            let k = l.iter().position(|&x| x > 0).expect("a block has a pole");
            conductor_exponent(p, &l[k..])?
        };
        conductors.push(json!({"P": b.prime.to_string(), "exponent": m, "conductor": conductor_text(&b.prime, m)}));
    }
    let verdict = if asw.is_single_prime_form(nf, focus) {
        "ramified only at P, no constant or polynomial part"
    } else if nf.block(focus).is_some() {
        "ramified at P and elsewhere or with constant or polynomial part"
    } else {
        "unramified at P"
    };
    let inf = asw.infinity_behavior(nf);
    let mut v = nf.to_json();
    v["conductors"] = json!(conductors);
    v["P"] = json!(focus.to_string());
    v["verdict"] = json!(verdict);
    v["infinity"] = json!({"e": inf.e, "f": inf.f, "g": inf.g, "label": inf.label()});
    Ok(v)
}

fn focus_prime(o: &Opts, ring: &PolyRing) -> Result<Poly, Failure> {
    match &o.prime {
        Some(text) => {
            let p = ring.monic(&ring.parse(text)?);
            if !ring.is_irreducible(&p)? {
                return Err(Failure::Usage(format!("{p} is not irreducible")));
            }
            Ok(p)
        }
        None => Ok(ring.canonical_prime(o.d as usize)?),
    }
}

fn print_object(o: &Opts, v: &Value) {
    match o.format {
        Format::Jsonl => println!("{v}"),
        Format::Table => {
            if let Value::Object(map) = v {
                for (k, val) in map {
                    match val {
                        Value::String(s) => println!("{k}: {s}"),
                        other => println!("{k}: {other}"),
                    }
                }
            }
        }
    }
}

fn normalize(o: &Opts, beta: &str) -> Result<(), Failure> {
    let asw = Asw::with_bound(field(o)?, n_or_one(o), o.witt_max)?;
    let g = asw.parse(beta)?;
    let nf = asw.witt_normalize(&g)?;
    asw.check_normal_form(&g, &nf)?;
    let focus = focus_prime(o, asw.k().poly_ring())?;
    let mut v = normal_form_json(&asw, &nf, &focus)?;
    v["input"] = json!(g.to_string());
    print_object(o, &v);
    Ok(())
}

fn infinity(o: &Opts, beta: &str) -> Result<(), Failure> {
    let asw = Asw::with_bound(field(o)?, n_or_one(o), o.witt_max)?;
    let g = asw.parse(beta)?;
    let nf = asw.witt_normalize(&g)?;
    let b = asw.infinity_behavior(&nf);
    let v = json!({
        "input": g.to_string(),
        "normalized": nf.normalized_beta.to_string(),
        "s": b.s, "t": b.t, "e": b.e, "f": b.f, "g": b.g,
        "label": b.label(),
    });
    print_object(o, &v);
    Ok(())
}

fn witt_eval(o: &Opts, op: WittOp, x: &str, y: Option<&str>, m: Option<i64>, over: Domain) -> Result<(), Failure> {
    let n = n_or_one(o);
    let need_y = matches!(op, WittOp::Add | WittOp::Sub | WittOp::Mul);
    if need_y != y.is_some() {
        return Err(Failure::Usage(if need_y { "this operation takes two vectors" } else { "this operation takes one vector" }.into()));
    }
    if op == WittOp::IntMul && m.is_none() {
        return Err(Failure::Usage("int-mul needs --m".into()));
    }
    let result = match over {
        Domain::Ratfun => {
            let k = RatFunField::new(field(o)?);
            let w = WittRing::with_bound(k.clone(), o.p, n, o.witt_max)?;
            let parse = |t: &str| w.parse(t, |s| k.parse(s));
            let xv = parse(x)?;
            let yv = y.map(parse).transpose()?;
            match op {
                WittOp::Add => w.add(&xv, yv.as_ref().expect("checked"))?.to_string(),
                WittOp::Sub => w.sub(&xv, yv.as_ref().expect("checked"))?.to_string(),
                WittOp::Mul => w.mul(&xv, yv.as_ref().expect("checked"))?.to_string(),
                WittOp::Neg => w.neg(&xv)?.to_string(),
                WittOp::Frobenius => w.frobenius(&xv)?.to_string(),
                WittOp::Wp => w.wp(&xv)?.to_string(),
                WittOp::IntMul => w.int_mul(m.expect("checked"), &xv)?.to_string(),
                WittOp::Ghost => return Err(Failure::Usage("ghost components need --over integers".into())),
            }
        }
        Domain::Integers => {
            let w = WittRing::with_bound(Integers, o.p, n, o.witt_max)?;
            let parse = |t: &str| {
                w.parse(t, |s| s.trim().parse::<BigInt>().map_err(|e| aswkit::algebra::AlgebraError::Parse(e.to_string())))
            };
            let xv = parse(x)?;
            let yv = y.map(parse).transpose()?;
            match op {
                WittOp::Add => w.add(&xv, yv.as_ref().expect("checked"))?.to_string(),
                WittOp::Sub => w.sub(&xv, yv.as_ref().expect("checked"))?.to_string(),
                WittOp::Mul => w.mul(&xv, yv.as_ref().expect("checked"))?.to_string(),
                WittOp::Neg => w.neg(&xv)?.to_string(),
                WittOp::IntMul => w.int_mul(m.expect("checked"), &xv)?.to_string(),
                WittOp::Ghost => {
                    let g: Vec<String> = w.ghost(&xv)?.iter().map(|c| c.to_string()).collect();
                    format!("[{}]", g.join(", "))
                }
                WittOp::Frobenius | WittOp::Wp => {
                    return Err(Failure::Usage("Frobenius needs characteristic p; use --over ratfun".into()))
                }
            }
        }
    };
    print_object(o, &json!({"result": result}));
    Ok(())
}

fn carlitz_cmd(o: &Opts, m: &str, eval: Option<&str>, with: Option<&str>) -> Result<(), Failure> {
    let ring = PolyRing::new(field(o)?);
    let mp = ring.parse(m)?;
    let c = carlitz::carlitz_poly(&ring, &mp)?;
    let q = ring.field().q() as u64;
    let mut v = json!({
        "M": mp.to_string(),
        "C_M": c.to_string(),
        "u_degree": c.u_degree(q),
        "shape": carlitz::shape_check(&ring, &mp)?,
    });
    if let Some(x) = eval {
        let xp = ring.parse(x)?;
        v["eval"] = json!(carlitz::carlitz_eval(&ring, &ring, &mp, &xp)?.to_string());
    }
    let mut ok = v["shape"] == json!(true);
    if let Some(n) = with {
        let np = ring.parse(n)?;
        let compose = carlitz::compose_check(&ring, &mp, &np)?;
        let gcd = carlitz::gcd_check(&ring, &mp, &np, DEFAULT_U_DEGREE_CAP.min(o.cap))?;
        v["N"] = json!(np.to_string());
        v["compose_check"] = json!(compose);
        v["gcd_check"] = json!(gcd);
        ok &= compose && gcd;
    }
    print_object(o, &v);
    if ok {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}

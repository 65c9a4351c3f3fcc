//! Command-line driver: flag parsing, dispatch, JSON reporting, batch mode.
//!
//! Exit codes: 0 success, 2 malformed input, 3 precondition violation,
//! 4 internal invariant failure.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::time::Instant;

use num_traits::One;

use crate::ch0::{
    analyze_with_budget, cm_criterion, cm_tau_admissible, default_prime_budget,
    elliptic_invariants, Evidence,
};
use crate::exactmath::{fmt_rat, parse_rat, Rat, UniPoly};
use crate::fibration::{real_components, FibrationSpec};
use crate::galois::zarhin_sn_certificate;
use crate::pencil::{
    parse_upper_triangle, pencil_delta, pencil_separable, pencil_sextic, QuadricPencil,
};
use crate::report::Report;
use crate::soscert::{certify_u_plus_v, criterion_a_certificate, SOSCertificate};
use crate::symbols::{
    faddeev_decide, residue_profile, FaddeevOutcome, Place, QuaternionSymbol, RatFunc,
};
use crate::Error;

const USAGE: &str = "usage: qfib <command> [flags] [--json]

commands:
  analyze     --p <coeffs> | --diagonal \"q1;q2;q3;q4\" | --file <spec.json>
  residues    --f <num|den> --g <num|den>
  faddeev     --f <num|den> --g <num|den>
  hilbert     --a <rat> --b <rat> --place <prime|real>
  jinv        --p <coeffs>
  cm          --p <coeffs>
  certify     --p <coeffs> [--out <file>]
  verify-cert --file <cert.json|->
  components  --g <coeffs>
  pencil      --file <pencil.json> | --f \"<21 rats>\" --g \"<21 rats>\"
  zarhin      --f <coeffs> [--budget <n>]
  tau         --d <int> --k <int> --beta <int>
  batch       --file <requests.ndjson|->

polynomials are comma-separated rational coefficients in ascending degree
(\"1,0,1\" is 1 + u^2); diagonal entries use expressions in u.
QFIB_PRIME_BUDGET overrides the default prime budget.";

/// A parsed request: one command plus string-valued parameters.
#[derive(Clone, Debug)]
pub struct Request {
    pub command: String,
    pub params: BTreeMap<String, String>,
}

impl Request {
    fn get(&self, key: &str) -> crate::Result<&str> {
        self.params
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::InvalidInput(format!("missing --{key}")))
    }

    fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert(
            "command".into(),
            serde_json::Value::String(self.command.clone()),
        );
        for (k, v) in &self.params {
            map.insert(k.clone(), serde_json::Value::String(v.clone()));
        }
        serde_json::Value::Object(map)
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) => 2,
        Error::Precondition(_)
        | Error::NotAdmissible(_)
        | Error::DegeneratePencil
        | Error::ZeroDivisor
        | Error::DivisionByZeroDenominator => 3,
        Error::Internal(_) => 4,
    }
}

// ---------------------------------------------------------------------
// polynomial expressions for --diagonal, e.g. "1+u^2" or "-(u-1)*u"
// ---------------------------------------------------------------------

struct ExprParser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl<'a> ExprParser<'a> {
    fn new(s: &'a str) -> Self {
        ExprParser {
            chars: s.chars().peekable(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().copied()
    }

    fn expr(&mut self) -> crate::Result<UniPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.chars.next();
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.chars.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> crate::Result<UniPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.chars.next();
                    acc = &acc * &self.factor()?;
                }
                // implicit multiplication like "2u" or "2(u+1)"
                Some('u') | Some('(') => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> crate::Result<UniPoly> {
        let base = match self.peek() {
            Some('-') => {
                self.chars.next();
                return Ok(-&self.factor()?);
            }
            Some('(') => {
                self.chars.next();
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::InvalidInput("expected `)`".into()));
                }
                self.chars.next();
                inner
            }
            Some('u') => {
                self.chars.next();
                UniPoly::var()
            }
            Some(c) if c.is_ascii_digit() => self.number()?,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unexpected token {other:?} in polynomial expression"
                )))
            }
        };
        if self.peek() == Some('^') {
            self.chars.next();
            let e = self.number()?;
            let e = e
                .coeff(0)
                .to_integer()
                .try_into()
                .map_err(|_| Error::InvalidInput("bad exponent".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn number(&mut self) -> crate::Result<UniPoly> {
        self.skip_ws();
        let mut s = String::new();
        while self
            .chars
            .peek()
            .is_some_and(|c| c.is_ascii_digit() || *c == '/')
        {
            s.push(self.chars.next().unwrap());
        }
        if s.is_empty() {
            return Err(Error::InvalidInput("expected a number".into()));
        }
        Ok(UniPoly::constant(parse_rat(&s)?))
    }
}

/// Parse a polynomial expression in u with rational coefficients.
pub fn parse_poly_expr(s: &str) -> crate::Result<UniPoly> {
    let mut p = ExprParser::new(s);
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(Error::InvalidInput(format!(
            "trailing characters in expression `{s}`"
        )));
    }
    Ok(out)
}

/// Parse the fibration from request parameters: --p (with optional --a/--b),
/// --diagonal, or --file with the JSON schema.
pub fn fibration_from_request(req: &Request) -> crate::Result<FibrationSpec> {
    if let Some(p) = req.params.get("p") {
        let p = UniPoly::parse(p)?;
        let a = match req.params.get("a") {
            Some(a) => parse_rat(a)?,
            None => -Rat::one(),
        };
        let b = match req.params.get("b") {
            Some(b) => parse_rat(b)?,
            None => -Rat::one(),
        };
        return FibrationSpec::standard(a, b, p);
    }
    if let Some(d) = req.params.get("diagonal") {
        let parts: Vec<&str> = d.split(';').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidInput(
                "expected four entries separated by `;`".into(),
            ));
        }
        let mut q = Vec::with_capacity(4);
        for part in parts {
            q.push(parse_poly_expr(part)?);
        }
        return FibrationSpec::diagonal([q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone()]);
    }
    if let Some(path) = req.params.get("file") {
        let text = read_input(path)?;
        return fibration_from_json(&text);
    }
    Err(Error::InvalidInput(
        "provide --p, --diagonal or --file".into(),
    ))
}

/// JSON schema: {"form":"standard","a":"-1","b":"-1","p":"1,0,1"} or
/// {"form":"diagonal","q":["1","1,0,1","0,-1","0,-1"]}.
pub fn fibration_from_json(text: &str) -> crate::Result<FibrationSpec> {
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("bad fibration JSON: {e}")))?;
    let form = v
        .get("form")
        .and_then(|f| f.as_str())
        .ok_or_else(|| Error::InvalidInput("missing \"form\"".into()))?;
    match form {
        "standard" => {
            let get = |k: &str| -> crate::Result<&str> {
                v.get(k)
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| Error::InvalidInput(format!("missing \"{k}\"")))
            };
            FibrationSpec::standard(
                parse_rat(get("a")?)?,
                parse_rat(get("b")?)?,
                UniPoly::parse(get("p")?)?,
            )
        }
        "diagonal" => {
            let q = v
                .get("q")
                .and_then(|x| x.as_array())
                .ok_or_else(|| Error::InvalidInput("missing \"q\" array".into()))?;
            if q.len() != 4 {
                return Err(Error::InvalidInput("\"q\" must have 4 entries".into()));
            }
            let mut out = Vec::with_capacity(4);
            for e in q {
                let s = e
                    .as_str()
                    .ok_or_else(|| Error::InvalidInput("q entries must be strings".into()))?;
                out.push(UniPoly::parse(s)?);
            }
            FibrationSpec::diagonal([
                out[0].clone(),
                out[1].clone(),
                out[2].clone(),
                out[3].clone(),
            ])
        }
        other => Err(Error::InvalidInput(format!("unknown form `{other}`"))),
    }
}

pub fn fibration_to_json(fib: &FibrationSpec) -> serde_json::Value {
    match fib {
        FibrationSpec::Standard { a, b, p } => serde_json::json!({
            "form": "standard",
            "a": fmt_rat(a),
            "b": fmt_rat(b),
            "p": p.to_coeff_string(),
        }),
        FibrationSpec::Diagonal { q } => serde_json::json!({
            "form": "diagonal",
            "q": q.iter().map(|qi| qi.to_coeff_string()).collect::<Vec<_>>(),
        }),
    }
}

fn read_input(path: &str) -> crate::Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::InvalidInput(format!("cannot read stdin: {e}")))?;
        return Ok(buf);
    }
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))
}

fn symbol_from_request(req: &Request) -> crate::Result<QuaternionSymbol> {
    let f = RatFunc::parse(req.get("f")?)?;
    let g = RatFunc::parse(req.get("g")?)?;
    QuaternionSymbol::new(f, g)
}

/// Execute one request, returning the result JSON and evidence list.
pub fn execute(req: &Request) -> crate::Result<(serde_json::Value, Vec<Evidence>)> {
    match req.command.as_str() {
        "analyze" => {
            let fib = fibration_from_request(req)?;
            let budget = match req.params.get("budget") {
                Some(b) => b
                    .parse()
                    .map_err(|_| Error::InvalidInput("bad --budget".into()))?,
                None => default_prime_budget(),
            };
            let verdict = analyze_with_budget(&fib, budget)?;
            if !verdict.consistent() {
                return Err(Error::Internal(
                    "verdict mixes positive and negative evidence".into(),
                ));
            }
            let status = serde_json::to_value(verdict.status).expect("status");
            Ok((
                serde_json::json!({
                    "status": status,
                    "fibration": fibration_to_json(&fib),
                }),
                verdict.reasons,
            ))
        }
        "residues" => {
            let s = symbol_from_request(req)?;
            let prof = residue_profile(&s)?;
            Ok((
                serde_json::json!({
                    "profile": prof.to_map(),
                    "nontrivial": prof.nontrivial_count(),
                }),
                vec![],
            ))
        }
        "faddeev" => {
            let s = symbol_from_request(req)?;
            let out = match faddeev_decide(&s)? {
                FaddeevOutcome::Trivial => serde_json::json!({"class": "trivial"}),
                FaddeevOutcome::ConstantNontrivial => {
                    serde_json::json!({"class": "constant-nontrivial"})
                }
                FaddeevOutcome::Ramified(prof) => serde_json::json!({
                    "class": "ramified",
                    "profile": prof.to_map(),
                }),
            };
            Ok((out, vec![]))
        }
        "hilbert" => {
            let a = parse_rat(req.get("a")?)?;
            let b = parse_rat(req.get("b")?)?;
            let place = match req.get("place")? {
                "real" | "inf" => Place::Real,
                p => Place::Prime(
                    p.parse()
                        .map_err(|_| Error::InvalidInput(format!("bad place `{p}`")))?,
                ),
            };
            let v = crate::symbols::hilbert_symbol(&a, &b, place)?;
            Ok((serde_json::json!({ "symbol": v }), vec![]))
        }
        "jinv" => {
            let p = UniPoly::parse(req.get("p")?)?;
            let inv = elliptic_invariants(&p)?;
            Ok((serde_json::to_value(&inv).expect("serializable"), vec![]))
        }
        "cm" => {
            let p = UniPoly::parse(req.get("p")?)?;
            let v = cm_criterion(&p)?;
            Ok((serde_json::to_value(&v).expect("serializable"), vec![]))
        }
        "certify" => {
            let p = UniPoly::parse(req.get("p")?)?;
            let r_cert = criterion_a_certificate(&p)?.ok_or_else(|| {
                Error::Precondition("no quadratic sum-of-squares certificate applies".into())
            })?;
            let uv_cert = certify_u_plus_v(&p)?;
            let out = serde_json::json!({
                "criterion_a": serde_json::to_value(r_cert.to_dto()).expect("dto"),
                "u_plus_v": serde_json::to_value(uv_cert.to_dto()).expect("dto"),
                "verified": true,
            });
            if let Some(path) = req.params.get("out") {
                std::fs::write(path, serde_json::to_string_pretty(&out).expect("json"))
                    .map_err(|e| Error::InvalidInput(format!("cannot write {path}: {e}")))?;
            }
            Ok((out, vec![]))
        }
        "verify-cert" => {
            let text = read_input(req.get("file")?)?;
            // accept either a bare certificate or the `certify` output
            let v: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidInput(format!("bad JSON: {e}")))?;
            let mut results = serde_json::Map::new();
            let mut verify_one = |name: &str, val: &serde_json::Value| -> crate::Result<()> {
                let dto = serde_json::from_value(val.clone())
                    .map_err(|e| Error::InvalidInput(format!("bad certificate: {e}")))?;
                let cert = SOSCertificate::from_dto(&dto)?;
                results.insert(name.into(), serde_json::Value::Bool(cert.verify()?));
                Ok(())
            };
            if v.get("entries").is_some() {
                verify_one("certificate", &v)?;
            } else {
                for key in ["criterion_a", "u_plus_v"] {
                    if let Some(sub) = v.get(key) {
                        verify_one(key, sub)?;
                    }
                }
                if results.is_empty() {
                    return Err(Error::InvalidInput(
                        "no certificate found in the input".into(),
                    ));
                }
            }
            Ok((serde_json::Value::Object(results), vec![]))
        }
        "components" => {
            let g = UniPoly::parse(req.get("g")?)?;
            let s = real_components(&g)?;
            Ok((serde_json::json!({ "components": s }), vec![]))
        }
        "pencil" => {
            let (fu, gu) = if let Some(path) = req.params.get("file") {
                let text = read_input(path)?;
                let v: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidInput(format!("bad pencil JSON: {e}")))?;
                let grab = |k: &str| -> crate::Result<Vec<Rat>> {
                    let arr = v
                        .get(k)
                        .and_then(|x| x.as_array())
                        .ok_or_else(|| Error::InvalidInput(format!("missing \"{k}\"")))?;
                    arr.iter()
                        .map(|e| {
                            e.as_str()
                                .ok_or_else(|| {
                                    Error::InvalidInput("matrix entries must be strings".into())
                                })
                                .and_then(parse_rat)
                        })
                        .collect()
                };
                (grab("f")?, grab("g")?)
            } else {
                (
                    parse_upper_triangle(req.get("f")?)?,
                    parse_upper_triangle(req.get("g")?)?,
                )
            };
            let pencil = QuadricPencil::from_upper_triangles(&fu, &gu)?;
            let sextic = pencil_sextic(&pencil);
            let separable = pencil_separable(&pencil)?;
            let mut out = serde_json::json!({
                "sextic": sextic.coeffs.iter().map(fmt_rat).collect::<Vec<_>>(),
                "sextic_pretty": sextic.to_string_pretty(),
                "separable": separable,
            });
            if separable {
                let delta = pencil_delta(&pencil)?;
                out["delta"] = serde_json::json!({
                    "rhs": delta.rhs.to_coeff_string(),
                    "genus": delta.genus,
                });
            }
            Ok((out, vec![]))
        }
        "zarhin" => {
            let f = UniPoly::parse(req.get("f")?)?;
            let budget = match req.params.get("budget") {
                Some(b) => b
                    .parse()
                    .map_err(|_| Error::InvalidInput("bad --budget".into()))?,
                None => default_prime_budget(),
            };
            let out = match zarhin_sn_certificate(&f, budget)? {
                crate::galois::SnCertificate::CertifiedSn {
                    irreducible_mod,
                    transposition_mod,
                    large_cycle_mod,
                } => serde_json::json!({
                    "result": "certified-sn",
                    "irreducible_mod": irreducible_mod,
                    "transposition_mod": transposition_mod,
                    "large_cycle_mod": large_cycle_mod,
                }),
                crate::galois::SnCertificate::NotSn { discriminant } => serde_json::json!({
                    "result": "not-sn",
                    "square_discriminant": discriminant,
                }),
                crate::galois::SnCertificate::Inconclusive { reason } => serde_json::json!({
                    "result": "inconclusive",
                    "reason": reason,
                }),
            };
            Ok((out, vec![]))
        }
        "tau" => {
            let geti = |k: &str| -> crate::Result<i64> {
                req.get(k)?
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad --{k}")))
            };
            let v = cm_tau_admissible(geti("d")?, geti("k")?, geti("beta")?);
            Ok((serde_json::to_value(&v).expect("serializable"), vec![]))
        }
        other => Err(Error::InvalidInput(format!(
            "unknown command `{other}`; run with no arguments for usage"
        ))),
    }
}

fn human_summary(cmd: &str, result: &serde_json::Value, evidence: &[Evidence]) -> String {
    let mut lines = Vec::new();
    match cmd {
        "analyze" => {
            if let Some(s) = result.get("status").and_then(|s| s.as_str()) {
                lines.push(format!("status: {s}"));
            }
            for e in evidence {
                lines.push(format!("  [{}] {}", e.criterion, e.summary));
            }
        }
        _ => {
            lines.push(serde_json::to_string_pretty(result).expect("json"));
        }
    }
    lines.join("\n")
}

fn run_batch(req: &Request, json: bool) -> i32 {
    let text = match read_input(match req.get("file") {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    }) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    let lines: Vec<(usize, String)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i, l.to_string()))
        .collect();

    // independent requests run in parallel, output order preserved
    let workers = std::thread::available_parallelism()
        .map(|n| n.get().min(8))
        .unwrap_or(1);
    let mut reports: Vec<Option<Report>> = vec![None; lines.len()];
    let next = std::sync::atomic::AtomicUsize::new(0);
    let reports_mx = std::sync::Mutex::new(&mut reports);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= lines.len() {
                    break;
                }
                let report = run_batch_line(&lines[i].1);
                let mut guard = reports_mx.lock().expect("worker panicked");
                guard[i] = Some(report);
            });
        }
    });

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for r in reports.into_iter().flatten() {
        let line = if json {
            r.to_json()
        } else {
            serde_json::to_string(&r.result).expect("json")
        };
        if writeln!(out, "{line}").is_err() {
            return 4;
        }
    }
    0
}

fn run_batch_line(line: &str) -> Report {
    let parsed: Result<serde_json::Value, _> = serde_json::from_str(line);
    let value = match parsed {
        Ok(v) => v,
        Err(e) => {
            return Report::error(
                serde_json::json!({ "raw": line }),
                2,
                format!("malformed request line: {e}"),
            )
        }
    };
    let obj = match value.as_object() {
        Some(o) => o,
        None => {
            return Report::error(value.clone(), 2, "request must be a JSON object".into());
        }
    };
    let command = match obj.get("command").and_then(|c| c.as_str()) {
        Some(c) => c.to_string(),
        None => return Report::error(value.clone(), 2, "missing \"command\"".into()),
    };
    let mut params = BTreeMap::new();
    for (k, v) in obj {
        if k == "command" {
            continue;
        }
        let s = match v {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        params.insert(k.clone(), s);
    }
    let req = Request { command, params };
    let start = Instant::now();
    match execute(&req) {
        Ok((result, evidence)) => {
            Report::new(req.to_json(), result, evidence, start.elapsed().as_micros())
        }
        Err(e) => Report::error(req.to_json(), exit_code_for(&e), e.to_string()),
    }
}

/// Entry point, returning the process exit code.
pub fn run(argv: &[String]) -> i32 {
    let mut json = false;
    let mut positional = Vec::new();
    let mut params = BTreeMap::new();
    let mut it = argv.iter().peekable();
    while let Some(arg) = it.next() {
        if arg == "--json" {
            json = true;
        } else if let Some(key) = arg.strip_prefix("--") {
            match it.next() {
                Some(v) => {
                    params.insert(key.to_string(), v.clone());
                }
                None => {
                    eprintln!("flag --{key} needs a value");
                    return 2;
                }
            }
        } else {
            positional.push(arg.clone());
        }
    }
    let command = match positional.first() {
        Some(c) => c.clone(),
        None => {
            eprintln!("{USAGE}");
            return 2;
        }
    };
    if positional.len() > 1 {
        eprintln!("unexpected positional arguments: {:?}", &positional[1..]);
        return 2;
    }
    let req = Request { command, params };
    if req.command == "batch" {
        return run_batch(&req, json);
    }
    let start = Instant::now();
    match execute(&req) {
        Ok((result, evidence)) => {
            let report = Report::new(
                req.to_json(),
                result.clone(),
                evidence.clone(),
                start.elapsed().as_micros(),
            );
            if json {
                println!("{}", report.to_json());
            } else {
                println!("{}", human_summary(&req.command, &result, &evidence));
            }
            0
        }
        Err(e) => {
            eprintln!("{e}");
            if json {
                println!(
                    "{}",
                    Report::error(req.to_json(), exit_code_for(&e), e.to_string()).to_json()
                );
            }
            exit_code_for(&e)
        }
    }
}

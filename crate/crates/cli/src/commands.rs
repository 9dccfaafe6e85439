use std::fmt::{self, Write as _};

use heegner_core::arith::{format_rational, parse_rational};
use heegner_core::dirichlet::{float_q, l_exact, working_bits, zeta_exact};
use heegner_core::eisenstein::{QexpEntry, ValueReport};
use heegner_core::repnum::{local_poly_padded, w_p, CountOptions, LocalCounter, RepIndex, DEFAULT_BUDGET};
use heegner_core::verify::{hilbert_s, run_suite};
use heegner_core::{
    BuiltinLattice, DiscElement, DivisorTerm, EisensteinOptions, EisensteinSeries, Error, EvenLattice, HeegnerIndex,
};
use rug::Rational;
use serde_json::{json, Value};

use crate::{Common, Element};

pub const BUDGET_ENV: &str = "HEEGNER_BUDGET";

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Core(Error),
    VerifyFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Core(e) if e.is_validation() => 1,
            CliError::Core(_) => 2,
            CliError::VerifyFailed(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::VerifyFailed(_) => f.write_str("verification suite failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Out = Result<String, CliError>;

fn rational(flag: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).ok_or_else(|| CliError::Validation(format!("malformed rational '{s}' for --{flag}")))
}

fn coords(s: &str) -> Result<Vec<u64>, CliError> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Validation(format!("malformed coordinate list '{s}' for gamma")))
        })
        .collect()
}

fn budget(flag: Option<u64>) -> Result<CountOptions, CliError> {
    let budget = match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::Validation(format!("{BUDGET_ENV} must be a non-negative integer, got '{v}'")))?,
        Err(_) => flag.unwrap_or(DEFAULT_BUDGET),
    };
    Ok(CountOptions::with_budget(budget))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}

fn report_json(r: &ValueReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

struct Context {
    lattice: EvenLattice,
    builtin: Option<BuiltinLattice>,
    digits: u32,
    json: bool,
    opts: EisensteinOptions,
}

impl Context {
    fn new(c: &Common) -> Result<Self, CliError> {
        let (lattice, builtin) = match (&c.lattice, &c.builtin) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
                (EvenLattice::from_json(&text)?, None)
            }
            (None, Some(name)) => {
                let b: BuiltinLattice = name.parse()?;
                (b.lattice(), Some(b))
            }
            (None, None) => return Err(CliError::Validation("one of --lattice or --builtin is required".into())),
        };
        let witt = c.assume_witt || builtin.as_ref().is_some_and(|b| b.witt_index_one());
        let opts = EisensteinOptions { formal: c.formal, assume_witt: witt, count: budget(c.budget)? };
        Ok(Context { lattice, builtin, digits: c.precision, json: c.json, opts })
    }

    fn series(&self) -> Result<EisensteinSeries, CliError> {
        Ok(EisensteinSeries::new(&self.lattice, self.opts)?)
    }
}

fn element(e: &EisensteinSeries, el: &Element) -> Result<DiscElement, CliError> {
    match &el.gamma {
        Some(s) => Ok(e.group().element(&coords(s)?)?),
        None => Ok(e.group().zero()),
    }
}

fn kappa_of(l: &EvenLattice) -> Rational {
    let (bp, bm) = l.signature();
    Rational::from((4 + bm as i64 - bp as i64, 2))
}

pub fn info(c: &Common) -> Out {
    let ctx = Context::new(c)?;
    let l = &ctx.lattice;
    let g = l.discriminant_group();
    let (bp, bm) = l.signature();
    let kappa = kappa_of(l);
    const LISTED: u64 = 4096;
    let elements: Vec<DiscElement> = if g.order() <= LISTED { g.elements() } else { Vec::new() };
    let name = l.name().unwrap_or("(unnamed)");
    if ctx.json {
        let rows: Vec<Value> = elements
            .iter()
            .map(|x| json!({"coords": x.coords(), "level": x.level(), "q": format_rational(x.q())}))
            .collect();
        return Ok(pretty(&json!({
            "det": l.det().to_string(),
            "elementary_divisors": g.elementary_divisors(),
            "elements": rows,
            "kappa": format_rational(&kappa),
            "name": name,
            "order": g.order(),
            "rank": l.rank(),
            "signature": [bp, bm],
        })));
    }
    let mut s = String::new();
    let divs: Vec<String> = g.elementary_divisors().iter().map(|d| format!("Z/{d}")).collect();
    let group = if divs.is_empty() { "0".to_string() } else { divs.join(" + ") };
    writeln!(s, "lattice    {name}").unwrap();
    writeln!(s, "rank       {}", l.rank()).unwrap();
    writeln!(s, "signature  ({bp},{bm})").unwrap();
    writeln!(s, "det        {}", l.det()).unwrap();
    writeln!(s, "kappa      {}", format_rational(&kappa)).unwrap();
    writeln!(s, "L'/L       {group} (order {})", g.order()).unwrap();
    if elements.is_empty() {
        writeln!(s, "(element table omitted: more than {LISTED} elements)").unwrap();
        return Ok(s);
    }
    let width = elements.iter().map(|x| x.to_string().len()).max().unwrap_or(0).max(6);
    writeln!(s, "{:<width$}  {:<8}  level", "coords", "q").unwrap();
    for x in &elements {
        writeln!(s, "{:<width$}  {:<8}  {}", x.to_string(), format_rational(x.q()), x.level()).unwrap();
    }
    Ok(s)
}

pub fn repnum(c: &Common, el: &Element, n: &str, p: u64, pad: u32) -> Out {
    let ctx = Context::new(c)?;
    let group = ctx.lattice.discriminant_group();
    let gamma = match &el.gamma {
        Some(s) => group.element(&coords(s)?)?,
        None => group.zero(),
    };
    let idx = RepIndex::new(gamma, rational("n", n)?)?;
    let w = w_p(&idx, p)?;
    let counter = LocalCounter::new(&group, &idx, p, ctx.opts.count)?;
    let counts = (0..=w + pad).map(|nu| counter.count(nu)).collect::<Result<Vec<_>, _>>()?;
    let poly = local_poly_padded(&group, &idx, p, pad, ctx.opts.count)?;
    if ctx.json {
        return Ok(pretty(&json!({
            "counts": counts.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "gamma": idx.gamma().coords(),
            "local_polynomial": poly.coeffs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "n": format_rational(idx.n()),
            "p": p,
            "w_p": w,
        })));
    }
    let mut s = String::new();
    writeln!(s, "gamma = {}, n = {}, p = {p}, w_p = {w}", idx.gamma(), format_rational(idx.n())).unwrap();
    writeln!(s, "{:<4}  N(p^nu)", "nu").unwrap();
    for (nu, x) in counts.iter().enumerate() {
        writeln!(s, "{nu:<4}  {x}").unwrap();
    }
    writeln!(s, "L(X) = {poly}").unwrap();
    Ok(s)
}

pub fn sigma(c: &Common, el: &Element, n: &str, primes: &[u64]) -> Out {
    let ctx = Context::new(c)?;
    let e = ctx.series()?;
    let idx = RepIndex::new(element(&e, el)?, rational("n", n)?)?;
    let v = e.sigma_with_primes(&idx, primes)?;
    if ctx.json {
        let factors: Vec<Value> = v
            .local_factors
            .iter()
            .map(|(p, f)| {
                json!({
                    "chi": f.chi,
                    "p": p,
                    "poly": f.poly.coeffs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "value": format_rational(&f.value),
                })
            })
            .collect();
        let logderiv = v.logderiv_at_kappa.as_ref().map(|a| {
            a.iter().map(|(p, x)| json!({"alpha": format_rational(x), "p": p})).collect::<Vec<_>>()
        });
        return Ok(pretty(&json!({
            "factors": factors,
            "kappa": format_rational(e.kappa()),
            "logderiv": logderiv,
            "value": format_rational(&v.value_at_kappa),
        })));
    }
    let mut s = String::new();
    writeln!(s, "sigma({}; kappa = {}) = {}", idx, format_rational(e.kappa()), format_rational(&v.value_at_kappa))
        .unwrap();
    match &v.logderiv_at_kappa {
        Some(a) if a.is_empty() => writeln!(s, "sigma'/sigma = 0").unwrap(),
        Some(a) => {
            let parts: Vec<String> = a.iter().map(|(p, x)| format!("{}*log({p})", format_rational(x))).collect();
            writeln!(s, "sigma'/sigma = {}", parts.join(" + ")).unwrap();
        }
        None => writeln!(s, "sigma'/sigma undefined (sigma vanishes)").unwrap(),
    }
    writeln!(s, "{:<6}  {:<4}  {:<12}  L(X)", "p", "chi", "factor").unwrap();
    for (p, f) in &v.local_factors {
        writeln!(s, "{p:<6}  {:<4}  {:<12}  {}", f.chi, format_rational(&f.value), f.poly).unwrap();
    }
    Ok(s)
}

pub fn coeff(c: &Common, el: &Element, n: &str, s_arg: &str) -> Out {
    let ctx = Context::new(c)?;
    let e = ctx.series()?;
    let idx = RepIndex::new(element(&e, el)?, rational("n", n)?)?;
    let s = rational("s", s_arg)?;
    let report = if s == 0 {
        ValueReport::from_rational(&e.coeff_c0(&idx)?, ctx.digits, e.is_formal())
    } else {
        let v = e.coeff_c_numeric(&idx, &float_q(working_bits(ctx.digits), &s))?;
        ValueReport {
            exact: None,
            formal_mode: e.is_formal(),
            numeric: heegner_core::dirichlet::format_float(&v, ctx.digits),
            precision_digits: ctx.digits,
            symbolic: Vec::new(),
        }
    };
    if ctx.json {
        return Ok(pretty(&report_json(&report)));
    }
    let value = report.exact.clone().unwrap_or(report.numeric.clone());
    Ok(format!("C({}, s = {}) = {value}\n", idx, format_rational(&s)))
}

/// The volume `B` where it is known in closed form.
fn volume(b: &BuiltinLattice) -> Result<Option<Rational>, CliError> {
    Ok(match b {
        BuiltinLattice::Siegel => Some(-(zeta_exact(-1)? * zeta_exact(-3)?)),
        BuiltinLattice::Hilbert(d) => Some(zeta_exact(-1)? * l_exact(*d as i64, -1)?),
        _ => None,
    })
}

pub fn degree(c: &Common, el: &Element, m: &str) -> Out {
    let ctx = Context::new(c)?;
    let e = ctx.series()?;
    let h = HeegnerIndex::new(element(&e, el)?, rational("m", m)?)?;
    let ratio = e.degree_ratio(&h)?;
    let vol = match &ctx.builtin {
        Some(b) => volume(b)?,
        None => None,
    };
    let deg = vol.as_ref().map(|b| Rational::from(&ratio * b));
    let t = match (&ctx.builtin, &deg) {
        (Some(BuiltinLattice::Hilbert(d)), Some(deg)) => {
            let big_m = -Rational::from(h.m() * *d);
            let mm = (*big_m.denom() == 1).then(|| big_m.numer().to_u64()).flatten();
            mm.map(|mm| (mm, (deg / (hilbert_s(*d, mm) * 2u32))))
        }
        _ => None,
    };
    if ctx.json {
        return Ok(pretty(&json!({
            "degree": deg.as_ref().map(format_rational),
            "degree_over_volume": report_json(&ValueReport::from_rational(&ratio, ctx.digits, e.is_formal())),
            "t_degree": t.as_ref().map(|(mm, v)| json!({"M": mm, "value": format_rational(v)})),
            "volume": vol.as_ref().map(format_rational),
        })));
    }
    let mut s = String::new();
    writeln!(s, "deg {h} / B = {}", format_rational(&ratio)).unwrap();
    if let (Some(b), Some(deg)) = (&vol, &deg) {
        writeln!(s, "B = {}", format_rational(b)).unwrap();
        writeln!(s, "deg {h} = {}", format_rational(deg)).unwrap();
    }
    if let Some((mm, v)) = &t {
        writeln!(s, "deg T({mm}) = {}", format_rational(v)).unwrap();
    }
    Ok(s)
}

pub fn qexp(c: &Common, max_n: &str) -> Out {
    let ctx = Context::new(c)?;
    let e = ctx.series()?;
    let table: Vec<QexpEntry> = e.qexp_e0(&rational("max-n", max_n)?)?;
    if ctx.json {
        let rows: Vec<Value> = table
            .iter()
            .map(|t| json!({"coeff": format_rational(&t.coeff), "gamma": t.gamma.coords(), "n": format_rational(&t.n)}))
            .collect();
        return Ok(pretty(&Value::Array(rows)));
    }
    let width = table.iter().map(|t| t.gamma.to_string().len()).max().unwrap_or(0).max(5);
    let mut s = String::new();
    writeln!(s, "{:<width$}  {:<8}  C(gamma, n, 0)", "gamma", "n").unwrap();
    for t in &table {
        writeln!(s, "{:<width$}  {:<8}  {}", t.gamma.to_string(), format_rational(&t.n), format_rational(&t.coeff)).unwrap();
    }
    Ok(s)
}

/// Parse `gamma=C1,C2;m=-P/Q;a=P/Q`; `gamma` defaults to 0 and `a` to 1.
fn divisor_term(e: &EisensteinSeries, spec: &str) -> Result<DivisorTerm, CliError> {
    let mut gamma = None;
    let mut m = None;
    let mut a = Rational::from(1);
    for field in spec.split(';').map(str::trim).filter(|f| !f.is_empty()) {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("malformed divisor term '{spec}': expected key=value")))?;
        match k.trim() {
            "gamma" => gamma = Some(coords(v)?),
            "m" => m = Some(rational("term m", v.trim())?),
            "a" => a = rational("term a", v.trim())?,
            other => return Err(CliError::Validation(format!("unknown key '{other}' in divisor term '{spec}'"))),
        }
    }
    let m = m.ok_or_else(|| CliError::Validation(format!("divisor term '{spec}' is missing m")))?;
    let beta = match gamma {
        Some(c) => e.group().element(&c)?,
        None => e.group().zero(),
    };
    Ok(DivisorTerm { index: HeegnerIndex::new(beta, m)?, a })
}

fn divisor(e: &EisensteinSeries, terms: &[String]) -> Result<Vec<DivisorTerm>, CliError> {
    terms.iter().map(|t| divisor_term(e, t)).collect()
}

pub fn weight(c: &Common, terms: &[String]) -> Out {
    let ctx = Context::new(c)?;
    let e = ctx.series()?;
    let k = e.weight_of_divisor(&divisor(&e, terms)?)?;
    if ctx.json {
        return Ok(pretty(&report_json(&ValueReport::from_rational(&k, ctx.digits, e.is_formal()))));
    }
    Ok(format!("weight = {}\n", format_rational(&k)))
}

fn symbolic_out(ctx: &Context, e: &EisensteinSeries, label: &str, v: &heegner_core::SymbolicValue) -> Out {
    let report = ValueReport::from_symbolic(v, ctx.digits, e.is_formal())?;
    if ctx.json {
        return Ok(pretty(&report_json(&report)));
    }
    Ok(format!("{label} = {v}\n{:width$} = {}\n", "", report.numeric, width = label.len()))
}

pub fn integral(c: &Common, el: &Element, m: &str) -> Out {
    let ctx = Context::new(c)?;
    let e = ctx.series()?;
    let h = HeegnerIndex::new(element(&e, el)?, rational("m", m)?)?;
    let v = e.green_integral(&h)?;
    symbolic_out(&ctx, &e, &format!("(2/deg {h}) * int G"), &v)
}

pub fn borcherds(c: &Common, terms: &[String]) -> Out {
    let ctx = Context::new(c)?;
    let e = ctx.series()?;
    let v = e.borcherds_integral(&divisor(&e, terms)?)?;
    symbolic_out(&ctx, &e, "(1/B) * int log||F||^2", &v)
}

pub fn verify(builtin: &str, digits: u32, json_out: bool, budget_flag: Option<u64>) -> Out {
    let b: BuiltinLattice = builtin.parse()?;
    let report = run_suite(&b, digits, budget(budget_flag)?)?;
    let out = if json_out {
        let checks: Vec<Value> = report
            .checks
            .iter()
            .map(|c| json!({"detail": c.detail, "name": c.name, "passed": c.passed}))
            .collect();
        pretty(&json!({"checks": checks, "lattice": report.lattice, "passed": report.passed()}))
    } else {
        let mut s = String::new();
        for c in &report.checks {
            writeln!(s, "{c}").unwrap();
        }
        writeln!(s, "{}: {} checks, {} failed", report.lattice, report.checks.len(), report.failures()).unwrap();
        s
    };
    if report.passed() {
        Ok(out)
    } else {
        Err(CliError::VerifyFailed(out))
    }
}

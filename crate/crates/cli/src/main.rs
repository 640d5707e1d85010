mod args;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use kgamma::extfun::{evaluator, extended_beta_with, extended_gamma_with, incomplete_extended_beta_with};
use kgamma::identities::{fmt17, Counts};
use kgamma::quad::EvalResult;
use kgamma::repr::eval_representation_with;
use kgamma::{
    k_beta, k_gamma, run_audit, CheckFamily, DistParams, Error, ExtBetaArgs, GammaMode, GeneralizedBeta,
    GridSpec, MLParams, QuadConfig, Representation, SeriesConfig, Tolerances,
};
use serde_json::json;

use args::{AuditArgs, Bindings, Cli, Command, DistArgs, EvalArgs, Format, Function, GridChoice, Query, TableArgs};
use output::fmt12;

const USAGE: u8 = 1;
const NOT_CONVERGED: u8 = 2;
const ASSERTED_FAILURE: u8 = 3;
const IO: u8 = 4;

const DEFAULT_MGF_TERMS: usize = 500;

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: USAGE, message: message.into() }
    }

    fn io(path: &Path, err: io::Error) -> Self {
        Self { code: IO, message: format!("{}: {err}", path.display()) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Convergence { .. } | Error::Numeric(_) => NOT_CONVERGED,
            _ => USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

type CliResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let result = match (cli.show_config, cli.command) {
        (true, _) => show_config(),
        (false, Some(Command::Eval(a))) => cmd_eval(a),
        (false, Some(Command::Audit(a))) => cmd_audit(a),
        (false, Some(Command::Dist(a))) => cmd_dist(a),
        (false, Some(Command::Table(a))) => cmd_table(a),
        (false, None) => Err(Failure::usage("no subcommand given; see --help")),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn show_config() -> CliResult {
    let config = json!({
        "mode": GammaMode::ClassicalGamma.name(),
        "quad": QuadConfig::default(),
        "series": SeriesConfig::default(),
        "tolerances": Tolerances::default(),
        "grid": GridSpec::default_grid(),
        "mgf_max_terms": DEFAULT_MGF_TERMS,
        "mgf_max_abs_argument": kgamma::dist::MGF_MAX_ABS_ARGUMENT,
        "quantile_tolerance": kgamma::dist::QUANTILE_TOLERANCE,
        "density_sign_check_points": kgamma::dist::SIGN_CHECK_POINTS,
    });
    println!("{}", serde_json::to_string_pretty(&config).expect("config serializes"));
    Ok(0)
}

/// Requires exactly the `required` bindings, allows `optional`, and rejects
/// everything else.
fn check_bindings(what: &str, present: &[&str], required: &[&str], optional: &[&str]) -> Result<(), Failure> {
    let missing: Vec<_> = required.iter().filter(|k| !present.contains(k)).map(|k| format!("--{k}")).collect();
    if !missing.is_empty() {
        return Err(Failure::usage(format!("{what} needs {}", missing.join(", "))));
    }
    let extra: Vec<_> = present
        .iter()
        .filter(|k| !required.contains(k) && !optional.contains(k))
        .map(|k| format!("--{k}"))
        .collect();
    if !extra.is_empty() {
        return Err(Failure::usage(format!("{what} does not take {}", extra.join(", "))));
    }
    Ok(())
}

impl Bindings {
    fn present(&self) -> Vec<&'static str> {
        let numeric = [
            ("eta", self.eta),
            ("k", self.k),
            ("s", self.s),
            ("t", self.t),
            ("v", self.v),
            ("p", self.p),
            ("q", self.q),
            ("r", self.r),
            ("x", self.x),
            ("y", self.y),
        ];
        let mut out: Vec<_> = numeric.iter().filter(|(_, v)| v.is_some()).map(|(k, _)| *k).collect();
        if self.mode.is_some() {
            out.push("mode");
        }
        if self.rep.is_some() {
            out.push("rep");
        }
        out
    }

    fn slot(&mut self, key: &str) -> Option<&mut Option<f64>> {
        Some(match key {
            "eta" => &mut self.eta,
            "k" => &mut self.k,
            "s" => &mut self.s,
            "t" => &mut self.t,
            "v" => &mut self.v,
            "p" => &mut self.p,
            "q" => &mut self.q,
            "r" => &mut self.r,
            "x" => &mut self.x,
            "y" => &mut self.y,
            _ => return None,
        })
    }

    fn num(&self, key: &str) -> f64 {
        let v = match key {
            "eta" => self.eta,
            "k" => self.k,
            "s" => self.s,
            "t" => self.t,
            "v" => self.v,
            "p" => self.p,
            "q" => self.q,
            "r" => self.r,
            "x" => self.x,
            "y" => self.y,
            _ => None,
        };
        v.expect("binding checked before use")
    }

    fn mode(&self) -> Result<GammaMode, Failure> {
        parse_mode(self.mode.as_deref())
    }

    fn ml_params(&self) -> Result<MLParams, Failure> {
        Ok(MLParams::new(self.num("k"), self.num("p"), self.num("q"), self.num("r"), self.mode()?)?)
    }

    fn beta_args(&self) -> Result<ExtBetaArgs, Failure> {
        Ok(ExtBetaArgs::new(self.num("s"), self.num("t"), self.num("v"))?)
    }
}

fn parse_mode(mode: Option<&str>) -> Result<GammaMode, Failure> {
    Ok(mode.map(str::parse).transpose()?.unwrap_or(GammaMode::ClassicalGamma))
}

impl Function {
    fn name(self) -> &'static str {
        match self {
            Function::KGamma => "k_gamma",
            Function::KBeta => "k_beta",
            Function::MittagLefflerK => "mittag_leffler_k",
            Function::ExtendedGammaK => "extended_gamma_k",
            Function::ExtendedBetaK => "extended_beta_k",
            Function::IncompleteExtendedBetaK => "incomplete_extended_beta_k",
            Function::EvalRepresentation => "eval_representation",
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            Function::KGamma => &["eta", "k"],
            Function::KBeta => &["s", "t", "k"],
            Function::MittagLefflerK => &["x", "k", "p", "q", "r"],
            Function::ExtendedGammaK => &["s", "k", "p", "q", "r"],
            Function::ExtendedBetaK => &["s", "t", "v", "k", "p", "q", "r"],
            Function::IncompleteExtendedBetaK => &["y", "s", "t", "v", "k", "p", "q", "r"],
            Function::EvalRepresentation => &["rep", "s", "t", "v", "k", "p", "q", "r"],
        }
    }

    fn optional(self) -> &'static [&'static str] {
        match self {
            Function::KGamma | Function::KBeta => &[],
            _ => &["mode"],
        }
    }
}

fn evaluate(function: Function, b: &Bindings) -> Result<EvalResult, Failure> {
    let qcfg = QuadConfig::default();
    let r = match function {
        Function::KGamma => EvalResult::exact(k_gamma(b.num("eta"), b.num("k"))?),
        Function::KBeta => EvalResult::exact(k_beta(b.num("s"), b.num("t"), b.num("k"))?),
        Function::MittagLefflerK => {
            let params = b.ml_params()?;
            let x = b.num("x");
            match kgamma::mittag_leffler_k(x, &params, &SeriesConfig::default()) {
                Ok(sv) => {
                    let mut r = EvalResult::exact(sv.value);
                    r.error_estimate = sv.error_estimate;
                    r
                }
                // beyond the series guard the general evaluator takes over
                Err(Error::ArgumentRange { .. }) => EvalResult::exact(evaluator(&params)?.eval(x)?),
                Err(e) => return Err(e.into()),
            }
        }
        Function::ExtendedGammaK => extended_gamma_with(b.num("s"), &evaluator(&b.ml_params()?)?, &qcfg)?,
        Function::ExtendedBetaK => extended_beta_with(b.beta_args()?, &evaluator(&b.ml_params()?)?, &qcfg)?,
        Function::IncompleteExtendedBetaK => {
            incomplete_extended_beta_with(b.num("y"), b.beta_args()?, &evaluator(&b.ml_params()?)?, &qcfg)?
        }
        Function::EvalRepresentation => {
            let rep: Representation = b.rep.as_deref().unwrap_or_default().parse()?;
            eval_representation_with(rep, b.beta_args()?, &evaluator(&b.ml_params()?)?, &qcfg)?
        }
    };
    Ok(r)
}

fn status(converged: bool) -> u8 {
    if converged {
        0
    } else {
        NOT_CONVERGED
    }
}

fn cmd_eval(a: EvalArgs) -> CliResult {
    let f = a.function;
    check_bindings(f.name(), &a.bindings.present(), f.required(), f.optional())?;
    let r = evaluate(f, &a.bindings)?;
    let mut out = io::stdout().lock();
    let written = match a.format {
        Format::Text => writeln!(
            out,
            "value: {}\nerror_estimate: {}\nconverged: {}",
            fmt12(r.value),
            fmt12(r.error_estimate),
            r.converged
        ),
        Format::Json => writeln!(
            out,
            "{{\"function\":\"{}\",\"value\":{},\"error_estimate\":{},\"converged\":{}}}",
            f.name(),
            fmt17(r.value),
            fmt17(r.error_estimate),
            r.converged
        ),
        Format::Csv => writeln!(
            out,
            "function,value,error_estimate,converged\n{},{},{},{}",
            f.name(),
            fmt17(r.value),
            fmt17(r.error_estimate),
            r.converged
        ),
    };
    written.map_err(|e| Failure::io(Path::new("<stdout>"), e))?;
    Ok(status(r.converged))
}

fn cmd_table(a: TableArgs) -> CliResult {
    let f = a.function;
    let mut present = a.bindings.present();
    if present.contains(&a.var.as_str()) {
        return Err(Failure::usage(format!("--{} is the table variable and cannot also be bound", a.var)));
    }
    let mut bindings = a.bindings.clone();
    let var: &'static str = match f.required().iter().find(|k| **k == a.var) {
        Some(k) if bindings.slot(k).is_some() => k,
        _ => return Err(Failure::usage(format!("{} cannot be tabulated over '{}'", f.name(), a.var))),
    };
    present.push(var);
    check_bindings(f.name(), &present, f.required(), f.optional())?;
    if a.steps < 2 || !(a.from.is_finite() && a.to.is_finite()) {
        return Err(Failure::usage("a table needs finite --from/--to and --steps >= 2"));
    }
    let mut rows = Vec::with_capacity(a.steps);
    for i in 0..a.steps {
        let x = a.from + (a.to - a.from) * i as f64 / (a.steps - 1) as f64;
        *bindings.slot(var).expect("tabulated binding is numeric") = Some(x);
        let row = match evaluate(f, &bindings) {
            Ok(r) => (x, r.value, r.error_estimate, r.converged, None),
            Err(e) => (x, f64::NAN, f64::NAN, false, Some(e.message)),
        };
        rows.push(row);
    }
    let all_converged = rows.iter().all(|r| r.3);
    let mut text = String::new();
    match a.format {
        Format::Json => {
            let body: Vec<String> = rows
                .iter()
                .map(|(x, v, e, c, err)| {
                    let err = err.as_ref().map(|m| json!(m).to_string()).unwrap_or_else(|| "null".into());
                    format!(
                        "{{\"{var}\":{},\"value\":{},\"error_estimate\":{},\"converged\":{c},\"error\":{err}}}",
                        fmt17(*x),
                        fmt17(*v),
                        fmt17(*e)
                    )
                })
                .collect();
            text.push_str(&format!("{{\"function\":\"{}\",\"rows\":[{}]}}\n", f.name(), body.join(",")));
        }
        Format::Csv | Format::Text => {
            text.push_str(&format!("{var},value,error_estimate,converged\n"));
            for (x, v, e, c, _) in &rows {
                let num = |z: f64| if z.is_finite() { fmt17(z) } else { String::new() };
                text.push_str(&format!("{},{},{},{c}\n", num(*x), num(*v), num(*e)));
            }
        }
    }
    emit(a.out.as_deref(), text.as_bytes())?;
    Ok(status(all_converged))
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(|e| Failure::io(p, e))?);
            w.write_all(bytes).and_then(|_| w.flush()).map_err(|e| Failure::io(p, e))
        }
        None => io::stdout().lock().write_all(bytes).map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

fn parse_family(name: &str) -> Result<CheckFamily, Failure> {
    CheckFamily::ALL
        .into_iter()
        .find(|f| serde_json::to_value(f).ok().and_then(|v| v.as_str().map(|s| s == name)) == Some(true))
        .ok_or_else(|| Failure::usage(format!("unknown check family '{name}'")))
}

fn audit_tolerances(overrides: &[String]) -> Result<Tolerances, Failure> {
    let mut value = serde_json::to_value(Tolerances::default()).expect("tolerances serialize");
    for o in overrides {
        let (key, x) = o
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("--tol expects name=value, got '{o}'")))?;
        let x: f64 = x.parse().map_err(|_| Failure::usage(format!("'{x}' is not a number")))?;
        if !(x > 0.0 && x.is_finite()) {
            return Err(Failure::usage(format!("tolerance {key} = {x} must be positive")));
        }
        let slot = value
            .get_mut(key)
            .ok_or_else(|| Failure::usage(format!("unknown tolerance '{key}'")))?;
        *slot = json!(x);
    }
    Ok(serde_json::from_value(value).expect("tolerances round-trip"))
}

fn cmd_audit(a: AuditArgs) -> CliResult {
    let mut grid = match a.grid {
        GridChoice::Default => GridSpec::default_grid(),
        GridChoice::Empty => GridSpec::empty(),
    };
    let lists = [
        (&mut grid.ks, a.ks),
        (&mut grid.ss, a.ss),
        (&mut grid.ts, a.ts),
        (&mut grid.vs, a.vs),
        (&mut grid.ps, a.ps),
        (&mut grid.qs, a.qs),
        (&mut grid.rs, a.rs),
        (&mut grid.mellin.gs, a.mellin_gs),
        (&mut grid.mellin.ss, a.mellin_ss),
        (&mut grid.mellin.ts, a.mellin_ts),
    ];
    for (slot, given) in lists {
        if let Some(values) = given {
            *slot = values;
        }
    }
    if let Some(modes) = &a.modes {
        grid.modes = modes.iter().map(|m| parse_mode(Some(m))).collect::<Result<_, _>>()?;
    }
    if let Some(families) = &a.families {
        grid.families = families.iter().map(|f| parse_family(f)).collect::<Result<_, _>>()?;
    }
    let tol = audit_tolerances(&a.tolerances)?;
    let mut qcfg = QuadConfig::default();
    if let Some(x) = a.abs_tol {
        qcfg.abs_tol = x;
    }
    if let Some(x) = a.rel_tol {
        qcfg.rel_tol = x;
    }
    if a.format == Format::Text {
        return Err(Failure::usage("audit writes json or csv"));
    }
    // open the sink first so an unwritable path fails before the audit runs
    let sink = match &a.out {
        Some(p) => Some((p.as_path(), File::create(p).map_err(|e| Failure::io(p, e))?)),
        None => None,
    };
    let report = run_audit(&grid, &qcfg, &tol)?;
    let mut bytes = Vec::new();
    match a.format {
        Format::Csv => report.write_csv(&mut bytes).expect("writing to memory"),
        _ => {
            bytes.extend(report.to_json().as_bytes());
            bytes.push(b'\n');
        }
    }
    match sink {
        Some((p, file)) => {
            let mut w = BufWriter::new(file);
            w.write_all(&bytes).and_then(|_| w.flush()).map_err(|e| Failure::io(p, e))?;
        }
        None => emit(None, &bytes)?,
    }
    print_summary(&report.summary, report.checks.len());
    if report.asserted_all_hold() {
        Ok(0)
    } else {
        Ok(ASSERTED_FAILURE)
    }
}

fn print_summary(summary: &std::collections::BTreeMap<String, Counts>, total: usize) {
    let mut err = io::stderr().lock();
    let _ = writeln!(err, "{total} checks");
    for (id, c) in summary {
        let kind = if c.asserted > 0 { "asserted" } else { "probe" };
        let _ = writeln!(
            err,
            "{id:<48} {kind:<8} holds {:>6}  fails {:>6}  inconclusive {:>6}",
            c.holds, c.fails, c.inconclusive
        );
    }
}

fn cmd_dist(a: DistArgs) -> CliResult {
    let shape = [("s", a.s), ("t", a.t), ("v", a.v), ("l", a.l), ("p", a.p), ("q", a.q), ("k", a.k)];
    let extras = [
        ("x", a.x.is_some()),
        ("y", a.y.is_some()),
        ("u", a.u.is_some()),
        ("order", a.order.is_some()),
        ("n", a.n.is_some()),
        ("seed", a.seed.is_some()),
        ("max_terms", a.max_terms.is_some()),
        ("mode", a.mode.is_some()),
    ];
    let present: Vec<&str> = shape
        .iter()
        .filter(|(_, v)| v.is_some())
        .map(|(k, _)| *k)
        .chain(extras.iter().filter(|(_, b)| *b).map(|(k, _)| *k))
        .collect();
    let (query_keys, optional): (&[&str], &[&str]) = match a.query {
        Query::Pdf => (&["x"], &["mode"]),
        Query::Cdf => (&["y"], &["mode"]),
        Query::Moment => (&["order"], &["mode"]),
        Query::Mean | Query::Variance => (&[], &["mode"]),
        Query::Mgf => (&["y"], &["mode", "max_terms"]),
        Query::Quantile => (&["u"], &["mode"]),
        Query::Sample => (&["n", "seed"], &["mode"]),
    };
    let required: Vec<&str> = shape.iter().map(|(k, _)| *k).chain(query_keys.iter().copied()).collect();
    check_bindings("dist", &present, &required, optional)?;
    let params = DistParams {
        s: a.s.unwrap_or_default(),
        t: a.t.unwrap_or_default(),
        v: a.v.unwrap_or_default(),
        l: a.l.unwrap_or_default(),
        p: a.p.unwrap_or_default(),
        q: a.q.unwrap_or_default(),
        k: a.k.unwrap_or_default(),
        mode: parse_mode(a.mode.as_deref())?,
    };
    let d = GeneralizedBeta::new(params)?;
    let values: Vec<f64> = match a.query {
        Query::Pdf => vec![d.pdf(a.x.unwrap_or_default())],
        Query::Cdf => vec![d.cdf(a.y.unwrap_or_default())?],
        Query::Moment => vec![d.moment(a.order.unwrap_or_default())?],
        Query::Mean => vec![d.mean()?],
        Query::Variance => vec![d.variance()?],
        Query::Mgf => vec![d.mgf(a.y.unwrap_or_default(), a.max_terms.unwrap_or(DEFAULT_MGF_TERMS))?],
        Query::Quantile => vec![d.quantile(a.u.unwrap_or_default())?],
        Query::Sample => d.sample(a.n.unwrap_or_default(), a.seed.unwrap_or_default())?,
    };
    let mut text = String::new();
    match a.format {
        Format::Text => {
            for v in &values {
                text.push_str(&fmt12(*v));
                text.push('\n');
            }
        }
        Format::Csv => {
            text.push_str("value\n");
            for v in &values {
                text.push_str(&fmt17(*v));
                text.push('\n');
            }
        }
        Format::Json => {
            let body: Vec<String> = values.iter().map(|v| fmt17(*v)).collect();
            let query = format!("{:?}", a.query).to_lowercase();
            let params = serde_json::to_string(&params).expect("params serialize");
            text.push_str(&format!(
                "{{\"query\":\"{query}\",\"params\":{params},\"values\":[{}]}}\n",
                body.join(",")
            ));
        }
    }
    emit(None, text.as_bytes())?;
    Ok(0)
}

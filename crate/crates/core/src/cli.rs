//! Command-line frontend.
//!
//! Exit codes: `0` success, `1` verification mismatch, `2` invalid parameters,
//! `3` enumeration budget exceeded.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::bounds::{check_bound, extremal_example, padic_digits, weight_lower_bound};
use crate::construct::{construct_extremal, count_extremal_formula, example_n_equals_p, subsets_of_size, SupportSpec};
use crate::counting::{total_identity_check, weight_distribution, WeightDistribution};
use crate::error::Error;
use crate::ff::{prime_power, Field};
use crate::oracle::{self, SweepConfig};
use crate::poly::Polynomial;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

/// Environment variable holding the default enumeration budget.
pub const BUDGET_ENV: &str = "MINWEIGHT_BUDGET";

#[derive(Parser, Debug)]
#[command(
    name = "minweight",
    version,
    about = "Weight bounds, extremal constructions and exact counts for polynomials with a repeated nonzero root"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weight lower bound for root multiplicity k, or the bound check for one polynomial
    Bound(BoundArgs),
    /// The unique monic multiple of (x+1)^k of weight k+1 vanishing on the given degrees
    Construct(ConstructArgs),
    /// Closed-form weight distribution of monic degree-n multiples of (x+1)^k over F_q
    Count(CountArgs),
    /// Weight distribution by exhaustive enumeration
    Enumerate(EnumerateArgs),
    /// Compare formulas with enumeration and sweep the weight bound
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Maximum number of polynomials a sweep may enumerate
    #[arg(long, env = BUDGET_ENV, default_value_t = oracle::DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads for enumeration
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Include wall-clock time in the report
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    k: Option<u64>,
    /// Characteristic (omit for characteristic zero)
    #[arg(long, conflicts_with = "q")]
    p: Option<u64>,
    /// Field order, instead of --p
    #[arg(long)]
    q: Option<u64>,
    /// Check this polynomial instead of printing the bound for --k
    #[arg(long, conflicts_with = "k")]
    poly: Option<String>,
    /// Root for --poly
    #[arg(long, default_value = "1", requires = "poly")]
    root: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Comma-separated forced-zero degrees I, |I| = n - k
    #[arg(long, value_delimiter = ',', num_args = 0.., conflicts_with = "all")]
    zeros: Option<Vec<usize>>,
    /// Construct every support
    #[arg(long)]
    all: bool,
    /// Field order (omit for the rationals)
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Count only polynomials whose nonzero degrees below n are exactly these
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    support: Option<Vec<usize>>,
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, requires_all = ["n", "k"])]
    q: Option<u64>,
    #[arg(long, requires = "q")]
    n: Option<usize>,
    #[arg(long, requires = "q")]
    k: Option<usize>,
    /// Sweep the weight bound over F_p
    #[arg(long, requires = "max_degree", conflicts_with = "q")]
    p: Option<u64>,
    #[arg(long, requires = "p")]
    max_degree: Option<usize>,
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

/// Outcome of a subcommand before rendering.
struct Output {
    json: Value,
    table: String,
    csv: Option<String>,
    code: i32,
}

impl Output {
    fn ok(json: Value, table: String) -> Output {
        Output {
            json,
            table,
            csv: None,
            code: EXIT_OK,
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!("{}\n", self.json),
            Format::Table => self.table.clone(),
            Format::Csv => self.csv.clone().unwrap_or_else(|| csv_from_json(&self.json)),
        }
    }
}

fn csv_from_json(v: &Value) -> String {
    let mut out = String::from("key,value\n");
    if let Value::Object(map) = v {
        for (key, value) in map {
            let text = match value {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let text = if text.contains(',') || text.contains('"') {
                format!("\"{}\"", text.replace('"', "\"\""))
            } else {
                text
            };
            out.push_str(&format!("{key},{text}\n"));
        }
    }
    out
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity(_) => EXIT_CAPACITY,
        _ => EXIT_INVALID,
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// writes its output. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let (result, format) = match &cli.command {
        Command::Bound(a) => (bound(a), a.format),
        Command::Construct(a) => (construct(a), a.format),
        Command::Count(a) => (count(a), a.format),
        Command::Enumerate(a) => (enumerate(a), a.format),
        Command::Verify(a) => (verify(a), a.format),
    };
    match result {
        Ok(output) => {
            let _ = write!(out, "{}", output.render(format));
            output.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn field_for(p: Option<u64>, q: Option<u64>) -> Result<Field, Error> {
    match (p, q) {
        (Some(p), _) => Field::finite(p, 1),
        (None, Some(q)) => Field::from_order(q),
        (None, None) => Ok(Field::rationals()),
    }
}

fn bound(a: &BoundArgs) -> Result<Output, Error> {
    let field = field_for(a.p, a.q)?;
    if let Some(text) = &a.poly {
        let f = Polynomial::parse(&field, text)?;
        let root = field.parse_element(&a.root)?;
        let report = check_bound(&f, &root)?;
        let table = format!(
            "f = {}\nroot {} has multiplicity {}\nweight {} >= bound {}: {}{}\n",
            report.poly,
            report.root,
            report.multiplicity,
            report.weight,
            report.bound,
            report.holds,
            if report.tight { " (tight)" } else { "" }
        );
        let json = serde_json::to_value(&report).expect("serializable");
        let code = if report.holds { EXIT_OK } else { EXIT_MISMATCH };
        return Ok(Output {
            code,
            ..Output::ok(json, table)
        });
    }
    let k = a
        .k
        .ok_or_else(|| Error::domain("bound needs --k or --poly"))?;
    match field.characteristic() {
        0 => {
            let b = weight_lower_bound(k, &field);
            Ok(Output::ok(
                json!({"k": k, "characteristic": 0, "bound": b.to_string()}),
                format!("characteristic 0, multiplicity {k}: weight >= {b}\n"),
            ))
        }
        p => {
            let e = padic_digits(k, p)?;
            let digits: Vec<String> = e.digits.iter().map(u64::to_string).collect();
            Ok(Output::ok(
                json!({"k": k, "p": p, "digits": e.digits, "bound": e.bound.to_string()}),
                format!(
                    "characteristic {p}, multiplicity {k}: digits [{}], weight >= {}\n",
                    digits.join(", "),
                    e.bound
                ),
            ))
        }
    }
}

fn construct(a: &ConstructArgs) -> Result<Output, Error> {
    let field = match a.q {
        Some(q) => Field::from_order(q)?,
        None => Field::rationals(),
    };
    let supports: Vec<Vec<usize>> = if a.all {
        if a.k > a.n {
            return Err(Error::domain("requires k <= n"));
        }
        subsets_of_size(a.n, a.n - a.k)
    } else {
        vec![a
            .zeros
            .clone()
            .ok_or_else(|| Error::domain("construct needs --zeros or --all"))?]
    };
    let mut items = Vec::new();
    let mut table = String::new();
    for zeros in supports {
        let spec = SupportSpec::from_zeros(a.n, zeros)?;
        let f = construct_extremal(a.n, a.k, &spec, &field)?;
        table.push_str(&format!("I = {:?}: {f}\n", spec.zeros()));
        items.push(json!({
            "zeros": spec.zeros(),
            "poly": f,
            "text": f.to_string(),
            "weight": f.weight().to_string(),
        }));
    }
    let json = if a.all {
        json!({
            "n": a.n,
            "k": a.k,
            "count": count_extremal_formula(a.n as u64, a.k as u64).to_string(),
            "polynomials": items,
        })
    } else {
        let mut item = items.pop().expect("one support");
        item["n"] = json!(a.n);
        item["k"] = json!(a.k);
        item
    };
    Ok(Output::ok(json, table))
}

fn distribution_output(d: &WeightDistribution, mut json: Value) -> Output {
    json["total"] = json!(d.total().to_string());
    let mut table = format!(
        "q = {}, n = {}, k = {} ({})\n{:>6}  {}\n",
        d.q, d.n, d.k, d.source, "weight", "count"
    );
    for (w, c) in &d.counts {
        table.push_str(&format!("{w:>6}  {c}\n"));
    }
    table.push_str(&format!("{:>6}  {}\n", "total", d.total()));
    Output {
        csv: Some(d.to_csv()),
        ..Output::ok(json, table)
    }
}

fn count(a: &CountArgs) -> Result<Output, Error> {
    let d = weight_distribution(a.q, a.n, a.k)?;
    let json = serde_json::to_value(&d).expect("serializable");
    Ok(distribution_output(&d, json))
}

fn sweep_config(q: u64, n: usize, k: usize, s: &SweepArgs) -> Result<SweepConfig, Error> {
    Ok(SweepConfig::new(q, n, k)?
        .budget(s.budget)
        .partitions(s.workers))
}

fn enumerate(a: &EnumerateArgs) -> Result<Output, Error> {
    let cfg = sweep_config(a.q, a.n, a.k, &a.sweep)?;
    if let Some(support) = &a.support {
        let start = std::time::Instant::now();
        let count = oracle::empirical_fixed_support_count(&cfg, support)?;
        let mut json = json!({"config": cfg, "support": support, "count": count.to_string()});
        if a.sweep.timing {
            json["wall_time_ms"] = json!(start.elapsed().as_millis() as u64);
        }
        let table = format!(
            "q = {}, n = {}, k = {}, support {:?}: {count}\n",
            a.q, a.n, a.k, support
        );
        return Ok(Output::ok(json, table));
    }
    let report = oracle::distribution_report(&cfg, a.sweep.timing)?;
    let json = serde_json::to_value(&report).expect("serializable");
    let mut out = distribution_output(&report.distribution, json);
    out.json["distribution"]["total"] = out.json["total"].take();
    out.json
        .as_object_mut()
        .expect("object")
        .remove("total");
    Ok(out)
}

/// One formula-versus-enumeration comparison.
fn compare(q: u64, n: usize, k: usize, s: &SweepArgs) -> Result<(bool, BigUint), Error> {
    let formula = weight_distribution(q, n as u64, k as u64)?;
    let enumerated = oracle::empirical_weight_distribution(&sweep_config(q, n, k, s)?)?;
    let identity = total_identity_check(q, n as u64, k as u64)?;
    Ok((formula.same_counts(&enumerated) && identity, enumerated.total()))
}

fn sweep_passes(report: &oracle::BoundSweepReport, field: &Field) -> Result<bool, Error> {
    let mut ok = report.violations.is_empty();
    for row in &report.witnesses {
        let extremal = extremal_example(row.k as u64, field)?;
        ok &= BigUint::from(row.min_weight) == row.bound
            && BigUint::from(extremal.weight()) == row.bound;
    }
    Ok(ok)
}

/// Grid of `(q, n, k)` with `1 <= k <= n < p` whose sweep fits in `budget`.
pub fn default_grid(budget: u64) -> Vec<(u64, usize, usize)> {
    let mut grid = Vec::new();
    for q in [5u64, 7, 11, 13, 25, 49] {
        let (p, _) = prime_power(q).expect("prime power");
        for n in 1..p as usize {
            for k in 1..=n {
                if q.checked_pow((n - k) as u32).is_some_and(|c| c <= budget) {
                    grid.push((q, n, k));
                }
            }
        }
    }
    grid
}

fn verify(a: &VerifyArgs) -> Result<Output, Error> {
    if let (Some(q), Some(n), Some(k)) = (a.q, a.n, a.k) {
        let (ok, total) = compare(q, n, k, &a.sweep)?;
        let table = if ok {
            format!("formula matches enumeration ({total} polynomials)\n")
        } else {
            format!("MISMATCH between formula and enumeration ({total} polynomials)\n")
        };
        return Ok(Output {
            code: if ok { EXIT_OK } else { EXIT_MISMATCH },
            ..Output::ok(
                json!({"q": q, "n": n, "k": k, "polynomials": total.to_string(), "passed": ok}),
                table,
            )
        });
    }
    if let (Some(p), Some(d)) = (a.p, a.max_degree) {
        let report = oracle::bound_sweep(p, d, a.sweep.budget, a.sweep.workers, a.sweep.timing)?;
        let ok = sweep_passes(&report, &Field::finite(p, 1)?)?;
        let mut table = format!(
            "F_{p}, degree <= {d}: {} polynomials, {} violations\n{:>4} {:>6} {:>6}  witness\n",
            report.examined,
            report.violations.len(),
            "k",
            "bound",
            "min"
        );
        for row in &report.witnesses {
            table.push_str(&format!(
                "{:>4} {:>6} {:>6}  {}\n",
                row.k, row.bound, row.min_weight, row.witness
            ));
        }
        let mut json = serde_json::to_value(&report).expect("serializable");
        json["passed"] = json!(ok);
        return Ok(Output {
            code: if ok { EXIT_OK } else { EXIT_MISMATCH },
            ..Output::ok(json, table)
        });
    }

    let mut checks = Vec::new();
    let mut table = String::new();
    let grid = default_grid(a.sweep.budget);
    let mut failed = Vec::new();
    let mut total = BigUint::from(0u32);
    for &(q, n, k) in &grid {
        let (ok, count) = compare(q, n, k, &a.sweep)?;
        total += count;
        if !ok {
            failed.push(format!("q={q} n={n} k={k}"));
        }
    }
    table.push_str(&format!(
        "weight distributions: {} parameter sets, {total} polynomials, {} mismatches\n",
        grid.len(),
        failed.len()
    ));
    checks.push(json!({
        "name": "weight distributions",
        "cases": grid.len(),
        "polynomials": total.to_string(),
        "failures": failed,
        "passed": failed.is_empty(),
    }));

    for (p, d) in [(2u64, 10usize), (3, 6)] {
        let report = oracle::bound_sweep(p, d, a.sweep.budget, a.sweep.workers, false)?;
        let ok = sweep_passes(&report, &Field::finite(p, 1)?)?;
        table.push_str(&format!(
            "weight bound over F_{p}, degree <= {d}: {} polynomials, {} violations, minima {}\n",
            report.examined,
            report.violations.len(),
            if ok { "attained" } else { "NOT attained" }
        ));
        checks.push(json!({
            "name": format!("weight bound F_{p} degree <= {d}"),
            "polynomials": report.examined,
            "violations": report.violations.len(),
            "passed": ok,
        }));
    }

    let mut n_eq_p_ok = true;
    for p in [3u64, 5, 7] {
        for k in 1..p {
            let example = example_n_equals_p(p, k)?;
            let cfg = sweep_config(p, p as usize, k as usize, &a.sweep)?;
            let tally = oracle::weight_tally(&cfg)?;
            let light = tally.at_most(k as usize + 1);
            let with_constant: u64 = tally.with_constant_term.iter().take(k as usize + 2).sum();
            n_eq_p_ok &= BigUint::from(light) == example.count
                && example.polynomials.len() as u64 == light
                && with_constant == 1;
        }
    }
    table.push_str(&format!(
        "degree p multiples for p in 3, 5, 7: {}\n",
        if n_eq_p_ok { "counts match" } else { "MISMATCH" }
    ));
    checks.push(json!({"name": "degree p boundary", "passed": n_eq_p_ok}));

    let passed = checks.iter().all(|c| c["passed"] == json!(true));
    table.push_str(if passed { "all checks passed\n" } else { "verification FAILED\n" });
    Ok(Output {
        code: if passed { EXIT_OK } else { EXIT_MISMATCH },
        ..Output::ok(json!({"checks": checks, "passed": passed}), table)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["minweight"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn grid_respects_budget_and_regime() {
        let grid = default_grid(1_000_000);
        assert!(grid.contains(&(13, 12, 7)));
        assert!(!grid.contains(&(13, 12, 6)));
        assert!(grid.contains(&(49, 6, 3)));
        assert!(!grid.contains(&(49, 6, 2)));
        assert!(grid.iter().all(|(q, n, _)| (*n as u64) < prime_power(*q).unwrap().0));
    }

    #[test]
    fn bound_table_and_char_zero() {
        let (code, out, _) = run_args(&["bound", "--k", "4"]);
        assert_eq!(code, 0);
        assert!(out.contains("weight >= 5"));
        let (code, out, _) = run_args(&["bound", "--k", "4", "--format", "json"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"{"bound":"5","characteristic":0,"k":4}"#);
    }

    #[test]
    fn missing_arguments_are_invalid() {
        assert_eq!(run_args(&["bound"]).0, EXIT_INVALID);
        assert_eq!(run_args(&["count", "--q", "5"]).0, EXIT_INVALID);
        assert_eq!(run_args(&["nonsense"]).0, EXIT_INVALID);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }
}

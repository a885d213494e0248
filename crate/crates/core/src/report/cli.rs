use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use super::table::{genus_table, render_table, OutputFormat, RowStatus};
use crate::error::{Error, Result};
use crate::filtration::{
    hn_all_exponent_multisets, hn_construct, hyperelliptic_exponents, low_genus_exponents_with, Filtration,
};
use crate::lyapunov::{
    cmx_bound, cmx_bound_via_kappa, ekz_sum, onesum_from_weight, upper_bound_bruteforce_detail, upper_bound_closed,
    Subject, SumReport,
};
use crate::rational::Rational;
use crate::semigroup::{
    gaps_one_point_with, members, rank_table_hyperelliptic, rank_table_one_point, weight, weight_bound_holds, GapSet,
    RankTable,
};
use crate::stratum::{
    derived_stratum, hyperelliptic_signature, parse_zero_list, render_zeros, split_assignments, Component,
    QuadraticSignature, Stratum,
};

const GRAMMAR: &str = "\
usage: weierstrass [FLAGS] <COMMAND> key=value...

commands:
  exponents g=<g> zeros=<m1+m2+...> [component=<c>]   filtration and exponent sum
  hyp sig=<d1,d2,...>                                  hyperelliptic route with the EKZ cross-check
  table g=<3|4|5>                                      low-genus table
  bound g=<g> zeros=<m1+m2+...>                        closed, brute-force and CMX bounds
  semigroup g=<g> (component=<c> | gaps=<a+b+...>)     gap set, weight and semigroup members
  semigroup sig=<d1,d2,...>                            hyperelliptic rank table and members

components: hyp, odd, even, non-hyp, hyp-locus, unspecified
signatures: comma-separated orders, `dxN` repeats d N times (6,-1x10)

flags:
  --format <text|json|csv>   output format (default text)
  --check                    run the cross-oracles; exit 2 if one fails
  --paper-style              table cells exactly as typeset
  --assume-generic           allow odd/even one-point gaps beyond genus 5
  --c-area                   report L - kappa (c_area in units of 3/pi^2)
";

/// Largest rank table the `--check` cross-oracles will build.
const HN_CHECK_CELLS: usize = 1 << 16;

#[derive(Parser, Debug)]
#[command(name = "weierstrass", disable_help_subcommand = true)]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Flags {
    #[arg(long, global = true, default_value = "text")]
    format: String,
    #[arg(long, global = true)]
    check: bool,
    #[arg(long, global = true)]
    paper_style: bool,
    #[arg(long, global = true)]
    assume_generic: bool,
    #[arg(long, global = true)]
    c_area: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    Exponents { assignments: Vec<String> },
    Hyp { assignments: Vec<String> },
    Table { assignments: Vec<String> },
    Bound { assignments: Vec<String> },
    Semigroup { assignments: Vec<String> },
}

/// Named cross-checks; `None` means not applicable.
#[derive(Default)]
struct Checks(Vec<(&'static str, Option<bool>)>);

impl Checks {
    fn push(&mut self, name: &'static str, outcome: Option<bool>) {
        self.0.push((name, outcome));
    }

    fn all_pass(&self) -> bool {
        self.0.iter().all(|(_, o)| *o != Some(false))
    }

    fn to_json(&self) -> Value {
        Value::Object(self.0.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
    }

    fn write_text(&self, out: &mut String) {
        for (name, outcome) in &self.0 {
            let verdict = match outcome {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "n/a",
            };
            let _ = writeln!(out, "check {name:<12} {verdict}");
        }
        let _ = writeln!(out, "{}", if self.all_pass() { "PASS" } else { "FAIL" });
    }
}

struct Outcome {
    text: String,
    checks_passed: bool,
}

/// Runs one command line (without the program name) and returns the exit
/// code with everything that would be printed.
pub fn run_cli(args: &[String]) -> (i32, String) {
    let argv = std::iter::once("weierstrass".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => return (1, format!("error: {}\n{GRAMMAR}", first_line(&e.to_string()))),
    };
    match execute(&cli) {
        Ok(o) => (if o.checks_passed { 0 } else { 2 }, o.text),
        Err(e @ Error::Parse(_)) => (1, format!("error: {e}\n{GRAMMAR}")),
        Err(e) => (1, format!("error: {e}\n")),
    }
}

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or("").trim_start_matches("error: ")
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let format: OutputFormat = cli.flags.format.parse()?;
    let flags = &cli.flags;
    match &cli.command {
        Command::Exponents { assignments } => exponents(&joined(assignments).parse()?, format, flags),
        Command::Hyp { assignments } => hyp(&signature_arg(assignments)?, format, flags),
        Command::Table { assignments } => table(assignments, format, flags),
        Command::Bound { assignments } => bound(&joined(assignments).parse()?, format, flags),
        Command::Semigroup { assignments } => semigroup(assignments, format, flags),
    }
}

fn joined(assignments: &[String]) -> String {
    assignments.join(",")
}

fn lookup(assignments: &[String], keys: &[&str]) -> Result<Vec<Option<String>>> {
    let pairs = split_assignments(&joined(assignments))?;
    for (k, _) in &pairs {
        if !keys.contains(&k.as_str()) {
            return Err(Error::Parse(format!("unexpected key {k:?}")));
        }
    }
    Ok(keys
        .iter()
        .map(|key| pairs.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.clone()))
        .collect())
}

fn signature_arg(assignments: &[String]) -> Result<QuadraticSignature> {
    match lookup(assignments, &["sig"])?.remove(0) {
        Some(s) => s.parse(),
        None => Err(Error::Parse("missing sig=".into())),
    }
}

fn genus_arg(value: Option<String>) -> Result<u32> {
    let v = value.ok_or_else(|| Error::Parse("missing g=".into()))?;
    v.parse().map_err(|_| Error::Parse(format!("bad genus {v:?}")))
}

fn rationals(xs: &[Rational]) -> String {
    xs.iter().map(Rational::to_string).collect::<Vec<_>>().join(", ")
}

fn opt(x: Option<Rational>) -> String {
    x.map_or_else(|| "n/a".to_string(), |r| r.to_string())
}

fn steps_text(f: &Filtration) -> String {
    f.steps
        .iter()
        .map(|s| s.label.to_string())
        .collect::<Vec<_>>()
        .join(" | ")
}

fn one_row_csv(s: &Stratum, f: &Filtration) -> String {
    let mut header = vec!["zeros".to_string(), "component".to_string()];
    header.extend((2..=f.genus).map(|i| format!("w{i}")));
    header.push("sum".to_string());
    let mut row = vec![render_zeros(&s.zeros), s.component.table_label().to_string()];
    row.extend(f.exponents[1..].iter().map(Rational::to_string));
    row.push(f.sum().to_string());
    csv_lines(&[header, row])
}

fn csv_lines(records: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in records {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
}

/// hn_construct on `rt` reproduces `f` and is choice-independent.
fn hn_agrees(rt: &RankTable, f: &Filtration) -> Option<bool> {
    if rt.entries().len() > HN_CHECK_CELLS {
        return None;
    }
    let hn = hn_construct(rt).ok()?;
    let all = hn_all_exponent_multisets(rt).ok()?;
    Some(hn.exponents == f.exponents && all.len() == 1)
}

fn report_json(report: &SumReport, f: &Filtration, checks: &Checks, flags: &Flags) -> Value {
    let s = report.subject.stratum();
    let mut v = json!({
        "stratum": { "g": s.genus, "zeros": s.zeros, "component": s.component.short() },
        "exponents": f.exponents,
        "sum": report.sum,
        "bounds": { "closed": report.bound_closed, "cmx": report.bound_cmx },
        "checks": checks.to_json(),
        "kappa": report.kappa,
        "filtration": f,
    });
    if s.hyperelliptic_locus {
        v["stratum"]["component"] = json!("hyp-locus");
    }
    if let Subject::Signature { signature, .. } = &report.subject {
        v["signature"] = json!(signature);
    }
    if flags.c_area {
        v["c_area"] = json!({ "value": report.c_area_scaled(), "times": "3/pi^2" });
    }
    v
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn report_text(report: &SumReport, f: &Filtration, extra: &[(&str, String)], checks: &Checks, flags: &Flags) -> String {
    let mut out = String::new();
    if let Subject::Signature { signature, .. } = &report.subject {
        let _ = writeln!(out, "signature  {signature}");
    }
    let _ = writeln!(out, "stratum    {}", report.subject.stratum());
    let _ = writeln!(out, "steps      {}", steps_text(f));
    let _ = writeln!(out, "exponents  {}", rationals(&f.exponents));
    let _ = writeln!(out, "sum        {}", report.sum);
    for (k, v) in extra {
        let _ = writeln!(out, "{k:<10} {v}");
    }
    let _ = writeln!(out, "closed     {}", opt(report.bound_closed));
    let _ = writeln!(out, "cmx        {}", opt(report.bound_cmx));
    let _ = writeln!(out, "kappa      {}", report.kappa);
    if flags.c_area {
        let _ = writeln!(out, "c_area     {} times 3/pi^2", report.c_area_scaled());
    }
    if flags.check {
        checks.write_text(&mut out);
    }
    out
}

fn exponents(s: &Stratum, format: OutputFormat, flags: &Flags) -> Result<Outcome> {
    let f = low_genus_exponents_with(s, flags.assume_generic)?;
    let report = SumReport::new(Subject::Stratum(s.clone()), &f);

    let signature = if s.is_hyperelliptic_component() {
        hyperelliptic_signature(s).ok()
    } else {
        None
    };
    let ekz = signature.as_ref().map(ekz_sum);
    let mut checks = Checks::default();
    checks.push("ekz", ekz.map(|e| e == report.sum));
    checks.push("denominator", Some(report.denominator_ok));
    checks.push("bounds", Some(report.within_bounds()));
    if flags.check {
        let one_point = (s.zeros.len() == 1)
            .then(|| gaps_one_point_with(s.genus, s.component, flags.assume_generic).ok())
            .flatten();
        checks.push(
            "onesum",
            one_point
                .as_ref()
                .map(|gs| onesum_from_weight(s.genus, gs) == report.sum),
        );
        let table = match (&one_point, &signature) {
            (Some(gs), _) => Some(rank_table_one_point(gs)),
            (None, Some(sig)) => Some(rank_table_hyperelliptic(sig)),
            _ => None,
        };
        checks.push("hn", table.and_then(|rt| hn_agrees(&rt, &f)));
    }

    let text = match format {
        OutputFormat::Json => pretty(&report_json(&report, &f, &checks, flags)),
        OutputFormat::Csv => one_row_csv(s, &f),
        OutputFormat::Text => {
            let extra: Vec<_> = ekz.map(|e| ("ekz", e.to_string())).into_iter().collect();
            report_text(&report, &f, &extra, &checks, flags)
        }
    };
    Ok(Outcome {
        text,
        checks_passed: !flags.check || checks.all_pass(),
    })
}

fn hyp(sig: &QuadraticSignature, format: OutputFormat, flags: &Flags) -> Result<Outcome> {
    let f = hyperelliptic_exponents(sig)?;
    let stratum = derived_stratum(sig);
    let report = SumReport::new(
        Subject::Signature {
            signature: sig.to_string(),
            stratum: stratum.clone(),
        },
        &f,
    );
    let ekz = ekz_sum(sig);
    let mut checks = Checks::default();
    checks.push("ekz", Some(ekz == report.sum));
    checks.push("denominator", Some(report.denominator_ok));
    checks.push("bounds", Some(report.within_bounds()));
    if flags.check {
        checks.push("hn", hn_agrees(&rank_table_hyperelliptic(sig), &f));
    }

    let text = match format {
        OutputFormat::Json => {
            let mut v = report_json(&report, &f, &checks, flags);
            v["ekz"] = json!(ekz);
            pretty(&v)
        }
        OutputFormat::Csv => one_row_csv(&stratum, &f),
        OutputFormat::Text => report_text(&report, &f, &[("ekz", ekz.to_string())], &checks, flags),
    };
    Ok(Outcome {
        text,
        checks_passed: !flags.check || checks.all_pass(),
    })
}

fn table(assignments: &[String], format: OutputFormat, flags: &Flags) -> Result<Outcome> {
    let genus = genus_arg(lookup(assignments, &["g"])?.remove(0))?;
    let rows = genus_table(genus)?;
    let mut text = render_table(genus, &rows, format, flags.paper_style);
    let mut passed = true;
    if flags.check {
        let mut out = String::new();
        for row in rows.iter().filter(|r| r.status == RowStatus::Computed) {
            let ok = row.passes_checks();
            passed &= ok;
            let _ = writeln!(
                out,
                "check {}{} {}",
                render_zeros(&row.stratum.zeros),
                match row.stratum.component.table_label() {
                    "" => String::new(),
                    c => format!(" {c}"),
                },
                if ok { "PASS" } else { "FAIL" }
            );
        }
        let _ = writeln!(out, "{}", if passed { "PASS" } else { "FAIL" });
        // keep machine-readable output parseable
        if format == OutputFormat::Text {
            text.push_str(&out);
        }
    }
    Ok(Outcome {
        text,
        checks_passed: passed,
    })
}

fn bound(s: &Stratum, format: OutputFormat, flags: &Flags) -> Result<Outcome> {
    let closed = upper_bound_closed(s)?;
    let brute = upper_bound_bruteforce_detail(s).ok();
    let cmx = cmx_bound(s)?;
    let via_kappa = cmx_bound_via_kappa(s)?;
    let mut checks = Checks::default();
    checks.push("bruteforce", brute.as_ref().map(|b| b.bound == closed));
    checks.push("cmx-kappa", Some(cmx == via_kappa));

    let text = match format {
        OutputFormat::Json => pretty(&json!({
            "stratum": { "g": s.genus, "zeros": s.zeros, "component": s.component.short() },
            "bounds": { "closed": closed, "bruteforce": brute, "cmx": cmx },
            "checks": checks.to_json(),
        })),
        OutputFormat::Csv => csv_lines(&[
            vec!["zeros".into(), "closed".into(), "bruteforce".into(), "cmx".into()],
            vec![
                render_zeros(&s.zeros),
                closed.to_string(),
                brute.as_ref().map(|b| b.bound.to_string()).unwrap_or_default(),
                cmx.to_string(),
            ],
        ]),
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "stratum     {s}");
            let _ = writeln!(out, "closed      {closed}");
            match &brute {
                Some(b) => {
                    let n: Vec<String> = b.minimizer.iter().map(u32::to_string).collect();
                    let _ = writeln!(
                        out,
                        "bruteforce  {} (n = ({}), {} compositions)",
                        b.bound,
                        n.join(","),
                        b.compositions
                    );
                }
                None => {
                    let _ = writeln!(out, "bruteforce  n/a (search space too large)");
                }
            }
            let _ = writeln!(out, "cmx         {cmx}");
            if flags.check {
                checks.write_text(&mut out);
            }
            out
        }
    };
    Ok(Outcome {
        text,
        checks_passed: !flags.check || checks.all_pass(),
    })
}

fn semigroup(assignments: &[String], format: OutputFormat, flags: &Flags) -> Result<Outcome> {
    let [g, component, gaps, sig]: [Option<String>; 4] = lookup(assignments, &["g", "component", "gaps", "sig"])?
        .try_into()
        .expect("four keys");
    if let Some(sig) = sig {
        return hyperelliptic_semigroup(&sig.parse()?, format);
    }
    let genus = genus_arg(g)?;
    let gs = match (gaps, component) {
        (Some(gaps), None) => GapSet::new(genus, parse_zero_list(&gaps)?)?,
        (None, Some(c)) => gaps_one_point_with(genus, c.parse::<Component>()?, flags.assume_generic)?,
        (None, None) => return Err(Error::Parse("semigroup needs component= or gaps=".into())),
        (Some(_), Some(_)) => return Err(Error::Parse("give component= or gaps=, not both".into())),
    };
    let w = weight(&gs);
    let rt = rank_table_one_point(&gs);
    let member_list: Vec<i32> = members(&rt).into_iter().map(|t| t.0[0]).collect();
    let onesum = (genus >= 2).then(|| onesum_from_weight(genus, &gs));
    let mut checks = Checks::default();
    checks.push("weight", Some(weight_bound_holds(&gs)));
    checks.push("closure", Some(gs.closure_violation(4 * genus).is_none()));
    checks.push("ranks", Some(rt.validate().is_ok()));

    let gap_list: Vec<u32> = gs.gaps().iter().copied().collect();
    let text = match format {
        OutputFormat::Json => pretty(&json!({
            "g": genus,
            "gaps": gap_list,
            "weight": w,
            "members": member_list,
            "onesum": onesum,
            "rank_table": rt.to_json(),
            "checks": checks.to_json(),
        })),
        OutputFormat::Csv => {
            let plus = |xs: &[String]| xs.join("+");
            let gaps: Vec<String> = gap_list.iter().map(u32::to_string).collect();
            let mem: Vec<String> = member_list.iter().map(i32::to_string).collect();
            csv_lines(&[
                vec!["g".into(), "gaps".into(), "weight".into(), "members".into()],
                vec![genus.to_string(), plus(&gaps), w.to_string(), plus(&mem)],
            ])
        }
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "gaps      {gs}");
            let _ = writeln!(out, "weight    {w} (max {})", genus * genus.saturating_sub(1) / 2);
            let mem: Vec<String> = member_list.iter().map(i32::to_string).collect();
            let _ = writeln!(
                out,
                "members   {} (up to {})",
                mem.join(", "),
                2 * genus.saturating_sub(1)
            );
            if let Some(o) = onesum {
                let _ = writeln!(out, "onesum    {o}");
            }
            if flags.check {
                checks.write_text(&mut out);
            }
            out
        }
    };
    Ok(Outcome {
        text,
        checks_passed: !flags.check || checks.all_pass(),
    })
}

fn hyperelliptic_semigroup(sig: &QuadraticSignature, format: OutputFormat) -> Result<Outcome> {
    let rt = rank_table_hyperelliptic(sig);
    let member_list: Vec<String> = members(&rt).iter().map(ToString::to_string).collect();
    let text = match format {
        OutputFormat::Json => pretty(&json!({
            "signature": sig.to_string(),
            "g": rt.genus(),
            "members": members(&rt),
            "rank_table": rt.to_json(),
        })),
        OutputFormat::Csv => csv_lines(
            &std::iter::once(vec!["member".to_string()])
                .chain(member_list.iter().map(|m| vec![m.clone()]))
                .collect::<Vec<_>>(),
        ),
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "signature {sig}");
            let _ = writeln!(out, "stratum   {}", derived_stratum(sig));
            let _ = writeln!(out, "box       {:?}", rt.bounds());
            let _ = writeln!(out, "members   {}", member_list.join(" "));
            out
        }
    };
    Ok(Outcome {
        text,
        checks_passed: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(line: &str) -> (i32, String) {
        let args: Vec<String> = line.split_whitespace().map(String::from).collect();
        run_cli(&args)
    }

    #[test]
    fn exponents_three_two_one() {
        let (code, out) = run("exponents g=4 zeros=3+2+1");
        assert_eq!(code, 0);
        assert!(out.contains("sum        25/12"), "{out}");
    }

    #[test]
    fn hyp_check_passes() {
        let (code, out) = run("hyp sig=6,-1x10 --check");
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("sum        5/2"));
        assert!(out.contains("ekz        5/2"));
        assert!(out.trim_end().ends_with("PASS"));
    }

    #[test]
    fn unsupported_table_genus() {
        let (code, out) = run("table g=6");
        assert_eq!(code, 1);
        assert!(out.contains("unsupported"), "{out}");
    }

    #[test]
    fn usage_errors_print_grammar() {
        for line in ["", "frobnicate", "exponents g=4 zeros=3+2+1 --format yaml", "hyp"] {
            let (code, out) = run(line);
            assert_eq!(code, 1, "{line}");
            assert!(out.contains("usage: weierstrass"), "{line}: {out}");
        }
    }

    #[test]
    fn validation_error_exits_one() {
        let (code, out) = run("exponents g=4 zeros=3+2");
        assert_eq!(code, 1);
        assert!(out.starts_with("error:"));
    }
}

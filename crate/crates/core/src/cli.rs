//! Command-line front end: `params`, `nse`, `verify` and `gate`.
//!
//! Exit codes: 0 success or ACCEPT, 1 REJECT, 2 usage or input error,
//! 3 refused because of scale, 4 a certification or verification failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::gate::{run_gate, CandidateProfile, GateReport};
use crate::gf2m::FieldParams;
use crate::oracle::{
    centralizer, cyclic_subgroup, enumerate_group, find_cyclic_subgroup, normalizer,
    verify_partition, w_subgroup, ElementTable,
};
use crate::orderstats::{
    frobenius_check, nse_closed_form, prime_graph, spectrum_closed_form, totient_divisor_check, weisner_check,
    LemmaReport, OrderStats,
};
use crate::suzuki::{candidate_generators, certify_generators, make_params, params_from_q, SuzukiError, SuzukiParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;
pub const EXIT_FAILED: i32 = 4;

pub const DEFAULT_ORACLE_LIMIT: u64 = 1 << 25;
/// Above this many elements the oracle needs --allow-big, and `verify`
/// skips the checks that hold the whole group in memory.
pub const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Parser, Debug)]
#[command(name = "suzuki", version, about = "Suzuki groups Sz(q): parameters, element-order statistics, oracle checks and the (order, nse) gate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print q, s, u1, u2, v and |Sz(q)|
    Params {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Element-order statistics from the closed form, the oracle, or both
    Nse {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value_t = Source::ClosedForm)]
        source: Source,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Enumerate Sz(q) and run every oracle check against the closed forms
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Decide whether an (order, nse) profile matches some Sz(q)
    Gate {
        /// JSON profile: {"order": "...", "nse_set": [...]} or {"order": "...", "nse_map": {...}}
        profile: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// q = 2^(2m+1)
    #[arg(long, conflicts_with = "q", required_unless_present = "q")]
    m: Option<u32>,
    #[arg(long)]
    q: Option<u64>,
    /// Irreducible modulus of degree 2m+1 as hex bits, e.g. 0xb for x^3+x+1
    #[arg(long, value_parser = parse_hex)]
    modulus: Option<u64>,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Permit oracle runs on groups with more than 2^20 elements
    #[arg(long)]
    allow_big: bool,
    /// Largest closure the oracle may build
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    oracle_limit: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
    /// Omit the timestamp so output is byte-for-byte reproducible
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Source {
    ClosedForm,
    Oracle,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

fn parse_hex(s: &str) -> Result<u64, String> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u64::from_str_radix(digits, 16).map_err(|e| format!("invalid hex modulus {s:?}: {e}"))
}

/// Resolved options shared by the group commands.
#[derive(Clone, Debug)]
pub struct Config {
    pub params: SuzukiParams,
    pub modulus_override: Option<u64>,
    pub oracle_limit: u64,
    pub allow_big: bool,
    pub output: OutputFormat,
    pub timestamp: bool,
}

impl Config {
    pub fn field(&self) -> Result<Arc<FieldParams>, String> {
        let f = match self.modulus_override {
            Some(modulus) => FieldParams::with_modulus(self.params.m, modulus),
            None => FieldParams::new(self.params.m),
        };
        f.map(Arc::new).map_err(|e| e.to_string())
    }

    /// Why an oracle run over the whole group is refused, if it is.
    fn refusal(&self) -> Option<String> {
        let order = &self.params.group_order;
        if *order > BigUint::from(self.oracle_limit) {
            return Some(format!(
                "|Sz({})| = {order} exceeds the oracle limit of {} elements; raise --oracle-limit to try anyway",
                self.params.q, self.oracle_limit
            ));
        }
        None
    }
}

fn config(group: &GroupArgs, run: &RunArgs) -> Result<Config, String> {
    let params = match (group.m, group.q) {
        (Some(m), None) => make_params(m),
        (None, Some(q)) => params_from_q(q),
        _ => unreachable!("clap enforces exactly one of --m and --q"),
    }
    .map_err(|e| e.to_string())?;
    let cfg = Config {
        params,
        modulus_override: group.modulus,
        oracle_limit: run.oracle_limit,
        allow_big: run.allow_big,
        output: run.output,
        timestamp: !run.no_timestamp,
    };
    cfg.field()?;
    Ok(cfg)
}

/// Exit code plus both renderings of a command's result.
pub struct Outcome {
    pub code: i32,
    pub json: Value,
    pub table: String,
}

/// Runs the CLI on `args` (including the program name). Everything is
/// written to `out` and `err`; the return value is the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let (result, run) = match &cli.command {
        Command::Params { group, run } => (config(group, run).map(|c| cmd_params(&c)), run),
        Command::Nse { group, source, run } => (config(group, run).map(|c| cmd_nse(&c, *source)), run),
        Command::Verify { group, run } => (config(group, run).map(|c| cmd_verify(&c)), run),
        Command::Gate { profile, run } => (cmd_gate(profile), run),
    };
    let mut outcome = match result {
        Ok(o) => o,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    if let Some(msg) = outcome.json.get("refused").and_then(Value::as_str) {
        let _ = writeln!(err, "refused: {msg}");
    }
    if !run.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        outcome.json["timestamp"] = json!(secs);
        let _ = writeln!(outcome.table, "timestamp: {secs}");
    }
    let written = match run.output {
        OutputFormat::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&outcome.json).expect("values serialize")
        ),
        OutputFormat::Table => out.write_all(outcome.table.as_bytes()),
    };
    if written.is_err() {
        return EXIT_USAGE;
    }
    outcome.code
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn header(cfg: &Config, command: &str) -> (Value, String) {
    let field = cfg.field().expect("validated in config");
    let p = &cfg.params;
    let json = json!({
        "command": command,
        "m": p.m,
        "q": p.q,
        "modulus": format!("{:#x}", field.modulus()),
    });
    let table = format!("{command}: Sz({}), m = {}, modulus {:#x}\n", p.q, p.m, field.modulus());
    (json, table)
}

pub fn cmd_params(cfg: &Config) -> Outcome {
    let (mut json, mut table) = header(cfg, "params");
    let p = &cfg.params;
    json["params"] = to_value(p);
    for (k, v) in [
        ("q", p.q.to_string()),
        ("s", p.s.to_string()),
        ("u1", p.u1.to_string()),
        ("u2", p.u2.to_string()),
        ("v", p.v.to_string()),
        ("w_order", p.w_order.to_string()),
        ("group_order", p.group_order.to_string()),
    ] {
        let _ = writeln!(table, "  {k:<12} {v}");
    }
    Outcome {
        code: EXIT_OK,
        json,
        table,
    }
}

fn stats_table(table: &mut String, title: &str, s: &OrderStats) {
    let _ = writeln!(table, "{title}:");
    for line in s.to_string().lines() {
        let _ = writeln!(table, "  {line}");
    }
}

fn refused(mut json: Value, mut table: String, msg: String) -> Outcome {
    let _ = writeln!(table, "refused: {msg}");
    json["refused"] = json!(msg);
    Outcome {
        code: EXIT_REFUSED,
        json,
        table,
    }
}

fn failed(mut json: Value, mut table: String, msg: String) -> Outcome {
    let _ = writeln!(table, "failed: {msg}");
    json["error"] = json!(msg);
    Outcome {
        code: EXIT_FAILED,
        json,
        table,
    }
}

/// Certified census of the whole group via the streaming oracle.
fn oracle_census(cfg: &Config) -> Result<OrderStats, SuzukiError> {
    let field = cfg.field().expect("validated in config");
    certify_generators(&cfg.params, &field, &candidate_generators(&field), cfg.oracle_limit)
}

pub fn cmd_nse(cfg: &Config, source: Source) -> Outcome {
    let (mut json, mut table) = header(cfg, "nse");
    json["source"] = to_value(&format!("{source:?}").to_lowercase());
    let closed = nse_closed_form(&cfg.params);
    if source == Source::ClosedForm {
        json["stats"] = closed.to_json();
        stats_table(&mut table, "closed form", &closed);
        return Outcome {
            code: EXIT_OK,
            json,
            table,
        };
    }
    if let Some(msg) = cfg.refusal() {
        return refused(json, table, msg);
    }
    let census = match oracle_census(cfg) {
        Ok(c) => c,
        Err(e) => return failed(json, table, e.to_string()),
    };
    if source == Source::Oracle {
        json["stats"] = census.to_json();
        stats_table(&mut table, "oracle", &census);
        return Outcome {
            code: EXIT_OK,
            json,
            table,
        };
    }
    let diff = closed.diff(&census);
    json["closed_form"] = closed.to_json();
    json["oracle"] = census.to_json();
    json["diff"] = Value::Array(
        diff.iter()
            .map(|(i, a, b)| json!({"order": i, "closed_form": a.to_string(), "oracle": b.to_string()}))
            .collect(),
    );
    stats_table(&mut table, "closed form", &closed);
    stats_table(&mut table, "oracle", &census);
    let _ = writeln!(table, "diff:");
    for (i, a, b) in &diff {
        let _ = writeln!(table, "  order {i}: closed form {a}, oracle {b}");
    }
    if diff.is_empty() {
        let _ = writeln!(table, "  (empty)");
    }
    Outcome {
        code: if diff.is_empty() { EXIT_OK } else { EXIT_FAILED },
        json,
        table,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> VerifyCheck {
    VerifyCheck {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

fn lemma_check(r: &LemmaReport) -> VerifyCheck {
    let detail = if r.passed() {
        format!("{} cases checked", r.checked)
    } else {
        format!("{} of {} cases fail: {}", r.violations.len(), r.checked, r.violations.join("; "))
    };
    check(&r.name, r.passed(), detail)
}

/// Checks that need the census only.
fn census_checks(p: &SuzukiParams, census: &OrderStats) -> Vec<VerifyCheck> {
    let closed = nse_closed_form(p);
    let diff = closed.diff(census);
    let mut out = vec![check(
        "census_matches_closed_form",
        diff.is_empty(),
        if diff.is_empty() {
            format!("{} element orders, total {}", census.counts().len(), census.total())
        } else {
            format!("differs at orders {:?}", diff.iter().map(|d| d.0).collect::<Vec<_>>())
        },
    )];
    let spectrum = census.spectrum();
    let expected = spectrum_closed_form(p);
    out.push(check(
        "spectrum",
        spectrum == expected,
        format!("{:?}", spectrum.iter().collect::<Vec<_>>()),
    ));
    match prime_graph(&spectrum, census.total()) {
        Ok(g) => out.push(check(
            "prime_graph_2_isolated",
            g.is_isolated(2),
            format!("{} components", g.component_count()),
        )),
        Err(e) => out.push(check("prime_graph_2_isolated", false, e.to_string())),
    }
    out.push(lemma_check(&frobenius_check(census)));
    out.push(lemma_check(&totient_divisor_check(census)));
    out.push(lemma_check(&weisner_check(census)));
    out
}

/// Checks that need the full element table.
fn table_checks(p: &SuzukiParams, t: &ElementTable, census: &OrderStats) -> Vec<VerifyCheck> {
    let mut out = Vec::new();
    let table_census = crate::oracle::empirical_order_stats(t, Some(&spectrum_closed_form(p)));
    out.push(match table_census {
        Ok(s) => check("table_census_matches_streaming", &s == census, format!("{} elements", t.len())),
        Err(e) => check("table_census_matches_streaming", false, e.to_string()),
    });

    let r = verify_partition(t, p);
    out.push(check(
        "partition",
        r.passed(),
        format!(
            "conjugates W {}, U1 {}, U2 {}, V {}; covered {} of {}, {} twice, {} missed; even orders outside W {}",
            r.n_w, r.n_u1, r.n_u2, r.n_v, r.covered, r.nontrivial, r.double_covered, r.uncovered, r.even_order_outside_w
        ),
    ));
    out.push(check(
        "w_normalizer_index",
        r.w_normalizer_index == p.w_order + 1,
        format!("|S:N(W)| = {}, expected {}", r.w_normalizer_index, p.w_order + 1),
    ));

    for (label, k, index) in [("u1", p.u1, 4usize), ("u2", p.u2, 4), ("v", p.v, 2)] {
        let name = format!("normalizer_index_{label}");
        let h = match find_cyclic_subgroup(t, k) {
            Ok(h) => h,
            Err(e) => {
                out.push(check(&name, false, e.to_string()));
                continue;
            }
        };
        let n = normalizer(t, &h);
        let found = n.order() / h.order();
        out.push(check(
            &name,
            n.order() == index * h.order(),
            format!("|N:{}| = {found}, expected {index}", label.to_uppercase()),
        ));
        if label == "v" {
            continue;
        }
        // every nontrivial power of the generator has C(x) = ⟨x⟩
        let x = h.cyclic_generator.clone().expect("cyclic");
        let mut y = x.clone();
        let mut bad = Vec::new();
        for e in 1..k {
            let cyc = cyclic_subgroup(t, &y).expect("in table");
            if centralizer(t, &y).members != cyc.members {
                bad.push(e);
            }
            y = &y * &x;
        }
        out.push(check(
            &format!("centralizer_{label}"),
            bad.is_empty(),
            if bad.is_empty() {
                format!("C(x) = <x> for all {} elements of order {k} in one U", k - 1)
            } else {
                format!("C(x^e) differs from <x^e> for e in {bad:?}")
            },
        ));
    }
    out.push(match w_subgroup(t) {
        Ok(w) => check("w_subgroup", w.order() as u64 == p.w_order, format!("|W| = {}", w.order())),
        Err(e) => check("w_subgroup", false, e.to_string()),
    });
    out
}

pub fn cmd_verify(cfg: &Config) -> Outcome {
    let (mut json, mut table) = header(cfg, "verify");
    let p = &cfg.params;
    let big = p.group_order > BigUint::from(TABLE_LIMIT);
    if big && !cfg.allow_big {
        return refused(
            json,
            table,
            format!(
                "|Sz({})| = {} exceeds 2^20 elements; pass --allow-big to run the streaming census",
                p.q, p.group_order
            ),
        );
    }
    if let Some(msg) = cfg.refusal() {
        return refused(json, table, msg);
    }
    let started = Instant::now();
    let census = match oracle_census(cfg) {
        Ok(c) => c,
        Err(e) => return failed(json, table, e.to_string()),
    };
    let mut checks = vec![check(
        "generator_certification",
        true,
        format!("closure has {} elements with the expected spectrum", census.total()),
    )];
    checks.extend(census_checks(p, &census));
    if big {
        checks.push(check(
            "table_checks",
            true,
            format!("skipped: partition, normalizer and centralizer checks need |G| <= {TABLE_LIMIT}"),
        ));
    } else {
        let field = cfg.field().expect("validated in config");
        match enumerate_group(&candidate_generators(&field), cfg.oracle_limit) {
            Ok(t) => checks.extend(table_checks(p, &t, &census)),
            Err(e) => checks.push(check("enumeration", false, e.to_string())),
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    json["stats"] = census.to_json();
    json["checks"] = to_value(&checks);
    json["passed"] = json!(passed);
    if cfg.timestamp {
        json["elapsed_ms"] = json!(started.elapsed().as_millis() as u64);
    }
    stats_table(&mut table, "census", &census);
    for c in &checks {
        let _ = writeln!(table, "  [{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let _ = writeln!(table, "result: {}", if passed { "all checks pass" } else { "FAILED" });
    Outcome {
        code: if passed { EXIT_OK } else { EXIT_FAILED },
        json,
        table,
    }
}

fn gate_table(r: &GateReport) -> String {
    let mut s = format!("verdict: {}\n", r.verdict);
    if let Some(m) = r.inferred_m {
        let _ = writeln!(s, "inferred m: {m}");
    }
    for c in &r.checks {
        let _ = writeln!(s, "  [{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let _ = writeln!(s, "note: {}", r.note);
    s
}

pub fn cmd_gate(path: &Path) -> Result<Outcome, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let profile = CandidateProfile::from_json(&text).map_err(|e| e.to_string())?;
    let report = run_gate(&profile).map_err(|e| e.to_string())?;
    let mut json = json!({"command": "gate"});
    if let Value::Object(fields) = to_value(&report) {
        json.as_object_mut().expect("object").extend(fields);
    }
    Ok(Outcome {
        code: match report.verdict {
            crate::gate::Verdict::Accept => EXIT_OK,
            crate::gate::Verdict::Reject => EXIT_REJECT,
        },
        table: gate_table(&report),
        json,
    })
}

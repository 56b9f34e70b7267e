//! cmrt: class numbers, ray class orders, CM identification, Weber values,
//! and the degree-indexed prime bounds, from one binary.
//!
//! Output modes: default is a short human-readable block, --json emits one
//! machine-readable document per run (an envelope with command, inputs,
//! result, provenance), --quiet prints only the headline value. Exit codes:
//! 0 success, 1 usage, 2 domain error, 3 data-file error.

use clap::{ArgGroup, Parser, Subcommand};
use cmrt_core::arith::{is_fundamental_discriminant, kronecker};
use cmrt_core::bounds::{self, DiscriminantTable, MaxDiscTable, Witness};
use cmrt_core::curves::{
    inspect_curve, rational_to_string, weber, CurvePoint, Rational, WeierstrassCurve,
};
use cmrt_core::fields::make_field;
use cmrt_core::forms::{class_number, class_number_census};
use cmrt_core::rayclass::{ray_class_number, residue_unit_order_oracle, unit_index_oracle};
use cmrt_core::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "cmrt", version, about = "Exact arithmetic of CM elliptic curves and imaginary quadratic fields", max_term_width = 100)]
struct Cli {
    /// Emit one machine-readable JSON document instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Print only the headline value
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kronecker symbol (a/n), the full extension to all integers
    Kronecker {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },

    /// Class number by reduced form enumeration
    #[command(group(ArgGroup::new("which").required(true).args(["disc", "scan"])))]
    Classnum {
        /// One negative discriminant, 0 or 1 mod 4
        #[arg(long, allow_negative_numbers = true)]
        disc: Option<i64>,
        /// All fundamental discriminants with |d| up to this limit
        #[arg(long)]
        scan: Option<u64>,
    },

    /// Class number of the order of given conductor via the local factor formula
    OrderClassnum {
        /// Fundamental discriminant of the ambient field
        #[arg(long, allow_negative_numbers = true)]
        dk: i64,
        #[arg(long)]
        conductor: u64,
    },

    /// Ray class group order for the modulus ell * O_K
    Rayclass {
        /// Fundamental discriminant of the field
        #[arg(long, allow_negative_numbers = true)]
        dk: i64,
        /// Odd prime conductor
        #[arg(long)]
        ell: u64,
        /// Re-derive the residue unit count by exhaustive enumeration
        #[arg(long)]
        oracle: bool,
    },

    /// Inspect y^2 = x^3 + ax + b: j, CM order, torsion growth criteria
    Curve {
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        a: Rational,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        b: Rational,
        /// Degree of the base field over Q, for the admissibility screen
        #[arg(long)]
        degree: Option<u64>,
        /// Odd prime to screen
        #[arg(long)]
        ell: Option<u64>,
    },

    /// Weber function value at a rational point of y^2 = x^3 + ax + b
    Weber {
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        a: Rational,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        b: Rational,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        x: Rational,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        y: Rational,
    },

    /// Largest admissible prime C(n) for base fields of degree n
    Bound {
        #[arg(long)]
        degree: u64,
        /// Use the n <= 100 per-h maximum table instead of the exact h <= 7 list
        #[arg(long)]
        rough: bool,
        /// Discriminant list CSV overriding the bundled one
        #[arg(long)]
        data: Option<PathBuf>,
        /// Per-h maximum CSV overriding the bundled one
        #[arg(long)]
        maxdata: Option<PathBuf>,
    },

    /// C(n) for every degree up to the table's complete range
    Table {
        #[arg(long, default_value_t = 7)]
        max_degree: u64,
    },

    /// Re-verify the bundled data files row by row and scan for omissions
    VerifyData {
        #[arg(long, default_value_t = 10_000)]
        scan_limit: u64,
    },
}

/// Input grammar for rationals: `p/q` or a plain integer, nothing else.
fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let err = || format!("expected an integer or p/q, got '{s}'");
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let numer: BigInt = numer.parse().map_err(|_| err())?;
    let denom: BigInt = denom.parse().map_err(|_| err())?;
    if denom.is_zero() {
        return Err(format!("zero denominator in '{s}'"));
    }
    Ok(Rational::new(numer, denom))
}

/// What one subcommand produced, before the output mode is applied.
struct Outcome {
    command: &'static str,
    inputs: Value,
    result: Value,
    provenance: Vec<(&'static str, &'static str)>,
    human: String,
    quiet: String,
}

/// Write the final line(s) to stdout. A consumer closing the pipe early
/// (head, grep -q) is not our error; anything else on stdout is.
fn emit(text: impl std::fmt::Display) {
    use std::io::{ErrorKind, Write};
    let mut out = std::io::stdout().lock();
    let res = writeln!(out, "{text}").and_then(|()| out.flush());
    if let Err(e) = res {
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write output: {e}");
        std::process::exit(3);
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are successes; everything else is usage
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let json = cli.json;
    let quiet = cli.quiet;
    match run(cli.command) {
        Ok(out) => {
            if json {
                let doc = json!({
                    "command": out.command,
                    "inputs": out.inputs,
                    "result": out.result,
                    "provenance": out.provenance,
                });
                emit(doc);
            } else if quiet {
                emit(&out.quiet);
            } else {
                emit(out.human.trim_end());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Kronecker { a, n } => run_kronecker(a, n),
        Command::Classnum { disc, scan } => run_classnum(disc, scan),
        Command::OrderClassnum { dk, conductor } => run_order_classnum(dk, conductor),
        Command::Rayclass { dk, ell, oracle } => run_rayclass(dk, ell, oracle),
        Command::Curve { a, b, degree, ell } => run_curve(&a, &b, degree, ell),
        Command::Weber { a, b, x, y } => run_weber(a, b, x, y),
        Command::Bound { degree, rough, data, maxdata } => {
            run_bound(degree, rough, data.as_deref(), maxdata.as_deref())
        }
        Command::Table { max_degree } => run_table(max_degree),
        Command::VerifyData { scan_limit } => run_verify_data(scan_limit),
    }
}

fn run_kronecker(a: i64, n: i64) -> Result<Outcome> {
    let v = kronecker(a, n);
    Ok(Outcome {
        command: "kronecker",
        inputs: json!({ "a": a, "n": n }),
        result: json!({ "value": v }),
        provenance: vec![(
            "kronecker symbol",
            "completely multiplicative extension of the Legendre symbol by the \
             (a/2), (a/-1), (a/0) conventions",
        )],
        human: format!("kronecker({a}, {n}) = {v}"),
        quiet: v.to_string(),
    })
}

fn run_classnum(disc: Option<i64>, scan: Option<u64>) -> Result<Outcome> {
    let provenance = vec![(
        "form class number",
        "h(d) counts reduced primitive (a, b, c) with b^2 - 4ac = d",
    )];
    if let Some(d) = disc {
        let h = class_number(d)?;
        return Ok(Outcome {
            command: "classnum",
            inputs: json!({ "disc": d }),
            result: json!({ "disc": d, "h": h }),
            provenance,
            human: format!("h({d}) = {h}"),
            quiet: h.to_string(),
        });
    }
    let limit = scan.expect("clap guarantees one of disc/scan");
    if limit > 10_000_000 {
        return Err(Error::domain(format!(
            "scan limit {limit} too large, maximum is 10000000"
        )));
    }
    let census = class_number_census(limit);
    let mut fields = Vec::new();
    let mut human = String::new();
    for k in 3..=limit {
        let d = -(k as i64);
        if !matches!(k % 4, 0 | 3) || !is_fundamental_discriminant(d)? {
            continue;
        }
        let h = census[k as usize];
        fields.push(json!({ "d": d, "h": h }));
        writeln!(human, "h({d}) = {h}").unwrap();
    }
    let count = fields.len();
    write!(human, "{count} fundamental discriminants with |d| <= {limit}").unwrap();
    Ok(Outcome {
        command: "classnum",
        inputs: json!({ "scan": limit }),
        result: json!({ "limit": limit, "count": count, "fields": fields }),
        provenance,
        human,
        quiet: count.to_string(),
    })
}

fn run_order_classnum(dk: i64, conductor: u64) -> Result<Outcome> {
    let field = make_field(dk)?;
    let order = field.order(conductor)?;
    let human = format!(
        "d_K = {} (h_K = {}, w_K = {})\nf = {}\ndisc = {}\nh = {}\nunits = {}",
        field.d_k, field.h_k, field.w_k, order.f, order.disc, order.h, order.w
    );
    Ok(Outcome {
        command: "order-classnum",
        inputs: json!({ "dk": dk, "conductor": conductor }),
        result: serde_json::to_value(order).expect("order serializes"),
        provenance: vec![(
            "conductor class number formula",
            "h(O_f) = h_K * f * prod_{p | f} (1 - (d_K/p)/p) / [O_K^x : O_f^x]",
        )],
        human,
        quiet: order.h.to_string(),
    })
}

fn run_rayclass(dk: i64, ell: u64, oracle: bool) -> Result<Outcome> {
    let field = make_field(dk)?;
    let report = ray_class_number(&field, ell)?;
    let mut result = serde_json::to_value(&report).expect("report serializes");
    let mut provenance = vec![
        (
            "ray class order for m = ell O_K",
            "h_m = h_K * |(O_K/m)^x| / [U : U_m]",
        ),
        (
            "residue unit count",
            "|(O_K/ell O_K)^x| = (ell-1)^2, ell^2-1, ell^2-ell as (d_K/ell) = 1, -1, 0",
        ),
    ];
    let mut human = format!(
        "d_K = {} (h_K = {}, w_K = {})\nell = {}, split type {}\n|(O_K/ell O_K)^x| = {}\n[U : U_m] = {}\nh_m = {}",
        field.d_k,
        field.h_k,
        field.w_k,
        report.ell,
        report.split_type,
        report.residue_unit_order,
        report.unit_index,
        report.h_m
    );
    if oracle {
        let residue_oracle = residue_unit_order_oracle(dk, ell)?;
        let index_oracle = unit_index_oracle(&field, ell)?;
        let holds = report.h_m * index_oracle == field.h_k * residue_oracle;
        let obj = result.as_object_mut().expect("report is an object");
        obj.insert("residue_unit_order_oracle".into(), json!(residue_oracle));
        obj.insert("unit_index_oracle".into(), json!(index_oracle));
        obj.insert("exact_sequence_check".into(), json!(holds));
        provenance.push((
            "residue oracle",
            "exhaustive norm-coprimality count over all ell^2 residues x + y*omega",
        ));
        write!(
            human,
            "\noracle |(O_K/ell O_K)^x| = {residue_oracle}\noracle [U : U_m] = {index_oracle}\nexact sequence h_m * [U:U_m] = h_K * |(O_K/m)^x|: {}",
            if holds { "holds" } else { "FAILS" }
        )
        .unwrap();
        assert!(holds, "exact sequence arithmetic must close");
    }
    Ok(Outcome {
        command: "rayclass",
        inputs: json!({ "dk": dk, "ell": ell, "oracle": oracle }),
        result,
        provenance,
        human,
        quiet: report.h_m.to_string(),
    })
}

fn run_curve(a: &Rational, b: &Rational, degree: Option<u64>, ell: Option<u64>) -> Result<Outcome> {
    let report = inspect_curve(a, b, degree, ell)?;
    let mut inputs = json!({
        "a": rational_to_string(a),
        "b": rational_to_string(b),
    });
    let inputs_obj = inputs.as_object_mut().expect("inputs object");
    if let Some(n) = degree {
        inputs_obj.insert("degree".into(), json!(n));
    }
    if let Some(l) = ell {
        inputs_obj.insert("ell".into(), json!(l));
    }

    let mut provenance = vec![
        ("j-invariant", "j = 1728 * 4a^3 / (4a^3 + 27b^2)"),
        (
            "singular j-values",
            "exact match against the thirteen class-number-one singular moduli",
        ),
    ];
    if report.prop2_divisor.is_some() {
        provenance.push((
            "torsion growth divisor",
            "2 * h_K * |(O_K/ell O_K)^x| / w_K divides [F(E[ell]) : F] for non-ell-powered cases",
        ));
    }
    if report.necessary_condition.is_some() {
        provenance.push((
            "degree screen",
            "ell admissible over a degree-n field only if ell | d_K or ell <= (w_K/2)*n + 1",
        ));
    }

    let mut human = format!(
        "y^2 = x^3 + a*x + b with a = {}, b = {}\nj = {}",
        rational_to_string(a),
        rational_to_string(b),
        rational_to_string(&report.j)
    );
    match &report.cm {
        Some(id) => {
            write!(human, "\ncm order: d_K = {}, f = {}, disc = {}", id.d_k, id.f, id.order_disc)
                .unwrap();
        }
        None => human.push_str("\ncm order: none"),
    }
    if let Some(w) = report.w_k {
        write!(human, "\nw_K = {w}").unwrap();
    }
    if let Some(m) = report.prop2_divisor {
        write!(human, "\nprop2 divisor = {m}").unwrap();
    }
    if let Some(v) = &report.necessary_condition {
        write!(
            human,
            "\nnecessary condition (degree {}, ell {}): {}, {}",
            degree.expect("condition implies degree"),
            ell.expect("condition implies ell"),
            if v.possible { "possible" } else { "impossible" },
            v.reason
        )
        .unwrap();
    }
    write!(human, "\nnote: {}", report.note).unwrap();

    let quiet = rational_to_string(&report.j);
    Ok(Outcome {
        command: "curve",
        inputs,
        result: serde_json::to_value(&report).expect("report serializes"),
        provenance,
        human,
        quiet,
    })
}

fn run_weber(a: Rational, b: Rational, x: Rational, y: Rational) -> Result<Outcome> {
    let inputs = json!({
        "a": rational_to_string(&a),
        "b": rational_to_string(&b),
        "x": rational_to_string(&x),
        "y": rational_to_string(&y),
    });
    let point_str = format!("({}, {})", rational_to_string(&x), rational_to_string(&y));
    let curve = WeierstrassCurve::new(a, b)?;
    let value = weber(&curve, &CurvePoint::rational(x, y))?;
    let human = format!(
        "curve: a = {}, b = {}\npoint: {}\nweber value = {}",
        rational_to_string(&curve.a),
        rational_to_string(&curve.b),
        point_str,
        value
    );
    Ok(Outcome {
        command: "weber",
        inputs,
        result: json!({ "value": value }),
        provenance: vec![(
            "weber function",
            "(g2 g3 / Delta) x generically, (g2^2 / Delta) x^2 when j = 1728, \
             (g3 / Delta) x^3 when j = 0",
        )],
        human,
        quiet: value.to_string(),
    })
}

fn data_file(explicit: Option<&Path>, name: &str) -> Option<PathBuf> {
    if let Some(p) = explicit {
        return Some(p.to_path_buf());
    }
    if let Ok(dir) = std::env::var("CMRT_DATA_DIR") {
        return Some(Path::new(&dir).join(name));
    }
    // installed layout: data/ next to the executable; absent in plain builds
    let exe_side = std::env::current_exe()
        .ok()
        .and_then(|exe| Some(exe.parent()?.join("data").join(name)))
        .filter(|p| p.exists());
    exe_side
}

fn load_discs(explicit: Option<&Path>) -> Result<(DiscriminantTable, String)> {
    match data_file(explicit, "discs_h_le_7.csv") {
        Some(p) => Ok((bounds::load_table(&p)?, p.display().to_string())),
        None => Ok((bounds::bundled_discriminant_table(), "bundled".into())),
    }
}

fn load_max(explicit: Option<&Path>) -> Result<(MaxDiscTable, String)> {
    match data_file(explicit, "watkins_max.csv") {
        Some(p) => Ok((bounds::load_max_table(&p)?, p.display().to_string())),
        None => Ok((bounds::bundled_max_table(), "bundled".into())),
    }
}

fn witness_human(n: u64, w: &Witness) -> String {
    match w {
        Witness::DiscriminantFactor { prime, abs_d, h } => {
            format!("prime {prime} divides |d| = {abs_d}, a field with h = {h} <= {n}")
        }
        Witness::SmallPrimeClause { prime } => {
            format!("largest prime <= 3n+1 = {} is {prime}", 3 * n + 1)
        }
        Witness::DiscriminantCap { prime, max_abs_d, h } => format!(
            "largest prime <= {max_abs_d} is {prime}, where {max_abs_d} is the largest |d| \
             with h <= {n} (attained at h = {h})"
        ),
    }
}

fn run_bound(
    degree: u64,
    rough: bool,
    data: Option<&Path>,
    maxdata: Option<&Path>,
) -> Result<Outcome> {
    let mut inputs = json!({ "degree": degree, "rough": rough });
    let inputs_obj = inputs.as_object_mut().expect("inputs object");
    let (result, source, provenance) = if rough {
        let (table, source) = load_max(maxdata)?;
        if let Some(p) = maxdata {
            inputs_obj.insert("maxdata".into(), json!(p.display().to_string()));
        }
        (
            bounds::rough_bound(degree, &table)?,
            source,
            vec![(
                "rough degree bound",
                "C(n) <= max(largest prime <= 3n+1, largest prime <= max{|d| : h(d) <= n})",
            )],
        )
    } else {
        let (table, source) = load_discs(data)?;
        if let Some(p) = data {
            inputs_obj.insert("data".into(), json!(p.display().to_string()));
        }
        (
            bounds::exact_bound(degree, &table)?,
            source,
            vec![(
                "degree bound",
                "C(n) = max(largest prime <= 3n+1, largest prime factor of any |d| with h(d) <= n)",
            )],
        )
    };
    let relation = if rough { "<=" } else { "=" };
    let human = format!(
        "C({degree}) {relation} {}\nwitness: {}\ntable: {source}",
        result.c_n,
        witness_human(degree, &result.witness)
    );
    Ok(Outcome {
        command: "bound",
        inputs,
        result: serde_json::to_value(result).expect("bound serializes"),
        provenance,
        human,
        quiet: result.c_n.to_string(),
    })
}

fn run_table(max_degree: u64) -> Result<Outcome> {
    if max_degree == 0 {
        return Err(Error::domain("max degree must be positive"));
    }
    let (table, source) = load_discs(None)?;
    let results = bounds::bound_table(max_degree, &table)?;
    let mut human = String::new();
    let mut quiet = String::new();
    for r in &results {
        writeln!(human, "C({}) = {}  ({})", r.n, r.c_n, witness_human(r.n, &r.witness)).unwrap();
        writeln!(quiet, "{}", r.c_n).unwrap();
    }
    write!(human, "table: {source}").unwrap();
    Ok(Outcome {
        command: "table",
        inputs: json!({ "max_degree": max_degree }),
        result: json!({ "max_degree": max_degree, "bounds": results }),
        provenance: vec![(
            "degree bound",
            "C(n) = max(largest prime <= 3n+1, largest prime factor of any |d| with h(d) <= n)",
        )],
        human,
        quiet: quiet.trim_end().to_string(),
    })
}

fn run_verify_data(scan_limit: u64) -> Result<Outcome> {
    let (discs, discs_source) = load_discs(None)?;
    let (max, max_source) = load_max(None)?;
    let completeness = bounds::verify_completeness(&discs, scan_limit)?;
    // the two tables must agree where they overlap
    for h in 1..=discs.declared_complete_through {
        let from_discs = discs.rows.iter().filter(|r| r.0 == h).map(|r| r.1).max();
        let from_max = max.rows.iter().find(|r| r.0 == h).map(|r| r.1);
        if from_discs != from_max {
            return Err(Error::data(format!(
                "per-h maximum mismatch at h = {h}: list says {from_discs:?}, max table says {from_max:?}"
            )));
        }
    }
    let human = format!(
        "discriminant list ({discs_source}): {} rows verified by form enumeration\n\
         max table ({max_source}): {} rows verified\n\
         census to {}: {} fundamental fields checked, every h <= {} field is listed\n\
         note: {}",
        discs.rows.len(),
        max.rows.len(),
        completeness.scan_limit,
        completeness.fields_checked,
        completeness.complete_through,
        completeness.note
    );
    Ok(Outcome {
        command: "verify-data",
        inputs: json!({ "scan_limit": scan_limit }),
        result: json!({
            "discs_rows": discs.rows.len(),
            "max_rows": max.rows.len(),
            "completeness": completeness,
        }),
        provenance: vec![
            (
                "row verification",
                "every listed (h, |d|) recomputed by reduced form enumeration",
            ),
            (
                "completeness scan",
                "census of all fundamental |d| up to the scan limit",
            ),
        ],
        human,
        quiet: "ok".into(),
    })
}

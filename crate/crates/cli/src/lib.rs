//! Command-line front end: exposes the certificate library as auditable
//! subcommands with deterministic text and JSON output.
//!
//! Exit codes follow the verdicts: 0 for certified/true/success, 1 for
//! refuted or a negative answer (witness in the output), 2 for invalid
//! input or any error. With `--json` exactly one JSON document is written
//! to stdout.

use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num::bigint::BigInt;
use serde_json::json;

use smallknot::cert::{
    admissible_k, certify_lens, certify_spherical_with, sweep_verify_with, ExceptionalSlopes,
    KnotDescriptor, LensSpace, SmallKnotCertificate, SweepConfig, Verdict,
};
use smallknot::cfrac::{cf_equivalent, ContinuedFraction, SimpleCF, SimpleFormRelation};
use smallknot::error::Error;

use smallknot::slope_table::{table_families, Coord, Membership, SlopeFamily};

#[derive(Parser)]
#[command(
    name = "smallknot",
    version,
    about = "Exact certificates for hyperbolic small knots in lens spaces and spherical 3-manifolds"
)]
struct Cli {
    /// Emit exactly one JSON document instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Show full hypothesis and refutation traces in text output
    #[arg(long, global = true)]
    trace: bool,

    /// Replace the built-in exceptional-slope set (one slope per line,
    /// `#` comments)
    #[arg(long, global = true, value_name = "FILE")]
    exceptional_slopes: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Continued-fraction calculator
    Cf {
        #[command(subcommand)]
        command: CfCommand,
    },
    /// 2-bridge link comparisons
    Link {
        #[command(subcommand)]
        command: LinkCommand,
    },
    /// Print the slope-pair families at a given k
    Table {
        #[arg(long)]
        k: i64,
    },
    /// Decide whether a slope pair occurs in the table at k
    CheckPair {
        #[arg(long)]
        k: i64,
        /// The pair, e.g. "(inf,-5/1)" or "(empty,-8)"
        #[arg(long)]
        pair: String,
        /// Check the written coordinate order only (default: both orders)
        #[arg(long)]
        ordered: bool,
    },
    /// Build small-knot certificates
    Certify {
        #[command(subcommand)]
        command: CertifyCommand,
    },
    /// Run the verification sweeps configured in a TOML file
    Sweep {
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum CfCommand {
    /// Evaluate comma-separated terms, e.g. `2,4,-2`, to an exact slope
    Eval { terms: String },
    /// Canonical all-positive expansion of a positive fraction `p/q`
    Simple { fraction: String },
}

#[derive(Subcommand)]
enum LinkCommand {
    /// Decide equivalence of the 2-bridge links presented by two
    /// continued fractions
    Equiv {
        cf1: String,
        cf2: String,
        /// Treat mirror images as equivalent
        #[arg(long)]
        mirror: bool,
    },
}

#[derive(Args)]
struct LensArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    /// Link family index; defaults to the first admissible k
    #[arg(long)]
    k: Option<i64>,
}

#[derive(Subcommand)]
enum CertifyCommand {
    /// Certificate for the lens space L(p, q)
    Lens(LensArgs),
    /// Certificate for the spherical manifold +/-(-1; 1/2, 1/3, a3/b3)
    Spherical {
        #[arg(long, allow_hyphen_values = true)]
        a3: i64,
        #[arg(long)]
        b3: i64,
    },
}

/// Runs the CLI on an argument vector, writing to the given streams, and
/// returns the process exit code.
pub fn run<O: Write, E: Write>(
    args: impl IntoIterator<Item = String>,
    out: &mut O,
    err: &mut E,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return 2;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch<O: Write>(cli: &Cli, out: &mut O) -> Result<i32, Error> {
    match &cli.command {
        Command::Cf { command } => match command {
            CfCommand::Eval { terms } => cf_eval(cli, terms, out),
            CfCommand::Simple { fraction } => cf_simple(cli, fraction, out),
        },
        Command::Link { command } => match command {
            LinkCommand::Equiv { cf1, cf2, mirror } => link_equiv(cli, cf1, cf2, *mirror, out),
        },
        Command::Table { k } => table(cli, *k, out),
        Command::CheckPair { k, pair, ordered } => check_pair(cli, *k, pair, !*ordered, out),
        Command::Certify { command } => match command {
            CertifyCommand::Lens(args) => lens(cli, args, out),
            CertifyCommand::Spherical { a3, b3 } => spherical(cli, *a3, *b3, out),
        },
        Command::Sweep { config } => sweep(cli, config, out),
    }
}

// A closed downstream pipe is not an error worth a diagnostic.
fn io_error(e: std::io::Error) -> Result<(), Error> {
    if e.kind() == std::io::ErrorKind::BrokenPipe {
        Ok(())
    } else {
        Err(Error::InvalidInput(e.to_string()))
    }
}

fn emit<O: Write>(out: &mut O, doc: impl Display) -> Result<(), Error> {
    writeln!(out, "{doc}").map_or_else(io_error, Ok)
}

fn emit_json<O: Write>(out: &mut O, value: &impl serde::Serialize) -> Result<(), Error> {
    let doc = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    writeln!(out, "{doc}").map_or_else(io_error, Ok)
}

fn exceptional_set(cli: &Cli) -> Result<ExceptionalSlopes, Error> {
    match &cli.exceptional_slopes {
        None => Ok(ExceptionalSlopes::default_set()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidInput(format!("cannot read {}: {e}", path.display()))
            })?;
            ExceptionalSlopes::parse(&text)
        }
    }
}

fn parse_bigint(name: &str, text: &str) -> Result<BigInt, Error> {
    text.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("--{name} expects an integer, got {text:?}")))
}

fn cf_eval<O: Write>(cli: &Cli, terms: &str, out: &mut O) -> Result<i32, Error> {
    let cf: ContinuedFraction = terms.parse()?;
    let value = cf.evaluate();
    if cli.json {
        emit_json(out, &json!({ "command": "cf-eval", "terms": cf.to_string(), "value": value }))?;
    } else {
        emit(out, &value)?;
    }
    Ok(0)
}

fn cf_simple<O: Write>(cli: &Cli, fraction: &str, out: &mut O) -> Result<i32, Error> {
    let r = smallknot::parse::fraction(fraction)?;
    let simple = SimpleCF::of(&r)?;
    if cli.json {
        emit_json(
            out,
            &json!({ "command": "cf-simple", "fraction": r, "simple": simple.to_string() }),
        )?;
    } else {
        emit(out, &simple)?;
    }
    Ok(0)
}

fn link_equiv<O: Write>(
    cli: &Cli,
    cf1: &str,
    cf2: &str,
    mirror: bool,
    out: &mut O,
) -> Result<i32, Error> {
    let a: ContinuedFraction = cf1.parse()?;
    let b: ContinuedFraction = cf2.parse()?;
    let res = cf_equivalent(&a, &b, mirror)?;
    if cli.json {
        emit_json(
            out,
            &json!({
                "command": "link-equiv",
                "cf1": a.to_string(),
                "cf2": b.to_string(),
                "allow_mirror": mirror,
                "equivalent": res.equivalent,
                "simple_forms": res.simple_forms,
            }),
        )?;
    } else if res.equivalent {
        match res.simple_forms {
            SimpleFormRelation::Equal => emit(out, "equivalent (equal simple forms)")?,
            SimpleFormRelation::Reversed => emit(out, "equivalent (reversed simple forms)")?,
            SimpleFormRelation::Unrelated => emit(out, "equivalent")?,
        }
    } else {
        emit(out, "not equivalent")?;
    }
    Ok(if res.equivalent { 0 } else { 1 })
}

fn family_json(f: &SlopeFamily) -> serde_json::Value {
    let coord = |c: &Coord| match c {
        Coord::Const(s) => json!({ "const": s }),
        Coord::Param(m) => json!({ "map": m.render(f.param_name()) }),
    };
    json!({
        "id": f.id(),
        "first": coord(f.first()),
        "second": coord(f.second()),
        "both_orders_listed": f.both_listed(),
        "interval": f.interval().map(|iv| iv.to_string()),
        "min_k": f.min_k(),
    })
}

fn table<O: Write>(cli: &Cli, k: i64, out: &mut O) -> Result<i32, Error> {
    let families = table_families(k)?;
    if cli.json {
        let rows: Vec<serde_json::Value> = families.iter().map(family_json).collect();
        emit_json(out, &json!({ "command": "table", "k": k, "families": rows }))?;
    } else {
        emit(out, format_args!("boundary slope pair families of C(2,2k,-2) at k = {k}"))?;
        for f in &families {
            emit(out, format_args!("  {}: {f}", f.id()))?;
        }
    }
    Ok(0)
}

fn check_pair<O: Write>(
    cli: &Cli,
    k: i64,
    pair: &str,
    both_orders: bool,
    out: &mut O,
) -> Result<i32, Error> {
    let pair = smallknot::parse::slope_pair(pair)?;
    let report = smallknot::slope_table::pair_in_table(k, &pair, both_orders)?;
    if cli.json {
        emit_json(out, &json!({ "command": "check-pair", "report": report }))?;
        return Ok(if report.is_member() { 0 } else { 1 });
    }
    match &report.verdict {
        Membership::Member(w) => {
            match (&w.parameter, w.order) {
                (Some(t), order) => emit(
                    out,
                    format_args!(
                        "member of {} at parameter {t} ({})",
                        w.family,
                        order_name(order)
                    ),
                )?,
                (None, order) => emit(
                    out,
                    format_args!("member of constant row {} ({})", w.family, order_name(order)),
                )?,
            }
            Ok(0)
        }
        Membership::NonMember { trace } => {
            emit(out, "non-member")?;
            if cli.trace {
                for row in trace {
                    emit(
                        out,
                        format_args!(
                            "  {} [{}]: {}",
                            row.family,
                            order_name(row.order),
                            row.outcome
                        ),
                    )?;
                }
            }
            Ok(1)
        }
    }
}

fn order_name(order: smallknot::slope_table::PairOrder) -> &'static str {
    match order {
        smallknot::slope_table::PairOrder::AsGiven => "as given",
        smallknot::slope_table::PairOrder::Swapped => "swapped",
    }
}

fn describe_knot(knot: &KnotDescriptor) -> String {
    match knot {
        KnotDescriptor::TwoBridgeComponent {
            k,
            link,
            filling_slope,
        } => match (link, filling_slope) {
            (Some(link), Some(slope)) => format!(
                "unfilled component of {link} (k = {k}) after a {slope}-filling on the companion"
            ),
            _ => format!("link family index k = {k} (descriptor incomplete: invalid input)"),
        },
        KnotDescriptor::FillingDual {
            link,
            filling_slopes,
        } => format!(
            "dual core of the {}-filling on one component of {link}, companion filled along {}",
            filling_slopes.1, filling_slopes.0
        ),
    }
}

fn print_certificate<O: Write>(
    cli: &Cli,
    cert: &SmallKnotCertificate,
    out: &mut O,
) -> Result<i32, Error> {
    if cli.json {
        emit_json(out, cert)?;
    } else {
        emit(out, format_args!("manifold: {}", cert.manifold))?;
        emit(out, format_args!("knot: {}", describe_knot(&cert.knot)))?;
        emit(out, format_args!("verdict: {}", cert.verdict()))?;
        match cert.verdict() {
            Verdict::Invalid => {
                for reason in cert.failed_hypotheses() {
                    emit(out, format_args!("violated hypothesis: {reason}"))?;
                }
            }
            Verdict::Refuted => {
                for w in cert.refuting_witnesses() {
                    emit(
                        out,
                        format_args!(
                            "refuting slope pair via {} ({})",
                            w.family,
                            order_name(w.order)
                        ),
                    )?;
                }
            }
            Verdict::Certified => {}
        }
        if cli.trace {
            emit(out, "hypotheses:")?;
            for h in &cert.hypotheses {
                emit(out, format_args!("  [{}] {}", mark(h.holds), h.statement))?;
            }
            emit(
                out,
                format_args!("hyperbolicity ({}):", cert.hyperbolicity.method),
            )?;
            for e in &cert.hyperbolicity.evidence {
                emit(out, format_args!("  [{}] {}", mark(e.passed), e.check))?;
            }
            emit(out, "smallness pairs checked:")?;
            for item in &cert.smallness.trace {
                let verdict = if item.report.is_member() {
                    "member (refutation!)"
                } else {
                    "non-member"
                };
                emit(out, format_args!("  {}: {verdict}", item.report.pair))?;
            }
        }
    }
    Ok(match cert.verdict() {
        Verdict::Certified => 0,
        Verdict::Refuted => 1,
        Verdict::Invalid => 2,
    })
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn lens<O: Write>(cli: &Cli, args: &LensArgs, out: &mut O) -> Result<i32, Error> {
    let p = parse_bigint("p", &args.p)?;
    let q = parse_bigint("q", &args.q)?;
    let k = match args.k {
        Some(k) => k,
        // Default to the first admissible index; malformed (p, q) keeps
        // k = 2 so the invalid certificate still records the hypotheses.
        None => match LensSpace::new(p.clone(), q.clone()) {
            Ok(ls) => admissible_k(&ls).next().expect("the iterator is infinite"),
            Err(_) => 2,
        },
    };
    let cert = certify_lens(p, q, k);
    print_certificate(cli, &cert, out)
}

fn spherical<O: Write>(cli: &Cli, a3: i64, b3: i64, out: &mut O) -> Result<i32, Error> {
    let set = exceptional_set(cli)?;
    let cert = certify_spherical_with(a3, b3, &set)?;
    print_certificate(cli, &cert, out)
}

fn sweep<O: Write>(cli: &Cli, config: &PathBuf, out: &mut O) -> Result<i32, Error> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", config.display())))?;
    let config: SweepConfig = toml::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("bad sweep config: {e}")))?;
    let set = exceptional_set(cli)?;
    let report = sweep_verify_with(&config, &set);
    if cli.json {
        emit_json(out, &report)?;
    } else {
        write!(out, "{report}").map_or_else(io_error, Ok)?;
    }
    Ok(if report.ok() { 0 } else { 1 })
}

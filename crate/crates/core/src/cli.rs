//! The `dold-wtriv` command line.
//!
//! Exit codes: 0 success, 2 usage error, 3 inconclusive certificate,
//! 4 inconsistent rules or contradictory fact file.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::classifier::{Classifier, Verdict};
use crate::cohomology::{CohomologyClass, SpaceModel};
use crate::error::Error;
use crate::knowledge::{CitationRegistry, KnowledgeBase};
use crate::obstruction::{self, CandidateReport, Certificate, FilterTag};
use crate::selftest::Suite;
use crate::steenrod::{sq, total_sq};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

const SPACE_HELP: &str = "Space descriptor: D(m,n), RP(m), CP(n) or RP(m/low)";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Markdown,
    JsonLines,
}

#[derive(Debug, Parser)]
#[command(name = "dold-wtriv", version, about = "Steenrod squares on Dold manifolds and W-triviality of their suspensions")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t, global = true)]
    pub format: OutputFormat,

    /// Alternate fact file, checked for contradictions on load.
    #[arg(long, env = "DOLD_WTRIV_FACTS", global = true)]
    pub facts: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply Sq^i (or the total square) to a class such as "d^4 + c^2*d^3".
    Sq {
        #[arg(long, help = SPACE_HELP)]
        space: SpaceModel,
        #[arg(long, required_unless_present = "total")]
        i: Option<u32>,
        #[arg(long)]
        total: bool,
        expr: String,
    },
    /// Show the candidate spaces for the first nonzero Stiefel-Whitney class over Σ^k X.
    Candidates {
        #[arg(long, help = SPACE_HELP)]
        space: SpaceModel,
        #[arg(long)]
        k: u32,
        /// Restrict to one power 2^s.
        #[arg(long)]
        s: Option<u32>,
        #[arg(long = "filter", value_parser = parse_filter)]
        filters: Vec<FilterTag>,
        #[arg(long, conflicts_with = "filters")]
        no_filters: bool,
    },
    /// Try to certify Σ^k X W-trivial (exit 3 when inconclusive).
    Certify {
        #[arg(long, help = SPACE_HELP)]
        space: SpaceModel,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long)]
        no_filters: bool,
    },
    /// Classify Σ^k D(m,n).
    Classify {
        k: u32,
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        n: u32,
    },
    /// Classify every triple of a product of ranges ("a..b" inclusive or "a,b,c").
    Table {
        #[arg(long, value_parser = parse_range)]
        k: Range,
        #[arg(long, value_parser = parse_range)]
        m: Range,
        #[arg(long, value_parser = parse_range)]
        n: Range,
    },
    /// List the triples of a product of ranges that stay unknown.
    Open {
        #[arg(long, value_parser = parse_range, default_value = "0..8")]
        k: Range,
        #[arg(long, value_parser = parse_range, default_value = "1..20")]
        m: Range,
        #[arg(long, value_parser = parse_range, default_value = "1..12")]
        n: Range,
    },
    /// Run the built-in check suites: all, steenrod, oracle, axioms, fixtures, knowledge.
    Selftest {
        #[arg(long, default_value = "all",
              value_parser = ["all", "steenrod", "oracle", "axioms", "fixtures", "knowledge"])]
        suite: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Range(pub Vec<u32>);

/// `a..b` (inclusive), a comma list, or a single value.
pub fn parse_range(s: &str) -> Result<Range, String> {
    let s = s.trim();
    let values: Vec<u32> = if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| format!("bad range start in `{s}`"))?;
        let b: u32 = b.trim().parse().map_err(|_| format!("bad range end in `{s}`"))?;
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| format!("bad value `{x}` in `{s}`")))
            .collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(format!("range `{s}` is empty"));
    }
    Ok(Range(values))
}

fn parse_filter(s: &str) -> Result<FilterTag, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Inconsistent { .. } | Error::ContradictoryFacts { .. } => EXIT_INCONSISTENT,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn load_kb(cli: &Cli) -> Result<KnowledgeBase, Error> {
    match &cli.facts {
        None => Ok(KnowledgeBase::bundled()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            KnowledgeBase::from_fact_text(&text, CitationRegistry::bundled())
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let fmt = cli.format;
    match &cli.command {
        Command::Sq { space, i, total, expr } => {
            let a = CohomologyClass::parse(expr, space)?;
            let b = if *total { total_sq(&a, space) } else { sq(i.expect("required without --total"), &a, space) };
            if fmt == OutputFormat::JsonLines {
                let op = if *total { "Sq".to_string() } else { format!("Sq^{}", i.unwrap_or(0)) };
                let rec = json!({ "space": space.to_string(), "op": op, "input": a.to_string(), "output": b.to_string() });
                writeln!(out, "{rec}").map_err(io)?;
            } else {
                writeln!(out, "{b}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Candidates { space, k, s, filters, no_filters } => {
            let kb = load_kb(cli)?;
            let filters: Vec<FilterTag> = if *no_filters {
                Vec::new()
            } else if filters.is_empty() {
                FilterTag::ALL.to_vec()
            } else {
                filters.clone()
            };
            let powers = match s {
                Some(s) => vec![*s],
                None => obstruction::admissible_powers(space, *k),
            };
            let reports = powers
                .into_iter()
                .map(|s| obstruction::candidate_space(space, *k, s, &filters, &kb))
                .collect::<Result<Vec<_>, _>>()?;
            render_reports(out, fmt, space, *k, &reports).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Certify { space, k, no_filters } => {
            let kb = load_kb(cli)?;
            let filters: &[FilterTag] = if *no_filters { &[] } else { &FilterTag::ALL };
            let cert = obstruction::certify_with_filters(space, *k, filters, &kb);
            render_certificate(out, fmt, &cert).map_err(io)?;
            Ok(if cert.is_certified() { EXIT_OK } else { EXIT_INCONCLUSIVE })
        }
        Command::Classify { k, m, n } => {
            let kb = load_kb(cli)?;
            let v = Classifier::new(&kb).classify(*k, *m, *n)?;
            render_verdicts(out, fmt, &[v]).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Table { k, m, n } | Command::Open { k, m, n } => {
            let kb = load_kb(cli)?;
            if m.0.contains(&0) {
                return Err(Error::InvalidSpace("m must be positive".into()));
            }
            let mut verdicts = Classifier::new(&kb).table(&k.0, &m.0, &n.0)?;
            if matches!(cli.command, Command::Open { .. }) {
                verdicts.retain(|v| v.status == crate::classifier::Status::Unknown);
            }
            render_verdicts(out, fmt, &verdicts).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Selftest { suite } => {
            let kb = load_kb(cli)?;
            let suites = Suite::select(suite).expect("restricted by the value parser");
            let mut ok = true;
            for s in suites {
                let report = s.run(&kb)?;
                writeln!(out, "{report}").map_err(io)?;
                for f in report.failures.iter().take(20) {
                    writeln!(out, "  FAIL {f}").map_err(io)?;
                }
                ok &= report.passed();
            }
            Ok(if ok { EXIT_OK } else { 1 })
        }
    }
}

fn rule_ids(v: &Verdict) -> Vec<String> {
    v.rule_ids().iter().map(ToString::to_string).collect()
}

pub fn render_verdicts(out: &mut dyn Write, fmt: OutputFormat, verdicts: &[Verdict]) -> std::io::Result<()> {
    match fmt {
        OutputFormat::Text => {
            for v in verdicts {
                writeln!(out, "Σ^{} D({},{}): {}", v.k, v.m, v.n, v.status)?;
                for step in &v.trace.steps {
                    writeln!(out, "  {} [{}] {}", step.rule, step.citation_id, step.quote)?;
                    for c in &step.consulted {
                        writeln!(out, "      {c}")?;
                    }
                }
                if let Some(open) = &v.open_family {
                    writeln!(out, "  open family [{}] {}", open.citation_id, open.quote)?;
                }
            }
        }
        OutputFormat::Csv => {
            writeln!(out, "k,m,n,status,rule_ids")?;
            for v in verdicts {
                writeln!(out, "{},{},{},{},{}", v.k, v.m, v.n, v.status, rule_ids(v).join(";"))?;
            }
        }
        OutputFormat::Markdown => {
            writeln!(out, "| k | m | n | status | rules |")?;
            writeln!(out, "|---|---|---|---|---|")?;
            for v in verdicts {
                writeln!(out, "| {} | {} | {} | {} | {} |", v.k, v.m, v.n, v.status, rule_ids(v).join(", "))?;
            }
        }
        OutputFormat::JsonLines => {
            for v in verdicts {
                writeln!(out, "{}", serde_json::to_string(&v.record()).expect("serializable"))?;
            }
        }
    }
    Ok(())
}

fn basis_text(classes: &[CohomologyClass]) -> String {
    if classes.is_empty() {
        "0".to_string()
    } else {
        format!("span{{{}}}", classes.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
    }
}

fn render_reports(
    out: &mut dyn Write,
    fmt: OutputFormat,
    space: &SpaceModel,
    k: u32,
    reports: &[CandidateReport],
) -> std::io::Result<()> {
    match fmt {
        OutputFormat::Text => {
            if reports.is_empty() {
                writeln!(out, "Σ^{k} {space}: no admissible s")?;
            }
            for r in reports {
                writeln!(out, "s={} degree={} (H^{} has dim {})", r.s, r.degree, r.degree, r.raw_kernel.ambient().dim)?;
                writeln!(out, "  raw:      {}", basis_text(&r.raw_classes()))?;
                writeln!(out, "  filtered: {}", basis_text(&r.filtered_classes()))?;
                for f in &r.filters_applied {
                    writeln!(out, "  filter {} [{}] via {}", f.tag, f.citation_id, f.support)?;
                }
            }
        }
        OutputFormat::Csv | OutputFormat::Markdown => {
            let rows: Vec<[String; 6]> = reports
                .iter()
                .map(|r| {
                    [
                        r.s.to_string(),
                        r.degree.to_string(),
                        r.raw_kernel.dim().to_string(),
                        r.after_filters.dim().to_string(),
                        r.raw_classes().iter().map(ToString::to_string).collect::<Vec<_>>().join(";"),
                        r.filtered_classes().iter().map(ToString::to_string).collect::<Vec<_>>().join(";"),
                    ]
                })
                .collect();
            let header = ["s", "degree", "raw_dim", "filtered_dim", "raw_basis", "filtered_basis"];
            if fmt == OutputFormat::Csv {
                writeln!(out, "{}", header.join(","))?;
                for row in rows {
                    writeln!(out, "{}", row.join(","))?;
                }
            } else {
                writeln!(out, "| {} |", header.join(" | "))?;
                writeln!(out, "|{}", "---|".repeat(header.len()))?;
                for row in rows {
                    writeln!(out, "| {} |", row.join(" | "))?;
                }
            }
        }
        OutputFormat::JsonLines => {
            for r in reports {
                writeln!(out, "{}", serde_json::to_string(&r.summary()).expect("serializable"))?;
            }
        }
    }
    Ok(())
}

fn render_certificate(out: &mut dyn Write, fmt: OutputFormat, cert: &Certificate) -> std::io::Result<()> {
    match fmt {
        OutputFormat::JsonLines => writeln!(out, "{}", serde_json::to_string(&cert.summary()).expect("serializable")),
        OutputFormat::Text => {
            let outcome = match (cert.is_certified(), cert.vacuous) {
                (true, true) => "Certified (vacuous)",
                (true, false) => "Certified",
                (false, _) => "Inconclusive",
            };
            writeln!(out, "Σ^{} {}: {outcome}", cert.k, cert.model)?;
            render_reports(out, fmt, &cert.model, cert.k, &cert.reports)
        }
        OutputFormat::Csv | OutputFormat::Markdown => render_reports(out, fmt, &cert.model, cert.k, &cert.reports),
    }
}

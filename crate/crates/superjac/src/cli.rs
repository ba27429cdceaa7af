//! `superjac` subcommands.
//!
//! Exit codes: 0 success, 1 a mathematically meaningful negative (violations
//! or a failed bound), 2 usage errors, 3 I/O or checkpoint state errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use superjac_core::{
    eigenspace_table, enumerate_subgroups, genus_rh, verify_weyl, CurveShape, Error,
};

use crate::report::{
    csv, join, BoundWitness, DimsReport, OutputRecord, SubgroupEntry, SubgroupsReport, WeylPayload,
};
use crate::scan::{scan, timed_certify, ScanConfig, ScanError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_STATE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "superjac",
    version,
    about = "Eigenspace dimensions of superelliptic Jacobians and small-index subgroup certification"
)]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct OutputArgs {
    /// Emit a single JSON object with sorted keys
    #[arg(long, global = true)]
    pub json: bool,
    /// Emit CSV with a header row
    #[arg(long, global = true, conflicts_with = "json")]
    pub csv: bool,
    /// Leave wall-clock fields out of the output
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Table of dim V_j for y^d = f(x) with the given branch data
    Dims {
        /// Degree of f
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Largest e with f = f_0^e
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        e: u64,
        /// Root multiplicities of f_0, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
    },
    /// Check every coset of every subgroup of index <= 2g against (0, d/n)
    Certify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        g: u64,
    },
    /// Certify every d in a range and report the bad ones
    Scan {
        #[arg(long = "from", value_parser = clap::value_parser!(u64).range(1..))]
        from: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        to: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        g: u64,
        /// Worker threads (defaults to the available parallelism)
        #[arg(long, env = "SUPERJAC_JOBS", value_parser = clap::value_parser!(u64).range(1..))]
        jobs: Option<u64>,
        /// Resume file, created or updated after every round of chunks
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// List the subgroups of (Z/dZ)^x of index <= max-index
    Subgroups {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d: u64,
        #[arg(long = "max-index", value_parser = clap::value_parser!(u64).range(1..))]
        max_index: u64,
    },
    /// Compare normalized subgroup exponential sums with the Gauss-sum bound
    Weyl {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        g: u64,
        #[arg(long = "a-max", value_parser = clap::value_parser!(u64).range(1..))]
        a_max: u64,
    },
}

/// What a command printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: u8, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: u8, message: impl std::fmt::Display) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

enum Format {
    Text,
    Json,
    Csv,
}

impl OutputArgs {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Text
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    let out = cli.output;
    match cli.command {
        Command::Dims { n, e, exponents, d } => cmd_dims(out, n, e, exponents, d),
        Command::Certify { d, n, g } => cmd_certify(out, d, n, g),
        Command::Scan {
            from,
            to,
            n,
            g,
            jobs,
            checkpoint,
        } => {
            let jobs = jobs.map(|j| j as usize).unwrap_or_else(default_jobs);
            cmd_scan(out, from, to, n, g, jobs, checkpoint)
        }
        Command::Subgroups { d, max_index } => cmd_subgroups(out, d, max_index),
        Command::Weyl { d, g, a_max } => cmd_weyl(out, d, g, a_max),
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Serialize)]
struct DimsInputs<'a> {
    n: u64,
    e: u64,
    exponents: &'a [u64],
    d: u64,
}

pub fn cmd_dims(out: OutputArgs, n: u64, e: u64, exponents: Vec<u64>, d: u64) -> Outcome {
    let inputs = DimsInputs {
        n,
        e,
        exponents: &exponents,
        d,
    };
    let inputs = serde_json::to_value(inputs).expect("inputs serialize");
    let shape = match CurveShape::new(n, e, exponents) {
        Ok(shape) => shape,
        Err(err) => return Outcome::fail(EXIT_USAGE, err),
    };
    let table = match eigenspace_table(&shape, d) {
        Ok(table) => table,
        Err(err) => return Outcome::fail(EXIT_USAGE, err),
    };
    let genus = genus_rh(&shape, d).expect("irreducibility already checked");
    let report = DimsReport::new(&table, genus);
    let stdout = match out.format() {
        Format::Json => OutputRecord::new("dims", inputs, &report).to_json(),
        Format::Csv => csv(
            &["j", "dim", "new"],
            report.dims.iter().map(|(&j, &v)| {
                [
                    j.to_string(),
                    v.to_string(),
                    u8::from(table.is_new(j)).to_string(),
                ]
            }),
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "y^{d} = f(x), n={} e={} exponents=[{}]",
                shape.n(),
                shape.e(),
                join(shape.exponents())
            );
            let _ = writeln!(s, "{:>6} {:>6}  new", "j", "dim");
            for (&j, &v) in &report.dims {
                let mark = if table.is_new(j) { "*" } else { "" };
                let _ = writeln!(s, "{j:>6} {v:>6}  {mark}");
            }
            let _ = writeln!(s, "new part dimension: {}", report.new_part_dimension);
            let _ = writeln!(s, "genus: {}", report.genus);
            s
        }
    };
    Outcome::ok(EXIT_OK, stdout)
}

#[derive(Serialize)]
struct CertifyInputs {
    d: u64,
    n: u64,
    g: u64,
}

pub fn cmd_certify(out: OutputArgs, d: u64, n: u64, g: u64) -> Outcome {
    if d <= n {
        return Outcome::fail(EXIT_USAGE, format!("certify needs d > n (d={d}, n={n})"));
    }
    let mut report = timed_certify(d, n, g);
    if out.no_timing {
        report.elapsed = Default::default();
    }
    let code = if report.is_good() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    let stdout = match out.format() {
        Format::Json => {
            let record = OutputRecord::new("certify", CertifyInputs { d, n, g }, &report);
            if out.no_timing {
                record.strip_keys(&["elapsed"])
            } else {
                record
            }
            .to_json()
        }
        Format::Csv => csv(
            &[
                "d",
                "subgroup_index",
                "subgroup_generators",
                "coset_representative",
                "interval_bound",
            ],
            report.violations.iter().map(|v| {
                [
                    v.d.to_string(),
                    v.subgroup_index.to_string(),
                    join(&v.subgroup_generators),
                    v.coset_representative.to_string(),
                    v.interval_bound.to_string(),
                ]
            }),
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "d={d} n={n} g={g}: {} subgroups of index <= {} checked, interval (0, {})",
                report.subgroups_checked,
                2 * g,
                superjac_core::Rational::new(d as i64, n as i64)
            );
            if report.is_good() {
                let _ = writeln!(s, "good");
            } else {
                let _ = writeln!(s, "{} violation(s)", report.violations.len());
                for v in &report.violations {
                    let _ = writeln!(
                        s,
                        "  index {} subgroup <{}>: coset of {} misses the interval",
                        v.subgroup_index,
                        join(&v.subgroup_generators),
                        v.coset_representative
                    );
                }
            }
            if !out.no_timing {
                let _ = writeln!(s, "elapsed: {:?}", report.elapsed);
            }
            s
        }
    };
    Outcome::ok(code, stdout)
}

#[derive(Serialize)]
struct ScanInputs {
    from: u64,
    to: u64,
    n: u64,
    g: u64,
}

pub fn cmd_scan(
    out: OutputArgs,
    from: u64,
    to: u64,
    n: u64,
    g: u64,
    jobs: usize,
    checkpoint: Option<PathBuf>,
) -> Outcome {
    let mut config = ScanConfig::new(from, to, n, g).workers(jobs);
    if let Some(path) = checkpoint {
        config = config.checkpoint(path);
    }
    let summary = match scan(&config) {
        Ok(summary) => summary,
        Err(err @ (ScanError::InvalidRange { .. } | ScanError::InvalidParameters(_))) => {
            return Outcome::fail(EXIT_USAGE, err)
        }
        Err(err) => return Outcome::fail(EXIT_STATE, err),
    };
    let summary = if out.no_timing {
        summary.without_timing()
    } else {
        summary
    };
    let stdout = match out.format() {
        Format::Json => {
            OutputRecord::new("scan", ScanInputs { from, to, n, g }, &summary).to_json()
        }
        Format::Csv => csv(
            &["d", "bad", "violation_count"],
            summary.rows().map(|(d, bad, count)| {
                [d.to_string(), u8::from(bad).to_string(), count.to_string()]
            }),
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "scan n={n} g={g} d in [{from}, {to}]");
            let listed = if summary.bad_d.is_empty() {
                "none".to_string()
            } else {
                join(&summary.bad_d)
            };
            let _ = writeln!(s, "bad d ({}): {listed}", summary.bad_d.len());
            match summary.max_bad_d {
                Some(max) => {
                    let _ = writeln!(s, "max bad d: {max}");
                }
                None => {
                    let _ = writeln!(s, "max bad d: none");
                }
            }
            if let Some(t) = &summary.timing {
                let _ = writeln!(
                    s,
                    "timing: {} moduli, mean {:?}, max {:?} at d={}, wall {:?}",
                    t.certified, t.mean, t.max, t.slowest_d, t.wall
                );
            }
            s
        }
    };
    Outcome::ok(EXIT_OK, stdout)
}

#[derive(Serialize)]
struct SubgroupsInputs {
    d: u64,
    max_index: u64,
}

pub fn cmd_subgroups(out: OutputArgs, d: u64, max_index: u64) -> Outcome {
    let subgroups = enumerate_subgroups(d, max_index);
    let report = SubgroupsReport {
        d,
        max_index,
        subgroups: subgroups.iter().map(SubgroupEntry::new).collect(),
    };
    let stdout = match out.format() {
        Format::Json => {
            OutputRecord::new("subgroups", SubgroupsInputs { d, max_index }, &report).to_json()
        }
        Format::Csv => csv(
            &["index", "order", "generators", "elements"],
            report.subgroups.iter().map(|h| {
                [
                    h.index.to_string(),
                    h.order.to_string(),
                    join(&h.generators),
                    h.elements.as_deref().map(join).unwrap_or_default(),
                ]
            }),
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{} subgroup(s) of (Z/{d}Z)^x with index <= {max_index}",
                report.subgroups.len()
            );
            for h in &report.subgroups {
                let elements = match &h.elements {
                    Some(e) => format!(
                        "{{{}}}",
                        e.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                    ),
                    None => "(elided)".to_owned(),
                };
                let _ = writeln!(
                    s,
                    "  index {} order {} generators <{}> elements {}",
                    h.index,
                    h.order,
                    join(&h.generators),
                    elements
                );
            }
            s
        }
    };
    Outcome::ok(EXIT_OK, stdout)
}

#[derive(Serialize)]
struct WeylInputs {
    d: u64,
    g: u64,
    a_max: u64,
}

pub fn cmd_weyl(out: OutputArgs, d: u64, g: u64, a_max: u64) -> Outcome {
    let payload = match verify_weyl(d, g, a_max) {
        Ok(report) => WeylPayload {
            passed: true,
            report: Some(report),
            violation: None,
        },
        Err(Error::BoundViolation {
            d,
            generators,
            a,
            magnitude,
            bound,
        }) => WeylPayload {
            passed: false,
            report: None,
            violation: Some(BoundWitness {
                d,
                subgroup_generators: generators,
                a,
                magnitude,
                bound,
            }),
        },
        Err(err) => return Outcome::fail(EXIT_USAGE, err),
    };
    let code = if payload.passed {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    let stdout = match out.format() {
        Format::Json => OutputRecord::new("weyl", WeylInputs { d, g, a_max }, &payload).to_json(),
        Format::Csv => {
            let rows = payload.report.iter().flat_map(|r| &r.rows);
            csv(
                &[
                    "subgroup_index",
                    "subgroup_generators",
                    "a",
                    "magnitude",
                    "bound",
                ],
                rows.map(|r| {
                    [
                        r.subgroup_index.to_string(),
                        join(&r.subgroup_generators),
                        r.a.to_string(),
                        r.magnitude.to_string(),
                        r.bound.to_string(),
                    ]
                }),
            )
        }
        Format::Text => {
            let mut s = String::new();
            match (&payload.report, &payload.violation) {
                (Some(report), _) => {
                    let _ = writeln!(
                        s,
                        "{:>5} {:>16} {:>3} {:>12} {:>12}",
                        "index", "generators", "a", "|sum|", "bound"
                    );
                    for r in &report.rows {
                        let _ = writeln!(
                            s,
                            "{:>5} {:>16} {:>3} {:>12.9} {:>12.9}",
                            r.subgroup_index,
                            join(&r.subgroup_generators),
                            r.a,
                            r.magnitude,
                            r.bound
                        );
                    }
                    let _ = writeln!(s, "pass, worst ratio {:.9}", report.worst_ratio);
                }
                (None, Some(w)) => {
                    let _ = writeln!(
                        s,
                        "FAIL at d={} subgroup <{}> a={}: |sum|={} > bound {}",
                        w.d,
                        join(&w.subgroup_generators),
                        w.a,
                        w.magnitude,
                        w.bound
                    );
                }
                (None, None) => unreachable!("payload carries a report or a witness"),
            }
            s
        }
    };
    Outcome::ok(code, stdout)
}

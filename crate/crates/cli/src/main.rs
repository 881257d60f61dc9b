//! Command-line front end: encode, solve, propagate, gen, verify.
//!
//! Exit status is 0 on success (an unsatisfiable instance is a success),
//! 1 when a verified claim fails and 2 on usage, input or parse errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use satcsp::csp::{self, ac3, fc_solve, gac, mac_solve, parse_csp, write_csp, Csp, CspBranchPlan, DomainState};
use satcsp::encoding::{Amo, Encoding};
use satcsp::harness::{emit_report, verify, ClaimId, ReportFormat, SuiteSpec};
use satcsp::oracle::{gen_random, GenSpec, Instance};
use satcsp::sat::{dp_solve, parse_dimacs, unit_propagate, write_dimacs, Assignment, BranchPlan, Cnf};
use satcsp::{csp2sat, sat2csp};

/// `println!` that ignores a closed stdout, so piping into `head` is quiet.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "satcsp", version, about = "SAT and CSP encodings, propagation and search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate an instance between SAT and CSP.
    Encode {
        #[arg(long, value_enum)]
        from: Kind,
        #[arg(long, value_enum)]
        to: Kind,
        #[arg(long, value_enum)]
        encoding: EncodingArg,
        #[arg(long, value_enum, default_value = "none")]
        amo: AmoArg,
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Where to write the encoding map (default: OUTPUT.map.json).
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Solve a DIMACS or CSP file and print status and search statistics.
    Solve {
        #[arg(long, value_enum)]
        solver: SolverArg,
        #[arg(long, value_enum, default_value = "static")]
        order: OrderArg,
        input: PathBuf,
    },
    /// Run one propagation pass from the empty assignment.
    Propagate {
        #[arg(long, value_enum)]
        method: MethodArg,
        input: PathBuf,
    },
    /// Generate a seeded random instance.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: Option<usize>,
        #[arg(long)]
        width: Option<usize>,
        #[arg(long)]
        constraints: Option<usize>,
        #[arg(long)]
        domain: Option<usize>,
        #[arg(long)]
        tightness: Option<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Verify claims over a suite and write a report.
    Verify {
        /// Comma-separated claim ids, or `all`.
        #[arg(long, default_value = "all")]
        claims: String,
        #[arg(long, value_enum, default_value = "exhaustive")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 3)]
        max_vars: usize,
        #[arg(long, default_value_t = 4)]
        max_clauses: usize,
        #[arg(long, default_value_t = 3)]
        max_width: usize,
        #[arg(long, default_value_t = 3)]
        max_domain: usize,
        /// Random suite: number of instances of each kind.
        #[arg(long, default_value_t = 1000)]
        count: u64,
        /// Random suite: seed of the first instance.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "none")]
        amo: AmoArg,
        #[arg(long)]
        report: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Sat,
    Csp,
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodingArg {
    Dual,
    Hidden,
    Literal,
    Nonbinary,
    Direct,
    Log,
    Support,
}

impl From<EncodingArg> for Encoding {
    fn from(e: EncodingArg) -> Encoding {
        match e {
            EncodingArg::Dual => Encoding::Dual,
            EncodingArg::Hidden => Encoding::Hidden,
            EncodingArg::Literal => Encoding::Literal,
            EncodingArg::Nonbinary => Encoding::NonBinary,
            EncodingArg::Direct => Encoding::Direct,
            EncodingArg::Log => Encoding::Log,
            EncodingArg::Support => Encoding::Support,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AmoArg {
    None,
    Pairwise,
}

impl From<AmoArg> for Amo {
    fn from(a: AmoArg) -> Amo {
        match a {
            AmoArg::None => Amo::None,
            AmoArg::Pairwise => Amo::Pairwise,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Dp,
    Fc,
    Mac,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Static,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Up,
    Ac3,
    Gac,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Ksat,
    Bincsp,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Structured,
}

/// A failure with the exit status it maps to.
struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

impl From<satcsp::Error> for Failure {
    fn from(e: satcsp::Error) -> Failure {
        usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

enum Input {
    Sat(Cnf),
    Csp(Csp),
}

/// CSP files are JSON objects; anything else is read as DIMACS.
fn load(path: &Path) -> Result<Input, Failure> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        Ok(Input::Csp(parse_csp(&text)?))
    } else {
        Ok(Input::Sat(parse_dimacs(&text)?))
    }
}

fn load_sat(path: &Path) -> Result<Cnf, Failure> {
    match load(path)? {
        Input::Sat(f) => Ok(f),
        Input::Csp(_) => Err(usage(format!("{}: expected a DIMACS CNF file", path.display()))),
    }
}

fn load_csp(path: &Path) -> Result<Csp, Failure> {
    match load(path)? {
        Input::Csp(p) => Ok(p),
        Input::Sat(_) => Err(usage(format!("{}: expected a CSP file", path.display()))),
    }
}

fn show_model(a: &Assignment) -> String {
    a.iter()
        .map(|(v, b)| if b { v.to_string() } else { format!("-{v}") })
        .collect::<Vec<_>>()
        .join(" ")
}

fn show_values(p: &Csp, values: impl IntoIterator<Item = (usize, usize)>) -> String {
    values
        .into_iter()
        .map(|(v, a)| format!("{v}={}", p.variables()[v].domain[a]))
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Encode {
            from,
            to,
            encoding,
            amo,
            input,
            output,
            map,
        } => {
            let encoding = Encoding::from(encoding);
            let (text, m) = match (from, to) {
                (Kind::Sat, Kind::Csp) => {
                    let (p, m) = sat2csp::encode(&load_sat(&input)?, encoding)?;
                    (write_csp(&p), m)
                }
                (Kind::Csp, Kind::Sat) => {
                    let (f, m) = csp2sat::encode(&load_csp(&input)?, encoding, amo.into())?;
                    (write_dimacs(&f), m)
                }
                _ => return Err(usage("--from and --to must differ")),
            };
            write(&output, &text)?;
            let map_path = map.unwrap_or_else(|| {
                let mut s = output.clone().into_os_string();
                s.push(".map.json");
                PathBuf::from(s)
            });
            write(&map_path, &m.to_json())?;
        }
        Command::Solve { solver, order, input } => {
            let OrderArg::Static = order;
            match solver {
                SolverArg::Dp => {
                    let f = load_sat(&input)?;
                    let s = dp_solve(&f, &BranchPlan::ascending(f.num_vars()));
                    say!("status: {}", s.status.as_str());
                    say!("decisions_total: {}", s.decisions_total);
                    say!("decisions_positive: {}", s.decisions_positive);
                    say!("decisions_negative: {}", s.decisions_negative);
                    say!("nodes: {}", s.nodes);
                    say!("failed_leaves: {}", s.failed_leaves);
                    say!("propagations: {}", s.propagations);
                    if let Some(m) = &s.model {
                        say!("model: {}", show_model(m));
                    }
                }
                SolverArg::Fc | SolverArg::Mac => {
                    let p = load_csp(&input)?;
                    let plan = CspBranchPlan::static_order(&p);
                    let s = match solver {
                        SolverArg::Fc => fc_solve(&p, &plan)?,
                        _ => mac_solve(&p, &plan)?,
                    };
                    say!("status: {}", s.status.as_str());
                    say!("branches: {}", s.branches);
                    say!("nodes: {}", s.nodes);
                    say!("failed_leaves: {}", s.failed_leaves);
                    say!("revisions: {}", s.revisions);
                    if let Some(sol) = &s.solution {
                        say!("solution: {}", show_values(&p, sol.iter().copied().enumerate()));
                    }
                }
            }
        }
        Command::Propagate { method, input } => match method {
            MethodArg::Up => {
                let f = load_sat(&input)?;
                let r = unit_propagate(&f, &Assignment::new(f.num_vars()));
                say!("conflict: {}", r.conflict);
                say!("forced_count: {}", r.forced_count());
                say!(
                    "forced: {}",
                    r.forced.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
                );
            }
            MethodArg::Ac3 | MethodArg::Gac => {
                let p = load_csp(&input)?;
                let full = DomainState::full(&p);
                let r = match method {
                    MethodArg::Ac3 => ac3(&p, &full)?,
                    _ => gac(&p, &full),
                };
                say!("wipeout: {}", r.wipeout);
                say!("revisions: {}", r.revisions);
                say!("pruned: {}", show_values(&p, r.pruned.iter().copied()));
                for v in 0..p.num_vars() {
                    let live: Vec<&str> = r.state.values(v).map(|a| p.variables()[v].domain[a].as_str()).collect();
                    say!("domain {v}: {}", live.join(" "));
                }
            }
        },
        Command::Gen {
            kind,
            vars,
            clauses,
            width,
            constraints,
            domain,
            tightness,
            seed,
            output,
        } => {
            let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| usage(format!("--{flag} is required")));
            let spec = match kind {
                GenKind::Ksat => GenSpec::Ksat {
                    vars: u32::try_from(vars).map_err(|_| usage("--vars is too large"))?,
                    clauses: need(clauses, "clauses")?,
                    width: need(width, "width")?,
                    seed,
                },
                GenKind::Bincsp => GenSpec::BinaryCsp {
                    vars,
                    constraints: need(constraints, "constraints")?,
                    domain: need(domain, "domain")?,
                    tightness: tightness.ok_or_else(|| usage("--tightness is required"))?,
                    seed,
                },
            };
            let text = match gen_random(&spec)? {
                Instance::Sat(f) => write_dimacs(&f),
                Instance::Csp(p) => csp::write_csp(&p),
            };
            write(&output, &text)?;
        }
        Command::Verify {
            claims,
            suite,
            max_vars,
            max_clauses,
            max_width,
            max_domain,
            count,
            seed,
            amo,
            report,
            format,
        } => {
            let ids = ClaimId::parse_selection(&claims)?;
            let suite = match suite {
                SuiteArg::Exhaustive => SuiteSpec::Exhaustive {
                    max_vars,
                    max_clauses,
                    max_width,
                    max_domain,
                },
                SuiteArg::Random => SuiteSpec::random_default(count, seed),
            };
            let run = verify(&ids, &suite, amo.into())?;
            let format = match format {
                FormatArg::Csv => ReportFormat::Csv,
                FormatArg::Structured => ReportFormat::Structured,
            };
            write(&report, &emit_report(&run, format)?)?;
            if let Some(c) = &run.calibration {
                let how = if c.zero_violations { "zero violations" } else { "no candidate reached zero violations" };
                say!("convention: {} ({how})", c.selected_name);
            }
            for r in &run.reports {
                say!(
                    "{} {} instances={} skipped={} violations={} strict={} incomparable={}",
                    r.claim.id,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.instances,
                    r.skipped,
                    r.violations,
                    r.strict_witnesses,
                    r.incomparability_witnesses()
                );
            }
            if !run.all_pass() {
                return Err(Failure {
                    code: 1,
                    msg: "some claims failed".into(),
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use tanglegram::antichain::Verdict;
use tanglegram::census::MAX_CENSUS_SIZE;
use tanglegram::layout::{optimal_layout, planar_layout};
use tanglegram::{
    census, crossing_number, emitters, families, find_induced_subset, parse_tanglegrams,
    planarity_tests, rho_layout, verify_antichain, verify_chain, DrawingSpec, Error, FamilyIndex,
    PairFilter, Permutation, Tanglegram, DEFAULT_CAP,
};

/// Tanglegrams, catergrams and the induced subtanglegram order.
#[derive(Parser)]
#[command(name = "tanglegram", version)]
struct Cli {
    /// Output format for results.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Print member <i> of a permutation family (rho or pi).
    Gen { family: String, i: usize },
    /// Check antichain or chain behaviour on a finite prefix of a family.
    #[command(subcommand)]
    Verify(Verify),
    /// Decide planarity of every tanglegram in a file.
    Planar {
        file: PathBuf,
        #[arg(long, default_value = "kuratowski")]
        method: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Tangle crossing number of every tanglegram in a file.
    CrossingNumber {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Draw a planar layout if there is one, otherwise a crossing-minimal one.
    Layout {
        #[arg(required_unless_present = "rho", conflicts_with = "rho")]
        file: Option<PathBuf>,
        /// Use the closed-form planar layout of the catergram of rho_i.
        #[arg(long)]
        rho: Option<usize>,
        #[arg(long, default_value = "svg")]
        emit: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        drawing: DrawingArgs,
    },
    /// Find the least occurrence of pattern --rho in --pi, as 1-based positions.
    Pattern {
        #[arg(long)]
        pi: String,
        #[arg(long)]
        rho: String,
    },
    /// Decide whether the first tanglegram of <sub> is induced in that of <sup>.
    Induced { sub: PathBuf, sup: PathBuf },
    /// Count tanglegrams of one size up to equality, by crossing number.
    Census {
        #[arg(long)]
        size: usize,
    },
}

#[derive(Subcommand)]
enum Verify {
    Antichain {
        #[arg(long)]
        max: usize,
        #[arg(long)]
        adjacent_only: bool,
        /// Per-check time limit.
        #[arg(long)]
        timeout_secs: Option<f64>,
        #[arg(long, default_value = "rho")]
        family: String,
    },
    Chain {
        #[arg(long)]
        max: usize,
        #[arg(long, default_value = "pi")]
        family: String,
    },
}

#[derive(Args)]
struct DrawingArgs {
    #[arg(long)]
    unit: Option<f64>,
    #[arg(long)]
    gutter: Option<f64>,
}

impl DrawingArgs {
    fn spec(&self) -> DrawingSpec {
        let mut spec = DrawingSpec::default();
        if let Some(unit) = self.unit {
            spec.unit = unit;
        }
        if let Some(gutter) = self.gutter {
            spec.gutter = gutter;
        }
        spec
    }
}

enum Outcome {
    Pass,
    Fail,
    OverBudget,
}

enum Failure {
    Core(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

struct Out {
    format: Format,
    sink: io::StdoutLock<'static>,
}

impl Out {
    fn emit(&mut self, text: impl AsRef<str>, value: serde_json::Value) {
        let line = match self.format {
            Format::Text => text.as_ref().to_string(),
            Format::Jsonl => value.to_string(),
        };
        let _ = writeln!(self.sink, "{line}");
    }

    fn raw(&mut self, text: &str) {
        let _ = self.sink.write_all(text.as_bytes());
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_tanglegrams(path: &Path) -> Result<Vec<Tanglegram>, Failure> {
    let all = parse_tanglegrams(&read_input(path)?)?;
    if all.is_empty() {
        return Err(Failure::Input(format!(
            "{}: no tanglegrams",
            path.display()
        )));
    }
    Ok(all)
}

fn index(i: usize) -> Result<FamilyIndex, Failure> {
    Ok(FamilyIndex::new(i)?)
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn run(cli: Cli, out: &mut Out) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Gen { family, i } => {
            let reg = families();
            let perm = reg.get(&family)?.member(index(i)?);
            out.emit(
                perm.to_string(),
                json!({ "family": family, "i": i, "permutation": perm.entries() }),
            );
            Ok(Outcome::Pass)
        }
        Command::Verify(Verify::Antichain {
            max,
            adjacent_only,
            timeout_secs,
            family,
        }) => {
            let reg = families();
            let filter = if adjacent_only {
                PairFilter::AdjacentOnly
            } else {
                PairFilter::AllPairs
            };
            let timeout = match timeout_secs {
                Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
                Some(s) => {
                    return Err(Failure::Input(format!(
                        "--timeout-secs must be positive, got {s}"
                    )))
                }
                None => None,
            };
            let report = verify_antichain(reg.get(&family)?, max, filter, timeout)?;
            for r in &report.records {
                out.emit(r.text_line(), json!({ "record": "pair", "data": r }));
            }
            out.emit(
                report.summary_line(),
                json!({
                    "record": "summary",
                    "kind": "antichain",
                    "family": family,
                    "max": max,
                    "filter": report.filter,
                    "checks": report.records.len(),
                    "result": report.verdict(),
                }),
            );
            Ok(match report.verdict() {
                Verdict::Pass => Outcome::Pass,
                Verdict::Fail => Outcome::Fail,
                Verdict::Timeout => Outcome::OverBudget,
            })
        }
        Command::Verify(Verify::Chain { max, family }) => {
            let reg = families();
            let report = verify_chain(reg.get(&family)?, max)?;
            for r in &report.records {
                out.emit(r.text_line(), json!({ "record": "step", "data": r }));
            }
            out.emit(
                report.summary_line(),
                json!({
                    "record": "summary",
                    "kind": "chain",
                    "family": family,
                    "max": max,
                    "result": if report.passed() { "pass" } else { "fail" },
                }),
            );
            Ok(verdict(report.passed()))
        }
        Command::Planar { file, method, cap } => {
            let reg = planarity_tests(cap);
            let test = reg.get(&method)?;
            let mut all_planar = true;
            for (k, t) in read_tanglegrams(&file)?.iter().enumerate() {
                let planar = test.is_planar(t)?;
                all_planar &= planar;
                out.emit(
                    format!("index={} size={} planar={planar}", k + 1, t.size()),
                    json!({ "index": k + 1, "size": t.size(), "method": method, "planar": planar }),
                );
            }
            Ok(verdict(all_planar))
        }
        Command::CrossingNumber { file, cap } => {
            for (k, t) in read_tanglegrams(&file)?.iter().enumerate() {
                let best = crossing_number(t, cap)?;
                out.emit(
                    format!(
                        "index={} size={} crossing_number={} left_mask={} right_mask={}",
                        k + 1,
                        t.size(),
                        best.crossings,
                        best.left_mask,
                        best.right_mask
                    ),
                    json!({
                        "index": k + 1,
                        "size": t.size(),
                        "crossing_number": best.crossings,
                        "left_mask": best.left_mask,
                        "right_mask": best.right_mask,
                    }),
                );
            }
            Ok(Outcome::Pass)
        }
        Command::Layout {
            file,
            rho,
            emit,
            cap,
            drawing,
        } => {
            let reg = emitters();
            let emitter = reg.get(&emit)?;
            let layout = match (rho, file) {
                (Some(i), _) => rho_layout(index(i)?),
                (None, Some(file)) => {
                    let t = read_tanglegrams(&file)?.swap_remove(0);
                    match planar_layout(&t, cap)? {
                        Some(l) => l,
                        None => optimal_layout(&t, cap)?,
                    }
                }
                (None, None) => {
                    return Err(Failure::Input("give a tanglegram file or --rho".into()))
                }
            };
            out.raw(&emitter.emit(&layout, &drawing.spec())?);
            Ok(Outcome::Pass)
        }
        Command::Pattern { pi, rho } => {
            let pi = Permutation::parse_sequence(&pi)?;
            let sigma = Permutation::parse_sequence(&rho)?;
            match pi.contains_pattern(&sigma) {
                Some(w) => {
                    let shown: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                    out.emit(
                        format!("positions=({})", shown.join(",")),
                        json!({ "found": true, "positions": w }),
                    );
                    Ok(Outcome::Pass)
                }
                None => {
                    out.emit("none", json!({ "found": false }));
                    Ok(Outcome::Fail)
                }
            }
        }
        Command::Induced { sub, sup } => {
            let sub = read_tanglegrams(&sub)?.swap_remove(0);
            let sup = read_tanglegrams(&sup)?.swap_remove(0);
            match find_induced_subset(&sub, &sup) {
                Some(edges) => {
                    let matching = sup.matching();
                    let shown: Vec<String> = edges
                        .iter()
                        .map(|&e| format!("{}:{}", matching[e].0, matching[e].1))
                        .collect();
                    out.emit(
                        format!("true edges={}", shown.join(",")),
                        json!({ "induced": true, "edges": shown }),
                    );
                    Ok(Outcome::Pass)
                }
                None => {
                    out.emit("false", json!({ "induced": false }));
                    Ok(Outcome::Fail)
                }
            }
        }
        Command::Census { size } => {
            if size == 0 || size > MAX_CENSUS_SIZE {
                return Err(Failure::Input(format!(
                    "--size must be between 1 and {MAX_CENSUS_SIZE}"
                )));
            }
            let c = census(size)?;
            match out.format {
                Format::Text => {
                    for line in c.text_lines() {
                        out.emit(line, json!(null));
                    }
                }
                Format::Jsonl => out.emit(
                    "",
                    json!({ "size": c.size, "tanglegrams": c.total, "by_crossing_number": c.by_crossing_number }),
                ),
            }
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = Out {
        format: cli.format,
        sink: io::stdout().lock(),
    };
    let code = match run(cli, &mut out) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Ok(Outcome::OverBudget) => 3,
        Err(Failure::Core(Error::BudgetExceeded { size, cap })) => {
            eprintln!(
                "error: size {size} exceeds the exhaustive-search cap {cap}; raise it with --cap"
            );
            3
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            2
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    };
    let _ = out.sink.flush();
    ExitCode::from(code)
}

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crlab::discharging::{audit_charges, init_charges, run_discharging, RuleVariant};
use crlab::graph6::{parse_lines, write_graph6};
use crlab::hom::{find_hom, TargetSpec, DEFAULT_BUDGET};
use crlab::kneser::{attempt_embedding, kneser_graph, KneserParams, PatternScope, DEFAULT_VERTEX_CAP};
use crlab::pipeline::{run_experiment, run_pipeline, PipelineConfig, DEFAULT_BASE_SIZE};
use crlab::reductions::collapse_path;
use crlab::{classify, mad, odd_girth, Error, Graph};

#[derive(Parser)]
#[command(name = "crlab", version, about = "Kneser colorings, graph parameters and audited reductions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Input {
    /// graph6 file, one graph per line; `-` reads stdin
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(clap::Args)]
struct Level {
    /// Conjecture level: target K(2k+1, k)
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Thread threshold L, default 3(2k+3)
    #[arg(long)]
    l: Option<usize>,
}

impl Level {
    fn l(&self) -> usize {
        self.l.unwrap_or(3 * (2 * self.k + 3))
    }
}

#[derive(clap::Args)]
struct PipelineArgs {
    #[command(flatten)]
    level: Level,
    /// Search node budget, e.g. 1e7
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = parse_budget)]
    budget: u64,
    #[arg(long)]
    max_steps: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BASE_SIZE)]
    base_size: usize,
    /// R1 only feeds degree-2 neighbors
    #[arg(long)]
    r1_degree_two_only: bool,
}

impl PipelineArgs {
    fn config(&self) -> PipelineConfig {
        let mut cfg = PipelineConfig::new(self.level.k);
        cfg.l = self.level.l();
        cfg.node_budget = self.budget;
        cfg.base_size = self.base_size;
        if let Some(s) = self.max_steps {
            cfg.max_reduction_steps = s;
        }
        if self.r1_degree_two_only {
            cfg.rule_variant = RuleVariant::degree_two_only();
        }
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Maximum average degree, one `p/q` per graph
    Mad(Input),
    /// Odd girth, one per graph (`inf` if bipartite)
    Oddgirth(Input),
    /// Class A-D with the long-path witness, JSON per graph
    Classify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        level: Level,
    },
    /// Homomorphism search, JSON outcome per graph
    Hom {
        #[command(flatten)]
        input: Input,
        /// `kneser:n,k` or `graph6:<string>`
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = parse_budget)]
        budget: u64,
    },
    /// Reduce, color and lift; JSON report per graph. Exit 1 on any claim violation
    Pipeline {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        args: PipelineArgs,
    },
    /// Pipeline over random constrained graphs, CSV on stdout
    Experiment {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write 0 in the millis column for byte-reproducible output
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        args: PipelineArgs,
    },
    /// Pattern-map search K(2j+1, j) -> K(2k+3, k+1), JSON certificate
    AuditEmbedding {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = parse_budget)]
        budget: u64,
        /// Draw patterns from outside X instead of outside T
        #[arg(long)]
        relaxed: bool,
    },
    /// Collapse an induced path and audit the result, JSON step
    AuditCollapse {
        /// graph6 input (first graph used); default is the cycle from --cycle
        #[arg(long = "in", value_name = "FILE", conflicts_with = "cycle")]
        input: Option<PathBuf>,
        /// Use the cycle C_m
        #[arg(long, value_name = "M")]
        cycle: Option<usize>,
        /// Comma-separated path; default 0,1,..,length on the cycle
        #[arg(long)]
        path: Option<String>,
        #[arg(long)]
        length: Option<usize>,
        /// Reduction index: odd girth is audited against 2k+3
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Run the discharging rules; JSON audit per graph, or the transfer log as CSV
    Discharge {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        r1_degree_two_only: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Kneser graph summary, or its graph6 encoding
    Kneser {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        graph6: bool,
    },
}

fn parse_budget(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => Ok(v as u64),
        _ => Err(format!("{s:?} is not a non-negative integer budget")),
    }
}

fn read_graphs(path: &PathBuf) -> Result<Vec<Graph>, Error> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Error::InvalidArgument(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?
    };
    parse_lines(&text)
}

fn json_line(out: &mut impl Write, v: &impl Serialize) -> io::Result<()> {
    writeln!(out, "{}", serde_json::to_string(v).expect("serializable"))
}

fn run(cli: Cli) -> Result<u8, Error> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let io_err = |e: io::Error| Error::InvalidArgument(format!("write: {e}"));
    let mut status = 0;
    match cli.command {
        Command::Mad(input) => {
            for g in read_graphs(&input.input)? {
                writeln!(out, "{}", mad(&g)?).map_err(io_err)?;
            }
        }
        Command::Oddgirth(input) => {
            for g in read_graphs(&input.input)? {
                writeln!(out, "{}", odd_girth(&g)).map_err(io_err)?;
            }
        }
        Command::Classify { input, level } => {
            for g in read_graphs(&input.input)? {
                json_line(&mut out, &classify(&g, level.l())).map_err(io_err)?;
            }
        }
        Command::Hom { input, target, budget } => {
            let t = TargetSpec::parse(&target)?.build()?;
            for g in read_graphs(&input.input)? {
                json_line(&mut out, &find_hom(&g, &t, budget)).map_err(io_err)?;
            }
        }
        Command::Pipeline { input, args } => {
            let cfg = args.config();
            for g in read_graphs(&input.input)? {
                let report = run_pipeline(&g, &cfg)?;
                if !report.claim_violations.is_empty() {
                    status = 1;
                }
                json_line(&mut out, &report).map_err(io_err)?;
            }
        }
        Command::Experiment { count, n, seed, no_timing, args } => {
            let csv = run_experiment(count, n, &args.config(), seed, !no_timing)?;
            out.write_all(csv.as_bytes()).map_err(io_err)?;
        }
        Command::AuditEmbedding { j, k, budget, relaxed } => {
            let scope = if relaxed { PatternScope::OutsideSource } else { PatternScope::Complement };
            json_line(&mut out, &attempt_embedding(j, k, budget, scope)?.certificate()).map_err(io_err)?;
        }
        Command::AuditCollapse { input, cycle, path, length, k } => {
            let g = match (input, cycle) {
                (Some(p), _) => read_graphs(&p)?
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::InvalidArgument("no graph in input".into()))?,
                (None, Some(m)) if m >= 3 => Graph::cycle(m),
                _ => return Err(Error::InvalidArgument("give --in FILE or --cycle M (M >= 3)".into())),
            };
            let path: Vec<usize> = match (path, length) {
                (Some(p), _) => p
                    .split(',')
                    .map(|t| t.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad vertex {t:?}"))))
                    .collect::<Result<_, _>>()?,
                (None, Some(len)) => (0..=len).collect(),
                (None, None) => return Err(Error::InvalidArgument("give --path or --length".into())),
            };
            json_line(&mut out, &collapse_path(&g, &path, k)?).map_err(io_err)?;
        }
        Command::Discharge { input, level, r1_degree_two_only, csv } => {
            let variant = if r1_degree_two_only { RuleVariant::degree_two_only() } else { RuleVariant::default() };
            for g in read_graphs(&input.input)? {
                let state = run_discharging(&g, level.k, level.l(), init_charges(&g), &variant)?;
                if csv {
                    out.write_all(state.log_csv().as_bytes()).map_err(io_err)?;
                } else {
                    json_line(&mut out, &audit_charges(&g, &state)).map_err(io_err)?;
                }
            }
        }
        Command::Kneser { n, k, graph6 } => {
            let kn = kneser_graph(KneserParams::new(n, k)?, DEFAULT_VERTEX_CAP)?;
            if graph6 {
                writeln!(out, "{}", write_graph6(&kn.graph)).map_err(io_err)?;
            } else {
                let summary = serde_json::json!({
                    "target": kn.params.to_string(),
                    "vertices": kn.graph.n(),
                    "edges": kn.graph.m(),
                    "degree": kn.graph.max_degree(),
                    "oddGirth": odd_girth(&kn.graph),
                });
                json_line(&mut out, &summary).map_err(io_err)?;
            }
        }
    }
    Ok(status)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("crlab: {e}");
            ExitCode::from(2)
        }
    }
}

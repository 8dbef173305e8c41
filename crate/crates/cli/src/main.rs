use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use qdlab::lab::{
    self, fit_scaling_with, read_csv, read_jsonl, FitPolicy, Level, Milestone, SweepConfig,
    VerifyOptions,
};
use qdlab::oracles::BoundId;

#[derive(Parser)]
#[command(name = "qdlab", version, about = "QD and GSEMO runtime experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one replication of a sweep config and print its record as JSON.
    Run {
        config: PathBuf,
        /// Index into the expanded grid.
        #[arg(long, default_value_t = 0)]
        grid_index: usize,
        #[arg(long, default_value_t = 0)]
        rep: usize,
    },
    /// Run every replication of a sweep config and write the CSV.
    Sweep {
        config: PathBuf,
        /// CSV destination; overrides the config, `-` for stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Also write full records as JSON lines.
        #[arg(long)]
        jsonl: Option<PathBuf>,
        /// Write wall_ns = 0 so the CSV is byte-reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Fit measured hitting times against a bound; exits 1 on a fail verdict.
    Fit {
        /// Sweep CSV, or JSON-lines records (`.jsonl`).
        input: PathBuf,
        /// cover_k1, cover_k, submod, mst_zero or mst_opt.
        #[arg(long)]
        bound: String,
        /// Defaults to the hitting time the bound describes.
        #[arg(long)]
        milestone: Option<String>,
        #[arg(long, default_value_t = 2.5)]
        max_spread: f64,
        #[arg(long, default_value_t = 8.0)]
        min_range: f64,
        #[arg(long, requires = "slope_max")]
        slope_min: Option<f64>,
        #[arg(long, requires = "slope_min")]
        slope_max: Option<f64>,
        #[arg(long, default_value_t = 30)]
        min_runs: usize,
    },
    /// Run the verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
        /// Corrupt one transition probability (the decay check must fail).
        #[arg(long)]
        corrupt_transition_table: bool,
        /// Print the report as JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Report each check on stderr as it finishes.
        #[arg(long)]
        progress: bool,
    },
    /// Write random instances to files.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum GenKind {
    /// Maximum-coverage instances ("n |U| r" header, one set per line).
    Coverage {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        universe: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, requires = "max_set")]
        min_set: Option<usize>,
        #[arg(long, requires = "min_set")]
        max_set: Option<usize>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Connected graphs with distinct weights 1..=m ("n_G m" header, "u v w" lines).
    Graph {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run {
            config,
            grid_index,
            rep,
        } => {
            let cfg = SweepConfig::load(&config)?;
            let rec = lab::run_one(&cfg, grid_index, rep)?;
            println!("{}", rec.to_json()?);
            Ok(true)
        }
        Command::Sweep {
            config,
            output,
            jsonl,
            no_timing,
        } => {
            let mut cfg = SweepConfig::load(&config)?;
            if no_timing {
                cfg.timing = false;
            }
            let output = output.or(cfg.output.clone());
            let jsonl = jsonl.or(cfg.jsonl.clone());
            let mut jsonl_file = jsonl.as_deref().map(create).transpose()?;
            let jw = jsonl_file.as_mut().map(|f| f as &mut dyn Write);
            let records = match output.as_deref() {
                None => lab::run_sweep_to(&cfg, io::stdout().lock(), jw)?,
                Some(p) if p == Path::new("-") => lab::run_sweep_to(&cfg, io::stdout().lock(), jw)?,
                Some(p) => lab::run_sweep_to(&cfg, create(p)?, jw)?,
            };
            if let Some(mut f) = jsonl_file {
                f.flush()?;
            }
            eprintln!("{} records", records.len());
            Ok(true)
        }
        Command::Fit {
            input,
            bound,
            milestone,
            max_spread,
            min_range,
            slope_min,
            slope_max,
            min_runs,
        } => {
            let id: BoundId = bound.parse()?;
            let milestone = match milestone {
                Some(m) => m.parse()?,
                None => Milestone::for_bound(id),
            };
            let file =
                File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let records = if input.extension().is_some_and(|e| e == "jsonl") {
                read_jsonl(file)?
            } else {
                read_csv(file)?
            };
            if records.is_empty() {
                bail!("{} holds no records", input.display());
            }
            let policy = FitPolicy {
                max_spread,
                min_range,
                slope_window: slope_min.zip(slope_max),
                min_runs,
                ..FitPolicy::default()
            };
            let fit = fit_scaling_with(&records, id, milestone, &policy)?;
            println!("{}", serde_json::to_string_pretty(&fit)?);
            Ok(fit.passed())
        }
        Command::Verify {
            level,
            corrupt_transition_table,
            json,
            progress,
        } => {
            let level = match level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            };
            let options = VerifyOptions {
                corrupt_transition_table,
            };
            let report = lab::verify_suite_with(level, options, |c| {
                if progress {
                    eprintln!("{}", c.summary_line());
                }
            })?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.to_text());
            }
            Ok(report.passed())
        }
        Command::Gen { kind } => {
            gen(kind)?;
            Ok(true)
        }
    }
}

fn gen(kind: GenKind) -> Result<()> {
    match kind {
        GenKind::Coverage {
            n,
            universe,
            r,
            min_set,
            max_set,
            count,
            seed,
            out_dir,
        } => {
            fs::create_dir_all(&out_dir)?;
            for i in 0..count {
                let inst = lab::random_coverage(
                    n,
                    universe,
                    r,
                    min_set.zip(max_set),
                    seed.wrapping_add(i as u64),
                )?;
                let path = out_dir.join(format!("coverage-n{n}-u{universe}-r{r}-{i}.txt"));
                fs::write(&path, inst.to_text())?;
                println!("{}", path.display());
            }
        }
        GenKind::Graph {
            nodes,
            edges,
            count,
            seed,
            out_dir,
        } => {
            fs::create_dir_all(&out_dir)?;
            for i in 0..count {
                let g = lab::random_graph(nodes, edges, seed.wrapping_add(i as u64))?;
                let path = out_dir.join(format!("graph-n{nodes}-m{edges}-{i}.txt"));
                fs::write(&path, g.to_edge_list())?;
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

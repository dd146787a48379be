use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hcb_core::bench::{bench_csv, benchmark};
use hcb_core::fourpoint::CacheMode;
use hcb_core::io::ArtifactWriter;
use hcb_core::oracle_check::{oracle_check, OracleCheckOptions};
use hcb_core::pipeline::{run_to_dir, RunOptions};
use hcb_core::presets::{preset_runs, Preset};
use hcb_core::{Error, LatticeScenario, Normalization};

const EXIT_VALIDATION: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_IO: u8 = 4;
const EXIT_ORACLE: u8 = 5;

#[derive(Parser)]
#[command(
    name = "hcbnoise",
    version,
    about = "Momentum distribution and noise correlations of 1D hard-core bosons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Engine {
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Evaluate four-point rows on the fly instead of caching the tensor.
    #[arg(long)]
    stream: bool,
}

impl Engine {
    fn cache(&self) -> CacheMode {
        if self.stream {
            CacheMode::Streaming
        } else {
            CacheMode::Auto
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file.
    Run {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Unnormalized lattice sums instead of per-site values.
        #[arg(long)]
        raw: bool,
        /// q2 values for cut files (repeatable).
        #[arg(long = "cut", default_values_t = [0usize])]
        cuts: Vec<usize>,
        #[command(flatten)]
        engine: Engine,
    },
    /// Run a preset experiment: fig1, fig2, fig3, fig3-small, mott-sweep.
    Preset {
        name: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Run fig3 at L=89 instead of the 34-site version.
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        engine: Engine,
    },
    /// Compare the determinant engine with exact diagonalization.
    OracleCheck {
        #[arg(long = "max-L", default_value_t = 6)]
        max_l: usize,
        #[arg(long, default_value = "oracle-check")]
        out: PathBuf,
        #[arg(long, hide = true)]
        corrupt_g: bool,
    },
    /// Time full noise maps on flat rings.
    Benchmark {
        /// Lattice sizes.
        #[arg(long = "sizes", value_delimiter = ',', default_values_t = [21usize, 34])]
        sizes: Vec<usize>,
        /// Thread counts.
        #[arg(long = "threads", value_delimiter = ',', default_values_t = [1usize, 4])]
        threads: Vec<usize>,
        #[arg(long)]
        stream: bool,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegenerateFermi { .. } | Error::DegenerateGround(_) => EXIT_DEGENERATE,
        Error::Io { .. } => EXIT_IO,
        Error::ComplexResidue(_) | Error::EmptySupport(_) | Error::ThreadPool(_) => 1,
        _ => EXIT_VALIDATION,
    }
}

fn with_pool<T>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Error>
where
    T: Send,
{
    match threads {
        Some(k) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()?
            .install(f)),
        None => Ok(f()),
    }
}

fn run_scenario(scenario: &LatticeScenario, opts: &RunOptions, dir: &Path) -> Result<(), Error> {
    let (result, manifest) = run_to_dir(scenario, opts, dir)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "{}: L={} N={} -> {} files",
        dir.display(),
        scenario.sites,
        scenario.particles,
        manifest.artifacts.len() + 1
    );
    Ok(())
}

fn cmd_run(
    file: &Path,
    out: &Path,
    raw: bool,
    cuts: Vec<usize>,
    engine: &Engine,
) -> Result<(), Error> {
    let mut scenario = LatticeScenario::load(file)?;
    if raw {
        scenario.normalization = Normalization::Raw;
    }
    let opts = RunOptions {
        cache: engine.cache(),
        cuts,
        ..RunOptions::default()
    };
    with_pool(engine.threads, || run_scenario(&scenario, &opts, out))?
}

fn cmd_preset(name: &str, out: &Path, full: bool, engine: &Engine) -> Result<(), Error> {
    let preset = Preset::parse(name).ok_or_else(|| {
        let names: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
        Error::BadScenario(format!(
            "unknown preset {name:?}; expected one of {}",
            names.join(", ")
        ))
    })?;
    let preset = match preset {
        Preset::Fig3 if !full => {
            eprintln!("note: fig3 at L=89 needs --full; running fig3-small");
            Preset::Fig3Small
        }
        p => p,
    };
    let root = out.join(preset.name());
    for run in preset_runs(preset) {
        let opts = RunOptions {
            cache: engine.cache(),
            cuts: run.cuts.clone(),
            ..RunOptions::default()
        };
        let dir = root.join(&run.name);
        with_pool(engine.threads, || run_scenario(&run.scenario, &opts, &dir))??;
    }
    Ok(())
}

fn cmd_oracle_check(max_l: usize, out: &Path, corrupt_g: bool) -> Result<bool, Error> {
    let opts = OracleCheckOptions {
        corrupt_g,
        ..OracleCheckOptions::new(max_l)
    };
    let report = oracle_check(&opts)?;
    let mut w = ArtifactWriter::create(out)?;
    let path = w.write_json("oracle_report.json", &report)?;
    let checked = report
        .scenarios
        .iter()
        .filter(|s| s.skipped.is_none())
        .count();
    println!(
        "oracle-check max-L={max_l}: {checked} scenarios, max deviation {:.3e} -> {}",
        report.max_deviation,
        path.display()
    );
    if !report.passed {
        if let Some(s) = report
            .scenarios
            .iter()
            .find(|s| Some(&s.label) == report.worst_scenario.as_ref())
        {
            if let Some(t) = &s.worst {
                eprintln!(
                    "FAIL {}: sites {:?} signs {:?} engine {:.17e} oracle {:.17e}",
                    s.label, t.sites, t.signs, t.engine, t.oracle
                );
            }
        }
    }
    Ok(report.passed)
}

fn cmd_benchmark(
    sizes: &[usize],
    threads: &[usize],
    stream: bool,
    out: Option<&Path>,
) -> Result<(), Error> {
    let cache = if stream {
        CacheMode::Streaming
    } else {
        CacheMode::Auto
    };
    let csv = bench_csv(&benchmark(sizes, threads, cache)?);
    match out {
        Some(p) => std::fs::write(p, &csv).map_err(|e| Error::io(p, e))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run {
            file,
            out,
            raw,
            cuts,
            engine,
        } => cmd_run(file, out, *raw, cuts.clone(), engine),
        Command::Preset {
            name,
            out,
            full,
            engine,
        } => cmd_preset(name, out, *full, engine),
        Command::OracleCheck {
            max_l,
            out,
            corrupt_g,
        } => match cmd_oracle_check(*max_l, out, *corrupt_g) {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(EXIT_ORACLE),
            Err(e) => Err(e),
        },
        Command::Benchmark {
            sizes,
            threads,
            stream,
            out,
        } => cmd_benchmark(sizes, threads, *stream, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zeno_core::harness::{grid_doubling_check, run_many, run_schedule};
use zeno_core::observables::ObservableRecord;
use zeno_core::output::emit_csv;
use zeno_core::scenario::{MeasurementSpec, Scenario};

const DEFAULT_OUT: &str = "out";

#[derive(Parser)]
#[command(name = "zeno", version, about = "Repeated measurement of a free particle on a periodic lattice")]
struct Cli {
    /// Accepted for compatibility; runs are fully deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write positions.csv, momenta.csv and summary.csv.
    Run {
        scenario: PathBuf,
        /// Output directory (overrides the scenario's output.dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the scenario against the same physics on a doubled grid.
    Convergence { scenario: PathBuf },
    /// Run variants of a scenario side by side.
    Sweep {
        scenario: PathBuf,
        #[command(flatten)]
        axis: SweepAxis,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SweepAxis {
    /// Measurement intervals in display units; `none` disables measurement.
    #[arg(long, value_delimiter = ',')]
    interval: Option<Vec<String>>,
    /// Region counts for a region PVM.
    #[arg(long, value_delimiter = ',')]
    regions: Option<Vec<usize>>,
}

type CliResult<T> = Result<T, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.seed.is_some() {
        eprintln!("warning: --seed is ignored; every run is deterministic");
    }
    let result = match cli.command {
        Command::Run { scenario, out } => run(&scenario, out),
        Command::Convergence { scenario } => convergence(&scenario),
        Command::Sweep {
            scenario,
            axis,
            out,
        } => sweep(&scenario, axis, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn load(path: &Path) -> CliResult<Scenario> {
    Scenario::load(path).map_err(|e| e.to_string())
}

fn output_dir(scenario: &Scenario, out: Option<PathBuf>) -> PathBuf {
    out.or_else(|| scenario.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

fn print_summary_header() {
    println!(
        "{:>12} {:>12} {:>14} {:>14} {:>10}",
        "time", "purity", "<p>", "var(p)", "p<0"
    );
}

fn print_summary_row(r: &ObservableRecord) {
    println!(
        "{:>12.3} {:>12.6} {:>14.6} {:>14.4} {:>10.6}",
        r.time_display, r.purity, r.expected_momentum_signed, r.momentum_variance, r.negative_momentum_fraction
    );
}

fn run(path: &Path, out: Option<PathBuf>) -> CliResult<()> {
    let scenario = load(path)?;
    let records = run_schedule(&scenario).map_err(|e| e.to_string())?;
    let dir = output_dir(&scenario, out);
    emit_csv(&records, &dir).map_err(|e| e.to_string())?;
    print_summary_header();
    records.iter().for_each(print_summary_row);
    println!("wrote {}", dir.display());
    Ok(())
}

fn convergence(path: &Path) -> CliResult<()> {
    let scenario = load(path)?;
    let report = grid_doubling_check(&scenario).map_err(|e| e.to_string())?;
    println!(
        "N = {} vs N = {}",
        report.n_coarse,
        2 * report.n_coarse
    );
    println!("{:>12} {:>16} {:>16}", "time", "max |dp_x|", "max |dp_k|");
    for row in &report.rows {
        println!(
            "{:>12.3} {:>16.3e} {:>16.3e}",
            row.time_display, row.max_position_diff, row.max_momentum_diff
        );
    }
    println!(
        "overall {:>16.3e} {:>16.3e}",
        report.max_position_diff(),
        report.max_momentum_diff()
    );
    Ok(())
}

fn parse_interval(s: &str) -> CliResult<Option<f64>> {
    if s.eq_ignore_ascii_case("none") {
        return Ok(None);
    }
    s.parse::<f64>()
        .map(Some)
        .map_err(|_| format!("invalid interval `{s}`"))
}

fn sweep(path: &Path, axis: SweepAxis, out: Option<PathBuf>) -> CliResult<()> {
    let base = load(path)?;
    let mut variants: Vec<(String, Scenario)> = Vec::new();
    if let Some(intervals) = axis.interval {
        for raw in intervals {
            let interval = parse_interval(raw.trim())?;
            let label = match interval {
                Some(v) => format!("interval_{v}"),
                None => "interval_none".to_string(),
            };
            let s = base.clone().with_interval(interval).map_err(|e| e.to_string())?;
            variants.push((label, s));
        }
    } else if let Some(regions) = axis.regions {
        for m in regions {
            let s = base
                .clone()
                .with_measurement(MeasurementSpec::region_pvm(m))
                .map_err(|e| e.to_string())?;
            variants.push((format!("regions_{m}"), s));
        }
    }

    let scenarios: Vec<Scenario> = variants.iter().map(|(_, s)| s.clone()).collect();
    let results = run_many(&scenarios);
    let root = output_dir(&base, out);
    let home = base.state.home_site(base.n_sites());

    println!(
        "{:>16} {:>12} {:>12} {:>14} {:>10} {:>12}",
        "variant", "time", "purity", "<p>", "p<0", "home mass"
    );
    for ((label, scenario), result) in variants.iter().zip(results) {
        let records = result.map_err(|e| format!("{label}: {e}"))?;
        emit_csv(&records, root.join(label)).map_err(|e| e.to_string())?;
        let last = records.last().expect("validated schedules have records");
        let home_mass = scenario
            .analysis_partition()
            .map_err(|e| e.to_string())?
            .map(|p| last.region_masses[p.region_of(home)]);
        println!(
            "{:>16} {:>12.3} {:>12.6} {:>14.6} {:>10.6} {:>12}",
            label,
            last.time_display,
            last.purity,
            last.expected_momentum_signed,
            last.negative_momentum_fraction,
            home_mass.map_or_else(|| "-".to_string(), |m| format!("{m:.6}"))
        );
    }
    println!("wrote {}", root.display());
    Ok(())
}

//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags or values), 2
//! for runtime failures (missing files, invalid configs, failed runs).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use heapbench::bench::config::{
    cost_model_to_kv, load_cost_model, load_experiment, load_power_model, load_reference_times,
};
use heapbench::bench::report::{
    csv_string, emit_csv, emit_markdown, emit_report, load_csv, markdown_string, ReportFormat,
};
use heapbench::bench::{self, fit_complexity, BenchError, ExperimentSpec};
use heapbench::heap::heapsort_with_stats;
use heapbench::hwsim::{calibrate, simulate, CycleCostModel, FsmPhase, HwConfig};
use heapbench::workload::{generate, OrderingKind, Workload};

#[derive(Parser)]
#[command(
    name = "heapbench",
    version,
    about = "k-ary heapsort benchmark: software baseline vs simulated hardware accelerator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a workload, heapsort it, print the sorted values
    Sort(SortArgs),
    /// Run one workload through the cycle-accurate accelerator simulator
    Simulate(SimulateArgs),
    /// Run a size x ordering x arity sweep and write result files
    Sweep(SweepArgs),
    /// Fit a cycle cost model to reference wall-clock measurements
    Calibrate(CalibrateArgs),
    /// Re-render a results CSV as csv, markdown or plot data
    Report(ReportArgs),
}

fn parse_order(s: &str) -> Result<OrderingKind, String> {
    OrderingKind::from_str(s).map_err(|e| e.to_string())
}

fn parse_arity(s: &str) -> Result<usize, String> {
    let arity: usize = s.parse().map_err(|e| format!("{e}"))?;
    // reuse the simulator's arity rules so the message is consistent
    HwConfig::new(arity, 0).map_err(|e| e.to_string())?;
    Ok(arity)
}

#[derive(Args)]
struct SortArgs {
    /// Number of elements to sort
    #[arg(long)]
    size: usize,
    /// Input ordering: random, sorted or reversed
    #[arg(long, default_value = "random", value_parser = parse_order)]
    order: OrderingKind,
    /// RNG seed for random inputs
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Heap arity (power of two, 2..=256)
    #[arg(long, default_value_t = 2, value_parser = parse_arity)]
    arity: usize,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    size: usize,
    #[arg(long, default_value = "random", value_parser = parse_order)]
    order: OrderingKind,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 2, value_parser = parse_arity)]
    arity: usize,
    /// Accelerator clock in MHz
    #[arg(long, default_value_t = 100.0)]
    clock_mhz: f64,
    /// Cycle cost model file (defaults to the all-ones model)
    #[arg(long)]
    cost_model: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment config file; flags below override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input size; repeat the flag for several sizes
    #[arg(long = "size")]
    sizes: Vec<usize>,
    /// Input ordering; repeat the flag for several orderings
    #[arg(long = "order", value_parser = parse_order)]
    orders: Vec<OrderingKind>,
    /// Heap arity; repeat the flag for several arities
    #[arg(long = "arity", value_parser = parse_arity)]
    arities: Vec<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Timed repetitions per sweep point
    #[arg(long)]
    reps: Option<u32>,
    /// Sleep between repetitions, in milliseconds
    #[arg(long)]
    cooldown_ms: Option<u64>,
    #[arg(long)]
    clock_mhz: Option<f64>,
    /// Accelerator power model file
    #[arg(long)]
    power_model: Option<PathBuf>,
    /// Software-platform power model file
    #[arg(long)]
    sw_power_model: Option<PathBuf>,
    /// Cycle cost model file
    #[arg(long)]
    cost_model: Option<PathBuf>,
    /// Output directory for results.csv and results.md
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Reference measurements: CSV with header `size,time_s`
    #[arg(long)]
    reference: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 2, value_parser = parse_arity)]
    arity: usize,
    #[arg(long, default_value_t = 100.0)]
    clock_mhz: f64,
    /// Write the fitted model here as a loadable cost-model file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Results CSV to render
    #[arg(long)]
    input: PathBuf,
    /// csv, markdown or plotdata
    #[arg(long, default_value = "markdown", value_parser = ReportFormat::from_str)]
    format: ReportFormat,
    /// Output file (directory for plotdata). Omit to print to stdout.
    #[arg(long, required_if_eq("format", "plotdata"))]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Sort(args) => cmd_sort(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Calibrate(args) => cmd_calibrate(args),
        Command::Report(args) => cmd_report(args),
    }
}

fn cmd_sort(args: SortArgs) -> Result<(), BenchError> {
    let input = generate(&Workload::new(args.size, args.order.with_seed(args.seed)));
    let (sorted, comparisons) = heapsort_with_stats(&input, args.arity);
    let mut stdout = String::with_capacity(sorted.len() * 8);
    for v in &sorted {
        stdout.push_str(&format!("{v}\n"));
    }
    print!("{stdout}");
    eprintln!(
        "sorted {} elements with k={} using {} comparisons",
        args.size, args.arity, comparisons
    );
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), BenchError> {
    let cost_model = match &args.cost_model {
        Some(path) => load_cost_model(path)?,
        None => CycleCostModel::default(),
    };
    let config = HwConfig::new(args.arity, args.size)?
        .with_clock_hz(args.clock_mhz * 1e6)?
        .with_cost_model(cost_model)?;
    let input = generate(&Workload::new(args.size, args.order.with_seed(args.seed)));
    let result = simulate(&input, &config)?;

    let mut expected = input;
    expected.sort_unstable();
    if result.output != expected {
        return Err(BenchError::SortMismatch {
            size: args.size,
            arity: args.arity,
        });
    }

    println!(
        "n={} {} arity k={} at {} MHz",
        args.size, args.order, args.arity, args.clock_mhz
    );
    println!(
        "total cycles: {} ({:.6} ms)",
        result.total_cycles,
        result.wall_time_s * 1e3
    );
    println!("phase cycles:");
    for phase in FsmPhase::ALL {
        println!("  {:<15}{}", phase.name(), result.phase_cycles[&phase]);
    }
    let c = result.counts;
    println!(
        "events: inserts={} extracts={} io_elements={} sift_up_levels={} child_reads={} sift_down_swaps={} root_moves={}",
        c.inserts, c.extracts, c.io_elements, c.sift_up_levels, c.child_reads,
        c.sift_down_swaps, c.root_moves
    );
    println!("output verified against software sort");
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), BenchError> {
    let mut spec = match &args.config {
        Some(path) => load_experiment(path)?,
        None => ExperimentSpec::default(),
    };
    if !args.sizes.is_empty() {
        spec.sizes = args.sizes;
    }
    if !args.orders.is_empty() {
        spec.orderings = args.orders;
    }
    if !args.arities.is_empty() {
        spec.arities = args.arities;
    }
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(reps) = args.reps {
        spec.repetitions = reps;
    }
    if let Some(cooldown_ms) = args.cooldown_ms {
        spec.cooldown_ms = cooldown_ms;
    }
    if let Some(clock_mhz) = args.clock_mhz {
        spec.clock_hz = clock_mhz * 1e6;
    }
    if let Some(path) = &args.power_model {
        spec.hw_power = load_power_model(path)?;
    }
    if let Some(path) = &args.sw_power_model {
        spec.sw_power = load_power_model(path)?;
    }
    if let Some(path) = &args.cost_model {
        spec.cost_model = load_cost_model(path)?;
    }
    if let Some(out) = args.out {
        spec.output_dir = out;
    }

    let rows = bench::run(&spec)?;
    print!("{}", markdown_string(&rows)?);

    // complexity fits for every curve with enough sizes
    let mut curves: Vec<(OrderingKind, usize)> =
        rows.iter().map(|r| (r.ordering, r.arity)).collect();
    curves.sort_unstable();
    curves.dedup();
    for (ordering, arity) in curves {
        let group: Vec<_> = rows
            .iter()
            .filter(|r| r.ordering == ordering && r.arity == arity)
            .cloned()
            .collect();
        if group.len() >= 3 {
            let (cycles_per_unit, r_squared) = fit_complexity(&group)?;
            println!(
                "fit {ordering} k={arity}: hw_cycles = {cycles_per_unit:.3} * n*log_k(n), r^2 = {r_squared:.6}"
            );
        }
    }

    fs::create_dir_all(&spec.output_dir)?;
    let csv_path = spec.output_dir.join("results.csv");
    let md_path = spec.output_dir.join("results.md");
    emit_csv(&rows, &csv_path)?;
    emit_markdown(&rows, &md_path)?;
    println!("wrote {}", csv_path.display());
    println!("wrote {}", md_path.display());
    Ok(())
}

fn cmd_calibrate(args: CalibrateArgs) -> Result<(), BenchError> {
    let reference = load_reference_times(&args.reference)?;
    let base = HwConfig::new(args.arity, 0)?.with_clock_hz(args.clock_mhz * 1e6)?;
    let calibration = calibrate(&reference, &base, args.seed)?;

    let mut text = format!(
        "# fitted to {} reference points, max relative error {:.3}%\n",
        reference.len(),
        calibration.max_rel_error * 100.0
    );
    text.push_str(&cost_model_to_kv(&calibration.model));
    print!("{text}");
    if let Some(out) = &args.out {
        fs::write(out, &text)?;
        eprintln!("wrote {}", out.display());
    }
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<(), BenchError> {
    let rows = load_csv(&args.input)?;
    match (&args.out, args.format) {
        (Some(out), format) => {
            let written = emit_report(&rows, format, out)?;
            for path in written {
                eprintln!("wrote {}", path.display());
            }
        }
        (None, ReportFormat::Csv) => print!("{}", csv_string(&rows)?),
        (None, ReportFormat::Markdown) => print!("{}", markdown_string(&rows)?),
        (None, ReportFormat::PlotData) => unreachable!("--out is required for plotdata"),
    }
    Ok(())
}

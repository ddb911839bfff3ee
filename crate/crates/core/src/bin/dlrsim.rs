use clap::{Args, Parser, Subcommand};
use dlrsim::grid::RatingMode;
use dlrsim::scenario::{self, Benchmark, ScenarioConfig, ScenarioError};
use dlrsim::thermal::sensitivity::reference_ambient;
use dlrsim::thermal::SweepParameter;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dlrsim", version, about = "Dynamic line rating and receding-horizon dispatch")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dispatch a scenario under NLR and/or DLR and write the reports.
    Run(ScenarioArgs),
    /// Rating sweeps over each ambient parameter.
    Sweep {
        /// Benchmark TOML providing the conductor (shipped benchmark if omitted).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "sweeps")]
        out: PathBuf,
        #[arg(long, default_value_t = 101)]
        points: usize,
        /// Parameters to sweep; all of them if omitted.
        #[arg(long = "parameter", value_parser = parse_parameter)]
        parameters: Vec<SweepParameter>,
    },
    /// Check a scenario's inputs without dispatching.
    Validate(ScenarioArgs),
    /// Corridor calibration factors against the static ratings.
    Calibrate {
        /// Benchmark TOML (shipped benchmark if omitted).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write the table as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_parser = parse_mode)]
    rating_mode: Option<RatingMode>,
    #[arg(long)]
    res_scale: Option<f64>,
    #[arg(long)]
    disp_scale: Option<f64>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<RatingMode, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_parameter(s: &str) -> Result<SweepParameter, String> {
    s.parse().map_err(|e| format!("{e}"))
}

impl ScenarioArgs {
    fn load(&self) -> Result<ScenarioConfig, ScenarioError> {
        let mut c = ScenarioConfig::load(&self.config)?;
        if let Some(m) = self.rating_mode {
            c.rating_mode = m.into();
        }
        if let Some(v) = self.res_scale {
            c.res_scale = v;
        }
        if let Some(v) = self.disp_scale {
            c.disp_scale = v;
        }
        if let Some(v) = self.horizon {
            c.horizon = v;
        }
        if let Some(v) = &self.out {
            c.out = v.clone();
        }
        c.validate()?;
        Ok(c)
    }
}

fn benchmark(path: &Option<PathBuf>) -> Result<Benchmark, ScenarioError> {
    match path {
        Some(p) => Benchmark::load(p),
        None => Ok(Benchmark::shipped()),
    }
}

fn execute(command: Command) -> Result<(), ScenarioError> {
    match command {
        Command::Run(args) => {
            let config = args.load()?;
            for a in scenario::run(&config)? {
                let t = &a.report.total;
                println!(
                    "{}: load shed {:.3}%  wind curtailed {:.3}%  pv curtailed {:.3}%",
                    a.mode, t.load_pct, t.wind_pct, t.pv_pct
                );
            }
            println!("reports in {}", config.out.display());
        }
        Command::Sweep {
            config,
            out,
            points,
            parameters,
        } => {
            let b = benchmark(&config)?;
            let params = if parameters.is_empty() {
                SweepParameter::ALL.to_vec()
            } else {
                parameters
            };
            let res = scenario::sweep(&b.conductor, &reference_ambient(), &params, points, Some(&out))?;
            for f in &res.fits {
                println!(
                    "{:<10} {:>9.3} %/unit  {:>8.3} %/%  end-to-end {:>8.2} %",
                    f.parameter.name(),
                    f.percent_per_unit,
                    f.percent_per_percent,
                    f.end_to_end_percent
                );
            }
            println!("sweeps in {}", out.display());
        }
        Command::Validate(args) => {
            let s = scenario::validate(&args.load()?)?;
            println!(
                "{} zones, {} lines, {} data steps, {} simulated",
                s.zones, s.lines, s.data_steps, s.sim_steps
            );
            for (line, f) in &s.calibration_factors {
                println!("  {line:<5} calibration factor {f:.4}");
            }
            if !s.suspicious_lines.is_empty() {
                log::warn!("calibration factors outside the sanity band: {:?}", s.suspicious_lines);
            }
        }
        Command::Calibrate { config, out } => {
            let rows = scenario::calibrate(&benchmark(&config)?)?;
            println!("{:<5} {:>4} {:>4} {:>9} {:>9} {:>7}", "line", "220", "380", "nlr_mva", "raw_mva", "factor");
            for r in &rows {
                println!(
                    "{:<5} {:>4} {:>4} {:>9.1} {:>9.1} {:>7.4}{}",
                    r.line,
                    r.circuits_220,
                    r.circuits_380,
                    r.nlr_mva,
                    r.raw_mva,
                    r.factor,
                    if r.in_band { "" } else { "  (outside sanity band)" }
                );
            }
            if let Some(path) = out {
                let io = |e: csv::Error| ScenarioError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                };
                let mut w = csv::Writer::from_path(&path).map_err(io)?;
                for r in &rows {
                    w.serialize(r).map_err(io)?;
                }
                w.flush().map_err(|e| io(e.into()))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

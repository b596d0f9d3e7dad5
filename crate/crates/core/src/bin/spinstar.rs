use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spinstar::dynamics::TimeGrid;
use spinstar::measures::SimulationResult;
use spinstar::model::{AmbientState, Coupling, DecayJump, ModelConfig};
use spinstar::runner::{self, ConfigOverrides, Preset, Sweep};
use spinstar::{Error, Result};

#[derive(Parser)]
#[command(name = "spinstar", version, about = "Central-spin decoherence in a spin-star network")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one configuration and write its CSV.
    Run {
        #[command(flatten)]
        params: RunParams,
        /// Output CSV path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a figure preset: <out-dir>/<name>_M<k>.csv and <name>_summary.csv.
    Figure {
        /// fig2a, fig2b, fig3a, fig3b, fig3c or fig3d
        name: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        stride: Option<usize>,
    },
    /// Run one configuration for several ambient-spin counts.
    Sweep {
        /// Comma-separated ambient-spin counts, e.g. 2,5,8.
        #[arg(long, value_delimiter = ',', required = true)]
        ambient_list: Vec<usize>,
        #[command(flatten)]
        params: RunParams,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct RunParams {
    /// Configuration file of `key = value` lines; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    ambient: Option<usize>,
    #[arg(long, value_parser = parse_keyword::<Coupling>)]
    coupling: Option<Coupling>,
    #[arg(long, value_parser = parse_keyword::<AmbientState>)]
    ambient_state: Option<AmbientState>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    j: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    gamma_phi: Option<f64>,
    #[arg(long, value_parser = parse_keyword::<DecayJump>)]
    decay_jump: Option<DecayJump>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    stride: Option<usize>,
}

fn parse_keyword<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl RunParams {
    fn resolve(&self) -> Result<(ModelConfig, TimeGrid)> {
        let mut cfg = ModelConfig::default();
        let mut grid = TimeGrid::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            runner::apply_config_text(&text, &mut cfg, &mut grid)?;
        }
        ConfigOverrides {
            ambient_count: self.ambient,
            coupling: self.coupling,
            j: self.j,
            omega: self.omega,
            gamma: self.gamma,
            gamma_phi: self.gamma_phi,
            ambient_state: self.ambient_state,
            beta: self.beta,
            decay_jump: self.decay_jump,
            t_max: self.t_max,
            dt: self.dt,
            sample_stride: self.stride,
        }
        .apply(&mut cfg, &mut grid);
        cfg.validate()?;
        grid.validate()?;
        Ok((cfg, grid))
    }
}

fn report(result: &SimulationResult) -> Result<()> {
    let ct = result.coherence_time()?;
    eprintln!(
        "M={} coupling={} ambient={} coherence_time={} revivals={}",
        result.config.ambient_count,
        result.config.coupling,
        result.config.ambient_state,
        ct.map_or_else(|| "unreached".to_string(), |t| format!("{t:.4}")),
        result.revivals()
    );
    Ok(())
}

fn report_sweep(sweep: &Sweep) -> Result<()> {
    for r in &sweep.results {
        report(r)?;
    }
    for f in &sweep.files {
        eprintln!("wrote {}", f.display());
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { params, out } => {
            let (cfg, grid) = params.resolve()?;
            let result = runner::run_single(&cfg, &grid)?;
            match out {
                Some(path) => runner::emit_csv(&result, &path)?,
                None => runner::write_csv(&result.samples, BufWriter::new(io::stdout().lock()))
                    .map_err(|e| Error::Io {
                        path: PathBuf::from("<stdout>"),
                        source: e,
                    })?,
            }
            report(&result)
        }
        Command::Figure {
            name,
            out_dir,
            t_max,
            dt,
            stride,
        } => {
            let preset: Preset = name.parse()?;
            let mut grid = Preset::grid();
            grid.t_max = t_max.unwrap_or(grid.t_max);
            grid.dt = dt.unwrap_or(grid.dt);
            grid.sample_stride = stride.unwrap_or(grid.sample_stride);
            let sweep = runner::run_preset(preset, Some(&grid), &out_dir)?;
            report_sweep(&sweep)
        }
        Command::Sweep {
            ambient_list,
            params,
            out_dir,
        } => {
            let (cfg, grid) = params.resolve()?;
            let sweep = runner::run_sweep(&cfg, &ambient_list, &grid, &out_dir, "sweep")?;
            report_sweep(&sweep)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

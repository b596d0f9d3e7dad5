//! Single runs, sweeps over the ambient-spin count, figure presets and
//! their CSV output.

mod config;
mod csv;
mod preset;

pub use self::config::{apply_config_text, parse_config, ConfigOverrides};
pub use self::csv::{
    emit_csv, parse_csv, parse_summary, read_csv, write_csv, write_summary, SummaryRow,
    CSV_HEADER, SUMMARY_HEADER,
};
pub use self::preset::Preset;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::dynamics::{evolve, EvolveOptions, TimeGrid, Trajectory};
use crate::error::{Error, Result};
use crate::measures::SimulationResult;
use crate::model::{build_hamiltonian, build_jump_channels, ModelConfig, MAX_AMBIENT};
use crate::states::initial_state;

/// Evolves `plus ⊗ ambient^{⊗M}` under the configured model.
pub fn run_single(cfg: &ModelConfig, grid: &TimeGrid) -> Result<SimulationResult> {
    run_single_with(cfg, grid, &EvolveOptions::default()).map(|(result, _)| result)
}

/// Like [`run_single`], also returning the integrator diagnostics.
pub fn run_single_with(
    cfg: &ModelConfig,
    grid: &TimeGrid,
    options: &EvolveOptions,
) -> Result<(SimulationResult, Trajectory)> {
    cfg.validate()?;
    grid.validate()?;
    let h = build_hamiltonian(cfg)?;
    let channels = build_jump_channels(cfg)?;
    let rho0 = initial_state(cfg)?;
    let trajectory = evolve(&rho0, &h, &channels, grid, options, |_, _| {})?;
    let result = SimulationResult {
        config: *cfg,
        grid: *grid,
        samples: trajectory.samples.clone(),
    };
    Ok((result, trajectory))
}

/// Results of a sweep, in the order of the requested ambient counts.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub results: Vec<SimulationResult>,
    pub summary: Vec<SummaryRow>,
    /// Per-run CSV files, followed by the summary file.
    pub files: Vec<PathBuf>,
}

pub fn summarize(result: &SimulationResult) -> Result<SummaryRow> {
    Ok(SummaryRow {
        ambient_count: result.config.ambient_count,
        coherence_time: result.coherence_time()?,
        revivals: result.revivals(),
    })
}

/// Runs `base` for each ambient count (concurrently) and writes
/// `<prefix>_M<k>.csv` per run plus `<prefix>_summary.csv` into `out_dir`.
pub fn run_sweep(
    base: &ModelConfig,
    ambient_counts: &[usize],
    grid: &TimeGrid,
    out_dir: &Path,
    prefix: &str,
) -> Result<Sweep> {
    if ambient_counts.is_empty() {
        return Err(Error::EmptySweep);
    }
    if let Some(&m) = ambient_counts.iter().find(|&&m| !(1..=MAX_AMBIENT).contains(&m)) {
        return Err(Error::config(format!(
            "ambient count {m} outside 1..={MAX_AMBIENT}"
        )));
    }
    let configs: Vec<ModelConfig> = ambient_counts
        .iter()
        .map(|&m| ModelConfig {
            ambient_count: m,
            ..*base
        })
        .collect();
    run_configs(&configs, grid, out_dir, prefix)
}

/// Expands a preset and runs all its members.
pub fn run_preset(preset: Preset, grid: Option<&TimeGrid>, out_dir: &Path) -> Result<Sweep> {
    let members = preset.members();
    let grid = grid.copied().unwrap_or(members[0].1);
    let configs: Vec<ModelConfig> = members.into_iter().map(|(cfg, _)| cfg).collect();
    run_configs(&configs, &grid, out_dir, preset.name())
}

fn run_configs(
    configs: &[ModelConfig],
    grid: &TimeGrid,
    out_dir: &Path,
    prefix: &str,
) -> Result<Sweep> {
    for cfg in configs {
        cfg.validate()?;
    }
    grid.validate()?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let results: Vec<SimulationResult> = configs
        .par_iter()
        .map(|cfg| run_single(cfg, grid))
        .collect::<Result<_>>()?;

    let mut files = Vec::with_capacity(results.len() + 1);
    for r in &results {
        let path = out_dir.join(format!("{prefix}_M{}.csv", r.config.ambient_count));
        emit_csv(r, &path)?;
        files.push(path);
    }
    let summary = results.iter().map(summarize).collect::<Result<Vec<_>>>()?;
    let summary_path = out_dir.join(format!("{prefix}_summary.csv"));
    write_summary(&summary, &summary_path)?;
    files.push(summary_path);
    Ok(Sweep {
        results,
        summary,
        files,
    })
}

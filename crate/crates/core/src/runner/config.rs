//! `key = value` configuration files.
//!
//! One assignment per line, `#` starts a comment, keys are the field names
//! of [`ModelConfig`] and [`TimeGrid`].

use crate::dynamics::TimeGrid;
use crate::error::{Error, Result};
use crate::model::{AmbientState, Coupling, DecayJump, ModelConfig};

/// Optional values layered over a base configuration, e.g. from CLI flags.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigOverrides {
    pub ambient_count: Option<usize>,
    pub coupling: Option<Coupling>,
    pub j: Option<f64>,
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma_phi: Option<f64>,
    pub ambient_state: Option<AmbientState>,
    pub beta: Option<f64>,
    pub decay_jump: Option<DecayJump>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub sample_stride: Option<usize>,
}

impl ConfigOverrides {
    pub fn apply(&self, cfg: &mut ModelConfig, grid: &mut TimeGrid) {
        macro_rules! set {
            ($target:expr, $field:ident) => {
                if let Some(v) = self.$field {
                    $target.$field = v;
                }
            };
        }
        set!(cfg, ambient_count);
        set!(cfg, coupling);
        set!(cfg, j);
        set!(cfg, omega);
        set!(cfg, gamma);
        set!(cfg, gamma_phi);
        set!(cfg, ambient_state);
        set!(cfg, beta);
        set!(cfg, decay_jump);
        set!(grid, t_max);
        set!(grid, dt);
        set!(grid, sample_stride);
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(format!("line {line}: bad value '{value}' for {key}")))
}

/// Parses configuration text into overrides without applying them.
pub fn parse_config(text: &str) -> Result<ConfigOverrides> {
    let mut o = ConfigOverrides::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::config(format!("line {line}: expected 'key = value'")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "ambient_count" => o.ambient_count = Some(parse_value(key, value, line)?),
            "coupling" => o.coupling = Some(value.parse()?),
            "j" => o.j = Some(parse_value(key, value, line)?),
            "omega" => o.omega = Some(parse_value(key, value, line)?),
            "gamma" => o.gamma = Some(parse_value(key, value, line)?),
            "gamma_phi" => o.gamma_phi = Some(parse_value(key, value, line)?),
            "ambient_state" => o.ambient_state = Some(value.parse()?),
            "beta" => o.beta = Some(parse_value(key, value, line)?),
            "decay_jump" => o.decay_jump = Some(value.parse()?),
            "t_max" => o.t_max = Some(parse_value(key, value, line)?),
            "dt" => o.dt = Some(parse_value(key, value, line)?),
            "sample_stride" => o.sample_stride = Some(parse_value(key, value, line)?),
            other => return Err(Error::config(format!("line {line}: unknown key '{other}'"))),
        }
    }
    Ok(o)
}

/// Applies configuration text on top of `cfg` and `grid`.
pub fn apply_config_text(text: &str, cfg: &mut ModelConfig, grid: &mut TimeGrid) -> Result<()> {
    parse_config(text)?.apply(cfg, grid);
    Ok(())
}

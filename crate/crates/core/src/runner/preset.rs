use std::fmt;
use std::str::FromStr;

use crate::dynamics::TimeGrid;
use crate::error::{Error, Result};
use crate::model::{AmbientState, Coupling, DecayJump, ModelConfig};

/// Named parameter sets reproducing the published coherence curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Ising coupling, thermal ambient spins.
    Fig2a,
    /// XXX coupling, thermal ambient spins.
    Fig2b,
    /// XXX coupling, coherent ambient spins (`⟨σx⟩`).
    Fig3a,
    /// XXX coupling, coherent ambient spins (l1 norm).
    Fig3b,
    /// XX coupling, coherent ambient spins, two sizes.
    Fig3c,
    /// XX coupling, coherent ambient spins, three sizes.
    Fig3d,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig3a,
        Preset::Fig3b,
        Preset::Fig3c,
        Preset::Fig3d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig3c => "fig3c",
            Preset::Fig3d => "fig3d",
        }
    }

    pub fn coupling(self) -> Coupling {
        match self {
            Preset::Fig2a => Coupling::Ising,
            Preset::Fig2b | Preset::Fig3a | Preset::Fig3b => Coupling::Xxx,
            Preset::Fig3c | Preset::Fig3d => Coupling::Xx,
        }
    }

    pub fn ambient_state(self) -> AmbientState {
        match self {
            Preset::Fig2a | Preset::Fig2b => AmbientState::Thermal,
            _ => AmbientState::Plus,
        }
    }

    pub fn ambient_counts(self) -> &'static [usize] {
        match self {
            Preset::Fig2a | Preset::Fig2b | Preset::Fig3d => &[2, 5, 8],
            Preset::Fig3a | Preset::Fig3b | Preset::Fig3c => &[2, 6],
        }
    }

    pub fn grid() -> TimeGrid {
        TimeGrid {
            t_max: 200.0,
            dt: 0.01,
            sample_stride: 10,
        }
    }

    pub fn base_config(self) -> ModelConfig {
        ModelConfig {
            ambient_count: self.ambient_counts()[0],
            coupling: self.coupling(),
            j: 0.05,
            omega: 1.0,
            gamma: 0.015,
            gamma_phi: 0.015,
            ambient_state: self.ambient_state(),
            beta: 0.5,
            decay_jump: DecayJump::Lowering,
        }
    }

    pub fn members(self) -> Vec<(ModelConfig, TimeGrid)> {
        let base = self.base_config();
        self.ambient_counts()
            .iter()
            .map(|&m| {
                (
                    ModelConfig {
                        ambient_count: m,
                        ..base
                    },
                    Self::grid(),
                )
            })
            .collect()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::config(format!("unknown preset '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_table() {
        let table: Vec<(&str, Coupling, AmbientState, Vec<usize>)> = Preset::ALL
            .iter()
            .map(|p| (p.name(), p.coupling(), p.ambient_state(), p.ambient_counts().to_vec()))
            .collect();
        assert_eq!(
            table,
            vec![
                ("fig2a", Coupling::Ising, AmbientState::Thermal, vec![2, 5, 8]),
                ("fig2b", Coupling::Xxx, AmbientState::Thermal, vec![2, 5, 8]),
                ("fig3a", Coupling::Xxx, AmbientState::Plus, vec![2, 6]),
                ("fig3b", Coupling::Xxx, AmbientState::Plus, vec![2, 6]),
                ("fig3c", Coupling::Xx, AmbientState::Plus, vec![2, 6]),
                ("fig3d", Coupling::Xx, AmbientState::Plus, vec![2, 5, 8]),
            ]
        );
    }

    #[test]
    fn members_share_caption_parameters() {
        for p in Preset::ALL {
            for (cfg, grid) in p.members() {
                assert_eq!((cfg.j, cfg.omega, cfg.gamma, cfg.gamma_phi), (0.05, 1.0, 0.015, 0.015));
                assert_eq!(cfg.beta, 0.5);
                assert_eq!(cfg.decay_jump, DecayJump::Lowering);
                assert_eq!((grid.t_max, grid.dt), (200.0, 0.01));
                cfg.validate().unwrap();
            }
            assert_eq!(p.members(), p.members());
        }
    }

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("fig4".parse::<Preset>().is_err());
    }
}

//! Parameter sets of the reference figures.
//!
//! Site labels are 0-based (`label_base: 0`). Figure 2 reuses the segment
//! length of figure 1 (`L = 25/κ`), which its caption does not restate.

use super::config::{
    DisorderConfig, InputConfig, LatticeConfig, LatticeKind, OneOrMany, OutputConfig,
    ProtocolConfig, ScenarioConfig, ScenarioId, SiteLabel, DEFAULT_NUM_SAMPLES,
};

pub const DEFAULT_MASTER_SEED: u64 = 2024;

/// Eight sites drawing an "E" in the top-right corner of the 7×10 grid:
/// a vertical stroke on column 8 (rows 0–4) with arms on column 9 at rows 0, 2, 4.
pub const E_GLYPH: [[usize; 2]; 8] = [
    [0, 8],
    [0, 9],
    [1, 8],
    [2, 8],
    [2, 9],
    [3, 8],
    [4, 8],
    [4, 9],
];

fn chain10(delta_over_kappa: OneOrMany<f64>) -> LatticeConfig {
    LatticeConfig {
        kind: LatticeKind::OneD,
        n: 10,
        m: None,
        kappa: 1.0,
        delta_over_kappa,
        disorder: None,
    }
}

fn protocol(segment_length: f64, num_samples: usize) -> ProtocolConfig {
    ProtocolConfig {
        segment_length,
        num_samples,
    }
}

fn photon_at_3() -> InputConfig {
    InputConfig::Single {
        site: Some(SiteLabel::Index(3)),
        amplitudes: None,
        label_base: 0,
    }
}

fn noon_1_2(n0: OneOrMany<u32>, phi: OneOrMany<f64>) -> InputConfig {
    InputConfig::Noon {
        sites: [SiteLabel::Index(1), SiteLabel::Index(2)],
        n0,
        phi,
        label_base: 0,
    }
}

/// Default config for a built-in scenario; `None` for `custom`.
pub fn default_config(id: ScenarioId) -> Option<ScenarioConfig> {
    let (lattice, protocol, input) = match id {
        ScenarioId::Fig1 => (
            chain10(OneOrMany::One(5.0)),
            protocol(25.0, DEFAULT_NUM_SAMPLES),
            photon_at_3(),
        ),
        ScenarioId::Fig2a => (
            chain10(OneOrMany::Many(vec![2.0, 4.0, 6.0, 8.0, 10.0])),
            protocol(25.0, DEFAULT_NUM_SAMPLES),
            photon_at_3(),
        ),
        ScenarioId::Fig2b => (
            LatticeConfig {
                disorder: Some(DisorderConfig {
                    sigma_max: 0.2,
                    ensemble: 100,
                    seed: DEFAULT_MASTER_SEED,
                }),
                ..chain10(OneOrMany::Many(vec![5.0, 10.0]))
            },
            protocol(25.0, DEFAULT_NUM_SAMPLES),
            photon_at_3(),
        ),
        ScenarioId::Fig3a => {
            let phases = (0..=72)
                .map(|k| std::f64::consts::TAU * f64::from(k) / 72.0)
                .collect();
            (
                chain10(OneOrMany::One(5.0)),
                protocol(25.0, DEFAULT_NUM_SAMPLES),
                noon_1_2(OneOrMany::Many(vec![1, 2]), OneOrMany::Many(phases)),
            )
        }
        ScenarioId::Fig3b => (
            chain10(OneOrMany::One(5.0)),
            protocol(25.0, DEFAULT_NUM_SAMPLES),
            noon_1_2(OneOrMany::Many((1..=6).collect()), OneOrMany::One(0.0)),
        ),
        ScenarioId::Fig4 => (
            LatticeConfig {
                kind: LatticeKind::TwoD,
                n: 7,
                m: Some(10),
                kappa: 1.0,
                delta_over_kappa: OneOrMany::One(10.0),
                disorder: None,
            },
            protocol(10.0, 201),
            InputConfig::W {
                sites: E_GLYPH.iter().map(|&c| SiteLabel::Coord(c)).collect(),
                label_base: 0,
            },
        ),
        ScenarioId::Custom => return None,
    };
    Some(ScenarioConfig {
        scenario: id,
        lattice,
        protocol,
        input,
        output: OutputConfig::default(),
    })
}

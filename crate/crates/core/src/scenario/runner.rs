use rayon::prelude::*;
use serde::Serialize;

use super::config::{Plan, ScenarioConfig};
use crate::error::{Error, Result};
use crate::lattice::{sample_disordered_couplings, DisorderSpec, LatticeSpec};
use crate::propagator::{echo_unitary, trace_evolution, EchoProtocol, EvolutionTrace};
use crate::states::fidelity;

/// Largest fidelity accepted before a result is treated as a numeric failure.
pub const FIDELITY_CEILING: f64 = 1.0 + 1e-12;

/// How independent sweep points and realizations are scheduled. Results are
/// identical either way.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub delta_over_kappa: f64,
    pub ordered_fidelity: f64,
    pub fidelities: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation (`n − 1`); 0 for a single realization.
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
}

impl EnsembleStats {
    fn new(delta_over_kappa: f64, ordered_fidelity: f64, fidelities: Vec<f64>) -> Self {
        let n = fidelities.len() as f64;
        let mean = fidelities.iter().sum::<f64>() / n;
        let std_dev = if fidelities.len() > 1 {
            (fidelities.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let min = fidelities.iter().copied().fold(f64::INFINITY, f64::min);
        let max = fidelities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        EnsembleStats {
            delta_over_kappa,
            ordered_fidelity,
            fidelities,
            mean,
            std_dev,
            min,
            max,
        }
    }

    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseCurve {
    pub n0: u32,
    /// `(φ, F)` pairs.
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Curve {
        /// `z` in units of `1/κ`.
        trace: EvolutionTrace,
        final_fidelity: f64,
    },
    DetuningSweep {
        /// `(δ/κ, F)` pairs.
        points: Vec<(f64, f64)>,
    },
    Ensemble {
        stats: Vec<EnsembleStats>,
    },
    PhaseSweep {
        curves: Vec<PhaseCurve>,
    },
    PhotonSweep {
        /// `(N₀, F)` pairs.
        points: Vec<(u32, f64)>,
    },
}

impl Outcome {
    fn fidelities(&self) -> Box<dyn Iterator<Item = f64> + '_> {
        match self {
            Outcome::Curve { trace, .. } => Box::new(trace.fidelity.iter().copied()),
            Outcome::DetuningSweep { points } => Box::new(points.iter().map(|p| p.1)),
            Outcome::Ensemble { stats } => Box::new(
                stats
                    .iter()
                    .flat_map(|s| s.fidelities.iter().copied().chain([s.ordered_fidelity])),
            ),
            Outcome::PhaseSweep { curves } => {
                Box::new(curves.iter().flat_map(|c| c.points.iter().map(|p| p.1)))
            }
            Outcome::PhotonSweep { points } => Box::new(points.iter().map(|p| p.1)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub config: ScenarioConfig,
    pub master_seed: Option<u64>,
    pub code_version: String,
    pub site_order: &'static str,
    pub units: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    pub outcome: Outcome,
    pub provenance: Provenance,
}

impl RunResult {
    pub fn config(&self) -> &ScenarioConfig {
        &self.provenance.config
    }
}

fn map_indexed<T, F>(execution: Execution, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    match execution {
        Execution::Serial => (0..count).map(f).collect(),
        Execution::Parallel => (0..count).into_par_iter().map(f).collect(),
    }
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<RunResult> {
    run_scenario_with(config, Execution::default())
}

/// Disorder ensemble; the config must carry a `lattice.disorder` block.
pub fn run_ensemble(config: &ScenarioConfig) -> Result<RunResult> {
    run_ensemble_with(config, Execution::default())
}

pub fn run_ensemble_with(config: &ScenarioConfig, execution: Execution) -> Result<RunResult> {
    if config.plan() != Plan::Ensemble {
        return Err(Error::config(
            "lattice.disorder",
            "ensemble runs need a disorder block",
        ));
    }
    run_scenario_with(config, execution)
}

pub fn run_scenario_with(config: &ScenarioConfig, execution: Execution) -> Result<RunResult> {
    config.validate()?;
    let outcome = match config.plan() {
        Plan::Curve => run_curve(config)?,
        Plan::DetuningSweep => run_detuning_sweep(config, execution)?,
        Plan::Ensemble => run_disorder_ensemble(config, execution)?,
        Plan::PhaseSweep => run_phase_sweep(config, execution)?,
        Plan::PhotonSweep => run_photon_sweep(config)?,
    };
    if let Some(f) = outcome
        .fidelities()
        .find(|f| !(0.0..=FIDELITY_CEILING).contains(f))
    {
        return Err(Error::numeric(format!("fidelity {f} outside [0, 1]")));
    }
    Ok(RunResult {
        outcome,
        provenance: Provenance {
            config: config.clone(),
            master_seed: config.lattice.disorder.as_ref().map(|d| d.seed),
            code_version: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).into(),
            site_order: "0-based; grids flattened row-major (n, m) -> n*cols + m",
            units: "rates in units of kappa, distances in units of 1/kappa",
        },
    })
}

fn single_delta(config: &ScenarioConfig) -> f64 {
    config.lattice.delta_over_kappa.values()[0]
}

fn single_point_input(config: &ScenarioConfig) -> Result<crate::states::InputState> {
    config.input.resolve(
        config.geometry()?,
        config.input.photon_grid()[0],
        config.input.phase_grid()[0],
    )
}

fn echo_fidelity(
    lattice: LatticeSpec,
    segment_length: f64,
    input: &crate::states::InputState,
) -> Result<f64> {
    let protocol = EchoProtocol::new(lattice, segment_length)?;
    fidelity(&echo_unitary(&protocol)?, input)
}

fn run_curve(config: &ScenarioConfig) -> Result<Outcome> {
    let lattice = config.ordered_lattice(single_delta(config))?;
    let protocol = EchoProtocol::new(lattice, config.segment_length())?;
    let input = single_point_input(config)?;
    let mut trace = trace_evolution(&protocol, &input, config.protocol.num_samples)?;
    let kappa = config.lattice.kappa;
    for z in &mut trace.z_grid {
        *z *= kappa;
    }
    let final_fidelity = *trace.fidelity.last().expect("at least two samples");
    Ok(Outcome::Curve {
        trace,
        final_fidelity,
    })
}

fn run_detuning_sweep(config: &ScenarioConfig, execution: Execution) -> Result<Outcome> {
    let deltas = config.lattice.delta_over_kappa.values();
    let input = single_point_input(config)?;
    let points = map_indexed(execution, deltas.len(), |i| {
        let f = echo_fidelity(
            config.ordered_lattice(deltas[i])?,
            config.segment_length(),
            &input,
        )?;
        Ok((deltas[i], f))
    })?;
    Ok(Outcome::DetuningSweep { points })
}

fn run_disorder_ensemble(config: &ScenarioConfig, execution: Execution) -> Result<Outcome> {
    let disorder = config
        .lattice
        .disorder
        .as_ref()
        .expect("ensemble plan implies a disorder block");
    let geometry = config.geometry()?;
    let kappa = config.lattice.kappa;
    let deltas = config.lattice.delta_over_kappa.values();
    let input = single_point_input(config)?;
    let length = config.segment_length();

    // per realization, one fidelity per detuning; couplings shared across detunings
    let per_realization = map_indexed(execution, disorder.ensemble, |i| {
        let spec = DisorderSpec::new(disorder.sigma_max, disorder.seed, i as u64)?;
        let couplings = sample_disordered_couplings(kappa, geometry.num_bonds(), &spec)?;
        deltas
            .iter()
            .map(|d| {
                let lattice = LatticeSpec::new(geometry, couplings.clone(), d * kappa)?;
                echo_fidelity(lattice, length, &input)
            })
            .collect::<Result<Vec<f64>>>()
    })?;

    let stats = deltas
        .iter()
        .enumerate()
        .map(|(j, &d)| {
            let ordered = echo_fidelity(config.ordered_lattice(d)?, length, &input)?;
            let fidelities = per_realization.iter().map(|row| row[j]).collect();
            Ok(EnsembleStats::new(d, ordered, fidelities))
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::Ensemble { stats })
}

fn run_phase_sweep(config: &ScenarioConfig, execution: Execution) -> Result<Outcome> {
    let geometry = config.geometry()?;
    let protocol = EchoProtocol::new(
        config.ordered_lattice(single_delta(config))?,
        config.segment_length(),
    )?;
    let u = echo_unitary(&protocol)?;
    let phases = config.input.phase_grid();
    let curves = config
        .input
        .photon_grid()
        .into_iter()
        .map(|n0| {
            let points = map_indexed(execution, phases.len(), |k| {
                let input = config.input.resolve(geometry, n0, phases[k])?;
                Ok((phases[k], fidelity(&u, &input)?))
            })?;
            Ok(PhaseCurve { n0, points })
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::PhaseSweep { curves })
}

fn run_photon_sweep(config: &ScenarioConfig) -> Result<Outcome> {
    let geometry = config.geometry()?;
    let protocol = EchoProtocol::new(
        config.ordered_lattice(single_delta(config))?,
        config.segment_length(),
    )?;
    let u = echo_unitary(&protocol)?;
    let phase = config.input.phase_grid()[0];
    let points = config
        .input
        .photon_grid()
        .into_iter()
        .map(|n0| {
            let input = config.input.resolve(geometry, n0, phase)?;
            Ok((n0, fidelity(&u, &input)?))
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::PhotonSweep { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::builtin::default_config;
    use crate::scenario::config::{DisorderConfig, ScenarioId};
    use crate::states::InputState;

    #[test]
    fn fig1_curve_ends_on_direct_echo_value() {
        let config = default_config(ScenarioId::Fig1).unwrap();
        let result = run_scenario(&config).unwrap();
        let Outcome::Curve {
            trace,
            final_fidelity,
        } = &result.outcome
        else {
            panic!("fig1 is a curve");
        };
        assert_eq!(trace.z_grid.len(), 501);
        let lattice = LatticeSpec::uniform_chain(10, 1.0, 5.0).unwrap();
        let direct =
            echo_fidelity(lattice, 25.0, &InputState::single_site(10, 3).unwrap()).unwrap();
        assert!((final_fidelity - direct).abs() < 1e-10);
    }

    #[test]
    fn ensemble_without_disorder_reproduces_ordered_value() {
        let mut config = default_config(ScenarioId::Fig2b).unwrap();
        config.lattice.disorder = Some(DisorderConfig {
            sigma_max: 0.0,
            ensemble: 4,
            seed: 1,
        });
        let Outcome::Ensemble { stats } = run_ensemble(&config).unwrap().outcome else {
            panic!("ensemble expected");
        };
        for s in stats {
            assert!(s.fidelities.iter().all(|f| *f == s.ordered_fidelity));
            assert_eq!(s.spread(), 0.0);
        }
    }

    #[test]
    fn single_realization_matches_explicit_couplings() {
        let mut config = default_config(ScenarioId::Fig2b).unwrap();
        config.lattice.disorder.as_mut().unwrap().ensemble = 1;
        let Outcome::Ensemble { stats } = run_ensemble(&config).unwrap().outcome else {
            panic!("ensemble expected");
        };
        let spec = DisorderSpec::new(0.2, config.lattice.disorder.unwrap().seed, 0).unwrap();
        let couplings = sample_disordered_couplings(1.0, 9, &spec).unwrap();
        for s in stats {
            let lattice = LatticeSpec::chain(couplings.clone(), s.delta_over_kappa).unwrap();
            let f = echo_fidelity(lattice, 25.0, &InputState::single_site(10, 3).unwrap()).unwrap();
            assert_eq!(s.fidelities, vec![f]);
            assert_eq!(s.std_dev, 0.0);
        }
    }

    #[test]
    fn serial_and_parallel_agree_bitwise() {
        let mut config = default_config(ScenarioId::Fig2b).unwrap();
        config.lattice.disorder.as_mut().unwrap().ensemble = 16;
        let a = run_scenario_with(&config, Execution::Serial).unwrap();
        let b = run_scenario_with(&config, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ensemble_requires_disorder() {
        let config = default_config(ScenarioId::Fig1).unwrap();
        assert!(matches!(run_ensemble(&config), Err(Error::Config { .. })));
    }

    #[test]
    fn photon_sweep_decays() {
        let config = default_config(ScenarioId::Fig3b).unwrap();
        let Outcome::PhotonSweep { points } = run_scenario(&config).unwrap().outcome else {
            panic!("photon sweep expected");
        };
        assert_eq!(points.len(), 6);
        for w in points.windows(2) {
            assert!(w[1].1 <= w[0].1, "{points:?}");
        }
    }

    #[test]
    fn phase_sweep_has_one_curve_per_photon_number() {
        let config = default_config(ScenarioId::Fig3a).unwrap();
        let Outcome::PhaseSweep { curves } = run_scenario(&config).unwrap().outcome else {
            panic!("phase sweep expected");
        };
        assert_eq!(curves.iter().map(|c| c.n0).collect::<Vec<_>>(), vec![1, 2]);
        for c in &curves {
            assert_eq!(c.points.len(), 73);
            let (first, last) = (c.points[0].1, c.points[72].1);
            assert!((first - last).abs() < 1e-12);
        }
    }

    #[test]
    fn kappa_only_sets_units() {
        let base = default_config(ScenarioId::Fig1).unwrap();
        let mut scaled = base.clone();
        scaled.lattice.kappa = 2.0;
        let (Outcome::Curve { trace: a, .. }, Outcome::Curve { trace: b, .. }) = (
            run_scenario(&base).unwrap().outcome,
            run_scenario(&scaled).unwrap().outcome,
        ) else {
            panic!("curves expected");
        };
        for (x, y) in a.fidelity.iter().zip(&b.fidelity) {
            assert!((x - y).abs() < 1e-9);
        }
        for (x, y) in a.z_grid.iter().zip(&b.z_grid) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

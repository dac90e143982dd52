//! Declarative scenario configuration (JSON).

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Geometry, LatticeSpec};
use crate::states::InputState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioId {
    Fig1,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4,
    Custom,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 7] = [
        ScenarioId::Fig1,
        ScenarioId::Fig2a,
        ScenarioId::Fig2b,
        ScenarioId::Fig3a,
        ScenarioId::Fig3b,
        ScenarioId::Fig4,
        ScenarioId::Custom,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioId::Fig1 => "fig1",
            ScenarioId::Fig2a => "fig2a",
            ScenarioId::Fig2b => "fig2b",
            ScenarioId::Fig3a => "fig3a",
            ScenarioId::Fig3b => "fig3b",
            ScenarioId::Fig4 => "fig4",
            ScenarioId::Custom => "custom",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            ScenarioId::Fig1 => "N=10 chain, delta/kappa=5, 2L=50/kappa, photon at site 3: intensity map and fidelity curve",
            ScenarioId::Fig2a => "N=10 chain, output fidelity versus delta/kappa",
            ScenarioId::Fig2b => "N=10 chain, 100 coupling-disorder realizations (sigma_max=0.2) at delta/kappa 5 and 10",
            ScenarioId::Fig3a => "N=10 chain, NOON state on sites 1,2 with N0 in {1,2}: output fidelity versus phase",
            ScenarioId::Fig3b => "N=10 chain, NOON state on sites 1,2 at phase 0: output fidelity versus N0",
            ScenarioId::Fig4 => "7x10 grid, delta/kappa=10, L=10/kappa, 8-site W state shaped as an E",
            ScenarioId::Custom => "user-supplied config (requires --config)",
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::config("scenario", format!("unknown scenario `{s}`")))
    }
}

/// A scalar or a sweep grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Copy> OneOrMany<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(v) => v.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            OneOrMany::One(_) => 1,
            OneOrMany::Many(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeKind {
    #[serde(rename = "1d")]
    OneD,
    #[serde(rename = "2d")]
    TwoD,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderConfig {
    pub sigma_max: f64,
    pub ensemble: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub kind: LatticeKind,
    /// Sites of a chain, or rows of a grid.
    pub n: usize,
    /// Columns of a grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    pub delta_over_kappa: OneOrMany<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disorder: Option<DisorderConfig>,
}

fn default_kappa() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolConfig {
    /// `L` in units of `1/κ`.
    pub segment_length: f64,
    #[serde(default = "default_num_samples")]
    pub num_samples: usize,
}

pub const DEFAULT_NUM_SAMPLES: usize = 501;

fn default_num_samples() -> usize {
    DEFAULT_NUM_SAMPLES
}

/// A site label: flat index, or `[row, col]` on grids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SiteLabel {
    Index(usize),
    Coord([usize; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum InputConfig {
    /// Unit excitation of `site`, or explicit `[re, im]` amplitudes.
    Single {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        site: Option<SiteLabel>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        amplitudes: Option<Vec<[f64; 2]>>,
        #[serde(default)]
        label_base: usize,
    },
    Fock {
        site: SiteLabel,
        n0: OneOrMany<u32>,
        #[serde(default)]
        label_base: usize,
    },
    Noon {
        sites: [SiteLabel; 2],
        n0: OneOrMany<u32>,
        #[serde(default = "default_phi")]
        phi: OneOrMany<f64>,
        #[serde(default)]
        label_base: usize,
    },
    W {
        sites: Vec<SiteLabel>,
        #[serde(default)]
        label_base: usize,
    },
}

fn default_phi() -> OneOrMany<f64> {
    OneOrMany::One(0.0)
}

impl InputConfig {
    pub fn photon_grid(&self) -> Vec<u32> {
        match self {
            InputConfig::Fock { n0, .. } | InputConfig::Noon { n0, .. } => n0.values(),
            _ => vec![1],
        }
    }

    pub fn phase_grid(&self) -> Vec<f64> {
        match self {
            InputConfig::Noon { phi, .. } => phi.values(),
            _ => vec![0.0],
        }
    }

    fn label_base(&self) -> usize {
        match self {
            InputConfig::Single { label_base, .. }
            | InputConfig::Fock { label_base, .. }
            | InputConfig::Noon { label_base, .. }
            | InputConfig::W { label_base, .. } => *label_base,
        }
    }

    fn resolve_site(&self, geometry: Geometry, label: SiteLabel, path: &str) -> Result<usize> {
        let base = self.label_base();
        let shift = |v: usize| {
            v.checked_sub(base)
                .ok_or_else(|| Error::config(path, format!("label {v} is below label_base {base}")))
        };
        let site = match label {
            SiteLabel::Index(i) => {
                let i = shift(i)?;
                (i < geometry.num_sites()).then_some(i)
            }
            SiteLabel::Coord([r, c]) => {
                if matches!(geometry, Geometry::Chain { .. }) {
                    return Err(Error::config(path, "chain sites take a single index"));
                }
                geometry.site_index(shift(r)?, shift(c)?)
            }
        };
        site.ok_or_else(|| Error::config(path, format!("{label:?} is outside the lattice")))
    }

    /// Concrete state for one point of the photon-number/phase grid.
    pub fn resolve(&self, geometry: Geometry, photons: u32, phase: f64) -> Result<InputState> {
        let dim = geometry.num_sites();
        let state = match self {
            InputConfig::Single {
                site, amplitudes, ..
            } => match (site, amplitudes) {
                (Some(label), None) => {
                    let s = self.resolve_site(geometry, *label, "input.site")?;
                    InputState::single_site(dim, s)?
                }
                (None, Some(amps)) => {
                    if amps.len() != dim {
                        return Err(Error::config(
                            "input.amplitudes",
                            format!("{} amplitudes for {dim} sites", amps.len()),
                        ));
                    }
                    let v = DVector::from_iterator(
                        dim,
                        amps.iter().map(|[re, im]| Complex64::new(*re, *im)),
                    );
                    InputState::SingleParticle { amplitudes: v }
                }
                _ => {
                    return Err(Error::config(
                        "input",
                        "single input needs exactly one of `site` or `amplitudes`",
                    ))
                }
            },
            InputConfig::Fock { site, .. } => InputState::Fock {
                site: self.resolve_site(geometry, *site, "input.site")?,
                photons,
            },
            InputConfig::Noon { sites, .. } => InputState::Noon {
                sites: (
                    self.resolve_site(geometry, sites[0], "input.sites[0]")?,
                    self.resolve_site(geometry, sites[1], "input.sites[1]")?,
                ),
                photons,
                phase,
            },
            InputConfig::W { sites, .. } => InputState::W {
                sites: sites
                    .iter()
                    .enumerate()
                    .map(|(i, s)| self.resolve_site(geometry, *s, &format!("input.sites[{i}]")))
                    .collect::<Result<_>>()?,
            },
        };
        state
            .validate(dim)
            .map_err(|e| Error::config("input", e.to_string()))?;
        Ok(state)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::config(
                "output.format",
                format!("unknown format `{other}`"),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub dir: String,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_out_dir() -> String {
    "out".to_string()
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: default_out_dir(),
            format: OutputFormat::Csv,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioId,
    pub lattice: LatticeConfig,
    pub protocol: ProtocolConfig,
    pub input: InputConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Which analysis a config asks for, inferred from its sweep axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Plan {
    /// Trace over `[0, 2L]` at a single parameter point.
    Curve,
    /// Output fidelity along the `delta_over_kappa` grid.
    DetuningSweep,
    /// Disorder realizations at each `delta_over_kappa`.
    Ensemble,
    /// NOON output fidelity along the phase grid, one curve per photon number.
    PhaseSweep,
    /// Output fidelity along the photon-number grid.
    PhotonSweep,
}

impl ScenarioConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(path, e.into_inner().to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("--config", format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn geometry(&self) -> Result<Geometry> {
        let l = &self.lattice;
        match (l.kind, l.m) {
            (LatticeKind::OneD, None) => Ok(Geometry::Chain { sites: l.n }),
            (LatticeKind::OneD, Some(_)) => Err(Error::config(
                "lattice.m",
                "`m` is only valid for 2d lattices",
            )),
            (LatticeKind::TwoD, Some(m)) => Ok(Geometry::Grid { rows: l.n, cols: m }),
            (LatticeKind::TwoD, None) => Err(Error::config("lattice.m", "2d lattices need `m`")),
        }
    }

    /// Ordered lattice at one detuning, couplings all `κ`.
    pub fn ordered_lattice(&self, delta_over_kappa: f64) -> Result<LatticeSpec> {
        let geometry = self.geometry()?;
        let kappa = self.lattice.kappa;
        LatticeSpec::new(
            geometry,
            vec![kappa; geometry.num_bonds()],
            delta_over_kappa * kappa,
        )
        .map_err(|e| Error::config("lattice", e.to_string()))
    }

    /// `L` in physical units (`segment_length / κ`).
    pub fn segment_length(&self) -> f64 {
        self.protocol.segment_length / self.lattice.kappa
    }

    pub fn plan(&self) -> Plan {
        if self.lattice.disorder.is_some() {
            Plan::Ensemble
        } else if self.lattice.delta_over_kappa.len() > 1 {
            Plan::DetuningSweep
        } else if self.input.phase_grid().len() > 1 {
            Plan::PhaseSweep
        } else if self.input.photon_grid().len() > 1 {
            Plan::PhotonSweep
        } else {
            Plan::Curve
        }
    }

    pub fn validate(&self) -> Result<()> {
        let geometry = self.geometry()?;
        let l = &self.lattice;
        if geometry.num_sites() < 2 || l.n == 0 {
            return Err(Error::config("lattice.n", "lattice needs at least 2 sites"));
        }
        if !(l.kappa > 0.0 && l.kappa.is_finite()) {
            return Err(Error::config("lattice.kappa", "must be finite and > 0"));
        }
        let deltas = l.delta_over_kappa.values();
        if deltas.is_empty() {
            return Err(Error::config("lattice.delta_over_kappa", "grid is empty"));
        }
        if let Some(d) = deltas.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(Error::config(
                "lattice.delta_over_kappa",
                format!("values must be finite and > 0, got {d}"),
            ));
        }
        if let Some(d) = &l.disorder {
            if !(0.0..1.0).contains(&d.sigma_max) {
                return Err(Error::config(
                    "lattice.disorder.sigma_max",
                    format!("must lie in [0, 1), got {}", d.sigma_max),
                ));
            }
            if d.ensemble == 0 {
                return Err(Error::config("lattice.disorder.ensemble", "must be >= 1"));
            }
        }

        let p = &self.protocol;
        if !(p.segment_length >= 0.0 && p.segment_length.is_finite()) {
            return Err(Error::config(
                "protocol.segment_length",
                "must be finite and >= 0",
            ));
        }
        if p.num_samples < 2 {
            return Err(Error::config("protocol.num_samples", "must be >= 2"));
        }

        let photons = self.input.photon_grid();
        if photons.is_empty() {
            return Err(Error::config("input.n0", "grid is empty"));
        }
        if photons.contains(&0) {
            return Err(Error::config("input.n0", "photon numbers must be >= 1"));
        }
        let phases = self.input.phase_grid();
        if phases.is_empty() {
            return Err(Error::config("input.phi", "grid is empty"));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::config("input.phi", "phases must be finite"));
        }

        let plan = self.plan();
        let extra_axes = match plan {
            Plan::Ensemble | Plan::DetuningSweep | Plan::Curve => {
                (photons.len() > 1) as usize + (phases.len() > 1) as usize
            }
            Plan::PhaseSweep | Plan::PhotonSweep => 0,
        };
        if extra_axes > 0 {
            return Err(Error::config(
                "input",
                format!("{plan:?} runs take a single photon number and phase"),
            ));
        }
        // resolve once so bad sites are reported up front
        self.input.resolve(geometry, photons[0], phases[0])?;
        Ok(())
    }
}

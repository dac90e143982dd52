//! Input states and Loschmidt-echo fidelities.
//!
//! All fidelities are moduli of overlaps, `F = |⟨ψ(0)|Û|ψ(0)⟩|`, where `Û` is
//! the many-photon operator induced by a single-particle propagator `U`.
//! Single-photon, W and classical inputs reduce to a vector overlap; Fock and
//! NOON inputs have closed forms in the entries of `U`, checked against the
//! permanent-based [`oracle`].

pub mod oracle;
pub mod permanent;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::propagator::Unitary;

pub use oracle::{fock_space_fidelity_oracle, OccupationVector};
pub use permanent::permanent;

#[derive(Clone, Debug, PartialEq)]
pub enum InputState {
    /// One photon (or classical field) with amplitudes `α_n`, any norm.
    SingleParticle { amplitudes: DVector<Complex64> },
    /// `(a†_site)^N₀ / √N₀! |0⟩`.
    Fock { site: usize, photons: u32 },
    /// `(|N₀,0⟩ + e^{iφ}|0,N₀⟩)/√2` on the two sites.
    Noon {
        sites: (usize, usize),
        photons: u32,
        phase: f64,
    },
    /// One photon shared with equal amplitude over `sites`.
    W { sites: Vec<usize> },
}

impl InputState {
    /// Unit excitation of one site.
    pub fn single_site(dim: usize, site: usize) -> Result<Self> {
        if site >= dim {
            return Err(Error::spec(format!(
                "site {site} out of range for {dim} sites"
            )));
        }
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[site] = Complex64::new(1.0, 0.0);
        Ok(InputState::SingleParticle { amplitudes })
    }

    pub fn photon_count(&self) -> u32 {
        match self {
            InputState::SingleParticle { .. } | InputState::W { .. } => 1,
            InputState::Fock { photons, .. } | InputState::Noon { photons, .. } => *photons,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            InputState::SingleParticle { .. } => "single",
            InputState::Fock { .. } => "fock",
            InputState::Noon { .. } => "noon",
            InputState::W { .. } => "w",
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let check_site = |s: usize| {
            if s >= dim {
                Err(Error::spec(format!(
                    "site {s} out of range for {dim} sites"
                )))
            } else {
                Ok(())
            }
        };
        match self {
            InputState::SingleParticle { amplitudes } => {
                if amplitudes.len() != dim {
                    return Err(Error::spec(format!(
                        "{} amplitudes for {dim} sites",
                        amplitudes.len()
                    )));
                }
                if amplitudes
                    .iter()
                    .any(|a| !a.re.is_finite() || !a.im.is_finite())
                {
                    return Err(Error::spec("amplitudes must be finite"));
                }
                if amplitudes.norm_squared() == 0.0 {
                    return Err(Error::spec("input amplitudes are all zero"));
                }
            }
            InputState::Fock { site, photons } => {
                check_site(*site)?;
                if *photons == 0 {
                    return Err(Error::spec("Fock state needs at least one photon"));
                }
            }
            InputState::Noon {
                sites: (a, b),
                photons,
                phase,
            } => {
                check_site(*a)?;
                check_site(*b)?;
                if a == b {
                    return Err(Error::spec(format!("NOON sites must differ, both are {a}")));
                }
                if *photons == 0 {
                    return Err(Error::spec("NOON state needs at least one photon"));
                }
                if !phase.is_finite() {
                    return Err(Error::spec("NOON phase must be finite"));
                }
            }
            InputState::W { sites } => {
                if sites.is_empty() {
                    return Err(Error::spec("W state needs at least one site"));
                }
                let mut seen = vec![false; dim];
                for &s in sites {
                    check_site(s)?;
                    if std::mem::replace(&mut seen[s], true) {
                        return Err(Error::spec(format!("W state lists site {s} twice")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Normalized single-particle amplitudes, for inputs that have them.
    pub fn single_particle_amplitudes(&self, dim: usize) -> Option<DVector<Complex64>> {
        match self {
            InputState::SingleParticle { amplitudes } => {
                Some(amplitudes / Complex64::from(amplitudes.norm()))
            }
            InputState::W { sites } => Some(w_amplitudes(dim, sites)),
            InputState::Noon {
                sites: (a, b),
                photons: 1,
                phase,
            } => {
                let mut v = DVector::zeros(dim);
                v[*a] = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
                v[*b] = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, *phase);
                Some(v)
            }
            InputState::Fock {
                site, photons: 1, ..
            } => {
                let mut v = DVector::zeros(dim);
                v[*site] = Complex64::new(1.0, 0.0);
                Some(v)
            }
            _ => None,
        }
    }

    /// `ρ_ij = ⟨ψ|b†_i b_j|ψ⟩`; its trace is the photon number.
    pub fn one_body_density(&self, dim: usize) -> Result<DMatrix<Complex64>> {
        self.validate(dim)?;
        if let Some(alpha) = self.single_particle_amplitudes(dim) {
            return Ok(DMatrix::from_fn(dim, dim, |i, j| {
                alpha[i].conj() * alpha[j]
            }));
        }
        let mut rho = DMatrix::zeros(dim, dim);
        match self {
            InputState::Fock { site, photons } => {
                rho[(*site, *site)] = Complex64::from(f64::from(*photons));
            }
            // N₀ ≥ 2: b†_i b_j cannot connect |N₀,0⟩ and |0,N₀⟩
            InputState::Noon {
                sites: (a, b),
                photons,
                ..
            } => {
                let half = Complex64::from(f64::from(*photons) / 2.0);
                rho[(*a, *a)] = half;
                rho[(*b, *b)] = half;
            }
            _ => unreachable!("single-particle inputs handled above"),
        }
        Ok(rho)
    }
}

fn w_amplitudes(dim: usize, sites: &[usize]) -> DVector<Complex64> {
    let amp = Complex64::from(1.0 / (sites.len() as f64).sqrt());
    let mut v = DVector::zeros(dim);
    for &s in sites {
        v[s] = amp;
    }
    v
}

/// Ordered `(z, F)` samples.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FidelityCurve {
    pub points: Vec<(f64, f64)>,
}

impl FidelityCurve {
    pub fn new(points: Vec<(f64, f64)>) -> Self {
        FidelityCurve { points }
    }

    pub fn last(&self) -> Option<f64> {
        self.points.last().map(|p| p.1)
    }
}

fn check_dim(u: &Unitary, dim: usize) -> Result<()> {
    if u.dim() != dim {
        return Err(Error::spec(format!(
            "propagator acts on {} sites, state has {dim}",
            u.dim()
        )));
    }
    Ok(())
}

fn check_index(u: &Unitary, site: usize) -> Result<()> {
    if site >= u.dim() {
        return Err(Error::spec(format!(
            "site {site} out of range for {} sites",
            u.dim()
        )));
    }
    Ok(())
}

/// `F = |Σ_n conj(α_n) (Uα)_n| / 𝒩`, `𝒩 = Σ|α_n|²`.
///
/// Same value for classical light and for the one-photon state built from `α`.
pub fn fidelity_single(u: &Unitary, alpha0: &DVector<Complex64>) -> Result<f64> {
    check_dim(u, alpha0.len())?;
    let norm = alpha0.norm_squared();
    if norm == 0.0 {
        return Err(Error::spec("input amplitudes are all zero"));
    }
    let evolved = u.apply(alpha0);
    Ok(alpha0.dotc(&evolved).norm() / norm)
}

/// `F = |U_ss|^N₀`, the single-photon fidelity raised to the photon number.
pub fn fidelity_fock(u: &Unitary, site: usize, photons: u32) -> Result<f64> {
    check_index(u, site)?;
    if photons == 0 {
        return Err(Error::spec("Fock state needs at least one photon"));
    }
    Ok(u.entry(site, site).norm().powi(photons as i32))
}

/// `F = ½ |U₁₁^N + U₂₂^N + e^{iφ} U₁₂^N + e^{−iφ} U₂₁^N|` for sites 1 = `n1`, 2 = `n2`.
///
/// `⟨N,0|Û|N,0⟩ = U₁₁^N` because all N photons must stay in mode 1 (the
/// permanent of an all-`U₁₁` block is `N! U₁₁^N`, cancelled by the
/// normalizations), and `⟨N,0|Û|0,N⟩ = U₁₂^N` likewise. Expanding
/// `⟨ψ|Û|ψ⟩` over the two branches gives the four terms.
pub fn fidelity_noon(u: &Unitary, n1: usize, n2: usize, photons: u32, phase: f64) -> Result<f64> {
    check_index(u, n1)?;
    check_index(u, n2)?;
    if n1 == n2 {
        return Err(Error::spec(format!(
            "NOON sites must differ, both are {n1}"
        )));
    }
    if photons == 0 {
        return Err(Error::spec("NOON state needs at least one photon"));
    }
    let p = photons as i32;
    let phase = phase.rem_euclid(std::f64::consts::TAU);
    let e = Complex64::from_polar(1.0, phase);
    let overlap = u.entry(n1, n1).powi(p)
        + u.entry(n2, n2).powi(p)
        + e * u.entry(n1, n2).powi(p)
        + e.conj() * u.entry(n2, n1).powi(p);
    Ok(0.5 * overlap.norm())
}

/// Single-photon W state over `sites`.
pub fn fidelity_w(u: &Unitary, sites: &[usize]) -> Result<f64> {
    if sites.is_empty() {
        return Err(Error::spec("W state needs at least one site"));
    }
    InputState::W {
        sites: sites.to_vec(),
    }
    .validate(u.dim())?;
    fidelity_single(u, &w_amplitudes(u.dim(), sites))
}

/// Closed-form fidelity for any input state.
pub fn fidelity(u: &Unitary, input: &InputState) -> Result<f64> {
    input.validate(u.dim())?;
    match input {
        InputState::SingleParticle { amplitudes } => fidelity_single(u, amplitudes),
        InputState::Fock { site, photons } => fidelity_fock(u, *site, *photons),
        InputState::Noon {
            sites: (a, b),
            photons,
            phase,
        } => fidelity_noon(u, *a, *b, *photons, *phase),
        InputState::W { sites } => fidelity_w(u, sites),
    }
}

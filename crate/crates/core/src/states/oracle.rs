//! Brute-force Fock-space reference for the closed-form fidelities.
//!
//! The input state is expanded over occupation vectors, every branch is
//! pushed through the linear network one permanent at a time, and the full
//! output state is assembled over the whole `N`-photon occupation basis. Only
//! small problems are accepted: at most [`MAX_PHOTONS`] photons on at most
//! [`MAX_SITES`] sites (at most 330 basis states).

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{permanent, InputState};
use crate::error::{Error, Result};
use crate::propagator::Unitary;

pub const MAX_PHOTONS: u32 = 4;
pub const MAX_SITES: usize = 8;

/// Photon count per site.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationVector(pub Vec<u32>);

impl OccupationVector {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Site list with each site repeated by its occupation.
    fn expanded_modes(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(site, &count)| std::iter::repeat_n(site, count as usize))
            .collect()
    }

    fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&c| factorial(c)).product()
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// All ways to place `photons` indistinguishable photons on `sites` sites.
pub fn enumerate_occupations(sites: usize, photons: u32) -> Vec<OccupationVector> {
    fn go(sites: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<OccupationVector>) {
        if prefix.len() + 1 == sites {
            prefix.push(left);
            out.push(OccupationVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for c in (0..=left).rev() {
            prefix.push(c);
            go(sites, left - c, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if sites > 0 {
        go(sites, photons, &mut Vec::with_capacity(sites), &mut out);
    }
    out
}

/// `⟨t|Û|s⟩ = per(U[t|s]) / √(Π s_i! Π t_i!)`, rows repeated per `t`, columns per `s`.
pub fn transition_amplitude(
    u: &Unitary,
    input: &OccupationVector,
    output: &OccupationVector,
) -> Result<Complex64> {
    if input.total() != output.total() {
        return Ok(Complex64::default());
    }
    let cols = input.expanded_modes();
    let rows = output.expanded_modes();
    let sub = DMatrix::from_fn(rows.len(), cols.len(), |r, c| u.entry(rows[r], cols[c]));
    let norm = (input.factorial_product() * output.factorial_product()).sqrt();
    Ok(permanent(&sub)? / norm)
}

fn unit_occupation(dim: usize, site: usize, photons: u32) -> OccupationVector {
    let mut occ = vec![0; dim];
    occ[site] = photons;
    OccupationVector(occ)
}

/// The input as a superposition of occupation vectors with normalized amplitudes.
pub fn input_branches(
    input: &InputState,
    dim: usize,
) -> Result<Vec<(OccupationVector, Complex64)>> {
    input.validate(dim)?;
    let branches = match input {
        InputState::SingleParticle { amplitudes } => {
            let norm = amplitudes.norm();
            amplitudes
                .iter()
                .enumerate()
                .filter(|(_, a)| **a != Complex64::default())
                .map(|(site, a)| (unit_occupation(dim, site, 1), a / norm))
                .collect()
        }
        InputState::Fock { site, photons } => {
            vec![(
                unit_occupation(dim, *site, *photons),
                Complex64::new(1.0, 0.0),
            )]
        }
        InputState::Noon {
            sites: (a, b),
            photons,
            phase,
        } => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            vec![
                (unit_occupation(dim, *a, *photons), Complex64::new(r, 0.0)),
                (
                    unit_occupation(dim, *b, *photons),
                    Complex64::from_polar(r, *phase),
                ),
            ]
        }
        InputState::W { sites } => {
            let amp = Complex64::new(1.0 / (sites.len() as f64).sqrt(), 0.0);
            sites
                .iter()
                .map(|&s| (unit_occupation(dim, s, 1), amp))
                .collect()
        }
    };
    Ok(branches)
}

fn check_capacity(dim: usize, photons: u32) -> Result<()> {
    if photons > MAX_PHOTONS || dim > MAX_SITES {
        return Err(Error::Capacity(format!(
            "oracle handles at most {MAX_PHOTONS} photons on {MAX_SITES} sites, \
             got {photons} photons on {dim} sites"
        )));
    }
    Ok(())
}

/// Output state of `input` over the full occupation basis, in
/// [`enumerate_occupations`] order.
pub fn evolve_fock_state(
    u: &Unitary,
    input: &InputState,
) -> Result<Vec<(OccupationVector, Complex64)>> {
    let dim = u.dim();
    let photons = input.photon_count();
    check_capacity(dim, photons)?;
    let branches = input_branches(input, dim)?;
    enumerate_occupations(dim, photons)
        .into_iter()
        .map(|t| {
            let mut amp = Complex64::default();
            for (s, c) in &branches {
                amp += c * transition_amplitude(u, s, &t)?;
            }
            Ok((t, amp))
        })
        .collect()
}

/// `F = |⟨ψ(0)|Û|ψ(0)⟩|` computed in the occupation basis.
pub fn fock_space_fidelity_oracle(u: &Unitary, input: &InputState) -> Result<f64> {
    let dim = u.dim();
    check_capacity(dim, input.photon_count())?;
    let initial: HashMap<OccupationVector, Complex64> =
        input_branches(input, dim)?.into_iter().collect();
    let overlap: Complex64 = evolve_fock_state(u, input)?
        .into_iter()
        .filter_map(|(t, amp)| initial.get(&t).map(|c| c.conj() * amp))
        .sum();
    Ok(overlap.norm())
}

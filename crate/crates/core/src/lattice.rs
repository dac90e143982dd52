//! Binary-lattice geometry and single-particle Hamiltonians.
//!
//! Sites are 0-based. Site `n` of a chain (or `(n, m)` of a grid) carries the
//! on-site detuning `(-1)^n δ` (resp. `(-1)^(n+m) δ`), so site 0 always belongs
//! to sublattice A with `+δ`. Grid sites are flattened row-major,
//! `(n, m) → n·cols + m`.
//!
//! All rates are in units of the reference coupling `κ`, distances in `1/κ`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Geometry {
    Chain { sites: usize },
    Grid { rows: usize, cols: usize },
}

impl Geometry {
    pub fn num_sites(&self) -> usize {
        match *self {
            Geometry::Chain { sites } => sites,
            Geometry::Grid { rows, cols } => rows * cols,
        }
    }

    /// Number of nearest-neighbour bonds, i.e. the required coupling count.
    pub fn num_bonds(&self) -> usize {
        match *self {
            Geometry::Chain { sites } => sites.saturating_sub(1),
            Geometry::Grid { rows, cols } => {
                rows * cols.saturating_sub(1) + rows.saturating_sub(1) * cols
            }
        }
    }

    /// Nearest-neighbour bonds `(s, t)` with `s < t`, in coupling-list order.
    ///
    /// For grids the horizontal bonds come first (row-major), then the
    /// vertical ones (row-major).
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        match *self {
            Geometry::Chain { sites } => (0..sites.saturating_sub(1)).map(|n| (n, n + 1)).collect(),
            Geometry::Grid { rows, cols } => {
                let mut bonds = Vec::with_capacity(self.num_bonds());
                for n in 0..rows {
                    for m in 0..cols.saturating_sub(1) {
                        bonds.push((n * cols + m, n * cols + m + 1));
                    }
                }
                for n in 0..rows.saturating_sub(1) {
                    for m in 0..cols {
                        bonds.push((n * cols + m, (n + 1) * cols + m));
                    }
                }
                bonds
            }
        }
    }

    /// `+1` on sublattice A, `-1` on sublattice B.
    pub fn parity_sign(&self, site: usize) -> f64 {
        let parity = match *self {
            Geometry::Chain { .. } => site,
            Geometry::Grid { cols, .. } => site / cols + site % cols,
        };
        if parity % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Flattened index of grid coordinate `(row, col)`; chains accept `row == 0`.
    pub fn site_index(&self, row: usize, col: usize) -> Option<usize> {
        match *self {
            Geometry::Chain { sites } => (row == 0 && col < sites).then_some(col),
            Geometry::Grid { rows, cols } => (row < rows && col < cols).then_some(row * cols + col),
        }
    }
}

/// Problem definition of a binary lattice: geometry, bond couplings, detuning.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    geometry: Geometry,
    couplings: Vec<f64>,
    delta: f64,
}

impl LatticeSpec {
    pub fn new(geometry: Geometry, couplings: Vec<f64>, delta: f64) -> Result<Self> {
        let spec = LatticeSpec {
            geometry,
            couplings,
            delta,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn chain(couplings: Vec<f64>, delta: f64) -> Result<Self> {
        let sites = couplings.len() + 1;
        Self::new(Geometry::Chain { sites }, couplings, delta)
    }

    pub fn uniform_chain(sites: usize, kappa: f64, delta: f64) -> Result<Self> {
        Self::new(
            Geometry::Chain { sites },
            vec![kappa; sites.saturating_sub(1)],
            delta,
        )
    }

    pub fn grid(rows: usize, cols: usize, couplings: Vec<f64>, delta: f64) -> Result<Self> {
        Self::new(Geometry::Grid { rows, cols }, couplings, delta)
    }

    pub fn uniform_grid(rows: usize, cols: usize, kappa: f64, delta: f64) -> Result<Self> {
        Self::uniform_grid_anisotropic(rows, cols, kappa, kappa, delta)
    }

    /// Grid with one coupling along rows (`horizontal`) and another along columns.
    pub fn uniform_grid_anisotropic(
        rows: usize,
        cols: usize,
        horizontal: f64,
        vertical: f64,
        delta: f64,
    ) -> Result<Self> {
        let mut couplings = vec![horizontal; rows * cols.saturating_sub(1)];
        couplings.extend(std::iter::repeat_n(vertical, rows.saturating_sub(1) * cols));
        Self::grid(rows, cols, couplings, delta)
    }

    pub fn validate(&self) -> Result<()> {
        match self.geometry {
            Geometry::Chain { sites } if sites < 2 => {
                return Err(Error::spec(format!(
                    "chain needs at least 2 sites, got {sites}"
                )))
            }
            Geometry::Grid { rows, cols } if rows == 0 || cols == 0 || rows * cols < 2 => {
                return Err(Error::spec(format!(
                    "grid needs at least 2 sites, got {rows}x{cols}"
                )))
            }
            _ => {}
        }
        let expected = self.geometry.num_bonds();
        if self.couplings.len() != expected {
            return Err(Error::spec(format!(
                "expected {expected} couplings for {:?}, got {}",
                self.geometry,
                self.couplings.len()
            )));
        }
        if let Some((i, k)) = self
            .couplings
            .iter()
            .enumerate()
            .find(|(_, k)| !k.is_finite() || **k < 0.0)
        {
            return Err(Error::spec(format!(
                "coupling {i} must be finite and >= 0, got {k}"
            )));
        }
        if !self.delta.is_finite() {
            return Err(Error::spec(format!(
                "detuning must be finite, got {}",
                self.delta
            )));
        }
        Ok(())
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn num_sites(&self) -> usize {
        self.geometry.num_sites()
    }

    /// Same lattice with the sublattices exchanged (`δ → −δ`).
    pub fn flip_detuning(&self) -> Self {
        LatticeSpec {
            delta: -self.delta,
            ..self.clone()
        }
    }

    /// Same geometry and detuning with a new coupling list.
    pub fn with_couplings(&self, couplings: Vec<f64>) -> Result<Self> {
        Self::new(self.geometry, couplings, self.delta)
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(self.geometry, self.couplings.clone(), delta)
    }

    /// Builds the single-particle Hamiltonian for either geometry.
    pub fn hamiltonian(&self) -> Result<Hamiltonian> {
        match self.geometry {
            Geometry::Chain { .. } => build_hamiltonian_1d(self),
            Geometry::Grid { .. } => build_hamiltonian_2d(self),
        }
    }
}

/// Dense real-symmetric single-particle Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    geometry: Geometry,
    matrix: DMatrix<f64>,
}

impl Hamiltonian {
    /// Wraps an arbitrary real-symmetric matrix (used for effective and
    /// reversed Hamiltonians, which are not nearest-neighbour).
    pub fn from_matrix(geometry: Geometry, matrix: DMatrix<f64>) -> Result<Self> {
        let dim = geometry.num_sites();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::spec(format!(
                "matrix is {}x{}, geometry has {dim} sites",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix != matrix.transpose() {
            return Err(Error::spec("Hamiltonian matrix is not symmetric"));
        }
        Ok(Hamiltonian { geometry, matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `−H`: the full time reversal of this Hamiltonian.
    pub fn negated(&self) -> Self {
        Hamiltonian {
            geometry: self.geometry,
            matrix: -&self.matrix,
        }
    }
}

fn assemble(spec: &LatticeSpec) -> Hamiltonian {
    let geometry = spec.geometry;
    let dim = geometry.num_sites();
    let mut matrix = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        matrix[(s, s)] = geometry.parity_sign(s) * spec.delta;
    }
    for (&(s, t), &k) in geometry.bonds().iter().zip(&spec.couplings) {
        matrix[(s, t)] = k;
        matrix[(t, s)] = k;
    }
    Hamiltonian { geometry, matrix }
}

/// `H[n][n+1] = H[n+1][n] = κ_n`, `H[n][n] = (−1)^n δ`.
pub fn build_hamiltonian_1d(spec: &LatticeSpec) -> Result<Hamiltonian> {
    spec.validate()?;
    if !matches!(spec.geometry, Geometry::Chain { .. }) {
        return Err(Error::spec("build_hamiltonian_1d needs a chain geometry"));
    }
    Ok(assemble(spec))
}

/// Row/column nearest-neighbour couplings, diagonal `(−1)^(n+m) δ`.
pub fn build_hamiltonian_2d(spec: &LatticeSpec) -> Result<Hamiltonian> {
    spec.validate()?;
    if !matches!(spec.geometry, Geometry::Grid { .. }) {
        return Err(Error::spec("build_hamiltonian_2d needs a grid geometry"));
    }
    Ok(assemble(spec))
}

pub fn flip_detuning(spec: &LatticeSpec) -> LatticeSpec {
    spec.flip_detuning()
}

/// Off-diagonal disorder: `κ_n = κ (1 + σ_n)`, `σ_n` uniform on `(−sigma_max, sigma_max)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    pub sigma_max: f64,
    pub seed: u64,
    pub realization_index: u64,
}

impl DisorderSpec {
    pub const DEFAULT_SIGMA_MAX: f64 = 0.2;

    pub fn new(sigma_max: f64, seed: u64, realization_index: u64) -> Result<Self> {
        let d = DisorderSpec {
            sigma_max,
            seed,
            realization_index,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.sigma_max) {
            return Err(Error::spec(format!(
                "sigma_max must lie in [0, 1), got {}",
                self.sigma_max
            )));
        }
        Ok(())
    }

    /// Generator for this realization; depends on `(seed, realization_index)` only.
    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.realization_index);
        rng
    }
}

pub fn sample_disordered_couplings(
    base_kappa: f64,
    count: usize,
    disorder: &DisorderSpec,
) -> Result<Vec<f64>> {
    disorder.validate()?;
    if disorder.sigma_max == 0.0 {
        return Ok(vec![base_kappa; count]);
    }
    let width = disorder.sigma_max;
    let mut rng = disorder.rng();
    let draws = (0..count)
        .map(|_| {
            // gen_range is half-open; reject the closed endpoint
            let sigma = loop {
                let s = rng.gen_range(-width..width);
                if s != -width {
                    break s;
                }
            };
            base_kappa * (1.0 + sigma)
        })
        .collect();
    Ok(draws)
}

/// Mini-band dispersion of the homogeneous chain, `E±(q) = ±δ √(1 + (2κ/δ)² cos² q)`.
///
/// Returned as `(E_plus, E_minus)` with `E_plus ≥ 0`. At `δ = 0` the
/// removable singularity is replaced by its limit `±2κ|cos q|`.
pub fn band_energies(kappa: f64, delta: f64, q: f64) -> (f64, f64) {
    let hop = 2.0 * kappa * q.cos();
    let e = if delta == 0.0 {
        hop.abs()
    } else {
        delta.abs() * (1.0 + (hop / delta).powi(2)).sqrt()
    };
    (e, -e)
}

//! Single-particle propagation and the two-segment echo protocol.
//!
//! Amplitudes evolve as `α(z) = exp(−iHz) α(0)`, the same convention for the
//! spectral path and the RK4 oracle. Entry `U[(m, n)]` of a propagator is the
//! amplitude at site `m` for a unit excitation at site `n`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Hamiltonian, LatticeSpec};
use crate::states::{self, FidelityCurve, InputState};

/// Step used by the RK4 oracle unless the caller picks another (units of `1/κ`).
pub const DEFAULT_RK4_STEP: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    matrix: DMatrix<Complex64>,
}

impl Unitary {
    /// Wraps a square complex matrix. Unitarity is not enforced here; see
    /// [`Unitary::unitarity_defect`].
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::spec(format!(
                "propagator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Unitary { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Unitary {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn apply(&self, amplitudes: &DVector<Complex64>) -> DVector<Complex64> {
        &self.matrix * amplitudes
    }

    /// Propagation through `self` followed by `next`, i.e. `next · self`.
    pub fn then(&self, next: &Unitary) -> Unitary {
        Unitary {
            matrix: &next.matrix * &self.matrix,
        }
    }

    /// `U · e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> Unitary {
        Unitary {
            matrix: &self.matrix * Complex64::from_polar(1.0, theta),
        }
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.matrix.adjoint() * &self.matrix;
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..dim {
            for j in 0..dim {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - target).norm());
            }
        }
        worst
    }

    /// Largest deviation of a column 2-norm from 1.
    pub fn column_norm_defect(&self) -> f64 {
        self.matrix
            .column_iter()
            .map(|c| (c.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Unitary) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Cached eigendecomposition `H = V diag(λ) Vᵀ`, evaluated at any distance.
#[derive(Clone, Debug)]
pub struct SpectralPropagator {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SpectralPropagator {
    pub fn new(h: &Hamiltonian) -> Result<Self> {
        if h.matrix().iter().any(|v| !v.is_finite()) {
            return Err(Error::numeric("Hamiltonian has non-finite entries"));
        }
        let eig = SymmetricEigen::try_new(h.matrix().clone(), f64::EPSILON, 0)
            .ok_or_else(|| Error::numeric("symmetric eigendecomposition did not converge"))?;
        Ok(SpectralPropagator {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// `U(z) = V exp(−iλz) Vᵀ`. Negative `z` gives the inverse.
    pub fn at(&self, z: f64) -> Unitary {
        let v = self.eigenvectors.map(Complex64::from);
        let mut scaled = v.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= Complex64::from_polar(1.0, -self.eigenvalues[k] * z);
        }
        Unitary {
            matrix: scaled * v.transpose(),
        }
    }
}

pub fn evolve_unitary(h: &Hamiltonian, z: f64) -> Result<Unitary> {
    if !z.is_finite() {
        return Err(Error::numeric(format!(
            "propagation distance {z} is not finite"
        )));
    }
    Ok(SpectralPropagator::new(h)?.at(z))
}

/// Classical fourth-order Runge–Kutta for `dα/dz = −iHα` from 0 to `z`.
///
/// Independent of the spectral path; used as a numerical oracle. The step is
/// shrunk so that an integer number of steps lands exactly on `z`.
pub fn evolve_rk4(
    h: &Hamiltonian,
    alpha0: &DVector<Complex64>,
    z: f64,
    step: f64,
) -> Result<DVector<Complex64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::spec(format!(
            "RK4 step must be positive, got {step}"
        )));
    }
    if alpha0.len() != h.dim() {
        return Err(Error::spec(format!(
            "amplitude vector has {} entries, lattice has {}",
            alpha0.len(),
            h.dim()
        )));
    }
    if !z.is_finite() {
        return Err(Error::numeric(format!(
            "propagation distance {z} is not finite"
        )));
    }
    if z == 0.0 {
        return Ok(alpha0.clone());
    }

    // the lattice Hamiltonians are sparse; keep only the nonzero entries
    let dim = h.dim();
    let rows: Vec<Vec<(usize, f64)>> = (0..dim)
        .map(|i| {
            (0..dim)
                .filter_map(|j| {
                    let v = h.matrix()[(i, j)];
                    (v != 0.0).then_some((j, v))
                })
                .collect()
        })
        .collect();
    let minus_i = Complex64::new(0.0, -1.0);
    let rhs = |y: &[Complex64], out: &mut [Complex64]| {
        for (o, row) in out.iter_mut().zip(&rows) {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(j, v) in row {
                acc += y[j] * v;
            }
            *o = minus_i * acc;
        }
    };

    let steps = (z.abs() / step).ceil().max(1.0) as usize;
    let dz = z / steps as f64;
    let mut y: Vec<Complex64> = alpha0.iter().copied().collect();
    let (mut k1, mut k2, mut k3, mut k4) = (
        vec![Complex64::default(); dim],
        vec![Complex64::default(); dim],
        vec![Complex64::default(); dim],
        vec![Complex64::default(); dim],
    );
    let mut tmp = vec![Complex64::default(); dim];
    for _ in 0..steps {
        rhs(&y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + k1[i] * (dz / 2.0);
        }
        rhs(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + k2[i] * (dz / 2.0);
        }
        rhs(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + k3[i] * dz;
        }
        rhs(&tmp, &mut k4);
        for i in 0..dim {
            y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dz / 6.0);
        }
    }
    if y.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::numeric("RK4 produced non-finite amplitudes"));
    }
    Ok(DVector::from_vec(y))
}

/// What the second segment propagates with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondSegment {
    /// `H₂` = the lattice with sublattices exchanged (`δ → −δ`).
    #[default]
    SublatticeExchange,
    /// `H₂ = −H₁`, perfect time reversal. Reference baseline.
    FullReversal,
}

/// Propagate `L` under `H₁`, switch, propagate `L` under `H₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct EchoProtocol {
    spec: LatticeSpec,
    segment_length: f64,
    second_segment: SecondSegment,
}

impl EchoProtocol {
    pub fn new(spec: LatticeSpec, segment_length: f64) -> Result<Self> {
        spec.validate()?;
        if !(segment_length >= 0.0 && segment_length.is_finite()) {
            return Err(Error::spec(format!(
                "segment length must be finite and >= 0, got {segment_length}"
            )));
        }
        Ok(EchoProtocol {
            spec,
            segment_length,
            second_segment: SecondSegment::SublatticeExchange,
        })
    }

    pub fn with_second_segment(mut self, second_segment: SecondSegment) -> Self {
        self.second_segment = second_segment;
        self
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn segment_length(&self) -> f64 {
        self.segment_length
    }

    pub fn second_segment(&self) -> SecondSegment {
        self.second_segment
    }

    pub fn hamiltonians(&self) -> Result<(Hamiltonian, Hamiltonian)> {
        let first = self.spec.hamiltonian()?;
        let second = match self.second_segment {
            SecondSegment::SublatticeExchange => self.spec.flip_detuning().hamiltonian()?,
            SecondSegment::FullReversal => first.negated(),
        };
        Ok((first, second))
    }

    fn propagators(&self) -> Result<(SpectralPropagator, SpectralPropagator)> {
        let (h1, h2) = self.hamiltonians()?;
        Ok((SpectralPropagator::new(&h1)?, SpectralPropagator::new(&h2)?))
    }
}

/// `U₂(L) · U₁(L)`.
pub fn echo_unitary(protocol: &EchoProtocol) -> Result<Unitary> {
    let (first, second) = protocol.propagators()?;
    let l = protocol.segment_length;
    Ok(first.at(l).then(&second.at(l)))
}

/// Sampled propagation over `[0, 2L]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvolutionTrace {
    pub z_grid: Vec<f64>,
    /// `intensities[k][n]` = mean photon number at site `n`, sample `k`.
    pub intensities: Vec<Vec<f64>>,
    pub fidelity: Vec<f64>,
    pub total_photons: f64,
}

impl EvolutionTrace {
    pub fn fidelity_curve(&self) -> FidelityCurve {
        FidelityCurve::new(
            self.z_grid
                .iter()
                .copied()
                .zip(self.fidelity.iter().copied())
                .collect(),
        )
    }

    /// Worst deviation of the summed intensity from the input photon number.
    pub fn photon_number_drift(&self) -> f64 {
        self.intensities
            .iter()
            .map(|row| (row.iter().sum::<f64>() - self.total_photons).abs())
            .fold(0.0, f64::max)
    }
}

/// Samples `num_samples` uniformly spaced planes over `[0, 2L]`.
///
/// Planes past the switch use `U₂(z − L) · U₁(L)`, never a single exponential
/// across `z = L`. The last plane is exactly `2L`.
pub fn trace_evolution(
    protocol: &EchoProtocol,
    input: &InputState,
    num_samples: usize,
) -> Result<EvolutionTrace> {
    if num_samples < 2 {
        return Err(Error::spec(format!(
            "need at least 2 samples, got {num_samples}"
        )));
    }
    let dim = protocol.spec.num_sites();
    input.validate(dim)?;
    let (first, second) = protocol.propagators()?;
    let l = protocol.segment_length;
    let at_switch = first.at(l);
    let density = input.one_body_density(dim)?;

    let mut trace = EvolutionTrace {
        z_grid: Vec::with_capacity(num_samples),
        intensities: Vec::with_capacity(num_samples),
        fidelity: Vec::with_capacity(num_samples),
        total_photons: f64::from(input.photon_count()),
    };
    let last = num_samples - 1;
    for k in 0..num_samples {
        let z = if k == last {
            2.0 * l
        } else {
            2.0 * l * k as f64 / last as f64
        };
        let u = if z <= l {
            first.at(z)
        } else if k == last {
            at_switch.then(&second.at(l))
        } else {
            at_switch.then(&second.at(z - l))
        };
        trace.intensities.push(site_intensities(&u, &density));
        trace.fidelity.push(states::fidelity(&u, input)?);
        trace.z_grid.push(z);
    }
    Ok(trace)
}

/// `⟨a†_n a_n⟩ = Σ_ij conj(U_ni) ρ_ij U_nj` for input one-body density `ρ_ij = ⟨b†_i b_j⟩`.
fn site_intensities(u: &Unitary, density: &DMatrix<Complex64>) -> Vec<f64> {
    let m = u.matrix();
    let dim = m.nrows();
    (0..dim)
        .map(|n| {
            let mut acc = Complex64::default();
            for i in 0..dim {
                let ui = m[(n, i)].conj();
                for j in 0..dim {
                    let rho = density[(i, j)];
                    if rho != Complex64::default() {
                        acc += ui * rho * m[(n, j)];
                    }
                }
            }
            acc.re.max(0.0)
        })
        .collect()
}

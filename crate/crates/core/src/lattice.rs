//! The periodic lattice, its dispersion relation, the position/momentum basis
//! change and exact free evolution.
//!
//! Units: ħ, the lattice spacing and the inverse-mass parameter are all 1, so the
//! energy of momentum index `k` is simply `k²/2` folded at `N/2`.
//!
//! Basis convention: the momentum amplitude of a position-space state is
//!
//! ```text
//! ψ̃(k) = N^{-1/2} Σ_n exp(-2πi k n / N) ψ(n)
//! ```
//!
//! so a position-space phase `exp(+2πi k₀ n / N)` lands on index `k₀` and, for
//! `0 < k₀ < N/2`, moves toward increasing `n`.

use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::exec::{for_each_row, for_each_row_with};
use crate::{Error, Execution, Result, C64};

/// Which basis the coefficients of a state or density matrix refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Position,
    Momentum,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Position => f.write_str("position"),
            Basis::Momentum => f.write_str("momentum"),
        }
    }
}

pub(crate) fn expect_basis(expected: Basis, found: Basis) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::WrongBasis { expected, found })
    }
}

pub const DEFAULT_DISPLAY_TIME_FACTOR: f64 = 1e3;

/// Lattice size plus the factor between natural and display time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConfig {
    n_sites: usize,
    display_time_factor: f64,
}

impl LatticeConfig {
    pub fn new(n_sites: usize) -> Result<Self> {
        if n_sites < 8 || !n_sites.is_power_of_two() {
            return Err(Error::InvalidLatticeSize(n_sites));
        }
        Ok(Self {
            n_sites,
            display_time_factor: DEFAULT_DISPLAY_TIME_FACTOR,
        })
    }

    pub fn with_display_time_factor(mut self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::out_of_range("display_time_factor", factor, "(0, inf)"));
        }
        self.display_time_factor = factor;
        Ok(self)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn display_time_factor(&self) -> f64 {
        self.display_time_factor
    }

    pub fn to_natural(&self, display_time: f64) -> f64 {
        display_time / self.display_time_factor
    }

    pub fn to_display(&self, natural_time: f64) -> f64 {
        natural_time * self.display_time_factor
    }
}

/// Free-particle energy of momentum index `k`: `k²/2` for `k ≤ N/2`, otherwise
/// `(N-k)²/2`.
pub fn dispersion(k: usize, n_sites: usize) -> Result<f64> {
    if k >= n_sites {
        return Err(Error::out_of_range("k", k, format!("[0, {n_sites})")));
    }
    Ok(energy(k, n_sites))
}

fn energy(k: usize, n_sites: usize) -> f64 {
    let folded = if k <= n_sites / 2 { k } else { n_sites - k };
    // exact for any realistic N: folded² < 2^53
    (folded * folded) as f64 / 2.0
}

/// A pure state's coefficient vector in one of the two bases.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    basis: Basis,
}

pub(crate) const NORM_TOLERANCE: f64 = 1e-12;

impl StateVector {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amplitudes: Vec<C64>, basis: Basis) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { amplitudes, basis })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>, basis: Basis) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized(norm * norm));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { amplitudes, basis })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|amplitude|²` per basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Dense `N×N` density matrix, row-major, tagged with its basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    basis: Basis,
    data: Vec<C64>,
}

impl DensityMatrix {
    /// Builds a density matrix from row-major entries. Only the shape is checked;
    /// use [`DensityMatrix::trace`], [`DensityMatrix::hermiticity_error`] and
    /// [`DensityMatrix::min_eigenvalue`] to verify physical validity.
    pub fn from_entries(n: usize, basis: Basis, data: Vec<C64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Self { n, basis, data })
    }

    /// `(1/N)·identity`.
    pub fn maximally_mixed(n: usize, basis: Basis) -> Self {
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = C64::new(1.0 / n as f64, 0.0);
        }
        Self { n, basis, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[C64] {
        &self.data[row * self.n..(row + 1) * self.n]
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `Tr(ρ²) = Σ |ρ_mn|²` for Hermitian `ρ`.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest `|ρ_mn - conj(ρ_nm)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        assert_eq!(self.n, other.n, "density matrices of different size");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue, from a dense Hermitian eigensolve. `O(N³)`; meant for
    /// on-demand validity checks, not per-step use.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = nalgebra::DMatrix::from_row_slice(self.n, self.n, &self.data);
        // the solver reads one triangle; symmetrize round-off first
        let m = (&m + m.adjoint()).scale(0.5);
        m.symmetric_eigenvalues().iter().copied().collect()
    }

    pub(crate) fn retag(mut self, basis: Basis) -> Self {
        self.basis = basis;
        self
    }
}

/// Precomputed `exp{i t [E(k') - E(k)]}` for one evolution time.
#[derive(Debug, Clone)]
pub struct PhaseTable {
    n: usize,
    time: f64,
    values: Vec<C64>,
}

impl PhaseTable {
    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, k_prime: usize) -> C64 {
        self.values[k * self.n + k_prime]
    }
}

/// A lattice with its FFT plans. Cheap to clone (plans are shared).
#[derive(Clone)]
pub struct Lattice {
    config: LatticeConfig,
    energies: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    exec: Execution,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("config", &self.config)
            .field("exec", &self.exec)
            .finish_non_exhaustive()
    }
}

impl Lattice {
    pub fn new(config: LatticeConfig) -> Self {
        let n = config.n_sites();
        let mut planner = FftPlanner::new();
        Self {
            config,
            energies: (0..n).map(|k| energy(k, n)).collect(),
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            exec: Execution::default(),
        }
    }

    /// Shorthand for a lattice with the default display-time factor.
    pub fn with_sites(n_sites: usize) -> Result<Self> {
        Ok(Self::new(LatticeConfig::new(n_sites)?))
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    pub fn config(&self) -> &LatticeConfig {
        &self.config
    }

    pub fn n_sites(&self) -> usize {
        self.config.n_sites()
    }

    /// `E(k)` for every momentum index.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    fn check_len(&self, len: usize) -> Result<()> {
        let n = self.n_sites();
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
        Ok(())
    }

    pub fn to_momentum_basis(&self, state: &StateVector) -> Result<StateVector> {
        expect_basis(Basis::Position, state.basis())?;
        self.check_len(state.len())?;
        let mut amps = state.amplitudes.clone();
        self.forward.process(&mut amps);
        scale(&mut amps, 1.0 / (self.n_sites() as f64).sqrt());
        Ok(StateVector {
            amplitudes: amps,
            basis: Basis::Momentum,
        })
    }

    pub fn to_position_basis(&self, state: &StateVector) -> Result<StateVector> {
        expect_basis(Basis::Momentum, state.basis())?;
        self.check_len(state.len())?;
        let mut amps = state.amplitudes.clone();
        self.inverse.process(&mut amps);
        scale(&mut amps, 1.0 / (self.n_sites() as f64).sqrt());
        Ok(StateVector {
            amplitudes: amps,
            basis: Basis::Position,
        })
    }

    /// Multiplies momentum amplitudes by `exp(-i E(k) t)`.
    pub fn evolve_state(&self, state: &StateVector, t: f64) -> Result<StateVector> {
        expect_basis(Basis::Momentum, state.basis())?;
        self.check_len(state.len())?;
        let amplitudes = state
            .amplitudes
            .iter()
            .zip(&self.energies)
            .map(|(a, &e)| a * C64::from_polar(1.0, -e * t))
            .collect();
        Ok(StateVector {
            amplitudes,
            basis: Basis::Momentum,
        })
    }

    /// `ρ̃ = F ρ F†`: inverse FFT along rows, then forward FFT along columns.
    pub fn density_to_momentum(&self, rho: DensityMatrix) -> Result<DensityMatrix> {
        expect_basis(Basis::Position, rho.basis())?;
        self.check_len(rho.dim())?;
        let mut rho = rho;
        self.two_sided(&mut rho.data, &self.inverse, &self.forward);
        Ok(rho.retag(Basis::Momentum))
    }

    /// `ρ = F† ρ̃ F`: forward FFT along rows, then inverse FFT along columns.
    pub fn density_to_position(&self, rho: DensityMatrix) -> Result<DensityMatrix> {
        expect_basis(Basis::Momentum, rho.basis())?;
        self.check_len(rho.dim())?;
        let mut rho = rho;
        self.two_sided(&mut rho.data, &self.forward, &self.inverse);
        Ok(rho.retag(Basis::Position))
    }

    fn two_sided(&self, data: &mut [C64], rows: &Arc<dyn Fft<f64>>, cols: &Arc<dyn Fft<f64>>) {
        let n = self.n_sites();
        self.fft_rows(data, rows);
        transpose_in_place(data, n);
        self.fft_rows(data, cols);
        transpose_in_place(data, n);
    }

    fn fft_rows(&self, data: &mut [C64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.n_sites();
        let norm = 1.0 / (n as f64).sqrt();
        let scratch_len = fft.get_inplace_scratch_len();
        for_each_row_with(
            self.exec,
            data,
            n,
            || vec![C64::new(0.0, 0.0); scratch_len],
            |scratch, _, row| {
                fft.process_with_scratch(row, scratch);
                scale(row, norm);
            },
        );
    }

    /// Phase factors `exp{i t [E(k') - E(k)]}` for evolution by natural time `t`.
    pub fn phase_table(&self, t: f64) -> PhaseTable {
        let n = self.n_sites();
        let mut values = vec![C64::new(0.0, 0.0); n * n];
        let energies = &self.energies;
        for_each_row(self.exec, &mut values, n, |k, row| {
            for (kp, v) in row.iter_mut().enumerate() {
                *v = C64::from_polar(1.0, t * (energies[kp] - energies[k]));
            }
        });
        PhaseTable { n, time: t, values }
    }

    /// Free evolution for natural time `t` (negative runs backward). Diagonal
    /// entries are left untouched, so the momentum distribution is bit-for-bit
    /// invariant.
    pub fn evolve_density(&self, rho: DensityMatrix, t: f64) -> Result<DensityMatrix> {
        let table = self.phase_table(t);
        self.evolve_density_with(rho, &table)
    }

    pub fn evolve_density_with(
        &self,
        rho: DensityMatrix,
        table: &PhaseTable,
    ) -> Result<DensityMatrix> {
        expect_basis(Basis::Momentum, rho.basis())?;
        self.check_len(rho.dim())?;
        self.check_len(table.n)?;
        let n = self.n_sites();
        let mut rho = rho;
        let phases = &table.values;
        for_each_row(self.exec, &mut rho.data, n, |k, row| {
            let phase_row = &phases[k * n..(k + 1) * n];
            for (kp, (z, p)) in row.iter_mut().zip(phase_row).enumerate() {
                if kp != k {
                    *z *= p;
                }
            }
        });
        Ok(rho)
    }

    /// Position-basis convenience: transform, evolve, transform back.
    pub fn evolve_position_density(&self, rho: DensityMatrix, t: f64) -> Result<DensityMatrix> {
        let rho = self.density_to_momentum(rho)?;
        let rho = self.evolve_density(rho, t)?;
        self.density_to_position(rho)
    }
}

fn scale(values: &mut [C64], factor: f64) {
    values.iter_mut().for_each(|v| *v *= factor);
}

fn transpose_in_place(data: &mut [C64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

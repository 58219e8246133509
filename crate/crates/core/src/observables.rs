//! Distributions and scalar summaries of a density matrix.
//!
//! Momentum is reported in index units: index `k` carries signed momentum `k`
//! for `k ≤ N/2` and `-(N-k)` above. Multiply by `2π/N` for natural units.

use std::f64::consts::PI;

use crate::channels::RegionPartition;
use crate::lattice::expect_basis;
use crate::{Basis, DensityMatrix, Error, Lattice, Result};

/// Largest tolerated imaginary part of a diagonal element.
pub const DIAGONAL_IMAG_TOLERANCE: f64 = 1e-12;

pub fn signed_momentum_index(k: usize, n_sites: usize) -> Result<i64> {
    if k >= n_sites {
        return Err(Error::out_of_range("k", k, format!("[0, {n_sites})")));
    }
    Ok(signed(k, n_sites))
}

pub(crate) fn signed(k: usize, n_sites: usize) -> i64 {
    if k <= n_sites / 2 {
        k as i64
    } else {
        -((n_sites - k) as i64)
    }
}

fn real_diagonal(rho: &DensityMatrix) -> Result<Vec<f64>> {
    rho.diagonal()
        .into_iter()
        .enumerate()
        .map(|(i, z)| {
            if z.im.abs() >= DIAGONAL_IMAG_TOLERANCE {
                Err(Error::InvalidParameter(format!(
                    "diagonal element {i} has imaginary part {:e}",
                    z.im
                )))
            } else {
                Ok(z.re)
            }
        })
        .collect()
}

/// `Tr(ρ |X_n⟩⟨X_n|)` for every site.
pub fn position_distribution(rho: &DensityMatrix) -> Result<Vec<f64>> {
    expect_basis(Basis::Position, rho.basis())?;
    real_diagonal(rho)
}

/// `Tr(ρ |P_k⟩⟨P_k|)` for every momentum index; transforms a copy if `rho` is in
/// the position basis.
pub fn momentum_distribution(lattice: &Lattice, rho: &DensityMatrix) -> Result<Vec<f64>> {
    match rho.basis() {
        Basis::Momentum => real_diagonal(rho),
        Basis::Position => real_diagonal(&lattice.density_to_momentum(rho.clone())?),
    }
}

/// Mean, variance and negative-momentum weight of a momentum distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumMoments {
    pub mean: f64,
    pub variance: f64,
    pub negative_fraction: f64,
}

impl MomentumMoments {
    pub fn from_distribution(p: &[f64]) -> Self {
        let n = p.len();
        let mean: f64 = p.iter().enumerate().map(|(k, w)| signed(k, n) as f64 * w).sum();
        let variance = p
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let d = signed(k, n) as f64 - mean;
                d * d * w
            })
            .sum();
        let negative_fraction = p
            .iter()
            .enumerate()
            .filter(|&(k, _)| signed(k, n) < 0)
            .map(|(_, w)| w)
            .sum();
        Self {
            mean,
            variance,
            negative_fraction,
        }
    }
}

pub fn expected_momentum(lattice: &Lattice, rho: &DensityMatrix) -> Result<f64> {
    Ok(MomentumMoments::from_distribution(&momentum_distribution(lattice, rho)?).mean)
}

pub fn momentum_variance(lattice: &Lattice, rho: &DensityMatrix) -> Result<f64> {
    Ok(MomentumMoments::from_distribution(&momentum_distribution(lattice, rho)?).variance)
}

pub fn negative_momentum_fraction(lattice: &Lattice, rho: &DensityMatrix) -> Result<f64> {
    Ok(MomentumMoments::from_distribution(&momentum_distribution(lattice, rho)?).negative_fraction)
}

/// `Tr(ρ²)`; basis independent.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

pub fn region_mass(rho: &DensityMatrix, partition: &RegionPartition, region: usize) -> Result<f64> {
    if region >= partition.n_regions() {
        return Err(Error::out_of_range(
            "region",
            region,
            format!("[0, {})", partition.n_regions()),
        ));
    }
    let p = position_distribution(rho)?;
    Ok(p[partition.range(region)].iter().sum())
}

pub fn region_masses(position_dist: &[f64], partition: &RegionPartition) -> Vec<f64> {
    (0..partition.n_regions())
        .map(|r| position_dist[partition.range(r)].iter().sum())
        .collect()
}

/// Mean position on the ring, from the phase of `Σ p(n) exp(2πi n/N)`, in `[0, N)`.
pub fn circular_mean_position(position_dist: &[f64]) -> f64 {
    let n = position_dist.len() as f64;
    let (s, c) = position_dist
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(s, c), (j, w)| {
            let theta = 2.0 * PI * j as f64 / n;
            (s + w * theta.sin(), c + w * theta.cos())
        });
    (s.atan2(c) * n / (2.0 * PI)).rem_euclid(n)
}

/// Variance of the site index `n ∈ [0, N)`, not wrapped. Meaningful for
/// distributions centred away from the seam.
pub fn position_variance(position_dist: &[f64]) -> f64 {
    let mean: f64 = position_dist.iter().enumerate().map(|(j, w)| j as f64 * w).sum();
    position_dist
        .iter()
        .enumerate()
        .map(|(j, w)| (j as f64 - mean).powi(2) * w)
        .sum()
}

/// Snapshot of everything the harness reports at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableRecord {
    pub time_natural: f64,
    pub time_display: f64,
    pub position_dist: Vec<f64>,
    pub momentum_dist: Vec<f64>,
    pub purity: f64,
    pub expected_momentum_signed: f64,
    pub momentum_variance: f64,
    pub region_masses: Vec<f64>,
    pub negative_momentum_fraction: f64,
}

impl ObservableRecord {
    /// `rho` must be in the position basis. Region masses are empty without a
    /// partition.
    pub fn capture(
        lattice: &Lattice,
        rho: &DensityMatrix,
        time_natural: f64,
        partition: Option<&RegionPartition>,
    ) -> Result<Self> {
        let position_dist = position_distribution(rho)?;
        let momentum_dist = momentum_distribution(lattice, rho)?;
        let moments = MomentumMoments::from_distribution(&momentum_dist);
        let region_masses = partition
            .map(|p| region_masses(&position_dist, p))
            .unwrap_or_default();
        Ok(Self {
            time_natural,
            time_display: lattice.config().to_display(time_natural),
            purity: rho.purity(),
            expected_momentum_signed: moments.mean,
            momentum_variance: moments.variance,
            negative_momentum_fraction: moments.negative_fraction,
            region_masses,
            position_dist,
            momentum_dist,
        })
    }

    pub fn position_variance(&self) -> f64 {
        position_variance(&self.position_dist)
    }

    pub fn circular_mean_position(&self) -> f64 {
        circular_mean_position(&self.position_dist)
    }
}

//! Measurement channels acting on position-basis density matrices.
//!
//! Both channels are Schur (elementwise) multipliers: the diagonal is never
//! touched, so the trace is preserved exactly.

use std::ops::Range;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::exec::for_each_row;
use crate::lattice::expect_basis;
use crate::{Basis, DensityMatrix, Error, Execution, Result, C64};

/// Minimum eigenvalue tolerated when checking a kernel for positivity.
pub const KERNEL_PSD_TOLERANCE: f64 = 1e-10;

/// Contiguous, disjoint regions covering every site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionPartition {
    n_sites: usize,
    boundaries: Vec<usize>,
    region_of: Vec<usize>,
}

impl RegionPartition {
    /// Builds a partition from region start indices. The first start must be 0
    /// and starts must be strictly increasing and below `n_sites`.
    pub fn from_boundaries(n_sites: usize, boundaries: Vec<usize>) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidParameter("partition of an empty lattice".into()));
        }
        if boundaries.first() != Some(&0) {
            return Err(Error::InvalidParameter(
                "region boundaries must start at site 0".into(),
            ));
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "region boundaries must be strictly increasing".into(),
            ));
        }
        if let Some(&last) = boundaries.last() {
            if last >= n_sites {
                return Err(Error::out_of_range("region boundary", last, format!("[0, {n_sites})")));
            }
        }
        let mut region_of = vec![0; n_sites];
        for (id, start) in boundaries.iter().enumerate() {
            let end = boundaries.get(id + 1).copied().unwrap_or(n_sites);
            region_of[*start..end].iter_mut().for_each(|r| *r = id);
        }
        Ok(Self {
            n_sites,
            boundaries,
            region_of,
        })
    }

    /// One region per site.
    pub fn singletons(n_sites: usize) -> Self {
        Self {
            n_sites,
            boundaries: (0..n_sites).collect(),
            region_of: (0..n_sites).collect(),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_regions(&self) -> usize {
        self.boundaries.len()
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn region_of(&self, site: usize) -> usize {
        self.region_of[site]
    }

    pub fn lookup(&self) -> &[usize] {
        &self.region_of
    }

    pub fn range(&self, region: usize) -> Range<usize> {
        let start = self.boundaries[region];
        let end = self.boundaries.get(region + 1).copied().unwrap_or(self.n_sites);
        start..end
    }

    /// The same geometry on a lattice with twice the resolution.
    pub fn doubled(&self) -> Self {
        Self::from_boundaries(
            2 * self.n_sites,
            self.boundaries.iter().map(|b| 2 * b).collect(),
        )
        .expect("doubling preserves partition validity")
    }
}

/// `m_regions` regions of `⌊N/M⌋` sites from the left, plus one leftover region
/// of `N mod M` sites at the right end when the division is not exact.
pub fn make_regions(n_sites: usize, m_regions: usize) -> Result<RegionPartition> {
    if m_regions == 0 || m_regions > n_sites {
        return Err(Error::out_of_range("m_regions", m_regions, format!("[1, {n_sites}]")));
    }
    let size = n_sites / m_regions;
    let mut boundaries: Vec<usize> = (0..m_regions).map(|i| i * size).collect();
    if !n_sites.is_multiple_of(m_regions) {
        boundaries.push(m_regions * size);
    }
    RegionPartition::from_boundaries(n_sites, boundaries)
}

/// Zeroes every element `ρ(l, m)` with `l` and `m` in different regions.
pub fn pvm_channel(rho: DensityMatrix, partition: &RegionPartition) -> Result<DensityMatrix> {
    pvm_channel_with(Execution::default(), rho, partition)
}

pub fn pvm_channel_with(
    exec: Execution,
    rho: DensityMatrix,
    partition: &RegionPartition,
) -> Result<DensityMatrix> {
    expect_basis(Basis::Position, rho.basis())?;
    check_dim(partition.n_sites(), rho.dim())?;
    let n = rho.dim();
    let regions = partition.lookup();
    let mut rho = rho;
    for_each_row(exec, rho.entries_mut(), n, |l, row| {
        let own = regions[l];
        for (z, &r) in row.iter_mut().zip(regions) {
            if r != own {
                *z = C64::new(0.0, 0.0);
            }
        }
    });
    Ok(rho)
}

/// How the separation of two sites is measured on the ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceConvention {
    /// `|m - n|`, ignoring periodicity.
    Linear,
    /// `min(|m - n|, N - |m - n|)`.
    #[default]
    MinimalImage,
}

impl DistanceConvention {
    pub fn distance(self, separation: usize, n_sites: usize) -> usize {
        match self {
            DistanceConvention::Linear => separation,
            DistanceConvention::MinimalImage => separation.min(n_sites - separation),
        }
    }
}

/// Gaussian pointer of width `1/alpha` coupled to position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerSpec {
    alpha: f64,
    distance: DistanceConvention,
}

impl PointerSpec {
    pub fn new(alpha: f64, distance: DistanceConvention) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::out_of_range("alpha", alpha, "(0, inf)"));
        }
        Ok(Self { alpha, distance })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn width(&self) -> f64 {
        1.0 / self.alpha
    }

    pub fn distance(&self) -> DistanceConvention {
        self.distance
    }
}

/// Damping factor per site separation `|m - n|`, with the distance convention
/// already folded in. Validated to be a positive semidefinite correlation
/// kernel, which makes the induced Schur multiplier completely positive.
#[derive(Debug, Clone, PartialEq)]
pub struct DampingKernel {
    values: Vec<f64>,
    convention: DistanceConvention,
}

impl DampingKernel {
    /// `values[d]` multiplies every element with `|m - n| = d`. Under
    /// `MinimalImage` the values must satisfy `values[d] == values[N - d]`.
    pub fn from_values(values: Vec<f64>, convention: DistanceConvention) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidKernel("empty kernel".into()));
        }
        if values[0] != 1.0 {
            return Err(Error::InvalidKernel(format!(
                "values[0] must be 1, got {}",
                values[0]
            )));
        }
        if let Some((d, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::InvalidKernel(format!("values[{d}] = {v} is outside [0, 1]")));
        }
        if convention == DistanceConvention::MinimalImage {
            if let Some(d) = (1..n).find(|&d| (values[d] - values[n - d]).abs() > 1e-12) {
                return Err(Error::InvalidKernel(format!(
                    "minimal-image kernel must satisfy values[d] = values[N-d]; fails at d = {d}"
                )));
            }
        }
        let kernel = Self { values, convention };
        let min_eig = kernel.min_eigenvalue();
        if min_eig < -KERNEL_PSD_TOLERANCE {
            return Err(Error::KernelNotPsd(min_eig));
        }
        Ok(kernel)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn convention(&self) -> DistanceConvention {
        self.convention
    }

    /// Smallest eigenvalue of `K(m, n) = values[|m - n|]`. Circulant kernels use
    /// their DFT; Toeplitz ones a dense symmetric eigensolve.
    pub fn min_eigenvalue(&self) -> f64 {
        let n = self.values.len();
        match self.convention {
            DistanceConvention::MinimalImage => {
                let mut spectrum: Vec<C64> = self.values.iter().map(|&v| C64::new(v, 0.0)).collect();
                FftPlanner::new().plan_fft_forward(n).process(&mut spectrum);
                spectrum.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
            }
            DistanceConvention::Linear => {
                let m = nalgebra::DMatrix::from_fn(n, n, |i, j| self.values[i.abs_diff(j)]);
                m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// `values[d] = exp(-α² dist(d)² / 4)`.
pub fn pointer_kernel(spec: &PointerSpec, n_sites: usize) -> Result<DampingKernel> {
    let a2 = spec.alpha * spec.alpha;
    let values = (0..n_sites)
        .map(|d| {
            let x = spec.distance.distance(d, n_sites) as f64;
            (-a2 * x * x / 4.0).exp()
        })
        .collect();
    DampingKernel::from_values(values, spec.distance)
}

/// `ρ(m, n) ← ρ(m, n) · values[|m - n|]`.
pub fn kernel_channel(rho: DensityMatrix, kernel: &DampingKernel) -> Result<DensityMatrix> {
    kernel_channel_with(Execution::default(), rho, kernel)
}

pub fn kernel_channel_with(
    exec: Execution,
    rho: DensityMatrix,
    kernel: &DampingKernel,
) -> Result<DensityMatrix> {
    expect_basis(Basis::Position, rho.basis())?;
    check_dim(kernel.len(), rho.dim())?;
    let n = rho.dim();
    let values = kernel.values();
    let mut rho = rho;
    for_each_row(exec, rho.entries_mut(), n, |m, row| {
        for (j, z) in row.iter_mut().enumerate() {
            if j != m {
                *z *= values[m.abs_diff(j)];
            }
        }
    });
    Ok(rho)
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A ready-to-apply measurement.
#[derive(Debug, Clone, PartialEq)]
pub enum Measurement {
    Pvm(RegionPartition),
    Kernel(DampingKernel),
}

impl Measurement {
    pub fn apply(&self, exec: Execution, rho: DensityMatrix) -> Result<DensityMatrix> {
        match self {
            Measurement::Pvm(p) => pvm_channel_with(exec, rho, p),
            Measurement::Kernel(k) => kernel_channel_with(exec, rho, k),
        }
    }
}

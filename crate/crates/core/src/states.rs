//! Initial states.

use std::f64::consts::PI;

use crate::lattice::NORM_TOLERANCE;
use crate::{Basis, DensityMatrix, Error, Result, StateVector, C64};

/// Gaussian wavepacket `exp(-(n-n₀)²/w²) · exp(2πi k₀ n / N)`, normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacketSpec {
    pub center: usize,
    pub width: f64,
    /// Signed momentum index, in `(-N/2, N/2]`.
    pub momentum_index: i64,
}

impl GaussianPacketSpec {
    pub fn new(center: usize, width: f64, momentum_index: i64) -> Self {
        Self {
            center,
            width,
            momentum_index,
        }
    }

    pub fn validate(&self, n_sites: usize) -> Result<()> {
        if self.center >= n_sites {
            return Err(Error::out_of_range("center", self.center, format!("[0, {n_sites})")));
        }
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(Error::out_of_range("width", self.width, "(0, inf)"));
        }
        let half = (n_sites / 2) as i64;
        if self.momentum_index <= -half || self.momentum_index > half {
            return Err(Error::out_of_range(
                "momentum_index",
                self.momentum_index,
                format!("(-{half}, {half}]"),
            ));
        }
        Ok(())
    }
}

/// The envelope uses the minimal-image displacement from the center, so the
/// packet is a proper periodic function of the site index.
pub fn build_gaussian_packet(spec: &GaussianPacketSpec, n_sites: usize) -> Result<StateVector> {
    spec.validate(n_sites)?;
    let w2 = spec.width * spec.width;
    let amplitudes = (0..n_sites)
        .map(|n| {
            let d = n.abs_diff(spec.center);
            let d = d.min(n_sites - d) as f64;
            let phase = 2.0 * PI * (spec.momentum_index as f64) * (n as f64) / n_sites as f64;
            C64::from_polar((-d * d / w2).exp(), phase)
        })
        .collect();
    StateVector::normalized(amplitudes, Basis::Position)
}

pub fn build_position_eigenstate(site: usize, n_sites: usize) -> Result<StateVector> {
    if site >= n_sites {
        return Err(Error::out_of_range("site", site, format!("[0, {n_sites})")));
    }
    let mut amplitudes = vec![C64::new(0.0, 0.0); n_sites];
    amplitudes[site] = C64::new(1.0, 0.0);
    StateVector::new(amplitudes, Basis::Position)
}

/// `|ψ⟩⟨ψ|`, in the basis of `state`.
pub fn density_from_pure(state: &StateVector) -> Result<DensityMatrix> {
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(norm_sqr));
    }
    let n = state.len();
    let a = state.amplitudes();
    let mut data = Vec::with_capacity(n * n);
    for m in 0..n {
        data.extend(a.iter().map(|b| a[m] * b.conj()));
    }
    DensityMatrix::from_entries(n, state.basis(), data)
}

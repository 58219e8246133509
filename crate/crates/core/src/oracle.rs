//! Brute-force reference for free evolution.
//!
//! Builds the Hamiltonian as an explicit `N×N` matrix from the momentum states,
//! diagonalizes it with a dense Hermitian eigensolver and applies
//! `U ρ U†` with `U = exp(-iHt)`. Nothing here touches the FFT path, so agreement
//! with [`crate::Lattice::evolve_position_density`] is a genuine check. `O(N³)`,
//! so it refuses lattices above [`MAX_ORACLE_SITES`].

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::lattice::expect_basis;
use crate::{Basis, DensityMatrix, Error, Result, C64};

pub const MAX_ORACLE_SITES: usize = 64;

/// Explicit Hamiltonian `Σ_k E(k) |P_k⟩⟨P_k|` in the position basis, where
/// `⟨X_n|P_k⟩ = N^{-1/2} exp(2πi k n / N)`.
pub fn dense_hamiltonian(n: usize) -> DMatrix<C64> {
    let momentum_state = |k: usize| {
        nalgebra::DVector::from_iterator(
            n,
            (0..n).map(|j| C64::from_polar(1.0 / (n as f64).sqrt(), 2.0 * PI * (k * j) as f64 / n as f64)),
        )
    };
    let mut h = DMatrix::<C64>::zeros(n, n);
    for k in 0..n {
        let folded = if 2 * k <= n { k } else { n - k } as f64;
        let e = folded * folded / 2.0;
        let p = momentum_state(k);
        h += (&p * p.adjoint()).scale(e);
    }
    h
}

/// `U ρ U†` with `U = exp(-iHt)` formed by spectral decomposition.
pub fn dense_oracle_evolve(rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    expect_basis(Basis::Position, rho.basis())?;
    let n = rho.dim();
    if n > MAX_ORACLE_SITES {
        return Err(Error::OracleTooLarge {
            max: MAX_ORACLE_SITES,
            found: n,
        });
    }
    let h = dense_hamiltonian(n);
    let h = (&h + h.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|lambda| C64::from_polar(1.0, -lambda * t)));
    let u = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();

    let r = DMatrix::from_row_slice(n, n, rho.entries());
    let out = &u * r * u.adjoint();
    let data = (0..n * n).map(|i| out[(i / n, i % n)]).collect();
    DensityMatrix::from_entries(n, Basis::Position, data)
}

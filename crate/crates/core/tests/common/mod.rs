#![allow(dead_code)]

use rand::Rng;
use zeno_core::{Basis, DensityMatrix, StateVector, C64};

pub fn random_pure_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let amps = (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(amps, Basis::Position).unwrap()
}

pub fn outer(state: &StateVector) -> DensityMatrix {
    let n = state.len();
    let a = state.amplitudes();
    let data = (0..n * n).map(|i| a[i / n] * a[i % n].conj()).collect();
    DensityMatrix::from_entries(n, state.basis(), data).unwrap()
}

/// `A A† / Tr(A A†)` with `A` an `n×rank` complex Gaussian-ish matrix.
pub fn random_density(n: usize, rank: usize, rng: &mut impl Rng) -> DensityMatrix {
    let a: Vec<C64> = (0..n * rank)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut data = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = (0..rank).map(|r| a[i * rank + r] * a[j * rank + r].conj()).sum();
        }
    }
    let tr: f64 = (0..n).map(|i| data[i * n + i].re).sum();
    data.iter_mut().for_each(|z| *z /= tr);
    DensityMatrix::from_entries(n, Basis::Position, data).unwrap()
}

/// Direct `O(N²)` DFT of a pure state's amplitudes, `|Σ_n e^{-2πikn/N} ψ(n)|²/N`.
pub fn momentum_probabilities_by_summation(state: &StateVector) -> Vec<f64> {
    let n = state.len();
    (0..n)
        .map(|k| {
            let s: C64 = state
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(j, a)| a * C64::from_polar(1.0, -2.0 * std::f64::consts::PI * (k * j % n) as f64 / n as f64))
                .sum();
            s.norm_sqr() / n as f64
        })
        .collect()
}

pub fn signed(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Shortest signed distance from `b` to `a` on a ring of `n` sites.
pub fn ring_difference(a: f64, b: f64, n: f64) -> f64 {
    let d = (a - b).rem_euclid(n);
    if d > n / 2.0 {
        d - n
    } else {
        d
    }
}

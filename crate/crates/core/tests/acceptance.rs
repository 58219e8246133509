//! One test per acceptance criterion. Each prints a single `[PASS]` or
//! `[FAIL]` line with the measured numbers, then asserts. Run with
//! `--nocapture` to see the lines.

mod common;

use common::{outer, random_density, random_pure_state};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zeno_core::channels::{
    kernel_channel, make_regions, pointer_kernel, pvm_channel, DistanceConvention, PointerSpec, RegionPartition,
};
use zeno_core::harness::{grid_doubling_check, run_many, run_schedule};
use zeno_core::observables::{momentum_distribution, MomentumMoments, ObservableRecord};
use zeno_core::oracle::dense_oracle_evolve;
use zeno_core::scenario::{MeasurementSpec, Scenario, Schedule, StateSpec};
use zeno_core::states::{build_gaussian_packet, density_from_pure, GaussianPacketSpec};
use zeno_core::Lattice;

const N: usize = 256;

fn verdict(id: &str, title: &str, pass: bool, detail: String) -> bool {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] {id} {title}: {detail}");
    pass
}

fn packet(center: usize, momentum_index: i64) -> StateSpec {
    StateSpec::Gaussian {
        center,
        width: 8.0,
        momentum_index,
    }
}

fn scenario(state: StateSpec, measurement: MeasurementSpec, interval: Option<f64>, total: f64, records: Vec<f64>) -> Scenario {
    Scenario::new(
        N,
        state,
        measurement,
        Schedule {
            interval,
            total_time: total,
            record_times: records,
        },
    )
    .unwrap()
}

fn with_regions(mut s: Scenario, m: usize) -> Scenario {
    s.output.report_regions = Some(m);
    s
}

fn pointer(alpha: f64, n: usize) -> zeno_core::channels::DampingKernel {
    pointer_kernel(&PointerSpec::new(alpha, DistanceConvention::MinimalImage).unwrap(), n).unwrap()
}

#[test]
fn a01_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for n in [8, 16, 32] {
        let lattice = Lattice::with_sites(n).unwrap();
        for _ in 0..20 {
            let rho = outer(&random_pure_state(n, &mut rng));
            for _ in 0..5 {
                let t: f64 = rng.gen_range(0.0..1.0);
                let fast = lattice.evolve_position_density(rho.clone(), t).unwrap();
                let slow = dense_oracle_evolve(&rho, t).unwrap();
                worst = worst.max(fast.max_abs_diff(&slow));
            }
        }
    }
    let pass = worst < 1e-10;
    assert!(verdict(
        "A1",
        "FFT evolution matches dense oracle",
        pass,
        format!("max entrywise diff {worst:.3e} (< 1e-10) over N = 8, 16, 32, 20 states x 5 times")
    ));
}

#[test]
fn a02_conservation_over_1000_steps() {
    let lattice = Lattice::with_sites(N).unwrap();
    let partition = make_regions(N, 6).unwrap();
    let psi = build_gaussian_packet(&GaussianPacketSpec::new(8, 8.0, 31), N).unwrap();
    let mut rho = density_from_pure(&psi).unwrap();
    let trace0 = rho.trace();
    let herm0 = rho.hermiticity_error();
    let table = lattice.phase_table(lattice.config().to_natural(1.0));
    let mut momentum_exact = true;
    let (mut trace_drift, mut herm_drift): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let mom = lattice.density_to_momentum(rho).unwrap();
        let before = mom.diagonal();
        let evolved = lattice.evolve_density_with(mom, &table).unwrap();
        momentum_exact &= evolved.diagonal() == before;
        rho = pvm_channel(lattice.density_to_position(evolved).unwrap(), &partition).unwrap();
        trace_drift = trace_drift.max((rho.trace() - trace0).norm());
        herm_drift = herm_drift.max(rho.hermiticity_error() - herm0);
    }
    let pass = trace_drift < 1e-10 && herm_drift < 1e-10 && momentum_exact;
    assert!(verdict(
        "A2",
        "conservation over 1000 steps",
        pass,
        format!(
            "trace drift {trace_drift:.3e}, hermiticity drift {herm_drift:.3e} (< 1e-10), momentum diagonal bit-exact: {momentum_exact}"
        )
    ));
}

#[test]
fn a03_channel_physics() {
    let n = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut purity_ok, mut psd_ok, mut idempotent) = (true, true, true);
    let mut composition: f64 = 0.0;
    for i in 0..100 {
        let rho = random_density(n, 1 + i % 8, &mut rng);
        let partition = make_regions(n, 1 + i % 12).unwrap();
        let a1: f64 = rng.gen_range(0.5..3.0);
        let a2: f64 = rng.gen_range(0.5..3.0);
        let floor = rho.min_eigenvalue().min(0.0) - 1e-10;

        let pvm = pvm_channel(rho.clone(), &partition).unwrap();
        let ptr = kernel_channel(rho.clone(), &pointer(a1, n)).unwrap();
        for out in [&pvm, &ptr] {
            purity_ok &= out.purity() <= rho.purity() + 1e-12;
            psd_ok &= out.min_eigenvalue() >= floor;
        }
        idempotent &= pvm_channel(pvm.clone(), &partition).unwrap() == pvm;

        let twice = kernel_channel(ptr, &pointer(a2, n)).unwrap();
        let once = kernel_channel(rho, &pointer((a1 * a1 + a2 * a2).sqrt(), n)).unwrap();
        composition = composition.max(twice.max_abs_diff(&once));
    }
    let pass = purity_ok && psd_ok && idempotent && composition < 1e-12;
    assert!(verdict(
        "A3",
        "channel physics",
        pass,
        format!(
            "purity non-increasing: {purity_ok}, PSD kept: {psd_ok}, PVM idempotent: {idempotent}, composition diff {composition:.3e} (< 1e-12)"
        )
    ));
}

#[test]
fn a04_pointer_conserves_momentum() {
    let lattice = Lattice::with_sites(N).unwrap();
    let psi = build_gaussian_packet(&GaussianPacketSpec::new(128, 8.0, 31), N).unwrap();
    let rho = density_from_pure(&psi).unwrap();
    let before = momentum_distribution(&lattice, &rho).unwrap();
    let wrap: f64 = (0..N)
        .filter(|&k| common::signed(k, N).unsigned_abs() as usize > N / 2 - N / 8)
        .map(|k| before[k])
        .sum();
    let after = momentum_distribution(&lattice, &kernel_channel(rho, &pointer(0.2, N)).unwrap()).unwrap();
    let m0 = MomentumMoments::from_distribution(&before).mean;
    let m1 = MomentumMoments::from_distribution(&after).mean;
    let relative = ((m1 - m0) / m0).abs();
    let pass = wrap < 1e-8 && relative < 1e-6;
    assert!(verdict(
        "A4",
        "pointer conserves expected momentum",
        pass,
        format!("wrap weight {wrap:.3e} (< 1e-8), <k> {m0:.6} -> {m1:.6}, relative change {relative:.3e} (< 1e-6)")
    ));
}

#[test]
fn a05_zeno_retardation() {
    let t_star = 60.0;
    let intervals = [None, Some(4.0), Some(2.0), Some(1.0)];
    let runs: Vec<Scenario> = intervals
        .iter()
        .map(|&i| scenario(packet(8, 31), MeasurementSpec::region_pvm(6), i, t_star, vec![t_star]))
        .collect();
    let home: Vec<f64> = run_many(&runs)
        .into_iter()
        .map(|r| r.unwrap()[0].region_masses[0])
        .collect();
    let ordered = home.windows(2).all(|w| w[1] > w[0]);
    let margin = home[3] - home[0];

    let records: Vec<f64> = (0..=360).map(f64::from).collect();
    let per_unit = run_schedule(&scenario(
        packet(8, 31),
        MeasurementSpec::region_pvm(6),
        Some(1.0),
        360.0,
        records,
    ))
    .unwrap();
    let contact = per_unit.iter().find(|r| r.region_masses[1] >= 1e-3);
    let (contact_time, growth) = match contact {
        Some(c) => (
            c.time_display,
            per_unit.last().unwrap().negative_momentum_fraction - c.negative_momentum_fraction,
        ),
        None => (f64::NAN, f64::NAN),
    };
    let pass = ordered && margin >= 0.02 && contact_time < t_star && growth >= 0.1;
    assert!(verdict(
        "A5",
        "Zeno retardation",
        pass,
        format!(
            "home mass at t={t_star} for none/4/2/1: {:.4}/{:.4}/{:.4}/{:.4}, margin {margin:.4} (>= 0.02); contact at t={contact_time}, reflected fraction growth to t=360 {growth:.4} (>= 0.1)",
            home[0], home[1], home[2], home[3]
        )
    ));
}

#[test]
fn a06_eigenstate_confinement() {
    let eigen = StateSpec::PositionEigenstate { site: None };
    let home = make_regions(N, 6).unwrap().region_of(N / 2);
    let runs = [
        scenario(eigen.clone(), MeasurementSpec::region_pvm(6), Some(1.0), 180.0, vec![180.0]),
        with_regions(scenario(eigen, MeasurementSpec::None, None, 180.0, vec![180.0]), 6),
    ];
    let masses: Vec<f64> = run_many(&runs)
        .into_iter()
        .map(|r| r.unwrap()[0].region_masses[home])
        .collect();
    let excess = masses[0] - masses[1];
    let pass = excess >= 0.2;
    assert!(verdict(
        "A6",
        "position-eigenstate confinement",
        pass,
        format!(
            "home-region mass at t=180: measured {:.4}, free {:.4}, excess {excess:.4} (>= 0.2)",
            masses[0], masses[1]
        )
    ));
}

#[test]
fn a07_anti_zeno_spreading() {
    let records: Vec<f64> = (0..=20).map(|i| 10.0 * i as f64).collect();
    let runs: Vec<Scenario> = [
        (MeasurementSpec::None, None),
        (MeasurementSpec::pointer(0.2), Some(10.0)),
        (MeasurementSpec::pointer(0.5), Some(10.0)),
    ]
    .into_iter()
    .map(|(m, i)| scenario(packet(128, 0), m, i, 200.0, records.clone()))
    .collect();
    let results: Vec<Vec<ObservableRecord>> = run_many(&runs).into_iter().map(|r| r.unwrap()).collect();
    let var: Vec<f64> = results.iter().map(|r| r.last().unwrap().position_variance()).collect();
    let first_margin = var[1] >= 1.05 * var[0];
    let second_margin = var[2] >= 1.05 * var[1];
    let momentum_growth = results[1..].iter().all(|run| {
        run.windows(2)
            .all(|w| w[1].momentum_variance > w[0].momentum_variance)
    });
    let pass = first_margin && second_margin && momentum_growth;
    assert!(verdict(
        "A7",
        "anti-Zeno spreading",
        pass,
        format!(
            "position variance at t=200 none/0.2/0.5: {:.1}/{:.1}/{:.1}, ratios {:.3}/{:.3} (>= 1.05 each); momentum variance rises at every pointer application: {momentum_growth}",
            var[0],
            var[1],
            var[2],
            var[1] / var[0],
            var[2] / var[1]
        )
    ));
}

#[test]
fn a08_pointer_leaves_bulk_motion_alone() {
    let runs = [
        scenario(packet(8, 31), MeasurementSpec::pointer(0.2), Some(10.0), 100.0, vec![100.0]),
        scenario(packet(8, 31), MeasurementSpec::None, None, 100.0, vec![100.0]),
    ];
    let means: Vec<f64> = run_many(&runs)
        .into_iter()
        .map(|r| r.unwrap()[0].circular_mean_position())
        .collect();
    let shift = common::ring_difference(means[0], means[1], N as f64).abs();
    let pass = shift < 1.0;
    assert!(verdict(
        "A8",
        "pointer leaves bulk motion alone",
        pass,
        format!(
            "circular mean at t=100: measured {:.3}, free {:.3}, shift {shift:.3e} sites (< 1)",
            means[0], means[1]
        )
    ));
}

#[test]
fn a09_sharp_pointer_limit() {
    let alpha: f64 = 12.0;
    let off = (-alpha * alpha / 4.0).exp();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let rho = random_density(64, 3, &mut rng);
        let a = kernel_channel(rho.clone(), &pointer(alpha, 64)).unwrap();
        let b = pvm_channel(rho, &RegionPartition::singletons(64)).unwrap();
        worst = worst.max(a.max_abs_diff(&b));
    }
    let pass = off < 1e-15 && worst < 1e-15;
    assert!(verdict(
        "A9",
        "sharp pointer equals singleton PVM",
        pass,
        format!("alpha {alpha}: exp(-alpha^2/4) = {off:.3e}, max entrywise diff {worst:.3e} (< 1e-15)")
    ));
}

#[test]
fn a10_grid_doubling() {
    let s = scenario(packet(8, 31), MeasurementSpec::region_pvm(6), Some(1.0), 180.0, vec![180.0]);
    let report = grid_doubling_check(&s).unwrap();
    let diff = report.max_position_diff();
    let pass = diff < 1e-2;
    assert!(verdict(
        "A10",
        "grid doubling",
        pass,
        format!(
            "N {} -> {}: max binned position diff at t=180 {diff:.3e} (< 1e-2), momentum diff {:.3e}",
            report.n_coarse,
            2 * report.n_coarse,
            report.max_momentum_diff()
        )
    ));
}

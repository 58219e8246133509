//! Scheduled evolve/measure runs.
//!
//! Starting from `|ψ⟩⟨ψ|`, each measurement interval is: transform to the
//! momentum basis, evolve for one interval, transform back, apply the channel.
//! No measurement happens at `t = 0`.
//!
//! Recording is passive. A record at time `r` evolves a copy of the state from
//! the last measurement time, so the main trajectory only ever sees measurement
//! steps and adding record times cannot change it. A record that coincides with
//! a measurement time sees the post-measurement state.

use std::collections::HashMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::channels::Measurement;
use crate::observables::{signed, ObservableRecord};
use crate::scenario::Scenario;
use crate::states::density_from_pure;
use crate::{DensityMatrix, Execution, Lattice, PhaseTable, Result};

/// State handed to a run observer at each record time.
#[derive(Debug, Clone, Copy)]
pub struct Snapshot<'a> {
    pub time_display: f64,
    pub time_natural: f64,
    /// Position basis.
    pub rho: &'a DensityMatrix,
}

struct PhaseCache {
    tables: HashMap<u64, PhaseTable>,
}

impl PhaseCache {
    const CAPACITY: usize = 8;

    fn new() -> Self {
        Self {
            tables: HashMap::new(),
        }
    }

    fn get(&mut self, lattice: &Lattice, t: f64) -> &PhaseTable {
        if self.tables.len() >= Self::CAPACITY && !self.tables.contains_key(&t.to_bits()) {
            self.tables.clear();
        }
        self.tables
            .entry(t.to_bits())
            .or_insert_with(|| lattice.phase_table(t))
    }
}

/// Runs `scenario` on `lattice`, calling `observe` at every record time in order.
pub fn run_with<F>(lattice: &Lattice, scenario: &Scenario, mut observe: F) -> Result<()>
where
    F: FnMut(Snapshot<'_>) -> Result<()>,
{
    scenario.validate()?;
    let cfg = *lattice.config();
    let schedule = &scenario.schedule;
    let measurement: Option<Measurement> = scenario.measurement.build(lattice.n_sites())?;
    let exec = lattice.execution();
    let eps = 1e-9 * schedule.total_time.max(1.0);

    let mut measurement_times = Vec::new();
    if let (Some(interval), Some(_)) = (schedule.interval, &measurement) {
        let mut j = 1u64;
        while j as f64 * interval <= schedule.total_time + eps {
            measurement_times.push(j as f64 * interval);
            j += 1;
        }
    }

    let mut cache = PhaseCache::new();
    let mut rho = density_from_pure(&scenario.state.build(lattice.n_sites())?)?;
    let mut anchor = 0.0;
    let mut records = schedule.record_times.iter().copied().peekable();

    let segment_ends = measurement_times.iter().copied().map(Some).chain([None]);
    for next in segment_ends {
        let mut anchor_momentum: Option<DensityMatrix> = None;

        while let Some(&r) = records.peek() {
            if next.is_some_and(|m| r > m - eps) {
                break;
            }
            records.next();
            let offset = r - anchor;
            if offset.abs() <= eps {
                observe(Snapshot {
                    time_display: r,
                    time_natural: cfg.to_natural(r),
                    rho: &rho,
                })?;
                continue;
            }
            let mom = match &anchor_momentum {
                Some(m) => m.clone(),
                None => {
                    let m = lattice.density_to_momentum(rho.clone())?;
                    anchor_momentum = Some(m.clone());
                    m
                }
            };
            let table = cache.get(lattice, cfg.to_natural(offset));
            let at_r = lattice.density_to_position(lattice.evolve_density_with(mom, table)?)?;
            observe(Snapshot {
                time_display: r,
                time_natural: cfg.to_natural(r),
                rho: &at_r,
            })?;
        }

        let (Some(m), Some(channel)) = (next, &measurement) else {
            break;
        };
        let mut step = m - anchor;
        if let Some(interval) = schedule.interval {
            if (step - interval).abs() <= eps {
                step = interval;
            }
        }
        let mom = match anchor_momentum {
            Some(mom) => mom,
            None => lattice.density_to_momentum(rho)?,
        };
        let table = cache.get(lattice, cfg.to_natural(step));
        let evolved = lattice.density_to_position(lattice.evolve_density_with(mom, table)?)?;
        rho = channel.apply(exec, evolved)?;
        anchor = m;
    }
    Ok(())
}

/// Runs a scenario and captures an [`ObservableRecord`] at every record time.
pub fn run_schedule(scenario: &Scenario) -> Result<Vec<ObservableRecord>> {
    let lattice = Lattice::new(scenario.lattice_config()?);
    run_schedule_on(&lattice, scenario)
}

pub fn run_schedule_on(lattice: &Lattice, scenario: &Scenario) -> Result<Vec<ObservableRecord>> {
    let partition = scenario.analysis_partition()?;
    let mut out = Vec::with_capacity(scenario.schedule.record_times.len());
    run_with(lattice, scenario, |snap| {
        out.push(ObservableRecord::capture(
            lattice,
            snap.rho,
            snap.time_natural,
            partition.as_ref(),
        )?);
        Ok(())
    })?;
    Ok(out)
}

/// Runs independent scenarios, in parallel when the `parallel` feature is on.
/// Each run itself is sequential.
pub fn run_many(scenarios: &[Scenario]) -> Vec<Result<Vec<ObservableRecord>>> {
    let run = |s: &Scenario| -> Result<Vec<ObservableRecord>> {
        let lattice = Lattice::new(s.lattice_config()?).with_execution(Execution::Sequential);
        run_schedule_on(&lattice, s)
    };
    #[cfg(feature = "parallel")]
    {
        scenarios.par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        scenarios.iter().map(run).collect()
    }
}

/// Coarse-vs-doubled comparison at one record time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoublingRow {
    pub time_display: f64,
    /// Max `|p_N(n) - (p_2N(2n) + p_2N(2n+1))|`.
    pub max_position_diff: f64,
    /// Max `|p_N(k) - p_2N(k)|` over signed indices with `|k| < N/2`.
    pub max_momentum_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoublingReport {
    pub n_coarse: usize,
    pub rows: Vec<DoublingRow>,
}

impl DoublingReport {
    pub fn max_position_diff(&self) -> f64 {
        self.rows.iter().map(|r| r.max_position_diff).fold(0.0, f64::max)
    }

    pub fn max_momentum_diff(&self) -> f64 {
        self.rows.iter().map(|r| r.max_momentum_diff).fold(0.0, f64::max)
    }
}

/// Reruns `scenario` at `2N` (see [`Scenario::doubled`]) and compares the
/// distributions at every record time.
pub fn grid_doubling_check(scenario: &Scenario) -> Result<DoublingReport> {
    let fine_scenario = scenario.doubled()?;
    let pair = [scenario.clone(), fine_scenario];
    let mut runs = run_many(&pair).into_iter();
    let coarse = runs.next().expect("two runs")?;
    let fine = runs.next().expect("two runs")?;

    let n = scenario.n_sites();
    let rows = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| {
            let max_position_diff = (0..n)
                .map(|j| (c.position_dist[j] - f.position_dist[2 * j] - f.position_dist[2 * j + 1]).abs())
                .fold(0.0, f64::max);
            let max_momentum_diff = (0..n)
                .filter(|&k| signed(k, n).unsigned_abs() < (n / 2) as u64)
                .map(|k| {
                    let fine_index = signed(k, n).rem_euclid(2 * n as i64) as usize;
                    (c.momentum_dist[k] - f.momentum_dist[fine_index]).abs()
                })
                .fold(0.0, f64::max);
            DoublingRow {
                time_display: c.time_display,
                max_position_diff,
                max_momentum_diff,
            }
        })
        .collect();
    Ok(DoublingReport { n_coarse: n, rows })
}

//! Scenario files: what to simulate and when to look at it.
//!
//! Scenarios are TOML with one table per component. All times are in display
//! units (natural time multiplied by `display_time_factor`).
//!
//! ```toml
//! [lattice]
//! n_sites = 256
//! display_time_factor = 1000.0   # optional
//!
//! [state]
//! kind = "gaussian"              # or "position_eigenstate" with `site`
//! center = 8
//! width = 8.0
//! momentum_index = 31
//!
//! [measurement]
//! kind = "region_pvm"            # "none" | "region_pvm" | "pointer" | "custom_kernel"
//! regions = 6                    # or `boundaries = [0, 42, ...]`
//!
//! [schedule]
//! interval = 1.0                 # omit for no measurement times
//! total_time = 360.0
//! record_times = [0.0, 100.0, 360.0]
//!
//! [output]
//! dir = "out/pvm"
//! report_regions = 6             # region masses for non-PVM runs
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channels::{
    make_regions, pointer_kernel, DampingKernel, DistanceConvention, Measurement, PointerSpec,
    RegionPartition,
};
use crate::states::{build_gaussian_packet, build_position_eigenstate, GaussianPacketSpec};
use crate::{Error, LatticeConfig, Result, StateVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub n_sites: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display_time_factor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Gaussian {
        center: usize,
        width: f64,
        momentum_index: i64,
    },
    /// Defaults to the middle site.
    PositionEigenstate {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        site: Option<usize>,
    },
}

impl StateSpec {
    pub fn build(&self, n_sites: usize) -> Result<StateVector> {
        match *self {
            StateSpec::Gaussian {
                center,
                width,
                momentum_index,
            } => build_gaussian_packet(&GaussianPacketSpec::new(center, width, momentum_index), n_sites),
            StateSpec::PositionEigenstate { site } => {
                build_position_eigenstate(site.unwrap_or(n_sites / 2), n_sites)
            }
        }
    }

    /// Site the state is centred on.
    pub fn home_site(&self, n_sites: usize) -> usize {
        match *self {
            StateSpec::Gaussian { center, .. } => center,
            StateSpec::PositionEigenstate { site } => site.unwrap_or(n_sites / 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasurementSpec {
    #[default]
    None,
    /// Either `regions` (equal regions plus a leftover) or explicit `boundaries`.
    RegionPvm {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        regions: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        boundaries: Option<Vec<usize>>,
    },
    Pointer {
        alpha: f64,
        #[serde(default)]
        distance: DistanceConvention,
    },
    CustomKernel {
        values: Vec<f64>,
        #[serde(default)]
        distance: DistanceConvention,
    },
}

impl MeasurementSpec {
    pub fn region_pvm(regions: usize) -> Self {
        MeasurementSpec::RegionPvm {
            regions: Some(regions),
            boundaries: None,
        }
    }

    pub fn pointer(alpha: f64) -> Self {
        MeasurementSpec::Pointer {
            alpha,
            distance: DistanceConvention::default(),
        }
    }

    pub fn partition(&self, n_sites: usize) -> Result<Option<RegionPartition>> {
        match self {
            MeasurementSpec::RegionPvm {
                regions: Some(m),
                boundaries: None,
            } => make_regions(n_sites, *m).map(Some),
            MeasurementSpec::RegionPvm {
                regions: None,
                boundaries: Some(b),
            } => RegionPartition::from_boundaries(n_sites, b.clone()).map(Some),
            MeasurementSpec::RegionPvm { .. } => Err(Error::InvalidParameter(
                "region_pvm needs exactly one of `regions` or `boundaries`".into(),
            )),
            _ => Ok(None),
        }
    }

    pub fn build(&self, n_sites: usize) -> Result<Option<Measurement>> {
        Ok(match self {
            MeasurementSpec::None => None,
            MeasurementSpec::RegionPvm { .. } => self.partition(n_sites)?.map(Measurement::Pvm),
            MeasurementSpec::Pointer { alpha, distance } => {
                let spec = PointerSpec::new(*alpha, *distance)?;
                Some(Measurement::Kernel(pointer_kernel(&spec, n_sites)?))
            }
            MeasurementSpec::CustomKernel { values, distance } => {
                if values.len() != n_sites {
                    return Err(Error::DimensionMismatch {
                        expected: n_sites,
                        found: values.len(),
                    });
                }
                Some(Measurement::Kernel(DampingKernel::from_values(
                    values.clone(),
                    *distance,
                )?))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    /// Time between measurements; `None` means free evolution only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<f64>,
    pub total_time: f64,
    pub record_times: Vec<f64>,
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.total_time.is_finite() && self.total_time > 0.0) {
            return Err(Error::InvalidSchedule(format!(
                "total_time must be positive, got {}",
                self.total_time
            )));
        }
        if let Some(i) = self.interval {
            if !(i.is_finite() && i > 0.0) {
                return Err(Error::InvalidSchedule(format!("interval must be positive, got {i}")));
            }
        }
        if self.record_times.is_empty() {
            return Err(Error::InvalidSchedule("no record_times".into()));
        }
        if let Some(t) = self
            .record_times
            .iter()
            .find(|t| !(t.is_finite() && **t >= 0.0 && **t <= self.total_time))
        {
            return Err(Error::InvalidSchedule(format!(
                "record time {t} outside [0, {}]",
                self.total_time
            )));
        }
        if self.record_times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSchedule(
                "record_times must be strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report_regions: Option<usize>,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub lattice: LatticeSection,
    pub state: StateSpec,
    #[serde(default)]
    pub measurement: MeasurementSpec,
    pub schedule: Schedule,
    #[serde(default)]
    pub output: OutputSection,
}

impl Scenario {
    pub fn new(
        n_sites: usize,
        state: StateSpec,
        measurement: MeasurementSpec,
        schedule: Schedule,
    ) -> Result<Self> {
        let s = Self {
            lattice: LatticeSection {
                n_sites,
                display_time_factor: None,
            },
            state,
            measurement,
            schedule,
            output: OutputSection::default(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::parse(text, Path::new("<memory>"))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    fn parse(text: &str, path: &Path) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.message().to_string(),
        })?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Checks every component; builds and discards the state and channel.
    pub fn validate(&self) -> Result<()> {
        let cfg = self.lattice_config()?;
        self.state.build(cfg.n_sites())?;
        self.measurement.build(cfg.n_sites())?;
        self.schedule.validate()?;
        if let Some(m) = self.output.report_regions {
            make_regions(cfg.n_sites(), m)?;
        }
        Ok(())
    }

    pub fn lattice_config(&self) -> Result<LatticeConfig> {
        let cfg = LatticeConfig::new(self.lattice.n_sites)?;
        match self.lattice.display_time_factor {
            Some(f) => cfg.with_display_time_factor(f),
            None => Ok(cfg),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.lattice.n_sites
    }

    /// Partition used for region masses: the measurement's own for a PVM,
    /// otherwise `output.report_regions` if set.
    pub fn analysis_partition(&self) -> Result<Option<RegionPartition>> {
        if let Some(p) = self.measurement.partition(self.n_sites())? {
            return Ok(Some(p));
        }
        self.output
            .report_regions
            .map(|m| make_regions(self.n_sites(), m))
            .transpose()
    }

    pub fn with_measurement(mut self, measurement: MeasurementSpec) -> Result<Self> {
        self.measurement = measurement;
        self.validate()?;
        Ok(self)
    }

    pub fn with_interval(mut self, interval: Option<f64>) -> Result<Self> {
        self.schedule.interval = interval;
        self.validate()?;
        Ok(self)
    }

    pub fn with_record_times(mut self, record_times: Vec<f64>) -> Result<Self> {
        self.schedule.record_times = record_times;
        self.validate()?;
        Ok(self)
    }

    pub fn with_display_time_factor(mut self, factor: f64) -> Result<Self> {
        self.lattice.display_time_factor = Some(factor);
        self.validate()?;
        Ok(self)
    }

    /// Same physics on twice the resolution: sites and widths double, momentum
    /// indices and times stay, pointer width `1/α` doubles and region
    /// boundaries double.
    pub fn doubled(&self) -> Result<Self> {
        let state = match self.state {
            StateSpec::Gaussian {
                center,
                width,
                momentum_index,
            } => StateSpec::Gaussian {
                center: 2 * center,
                width: 2.0 * width,
                momentum_index,
            },
            StateSpec::PositionEigenstate { .. } => {
                return Err(Error::NotDoublable(
                    "a position eigenstate has a fully delocalized momentum spectrum; \
                     wrap-around artifacts make a grid comparison meaningless"
                        .into(),
                ))
            }
        };
        let measurement = match &self.measurement {
            MeasurementSpec::None => MeasurementSpec::None,
            MeasurementSpec::RegionPvm { .. } => MeasurementSpec::RegionPvm {
                regions: None,
                boundaries: self
                    .measurement
                    .partition(self.n_sites())?
                    .map(|p| p.doubled().boundaries().to_vec()),
            },
            MeasurementSpec::Pointer { alpha, distance } => MeasurementSpec::Pointer {
                alpha: alpha / 2.0,
                distance: *distance,
            },
            MeasurementSpec::CustomKernel { .. } => {
                return Err(Error::NotDoublable(
                    "a custom kernel has a fixed length and no physical width to rescale".into(),
                ))
            }
        };
        let doubled = Self {
            lattice: LatticeSection {
                n_sites: 2 * self.lattice.n_sites,
                display_time_factor: self.lattice.display_time_factor,
            },
            state,
            measurement,
            schedule: self.schedule.clone(),
            output: OutputSection {
                dir: self.output.dir.clone(),
                report_regions: self.output.report_regions,
            },
        };
        doubled.validate()?;
        Ok(doubled)
    }
}

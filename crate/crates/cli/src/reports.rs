//! Typed result payloads. Each report is wrapped in an [`Envelope`] before
//! printing; parsing the printed JSON back into the same type and printing it
//! again gives identical bytes.

use hardy_core::collapse::{Detector, GridRecord, HKRegion};
use hardy_core::eor::{EoRClaim, MultiplicativeFunctional};
use hardy_core::experiment::CanonicalTag;
use hardy_core::quantum::{JointState, Observable};
use hardy_core::spacetime::{Boost, IntervalClass, SpacetimeEvent, TwoConeRegion};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub command: String,
    pub result: T,
}

impl<T> Envelope<T> {
    pub fn new(command: &str, result: T) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            result,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalMatch {
    pub tag: CanonicalTag,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveReport {
    pub schedule: Vec<String>,
    pub state: JointState,
    /// One entry per reference state defined at the final stage of the schedule.
    pub canonical: Vec<CanonicalMatch>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EorReport {
    pub criterion: String,
    pub observable: Observable,
    pub claim: Option<EoRClaim>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionTime {
    pub detector: Detector,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum CollapseReport {
    VonNeumann {
        t: f64,
        preferred_frame: Boost,
        detection_times: Vec<DetectionTime>,
        state: JointState,
    },
    HellwigKraus {
        query: SpacetimeEvent,
        region: HKRegion,
        state_id: String,
        state: JointState,
    },
    HellwigKrausGrid {
        records: Vec<GridRecord>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalEntry {
    pub landmark: String,
    pub class: IntervalClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfoEntry {
    pub apex: String,
    pub in_info_region: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionsReport {
    pub event: SpacetimeEvent,
    /// Class of `event` as seen from each landmark.
    pub intervals: Vec<IntervalEntry>,
    pub info_regions: Vec<InfoEntry>,
    pub two_cone_region: TwoConeRegion,
    pub in_union: bool,
    pub in_intersection: bool,
    pub hk_region: HKRegion,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub dim: usize,
    pub count: usize,
    pub selected: Vec<usize>,
    pub functionals: Vec<MultiplicativeFunctional>,
}

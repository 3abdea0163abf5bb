//! State assignment when `D+` and/or `D-` fire, under collapse on an
//! equal-time hypersurface of a preferred frame, and under collapse along the
//! backward light cone of each detection.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{evolve, CanonicalTag, EvolutionStep};
use crate::quantum::{postselect, Arm, JointState, Mode, Observable, ProjectorSpec, StageTag};
use crate::spacetime::{Boost, Causality, SpacetimeEvent};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Detector {
    #[serde(rename = "D+")]
    DPlus,
    #[serde(rename = "D-")]
    DMinus,
    #[serde(rename = "C+")]
    CPlus,
    #[serde(rename = "C-")]
    CMinus,
}

impl Detector {
    pub fn arm(self) -> Arm {
        match self {
            Detector::DPlus | Detector::CPlus => Arm::Positron,
            Detector::DMinus | Detector::CMinus => Arm::Electron,
        }
    }

    pub fn observable(self) -> Observable {
        match self {
            Detector::DPlus => Observable::Positron(Mode::D),
            Detector::DMinus => Observable::Electron(Mode::D),
            Detector::CPlus => Observable::Positron(Mode::C),
            Detector::CMinus => Observable::Electron(Mode::C),
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Detector::DPlus => "D+",
            Detector::DMinus => "D-",
            Detector::CPlus => "C+",
            Detector::CMinus => "C-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub event: SpacetimeEvent,
    pub detector: Detector,
}

impl DetectionRecord {
    pub fn new(detector: Detector, event: SpacetimeEvent) -> Self {
        DetectionRecord { event, detector }
    }

    pub fn projector_at(&self, stage: StageTag) -> Result<ProjectorSpec> {
        let obs = self.detector.observable();
        if !obs.defined_at(stage) {
            return Err(Error::Precondition(format!(
                "{} cannot fire at stage {stage}",
                self.detector
            )));
        }
        Ok(obs.projector_at(stage))
    }
}

/// The state once the detectors in `fired` have clicked: the pre-BS2 state
/// carried through the fired arms' second beam splitters and conditioned on
/// the clicks. With nothing fired this is the pre-BS2 state itself.
pub fn collapsed_state(fired: &[Detector]) -> Result<JointState> {
    for (i, d) in fired.iter().enumerate() {
        if fired[..i].iter().any(|e| e.arm() == d.arm()) {
            return Err(Error::Precondition(format!("two detections on the {:?} arm", d.arm())));
        }
    }
    let mut schedule = CanonicalTag::Before.schedule();
    if fired.iter().any(|d| d.arm() == Arm::Positron) {
        schedule.push(EvolutionStep::Bs2Plus);
    }
    if fired.iter().any(|d| d.arm() == Arm::Electron) {
        schedule.push(EvolutionStep::Bs2Minus);
    }
    let mut state = evolve(&schedule)?;
    if fired.is_empty() {
        return Ok(state);
    }
    let stage = state.stage();
    for d in fired {
        let record = DetectionRecord::new(*d, SpacetimeEvent { t: 0.0, z: 0.0 });
        state = postselect(&state, &record.projector_at(stage)?)?;
    }
    Ok(state.with_canonical_phase())
}

/// Collapse on the equal-time slices of `preferred_frame`: at frame time `t`
/// every detection with frame time `≤ t` (ties included) has collapsed the
/// state.
pub fn von_neumann_state(
    t: f64,
    detections: &[DetectionRecord],
    preferred_frame: &Boost,
    tol: &Tolerances,
) -> Result<JointState> {
    let fired: Vec<Detector> = detections
        .iter()
        .filter(|d| preferred_frame.apply(&d.event).t < t + tol.geometry)
        .map(|d| d.detector)
        .collect();
    // Reject inconsistent records even when they have not fired yet.
    let all: Vec<Detector> = detections.iter().map(|d| d.detector).collect();
    collapsed_state(&all).map(|_| ())?;
    collapsed_state(&fired)
}

/// Regions cut out by the backward light cones of the `D+` and `D-` clicks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HKRegion {
    /// Outside (or on) the past cone of `D+` only.
    R1p,
    /// Outside both past cones.
    R2p,
    /// Outside (or on) the past cone of `D-` only.
    R3p,
    /// Strictly inside both past cones.
    R4p,
}

impl HKRegion {
    pub fn collapsed_by(self) -> &'static [Detector] {
        match self {
            HKRegion::R1p => &[Detector::DPlus],
            HKRegion::R2p => &[Detector::DPlus, Detector::DMinus],
            HKRegion::R3p => &[Detector::DMinus],
            HKRegion::R4p => &[],
        }
    }

    pub fn state_id(self) -> &'static str {
        match self {
            HKRegion::R1p => "d+u-",
            HKRegion::R2p => "d+d-",
            HKRegion::R3p => "u+d-",
            HKRegion::R4p => "before",
        }
    }
}

/// `d_plus` and `d_minus` should be spacelike separated.
pub fn hk_region(
    query: &SpacetimeEvent,
    d_plus: &SpacetimeEvent,
    d_minus: &SpacetimeEvent,
    tol: &Tolerances,
) -> HKRegion {
    let c = Causality::new(tol.geometry);
    let by_plus = !c.in_past_interior(query, d_plus);
    let by_minus = !c.in_past_interior(query, d_minus);
    match (by_plus, by_minus) {
        (true, false) => HKRegion::R1p,
        (true, true) => HKRegion::R2p,
        (false, true) => HKRegion::R3p,
        (false, false) => HKRegion::R4p,
    }
}

pub fn hk_state(
    query: &SpacetimeEvent,
    d_plus: &SpacetimeEvent,
    d_minus: &SpacetimeEvent,
    tol: &Tolerances,
) -> Result<JointState> {
    collapsed_state(hk_region(query, d_plus, d_minus, tol).collapsed_by())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRecord {
    pub t: f64,
    pub z: f64,
    pub region: HKRegion,
    pub state_id: String,
}

/// Samples the region map on a `steps × steps` lattice covering the given
/// ranges (inclusive), row by row in increasing `t`.
pub fn hk_region_grid(
    d_plus: &SpacetimeEvent,
    d_minus: &SpacetimeEvent,
    t_range: (f64, f64),
    z_range: (f64, f64),
    steps: usize,
    tol: &Tolerances,
) -> Result<Vec<GridRecord>> {
    if steps < 2 {
        return Err(Error::Precondition("grid needs at least 2 steps per axis".into()));
    }
    let lerp = |(lo, hi): (f64, f64), i: usize| lo + (hi - lo) * i as f64 / (steps - 1) as f64;
    let mut out = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for j in 0..steps {
            let q = SpacetimeEvent::new(lerp(t_range, i), lerp(z_range, j))?;
            let region = hk_region(&q, d_plus, d_minus, tol);
            out.push(GridRecord {
                t: q.t,
                z: q.z,
                region,
                state_id: region.state_id().into(),
            });
        }
    }
    Ok(out)
}

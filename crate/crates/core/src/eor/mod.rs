//! Element-of-reality criteria.
//!
//! A claim `f(A) = v` is produced when some eigenvalue of the path projector
//! `A` has probability one (within [`Tolerances::certainty`]) given the
//! information a criterion allows:
//!
//! * ER1 is frame-bound: it uses the state reached in a chosen frame at time
//!   `now` and conditions on detector outcomes strictly earlier than `now`.
//! * ER3 is cone-bound: it uses the preparation plus outcomes on or outside
//!   the forward light cone of the measurement event (for nonlocal
//!   observables, the union or intersection of two cone exteriors). The
//!   "relevant information" is operationalized as exactly those detector
//!   outcomes.

mod contradiction;
mod criteria;
mod functional;

use serde::{Deserialize, Serialize};

pub use contradiction::{
    hardy_contradiction_report, product_rule_check, ContradictionReport, DerivationStep, InferenceRule,
    ProductRuleStatus, ValueAssignment,
};
pub use criteria::{er1_evaluate, er3_evaluate, usable_outcomes, Er1Query, Er3Query};
pub use functional::{enumerate_multiplicative_functionals, MultiplicativeFunctional};

use crate::error::{Error, Result};
use crate::quantum::{Mode, Observable, ProjectorSpec, StageTag};
use crate::spacetime::{Boost, Geometry, Landmark, RegionRule, SpacetimeEvent};
use crate::tolerance::Tolerances;

/// A detector outcome known to have happened at `event`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnownOutcome {
    pub name: String,
    pub event: SpacetimeEvent,
    pub observable: Observable,
}

impl KnownOutcome {
    pub fn new(name: impl Into<String>, event: SpacetimeEvent, observable: Observable) -> Self {
        KnownOutcome {
            name: name.into(),
            event,
            observable,
        }
    }

    /// The firing of one of the four detectors at its position in `geometry`.
    pub fn detector(geometry: &Geometry, detector: Landmark) -> Result<Self> {
        let observable = match detector {
            Landmark::DPlus => Observable::Positron(Mode::D),
            Landmark::DMinus => Observable::Electron(Mode::D),
            Landmark::CPlus => Observable::Positron(Mode::C),
            Landmark::CMinus => Observable::Electron(Mode::C),
            other => {
                return Err(Error::Precondition(format!("{} is not a detector", other.name())));
            }
        };
        Ok(KnownOutcome::new(detector.name(), geometry.event(detector), observable))
    }

    /// Projector for this outcome at `stage`; fails if the detector's path
    /// does not exist there.
    pub fn projector_at(&self, stage: StageTag) -> Result<ProjectorSpec> {
        if !self.observable.defined_at(stage) {
            return Err(Error::Precondition(format!(
                "outcome {} is not observable at stage {stage}",
                self.name
            )));
        }
        Ok(self.observable.projector_at(stage))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    ER1,
    ER3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EoRClaim {
    pub observable: Observable,
    /// The observable's projector at the stage it was evaluated.
    pub projector: ProjectorSpec,
    /// Always an eigenvalue of a projector: 0 or 1.
    pub value: f64,
    /// Probability of `value` under the conditioning.
    pub probability: f64,
    pub criterion: Criterion,
    pub frame: Option<Boost>,
    pub region_rule: Option<RegionRule>,
    pub conditioning: Vec<KnownOutcome>,
    /// Set for union-rule claims about a measurement that was actually
    /// performed: the union then reaches into the measurement's absolute
    /// future and the inference carries no content.
    pub trivial: bool,
}

/// Geometry plus the two frames in which each side's BS2 is crossed first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Setup {
    pub geometry: Geometry,
    /// Frame in which the positron passes BS2+ before the electron reaches BS2-.
    pub f_plus: Boost,
    /// Frame in which the electron passes BS2- before the positron reaches BS2+.
    pub f_minus: Boost,
    pub tol: Tolerances,
}

impl Default for Setup {
    fn default() -> Self {
        Setup {
            geometry: Geometry::default(),
            f_plus: Boost::new(0.5).expect("subluminal"),
            f_minus: Boost::new(-0.5).expect("subluminal"),
            tol: Tolerances::default(),
        }
    }
}

/// Eigenvalue with probability one, and that probability.
fn certain_value(p_one: f64, tol: &Tolerances) -> Option<(f64, f64)> {
    if p_one >= 1.0 - tol.certainty {
        Some((1.0, p_one))
    } else if p_one <= tol.certainty {
        Some((0.0, 1.0 - p_one))
    } else {
        None
    }
}

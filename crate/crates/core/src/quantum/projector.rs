//! Diagonal projectors, the Born rule, post-selection and branch decomposition.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{Arm, JointBasisLabel, Mode, StageTag};
use super::state::{JointState, Ket};
use crate::error::{Error, Result};
use crate::tolerance::PRUNE_TOL;

/// Projector onto a set of basis labels at one stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectorSpec {
    pub name: String,
    pub stage: StageTag,
    pub included: BTreeSet<JointBasisLabel>,
}

impl ProjectorSpec {
    pub fn new<I>(name: impl Into<String>, stage: StageTag, labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = JointBasisLabel>,
    {
        let included: BTreeSet<_> = labels.into_iter().collect();
        for label in &included {
            stage.check(label)?;
        }
        Ok(ProjectorSpec {
            name: name.into(),
            stage,
            included,
        })
    }

    /// The identity at `stage`.
    pub fn full(stage: StageTag) -> Self {
        ProjectorSpec {
            name: "I".into(),
            stage,
            included: stage.basis().into_iter().collect(),
        }
    }

    pub fn single(stage: StageTag, label: JointBasisLabel) -> Result<Self> {
        ProjectorSpec::new(label.to_string(), stage, [label])
    }

    pub fn contains(&self, label: &JointBasisLabel) -> bool {
        self.included.contains(label)
    }

    pub fn is_empty(&self) -> bool {
        self.included.is_empty()
    }

    pub fn complement(&self) -> Self {
        ProjectorSpec {
            name: format!("not({})", self.name),
            stage: self.stage,
            included: self
                .stage
                .basis()
                .into_iter()
                .filter(|l| !self.included.contains(l))
                .collect(),
        }
    }

    /// Product of two commuting diagonal projectors.
    pub fn intersection(&self, other: &ProjectorSpec) -> Result<Self> {
        self.same_stage(other.stage)?;
        Ok(ProjectorSpec {
            name: format!("{}·{}", self.name, other.name),
            stage: self.stage,
            included: self.included.intersection(&other.included).copied().collect(),
        })
    }

    fn same_stage(&self, stage: StageTag) -> Result<()> {
        if self.stage != stage {
            return Err(Error::StageMismatch {
                expected: self.stage,
                found: stage,
            });
        }
        Ok(())
    }
}

impl Ket {
    /// `P|ψ⟩`.
    pub fn project(&self, proj: &ProjectorSpec) -> Result<Ket> {
        proj.same_stage(self.stage())?;
        Ok(self.restricted(|l| proj.contains(l)))
    }
}

/// `⟨ψ|P|ψ⟩`, clamped to `[0, 1]`.
pub fn born_probability(state: &JointState, proj: &ProjectorSpec) -> Result<f64> {
    Ok(state.ket().project(proj)?.norm_sqr().clamp(0.0, 1.0))
}

/// `P|ψ⟩ / ‖P|ψ⟩‖`.
pub fn postselect(state: &JointState, proj: &ProjectorSpec) -> Result<JointState> {
    let projected = state.ket().project(proj)?;
    let p = projected.norm_sqr();
    if p <= PRUNE_TOL {
        return Err(Error::ZeroProbability {
            projector: proj.name.clone(),
            probability: p,
        });
    }
    JointState::new(projected.scaled(Complex64::new(1.0 / p.sqrt(), 0.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub projector: ProjectorSpec,
    pub probability: f64,
    pub state: JointState,
}

/// Splits `state` over a projective partition of its stage basis. Branches with
/// probability at or below the pruning threshold are omitted.
pub fn measure_decompose(state: &JointState, partition: &[ProjectorSpec]) -> Result<Vec<Branch>> {
    check_partition(state.stage(), partition)?;
    let mut branches = Vec::new();
    for cell in partition {
        let p = born_probability(state, cell)?;
        if p > PRUNE_TOL {
            branches.push(Branch {
                projector: cell.clone(),
                probability: p,
                state: postselect(state, cell)?,
            });
        }
    }
    Ok(branches)
}

/// Verifies that `partition` is a disjoint cover of the basis at `stage`.
pub fn check_partition(stage: StageTag, partition: &[ProjectorSpec]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for cell in partition {
        cell.same_stage(stage)?;
        for label in &cell.included {
            if !seen.insert(*label) {
                return Err(Error::InvalidPartition(format!(
                    "label {label} appears in more than one cell"
                )));
            }
        }
    }
    if let Some(missing) = stage.basis().into_iter().find(|l| !seen.contains(l)) {
        return Err(Error::InvalidPartition(format!("label {missing} is not covered")));
    }
    Ok(())
}

/// Path observable described independently of stage, e.g. `U+` (positron on
/// path u), `D-` (electron on path d), `U+U-` (both on u). It becomes a
/// concrete [`ProjectorSpec`] once a stage is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Observable {
    Gamma,
    Positron(Mode),
    Electron(Mode),
    Pair(Mode, Mode),
}

impl Observable {
    pub fn matches(&self, label: &JointBasisLabel) -> bool {
        match (*self, *label) {
            (Observable::Gamma, JointBasisLabel::Gamma) => true,
            (_, JointBasisLabel::Gamma) | (Observable::Gamma, _) => false,
            (Observable::Positron(m), l) => l.mode(Arm::Positron) == Some(m),
            (Observable::Electron(m), l) => l.mode(Arm::Electron) == Some(m),
            (Observable::Pair(p, e), l) => l == JointBasisLabel::pair(p, e),
        }
    }

    /// Whether the paths this observable asks about exist at `stage`.
    pub fn defined_at(&self, stage: StageTag) -> bool {
        match *self {
            Observable::Gamma => stage.admits_gamma(),
            Observable::Positron(m) => stage.positron.admits(m),
            Observable::Electron(m) => stage.electron.admits(m),
            Observable::Pair(p, e) => stage.positron.admits(p) && stage.electron.admits(e),
        }
    }

    /// Arms whose path the observable inspects.
    pub fn arms(&self) -> &'static [Arm] {
        match self {
            Observable::Gamma => &[],
            Observable::Positron(_) => &[Arm::Positron],
            Observable::Electron(_) => &[Arm::Electron],
            Observable::Pair(..) => &[Arm::Positron, Arm::Electron],
        }
    }

    /// Nonlocal observables involve both interferometers.
    pub fn is_nonlocal(&self) -> bool {
        self.arms().len() == 2
    }

    pub fn projector_at(&self, stage: StageTag) -> ProjectorSpec {
        ProjectorSpec {
            name: self.to_string(),
            stage,
            included: stage.basis().into_iter().filter(|l| self.matches(l)).collect(),
        }
    }

    /// The observable whose projector is the product of both projectors, or
    /// `None` when that product is zero.
    pub fn meet(&self, other: &Observable) -> Option<Observable> {
        use Observable::*;
        match (*self, *other) {
            (a, b) if a == b => Some(a),
            (Gamma, _) | (_, Gamma) => None,
            (Positron(p), Electron(e)) | (Electron(e), Positron(p)) => Some(Pair(p, e)),
            (Positron(p), Pair(q, e)) | (Pair(q, e), Positron(p)) => (p == q).then_some(Pair(q, e)),
            (Electron(e), Pair(p, f)) | (Pair(p, f), Electron(e)) => (e == f).then_some(Pair(p, f)),
            _ => None,
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let up = |m: Mode| m.letter().to_ascii_uppercase();
        match *self {
            Observable::Gamma => f.write_str("GAMMA"),
            Observable::Positron(m) => write!(f, "{}+", up(m)),
            Observable::Electron(m) => write!(f, "{}-", up(m)),
            Observable::Pair(p, e) => write!(f, "{}+{}-", up(p), up(e)),
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("gamma") {
            return Ok(Observable::Gamma);
        }
        let bad = || Error::Parse(format!("bad observable `{s}`"));
        let single = |x: &str| -> Result<(Arm, Mode)> {
            let am: super::basis::ArmMode = x.parse().map_err(|_| bad())?;
            Ok((am.arm, am.mode))
        };
        match t.len() {
            2 => match single(t)? {
                (Arm::Positron, m) => Ok(Observable::Positron(m)),
                (Arm::Electron, m) => Ok(Observable::Electron(m)),
            },
            4 if t.is_ascii() => {
                let (a, b) = t.split_at(2);
                match (single(a)?, single(b)?) {
                    ((Arm::Positron, p), (Arm::Electron, e)) => Ok(Observable::Pair(p, e)),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for Observable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Observable {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

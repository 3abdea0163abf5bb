//! Sparse amplitude vectors over the joint basis.
//!
//! [`Ket`] is an arbitrary (possibly unnormalized) vector tagged with the stage
//! its labels belong to. [`JointState`] wraps a ket whose squared norm is one
//! within [`AMPLITUDE_TOL`]; it is the type every engine hands around.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{JointBasisLabel, StageTag};
use super::Amplitude;
use crate::error::{Error, Result};
use crate::tolerance::{AMPLITUDE_TOL, PRUNE_TOL};

/// Digits kept when amplitudes are written out.
pub const SERIALIZED_DIGITS: usize = 12;

/// Rounds to `digits` significant decimal digits. Negative zero becomes zero.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let text = format!("{:.*e}", digits.saturating_sub(1), x);
    let y: f64 = text.parse().expect("formatted float parses");
    if y == 0.0 {
        0.0
    } else {
        y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    stage: StageTag,
    amplitudes: BTreeMap<JointBasisLabel, Amplitude>,
}

impl Ket {
    pub fn zero(stage: StageTag) -> Self {
        Ket {
            stage,
            amplitudes: BTreeMap::new(),
        }
    }

    pub fn basis(stage: StageTag, label: JointBasisLabel) -> Result<Self> {
        Ket::from_amplitudes(stage, [(label, Complex64::new(1.0, 0.0))])
    }

    /// Builds a ket, summing repeated labels and pruning negligible entries.
    pub fn from_amplitudes<I>(stage: StageTag, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (JointBasisLabel, Amplitude)>,
    {
        let mut ket = Ket::zero(stage);
        for (label, amp) in terms {
            stage.check(&label)?;
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(Error::Parse(format!("non-finite amplitude on {label}")));
            }
            ket.add_term(label, amp);
        }
        ket.prune();
        Ok(ket)
    }

    pub fn stage(&self) -> StageTag {
        self.stage
    }

    pub fn amplitudes(&self) -> &BTreeMap<JointBasisLabel, Amplitude> {
        &self.amplitudes
    }

    pub fn amplitude(&self, label: &JointBasisLabel) -> Amplitude {
        self.amplitudes.get(label).copied().unwrap_or_default()
    }

    pub fn labels(&self) -> impl Iterator<Item = &JointBasisLabel> {
        self.amplitudes.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes
            .values()
            .map(|a| a.norm_sqr())
            .fold(0.0, |acc, x| acc + x)
    }

    pub fn scaled(&self, factor: Amplitude) -> Ket {
        let mut out = Ket {
            stage: self.stage,
            amplitudes: self.amplitudes.iter().map(|(l, a)| (*l, a * factor)).collect(),
        };
        out.prune();
        out
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Ket) -> Result<Amplitude> {
        if self.stage != other.stage {
            return Err(Error::StageMismatch {
                expected: self.stage,
                found: other.stage,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .filter_map(|(l, a)| other.amplitudes.get(l).map(|b| a.conj() * b))
            .sum())
    }

    /// Keeps only the labels accepted by `keep`.
    pub fn restricted<F>(&self, mut keep: F) -> Ket
    where
        F: FnMut(&JointBasisLabel) -> bool,
    {
        Ket {
            stage: self.stage,
            amplitudes: self
                .amplitudes
                .iter()
                .filter(|(l, _)| keep(l))
                .map(|(l, a)| (*l, *a))
                .collect(),
        }
    }

    pub(crate) fn add_term(&mut self, label: JointBasisLabel, amp: Amplitude) {
        *self.amplitudes.entry(label).or_default() += amp;
    }

    pub(crate) fn set_stage(&mut self, stage: StageTag) {
        self.stage = stage;
    }

    pub(crate) fn prune(&mut self) {
        self.amplitudes.retain(|_, a| a.norm() >= PRUNE_TOL);
    }
}

/// A normalized joint state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "StateSnapshot", try_from = "StateSnapshot")]
pub struct JointState {
    ket: Ket,
}

impl JointState {
    /// Wraps `ket`, rejecting it unless its squared norm is one within tolerance.
    pub fn new(ket: Ket) -> Result<Self> {
        let n = ket.norm_sqr();
        if (n - 1.0).abs() > AMPLITUDE_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(JointState { ket })
    }

    /// Rescales `ket` to unit norm.
    pub fn normalized(ket: Ket) -> Result<Self> {
        let n = ket.norm_sqr();
        if n < PRUNE_TOL * PRUNE_TOL || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Ok(JointState {
            ket: ket.scaled(Complex64::new(1.0 / n.sqrt(), 0.0)),
        })
    }

    pub fn from_amplitudes<I>(stage: StageTag, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (JointBasisLabel, Amplitude)>,
    {
        JointState::new(Ket::from_amplitudes(stage, terms)?)
    }

    pub fn basis_state(stage: StageTag, label: JointBasisLabel) -> Result<Self> {
        JointState::new(Ket::basis(stage, label)?)
    }

    pub fn stage(&self) -> StageTag {
        self.ket.stage()
    }

    pub fn amplitudes(&self) -> &BTreeMap<JointBasisLabel, Amplitude> {
        self.ket.amplitudes()
    }

    pub fn amplitude(&self, label: &JointBasisLabel) -> Amplitude {
        self.ket.amplitude(label)
    }

    pub fn ket(&self) -> &Ket {
        &self.ket
    }

    pub fn into_ket(self) -> Ket {
        self.ket
    }

    /// Same ray, with the first amplitude in canonical order made real and
    /// positive. Collapsed single-label states come out with amplitude 1.
    pub fn with_canonical_phase(&self) -> JointState {
        match self.ket.amplitudes.values().next() {
            Some(first) => {
                let phase = first.conj() / first.norm();
                JointState {
                    ket: self.ket.scaled(phase),
                }
            }
            None => self.clone(),
        }
    }

    /// Amplitude records in canonical label order, rounded for output.
    pub fn to_records(&self) -> Vec<AmplitudeRecord> {
        self.amplitudes()
            .iter()
            .map(|(label, a)| AmplitudeRecord {
                label: *label,
                re: round_significant(a.re, SERIALIZED_DIGITS),
                im: round_significant(a.im, SERIALIZED_DIGITS),
            })
            .collect()
    }
}

pub fn inner(a: &JointState, b: &JointState) -> Result<Amplitude> {
    a.ket.inner(&b.ket)
}

/// Label-wise comparison at [`AMPLITUDE_TOL`].
pub fn states_equal(a: &JointState, b: &JointState, up_to_global_phase: bool) -> bool {
    states_equal_within(a, b, up_to_global_phase, AMPLITUDE_TOL)
}

pub fn states_equal_within(a: &JointState, b: &JointState, up_to_global_phase: bool, tol: f64) -> bool {
    if a.stage() != b.stage() {
        return false;
    }
    let mut phase = Complex64::new(1.0, 0.0);
    if up_to_global_phase {
        // e^{iφ} = ⟨a|b⟩ / |⟨a|b⟩| minimizes ‖e^{iφ}a − b‖.
        let overlap = a.ket.inner(&b.ket).expect("stages checked");
        if overlap.norm() < PRUNE_TOL {
            return false;
        }
        phase = overlap / overlap.norm();
    }
    max_label_difference(&a.ket.scaled(phase), &b.ket) < tol
}

fn max_label_difference(a: &Ket, b: &Ket) -> f64 {
    a.labels()
        .chain(b.labels())
        .map(|l| (a.amplitude(l) - b.amplitude(l)).norm())
        .fold(0.0, f64::max)
}

/// One serialized amplitude: `{label, re, im}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeRecord {
    pub label: JointBasisLabel,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StateSnapshot {
    stage: StageTag,
    amplitudes: Vec<AmplitudeRecord>,
}

impl From<JointState> for StateSnapshot {
    fn from(state: JointState) -> Self {
        StateSnapshot {
            stage: state.stage(),
            amplitudes: state.to_records(),
        }
    }
}

impl TryFrom<StateSnapshot> for JointState {
    type Error = Error;

    fn try_from(snap: StateSnapshot) -> Result<Self> {
        JointState::from_amplitudes(
            snap.stage,
            snap.amplitudes
                .into_iter()
                .map(|r| (r.label, Complex64::new(r.re, r.im))),
        )
    }
}

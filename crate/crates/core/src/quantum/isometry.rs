//! Beam splitters, the annihilation relabeling, and their application to states.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::basis::{Arm, ArmStage, JointBasisLabel, Mode, StageTag};
use super::state::{JointState, Ket};
use super::Amplitude;
use crate::error::{Error, Result};
use crate::tolerance::AMPLITUDE_TOL;

/// Which of the two beam splitters in an interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Splitter {
    First,
    Second,
}

impl Splitter {
    fn stages(self) -> (ArmStage, ArmStage) {
        match self {
            Splitter::First => (ArmStage::Source, ArmStage::AfterBs1),
            Splitter::Second => (ArmStage::AfterBs1, ArmStage::AfterBs2),
        }
    }

    /// Single-particle action: BS1 sends `s → (i u + v)/√2`; BS2 sends
    /// `u → (c + i d)/√2` and `v → (i c + d)/√2`.
    fn action(self, mode: Mode) -> Option<[(Mode, Amplitude); 2]> {
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let i = Complex64::new(0.0, FRAC_1_SQRT_2);
        match (self, mode) {
            (Splitter::First, Mode::S) => Some([(Mode::U, i), (Mode::V, r)]),
            (Splitter::Second, Mode::U) => Some([(Mode::C, r), (Mode::D, i)]),
            (Splitter::Second, Mode::V) => Some([(Mode::C, i), (Mode::D, r)]),
            _ => None,
        }
    }
}

/// Linear map given by its columns on a set of input labels. Labels outside the
/// domain pass through unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct IsometrySpec {
    name: String,
    input: StageTag,
    output: StageTag,
    columns: BTreeMap<JointBasisLabel, Ket>,
}

impl IsometrySpec {
    pub fn new(
        name: impl Into<String>,
        input: StageTag,
        output: StageTag,
        columns: BTreeMap<JointBasisLabel, Ket>,
    ) -> Result<Self> {
        let name = name.into();
        for (label, col) in &columns {
            input.check(label)?;
            if col.stage() != output {
                return Err(Error::StageMismatch {
                    expected: output,
                    found: col.stage(),
                });
            }
        }
        let spec = IsometrySpec {
            name,
            input,
            output,
            columns,
        };
        let deviation = spec.orthonormality_deviation();
        if deviation > AMPLITUDE_TOL {
            return Err(Error::NotIsometry {
                name: spec.name,
                deviation,
            });
        }
        Ok(spec)
    }

    /// Beam splitter on one arm, acting on states at `input`.
    pub fn beam_splitter(arm: Arm, splitter: Splitter, input: StageTag) -> Result<Self> {
        let (from, to) = splitter.stages();
        if input.arm(arm) != from {
            return Err(Error::StageMismatch {
                expected: input.with_arm(arm, from),
                found: input,
            });
        }
        let output = input.with_arm(arm, to);
        let mut columns = BTreeMap::new();
        for label in input.basis() {
            let Some(mode) = label.mode(arm) else { continue };
            let action = splitter.action(mode).expect("stage guarantees mode in domain");
            let column = Ket::from_amplitudes(output, action.iter().map(|&(m, a)| (label.with_mode(arm, m), a)))?;
            columns.insert(label, column);
        }
        let index = match splitter {
            Splitter::First => 1,
            Splitter::Second => 2,
        };
        IsometrySpec::new(format!("BS{index}{}", arm.sign()), input, output, columns)
    }

    /// `|u⁺⟩|u⁻⟩ → |γ⟩`, identity on every other label.
    pub fn annihilation() -> Self {
        let stage = StageTag::BEFORE_BS2;
        let columns = BTreeMap::from([(
            JointBasisLabel::pair(Mode::U, Mode::U),
            Ket::basis(stage, JointBasisLabel::Gamma).expect("gamma valid after BS1"),
        )]);
        IsometrySpec::new("annihilation", stage, stage, columns).expect("single unit column")
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &IsometrySpec) -> Result<IsometrySpec> {
        if self.output != next.input {
            return Err(Error::StageMismatch {
                expected: next.input,
                found: self.output,
            });
        }
        let mut columns = BTreeMap::new();
        for (label, col) in &self.columns {
            columns.insert(*label, col.apply(next)?);
        }
        // Labels self passes through unchanged but next acts on.
        for (label, col) in &next.columns {
            if !self.columns.contains_key(label) && self.input.admits(label) {
                columns.insert(*label, col.clone());
            }
        }
        IsometrySpec::new(format!("{}∘{}", next.name, self.name), self.input, next.output, columns)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn input_stage(&self) -> StageTag {
        self.input
    }

    pub fn output_stage(&self) -> StageTag {
        self.output
    }

    pub fn columns(&self) -> &BTreeMap<JointBasisLabel, Ket> {
        &self.columns
    }

    pub fn domain(&self) -> impl Iterator<Item = &JointBasisLabel> {
        self.columns.keys()
    }

    /// Largest entry of `|G − 1|` for the Gram matrix of the columns.
    /// Labels outside the explicit columns act as identity only when they are
    /// admitted at the output stage and orthogonal to every column image.
    pub fn passes_through(&self, label: &JointBasisLabel) -> bool {
        !self.columns.contains_key(label)
            && self.output.admits(label)
            && self
                .columns
                .values()
                .all(|col| col.amplitude(label) == Amplitude::new(0.0, 0.0))
    }

    /// Whether `label` lies in the subspace this map is defined on.
    pub fn accepts(&self, label: &JointBasisLabel) -> bool {
        self.columns.contains_key(label) || self.passes_through(label)
    }

    pub fn orthonormality_deviation(&self) -> f64 {
        let cols: Vec<&Ket> = self.columns.values().collect();
        let mut worst: f64 = 0.0;
        for (i, a) in cols.iter().enumerate() {
            for (j, b) in cols.iter().enumerate().skip(i) {
                let g = a.inner(b).expect("columns share the output stage");
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

impl Ket {
    /// Linear image of this ket under `iso`.
    pub fn apply(&self, iso: &IsometrySpec) -> Result<Ket> {
        if self.stage() != iso.input {
            return Err(Error::StageMismatch {
                expected: iso.input,
                found: self.stage(),
            });
        }
        let mut out = Ket::zero(iso.output);
        for (label, amp) in self.amplitudes() {
            match iso.columns.get(label) {
                Some(col) => {
                    for (l, a) in col.amplitudes() {
                        out.add_term(*l, amp * a);
                    }
                }
                None if iso.passes_through(label) => out.add_term(*label, *amp),
                None => {
                    return Err(Error::LabelOutsideDomain {
                        label: *label,
                        isometry: iso.name.clone(),
                    })
                }
            }
        }
        out.prune();
        out.set_stage(iso.output);
        Ok(out)
    }
}

/// Applies `iso` to a normalized state and checks that the norm survives.
pub fn apply_isometry(state: &JointState, iso: &IsometrySpec) -> Result<JointState> {
    let image = state.ket().apply(iso)?;
    let before = state.ket().norm_sqr();
    let after = image.norm_sqr();
    if (after - before).abs() > AMPLITUDE_TOL {
        return Err(Error::NormNotPreserved { before, after });
    }
    JointState::new(image)
}

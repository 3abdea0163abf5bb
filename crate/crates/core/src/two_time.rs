//! Probabilities of an unperformed intermediate measurement given both the
//! prepared state and a later post-selected outcome:
//!
//! `p_k = ‖Post·V·P_k|pre⟩‖² / Σ_j ‖Post·V·P_j|pre⟩‖²`

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{evolve, CanonicalTag};
use crate::quantum::{check_partition, Arm, IsometrySpec, Ket, Mode, Observable, ProjectorSpec, Splitter, StageTag};
use crate::tolerance::{CERTAINTY_TOL, PRUNE_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct AblScenario {
    /// Need not be normalized; the rule renormalizes.
    pub pre_state: Ket,
    pub intermediate_partition: Vec<ProjectorSpec>,
    /// Maps the intermediate stage to the post-selection stage.
    pub evolution: IsometrySpec,
    pub post_projector: ProjectorSpec,
}

impl AblScenario {
    pub fn new(
        pre_state: Ket,
        intermediate_partition: Vec<ProjectorSpec>,
        evolution: IsometrySpec,
        post_projector: ProjectorSpec,
    ) -> Result<Self> {
        check_partition(pre_state.stage(), &intermediate_partition)?;
        if evolution.input_stage() != pre_state.stage() {
            return Err(Error::StageMismatch {
                expected: evolution.input_stage(),
                found: pre_state.stage(),
            });
        }
        if post_projector.stage != evolution.output_stage() {
            return Err(Error::StageMismatch {
                expected: evolution.output_stage(),
                found: post_projector.stage,
            });
        }
        Ok(AblScenario {
            pre_state,
            intermediate_partition,
            evolution,
            post_projector,
        })
    }
}

/// One probability per partition cell, in partition order.
pub fn abl_probabilities(sc: &AblScenario) -> Result<Vec<f64>> {
    let weights = sc
        .intermediate_partition
        .iter()
        .map(|cell| {
            let branch = sc.pre_state.project(cell)?.apply(&sc.evolution)?;
            Ok(branch.project(&sc.post_projector)?.norm_sqr())
        })
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = weights.iter().sum();
    let scale = sc.pre_state.norm_sqr();
    if scale <= 0.0 || total / scale <= PRUNE_TOL {
        return Err(Error::ImpossiblePostselection(total));
    }
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// Both second beam splitters, from the pre-BS2 stage to the final stage.
pub fn final_evolution() -> IsometrySpec {
    let plus = IsometrySpec::beam_splitter(Arm::Positron, Splitter::Second, StageTag::BEFORE_BS2)
        .expect("positron BS2 at the pre-BS2 stage");
    let minus = IsometrySpec::beam_splitter(Arm::Electron, Splitter::Second, plus.output_stage())
        .expect("electron BS2 after positron BS2");
    plus.then(&minus).expect("stages chain")
}

/// Pre-selected pre-BS2 state, binary partition `{obs = 1, obs = 0}`, both
/// second beam splitters, and the given final-stage post-selection.
pub fn hardy_scenario(observable: Observable, post_projector: ProjectorSpec) -> Result<AblScenario> {
    let pre = evolve(&CanonicalTag::Before.schedule())?;
    let cell = observable.projector_at(pre.stage());
    let rest = cell.complement();
    AblScenario::new(pre.into_ket(), vec![cell, rest], final_evolution(), post_projector)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblEntry {
    pub observable: Observable,
    /// Eigenvalue attached to each partition cell.
    pub outcome_values: Vec<f64>,
    pub probabilities: Vec<f64>,
    /// The eigenvalue whose probability is one, if any.
    pub certain_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VaidmanReport {
    pub post_selection: String,
    pub entries: Vec<AblEntry>,
    /// Certain values of `U+`, `U-`, `U+U-` in that order.
    pub values: Vec<Option<f64>>,
    pub product_rule_holds: bool,
}

pub fn abl_entry(observable: Observable, post_projector: &ProjectorSpec) -> Result<AblEntry> {
    let probabilities = abl_probabilities(&hardy_scenario(observable, post_projector.clone())?)?;
    let outcome_values = vec![1.0, 0.0];
    let certain_value = outcome_values
        .iter()
        .zip(&probabilities)
        .find(|(_, p)| **p >= 1.0 - CERTAINTY_TOL)
        .map(|(v, _)| *v);
    Ok(AblEntry {
        observable,
        outcome_values,
        probabilities,
        certain_value,
    })
}

/// `U+`, `U-` and `U+U-` between preparation and a `D+D-` coincidence.
pub fn vaidman_report() -> Result<VaidmanReport> {
    let post = Observable::Pair(Mode::D, Mode::D).projector_at(StageTag::FINAL);
    let observables = [
        Observable::Positron(Mode::U),
        Observable::Electron(Mode::U),
        Observable::Pair(Mode::U, Mode::U),
    ];
    let entries = observables
        .iter()
        .map(|o| abl_entry(*o, &post))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<Option<f64>> = entries.iter().map(|e| e.certain_value).collect();
    let product_rule_holds = match values[..] {
        [Some(a), Some(b), Some(ab)] => a * b == ab,
        _ => false,
    };
    Ok(VaidmanReport {
        post_selection: post.name,
        entries,
        values,
        product_rule_holds,
    })
}

//! The two-interferometer setup: staged evolution from `|s⁺⟩|s⁻⟩`, the
//! reference states at each stage, final detector statistics and seeded
//! run sampling.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::quantum::{
    apply_isometry, measure_decompose, Arm, ArmStage, IsometrySpec, JointBasisLabel, JointState, Mode, ProjectorSpec,
    Splitter, StageTag,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EvolutionStep {
    Bs1Plus,
    Bs1Minus,
    Annihilate,
    Bs2Plus,
    Bs2Minus,
}

impl EvolutionStep {
    pub const FULL: [EvolutionStep; 5] = [
        EvolutionStep::Bs1Plus,
        EvolutionStep::Bs1Minus,
        EvolutionStep::Annihilate,
        EvolutionStep::Bs2Minus,
        EvolutionStep::Bs2Plus,
    ];

    fn splitter(self) -> Option<(Arm, Splitter)> {
        match self {
            EvolutionStep::Bs1Plus => Some((Arm::Positron, Splitter::First)),
            EvolutionStep::Bs1Minus => Some((Arm::Electron, Splitter::First)),
            EvolutionStep::Bs2Plus => Some((Arm::Positron, Splitter::Second)),
            EvolutionStep::Bs2Minus => Some((Arm::Electron, Splitter::Second)),
            EvolutionStep::Annihilate => None,
        }
    }
}

impl fmt::Display for EvolutionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvolutionStep::Bs1Plus => "bs1+",
            EvolutionStep::Bs1Minus => "bs1-",
            EvolutionStep::Annihilate => "ann",
            EvolutionStep::Bs2Plus => "bs2+",
            EvolutionStep::Bs2Minus => "bs2-",
        })
    }
}

impl FromStr for EvolutionStep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bs1+" => Ok(EvolutionStep::Bs1Plus),
            "bs1-" => Ok(EvolutionStep::Bs1Minus),
            "ann" | "annihilate" => Ok(EvolutionStep::Annihilate),
            "bs2+" => Ok(EvolutionStep::Bs2Plus),
            "bs2-" => Ok(EvolutionStep::Bs2Minus),
            other => Err(Error::Parse(format!("unknown evolution step `{other}`"))),
        }
    }
}

/// Checks ordering: both BS1 before annihilation, annihilation before either
/// BS2, no step twice.
pub fn validate_schedule(schedule: &[EvolutionStep]) -> Result<()> {
    let mut done: Vec<EvolutionStep> = Vec::with_capacity(schedule.len());
    for &step in schedule {
        if done.contains(&step) {
            return Err(Error::InvalidSchedule(format!("{step} applied twice")));
        }
        let has = |s| done.contains(&s);
        match step {
            EvolutionStep::Annihilate if !(has(EvolutionStep::Bs1Plus) && has(EvolutionStep::Bs1Minus)) => {
                return Err(Error::InvalidSchedule(
                    "annihilation requires both first beam splitters".into(),
                ));
            }
            EvolutionStep::Bs2Plus | EvolutionStep::Bs2Minus if !has(EvolutionStep::Annihilate) => {
                return Err(Error::InvalidSchedule(format!(
                    "{step} before the first beam splitters and annihilation"
                )));
            }
            _ => {}
        }
        done.push(step);
    }
    Ok(())
}

/// Evolves `|s⁺⟩|s⁻⟩` through `schedule`.
pub fn evolve(schedule: &[EvolutionStep]) -> Result<JointState> {
    validate_schedule(schedule)?;
    let mut state = JointState::basis_state(StageTag::SOURCE, JointBasisLabel::pair(Mode::S, Mode::S))?;
    for &step in schedule {
        let iso = match step.splitter() {
            Some((arm, sp)) => IsometrySpec::beam_splitter(arm, sp, state.stage())?,
            None => IsometrySpec::annihilation(),
        };
        state = apply_isometry(&state, &iso)?;
    }
    Ok(state)
}

/// The four reference states: before either second beam splitter, the two
/// one-sided intermediate states, and the final state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalTag {
    Before,
    FMinus,
    FPlus,
    After,
}

impl CanonicalTag {
    pub const ALL: [CanonicalTag; 4] = [
        CanonicalTag::Before,
        CanonicalTag::FMinus,
        CanonicalTag::FPlus,
        CanonicalTag::After,
    ];

    pub fn stage(self) -> StageTag {
        match self {
            CanonicalTag::Before => StageTag::BEFORE_BS2,
            CanonicalTag::FMinus => StageTag::new(ArmStage::AfterBs1, ArmStage::AfterBs2),
            CanonicalTag::FPlus => StageTag::new(ArmStage::AfterBs2, ArmStage::AfterBs1),
            CanonicalTag::After => StageTag::FINAL,
        }
    }

    pub fn schedule(self) -> Vec<EvolutionStep> {
        use EvolutionStep::*;
        match self {
            CanonicalTag::Before => vec![Bs1Plus, Bs1Minus, Annihilate],
            CanonicalTag::FMinus => vec![Bs1Plus, Bs1Minus, Annihilate, Bs2Minus],
            CanonicalTag::FPlus => vec![Bs1Plus, Bs1Minus, Annihilate, Bs2Plus],
            CanonicalTag::After => vec![Bs1Plus, Bs1Minus, Annihilate, Bs2Minus, Bs2Plus],
        }
    }

    /// Tag whose stage equals `stage`, if any.
    pub fn for_stage(stage: StageTag) -> Option<CanonicalTag> {
        CanonicalTag::ALL.into_iter().find(|t| t.stage() == stage)
    }
}

impl fmt::Display for CanonicalTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CanonicalTag::Before => "before",
            CanonicalTag::FMinus => "f_minus",
            CanonicalTag::FPlus => "f_plus",
            CanonicalTag::After => "after",
        })
    }
}

/// Hard-coded amplitude tables, kept independent of [`evolve`].
pub fn canonical_state(tag: CanonicalTag) -> JointState {
    let c = Complex64::new;
    let pair = JointBasisLabel::pair;
    let g = JointBasisLabel::Gamma;
    use Mode::{C, D, U, V};
    let (scale, terms) = match tag {
        CanonicalTag::Before => (
            0.5,
            vec![
                (g, c(-1.0, 0.0)),
                (pair(U, V), c(0.0, 1.0)),
                (pair(V, U), c(0.0, 1.0)),
                (pair(V, V), c(1.0, 0.0)),
            ],
        ),
        CanonicalTag::FMinus => (
            1.0 / (2.0 * SQRT_2),
            vec![
                (g, c(-SQRT_2, 0.0)),
                (pair(U, C), c(-1.0, 0.0)),
                (pair(V, C), c(0.0, 2.0)),
                (pair(U, D), c(0.0, 1.0)),
            ],
        ),
        CanonicalTag::FPlus => (
            1.0 / (2.0 * SQRT_2),
            vec![
                (g, c(-SQRT_2, 0.0)),
                (pair(C, U), c(-1.0, 0.0)),
                (pair(C, V), c(0.0, 2.0)),
                (pair(D, U), c(0.0, 1.0)),
            ],
        ),
        CanonicalTag::After => (
            0.25,
            vec![
                (g, c(-2.0, 0.0)),
                (pair(C, C), c(-3.0, 0.0)),
                (pair(C, D), c(0.0, 1.0)),
                (pair(D, C), c(0.0, 1.0)),
                (pair(D, D), c(-1.0, 0.0)),
            ],
        ),
    };
    JointState::from_amplitudes(tag.stage(), terms.into_iter().map(|(l, a)| (l, a * scale)))
        .expect("reference tables are normalized")
}

/// What a single run ends in: annihilation, or one detector click per arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RunOutcome {
    Gamma,
    CpCm,
    CpDm,
    DpCm,
    DpDm,
}

impl RunOutcome {
    pub const ALL: [RunOutcome; 5] = [
        RunOutcome::Gamma,
        RunOutcome::CpCm,
        RunOutcome::CpDm,
        RunOutcome::DpCm,
        RunOutcome::DpDm,
    ];

    pub fn label(self) -> JointBasisLabel {
        match self {
            RunOutcome::Gamma => JointBasisLabel::Gamma,
            RunOutcome::CpCm => JointBasisLabel::pair(Mode::C, Mode::C),
            RunOutcome::CpDm => JointBasisLabel::pair(Mode::C, Mode::D),
            RunOutcome::DpCm => JointBasisLabel::pair(Mode::D, Mode::C),
            RunOutcome::DpDm => JointBasisLabel::pair(Mode::D, Mode::D),
        }
    }
}

impl fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Outcome probabilities of the evolved final state.
pub fn final_distribution() -> BTreeMap<RunOutcome, f64> {
    let state = evolve(&EvolutionStep::FULL).expect("full schedule is valid");
    let partition: Vec<ProjectorSpec> = RunOutcome::ALL
        .iter()
        .map(|o| ProjectorSpec::single(StageTag::FINAL, o.label()).expect("final-stage label"))
        .collect();
    let branches = measure_decompose(&state, &partition).expect("single labels partition the final basis");
    RunOutcome::ALL
        .iter()
        .map(|o| {
            let p = branches
                .iter()
                .find(|b| b.projector.contains(&o.label()))
                .map_or(0.0, |b| b.probability);
            (*o, p)
        })
        .collect()
}

pub const GENERATOR_NAME: &str = "ChaCha8Rng";

/// Draws `n` runs from [`final_distribution`] with a ChaCha8 stream seeded by
/// `seed`. Single-threaded, so the counts are a pure function of `(n, seed)`.
pub fn sample_runs(n: u64, seed: u64) -> Result<BTreeMap<RunOutcome, u64>> {
    if n == 0 {
        return Err(Error::Precondition("sample size must be at least 1".into()));
    }
    let dist = final_distribution();
    let mut cumulative = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for (outcome, p) in &dist {
        acc += p;
        cumulative.push((*outcome, acc));
    }
    let last = cumulative.last().expect("non-empty distribution").0;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<RunOutcome, u64> = RunOutcome::ALL.iter().map(|o| (*o, 0)).collect();
    for _ in 0..n {
        let u: f64 = rng.random();
        let outcome = cumulative.iter().find(|(_, c)| u < *c).map_or(last, |(o, _)| *o);
        *counts.get_mut(&outcome).expect("all outcomes present") += 1;
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub outcome: RunOutcome,
    pub count: u64,
    pub expected: f64,
    pub deviation_sigmas: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub generator: String,
    pub seed: u64,
    pub n: u64,
    pub records: Vec<RunRecord>,
    pub chi_square: f64,
    pub p_value: f64,
}

/// Samples and compares the counts against binomial expectations.
pub fn run_report(n: u64, seed: u64) -> Result<RunReport> {
    let counts = sample_runs(n, seed)?;
    let dist = final_distribution();
    let nf = n as f64;
    let mut chi_square = 0.0;
    let records = RunOutcome::ALL
        .iter()
        .map(|o| {
            let p = dist[o];
            let count = counts[o];
            let expected = nf * p;
            let sigma = (nf * p * (1.0 - p)).sqrt();
            chi_square += (count as f64 - expected).powi(2) / expected;
            RunRecord {
                outcome: *o,
                count,
                expected,
                deviation_sigmas: (count as f64 - expected) / sigma,
            }
        })
        .collect();
    let dof = (RunOutcome::ALL.len() - 1) as f64;
    let p_value = ChiSquared::new(dof).expect("positive dof").sf(chi_square);
    Ok(RunReport {
        generator: GENERATOR_NAME.into(),
        seed,
        n,
        records,
        chi_square,
        p_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::states_equal;
    use EvolutionStep::*;

    #[test]
    fn schedule_ordering_rules() {
        assert!(validate_schedule(&[Bs1Plus, Bs1Minus, Annihilate, Bs2Plus]).is_ok());
        assert!(validate_schedule(&[Bs1Minus]).is_ok());
        assert!(validate_schedule(&[]).is_ok());
        assert!(validate_schedule(&[Bs2Minus]).is_err());
        assert!(validate_schedule(&[Bs1Plus, Annihilate]).is_err());
        assert!(validate_schedule(&[Bs1Plus, Bs1Plus]).is_err());
        assert!(validate_schedule(&[Bs1Plus, Bs1Minus, Bs2Plus]).is_err());
    }

    #[test]
    fn pre_annihilation_state_has_uu_component() {
        let s = evolve(&[Bs1Plus, Bs1Minus]).unwrap();
        let uu = s.amplitude(&JointBasisLabel::pair(Mode::U, Mode::U));
        assert!((uu - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        assert_eq!(s.amplitude(&JointBasisLabel::Gamma), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn splitter_order_on_different_arms_commutes() {
        let a = evolve(&[Bs1Plus, Bs1Minus, Annihilate, Bs2Minus, Bs2Plus]).unwrap();
        let b = evolve(&[Bs1Minus, Bs1Plus, Annihilate, Bs2Plus, Bs2Minus]).unwrap();
        assert!(states_equal(&a, &b, false));
    }

    #[test]
    fn step_text_round_trip() {
        for s in EvolutionStep::FULL {
            assert_eq!(s.to_string().parse::<EvolutionStep>().unwrap(), s);
        }
        assert!("bs3+".parse::<EvolutionStep>().is_err());
    }

    #[test]
    fn canonical_states_are_normalized_and_tagged() {
        for tag in CanonicalTag::ALL {
            let s = canonical_state(tag);
            assert_eq!(s.stage(), tag.stage());
            assert_eq!(CanonicalTag::for_stage(tag.stage()), Some(tag));
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        assert_eq!(sample_runs(1000, 11).unwrap(), sample_runs(1000, 11).unwrap());
        assert_ne!(sample_runs(1000, 11).unwrap(), sample_runs(1000, 12).unwrap());
        assert!(sample_runs(0, 1).is_err());
    }

    #[test]
    fn single_run_has_one_outcome() {
        let counts = sample_runs(1, 99).unwrap();
        assert_eq!(counts.values().sum::<u64>(), 1);
        assert_eq!(counts.values().filter(|c| **c == 1).count(), 1);
    }
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{er1_evaluate, EoRClaim, Er1Query, KnownOutcome, Setup};
use crate::error::{Error, Result};
use crate::quantum::{Mode, Observable};
use crate::spacetime::{Boost, Landmark};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductRuleStatus {
    Holds,
    Violated,
    Undetermined,
}

/// Checks `f(a)·f(b) = f(ab)` over the values assigned by `claims`.
pub fn product_rule_check(
    claims: &[EoRClaim],
    a: &Observable,
    b: &Observable,
    ab: &Observable,
) -> Result<ProductRuleStatus> {
    if a.meet(b) != Some(*ab) {
        return Err(Error::Precondition(format!("{ab} is not the product of {a} and {b}")));
    }
    let mut values: BTreeMap<Observable, f64> = BTreeMap::new();
    for claim in claims {
        if let Some(prev) = values.insert(claim.observable, claim.value) {
            if prev != claim.value {
                return Err(Error::ContradictoryClaims(claim.observable.to_string()));
            }
        }
    }
    Ok(match (values.get(a), values.get(b), values.get(ab)) {
        (Some(fa), Some(fb), Some(fab)) if fa * fb == *fab => ProductRuleStatus::Holds,
        (Some(_), Some(_), Some(_)) => ProductRuleStatus::Violated,
        _ => ProductRuleStatus::Undetermined,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InferenceRule {
    /// Frame-bound certainty.
    Er1,
    /// Values of Lorentz-invariant observables carry over to every frame.
    Li1,
    /// `f(A)·f(B) = 1 ⇒ f(AB) = 1`.
    ProductRule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueAssignment {
    pub observable: Observable,
    pub value: f64,
    /// Where the value is asserted, e.g. "frame F-" or "all frames".
    pub scope: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationStep {
    pub step: usize,
    pub rule: InferenceRule,
    pub claim: Vec<ValueAssignment>,
    pub justification: String,
    pub depends_on: Vec<usize>,
    /// Extra premise beyond ER1 and LI1 that the step relies on.
    pub assumption: Option<String>,
    /// The underlying engine evaluation, for ER1 steps.
    pub evidence: Option<EoRClaim>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContradictionReport {
    pub steps: Vec<DerivationStep>,
    /// Step numbers of two claims that assign different values to one observable.
    pub conflict: Option<(usize, usize)>,
    pub product_rule_assumed: bool,
}

impl ContradictionReport {
    pub fn step(&self, n: usize) -> Option<&DerivationStep> {
        self.steps.iter().find(|s| s.step == n)
    }

    /// Observable and the two conflicting values.
    pub fn conflict_values(&self) -> Option<(Observable, f64, f64)> {
        let (i, j) = self.conflict?;
        let a = &self.step(i)?.claim;
        let b = &self.step(j)?.claim;
        a.iter().find_map(|x| {
            b.iter()
                .find(|y| y.observable == x.observable && y.value != x.value)
                .map(|y| (x.observable, x.value, y.value))
        })
    }
}

fn find_conflict(steps: &[DerivationStep]) -> Option<(usize, usize)> {
    for (i, a) in steps.iter().enumerate() {
        for b in &steps[i + 1..] {
            let clash = a.claim.iter().any(|x| {
                b.claim
                    .iter()
                    .any(|y| x.observable == y.observable && x.value != y.value)
            });
            if clash {
                return Some((a.step, b.step));
            }
        }
    }
    None
}

/// ER1 in `frame` for a local `U` observable on `side`, given the opposite
/// side's `D` detector has fired. `now` is placed midway between that
/// detection and the earliest of the measured side's BS2 crossing and `U`
/// apex.
fn one_sided_prediction(
    setup: &Setup,
    frame: Boost,
    observable: Observable,
    apex: Landmark,
    own_bs2: Landmark,
    other_detector: Landmark,
    other_bs2: Landmark,
) -> Result<EoRClaim> {
    let g = &setup.geometry;
    let t = |l: Landmark| frame.apply(&g.event(l)).t;
    let lower = t(other_detector).max(t(other_bs2));
    let upper = t(own_bs2).min(t(apex));
    if lower + 2.0 * setup.tol.geometry >= upper {
        return Err(Error::Precondition(format!(
            "frame beta={} does not put {} before {} and {}",
            frame.beta(),
            other_detector.name(),
            own_bs2.name(),
            apex.name()
        )));
    }
    let query = Er1Query {
        observable,
        measurement_event: g.event(apex),
        frame,
        now: 0.5 * (lower + upper),
        outcomes: vec![KnownOutcome::detector(g, other_detector)?],
    };
    er1_evaluate(&query, g, &setup.tol)?
        .ok_or_else(|| Error::Precondition(format!("{observable} is not certain in frame beta={}", frame.beta())))
}

fn er1_step(step: usize, claim: EoRClaim, frame_name: &str) -> DerivationStep {
    let frame = claim.frame.expect("ER1 claims carry a frame");
    let detected: Vec<&str> = claim.conditioning.iter().map(|o| o.name.as_str()).collect();
    let justification = if detected.is_empty() {
        format!(
            "ER1 in {frame_name} (beta={}): before either second beam splitter, P({}={}) = {:.12}",
            frame.beta(),
            claim.observable,
            claim.value,
            claim.probability
        )
    } else {
        format!(
            "ER1 in {frame_name} (beta={}): after {} fired, P({}={}) = {:.12}",
            frame.beta(),
            detected.join(", "),
            claim.observable,
            claim.value,
            claim.probability
        )
    };
    DerivationStep {
        step,
        rule: InferenceRule::Er1,
        claim: vec![ValueAssignment {
            observable: claim.observable,
            value: claim.value,
            scope: frame_name.into(),
        }],
        justification,
        depends_on: vec![],
        assumption: None,
        evidence: Some(claim),
    }
}

/// Builds the chain of inferences for a run in which both `D+` and `D-`
/// fire. Steps 1 and 2 come from ER1 in the two one-sided frames, step 3
/// transfers them to every frame, step 4 (only when `assume_product_rule`)
/// combines them into `f(U+U-) = 1`, and step 5 predicts `f(U+U-) = 0` from
/// the state before either second beam splitter.
pub fn hardy_contradiction_report(setup: &Setup, assume_product_rule: bool) -> Result<ContradictionReport> {
    let u_plus = Observable::Positron(Mode::U);
    let u_minus = Observable::Electron(Mode::U);
    let u_both = Observable::Pair(Mode::U, Mode::U);

    let mut steps = Vec::with_capacity(5);
    let c1 = one_sided_prediction(
        setup,
        setup.f_minus,
        u_plus,
        Landmark::UPlusApex,
        Landmark::Bs2Plus,
        Landmark::DMinus,
        Landmark::Bs2Minus,
    )?;
    steps.push(er1_step(1, c1, "frame F-"));
    let c2 = one_sided_prediction(
        setup,
        setup.f_plus,
        u_minus,
        Landmark::UMinusApex,
        Landmark::Bs2Minus,
        Landmark::DPlus,
        Landmark::Bs2Plus,
    )?;
    steps.push(er1_step(2, c2, "frame F+"));

    let f_up = steps[0].claim[0].value;
    let f_um = steps[1].claim[0].value;
    steps.push(DerivationStep {
        step: 3,
        rule: InferenceRule::Li1,
        claim: vec![
            ValueAssignment {
                observable: u_plus,
                value: f_up,
                scope: "all frames".into(),
            },
            ValueAssignment {
                observable: u_minus,
                value: f_um,
                scope: "all frames".into(),
            },
        ],
        justification: format!(
            "LI1: {u_plus} and {u_minus} are Lorentz-invariant, so their values are frame-independent"
        ),
        depends_on: vec![1, 2],
        assumption: None,
        evidence: None,
    });

    if assume_product_rule && f_up * f_um == 1.0 {
        steps.push(DerivationStep {
            step: 4,
            rule: InferenceRule::ProductRule,
            claim: vec![ValueAssignment {
                observable: u_both,
                value: 1.0,
                scope: "all frames".into(),
            }],
            justification: format!("f({u_plus})·f({u_minus}) = 1 implies f({u_both}) = 1"),
            depends_on: vec![3],
            assumption: Some("product rule for commuting observables: f(A)f(B) = 1 implies f(AB) = 1".into()),
            evidence: None,
        });
    }

    let g = &setup.geometry;
    let earliest_later_event = [
        Landmark::UPlusApex,
        Landmark::UMinusApex,
        Landmark::Bs2Plus,
        Landmark::Bs2Minus,
    ]
    .iter()
    .map(|l| g.event(*l).t)
    .fold(f64::INFINITY, f64::min);
    let before_bs2 = Er1Query {
        observable: u_both,
        measurement_event: g.event(Landmark::UPlusApex),
        frame: Boost::IDENTITY,
        now: 0.5 * (g.event(Landmark::Meeting).t + earliest_later_event),
        outcomes: vec![],
    };
    let c5 = er1_evaluate(&before_bs2, g, &setup.tol)?
        .ok_or_else(|| Error::Invariant(format!("{u_both} is not certain before the second beam splitters")))?;
    steps.push(er1_step(5, c5, "every frame"));

    let conflict = find_conflict(&steps);
    Ok(ContradictionReport {
        steps,
        conflict,
        product_rule_assumed: assume_product_rule,
    })
}

use serde::{Deserialize, Serialize};

use super::{certain_value, Criterion, EoRClaim, KnownOutcome};
use crate::error::{Error, Result};
use crate::experiment::{evolve, CanonicalTag, EvolutionStep};
use crate::quantum::{born_probability, postselect, Observable, ProjectorSpec, StageTag};
use crate::spacetime::{Boost, Causality, Geometry, Landmark, RegionRule, SpacetimeEvent};
use crate::tolerance::Tolerances;
use crate::two_time::{abl_probabilities, hardy_scenario};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Er1Query {
    pub observable: Observable,
    pub measurement_event: SpacetimeEvent,
    pub frame: Boost,
    /// Time coordinate in `frame`.
    pub now: f64,
    pub outcomes: Vec<KnownOutcome>,
}

/// Frame-dependent prediction. The state is the one reached at `now` in
/// `frame` (which second beam splitters have been crossed), conditioned on
/// every outcome strictly before `now`.
pub fn er1_evaluate(q: &Er1Query, geometry: &Geometry, tol: &Tolerances) -> Result<Option<EoRClaim>> {
    let eps = tol.geometry;
    let t_meas = q.frame.apply(&q.measurement_event).t;
    if t_meas <= q.now + eps {
        return Err(Error::Precondition(format!(
            "measurement at frame time {t_meas} is not after now = {}",
            q.now
        )));
    }
    let before_now = |e: &SpacetimeEvent| q.frame.apply(e).t < q.now - eps;

    let mut schedule = CanonicalTag::Before.schedule();
    if before_now(&geometry.event(Landmark::Bs2Minus)) {
        schedule.push(EvolutionStep::Bs2Minus);
    }
    if before_now(&geometry.event(Landmark::Bs2Plus)) {
        schedule.push(EvolutionStep::Bs2Plus);
    }
    let mut state = evolve(&schedule)?;
    let stage = state.stage();
    if !q.observable.defined_at(stage) {
        return Err(Error::Precondition(format!(
            "{} is no longer measurable at stage {stage}",
            q.observable
        )));
    }

    let known: Vec<KnownOutcome> = q.outcomes.iter().filter(|o| before_now(&o.event)).cloned().collect();
    for outcome in &known {
        state = postselect(&state, &outcome.projector_at(stage)?)?;
    }

    let projector = q.observable.projector_at(stage);
    let p_one = born_probability(&state, &projector)?;
    Ok(certain_value(p_one, tol).map(|(value, probability)| EoRClaim {
        observable: q.observable,
        projector,
        value,
        probability,
        criterion: Criterion::ER1,
        frame: Some(q.frame),
        region_rule: None,
        conditioning: known,
        trivial: false,
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Er3Query {
    pub observable: Observable,
    /// One apex for a local observable, two (positron side first) for a
    /// nonlocal one.
    pub apexes: Vec<SpacetimeEvent>,
    pub rule: RegionRule,
    pub outcomes: Vec<KnownOutcome>,
    /// Whether the measurement of `observable` actually takes place.
    pub performed: bool,
}

/// Outcomes whose events lie in the query's information region.
pub fn usable_outcomes(q: &Er3Query, causality: &Causality) -> Result<Vec<KnownOutcome>> {
    let needed = if q.observable.is_nonlocal() { 2 } else { 1 };
    if q.apexes.len() != needed {
        return Err(Error::Precondition(format!(
            "{} needs {needed} apex event(s), got {}",
            q.observable,
            q.apexes.len()
        )));
    }
    Ok(q.outcomes
        .iter()
        .filter(|o| match q.apexes[..] {
            [apex] => causality.in_info_region(&o.event, &apex),
            [a, b] => q.rule.admits(causality.two_cone_region(&o.event, &a, &b)),
            _ => unreachable!("apex count checked"),
        })
        .cloned()
        .collect())
}

/// Lorentz-invariant inference from the preparation plus usable outcomes.
/// With no usable outcome this is the Born rule on the pre-BS2 state; with
/// some, the outcomes are post-selected after both second beam splitters
/// and the ABL rule gives the intermediate probability.
pub fn er3_evaluate(q: &Er3Query, tol: &Tolerances) -> Result<Option<EoRClaim>> {
    let usable = usable_outcomes(q, &Causality::new(tol.geometry))?;
    let stage = StageTag::BEFORE_BS2;
    if !q.observable.defined_at(stage) {
        return Err(Error::Precondition(format!(
            "{} is not a pre-BS2 path observable",
            q.observable
        )));
    }

    let p_one = if usable.is_empty() {
        let pre = evolve(&CanonicalTag::Before.schedule())?;
        born_probability(&pre, &q.observable.projector_at(stage))?
    } else {
        let mut post = ProjectorSpec::full(StageTag::FINAL);
        for outcome in &usable {
            post = post.intersection(&outcome.projector_at(StageTag::FINAL)?)?;
        }
        abl_probabilities(&hardy_scenario(q.observable, post)?)?[0]
    };

    let nonlocal = q.observable.is_nonlocal();
    Ok(certain_value(p_one, tol).map(|(value, probability)| EoRClaim {
        observable: q.observable,
        projector: q.observable.projector_at(stage),
        value,
        probability,
        criterion: Criterion::ER3,
        frame: None,
        region_rule: nonlocal.then_some(q.rule),
        conditioning: usable,
        trivial: nonlocal && q.performed && q.rule == RegionRule::Union,
    }))
}

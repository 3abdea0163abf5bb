use hardy_core::collapse::{hk_region, hk_region_grid, hk_state, von_neumann_state, DetectionRecord, Detector};
use hardy_core::eor::{
    enumerate_multiplicative_functionals, er1_evaluate, er3_evaluate, hardy_contradiction_report, Er1Query, Er3Query,
    KnownOutcome,
};
use hardy_core::experiment::{canonical_state, evolve, run_report, CanonicalTag, EvolutionStep};
use hardy_core::quantum::{states_equal_within, Arm, Observable};
use hardy_core::spacetime::{Boost, Causality, Geometry, Landmark, RegionRule, SpacetimeEvent};
use hardy_core::two_time::vaidman_report;
use serde::Serialize;

use crate::error::CliError;
use crate::reports::{
    CanonicalMatch, CollapseReport, DetectionTime, Envelope, EorReport, EvolveReport, InfoEntry, IntervalEntry,
    RegionsReport, TheoremReport,
};
use crate::{Command, CriterionArg, ModelArg, RuleArg, Settings};

/// A report in both printable forms.
pub struct Rendered {
    pub command: String,
    pub json: String,
    pub tree: serde_json::Value,
}

fn rendered<T: Serialize>(command: &str, result: T) -> Result<Rendered, CliError> {
    let env = Envelope::new(command, result);
    let json = serde_json::to_string_pretty(&env).map_err(|e| CliError::Usage(e.to_string()))?;
    let tree = serde_json::to_value(&env.result).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Rendered {
        command: command.to_string(),
        json,
        tree,
    })
}

pub fn dispatch(command: &Command, s: &Settings) -> Result<Rendered, CliError> {
    match command {
        Command::Evolve { steps } => rendered("evolve", cmd_evolve(steps, s)?),
        Command::Abl => rendered("abl", vaidman_report()?),
        Command::Sample { n } => rendered("sample", run_report(*n, s.seed)?),
        Command::Eor {
            criterion,
            observable,
            rule,
            outcomes,
            now,
            performed,
        } => rendered(
            "eor",
            cmd_eor(*criterion, observable, *rule, outcomes, *now, *performed, s)?,
        ),
        Command::Collapse { model, t, z, grid } => rendered("collapse", cmd_collapse(*model, *t, *z, *grid, s)?),
        Command::Regions { t, z } => rendered("regions", cmd_regions(*t, *z, s)?),
        Command::Contradiction { no_product_rule } => rendered(
            "contradiction",
            hardy_contradiction_report(&s.config.setup()?, !no_product_rule)?,
        ),
        Command::Theorem { dim } => {
            let functionals = enumerate_multiplicative_functionals(*dim)?;
            rendered(
                "theorem",
                TheoremReport {
                    dim: *dim,
                    count: functionals.len(),
                    selected: functionals.iter().map(|f| f.selected).collect(),
                    functionals,
                },
            )
        }
    }
}

pub fn cmd_evolve(steps: &[String], s: &Settings) -> Result<EvolveReport, CliError> {
    let schedule = steps
        .iter()
        .map(|x| x.parse::<EvolutionStep>())
        .collect::<Result<Vec<_>, _>>()?;
    let state = evolve(&schedule)?;
    let canonical = CanonicalTag::ALL
        .into_iter()
        .filter(|tag| tag.stage() == state.stage())
        .map(|tag| CanonicalMatch {
            tag,
            matches: states_equal_within(&state, &canonical_state(tag), false, s.config.tolerances.amplitude),
        })
        .collect();
    Ok(EvolveReport {
        schedule: schedule.iter().map(|x| x.to_string()).collect(),
        state,
        canonical,
    })
}

fn frame(s: &Settings) -> Result<Boost, CliError> {
    Ok(Boost::new(s.beta)?)
}

fn apex_for(arm: Arm) -> Landmark {
    match arm {
        Arm::Positron => Landmark::UPlusApex,
        Arm::Electron => Landmark::UMinusApex,
    }
}

fn known_outcomes(names: &[String], g: &Geometry) -> Result<Vec<KnownOutcome>, CliError> {
    names
        .iter()
        .map(|n| {
            let l = Landmark::from_name(n.trim()).ok_or_else(|| CliError::Usage(format!("unknown detector `{n}`")))?;
            Ok(KnownOutcome::detector(g, l)?)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_eor(
    criterion: CriterionArg,
    observable: &str,
    rule: RuleArg,
    outcomes: &[String],
    now: Option<f64>,
    performed: bool,
    s: &Settings,
) -> Result<EorReport, CliError> {
    let observable: Observable = observable.parse()?;
    let g = s.config.geometry()?;
    let outcomes = known_outcomes(outcomes, &g)?;
    let tol = &s.config.tolerances;
    let apexes: Vec<SpacetimeEvent> = observable.arms().iter().map(|a| g.event(apex_for(*a))).collect();
    let claim = match criterion {
        CriterionArg::Er1 => {
            let now = now.ok_or_else(|| CliError::Usage("ER1 needs --now".into()))?;
            let frame = frame(s)?;
            // For a joint observable the measurement completes at the later apex.
            let measurement_event = apexes
                .iter()
                .copied()
                .max_by(|a, b| frame.apply(a).t.total_cmp(&frame.apply(b).t))
                .ok_or_else(|| CliError::Usage(format!("{observable} has no measurement event")))?;
            er1_evaluate(
                &Er1Query {
                    observable,
                    measurement_event,
                    frame,
                    now,
                    outcomes,
                },
                &g,
                tol,
            )?
        }
        CriterionArg::Er3 => er3_evaluate(
            &Er3Query {
                observable,
                apexes,
                rule: match rule {
                    RuleArg::Intersection => RegionRule::Intersection,
                    RuleArg::Union => RegionRule::Union,
                },
                outcomes,
                performed,
            },
            tol,
        )?,
    };
    Ok(EorReport {
        criterion: match criterion {
            CriterionArg::Er1 => "ER1".into(),
            CriterionArg::Er3 => "ER3".into(),
        },
        observable,
        claim,
    })
}

pub fn cmd_collapse(
    model: ModelArg,
    t: Option<f64>,
    z: Option<f64>,
    grid: Option<usize>,
    s: &Settings,
) -> Result<CollapseReport, CliError> {
    let g = s.config.geometry()?;
    let tol = &s.config.tolerances;
    let dp = g.event(Landmark::DPlus);
    let dm = g.event(Landmark::DMinus);
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| CliError::Usage(format!("--{name} is required")));
    match model {
        ModelArg::Vn => {
            let t = need(t, "t")?;
            let preferred_frame = frame(s)?;
            let records = [
                DetectionRecord::new(Detector::DPlus, dp),
                DetectionRecord::new(Detector::DMinus, dm),
            ];
            let state = von_neumann_state(t, &records, &preferred_frame, tol)?;
            Ok(CollapseReport::VonNeumann {
                t,
                preferred_frame,
                detection_times: records
                    .iter()
                    .map(|r| DetectionTime {
                        detector: r.detector,
                        t: preferred_frame.apply(&r.event).t,
                    })
                    .collect(),
                state,
            })
        }
        ModelArg::Hk => match grid {
            Some(steps) => Ok(CollapseReport::HellwigKrausGrid {
                records: hk_region_grid(&dp, &dm, (-1.0, 3.0), (-3.0, 3.0), steps, tol)?,
            }),
            None => {
                let query = SpacetimeEvent::new(need(t, "t")?, need(z, "z")?)?;
                let region = hk_region(&query, &dp, &dm, tol);
                Ok(CollapseReport::HellwigKraus {
                    query,
                    region,
                    state_id: region.state_id().to_string(),
                    state: hk_state(&query, &dp, &dm, tol)?,
                })
            }
        },
    }
}

pub fn cmd_regions(t: f64, z: f64, s: &Settings) -> Result<RegionsReport, CliError> {
    let event = SpacetimeEvent::new(t, z)?;
    let g = s.config.geometry()?;
    let tol = &s.config.tolerances;
    let c = Causality::new(tol.geometry);
    let up = g.event(Landmark::UPlusApex);
    let um = g.event(Landmark::UMinusApex);
    let dp = g.event(Landmark::DPlus);
    let dm = g.event(Landmark::DMinus);
    let mut warnings = Vec::new();
    if !c.spacelike(&up, &um) {
        warnings.push("U+ and U- apexes are not spacelike separated; two-cone regions are not meaningful".into());
    }
    if !c.spacelike(&dp, &dm) {
        warnings.push("D+ and D- are not spacelike separated; collapse regions are not meaningful".into());
    }
    let region = c.two_cone_region(&event, &up, &um);
    Ok(RegionsReport {
        event,
        intervals: Landmark::ALL
            .iter()
            .map(|l| IntervalEntry {
                landmark: l.name().to_string(),
                class: c.interval_class(&g.event(*l), &event),
            })
            .collect(),
        info_regions: [Landmark::UPlusApex, Landmark::UMinusApex]
            .iter()
            .map(|l| InfoEntry {
                apex: l.name().to_string(),
                in_info_region: c.in_info_region(&event, &g.event(*l)),
            })
            .collect(),
        two_cone_region: region,
        in_union: region.in_union(),
        in_intersection: region.in_intersection(),
        hk_region: hk_region(&event, &dp, &dm, tol),
        warnings,
    })
}

use hardy_core::experiment::{evolve, CanonicalTag};
use hardy_core::quantum::{Amplitude, Mode, Observable, ProjectorSpec, StageTag};
use hardy_core::spacetime::{
    interval_class, ordering_in_frame, two_cone_region, Boost, FrameOrdering, Geometry, IntervalClass, Landmark,
    SpacetimeEvent, TwoConeRegion,
};
use hardy_core::two_time::{abl_probabilities, final_evolution, hardy_scenario, vaidman_report, AblScenario};
use proptest::prelude::*;

fn event() -> impl Strategy<Value = SpacetimeEvent> {
    (-5.0f64..5.0, -5.0f64..5.0).prop_map(|(t, z)| SpacetimeEvent::new(t, z).unwrap())
}

#[test]
fn frame_times_match_reference_value() {
    let b = Boost::new(0.5).unwrap();
    let e = b.apply(&SpacetimeEvent::new(1.0, -1.0).unwrap());
    assert!((e.t - 1.7320508075688772).abs() < 1e-12);
    assert!(Boost::new(1.0).is_err());
    assert!(Boost::new(f64::NAN).is_err());
    assert!(SpacetimeEvent::new(f64::INFINITY, 0.0).is_err());
}

#[test]
fn one_sided_frames_order_the_splitters() {
    let g = Geometry::default();
    let plus = g.event(Landmark::Bs2Plus);
    let minus = g.event(Landmark::Bs2Minus);
    assert_eq!(
        ordering_in_frame(&plus, &minus, &Boost::new(0.5).unwrap()),
        FrameOrdering::AFirst
    );
    assert_eq!(
        ordering_in_frame(&plus, &minus, &Boost::new(-0.5).unwrap()),
        FrameOrdering::BFirst
    );
    assert_eq!(
        ordering_in_frame(&plus, &minus, &Boost::IDENTITY),
        FrameOrdering::Simultaneous
    );
}

#[test]
fn detectors_against_apexes() {
    let g = Geometry::default();
    let up = g.event(Landmark::UPlusApex);
    let um = g.event(Landmark::UMinusApex);
    assert_eq!(interval_class(&um, &g.event(Landmark::DPlus)), IntervalClass::Spacelike);
    assert_eq!(
        interval_class(&up, &g.event(Landmark::DMinus)),
        IntervalClass::Spacelike
    );
    assert_eq!(two_cone_region(&g.event(Landmark::DPlus), &up, &um), TwoConeRegion::R1);
    assert_eq!(two_cone_region(&g.event(Landmark::DMinus), &up, &um), TwoConeRegion::R3);
    assert_eq!(
        two_cone_region(&SpacetimeEvent::new(3.0, 0.0).unwrap(), &up, &um),
        TwoConeRegion::R2
    );
    assert_eq!(
        two_cone_region(&g.event(Landmark::Meeting), &up, &um),
        TwoConeRegion::R4
    );
}

#[test]
fn geometry_from_toml() {
    let mut text = String::from("[events]\n");
    for l in Landmark::ALL {
        let e = Geometry::default().event(l);
        text.push_str(&format!("\"{}\" = {{ t = {}, z = {} }}\n", l.name(), e.t, e.z));
    }
    assert_eq!(Geometry::from_toml_str(&text).unwrap(), Geometry::default());
    let partial: String = text
        .lines()
        .filter(|l| !l.starts_with("\"D+\""))
        .collect::<Vec<_>>()
        .join("\n");
    assert!(Geometry::from_toml_str(&partial).is_err());
}

#[test]
fn vaidman_probabilities() {
    let report = vaidman_report().unwrap();
    assert_eq!(report.values, [Some(1.0), Some(1.0), Some(0.0)]);
    assert!(!report.product_rule_holds);
    for entry in &report.entries {
        assert!(entry.probabilities.iter().any(|p| (p - 1.0).abs() < 1e-9));
    }
}

#[test]
fn unconditioned_post_selection_reduces_to_born() {
    let full = ProjectorSpec::full(StageTag::FINAL);
    let p = abl_probabilities(&hardy_scenario(Observable::Positron(Mode::U), full).unwrap()).unwrap();
    assert!((p[0] - 0.25).abs() < 1e-12);
    assert!((p[1] - 0.75).abs() < 1e-12);
}

#[test]
fn impossible_post_selection_rejected() {
    let gamma_and_d = ProjectorSpec::new("never", StageTag::FINAL, []).unwrap();
    let sc = hardy_scenario(Observable::Positron(Mode::U), gamma_and_d).unwrap();
    assert!(abl_probabilities(&sc).is_err());
}

fn scenario(observable: Observable, post: Observable) -> AblScenario {
    hardy_scenario(observable, post.projector_at(StageTag::FINAL)).unwrap()
}

proptest! {
    #[test]
    fn intervals_survive_boosts(a in event(), b in event(), beta in -0.99f64..0.99) {
        let boost = Boost::new(beta).unwrap();
        let (a2, b2) = (boost.apply(&a), boost.apply(&b));
        let s1 = a.interval_sqr(&b);
        let s2 = a2.interval_sqr(&b2);
        prop_assert!((s1 - s2).abs() < 1e-9 * (1.0 + s1.abs()) * boost.gamma().powi(2));
        if s1.abs() > 1e-6 {
            prop_assert_eq!(interval_class(&a, &b), interval_class(&a2, &b2));
        }
    }

    #[test]
    fn regions_survive_boosts(e in event(), beta in -0.99f64..0.99) {
        let g = Geometry::default();
        let boost = Boost::new(beta).unwrap();
        let h = g.boosted(&boost);
        let up = Landmark::UPlusApex;
        let um = Landmark::UMinusApex;
        prop_assert_eq!(
            two_cone_region(&e, &g.event(up), &g.event(um)),
            two_cone_region(&boost.apply(&e), &h.event(up), &h.event(um))
        );
    }

    #[test]
    fn boost_inverse_round_trips(e in event(), beta in -0.99f64..0.99) {
        let b = Boost::new(beta).unwrap();
        let back = b.inverse().apply(&b.apply(&e));
        prop_assert!((back.t - e.t).abs() < 1e-9 * b.gamma().powi(2));
        prop_assert!((back.z - e.z).abs() < 1e-9 * b.gamma().powi(2));
    }

    #[test]
    fn abl_invariant_under_pre_state_rescaling(re in 0.1f64..10.0, im in -10.0f64..10.0) {
        for post in [Observable::Pair(Mode::D, Mode::D), Observable::Electron(Mode::D), Observable::Positron(Mode::C)] {
            let sc = scenario(Observable::Positron(Mode::U), post);
            let scaled = AblScenario {
                pre_state: sc.pre_state.scaled(Amplitude::new(re, im)),
                ..sc.clone()
            };
            let a = abl_probabilities(&sc).unwrap();
            let b = abl_probabilities(&scaled).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn abl_invariant_under_partition_permutation(swap in any::<bool>(), obs in 0usize..3) {
        let observable = [
            Observable::Positron(Mode::U),
            Observable::Electron(Mode::V),
            Observable::Pair(Mode::U, Mode::U),
        ][obs];
        let sc = scenario(observable, Observable::Pair(Mode::D, Mode::D));
        let a = abl_probabilities(&sc).unwrap();
        let mut cells = sc.intermediate_partition.clone();
        if swap {
            cells.reverse();
        }
        let permuted = AblScenario::new(sc.pre_state.clone(), cells, final_evolution(), sc.post_projector.clone()).unwrap();
        let mut b = abl_probabilities(&permuted).unwrap();
        if swap {
            b.reverse();
        }
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn scenario_stage_checks() {
    let pre = evolve(&CanonicalTag::After.schedule()).unwrap();
    let cell = Observable::Positron(Mode::C).projector_at(pre.stage());
    let res = AblScenario::new(
        pre.into_ket(),
        vec![cell.clone(), cell.complement()],
        final_evolution(),
        ProjectorSpec::full(StageTag::FINAL),
    );
    assert!(res.is_err());
}

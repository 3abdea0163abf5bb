//! End-to-end acceptance checks, run without the libtest harness so the
//! PASS/FAIL line for each criterion is always printed. Exits nonzero if any
//! criterion fails.

use std::time::{Duration, Instant};

use hardy_core::collapse::{hk_region, hk_state, von_neumann_state, DetectionRecord, Detector};
use hardy_core::eor::{enumerate_multiplicative_functionals, hardy_contradiction_report, Setup};
use hardy_core::experiment::{canonical_state, evolve, final_distribution, sample_runs, CanonicalTag, RunOutcome};
use hardy_core::quantum::{
    born_probability, postselect, states_equal, Amplitude, JointBasisLabel, JointState, Mode, Observable, StageTag,
};
use hardy_core::spacetime::{
    in_info_region, interval_class, two_cone_region, Boost, Geometry, IntervalClass, Landmark, SpacetimeEvent,
};
use hardy_core::tolerance::Tolerances;
use hardy_core::two_time::vaidman_report;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit_ms: u64) -> Check {
    ensure(
        elapsed <= Duration::from_millis(limit_ms),
        format!("took {elapsed:?}, limit {limit_ms} ms"),
    )
}

fn max_amplitude_error(a: &JointState, b: &JointState) -> f64 {
    let labels: std::collections::BTreeSet<_> = a.amplitudes().keys().chain(b.amplitudes().keys()).collect();
    labels
        .into_iter()
        .map(|l| (a.amplitude(l) - b.amplitude(l)).norm())
        .fold(0.0, f64::max)
}

fn state_reproduction() -> Check {
    let start = Instant::now();
    for tag in CanonicalTag::ALL {
        let evolved = evolve(&tag.schedule()).map_err(|e| e.to_string())?;
        let reference = canonical_state(tag);
        ensure(evolved.stage() == reference.stage(), format!("{tag}: stage differs"))?;
        let err = max_amplitude_error(&evolved, &reference);
        ensure(err < 1e-9, format!("{tag}: amplitude error {err:e}"))?;
    }
    within(start.elapsed(), 1000)
}

fn coincidence_rate() -> Check {
    let dist = final_distribution();
    let expected = [
        (RunOutcome::Gamma, 0.25),
        (RunOutcome::CpCm, 9.0 / 16.0),
        (RunOutcome::CpDm, 1.0 / 16.0),
        (RunOutcome::DpCm, 1.0 / 16.0),
        (RunOutcome::DpDm, 1.0 / 16.0),
    ];
    for (o, p) in expected {
        ensure((dist[&o] - p).abs() < 1e-12, format!("P({o}) = {}", dist[&o]))?;
    }
    let total: f64 = dist.values().sum();
    ensure((total - 1.0).abs() < 1e-12, format!("distribution sums to {total}"))
}

fn monte_carlo() -> Check {
    let start = Instant::now();
    let n = 160_000u64;
    let dist = final_distribution();
    for seed in 0..20u64 {
        let counts = sample_runs(n, seed).map_err(|e| e.to_string())?;
        for (o, p) in &dist {
            let mean = n as f64 * p;
            let sigma = (n as f64 * p * (1.0 - p)).sqrt();
            let dev = (counts[o] as f64 - mean).abs() / sigma;
            ensure(dev <= 4.0, format!("seed {seed}: {o} off by {dev:.2} sigma"))?;
        }
    }
    within(start.elapsed(), 5000)
}

fn abl_vaidman() -> Check {
    let report = vaidman_report().map_err(|e| e.to_string())?;
    let p = |i: usize, value: f64| {
        let e = &report.entries[i];
        let k = e
            .outcome_values
            .iter()
            .position(|v| *v == value)
            .expect("binary outcome");
        e.probabilities[k]
    };
    for (i, value, name) in [(0, 1.0, "U+=1"), (1, 1.0, "U-=1"), (2, 0.0, "U+U-=0")] {
        ensure((p(i, value) - 1.0).abs() < 1e-9, format!("P({name}) = {}", p(i, value)))?;
    }
    ensure(!report.product_rule_holds, "product rule not flagged as violated")
}

fn conditional_certainty() -> Check {
    for (tag, detector, observable) in [
        (
            CanonicalTag::FMinus,
            Observable::Electron(Mode::D),
            Observable::Positron(Mode::U),
        ),
        (
            CanonicalTag::FPlus,
            Observable::Positron(Mode::D),
            Observable::Electron(Mode::U),
        ),
    ] {
        let s = canonical_state(tag);
        let post = postselect(&s, &detector.projector_at(s.stage())).map_err(|e| e.to_string())?;
        let p = born_probability(&post, &observable.projector_at(post.stage())).map_err(|e| e.to_string())?;
        ensure((p - 1.0).abs() < 1e-9, format!("{tag}: P({observable}) = {p}"))?;
    }
    Ok(())
}

fn contradiction() -> Check {
    let setup = Setup::default();
    let with = hardy_contradiction_report(&setup, true).map_err(|e| e.to_string())?;
    ensure(with.steps.len() == 5, format!("{} steps", with.steps.len()))?;
    ensure(
        with.conflict_values() == Some((Observable::Pair(Mode::U, Mode::U), 1.0, 0.0)),
        format!("conflict {:?}", with.conflict_values()),
    )?;
    let without = hardy_contradiction_report(&setup, false).map_err(|e| e.to_string())?;
    ensure(without.conflict.is_none(), "conflict survives without the product rule")
}

fn region_signature(g: &Geometry) -> Vec<String> {
    let tol = Tolerances::default();
    let up = g.event(Landmark::UPlusApex);
    let um = g.event(Landmark::UMinusApex);
    let mut sig = Vec::new();
    for a in Landmark::ALL {
        for b in Landmark::ALL {
            sig.push(format!("{:?}", interval_class(&g.event(a), &g.event(b))));
        }
        sig.push(format!("{:?}", two_cone_region(&g.event(a), &up, &um)));
        sig.push(format!(
            "{:?}",
            hk_region(&g.event(a), &g.event(Landmark::DPlus), &g.event(Landmark::DMinus), &tol)
        ));
    }
    sig
}

fn geometry_facts() -> Check {
    let g = Geometry::default();
    let up = g.event(Landmark::UPlusApex);
    let um = g.event(Landmark::UMinusApex);
    let dp = g.event(Landmark::DPlus);
    let dm = g.event(Landmark::DMinus);
    ensure(in_info_region(&dp, &um), "D+ inside forward cone of U- apex")?;
    ensure(in_info_region(&dm, &up), "D- inside forward cone of U+ apex")?;
    ensure(
        interval_class(&um, &dp) == IntervalClass::Spacelike,
        "D+ not spacelike to U- apex",
    )?;
    ensure(
        !two_cone_region(&dp, &up, &um).in_intersection(),
        "D+ lies in the intersection region",
    )?;
    ensure(
        !two_cone_region(&dm, &up, &um).in_intersection(),
        "D- lies in the intersection region",
    )?;

    let reference = region_signature(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let beta = rng.random_range(-0.99..=0.99);
        let boost = Boost::new(beta).map_err(|e| e.to_string())?;
        ensure(
            region_signature(&g.boosted(&boost)) == reference,
            format!("classification changed under beta={beta}"),
        )?;
    }
    Ok(())
}

fn single_label(s: &JointState, label: JointBasisLabel) -> bool {
    s.amplitudes().len() == 1 && (s.amplitude(&label) - Amplitude::new(1.0, 0.0)).norm() < 1e-12
}

fn collapse_models() -> Check {
    let tol = Tolerances::default();
    let g = Geometry::default();
    let dp = g.event(Landmark::DPlus);
    let dm = g.event(Landmark::DMinus);
    let q = |t, z| SpacetimeEvent::new(t, z).expect("finite");
    let hk = |e: SpacetimeEvent| hk_state(&e, &dp, &dm, &tol).map_err(|e| e.to_string());

    let r1 = hk(q(0.95, -1.0))?;
    let r2 = hk(q(2.0, 0.0))?;
    let r3 = hk(q(0.95, 1.0))?;
    let r4 = hk(q(-1.0, 0.0))?;
    ensure(
        single_label(&r1, JointBasisLabel::pair(Mode::D, Mode::U)),
        "region 1' state",
    )?;
    ensure(
        single_label(&r2, JointBasisLabel::pair(Mode::D, Mode::D)),
        "region 2' state",
    )?;
    ensure(
        single_label(&r3, JointBasisLabel::pair(Mode::U, Mode::D)),
        "region 3' state",
    )?;
    ensure(
        states_equal(&r4, &canonical_state(CanonicalTag::Before), false),
        "region 4' state",
    )?;

    let born = |s: &JointState, p| born_probability(s, &p).map_err(|e| e.to_string());
    ensure(
        (born(&r1, Observable::Electron(Mode::U).projector_at(r1.stage()))? - 1.0).abs() < 1e-9,
        "U- in 1'",
    )?;
    ensure(
        (born(&r3, Observable::Positron(Mode::U).projector_at(r3.stage()))? - 1.0).abs() < 1e-9,
        "U+ in 3'",
    )?;
    let not_both = Observable::Pair(Mode::U, Mode::U)
        .projector_at(StageTag::BEFORE_BS2)
        .complement();
    ensure((born(&r4, not_both)? - 1.0).abs() < 1e-9, "not U+U- in 4'")?;

    let records = [
        DetectionRecord::new(Detector::DPlus, dp),
        DetectionRecord::new(Detector::DMinus, dm),
    ];
    let vn = |t, b: &Boost| von_neumann_state(t, &records, b, &tol).map_err(|e| e.to_string());
    let lab = Boost::IDENTITY;
    let plus_first = Boost::new(0.5).map_err(|e| e.to_string())?;
    ensure(
        states_equal(&vn(0.5, &lab)?, &canonical_state(CanonicalTag::Before), false),
        "simultaneous, before",
    )?;
    ensure(
        single_label(&vn(1.5, &lab)?, JointBasisLabel::pair(Mode::D, Mode::D)),
        "simultaneous, after",
    )?;
    let (tp, tm) = (plus_first.apply(&dp).t, plus_first.apply(&dm).t);
    let between = vn(0.5 * (tp + tm), &plus_first)?;
    ensure(
        single_label(&between, JointBasisLabel::pair(Mode::D, Mode::U)),
        "positron first, between",
    )?;
    ensure(
        single_label(&vn(tm + 0.5, &plus_first)?, JointBasisLabel::pair(Mode::D, Mode::D)),
        "positron first, after",
    )?;

    let u_minus = Observable::Electron(Mode::U);
    let p_between = born(&between, u_minus.projector_at(between.stage()))?;
    let simultaneous = vn(0.5 * (tp + tm), &lab)?;
    let p_simultaneous = born(&simultaneous, u_minus.projector_at(simultaneous.stage()))?;
    ensure(
        (p_between - 1.0).abs() < 1e-9,
        format!("U- not certain between detections: {p_between}"),
    )?;
    ensure(p_simultaneous < 1.0 - 1e-9, "U- certain before simultaneous detections")
}

fn filter_oracle(dim: usize) -> Vec<Vec<f64>> {
    let size = 1usize << dim;
    let mut out: Vec<Vec<f64>> = (0..size)
        .filter(|g| g.count_ones() == 1)
        .map(|g| (0..size).map(|m| if m & g == g { 1.0 } else { 0.0 }).collect())
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    out
}

fn brute_force_oracle(dim: usize) -> Vec<Vec<f64>> {
    let size = 1usize << dim;
    let mut out = Vec::new();
    for code in 0u64..(1u64 << size) {
        let v: Vec<f64> = (0..size).map(|m| ((code >> m) & 1) as f64).collect();
        let ones = (0..dim).filter(|i| v[1 << i] == 1.0).count();
        if ones == 0 || ones == dim {
            continue;
        }
        if (0..size).all(|a| (0..size).all(|b| v[a & b] == v[a] * v[b])) {
            out.push(v);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    out
}

fn uniqueness() -> Check {
    let mut elapsed = Duration::ZERO;
    for dim in 2..=6 {
        let start = Instant::now();
        let found = enumerate_multiplicative_functionals(dim).map_err(|e| e.to_string())?;
        elapsed += start.elapsed();
        ensure(found.len() == dim, format!("dim {dim}: {} assignments", found.len()))?;
        for f in &found {
            let ones = f.atom_values().iter().filter(|v| **v == 1.0).count();
            ensure(ones == 1, format!("dim {dim}: {ones} projectors mapped to 1"))?;
        }
        let mut values: Vec<Vec<f64>> = found.into_iter().map(|f| f.values).collect();
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let oracle = if dim <= 4 {
            brute_force_oracle(dim)
        } else {
            filter_oracle(dim)
        };
        ensure(values == oracle, format!("dim {dim}: differs from oracle"))?;
    }
    within(elapsed, 1000)
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 state reproduction", state_reproduction),
        ("2 coincidence rate", coincidence_rate),
        ("3 monte carlo", monte_carlo),
        ("4 ABL / Vaidman", abl_vaidman),
        ("5 conditional certainty", conditional_certainty),
        ("6 contradiction derivation", contradiction),
        ("7 geometry facts", geometry_facts),
        ("8 collapse models", collapse_models),
        ("9 uniqueness check", uniqueness),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS  {name}"),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("{} of {} criteria failed", failed.len(), criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}

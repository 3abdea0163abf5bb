//! 1+1 dimensional Minkowski geometry in units with c = 1: boosts, causal
//! classification, forward-cone information regions and the named events of
//! the experiment.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::GEOM_EPS;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeEvent {
    pub t: f64,
    pub z: f64,
}

impl SpacetimeEvent {
    pub fn new(t: f64, z: f64) -> Result<Self> {
        if !t.is_finite() || !z.is_finite() {
            return Err(Error::NonFiniteEvent { t, z });
        }
        Ok(SpacetimeEvent { t, z })
    }

    /// `(Δt)² − (Δz)²` from `self` to `other`; positive for timelike separation.
    pub fn interval_sqr(&self, other: &SpacetimeEvent) -> f64 {
        let dt = other.t - self.t;
        let dz = other.z - self.z;
        dt * dt - dz * dz
    }
}

impl fmt::Display for SpacetimeEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t={}, z={})", self.t, self.z)
    }
}

/// Lorentz boost along z with velocity `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BoostRepr", into = "BoostRepr")]
pub struct Boost {
    beta: f64,
}

#[derive(Serialize, Deserialize)]
struct BoostRepr {
    beta: f64,
}

impl TryFrom<BoostRepr> for Boost {
    type Error = Error;
    fn try_from(r: BoostRepr) -> Result<Self> {
        Boost::new(r.beta)
    }
}

impl From<Boost> for BoostRepr {
    fn from(b: Boost) -> Self {
        BoostRepr { beta: b.beta }
    }
}

impl Boost {
    pub const IDENTITY: Boost = Boost { beta: 0.0 };

    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta.abs() >= 1.0 {
            return Err(Error::InvalidBoost(beta));
        }
        Ok(Boost { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.beta * self.beta).sqrt()
    }

    pub fn inverse(&self) -> Boost {
        Boost { beta: -self.beta }
    }

    pub fn apply(&self, e: &SpacetimeEvent) -> SpacetimeEvent {
        let g = self.gamma();
        SpacetimeEvent {
            t: g * (e.t - self.beta * e.z),
            z: g * (e.z - self.beta * e.t),
        }
    }
}

pub fn boost_event(e: &SpacetimeEvent, b: &Boost) -> SpacetimeEvent {
    b.apply(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalClass {
    TimelikeFuture,
    TimelikePast,
    Spacelike,
    LightlikeFuture,
    LightlikePast,
    Coincident,
}

/// Position relative to the forward cones of two apexes A and B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TwoConeRegion {
    /// Inside cone A only.
    R1,
    /// Inside both cones.
    R2,
    /// Inside cone B only.
    R3,
    /// Inside neither.
    R4,
}

impl TwoConeRegion {
    /// Union of the two cone exteriors.
    pub fn in_union(self) -> bool {
        self != TwoConeRegion::R2
    }

    /// Intersection of the two cone exteriors.
    pub fn in_intersection(self) -> bool {
        self == TwoConeRegion::R4
    }
}

/// How the exteriors of two forward cones are combined into one information
/// region for a nonlocal observable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionRule {
    Intersection,
    Union,
}

impl RegionRule {
    pub fn admits(self, region: TwoConeRegion) -> bool {
        match self {
            RegionRule::Intersection => region.in_intersection(),
            RegionRule::Union => region.in_union(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameOrdering {
    AFirst,
    BFirst,
    Simultaneous,
}

/// Causal predicates evaluated with a fixed slack `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Causality {
    pub eps: f64,
}

impl Default for Causality {
    fn default() -> Self {
        Causality { eps: GEOM_EPS }
    }
}

impl Causality {
    pub fn new(eps: f64) -> Self {
        Causality { eps }
    }

    /// Class of `b` as seen from `a`.
    pub fn interval_class(&self, a: &SpacetimeEvent, b: &SpacetimeEvent) -> IntervalClass {
        let dt = b.t - a.t;
        let dz = b.z - a.z;
        if dt.abs() < self.eps && dz.abs() < self.eps {
            return IntervalClass::Coincident;
        }
        let s = dt * dt - dz * dz;
        if s > self.eps {
            if dt > 0.0 {
                IntervalClass::TimelikeFuture
            } else {
                IntervalClass::TimelikePast
            }
        } else if s < -self.eps {
            IntervalClass::Spacelike
        } else if dt > 0.0 {
            IntervalClass::LightlikeFuture
        } else {
            IntervalClass::LightlikePast
        }
    }

    /// `e` is strictly inside the open forward cone of `apex`.
    pub fn in_forward_interior(&self, e: &SpacetimeEvent, apex: &SpacetimeEvent) -> bool {
        self.interval_class(apex, e) == IntervalClass::TimelikeFuture
    }

    /// `e` is strictly inside the open backward cone of `apex`.
    pub fn in_past_interior(&self, e: &SpacetimeEvent, apex: &SpacetimeEvent) -> bool {
        self.interval_class(apex, e) == IntervalClass::TimelikePast
    }

    /// On or outside the forward cone of `apex`.
    pub fn in_info_region(&self, e: &SpacetimeEvent, apex: &SpacetimeEvent) -> bool {
        !self.in_forward_interior(e, apex)
    }

    pub fn two_cone_region(
        &self,
        e: &SpacetimeEvent,
        apex_a: &SpacetimeEvent,
        apex_b: &SpacetimeEvent,
    ) -> TwoConeRegion {
        match (self.in_forward_interior(e, apex_a), self.in_forward_interior(e, apex_b)) {
            (true, false) => TwoConeRegion::R1,
            (true, true) => TwoConeRegion::R2,
            (false, true) => TwoConeRegion::R3,
            (false, false) => TwoConeRegion::R4,
        }
    }

    pub fn ordering_in_frame(&self, a: &SpacetimeEvent, b: &SpacetimeEvent, boost: &Boost) -> FrameOrdering {
        let ta = boost.apply(a).t;
        let tb = boost.apply(b).t;
        if (ta - tb).abs() < self.eps {
            FrameOrdering::Simultaneous
        } else if ta < tb {
            FrameOrdering::AFirst
        } else {
            FrameOrdering::BFirst
        }
    }

    pub fn spacelike(&self, a: &SpacetimeEvent, b: &SpacetimeEvent) -> bool {
        self.interval_class(a, b) == IntervalClass::Spacelike
    }
}

pub fn interval_class(a: &SpacetimeEvent, b: &SpacetimeEvent) -> IntervalClass {
    Causality::default().interval_class(a, b)
}

pub fn in_info_region(e: &SpacetimeEvent, apex: &SpacetimeEvent) -> bool {
    Causality::default().in_info_region(e, apex)
}

/// Callers should supply spacelike-separated apexes; see [`Causality::spacelike`].
pub fn two_cone_region(e: &SpacetimeEvent, apex_a: &SpacetimeEvent, apex_b: &SpacetimeEvent) -> TwoConeRegion {
    Causality::default().two_cone_region(e, apex_a, apex_b)
}

pub fn ordering_in_frame(a: &SpacetimeEvent, b: &SpacetimeEvent, boost: &Boost) -> FrameOrdering {
    Causality::default().ordering_in_frame(a, b, boost)
}

/// Named events of the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Landmark {
    /// Where the two overlapping paths meet.
    Meeting,
    UPlusApex,
    UMinusApex,
    Bs2Plus,
    Bs2Minus,
    DPlus,
    DMinus,
    CPlus,
    CMinus,
}

impl Landmark {
    pub const ALL: [Landmark; 9] = [
        Landmark::Meeting,
        Landmark::UPlusApex,
        Landmark::UMinusApex,
        Landmark::Bs2Plus,
        Landmark::Bs2Minus,
        Landmark::DPlus,
        Landmark::DMinus,
        Landmark::CPlus,
        Landmark::CMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Landmark::Meeting => "P",
            Landmark::UPlusApex => "U+",
            Landmark::UMinusApex => "U-",
            Landmark::Bs2Plus => "BS2+",
            Landmark::Bs2Minus => "BS2-",
            Landmark::DPlus => "D+",
            Landmark::DMinus => "D-",
            Landmark::CPlus => "C+",
            Landmark::CMinus => "C-",
        }
    }

    pub fn from_name(name: &str) -> Option<Landmark> {
        Landmark::ALL.into_iter().find(|l| l.name() == name)
    }

    fn default_event(self) -> SpacetimeEvent {
        let (t, z) = match self {
            Landmark::Meeting => (0.0, 0.0),
            Landmark::UPlusApex => (0.5, 1.0),
            Landmark::UMinusApex => (0.5, -1.0),
            Landmark::Bs2Plus => (1.0, 1.0),
            Landmark::Bs2Minus => (1.0, -1.0),
            Landmark::DPlus | Landmark::CPlus => (1.05, 1.0),
            Landmark::DMinus | Landmark::CMinus => (1.05, -1.0),
        };
        SpacetimeEvent { t, z }
    }
}

/// A set of named events that contains at least every [`Landmark`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GeometryFile", into = "GeometryFile")]
pub struct Geometry {
    events: BTreeMap<String, SpacetimeEvent>,
}

#[derive(Serialize, Deserialize)]
struct GeometryFile {
    events: BTreeMap<String, SpacetimeEvent>,
}

impl TryFrom<GeometryFile> for Geometry {
    type Error = Error;
    fn try_from(f: GeometryFile) -> Result<Self> {
        Geometry::from_events(f.events)
    }
}

impl From<Geometry> for GeometryFile {
    fn from(g: Geometry) -> Self {
        GeometryFile { events: g.events }
    }
}

impl Default for Geometry {
    /// Lab-frame layout: BS2± spacelike to each other, each detector just
    /// after its own BS2 and inside the forward cone of its own-side `U`
    /// apex only.
    fn default() -> Self {
        Geometry {
            events: Landmark::ALL
                .iter()
                .map(|l| (l.name().to_string(), l.default_event()))
                .collect(),
        }
    }
}

impl Geometry {
    pub fn from_events(events: BTreeMap<String, SpacetimeEvent>) -> Result<Self> {
        for l in Landmark::ALL {
            if !events.contains_key(l.name()) {
                return Err(Error::MissingEvent(l.name().to_string()));
            }
        }
        for e in events.values() {
            SpacetimeEvent::new(e.t, e.z)?;
        }
        Ok(Geometry { events })
    }

    /// Parses a TOML document with an `[events]` table of `{ t, z }` entries.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn event(&self, landmark: Landmark) -> SpacetimeEvent {
        self.events[landmark.name()]
    }

    pub fn get(&self, name: &str) -> Result<SpacetimeEvent> {
        self.events
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingEvent(name.to_string()))
    }

    pub fn events(&self) -> &BTreeMap<String, SpacetimeEvent> {
        &self.events
    }

    /// Every event expressed in the boosted frame.
    pub fn boosted(&self, boost: &Boost) -> Geometry {
        Geometry {
            events: self.events.iter().map(|(k, e)| (k.clone(), boost.apply(e))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(t: f64, z: f64) -> SpacetimeEvent {
        SpacetimeEvent::new(t, z).unwrap()
    }

    #[test]
    fn boost_rejects_superluminal() {
        assert!(Boost::new(1.0).is_err());
        assert!(Boost::new(-1.2).is_err());
        assert!(Boost::new(f64::NAN).is_err());
        assert!(Boost::new(0.999).is_ok());
    }

    #[test]
    fn non_finite_event_rejected() {
        assert!(SpacetimeEvent::new(f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn info_region_boundary_and_past() {
        let apex = ev(0.0, 0.0);
        assert!(!in_info_region(&ev(2.0, 0.5), &apex));
        assert!(in_info_region(&ev(1.0, 1.0), &apex));
        assert!(in_info_region(&ev(1.0, -1.0), &apex));
        assert!(in_info_region(&ev(-3.0, 0.0), &apex));
        assert!(in_info_region(&apex, &apex));
    }

    #[test]
    fn lightlike_and_coincident_classes() {
        let a = ev(0.0, 0.0);
        assert_eq!(interval_class(&a, &ev(1.0, 1.0)), IntervalClass::LightlikeFuture);
        assert_eq!(interval_class(&a, &ev(-1.0, 1.0)), IntervalClass::LightlikePast);
        assert_eq!(interval_class(&a, &a), IntervalClass::Coincident);
        assert_eq!(interval_class(&a, &ev(-1.0, 0.0)), IntervalClass::TimelikePast);
    }

    #[test]
    fn two_cone_regions_basic() {
        let a = ev(0.0, -1.0);
        let b = ev(0.0, 1.0);
        assert_eq!(two_cone_region(&ev(-5.0, 0.0), &a, &b), TwoConeRegion::R4);
        assert_eq!(two_cone_region(&ev(5.0, 0.0), &a, &b), TwoConeRegion::R2);
        assert_eq!(two_cone_region(&ev(0.5, -1.0), &a, &b), TwoConeRegion::R1);
        assert_eq!(two_cone_region(&ev(0.5, 1.0), &a, &b), TwoConeRegion::R3);
        assert!(RegionRule::Union.admits(TwoConeRegion::R1));
        assert!(!RegionRule::Intersection.admits(TwoConeRegion::R1));
        assert!(!RegionRule::Union.admits(TwoConeRegion::R2));
    }

    #[test]
    fn geometry_from_toml() {
        let mut text = String::from("[events]\n");
        for l in Landmark::ALL {
            let e = l.default_event();
            text.push_str(&format!("\"{}\" = {{ t = {}, z = {} }}\n", l.name(), e.t, e.z));
        }
        text.push_str("extra = { t = 3.0, z = 0.0 }\n");
        let g = Geometry::from_toml_str(&text).unwrap();
        assert_eq!(g.event(Landmark::DMinus), ev(1.05, -1.0));
        assert_eq!(g.get("extra").unwrap(), ev(3.0, 0.0));

        let missing = "[events]\nP = { t = 0.0, z = 0.0 }\n";
        assert!(Geometry::from_toml_str(missing).is_err());
    }
}

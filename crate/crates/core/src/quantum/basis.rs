//! Path labels, joint basis kets and the per-arm stage bookkeeping.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arm {
    Positron,
    Electron,
}

impl Arm {
    pub fn sign(self) -> char {
        match self {
            Arm::Positron => '+',
            Arm::Electron => '-',
        }
    }

    pub fn other(self) -> Arm {
        match self {
            Arm::Positron => Arm::Electron,
            Arm::Electron => Arm::Positron,
        }
    }
}

/// Path label within one interferometer. Variant order is alphabetical so the
/// derived `Ord` gives the canonical (lexicographic) label ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    C,
    D,
    S,
    U,
    V,
}

impl Mode {
    pub fn letter(self) -> char {
        match self {
            Mode::C => 'c',
            Mode::D => 'd',
            Mode::S => 's',
            Mode::U => 'u',
            Mode::V => 'v',
        }
    }

    fn from_letter(c: char) -> Option<Mode> {
        match c.to_ascii_lowercase() {
            'c' => Some(Mode::C),
            'd' => Some(Mode::D),
            's' => Some(Mode::S),
            'u' => Some(Mode::U),
            'v' => Some(Mode::V),
            _ => None,
        }
    }
}

/// A mode tagged with the particle it belongs to, written `u+`, `d-`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArmMode {
    pub arm: Arm,
    pub mode: Mode,
}

impl ArmMode {
    pub fn new(arm: Arm, mode: Mode) -> Self {
        ArmMode { arm, mode }
    }
}

impl fmt::Display for ArmMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.mode.letter(), self.arm.sign())
    }
}

impl FromStr for ArmMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.trim().chars();
        let (Some(m), Some(sign), None) = (chars.next(), chars.next(), chars.next()) else {
            return Err(Error::Parse(format!("bad arm mode `{s}`")));
        };
        let mode = Mode::from_letter(m).ok_or_else(|| Error::Parse(format!("bad mode `{m}`")))?;
        let arm = match sign {
            '+' => Arm::Positron,
            '-' => Arm::Electron,
            _ => return Err(Error::Parse(format!("bad arm sign in `{s}`"))),
        };
        Ok(ArmMode { arm, mode })
    }
}

/// Basis ket of the joint system: the annihilation photon, or a positron path
/// paired with an electron path. The pair stores bare modes, so the first slot
/// is always the positron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JointBasisLabel {
    Gamma,
    Pair { positron: Mode, electron: Mode },
}

impl JointBasisLabel {
    pub fn pair(positron: Mode, electron: Mode) -> Self {
        JointBasisLabel::Pair { positron, electron }
    }

    pub fn from_arm_modes(positron: ArmMode, electron: ArmMode) -> Result<Self> {
        if positron.arm != Arm::Positron || electron.arm != Arm::Electron {
            return Err(Error::Parse(format!(
                "pair must be (positron, electron), got ({positron}, {electron})"
            )));
        }
        Ok(JointBasisLabel::pair(positron.mode, electron.mode))
    }

    /// Mode of the given arm, `None` for the photon.
    pub fn mode(&self, arm: Arm) -> Option<Mode> {
        match (*self, arm) {
            (JointBasisLabel::Gamma, _) => None,
            (JointBasisLabel::Pair { positron, .. }, Arm::Positron) => Some(positron),
            (JointBasisLabel::Pair { electron, .. }, Arm::Electron) => Some(electron),
        }
    }

    pub fn with_mode(&self, arm: Arm, mode: Mode) -> Self {
        match (*self, arm) {
            (JointBasisLabel::Gamma, _) => JointBasisLabel::Gamma,
            (JointBasisLabel::Pair { electron, .. }, Arm::Positron) => JointBasisLabel::pair(mode, electron),
            (JointBasisLabel::Pair { positron, .. }, Arm::Electron) => JointBasisLabel::pair(positron, mode),
        }
    }

    pub fn positron(&self) -> Option<ArmMode> {
        self.mode(Arm::Positron).map(|m| ArmMode::new(Arm::Positron, m))
    }

    pub fn electron(&self) -> Option<ArmMode> {
        self.mode(Arm::Electron).map(|m| ArmMode::new(Arm::Electron, m))
    }
}

impl fmt::Display for JointBasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JointBasisLabel::Gamma => f.write_str("gamma"),
            JointBasisLabel::Pair { positron, electron } => write!(
                f,
                "{}{}",
                ArmMode::new(Arm::Positron, *positron),
                ArmMode::new(Arm::Electron, *electron)
            ),
        }
    }
}

impl FromStr for JointBasisLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("gamma") || s == "γ" {
            return Ok(JointBasisLabel::Gamma);
        }
        if s.len() != 4 || !s.is_ascii() {
            return Err(Error::Parse(format!("bad joint label `{s}`")));
        }
        let (p, e) = s.split_at(2);
        JointBasisLabel::from_arm_modes(p.parse()?, e.parse()?)
    }
}

impl Serialize for JointBasisLabel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for JointBasisLabel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// How far one particle has travelled through its interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArmStage {
    Source,
    AfterBs1,
    AfterBs2,
}

impl ArmStage {
    /// Modes a particle can occupy at this stage.
    pub fn modes(self) -> &'static [Mode] {
        match self {
            ArmStage::Source => &[Mode::S],
            ArmStage::AfterBs1 => &[Mode::U, Mode::V],
            ArmStage::AfterBs2 => &[Mode::C, Mode::D],
        }
    }

    pub fn admits(self, mode: Mode) -> bool {
        self.modes().contains(&mode)
    }

    fn name(self) -> &'static str {
        match self {
            ArmStage::Source => "source",
            ArmStage::AfterBs1 => "after_bs1",
            ArmStage::AfterBs2 => "after_bs2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StageTag {
    pub positron: ArmStage,
    pub electron: ArmStage,
}

impl StageTag {
    pub const SOURCE: StageTag = StageTag::new(ArmStage::Source, ArmStage::Source);
    pub const BEFORE_BS2: StageTag = StageTag::new(ArmStage::AfterBs1, ArmStage::AfterBs1);
    pub const FINAL: StageTag = StageTag::new(ArmStage::AfterBs2, ArmStage::AfterBs2);

    pub const fn new(positron: ArmStage, electron: ArmStage) -> Self {
        StageTag { positron, electron }
    }

    pub fn arm(&self, arm: Arm) -> ArmStage {
        match arm {
            Arm::Positron => self.positron,
            Arm::Electron => self.electron,
        }
    }

    pub fn with_arm(&self, arm: Arm, stage: ArmStage) -> Self {
        match arm {
            Arm::Positron => StageTag::new(stage, self.electron),
            Arm::Electron => StageTag::new(self.positron, stage),
        }
    }

    /// The photon can only exist once both particles have left their sources.
    pub fn admits_gamma(&self) -> bool {
        self.positron != ArmStage::Source && self.electron != ArmStage::Source
    }

    pub fn admits(&self, label: &JointBasisLabel) -> bool {
        match *label {
            JointBasisLabel::Gamma => self.admits_gamma(),
            JointBasisLabel::Pair { positron, electron } => {
                self.positron.admits(positron) && self.electron.admits(electron)
            }
        }
    }

    pub fn check(&self, label: &JointBasisLabel) -> Result<()> {
        if self.admits(label) {
            Ok(())
        } else {
            Err(Error::LabelOutsideStage {
                label: *label,
                stage: *self,
            })
        }
    }

    /// Every basis label valid at this stage, in canonical order.
    pub fn basis(&self) -> Vec<JointBasisLabel> {
        let mut out = Vec::new();
        if self.admits_gamma() {
            out.push(JointBasisLabel::Gamma);
        }
        for &p in self.positron.modes() {
            for &e in self.electron.modes() {
                out.push(JointBasisLabel::pair(p, e));
            }
        }
        out
    }
}

impl fmt::Display for StageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.positron.name(), self.electron.name())
    }
}

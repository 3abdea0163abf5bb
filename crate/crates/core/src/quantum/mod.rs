//! Joint positron–electron state algebra.

mod basis;
mod isometry;
mod projector;
mod state;

pub use basis::{Arm, ArmMode, ArmStage, JointBasisLabel, Mode, StageTag};
pub use isometry::{apply_isometry, IsometrySpec, Splitter};
pub use projector::{
    born_probability, check_partition, measure_decompose, postselect, Branch, Observable, ProjectorSpec,
};
pub use state::{
    inner, round_significant, states_equal, states_equal_within, AmplitudeRecord, JointState, Ket, SERIALIZED_DIGITS,
};

/// Complex probability amplitude.
pub type Amplitude = num_complex::Complex64;

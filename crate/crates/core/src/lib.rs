//! Engines for Hardy's two-interferometer gedanken experiment.
//!
//! * [`quantum`]: sparse joint states, beam-splitter isometries, Born rule,
//!   post-selection and branch decomposition.
//! * [`experiment`]: staged evolution, reference states, detector statistics
//!   and seeded run sampling.
//! * [`two_time`]: pre- and post-selected probabilities.
//! * [`spacetime`]: 1+1D boosts, causal classes and light-cone regions.
//! * [`eor`]: element-of-reality criteria, the product rule and the
//!   contradiction chain.
//! * [`collapse`]: preferred-frame and backward-light-cone collapse.

pub mod collapse;
pub mod eor;
pub mod error;
pub mod experiment;
pub mod quantum;
pub mod spacetime;
pub mod tolerance;
pub mod two_time;

pub use error::{Error, Result};

//! Dense complex linear algebra and quantum primitives over labeled
//! multipartite systems: states, unitaries, measurements, distances and
//! seeded randomness. Every other module builds on this one.
//!
//! All values are immutable after construction; stochastic operations take
//! an explicit [`rng::SeedStream`]. Dense representation throughout, sized
//! for total dimensions up to a few thousand.

pub mod density;
pub mod dist;
pub mod eigen;
pub mod layout;
pub mod linalg;
pub mod measure;
pub mod random;
pub mod rng;
pub mod unitary;

pub use density::DensityMatrix;
pub use dist::{binary_entropy, fidelity, trace_distance};
pub use layout::{labels, Label, SystemLayout};
pub use measure::{
    computational_distribution, expectation, measure_computational, measure_projectors,
    Measurement,
};
pub use random::{random_density, random_pure, random_unitary};
pub use rng::SeedStream;
pub use unitary::{Observable, UnitaryOp};

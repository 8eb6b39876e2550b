//! Directed animals on the rotated square lattice and their random-walk
//! encodings: exact kernels, counts and identities, plus samplers for the
//! Boltzmann half-pyramid and the uniform infinite (half-)pyramids.

pub mod encoding;
pub mod enumeration;
pub mod exact;
pub mod kernels;
pub mod lattice;
pub mod simlab;
pub mod walks;

pub use exact::ExactProb;
pub use lattice::{AdmissibleSet, Animal, Ball, Layer, Vertex};

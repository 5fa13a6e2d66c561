//! Neural ray tracing for site-specific radio propagation modeling.
//!
//! The crate combines a deterministic geometric ray tracer over semantic-
//! tagged triangle scenes with two interchangeable ray-surface interaction
//! models: a classical Fresnel-physics oracle and a trainable polarization-
//! driven predictor network. On top of those it provides dataset
//! construction, the two-phase training procedure (module-wise pre-training
//! followed by system-wise end-to-end training on receiver-side impulse
//! responses), and the evaluation metrics used to compare predicted and
//! reference multipath components.

pub mod geom;
pub mod math;
pub mod nn;
pub mod physics;
pub mod scene;
pub mod textio;

pub use math::Vec3;

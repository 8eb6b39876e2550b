//! Samplers assembled from walks and the encoding, Monte Carlo experiments
//! and output.

pub mod experiments;
pub mod render;
pub mod report;
pub mod samplers;

pub use experiments::{experiment, ExperimentError};
pub use render::{render_svg, Style};
pub use report::{ExperimentConfig, Format, McReport, McRow};
pub use samplers::{
    sample_bhp, sample_bhp_ball, sample_uip_ball, sample_uip_minus_ball, sample_uip_plus_ball, sample_uip_plus_bluered,
    sample_uniform_half_pyramid, sample_uniform_pyramid, SampleError,
};

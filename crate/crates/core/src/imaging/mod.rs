//! Image operators, the restoration models, and quality metrics.

mod blur;
mod gradient;
mod metrics;
mod model;
mod pgm;
mod synth;

pub use blur::{Boundary, BlurSpec, GaussianBlur};
pub use gradient::DiscreteGradient;
pub use metrics::{degrade, degrade_detailed, degrade_with, isnr, quantize_255, Degraded};
pub use model::{assemble_model, ModelSpec, Penalty};
pub use pgm::{decode_pgm, encode_pgm, read_pgm, write_pgm};
pub use synth::synthetic_texture;

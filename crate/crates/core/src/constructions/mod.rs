//! Constructive ingredients of the blow-up chain. Every coloring returned
//! from this module has been passed through [`crate::progressions::find_mono_ap`].

mod blowup;
mod erdos_turan;
mod fiber;
mod pipeline;
mod resample;
mod sparsify;

pub use blowup::{assign_blowup_colors, blowup, draw_shifts, identify_color, BlowupOutcome, BlowupParams};
pub use erdos_turan::{erdos_turan_elements, erdos_turan_set};
pub use fiber::fiber_union;
pub use pipeline::{build_pipeline, plan, Mode, PipelineConfig, PipelineOutput, PipelinePlan};
pub use resample::{mt_coloring, mt_coloring_from, ResampleOutcome};
pub use sparsify::{sparsify_coloring, Sparsified};

/// Groups up to this order get their inputs checked for AP-freeness eagerly.
pub const EAGER_CHECK_LIMIT: u64 = 1 << 16;

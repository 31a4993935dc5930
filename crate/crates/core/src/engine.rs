//! Selector over the three ways of computing the Uhlmann phase.

use serde::Serialize;

use crate::chebyshev::uhlmann_phase_closed;
use crate::error::Result;
use crate::holonomy::{uhlmann_phase_trace, HolonomyMethod, PhaseResult};
use crate::scalar::Real;
use crate::spin::SpinNumber;
use crate::thermal::LoopConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "engine")]
pub enum PhaseEngine {
    /// `arg[(-1)^{2j} U_{2j}(z)]`.
    Chebyshev,
    /// Trace against the closed-form holonomy.
    TraceClosed,
    /// Trace against the numerically path-ordered holonomy.
    TracePathOrdered { steps: usize },
}

impl PhaseEngine {
    pub fn name(&self) -> &'static str {
        match self {
            PhaseEngine::Chebyshev => "chebyshev",
            PhaseEngine::TraceClosed => "trace_closed",
            PhaseEngine::TracePathOrdered { .. } => "trace_path_ordered",
        }
    }

    pub fn evaluate<T: Real>(
        &self,
        spin: SpinNumber,
        cfg: &LoopConfig<T>,
    ) -> Result<PhaseResult<T>> {
        match *self {
            PhaseEngine::Chebyshev => Ok(uhlmann_phase_closed(spin, cfg)),
            PhaseEngine::TraceClosed => uhlmann_phase_trace(spin, cfg, HolonomyMethod::Closed),
            PhaseEngine::TracePathOrdered { steps } => {
                uhlmann_phase_trace(spin, cfg, HolonomyMethod::path_ordered(steps))
            }
        }
    }
}

#pragma once

// Explicit Jacobi co-simulation master. At every communication point all
// outputs are sampled before any input changes, then the connections copy
// outputs to inputs, so no unit ever observes another unit's mid-step state.
//
// Sampling convention: at a regular communication point outputs are read
// with the inputs held over the step that just finished (the zero-order hold
// extends through the point). The t_start handshake and event points instead
// run a dependency-ordered consistent exchange, so the initial samples and
// the post-event samples already reflect the freshly exchanged inputs.

#include "costep/core/trace.hpp"
#include "costep/orchestrator/model.hpp"
#include "costep/stepctl/controllers.hpp"

namespace costep {

struct RunConfig {
    double t_start = 0.0;
    double t_end = 0.0;
    StepController* controller = nullptr;  // non-owning

    /// States recorded per row as (unit_id, state_name); empty = all states.
    std::vector<std::pair<std::string, std::string>> record_states;
};

/// The t[0] handshake: evaluates outputs and applies connections in bounded
/// fixed-point sweeps until the exchanged values settle. Feedthrough chains
/// converge; a genuine algebraic loop is rejected with ConfigError.
void initialize(Model& model);

/// Runs the master loop from t_start to t_end and returns the full trace.
/// The controller's proposal is clamped so pending event times and t_end are
/// hit exactly; events mutate states at their communication point and are
/// followed by a consistent re-exchange before the row is recorded.
Trace run(Model& model, const RunConfig& config);

}  // namespace costep

#pragma once

// Built-in experiments mirroring the two worked examples and the general
// two-integrator setup, so every scenario is runnable without authoring a
// config file.

#include <optional>
#include <string>
#include <vector>

#include "costep/cli/config.hpp"

namespace costep {

const std::vector<ExperimentConfig>& builtin_experiments();

std::optional<ExperimentConfig> find_builtin(const std::string& name);

}  // namespace costep

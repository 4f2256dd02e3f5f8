#pragma once

#include "config.hpp"

namespace expcli {

// Runs the configured experiment, writing its CSV tables and summary.json
// under cfg.out_dir. Returns the number of invariant violations.
int run_experiment(const ExperimentConfig& cfg);

}  // namespace expcli

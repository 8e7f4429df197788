// experiment.hpp -- named initial conditions and the driver that advances a
// configured problem through time, writing history and snapshot files.
#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "diagnostics.hpp"
#include "imagefield.hpp"
#include "schemes.hpp"

namespace pfrss {

// deterministic presets; h = 1/(n-1)
GridField builtin_initial_condition(const std::string& name, int n, int dim);

struct RunResult {
    GridField final_u;
    GridField final_mu;  // empty unless the scheme carries a chemical potential
    bool has_mu = false;
    double final_s = 0.0;  // auxiliary variable, sav scheme only
    RunHistory history;
    double median_step_seconds = 0.0;
    std::vector<std::string> snapshot_files;
    std::string history_file;
};

// time loop; writes history CSV, snapshot PGM+CSV pairs, and on failure a
// FAILED.txt marker with the partial history flushed
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace pfrss

// config.hpp -- experiment configuration: `key = value` text with defaults
// and validation.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "operators.hpp"
#include "schemes.hpp"

namespace pfrss {

enum class ProblemKind { heat, allen_cahn, cahn_hilliard, inpaint, segment, stability, convergence };

const char* to_string(ProblemKind p);
ProblemKind problem_from_string(const std::string& s);

struct ExperimentConfig {
    ProblemKind problem = ProblemKind::heat;
    SchemeId scheme_id = SchemeId::heat_rss_euler;
    int n = 32;
    int dim = 2;
    double dt = 1e-3;
    double t_max = 1e-2;
    double tau = 2.0;
    double epsilon = 0.1;
    double lambda0 = 0.0;
    double lambda = 0.0;
    double C0 = 1.0;
    OperatorKind operator_kind = OperatorKind::cs2;
    bool project_mean = true;
    double fixed_point_tol = 1e-10;
    int max_fixed_point_iters = 50;
    std::string initial_condition = "zero";  // preset name or image path
    std::string image_path;                  // inpaint/segment input
    std::string mask_path;                   // inpaint mask
    std::string output_dir = ".";
    std::vector<double> snapshot_times;

    SchemeConfig scheme_config() const;
    void validate() const;
    std::string serialize() const;
};

// parses `key = value` lines; '#' starts a comment; errors carry line numbers
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace pfrss

// diagnostics.hpp -- run monitors, stability-bound calculators, and the
// convergence-order study.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "models.hpp"
#include "operators.hpp"
#include "schemes.hpp"

namespace pfrss {

enum class EnergyKind { quadratic, allen_cahn, cahn_hilliard, none };

struct RunHistory {
    std::vector<double> times;
    std::vector<double> energies;
    std::vector<double> masses;
    std::vector<double> max_abs;
    std::vector<double> increment_norms;

    std::size_t length() const { return times.size(); }
    std::string to_csv() const;  // header row: t,energy,mass,max_abs,increment_norm
};

// appends one row; `previous` (if any) feeds the increment norm
void record(RunHistory& history, double t, const GridField& u, const TensorOperator& A,
            const DoubleWell& well, EnergyKind kind, const GridField* previous = nullptr,
            std::optional<double> energy_override = std::nullopt);

struct MonotoneCheck {
    bool ok = true;
    std::size_t first_violation = 0;  // meaningful when !ok
};

enum class Direction { decreasing, increasing };

// scans the sequence with relative slack 1e-12 (1 + |value|); `strict` refuses
// plateaus beyond the slack as well (default allows them)
MonotoneCheck verify_monotone(const std::vector<double>& seq, Direction dir, bool strict = false);

struct StabilityReport {
    HypothesisH hypothesis;
    bool euler_unconditional = false;
    double dt_bound_euler = 0.0;  // valid when the flag is false
    bool cn_unconditional = false;
    double dt_bound_cn = 0.0;
    bool ac_unconditional = false;
    double dt_bound_ac = 0.0;     // includes the kernel cap 2 eps^2 / L
    double tau_bound_ch = 0.0;    // unconditional for tau >= this value
    bool ch_unconditional = false;
    double lipschitz = 2.0;       // max |f'| on [-1, 1]
};

// evaluates every branch formula with constants measured from (A, B)
StabilityReport predict_bounds(const TensorOperator& A, const TensorOperator& B,
                               const SchemeConfig& cfg);

std::string format_report(const StabilityReport& r);

struct ConvergenceStudy {
    std::vector<double> h_values;
    std::vector<double> errors;
    double slope = 0.0;
    int first_used = 0;  // grids trimmed from the coarse end of the fit
    int last_used = 0;   // index of the finest grid used
};

// Interior maximum error of the second-derivative reconstruction P v = Q u
// against -u'' on nodes 1..n-2 (the two closure rows are where the schemes
// are intentionally lower order). Grids outside the asymptotic range are
// trimmed at either end by an adjacent-ratio test before the fit.
ConvergenceStudy convergence_study(OperatorKind kind, const std::vector<double>& h_list,
                                   const std::function<double(double)>& f,
                                   const std::function<double(double)>& f_second);

}  // namespace pfrss

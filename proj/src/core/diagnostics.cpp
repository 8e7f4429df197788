#include "diagnostics.hpp"

#include <cmath>
#include <sstream>

#include "schemes.hpp"

namespace pfrss {

std::string RunHistory::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "t,energy,mass,max_abs,increment_norm\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        os << times[i] << ',' << energies[i] << ',' << masses[i] << ',' << max_abs[i] << ','
           << increment_norms[i] << '\n';
    return os.str();
}

void record(RunHistory& history, double t, const GridField& u, const TensorOperator& A,
            const DoubleWell& well, EnergyKind kind, const GridField* previous,
            std::optional<double> energy_override) {
    if (!history.times.empty() && t <= history.times.back())
        fail(ErrorCode::invalid_argument, "record: times must be strictly increasing");
    double energy = 0.0;
    if (energy_override) {
        energy = *energy_override;
    } else {
        switch (kind) {
            case EnergyKind::quadratic: {
                GridField au = A.apply(u);
                energy = 0.5 * dot(au, u) * std::pow(u.h, u.dim);
                break;
            }
            case EnergyKind::allen_cahn: energy = ac_energy(u, A, well); break;
            case EnergyKind::cahn_hilliard: energy = ch_energy(u, A, well); break;
            case EnergyKind::none: energy = 0.0; break;
        }
    }
    double incr = 0.0;
    if (previous) {
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            double d = u.values[i] - previous->values[i];
            incr += d * d;
        }
        incr = std::sqrt(incr);
    }
    history.times.push_back(t);
    history.energies.push_back(energy);
    history.masses.push_back(quadrature(u));
    history.max_abs.push_back(pfrss::max_abs(u));
    history.increment_norms.push_back(incr);
}

MonotoneCheck verify_monotone(const std::vector<double>& seq, Direction dir, bool strict) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        double slack = 1e-12 * (1.0 + std::abs(seq[i]));
        double step = seq[i + 1] - seq[i];
        bool bad = dir == Direction::decreasing ? step > slack : step < -slack;
        if (strict && !bad) {
            bool flat = std::abs(step) <= slack;
            bad = flat;
        }
        if (bad) return {false, i + 1};
    }
    return {true, 0};
}

StabilityReport predict_bounds(const TensorOperator& A, const TensorOperator& B,
                               const SchemeConfig& cfg) {
    StabilityReport r;
    r.hypothesis = estimate_hypothesis_h(A, B);
    const double beta = r.hypothesis.beta;
    const double rho = r.hypothesis.rho_A;
    const double L = r.lipschitz;
    const double e2 = cfg.epsilon * cfg.epsilon;

    r.euler_unconditional = cfg.tau >= 0.5 * beta;
    if (!r.euler_unconditional) r.dt_bound_euler = 2.0 / ((1.0 - 2.0 * cfg.tau / beta) * rho);

    r.cn_unconditional = cfg.tau >= beta;
    if (!r.cn_unconditional) r.dt_bound_cn = 2.0 / ((1.0 - cfg.tau / beta) * rho);

    const double kernel_cap = 2.0 * e2 / L;
    if (cfg.tau >= 0.5 * beta) {
        double margin = (cfg.tau / beta - 0.5) * r.hypothesis.lambda_min_A - L / (2.0 * e2);
        if (margin >= 0.0) {
            // unconditional branch; the nontrivial-kernel cap still applies
            r.ac_unconditional = false;
            r.dt_bound_ac = kernel_cap;
        } else {
            r.dt_bound_ac = std::min(1.0 / (L / (2.0 * e2) - (cfg.tau / beta - 0.5) * r.hypothesis.lambda_min_A),
                                     kernel_cap);
        }
    } else {
        r.dt_bound_ac =
            std::min(1.0 / (L / (2.0 * e2) - (cfg.tau / beta - 0.5) * rho), kernel_cap);
    }

    r.tau_bound_ch = std::max(beta, L / (2.0 * e2 * r.hypothesis.lambda_min_B) + 0.5 * beta);
    r.ch_unconditional = cfg.tau >= r.tau_bound_ch;
    return r;
}

std::string format_report(const StabilityReport& r) {
    std::ostringstream os;
    os.precision(6);
    os << "alpha          " << r.hypothesis.alpha << "\n"
       << "beta           " << r.hypothesis.beta << "\n"
       << "rho(A)         " << r.hypothesis.rho_A << "\n"
       << "lambda_min(A)  " << r.hypothesis.lambda_min_A << "\n"
       << "lambda_min(B)  " << r.hypothesis.lambda_min_B << "\n"
       << "asymmetry A/B  " << r.hypothesis.asymmetry_A << " / " << r.hypothesis.asymmetry_B << "\n"
       << "L (|f'| cap)   " << r.lipschitz << "\n";
    os << "euler          ";
    if (r.euler_unconditional) os << "unconditional\n";
    else os << "dt < " << r.dt_bound_euler << "\n";
    os << "crank-nicolson ";
    if (r.cn_unconditional) os << "unconditional\n";
    else os << "dt < " << r.dt_bound_cn << "\n";
    os << "allen-cahn     dt < " << r.dt_bound_ac << "\n";
    os << "cahn-hilliard  ";
    if (r.ch_unconditional) os << "unconditional at configured tau";
    else os << "needs tau >= " << r.tau_bound_ch;
    os << "\n";
    return os.str();
}

ConvergenceStudy convergence_study(OperatorKind kind, const std::vector<double>& h_list,
                                   const std::function<double(double)>& f,
                                   const std::function<double(double)>& f_second) {
    if (h_list.size() < 4) fail(ErrorCode::invalid_argument, "convergence_study: need at least 4 grids");
    ConvergenceStudy out;
    out.h_values = h_list;
    for (double h : h_list) {
        int n = static_cast<int>(std::lround(1.0 / h)) + 1;
        ImplicitOperator op;
        switch (kind) {
            case OperatorKind::lele4: op = build_lele(n, h); break;
            case OperatorKind::cs2: op = build_cs2(n, h); break;
            case OperatorKind::second_order: op = build_second_order(n, h); break;
        }
        std::vector<double> u(n), v(n), scratch;
        for (int i = 0; i < n; ++i) u[i] = f(grid_node(i, h));
        op.apply_line(u.data(), v.data(), 1, scratch);
        double err = 0.0;
        for (int i = 1; i < n - 1; ++i) err = std::max(err, std::abs(v[i] + f_second(grid_node(i, h))));
        out.errors.push_back(err);
    }

    // trim grids outside the asymptotic range: an endpoint is dropped when its
    // adjacent error ratio is off by more than 1.5x from the interior trend
    int lo = 0, hi = static_cast<int>(h_list.size()) - 1;
    auto fit = [&](int a, int b) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = b - a + 1;
        for (int i = a; i <= b; ++i) {
            double x = std::log(out.h_values[i]), y = std::log(out.errors[i]);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        return (m * sxy - sx * sy) / (m * sxx - sx * sx);
    };
    auto trim_pass = [&]() {
        if (hi - lo < 3) return false;
        double inner = fit(lo + 1, hi - 1);
        bool changed = false;
        double predicted = out.errors[lo + 1] * std::pow(out.h_values[lo] / out.h_values[lo + 1], inner);
        if (out.errors[lo] > 1.5 * predicted || out.errors[lo] < predicted / 1.5) {
            ++lo;
            changed = true;
        }
        if (hi - lo < 3) return changed;
        predicted = out.errors[hi - 1] * std::pow(out.h_values[hi] / out.h_values[hi - 1], inner);
        if (out.errors[hi] > 1.5 * predicted || out.errors[hi] < predicted / 1.5) {
            --hi;
            changed = true;
        }
        return changed;
    };
    while (trim_pass()) {
    }
    out.first_used = lo;
    out.last_used = hi;
    out.slope = fit(lo, hi);
    return out;
}

}  // namespace pfrss

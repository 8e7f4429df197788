#include "schemes.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>

#include "dense.hpp"

namespace pfrss {

const char* to_string(SchemeId id) {
    switch (id) {
        case SchemeId::heat_rss_euler: return "rss_euler";
        case SchemeId::heat_rss_cn: return "rss_cn";
        case SchemeId::heat_rss_gear: return "rss_gear";
        case SchemeId::heat_rss_adi: return "rss_adi";
        case SchemeId::heat_rss_strang: return "rss_strang";
        case SchemeId::ac_imex: return "imex";
        case SchemeId::ac_rss_imex: return "rss_imex";
        case SchemeId::ac_df: return "df";
        case SchemeId::ac_convex_split: return "convex_split";
        case SchemeId::ac_splitting: return "splitting";
        case SchemeId::ac_segmentation: return "segmentation";
        case SchemeId::ch_rss_imex: return "rss_imex";
        case SchemeId::ch_nlrss: return "nlrss";
        case SchemeId::ch_inpainting: return "inpainting";
        case SchemeId::ch_rss_sav: return "sav";
    }
    return "?";
}

SchemeId scheme_id_from_string(const std::string& s) {
    if (s == "rss_euler") return SchemeId::heat_rss_euler;
    if (s == "rss_cn") return SchemeId::heat_rss_cn;
    if (s == "rss_gear") return SchemeId::heat_rss_gear;
    if (s == "rss_adi") return SchemeId::heat_rss_adi;
    if (s == "rss_strang") return SchemeId::heat_rss_strang;
    if (s == "imex") return SchemeId::ac_imex;
    if (s == "rss_imex") return SchemeId::ac_rss_imex;
    if (s == "df") return SchemeId::ac_df;
    if (s == "convex_split") return SchemeId::ac_convex_split;
    if (s == "splitting") return SchemeId::ac_splitting;
    if (s == "segmentation") return SchemeId::ac_segmentation;
    if (s == "nlrss") return SchemeId::ch_nlrss;
    if (s == "inpainting") return SchemeId::ch_inpainting;
    if (s == "sav") return SchemeId::ch_rss_sav;
    fail(ErrorCode::invalid_argument, "unknown scheme: " + s);
}

void SchemeConfig::validate() const {
    if (dt <= 0.0) fail(ErrorCode::invalid_argument, "SchemeConfig: dt must be positive");
    if (tau < 0.0) fail(ErrorCode::invalid_argument, "SchemeConfig: tau must be >= 0");
    if (epsilon <= 0.0) fail(ErrorCode::invalid_argument, "SchemeConfig: epsilon must be positive");
    if (fixed_point_tol <= 0.0) fail(ErrorCode::invalid_argument, "SchemeConfig: fixed_point_tol must be positive");
    if (max_fixed_point_iters < 1) fail(ErrorCode::invalid_argument, "SchemeConfig: need at least one fixed-point iteration");
    if (lambda0 < 0.0 || lambda < 0.0) fail(ErrorCode::invalid_argument, "SchemeConfig: weights must be >= 0");
}

namespace {

// rhs = -dt (A u - f)
GridField heat_rhs(const GridField& u, const TensorOperator& A, double dt, const GridField* forcing) {
    GridField rhs = A.apply(u);
    if (forcing) {
        require_same_grid(u, *forcing, "heat forcing");
        for (std::size_t i = 0; i < rhs.values.size(); ++i)
            rhs.values[i] = -dt * (rhs.values[i] - forcing->values[i]);
    } else {
        for (double& v : rhs.values) v *= -dt;
    }
    return rhs;
}

GridField shifted_solve_maybe_identity(const TensorOperator& B, double gamma, const GridField& rhs) {
    if (gamma == 0.0) return rhs;  // tau = 0 recovers the explicit scheme
    return solve_shifted(B, gamma, rhs);
}

void add_scaled(GridField& u, const GridField& d, double c = 1.0) {
    for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] += c * d.values[i];
}

void check_finite(const GridField& u, const char* where) {
    if (!all_finite(u)) fail(ErrorCode::numerical, std::string(where) + ": non-finite values produced");
}

}  // namespace

GridField heat_rss_euler_step(const GridField& u, const TensorOperator& A, const TensorOperator& B,
                              const SchemeConfig& cfg, const GridField* forcing) {
    cfg.validate();
    GridField delta = shifted_solve_maybe_identity(B, cfg.tau * cfg.dt, heat_rhs(u, A, cfg.dt, forcing));
    if (cfg.project_mean) delta = project_mean_zero(delta);
    GridField out = u;
    add_scaled(out, delta);
    check_finite(out, "heat_rss_euler_step");
    return out;
}

GridField heat_rss_cn_step(const GridField& u, const TensorOperator& A, const TensorOperator& B,
                           const SchemeConfig& cfg, const GridField* forcing) {
    cfg.validate();
    GridField delta =
        shifted_solve_maybe_identity(B, 0.5 * cfg.tau * cfg.dt, heat_rhs(u, A, cfg.dt, forcing));
    if (cfg.project_mean) delta = project_mean_zero(delta);
    GridField out = u;
    add_scaled(out, delta);
    check_finite(out, "heat_rss_cn_step");
    return out;
}

GridField heat_rss_gear_step(const GridField& u_prev, const GridField& u, const TensorOperator& A,
                             const TensorOperator& B, const SchemeConfig& cfg,
                             const GridField* forcing) {
    cfg.validate();
    require_same_grid(u_prev, u, "heat_rss_gear_step");
    // (3 delta - (u - u_prev))/(2 dt) + tau B delta + A u = f
    GridField rhs = heat_rhs(u, A, 2.0 * cfg.dt / 3.0, forcing);
    for (std::size_t i = 0; i < rhs.values.size(); ++i)
        rhs.values[i] += (u.values[i] - u_prev.values[i]) / 3.0;
    GridField delta = shifted_solve_maybe_identity(B, 2.0 * cfg.tau * cfg.dt / 3.0, rhs);
    if (cfg.project_mean) delta = project_mean_zero(delta);
    GridField out = u;
    add_scaled(out, delta);
    check_finite(out, "heat_rss_gear_step");
    return out;
}

namespace {

// one ADI sweep over `axis` with step size dt_axis
void adi_sweep(GridField& u, const TensorOperator& A, const TensorOperator& B, int axis,
               double dt_axis, const SchemeConfig& cfg) {
    GridField rhs = A.apply_axis(axis, u);
    for (double& v : rhs.values) v *= -dt_axis;
    GridField delta = cfg.tau == 0.0
                          ? rhs
                          : B.require_solver("heat_rss_adi_step")
                                .solve_shifted_axis(cfg.tau * dt_axis, axis, rhs);
    if (cfg.project_mean) delta = project_mean_zero(delta);
    add_scaled(u, delta);
}

}  // namespace

GridField heat_rss_adi_step(const GridField& u, const TensorOperator& A, const TensorOperator& B,
                            const SchemeConfig& cfg) {
    cfg.validate();
    GridField out = u;
    for (int axis = 0; axis < A.dim(); ++axis) adi_sweep(out, A, B, axis, cfg.dt, cfg);
    check_finite(out, "heat_rss_adi_step");
    return out;
}

GridField heat_rss_strang_step(const GridField& u, const TensorOperator& A, const TensorOperator& B,
                               const SchemeConfig& cfg) {
    cfg.validate();
    GridField out = u;
    const int d = A.dim();
    if (d == 1) {
        adi_sweep(out, A, B, 0, cfg.dt, cfg);
    } else {
        // symmetric composition: half sweeps on the leading axes around a
        // full sweep on the last axis
        for (int axis = 0; axis < d - 1; ++axis) adi_sweep(out, A, B, axis, 0.5 * cfg.dt, cfg);
        adi_sweep(out, A, B, d - 1, cfg.dt, cfg);
        for (int axis = d - 2; axis >= 0; --axis) adi_sweep(out, A, B, axis, 0.5 * cfg.dt, cfg);
    }
    check_finite(out, "heat_rss_strang_step");
    return out;
}

GridField ac_imex_step(const GridField& u, const TensorOperator& A, const SchemeConfig& cfg) {
    cfg.validate();
    const std::size_t m = u.size();
    if (m > 4096) fail(ErrorCode::size, "ac_imex_step: dense reference capped at 4096 unknowns");
    Eigen::MatrixXd sys = dense_tensor_matrix(A);
    sys *= cfg.dt;
    sys += Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd rhs(m);
    const double ie2 = 1.0 / (cfg.epsilon * cfg.epsilon);
    for (std::size_t i = 0; i < m; ++i)
        rhs(i) = u.values[i] - cfg.dt * ie2 * well_prime(u.values[i]);
    Eigen::VectorXd x = sys.partialPivLu().solve(rhs);
    GridField out = u;
    for (std::size_t i = 0; i < m; ++i) out.values[i] = x(i);
    check_finite(out, "ac_imex_step");
    return out;
}

GridField ac_rss_imex_step(const GridField& u, const TensorOperator& A, const TensorOperator& B,
                           const SchemeConfig& cfg) {
    cfg.validate();
    const double ie2 = 1.0 / (cfg.epsilon * cfg.epsilon);
    GridField rhs = A.apply(u);
    for (std::size_t i = 0; i < rhs.values.size(); ++i)
        rhs.values[i] = -cfg.dt * (rhs.values[i] + ie2 * well_prime(u.values[i]));
    GridField delta = shifted_solve_maybe_identity(B, cfg.tau * cfg.dt, rhs);
    GridField out = u;
    add_scaled(out, delta);
    check_finite(out, "ac_rss_imex_step");
    return out;
}

namespace {

// shared fixed-point driver for the two nonlinear Allen-Cahn schemes;
// `lagged_rhs` evaluates the right-hand side at the current iterate
template <typename RhsFn>
IterativeResult ac_fixed_point(const GridField& u, const TensorOperator& B, const SchemeConfig& cfg,
                               const char* name, RhsFn lagged_rhs) {
    const double tol = cfg.fixed_point_tol * (1.0 + max_abs(u));
    GridField iterate = u;
    int used = 0;
    double residual = 0.0;
    for (int m = 0; m < cfg.max_fixed_point_iters; ++m) {
        GridField rhs = lagged_rhs(iterate);
        GridField delta = shifted_solve_maybe_identity(B, cfg.tau * cfg.dt, rhs);
        GridField next = u;
        add_scaled(next, delta);
        residual = 0.0;
        for (std::size_t i = 0; i < next.values.size(); ++i)
            residual = std::max(residual, std::abs(next.values[i] - iterate.values[i]));
        iterate = std::move(next);
        used = m + 1;
        if (residual <= tol) {
            check_finite(iterate, name);
            return {std::move(iterate), used};
        }
    }
    fail(ErrorCode::numerical, std::string(name) + ": fixed point did not converge in " +
                                   std::to_string(used) + " iterations, residual " +
                                   std::to_string(residual));
}

}  // namespace

IterativeResult ac_df_step(const GridField& u, const TensorOperator& A, const TensorOperator& B,
                           const SchemeConfig& cfg) {
    cfg.validate();
    const double ie2 = 1.0 / (cfg.epsilon * cfg.epsilon);
    GridField au = A.apply(u);
    DoubleWell well = cfg.well();
    return ac_fixed_point(u, B, cfg, "ac_df_step", [&](const GridField& iterate) {
        GridField slope = df_secant(iterate, u, well);
        GridField rhs = au;
        for (std::size_t i = 0; i < rhs.values.size(); ++i)
            rhs.values[i] = -cfg.dt * (rhs.values[i] + ie2 * slope.values[i]);
        return rhs;
    });
}

IterativeResult ac_convex_split_step(const GridField& u, const TensorOperator& A,
                                     const TensorOperator& B, const SchemeConfig& cfg) {
    cfg.validate();
    const double ie2 = 1.0 / (cfg.epsilon * cfg.epsilon);
    GridField au = A.apply(u);
    return ac_fixed_point(u, B, cfg, "ac_convex_split_step", [&](const GridField& iterate) {
        GridField rhs = au;
        for (std::size_t i = 0; i < rhs.values.size(); ++i) {
            double cube = iterate.values[i] * iterate.values[i] * iterate.values[i];
            rhs.values[i] = cfg.dt * (-rhs.values[i] + ie2 * (u.values[i] - cube));
        }
        return rhs;
    });
}

double double_well_closed_form(double x, double g) {
    return x / std::sqrt(g + x * x * (1.0 - g));
}

GridField ac_splitting_step(const GridField& u, const TensorOperator& A, const TensorOperator& B,
                            const SchemeConfig& cfg) {
    cfg.validate();
    GridField rhs = A.apply(u);
    for (double& v : rhs.values) v *= -cfg.dt;
    GridField delta = shifted_solve_maybe_identity(B, cfg.tau * cfg.dt, rhs);
    if (cfg.project_mean) delta = project_mean_zero(delta);
    GridField out = u;
    add_scaled(out, delta);
    const double g = std::exp(-2.0 * cfg.dt / (cfg.epsilon * cfg.epsilon));
    for (double& v : out.values) v = double_well_closed_form(v, g);
    check_finite(out, "ac_splitting_step");
    return out;
}

SegmentationResult ac_segmentation_step(const GridField& phi, const TensorOperator& A,
                                        const TensorOperator& B, const SegmentationProblem& prob,
                                        const SchemeConfig& cfg) {
    cfg.validate();
    auto [c1, c2] = segmentation_averages(phi, prob);
    // pointwise implicit fidelity solve
    GridField mid = phi;
    for (std::size_t i = 0; i < phi.values.size(); ++i) {
        double q1 = prob.f0.values[i] - c1;
        double q2 = prob.f0.values[i] - c2;
        q1 *= q1;
        q2 *= q2;
        mid.values[i] = (phi.values[i] - cfg.dt * cfg.lambda * (q1 - q2)) /
                        (1.0 + cfg.dt * cfg.lambda * (q1 + q2));
    }
    GridField rhs = A.apply(mid);
    for (double& v : rhs.values) v *= -cfg.dt;
    GridField delta = shifted_solve_maybe_identity(B, cfg.tau * cfg.dt, rhs);
    if (cfg.project_mean) delta = project_mean_zero(delta);
    GridField out = mid;
    add_scaled(out, delta);
    const double g = std::exp(-2.0 * cfg.dt / (cfg.epsilon * cfg.epsilon));
    for (double& v : out.values) v = double_well_closed_form(v, g);
    check_finite(out, "ac_segmentation_step");
    return {std::move(out), c1, c2};
}

GridField ch_initial_mu(const GridField& u, const TensorOperator& A, const SchemeConfig& cfg) {
    GridField mu = A.apply(u);
    for (std::size_t i = 0; i < mu.values.size(); ++i)
        mu.values[i] = cfg.epsilon * mu.values[i] + well_prime(u.values[i]) / cfg.epsilon;
    return mu;
}

namespace {

struct CHRhs {
    GridField f1;  // -dt A mu
    GridField f2;  // -mu + eps A u + nonlinear/eps
};

CHRhs ch_rhs(const CHState& s, const TensorOperator& A, const SchemeConfig& cfg,
             const GridField& nonlinear) {
    CHRhs r{A.apply(s.mu), A.apply(s.u)};
    for (std::size_t i = 0; i < r.f1.values.size(); ++i) {
        r.f1.values[i] *= -cfg.dt;
        r.f2.values[i] = -s.mu.values[i] + cfg.epsilon * r.f2.values[i] +
                         nonlinear.values[i] / cfg.epsilon;
    }
    return r;
}

// shared tail of the pattern-dynamics steps: solve the Schur system for
// delta-mu, back-substitute delta-u, optionally project it
CHState ch_block_solve(const CHState& s, const TensorOperator& B, const SchemeConfig& cfg,
                       const CHRhs& r) {
    GridField schur_rhs = B.apply(r.f1);
    for (std::size_t i = 0; i < schur_rhs.values.size(); ++i)
        schur_rhs.values[i] = r.f2.values[i] + cfg.tau * cfg.epsilon * schur_rhs.values[i];
    GridField dmu = solve_shifted_squared(B, cfg.tau * cfg.tau * cfg.dt * cfg.epsilon, schur_rhs);
    GridField du = B.apply(dmu);
    for (std::size_t i = 0; i < du.values.size(); ++i)
        du.values[i] = r.f1.values[i] - cfg.tau * cfg.dt * du.values[i];
    if (cfg.project_mean) du = project_mean_zero(du);
    CHState out = s;
    add_scaled(out.u, du);
    add_scaled(out.mu, dmu);
    return out;
}

}  // namespace

CHState ch_rss_imex_step(const CHState& state, const TensorOperator& A, const TensorOperator& B,
                         const SchemeConfig& cfg) {
    cfg.validate();
    require_same_grid(state.u, state.mu, "ch_rss_imex_step");
    GridField nl = state.u;
    for (double& v : nl.values) v = well_prime(v);
    CHState out = ch_block_solve(state, B, cfg, ch_rhs(state, A, cfg, nl));
    check_finite(out.u, "ch_rss_imex_step");
    check_finite(out.mu, "ch_rss_imex_step");
    return out;
}

CHStepResult ch_nlrss_step(const CHState& state, const TensorOperator& A, const TensorOperator& B,
                           const SchemeConfig& cfg) {
    cfg.validate();
    require_same_grid(state.u, state.mu, "ch_nlrss_step");
    DoubleWell well = cfg.well();
    const double tol = cfg.fixed_point_tol * (1.0 + max_abs(state.u));
    CHState iterate = state;
    double residual = 0.0;
    for (int m = 0; m < cfg.max_fixed_point_iters; ++m) {
        GridField slope = df_secant(iterate.u, state.u, well);
        CHState next = ch_block_solve(state, B, cfg, ch_rhs(state, A, cfg, slope));
        residual = 0.0;
        for (std::size_t i = 0; i < next.u.values.size(); ++i)
            residual = std::max(residual, std::abs(next.u.values[i] - iterate.u.values[i]));
        iterate = std::move(next);
        if (residual <= tol) {
            check_finite(iterate.u, "ch_nlrss_step");
            return {std::move(iterate), m + 1};
        }
    }
    fail(ErrorCode::numerical,
         "ch_nlrss_step: inner fixed point did not converge, residual " + std::to_string(residual));
}

// ---- inpainting ------------------------------------------------------------

struct InpaintingWorkspace::Impl {
    Eigen::SparseMatrix<double> matrix;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    int n = 0, dim = 0;
    double dt = 0, tau = 0, epsilon = 0, lambda0 = 0;
    std::vector<double> mask;
};

namespace {

Eigen::SparseMatrix<double> sparse_tensor_matrix(const TensorOperator& op) {
    const int n = op.n();
    const int dim = op.dim();
    std::size_t m = 1;
    for (int d = 0; d < dim; ++d) m *= static_cast<std::size_t>(n);
    std::vector<Eigen::Triplet<double>> trip;
    for (int axis = 0; axis < dim; ++axis) {
        const Banded& q = op.axis_operator(axis).q_bands;
        std::size_t stride = 1;
        for (int d = 0; d < axis; ++d) stride *= static_cast<std::size_t>(n);
        std::size_t block = stride * static_cast<std::size_t>(n);
        for (std::size_t base = 0; base < m; base += block)
            for (std::size_t off = 0; off < stride; ++off)
                for (int i = 0; i < n; ++i)
                    for (int j = std::max(0, i - q.bandwidth()); j <= std::min(n - 1, i + q.bandwidth()); ++j) {
                        double v = q.at(i, j);
                        if (v != 0.0)
                            trip.emplace_back(static_cast<int>(base + off + i * stride),
                                              static_cast<int>(base + off + j * stride), v);
                    }
    }
    Eigen::SparseMatrix<double> out(m, m);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

}  // namespace

InpaintingWorkspace::InpaintingWorkspace(const TensorOperator& B, const InpaintingProblem& prob,
                                         const SchemeConfig& cfg)
    : impl_(new Impl) {
    if (B.kind() != OperatorKind::second_order)
        fail(ErrorCode::invalid_argument, "InpaintingWorkspace: stabilizer must be second_order");
    for (double v : prob.mask.values)
        if (v != 0.0 && v != 1.0)
            fail(ErrorCode::invalid_argument, "InpaintingWorkspace: mask must be an indicator field");
    impl_->n = B.n();
    impl_->dim = B.dim();
    impl_->dt = cfg.dt;
    impl_->tau = cfg.tau;
    impl_->epsilon = cfg.epsilon;
    impl_->lambda0 = cfg.lambda0;
    impl_->mask = prob.mask.values;
    Eigen::SparseMatrix<double> bs = sparse_tensor_matrix(B);
    Eigen::SparseMatrix<double> sys =
        Eigen::SparseMatrix<double>(bs * bs) * (cfg.tau * cfg.tau * cfg.dt * cfg.epsilon);
    const std::size_t m = prob.mask.values.size();
    std::vector<Eigen::Triplet<double>> diag;
    diag.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        diag.emplace_back(static_cast<int>(i), static_cast<int>(i),
                          1.0 + cfg.dt * cfg.lambda0 * prob.mask.values[i]);
    Eigen::SparseMatrix<double> id(m, m);
    id.setFromTriplets(diag.begin(), diag.end());
    sys += id;
    impl_->matrix = sys;
    impl_->lu.compute(impl_->matrix);
    if (impl_->lu.info() != Eigen::Success)
        fail(ErrorCode::numerical, "InpaintingWorkspace: factorization failed");
}

InpaintingWorkspace::~InpaintingWorkspace() = default;
InpaintingWorkspace::InpaintingWorkspace(InpaintingWorkspace&&) noexcept = default;
InpaintingWorkspace& InpaintingWorkspace::operator=(InpaintingWorkspace&&) noexcept = default;

bool InpaintingWorkspace::matches(const InpaintingProblem& prob, const SchemeConfig& cfg) const {
    return impl_->dt == cfg.dt && impl_->tau == cfg.tau && impl_->epsilon == cfg.epsilon &&
           impl_->lambda0 == cfg.lambda0 && impl_->mask == prob.mask.values;
}

GridField InpaintingWorkspace::solve(const GridField& rhs) const {
    Eigen::Map<const Eigen::VectorXd> b(rhs.values.data(), rhs.values.size());
    Eigen::VectorXd x = impl_->lu.solve(b);
    GridField out = rhs;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = x(i);
    return out;
}

CHState ch_inpainting_step(const CHState& state, const TensorOperator& A, const TensorOperator& B,
                           const InpaintingProblem& prob, const SchemeConfig& cfg,
                           const InpaintingWorkspace* workspace) {
    cfg.validate();
    require_same_grid(state.u, prob.g, "ch_inpainting_step");
    require_same_grid(state.u, prob.mask, "ch_inpainting_step");
    std::optional<InpaintingWorkspace> local;
    if (workspace) {
        if (!workspace->matches(prob, cfg))
            fail(ErrorCode::invalid_argument, "ch_inpainting_step: workspace built for other parameters");
    } else {
        local.emplace(B, prob, cfg);
        workspace = &*local;
    }

    // F1 = dt (lambda0 D (g - u) - A mu), F2 = -mu + eps A u + f(u)/eps
    GridField f1 = A.apply(state.mu);
    GridField f2 = A.apply(state.u);
    for (std::size_t i = 0; i < f1.values.size(); ++i) {
        f1.values[i] = cfg.dt * (cfg.lambda0 * prob.mask.values[i] *
                                     (prob.g.values[i] - state.u.values[i]) -
                                 f1.values[i]);
        f2.values[i] = -state.mu.values[i] + cfg.epsilon * f2.values[i] +
                       well_prime(state.u.values[i]) / cfg.epsilon;
    }
    GridField rhs = B.apply(f2);
    for (std::size_t i = 0; i < rhs.values.size(); ++i)
        rhs.values[i] = f1.values[i] - cfg.tau * cfg.dt * rhs.values[i];
    GridField du = workspace->solve(rhs);
    GridField dmu = B.apply(du);
    for (std::size_t i = 0; i < dmu.values.size(); ++i)
        dmu.values[i] = f2.values[i] + cfg.epsilon * cfg.tau * dmu.values[i];
    CHState out = state;
    add_scaled(out.u, du);
    add_scaled(out.mu, dmu);
    check_finite(out.u, "ch_inpainting_step");
    return out;
}

// ---- auxiliary-variable scheme ----------------------------------------------

SAVState sav_initial_state(const GridField& u, const TensorOperator& A, const SchemeConfig& cfg) {
    SAVState s;
    s.u = u;
    s.s = sav_auxiliary(u, cfg.well(), cfg.C0);
    s.mu = A.apply(u);
    for (std::size_t i = 0; i < s.mu.values.size(); ++i) s.mu.values[i] += well_prime(u.values[i]);
    return s;
}

double sav_energy(const SAVState& state, const TensorOperator& A) {
    double hd = std::pow(state.u.h, state.u.dim);
    GridField au = A.apply(state.u);
    return 0.5 * hd * dot(au, state.u) + state.s * state.s;
}

SAVState ch_rss_sav_step(const SAVState& state, const TensorOperator& A, const TensorOperator& B,
                         const SchemeConfig& cfg) {
    cfg.validate();
    require_same_grid(state.u, state.mu, "ch_rss_sav_step");
    const double hd = std::pow(state.u.h, state.u.dim);
    const double r = sav_auxiliary(state.u, cfg.well(), cfg.C0);
    GridField b = state.u, c = state.u;
    for (std::size_t i = 0; i < b.values.size(); ++i) {
        double f = well_prime(state.u.values[i]);
        b.values[i] = f / (2.0 * r);
        c.values[i] = f / r;
    }
    GridField f1 = A.apply(state.mu);
    for (double& v : f1.values) v *= -cfg.dt;
    GridField g = A.apply(state.u);
    for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] -= state.mu.values[i];

    // eliminate s+ into the mu update; rank-one correction of the Schur system
    GridField rhs = B.apply(f1);
    const double s_plus_f1 = state.s + hd * dot(b, f1);
    for (std::size_t i = 0; i < rhs.values.size(); ++i)
        rhs.values[i] = cfg.tau * rhs.values[i] + g.values[i] + s_plus_f1 * c.values[i];
    const double gamma = cfg.tau * cfg.tau * cfg.dt;
    GridField y1 = solve_shifted_squared(B, gamma, rhs);
    GridField y2 = solve_shifted_squared(B, gamma, c);
    GridField w = B.apply_transpose(b);
    const double denom = 1.0 + cfg.tau * cfg.dt * hd * dot(w, y2);
    const double corr = cfg.tau * cfg.dt * hd * dot(w, y1) / denom;
    GridField dmu0 = y1;
    add_scaled(dmu0, y2, -corr);

    GridField du = B.apply(dmu0);
    for (std::size_t i = 0; i < du.values.size(); ++i)
        du.values[i] = f1.values[i] - cfg.tau * cfg.dt * du.values[i];
    if (cfg.project_mean) du = project_mean_zero(du);
    const double s_next = state.s + hd * dot(b, du);

    // recompute the mu increment from the update equation so the pair
    // (du, s_next) satisfies it exactly even after the projection
    GridField dmu = B.apply(du);
    for (std::size_t i = 0; i < dmu.values.size(); ++i)
        dmu.values[i] = cfg.tau * dmu.values[i] + g.values[i] + s_next * c.values[i];

    SAVState out = state;
    add_scaled(out.u, du);
    add_scaled(out.mu, dmu);
    out.s = s_next;
    check_finite(out.u, "ch_rss_sav_step");
    return out;
}

}  // namespace pfrss

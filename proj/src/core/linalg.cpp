#include "linalg.hpp"

#include <Eigen/Dense>

#include <tuple>

#include "dense.hpp"

namespace pfrss {

GridField solve_shifted(const TensorOperator& B, double gamma, const GridField& f) {
    return B.require_solver("solve_shifted").solve_shifted(gamma, f);
}

GridField solve_shifted_squared(const TensorOperator& B, double gamma, const GridField& f) {
    return B.require_solver("solve_shifted_squared").solve_shifted_squared(gamma, f);
}

GridField project_mean_zero(const GridField& delta) {
    GridField out = delta;
    double m = mean(delta);
    for (double& v : out.values) v -= m;
    return out;
}

GridField solve_constrained_lagrangian(const TensorOperator& B, double gamma, const GridField& f) {
    const CosineSolver& solver = B.require_solver("solve_constrained_lagrangian");
    const double m = static_cast<double>(f.size());
    GridField ones_over_m(f.n, f.dim, f.h);
    for (double& v : ones_over_m.values) v = 1.0 / m;
    GridField g = solver.solve_shifted(gamma, ones_over_m);
    GridField mf = solver.solve_shifted(gamma, f);
    // multiplier chosen so <1, delta> = 0 holds exactly; for symmetric M this
    // is the same value as <g,f> / <(1/m)1, g>
    double sum_mf = 0.0, sum_g = 0.0;
    for (std::size_t i = 0; i < mf.values.size(); ++i) {
        sum_mf += mf.values[i];
        sum_g += g.values[i];
    }
    double lambda = sum_mf / sum_g;
    GridField delta = mf;
    for (std::size_t i = 0; i < delta.values.size(); ++i) delta.values[i] -= lambda * g.values[i];
    return delta;
}

namespace {

// orthonormal basis of the complement of the constant vector (Householder)
Eigen::MatrixXd mean_zero_basis(std::size_t m) {
    Eigen::VectorXd v = Eigen::VectorXd::Constant(m, 1.0 / std::sqrt(double(m)));
    Eigen::VectorXd w = v;
    w(0) -= 1.0;  // reflector taking e0 to v
    double wn = w.squaredNorm();
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(m, m);
    if (wn > 0) h -= (2.0 / wn) * (w * w.transpose());
    return h.rightCols(m - 1);
}

double smallest_positive(const Eigen::VectorXcd& ev, double rho) {
    double best = rho;
    for (int i = 0; i < ev.size(); ++i) {
        double re = ev(i).real();
        if (re > 1e-8 * rho && re < best) best = re;
    }
    return best;
}

double asymmetry_ratio(const Eigen::MatrixXd& a) {
    double num = (a - a.transpose()).norm();
    double den = (a + a.transpose()).norm();
    return den > 0 ? num / den : 0.0;
}

}  // namespace

namespace {

// pencil constants of a dense pair restricted to the mean-zero subspace
std::pair<double, double> pencil_range(const Eigen::MatrixXd& da, const Eigen::MatrixXd& db) {
    const auto m = da.rows();
    Eigen::MatrixXd v = mean_zero_basis(m);
    Eigen::MatrixXd ad = v.transpose() * da * v;
    Eigen::MatrixXd bd = v.transpose() * db * v;
    Eigen::VectorXcd gev = balanced_eigenvalues(bd.partialPivLu().solve(ad));
    double lo = gev(0).real(), hi = gev(0).real();
    for (int i = 1; i < gev.size(); ++i) {
        lo = std::min(lo, gev(i).real());
        hi = std::max(hi, gev(i).real());
    }
    return {lo, hi};
}

// spectrum of the tensor sum: the axis embeddings commute, so the tensor
// eigenvalues are the d-fold sums of the 1D ones
void tensor_spectrum_stats(const Eigen::VectorXcd& ev1, int dim, double& rho, double& lmin) {
    std::vector<std::complex<double>> sums(ev1.data(), ev1.data() + ev1.size());
    for (int d = 1; d < dim; ++d) {
        std::vector<std::complex<double>> next;
        next.reserve(sums.size() * ev1.size());
        for (const auto& s : sums)
            for (int i = 0; i < ev1.size(); ++i) next.push_back(s + ev1(i));
        sums = std::move(next);
    }
    rho = 0.0;
    for (const auto& s : sums) rho = std::max(rho, std::abs(s));
    lmin = rho;
    for (const auto& s : sums)
        if (s.real() > 1e-8 * rho) lmin = std::min(lmin, s.real());
}

}  // namespace

HypothesisH estimate_hypothesis_h(const TensorOperator& A, const TensorOperator& B) {
    if (A.n() != B.n() || A.dim() != B.dim())
        fail(ErrorCode::invalid_argument, "estimate_hypothesis_h: operators on different grids");
    std::size_t m = 1;
    for (int d = 0; d < A.dim(); ++d) m *= static_cast<std::size_t>(A.n());
    if (m > 4096) fail(ErrorCode::size, "estimate_hypothesis_h: more than 4096 unknowns");

    HypothesisH out;
    if (m <= 512) {
        Eigen::MatrixXd da = dense_tensor_matrix(A);
        Eigen::MatrixXd db = dense_tensor_matrix(B);
        std::tie(out.alpha, out.beta) = pencil_range(da, db);
        Eigen::VectorXcd eva = balanced_eigenvalues(da);
        Eigen::VectorXcd evb = balanced_eigenvalues(db);
        out.rho_A = 0.0;
        double rho_b = 0.0;
        for (int i = 0; i < eva.size(); ++i) out.rho_A = std::max(out.rho_A, std::abs(eva(i)));
        for (int i = 0; i < evb.size(); ++i) rho_b = std::max(rho_b, std::abs(evb(i)));
        out.lambda_min_A = smallest_positive(eva, out.rho_A);
        out.lambda_min_B = smallest_positive(evb, rho_b);
        out.asymmetry_A = asymmetry_ratio(da);
        out.asymmetry_B = asymmetry_ratio(db);
    } else {
        // larger tensor grids: exact spectra via the 1D factors and the
        // equivalence range from the 1D pencil (the tensor sums of both
        // operators keep the per-axis generalized ratios)
        Eigen::MatrixXd a1 = dense_axis_matrix(A.axis_operator(0));
        Eigen::MatrixXd b1 = dense_axis_matrix(B.axis_operator(0));
        std::tie(out.alpha, out.beta) = pencil_range(a1, b1);
        Eigen::VectorXcd eva = balanced_eigenvalues(a1);
        Eigen::VectorXcd evb = balanced_eigenvalues(b1);
        double rho_b = 0.0, lmin_b = 0.0;
        tensor_spectrum_stats(eva, A.dim(), out.rho_A, out.lambda_min_A);
        tensor_spectrum_stats(evb, B.dim(), rho_b, lmin_b);
        out.lambda_min_B = lmin_b;
        out.asymmetry_A = asymmetry_ratio(a1);
        out.asymmetry_B = asymmetry_ratio(b1);
    }
    if (out.alpha <= 0.0 || out.lambda_min_B <= 0.0)
        fail(ErrorCode::numerical, "estimate_hypothesis_h: pencil not positive on the mean-zero subspace");
    return out;
}

}  // namespace pfrss

#include "dense.hpp"

namespace pfrss {

Eigen::MatrixXd dense_axis_matrix(const ImplicitOperator& op) {
    const int n = op.n;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - 4); j <= std::min(n - 1, i + 4); ++j) q(i, j) = op.q_bands.at(i, j);
    if (op.p_bands.is_identity()) return q;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        p(i, i) = op.p_bands.diag(i);
        if (i > 0) p(i, i - 1) = op.p_bands.lower(i);
        if (i + 1 < n) p(i, i + 1) = op.p_bands.upper(i);
    }
    return p.partialPivLu().solve(q);
}

Eigen::MatrixXd dense_tensor_matrix(const TensorOperator& op) {
    const int n = op.n();
    const int dim = op.dim();
    std::size_t m = 1;
    for (int d = 0; d < dim; ++d) m *= static_cast<std::size_t>(n);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
    for (int axis = 0; axis < dim; ++axis) {
        Eigen::MatrixXd a1 = dense_axis_matrix(op.axis_operator(axis));
        std::size_t stride = 1;
        for (int d = 0; d < axis; ++d) stride *= static_cast<std::size_t>(n);
        std::size_t block = stride * static_cast<std::size_t>(n);
        for (std::size_t base = 0; base < m; base += block)
            for (std::size_t off = 0; off < stride; ++off)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        out(base + off + i * stride, base + off + j * stride) += a1(i, j);
    }
    return out;
}

Eigen::VectorXcd balanced_eigenvalues(Eigen::MatrixXd m) {
    // Parlett-Reinsch balancing: diagonal similarity scaling by powers of two
    const int n = static_cast<int>(m.rows());
    const double radix = 2.0;
    bool converged = false;
    while (!converged) {
        converged = true;
        for (int i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(m(j, i));
                r += std::abs(m(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix, f = 1.0, s = c + r;
            while (c < g) {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix * radix;
            }
            if ((c + r) / f < 0.95 * s) {
                converged = false;
                m.col(i) *= f;
                m.row(i) /= f;
            }
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues();
}

}  // namespace pfrss

#include "cosine.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace pfrss {

CosineSolver::CosineSolver(int n, int dim, double h) : n_(n), dim_(dim), h_(h) {
    if (n < 3 || dim < 1 || dim > 3 || h <= 0.0)
        fail(ErrorCode::invalid_argument, "CosineSolver: need n >= 3, dim in 1..3, h > 0");
    const int N = n - 1;
    const double pi = std::numbers::pi;
    lambda_.resize(n);
    for (int k = 0; k < n; ++k) lambda_[k] = (2.0 - 2.0 * std::cos(pi * k / N)) / (h * h);
    lambda_[0] = 0.0;

    synth_.assign(static_cast<std::size_t>(n) * n, 0.0);
    analysis_.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) synth_[static_cast<std::size_t>(i) * n + k] = std::cos(pi * double(k) * double(i) / N);
    // F = D^-1 C^T W with half weights at the end nodes; D_k = N for k in {0,N}, N/2 otherwise
    for (int k = 0; k < n; ++k) {
        double dk = (k == 0 || k == N) ? double(N) : N / 2.0;
        for (int i = 0; i < n; ++i) {
            double w = (i == 0 || i == N) ? 0.5 : 1.0;
            analysis_[static_cast<std::size_t>(k) * n + i] =
                synth_[static_cast<std::size_t>(i) * n + k] * w / dk;
        }
    }
}

void CosineSolver::check_field(const GridField& f) const {
    if (f.n != n_ || f.dim != dim_)
        fail(ErrorCode::invalid_argument, "CosineSolver: field does not match solver grid");
}

void CosineSolver::transform_axis(std::vector<double>& data, const std::vector<double>& m, int axis) const {
    const int n = n_;
    std::size_t stride = 1;
    for (int d = 0; d < axis; ++d) stride *= static_cast<std::size_t>(n);
    std::vector<double> in(n), out(n);
    std::size_t block = stride * static_cast<std::size_t>(n);
    for (std::size_t base = 0; base < data.size(); base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
            double* line = data.data() + base + off;
            for (int i = 0; i < n; ++i) in[i] = line[i * stride];
            for (int k = 0; k < n; ++k) {
                const double* row = m.data() + static_cast<std::size_t>(k) * n;
                double s = 0.0;
                for (int i = 0; i < n; ++i) s += row[i] * in[i];
                out[k] = s;
            }
            for (int i = 0; i < n; ++i) line[i * stride] = out[i];
        }
    }
}

void CosineSolver::scale_by_spectrum(std::vector<double>& data, double gamma, int power) const {
    const int n = n_;
    if (dim_ == 1) {
        for (int k = 0; k < n; ++k) {
            double l = lambda_[k];
            data[k] /= 1.0 + gamma * (power == 1 ? l : l * l);
        }
    } else if (dim_ == 2) {
        std::size_t idx = 0;
        for (int k1 = 0; k1 < n; ++k1)
            for (int k0 = 0; k0 < n; ++k0, ++idx) {
                double l = lambda_[k0] + lambda_[k1];
                data[idx] /= 1.0 + gamma * (power == 1 ? l : l * l);
            }
    } else {
        std::size_t idx = 0;
        for (int k2 = 0; k2 < n; ++k2)
            for (int k1 = 0; k1 < n; ++k1)
                for (int k0 = 0; k0 < n; ++k0, ++idx) {
                    double l = lambda_[k0] + lambda_[k1] + lambda_[k2];
                    data[idx] /= 1.0 + gamma * (power == 1 ? l : l * l);
                }
    }
}

GridField CosineSolver::solve_shifted(double gamma, const GridField& f) const {
    if (gamma < 0.0) fail(ErrorCode::invalid_argument, "solve_shifted: gamma must be >= 0");
    check_field(f);
    GridField x = f;
    for (int a = 0; a < dim_; ++a) transform_axis(x.values, analysis_, a);
    scale_by_spectrum(x.values, gamma, 1);
    for (int a = 0; a < dim_; ++a) transform_axis(x.values, synth_, a);
    return x;
}

GridField CosineSolver::solve_shifted_squared(double gamma, const GridField& f) const {
    if (gamma < 0.0) fail(ErrorCode::invalid_argument, "solve_shifted_squared: gamma must be >= 0");
    check_field(f);
    GridField x = f;
    for (int a = 0; a < dim_; ++a) transform_axis(x.values, analysis_, a);
    scale_by_spectrum(x.values, gamma, 2);
    for (int a = 0; a < dim_; ++a) transform_axis(x.values, synth_, a);
    return x;
}

GridField CosineSolver::solve_shifted_axis(double gamma, int axis, const GridField& f) const {
    if (gamma < 0.0) fail(ErrorCode::invalid_argument, "solve_shifted_axis: gamma must be >= 0");
    if (axis < 0 || axis >= dim_) fail(ErrorCode::invalid_argument, "solve_shifted_axis: bad axis");
    check_field(f);
    GridField x = f;
    transform_axis(x.values, analysis_, axis);
    // divide along the transformed axis only
    const int n = n_;
    std::size_t stride = 1;
    for (int d = 0; d < axis; ++d) stride *= static_cast<std::size_t>(n);
    std::size_t block = stride * static_cast<std::size_t>(n);
    for (std::size_t base = 0; base < x.values.size(); base += block)
        for (std::size_t off = 0; off < stride; ++off)
            for (int k = 0; k < n; ++k)
                x.values[base + off + k * stride] /= 1.0 + gamma * lambda_[k];
    transform_axis(x.values, synth_, axis);
    return x;
}

GridField CosineSolver::to_coefficients(const GridField& f) const {
    check_field(f);
    GridField c = f;
    for (int a = 0; a < dim_; ++a) transform_axis(c.values, analysis_, a);
    return c;
}

GridField CosineSolver::from_coefficients(const GridField& c) const {
    check_field(c);
    GridField f = c;
    for (int a = 0; a < dim_; ++a) transform_axis(f.values, synth_, a);
    return f;
}

}  // namespace pfrss

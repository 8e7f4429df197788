#include "operators.hpp"

#include <string>

namespace pfrss {

const char* to_string(OperatorKind k) {
    switch (k) {
        case OperatorKind::lele4: return "lele4";
        case OperatorKind::cs2: return "cs2";
        case OperatorKind::second_order: return "second_order";
    }
    return "?";
}

OperatorKind operator_kind_from_string(const std::string& s) {
    if (s == "lele4" || s == "lele") return OperatorKind::lele4;
    if (s == "cs2") return OperatorKind::cs2;
    if (s == "second_order" || s == "second") return OperatorKind::second_order;
    fail(ErrorCode::invalid_argument, "unknown operator kind: " + s);
}

void ImplicitOperator::apply_line(const double* u, double* v, std::size_t stride,
                                  std::vector<double>& scratch) const {
    scratch.resize(n);
    for (int i = 0; i < n; ++i) scratch[i] = u[i * stride];
    std::vector<double> qu(n);
    q_bands.apply(scratch.data(), qu.data());
    p_bands.solve(qu.data());
    for (int i = 0; i < n; ++i) v[i * stride] = qu[i];
}

namespace {

void fill_compact_interior(Tridiagonal& p, Banded& q, int n, double ih2) {
    for (int i = 1; i < n - 1; ++i) {
        p.set_row(i, 0.1, 1.0, 0.1);
        q.set(i, i - 1, -1.2 * ih2);
        q.set(i, i, 2.4 * ih2);
        q.set(i, i + 1, -1.2 * ih2);
    }
}

}  // namespace

ImplicitOperator build_lele(int n, double h) {
    if (n < 8) fail(ErrorCode::size, "build_lele: need n >= 8 for the 5-point closure");
    if (h <= 0.0) fail(ErrorCode::invalid_argument, "build_lele: h must be positive");
    ImplicitOperator op;
    op.n = n;
    op.h = h;
    op.kind = OperatorKind::lele4;
    op.p_bands = Tridiagonal(n);
    op.q_bands = Banded(n, 4);
    const double ih2 = 1.0 / (h * h);
    fill_compact_interior(op.p_bands, op.q_bands, n, ih2);
    op.p_bands.set_row(0, 0.0, 1.0, 0.1);
    op.p_bands.set_row(n - 1, 0.1, 1.0, 0.0);
    // fourth-order one-sided closure with u'(0) = 0 at the boundary node;
    // the coefficients sum to zero as exact rationals
    const double a[5] = {2681.0 / 480.0, -23.0 / 3.0, 113.0 / 40.0, -13.0 / 15.0, 59.0 / 480.0};
    for (int j = 0; j < 5; ++j) {
        op.q_bands.set(0, j, a[j] * ih2);
        op.q_bands.set(n - 1, n - 1 - j, a[j] * ih2);
    }
    op.p_bands.factor();
    return op;
}

ImplicitOperator build_cs2(int n, double h) {
    if (n < 6) fail(ErrorCode::size, "build_cs2: need n >= 6");
    if (h <= 0.0) fail(ErrorCode::invalid_argument, "build_cs2: h must be positive");
    ImplicitOperator op;
    op.n = n;
    op.h = h;
    op.kind = OperatorKind::cs2;
    op.p_bands = Tridiagonal(n);
    op.q_bands = Banded(n, 4);
    const double ih2 = 1.0 / (h * h);
    fill_compact_interior(op.p_bands, op.q_bands, n, ih2);
    op.p_bands.set_row(0, 0.0, 0.4, 0.2);
    op.p_bands.set_row(n - 1, 0.2, 0.4, 0.0);
    op.q_bands.set(0, 0, 1.2 * ih2);
    op.q_bands.set(0, 1, -1.2 * ih2);
    op.q_bands.set(n - 1, n - 1, 1.2 * ih2);
    op.q_bands.set(n - 1, n - 2, -1.2 * ih2);
    op.p_bands.factor();
    return op;
}

ImplicitOperator build_second_order(int n, double h) {
    if (n < 3) fail(ErrorCode::size, "build_second_order: need n >= 3");
    if (h <= 0.0) fail(ErrorCode::invalid_argument, "build_second_order: h must be positive");
    ImplicitOperator op;
    op.n = n;
    op.h = h;
    op.kind = OperatorKind::second_order;
    op.p_bands = Tridiagonal(n);  // identity
    op.q_bands = Banded(n, 4);
    const double ih2 = 1.0 / (h * h);
    for (int i = 1; i < n - 1; ++i) {
        op.q_bands.set(i, i - 1, -ih2);
        op.q_bands.set(i, i, 2.0 * ih2);
        op.q_bands.set(i, i + 1, -ih2);
    }
    op.q_bands.set(0, 0, 2.0 * ih2);
    op.q_bands.set(0, 1, -2.0 * ih2);
    op.q_bands.set(n - 1, n - 1, 2.0 * ih2);
    op.q_bands.set(n - 1, n - 2, -2.0 * ih2);
    op.p_bands.factor();
    return op;
}

TensorOperator::TensorOperator(OperatorKind kind, int dim, int n, double h)
    : kind_(kind), dim_(dim), n_(n), h_(h) {
    if (dim < 1 || dim > 3) fail(ErrorCode::invalid_argument, "TensorOperator: dim must be 1..3");
    auto build = [&]() {
        switch (kind) {
            case OperatorKind::lele4: return build_lele(n, h);
            case OperatorKind::cs2: return build_cs2(n, h);
            case OperatorKind::second_order: return build_second_order(n, h);
        }
        fail(ErrorCode::invalid_argument, "TensorOperator: bad kind");
    };
    for (int d = 0; d < dim; ++d) axes_.push_back(build());
    if (kind == OperatorKind::second_order)
        solver_ = std::make_shared<CosineSolver>(n, dim, h);
}

void TensorOperator::check_field(const GridField& u, const char* where) const {
    if (u.n != n_ || u.dim != dim_)
        fail(ErrorCode::invalid_argument, std::string(where) + ": field/operator dimension mismatch");
}

const CosineSolver& TensorOperator::require_solver(const char* where) const {
    if (!solver_)
        fail(ErrorCode::invalid_argument,
             std::string(where) + ": fast solves need a second_order operator");
    return *solver_;
}

GridField TensorOperator::apply_axis(int axis, const GridField& u) const {
    check_field(u, "TensorOperator::apply_axis");
    if (axis < 0 || axis >= dim_) fail(ErrorCode::invalid_argument, "apply_axis: bad axis");
    GridField out(n_, dim_, h_);
    const ImplicitOperator& op = axes_[axis];
    std::size_t stride = 1;
    for (int d = 0; d < axis; ++d) stride *= static_cast<std::size_t>(n_);
    std::size_t block = stride * static_cast<std::size_t>(n_);
    std::vector<double> scratch;
    for (std::size_t base = 0; base < u.values.size(); base += block)
        for (std::size_t off = 0; off < stride; ++off)
            op.apply_line(u.values.data() + base + off, out.values.data() + base + off, stride, scratch);
    return out;
}

GridField TensorOperator::apply(const GridField& u) const {
    check_field(u, "TensorOperator::apply");
    GridField out = apply_axis(0, u);
    for (int a = 1; a < dim_; ++a) {
        GridField part = apply_axis(a, u);
        for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += part.values[i];
    }
    return out;
}

GridField TensorOperator::apply_transpose(const GridField& u) const {
    check_field(u, "TensorOperator::apply_transpose");
    GridField out(n_, dim_, h_);
    std::vector<double> line(n_), tmp(n_);
    for (int a = 0; a < dim_; ++a) {
        const ImplicitOperator& op = axes_[a];
        std::size_t stride = 1;
        for (int d = 0; d < a; ++d) stride *= static_cast<std::size_t>(n_);
        std::size_t block = stride * static_cast<std::size_t>(n_);
        for (std::size_t base = 0; base < u.values.size(); base += block)
            for (std::size_t off = 0; off < stride; ++off) {
                const double* src = u.values.data() + base + off;
                for (int i = 0; i < n_; ++i) line[i] = src[i * stride];
                // (P^-1 Q)^T = Q^T P^-T
                op.p_bands.solve_transpose(line.data());
                op.q_bands.apply_transpose(line.data(), tmp.data());
                double* dst = out.values.data() + base + off;
                for (int i = 0; i < n_; ++i) dst[i * stride] += tmp[i];
            }
    }
    return out;
}

}  // namespace pfrss

// operators.hpp -- compact-difference and second-order Laplacian operators
// with homogeneous Neumann closures, plus their tensor extension to 2D/3D.
//
// Each 1D operator is a pair (P, Q) of banded matrices; applying it means
// solving P v = Q u line by line. Q carries the sign convention of the
// negative second derivative, so the formal matrix A = P^-1 Q approximates
// -d2/dx2 and enters the heat equation as du/dt + A u = 0.
#pragma once

#include <memory>
#include <vector>

#include "banded.hpp"
#include "cosine.hpp"
#include "grid.hpp"

namespace pfrss {

enum class OperatorKind { lele4, cs2, second_order };

const char* to_string(OperatorKind k);
OperatorKind operator_kind_from_string(const std::string& s);

struct ImplicitOperator {
    Tridiagonal p_bands;
    Banded q_bands;  // units 1/h^2
    int n = 0;
    double h = 0.0;
    OperatorKind kind = OperatorKind::second_order;

    // v = P^-1 (Q u) along a strided line; scratch must hold n doubles
    void apply_line(const double* u, double* v, std::size_t stride, std::vector<double>& scratch) const;
};

// Fourth-order interior stencil with the five-coefficient fourth-order
// boundary closure that uses the homogeneous Neumann condition on the
// boundary nodes. Requires n >= 8.
ImplicitOperator build_lele(int n, double h);

// Fourth-order interior, second-order two-point boundary closure. The
// boundary rows of Q cancel exactly on constants, so Ker(A) = span{1}
// in floating point as well. Requires n >= 6.
ImplicitOperator build_cs2(int n, double h);

// Classical 3-point stencil with the consistent mirror closure
// (2, -2)/h^2 at the boundary nodes; P is the identity. Requires n >= 3.
ImplicitOperator build_second_order(int n, double h);

class TensorOperator {
public:
    TensorOperator() = default;
    TensorOperator(OperatorKind kind, int dim, int n, double h);

    OperatorKind kind() const { return kind_; }
    int dim() const { return dim_; }
    int n() const { return n_; }
    double h() const { return h_; }
    const ImplicitOperator& axis_operator(int axis) const { return axes_[axis]; }

    // sum over axes of the per-axis second-derivative application
    GridField apply(const GridField& u) const;
    // single-axis part (ADI sweeps)
    GridField apply_axis(int axis, const GridField& u) const;
    // A^T u, used by rank-one eliminations
    GridField apply_transpose(const GridField& u) const;

    // present only for kind == second_order
    const CosineSolver* solver() const { return solver_.get(); }
    const CosineSolver& require_solver(const char* where) const;

private:
    void check_field(const GridField& u, const char* where) const;

    OperatorKind kind_ = OperatorKind::second_order;
    int dim_ = 1;
    int n_ = 0;
    double h_ = 0.0;
    std::vector<ImplicitOperator> axes_;
    std::shared_ptr<const CosineSolver> solver_;
};

}  // namespace pfrss

// cosine.hpp -- fast solver for the second-order Neumann operator.
//
// The mirror-closure matrix built by build_second_order is diagonalized by the
// type-I cosine basis c_k(i) = cos(pi k i / (n-1)) with eigenvalues
// lambda_k = (2 - 2 cos(pi k/(n-1))) / h^2. Shifted systems (I + gamma B) and
// (I + gamma B^2) on tensor grids are solved by transforming every axis,
// dividing by the shifted eigenvalue, and transforming back.
#pragma once

#include <vector>

#include "grid.hpp"

namespace pfrss {

class CosineSolver {
public:
    CosineSolver() = default;
    CosineSolver(int n, int dim, double h);

    int n() const { return n_; }
    int dim() const { return dim_; }
    double h() const { return h_; }

    // ascending, first entry exactly zero
    const std::vector<double>& eigenvalues() const { return lambda_; }

    // x with (I + gamma B) x = f, B the tensor sum over all axes
    GridField solve_shifted(double gamma, const GridField& f) const;

    // x with (I + gamma B^2) x = f
    GridField solve_shifted_squared(double gamma, const GridField& f) const;

    // x with (I + gamma B_axis) x = f, a single-axis operator (ADI sweeps)
    GridField solve_shifted_axis(double gamma, int axis, const GridField& f) const;

    // basis change, exposed for round-trip checks
    GridField to_coefficients(const GridField& f) const;
    GridField from_coefficients(const GridField& c) const;

private:
    void check_field(const GridField& f) const;
    // applies the n x n matrix `m` (row-major) to every line along `axis`
    void transform_axis(std::vector<double>& data, const std::vector<double>& m, int axis) const;
    void scale_by_spectrum(std::vector<double>& data, double gamma, int power) const;

    int n_ = 0;
    int dim_ = 0;
    double h_ = 0.0;
    std::vector<double> lambda_;     // n entries
    std::vector<double> synth_;      // C[i][k] = cos(pi k i / N)
    std::vector<double> analysis_;   // F = D^-1 C^T W, so F C = I
};

}  // namespace pfrss

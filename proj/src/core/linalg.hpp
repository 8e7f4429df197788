// linalg.hpp -- shifted solves, mean-zero handling, and the numerical
// estimation of the spectral-equivalence constants used by the stability
// bounds.
#pragma once

#include "grid.hpp"
#include "operators.hpp"

namespace pfrss {

// x with (I + gamma B) x = f via the cosine diagonalization of B
GridField solve_shifted(const TensorOperator& B, double gamma, const GridField& f);

// x with (I + gamma B^2) x = f
GridField solve_shifted_squared(const TensorOperator& B, double gamma, const GridField& f);

// subtracts the plain mean, so the result sums to zero
GridField project_mean_zero(const GridField& delta);

// solves M delta + lambda (1/m) 1 = f, <1, delta> = 0 with M = I + gamma B,
// via g = M^-1 (1/m) 1, lambda = <g,f> / <(1/m)1, g>, delta = M^-1 f - lambda g
GridField solve_constrained_lagrangian(const TensorOperator& B, double gamma, const GridField& f);

struct HypothesisH {
    double alpha = 0.0;         // smallest real generalized eigenvalue of (A, B) on the
    double beta = 0.0;          // mean-zero subspace; beta the largest
    double rho_A = 0.0;         // spectral radius of the formal dense A
    double lambda_min_A = 0.0;  // smallest strictly positive eigenvalue of A
    double lambda_min_B = 0.0;  // same for B
    double asymmetry_A = 0.0;   // ||A - A^T|| / ||A + A^T|| (Frobenius)
    double asymmetry_B = 0.0;
};

// Dense diagnostic; the pencil is restricted to the complement of the
// constant vector before the eigensolves. Capped at 4096 unknowns.
HypothesisH estimate_hypothesis_h(const TensorOperator& A, const TensorOperator& B);

}  // namespace pfrss

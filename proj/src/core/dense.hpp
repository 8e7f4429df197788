// dense.hpp -- dense realizations of the tensor operators for diagnostics.
#pragma once

#include <Eigen/Dense>

#include "operators.hpp"

namespace pfrss {

// dense 1D formal matrix A = P^-1 Q
Eigen::MatrixXd dense_axis_matrix(const ImplicitOperator& op);

// dense tensor matrix, sum of the axis embeddings, size n^dim
Eigen::MatrixXd dense_tensor_matrix(const TensorOperator& op);

// eigenvalues of a general real matrix with Parlett-Reinsch balancing applied
// first; balancing preserves eigenvalues and makes the tiny kernel eigenvalue
// of the compact operators come out at rounding level
Eigen::VectorXcd balanced_eigenvalues(Eigen::MatrixXd m);

}  // namespace pfrss

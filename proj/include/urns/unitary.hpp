#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "urns/isometry.hpp"

namespace urns {

/// Complex d x d matrix; unitaries are the group elements of interest.
using MatrixElement = Eigen::MatrixXcd;

/// Real 2d x 2d matrix of v -> A v on C^d, with C^d stored as [Re v; Im v].
Eigen::MatrixXd realify(const MatrixElement& a);
/// Inverse of realify for matrices in its image.
MatrixElement complexify(const Eigen::MatrixXd& r);

/// Row vector of C^d to its real fiber [Re; Im] and back.
Eigen::VectorXd realify_row(const Eigen::RowVectorXcd& row);
Eigen::RowVectorXcd complexify_row(const Eigen::VectorXd& fiber);

/// m x d operator matrix <-> point of l_inf(Gamma, R^{2d}), row by row.
SupPoint operator_to_point(const Eigen::MatrixXcd& t);
Eigen::MatrixXcd point_to_operator(const SupPoint& x);

bool is_unitary(const MatrixElement& u, double tol = 1e-10);

/// Finite subgroup of U(d). Elements are indexed as in `spec`.
struct UnitaryGroup {
  GroupSpec spec;  // acts on C^d = l_inf({0}, R^{2d}) by the realified matrices
  std::vector<MatrixElement> matrices;

  std::size_t size() const noexcept { return matrices.size(); }
  int dim() const noexcept { return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows()); }
  std::size_t identity() const noexcept { return 0; }
  std::size_t generator_index(std::size_t s) const;
};

/// Throws StructuralError for non-unitary or mismatched generators and
/// GroupNotFiniteError beyond max_size.
UnitaryGroup unitary_group(const std::vector<MatrixElement>& generators, std::vector<std::string> labels = {},
                           std::size_t max_size = 4096);

/// Q8 = <i, j> in U(2) with i = diag(i, -i), j = [[0, 1], [-1, 0]].
UnitaryGroup quaternion_group();
/// S3 as 3 x 3 permutation matrices, generated by a transposition and a 3-cycle.
UnitaryGroup symmetric_group_s3();
/// C_n generated by the real rotation of R^2 by 2 pi / n, viewed in U(2).
UnitaryGroup cyclic_rotation_group(int n);

}  // namespace urns

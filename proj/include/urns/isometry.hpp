#pragma once

// Isometries of l_inf(Gamma, R^k) of the form
//   (phi x)_gamma = F_gamma x_{perm(gamma)} + t_gamma
// with F_gamma orthogonal, and finite groups generated by them.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "urns/geometry.hpp"

namespace urns {

class FiberPermIsometry {
 public:
  FiberPermIsometry() = default;
  /// Validates that perm is a bijection, every fiber map is k x k with
  /// F^T F = I within orthogonality_tol, and the translation has shape m x k.
  FiberPermIsometry(std::vector<int> perm, std::vector<Eigen::MatrixXd> fiber_maps, SupPoint translation,
                    double orthogonality_tol = 1e-10);

  static FiberPermIsometry identity(std::size_t m, std::size_t k);
  static FiberPermIsometry translation_by(const SupPoint& t);
  /// (phi x)_i = sign_i * x_{perm(i)} + t_i on real l_inf^n.
  static FiberPermIsometry signed_permutation(const std::vector<int>& perm, const std::vector<int>& signs,
                                              const std::vector<double>& translation);

  std::size_t index_count() const noexcept { return perm_.size(); }
  std::size_t fiber_dim() const noexcept { return translation_.fiber_dim(); }
  const std::vector<int>& perm() const noexcept { return perm_; }
  const std::vector<Eigen::MatrixXd>& fiber_maps() const noexcept { return fiber_maps_; }
  const SupPoint& translation() const noexcept { return translation_; }

  SupPoint apply(const SupPoint& x) const;
  SupPoint operator()(const SupPoint& x) const { return apply(x); }

  /// Image of a box (k = 1 only). Exact when the data are exact dyadics.
  Box apply(const Box& box) const;

  bool same_space(const FiberPermIsometry& other) const noexcept {
    return index_count() == other.index_count() && fiber_dim() == other.fiber_dim();
  }

 private:
  std::vector<int> perm_;
  std::vector<Eigen::MatrixXd> fiber_maps_;
  SupPoint translation_;
};

/// x -> a(b(x)).
FiberPermIsometry compose(const FiberPermIsometry& a, const FiberPermIsometry& b);
FiberPermIsometry invert(const FiberPermIsometry& a);

/// Largest deviation between the actions of a and b on the probe set.
double action_distance(const FiberPermIsometry& a, const FiberPermIsometry& b);

/// A finite group of isometries enumerated by breadth-first closure.
/// Element i is reached by right-multiplying generators along words[i]
/// (empty word = identity = element 0).
struct GroupSpec {
  std::vector<FiberPermIsometry> generators;
  std::vector<std::string> generator_labels;
  std::vector<FiberPermIsometry> elements;
  std::vector<std::vector<int>> words;
  /// product[i][j] = index of elements[i] o elements[j]
  std::vector<std::vector<int>> product;
  std::vector<int> inverse;

  bool closed() const noexcept { return !elements.empty() && product.size() == elements.size(); }
  std::size_t size() const noexcept { return elements.size(); }
  std::string label(std::size_t element) const;
  /// Index of the element acting like `g`, or -1.
  int find(const FiberPermIsometry& g, double tol = 1e-10) const;
};

/// Throws GroupNotFiniteError if more than max_size elements appear,
/// StructuralError if generators act on different spaces.
GroupSpec group_closure(const std::vector<FiberPermIsometry>& generators, std::size_t max_size = 4096,
                        double tol = 1e-10, std::vector<std::string> labels = {});

/// Throws ContractError if G is not closed.
PointCloud orbit(const GroupSpec& group, const SupPoint& x0, double dedup_tol = 1e-10);
double orbit_diameter(const GroupSpec& group, const SupPoint& x0);

}  // namespace urns

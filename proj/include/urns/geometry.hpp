#pragma once

// Geometry of the two finite models with uniform relative normal structure:
//   * real l_inf^n, where admissible sets are coordinate boxes;
//   * l_inf(Gamma, H) with |Gamma| = m and Euclidean fibers R^k.
// Real l_inf^n is the k = 1 case of the fiber model.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace urns {

using FiberPoint = Eigen::VectorXd;

/// Element of l_inf(Gamma, R^k): one row per index gamma.
class SupPoint {
 public:
  SupPoint() = default;
  SupPoint(std::size_t m, std::size_t k);
  explicit SupPoint(Eigen::MatrixXd fibers);

  /// k = 1 point of real l_inf^n.
  static SupPoint from_coords(std::span<const double> coords);
  static SupPoint from_fibers(const std::vector<FiberPoint>& fibers);

  std::size_t index_count() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t fiber_dim() const noexcept { return static_cast<std::size_t>(data_.cols()); }

  FiberPoint fiber(std::size_t gamma) const { return data_.row(static_cast<Eigen::Index>(gamma)).transpose(); }
  void set_fiber(std::size_t gamma, const FiberPoint& value);

  double& operator()(std::size_t gamma, std::size_t j) {
    return data_(static_cast<Eigen::Index>(gamma), static_cast<Eigen::Index>(j));
  }
  double operator()(std::size_t gamma, std::size_t j) const {
    return data_(static_cast<Eigen::Index>(gamma), static_cast<Eigen::Index>(j));
  }

  const Eigen::MatrixXd& matrix() const noexcept { return data_; }

  /// max over gamma of the Euclidean fiber norm.
  double norm() const;

  bool same_space(const SupPoint& other) const noexcept {
    return data_.rows() == other.data_.rows() && data_.cols() == other.data_.cols();
  }

 private:
  Eigen::MatrixXd data_;
};

double sup_distance(const SupPoint& x, const SupPoint& y);

/// Coordinate box in real l_inf^n; the only admissible sets of that space.
/// An empty intersection is carried as a marker rather than thrown.
class Box {
 public:
  Box() = default;
  /// Throws StructuralError if lo_i > hi_i for some i or sizes differ.
  Box(Eigen::VectorXd lo, Eigen::VectorXd hi);

  static Box empty_marker(std::size_t n);
  static Box point(const Eigen::VectorXd& x) { return Box(x, x); }

  bool empty() const noexcept { return empty_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(lo_.size()); }
  const Eigen::VectorXd& lo() const noexcept { return lo_; }
  const Eigen::VectorXd& hi() const noexcept { return hi_; }

  /// max_i (hi_i - lo_i); 0 for the empty marker.
  double diameter() const;
  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;

  friend bool operator==(const Box& a, const Box& b);

 private:
  Eigen::VectorXd lo_;
  Eigen::VectorXd hi_;
  bool empty_ = false;
};

using PointCloud = std::vector<SupPoint>;

enum class SpaceKind { BoxReal, FiberHilbert };

struct SpaceDescriptor {
  SpaceKind kind = SpaceKind::BoxReal;
  std::size_t index_count = 0;  // n for BoxReal, m for FiberHilbert
  std::size_t fiber_dim = 1;    // always 1 for BoxReal
  double urns_constant = 0.5;

  static SpaceDescriptor box_real(std::size_t n);
  static SpaceDescriptor fiber_hilbert(std::size_t m, std::size_t k);

  bool accepts(const SupPoint& x) const noexcept {
    return x.index_count() == index_count && x.fiber_dim() == fiber_dim;
  }
};

/// Exact pairwise maximum of sup_distance. Throws DomainError when empty.
double cloud_diameter(const PointCloud& cloud);

/// Smallest box containing a k = 1 cloud.
Box bounding_box(const PointCloud& cloud);

/// { y : |y - x|_inf <= c diam(M) for all x in M }.
Box box_A(const Box& box, double c);

/// Intersection over y in A(M) of B(y, c diam M), intersected with A(M).
/// Always a sub-box of M with diameter <= c diam(M).
Box box_H(const Box& box, double c);

/// Per-coordinate midpoint. Throws DomainError for the empty marker.
SupPoint box_center(const Box& box);

/// Center selector z_M: bounding-box midpoint (BoxReal) or fiberwise
/// smallest-enclosing-ball center (FiberHilbert).
SupPoint urns_center(const PointCloud& cloud, const SpaceDescriptor& space);

/// Same as urns_center, also reporting whether every fiber used the exact
/// enclosing-ball solver.
struct CenterResult {
  SupPoint center;
  bool exact = true;
};
CenterResult urns_center_detailed(const PointCloud& cloud, const SpaceDescriptor& space);

/// Checks both defining conditions of uniform relative normal structure for
/// (M, z, c): every x in M is within c diam M of z (+ tol), and every sample
/// y with M inside B(y, c diam M) (+ tol) is within c diam M of z (+ tol).
/// Samples failing the hypothesis are ignored.
bool verify_urns_certificate(const PointCloud& cloud, const SupPoint& z, double c,
                             const std::vector<SupPoint>& y_samples, double tol = 1e-12);

}  // namespace urns

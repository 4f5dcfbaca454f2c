#include "urns/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "urns/errors.hpp"
#include "urns/seb.hpp"

namespace urns {

SupPoint::SupPoint(std::size_t m, std::size_t k)
    : data_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k))) {
  if (k == 0) throw StructuralError("fiber dimension must be at least 1");
}

SupPoint::SupPoint(Eigen::MatrixXd fibers) : data_(std::move(fibers)) {
  if (data_.cols() == 0) throw StructuralError("fiber dimension must be at least 1");
  if (!data_.allFinite()) throw StructuralError("non-finite entry in point");
}

SupPoint SupPoint::from_coords(std::span<const double> coords) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(coords.size()), 1);
  for (std::size_t i = 0; i < coords.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = coords[i];
  return SupPoint(std::move(m));
}

SupPoint SupPoint::from_fibers(const std::vector<FiberPoint>& fibers) {
  if (fibers.empty()) throw StructuralError("point needs at least one fiber");
  const Eigen::Index k = fibers.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(fibers.size()), k);
  for (std::size_t g = 0; g < fibers.size(); ++g) {
    if (fibers[g].size() != k) throw StructuralError("fibers of unequal dimension");
    m.row(static_cast<Eigen::Index>(g)) = fibers[g].transpose();
  }
  return SupPoint(std::move(m));
}

void SupPoint::set_fiber(std::size_t gamma, const FiberPoint& value) {
  if (value.size() != data_.cols()) throw StructuralError("fiber dimension mismatch");
  data_.row(static_cast<Eigen::Index>(gamma)) = value.transpose();
}

double SupPoint::norm() const {
  if (data_.rows() == 0) return 0.0;
  return data_.rowwise().norm().maxCoeff();
}

double sup_distance(const SupPoint& x, const SupPoint& y) {
  if (!x.same_space(y)) throw StructuralError("sup_distance: points live in different spaces");
  if (x.index_count() == 0) return 0.0;
  return (x.matrix() - y.matrix()).rowwise().norm().maxCoeff();
}

Box::Box(Eigen::VectorXd lo, Eigen::VectorXd hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size()) throw StructuralError("box bounds of different length");
  for (Eigen::Index i = 0; i < lo_.size(); ++i) {
    if (!(lo_[i] <= hi_[i])) {
      throw StructuralError("box bound inverted at coordinate " + std::to_string(i));
    }
  }
}

Box Box::empty_marker(std::size_t n) {
  Box b;
  b.lo_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  b.hi_ = b.lo_;
  b.empty_ = true;
  return b;
}

double Box::diameter() const {
  if (empty_ || lo_.size() == 0) return 0.0;
  return (hi_ - lo_).maxCoeff();
}

bool Box::contains(const Eigen::VectorXd& x, double tol) const {
  if (empty_ || x.size() != lo_.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
  }
  return true;
}

bool operator==(const Box& a, const Box& b) {
  if (a.empty_ || b.empty_) return a.empty_ == b.empty_ && a.lo_.size() == b.lo_.size();
  return a.lo_ == b.lo_ && a.hi_ == b.hi_;
}

SpaceDescriptor SpaceDescriptor::box_real(std::size_t n) {
  return {SpaceKind::BoxReal, n, 1, 0.5};
}

SpaceDescriptor SpaceDescriptor::fiber_hilbert(std::size_t m, std::size_t k) {
  return {SpaceKind::FiberHilbert, m, k, std::sqrt(3.0) / 2.0};
}

double cloud_diameter(const PointCloud& cloud) {
  if (cloud.empty()) throw DomainError("cloud_diameter: empty cloud");
  double d = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = i + 1; j < cloud.size(); ++j) {
      d = std::max(d, sup_distance(cloud[i], cloud[j]));
    }
  }
  return d;
}

Box bounding_box(const PointCloud& cloud) {
  if (cloud.empty()) throw DomainError("bounding_box: empty cloud");
  if (cloud.front().fiber_dim() != 1) throw StructuralError("bounding_box: needs real coordinates (k = 1)");
  Eigen::VectorXd lo = cloud.front().matrix().col(0);
  Eigen::VectorXd hi = lo;
  for (const auto& p : cloud) {
    if (!p.same_space(cloud.front())) throw StructuralError("bounding_box: mixed spaces");
    lo = lo.cwiseMin(p.matrix().col(0));
    hi = hi.cwiseMax(p.matrix().col(0));
  }
  return Box(std::move(lo), std::move(hi));
}

Box box_A(const Box& box, double c) {
  if (box.empty()) return box;
  const double r = c * box.diameter();
  Eigen::VectorXd lo = box.hi().array() - r;
  Eigen::VectorXd hi = box.lo().array() + r;
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (lo[i] <= hi[i]) continue;
    // On a widest coordinate with c = 1/2 the exact interval is the midpoint;
    // rounding can invert it by a few ulps.
    const double scale = std::max({std::abs(box.lo()[i]), std::abs(box.hi()[i]), r});
    if (lo[i] - hi[i] > 8 * std::numeric_limits<double>::epsilon() * scale) return Box::empty_marker(box.dim());
    lo[i] = hi[i] = 0.5 * (box.lo()[i] + box.hi()[i]);
  }
  return Box(std::move(lo), std::move(hi));
}

Box box_H(const Box& box, double c) {
  if (box.empty()) return box;
  const Box a = box_A(box, c);
  if (a.empty()) return a;
  // Balls B(y, r) over y in A = [hi - r, lo + r] meet in [lo, hi]; intersect
  // that with A in closed form so no bound is produced by cancellation.
  const double r = c * box.diameter();
  Eigen::VectorXd lo(box.dim());
  Eigen::VectorXd hi(box.dim());
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    lo[i] = std::max(a.lo()[i], box.lo()[i]);
    hi[i] = std::min(a.hi()[i], box.hi()[i]);
    // Rounding in hi - r or lo + r may leave a width one ulp above r.
    if (hi[i] - lo[i] > r) hi[i] = std::nextafter(hi[i], lo[i]);
    if (hi[i] - lo[i] > r) lo[i] = std::nextafter(lo[i], hi[i]);
    if (lo[i] > hi[i]) return Box::empty_marker(box.dim());
  }
  return Box(std::move(lo), std::move(hi));
}

SupPoint box_center(const Box& box) {
  if (box.empty()) throw DomainError("box_center: empty box");
  Eigen::MatrixXd mid(box.lo().size(), 1);
  for (Eigen::Index i = 0; i < box.lo().size(); ++i) {
    const double lo = box.lo()[i];
    const double hi = box.hi()[i];
    mid(i, 0) = lo == hi ? lo : 0.5 * (lo + hi);
  }
  return SupPoint(std::move(mid));
}

CenterResult urns_center_detailed(const PointCloud& cloud, const SpaceDescriptor& space) {
  if (cloud.empty()) throw DomainError("urns_center: empty cloud");
  for (const auto& p : cloud) {
    if (!space.accepts(p)) throw StructuralError("urns_center: point outside the described space");
  }
  if (cloud.size() == 1 || cloud_diameter(cloud) == 0.0) return {cloud.front(), true};

  if (space.kind == SpaceKind::BoxReal) return {box_center(bounding_box(cloud)), true};

  CenterResult out{SupPoint(space.index_count, space.fiber_dim), true};
  std::vector<FiberPoint> fiber_points(cloud.size());
  for (std::size_t g = 0; g < space.index_count; ++g) {
    for (std::size_t i = 0; i < cloud.size(); ++i) fiber_points[i] = cloud[i].fiber(g);
    const SebResult seb = seb_center(fiber_points);
    out.exact = out.exact && seb.exact;
    out.center.set_fiber(g, seb.center);
  }
  return out;
}

SupPoint urns_center(const PointCloud& cloud, const SpaceDescriptor& space) {
  return urns_center_detailed(cloud, space).center;
}

bool verify_urns_certificate(const PointCloud& cloud, const SupPoint& z, double c,
                             const std::vector<SupPoint>& y_samples, double tol) {
  if (cloud.empty()) throw DomainError("verify_urns_certificate: empty cloud");
  const double r = c * cloud_diameter(cloud);
  for (const auto& x : cloud) {
    if (sup_distance(x, z) > r + tol) return false;
  }
  for (const auto& y : y_samples) {
    const bool hypothesis = std::all_of(cloud.begin(), cloud.end(),
                                        [&](const SupPoint& x) { return sup_distance(x, y) <= r + tol; });
    if (hypothesis && sup_distance(y, z) > r + tol) return false;
  }
  return true;
}

}  // namespace urns

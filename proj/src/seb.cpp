#include "urns/seb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "urns/errors.hpp"

namespace urns {
namespace {

struct Ball {
  FiberPoint center;
  double radius_sq = -1.0;  // negative: encloses nothing
};

// Smallest ball with every support point on its boundary. The center lies in
// the affine hull of the support; an affinely dependent support is solved in
// the minimum-norm sense.
Ball circumball(const std::vector<FiberPoint>& pts, const std::vector<int>& support, Eigen::Index dim) {
  if (support.empty()) return {FiberPoint::Zero(dim), -1.0};
  const FiberPoint& origin = pts[static_cast<std::size_t>(support.front())];
  if (support.size() == 1) return {origin, 0.0};

  const auto s = static_cast<Eigen::Index>(support.size()) - 1;
  Eigen::MatrixXd q(dim, s);
  for (Eigen::Index j = 0; j < s; ++j) q.col(j) = pts[static_cast<std::size_t>(support[static_cast<std::size_t>(j + 1)])] - origin;
  const Eigen::MatrixXd gram = q.transpose() * q;
  const Eigen::VectorXd rhs = 0.5 * gram.diagonal();
  const Eigen::VectorXd lambda = gram.completeOrthogonalDecomposition().solve(rhs);
  Ball b{origin + q * lambda, 0.0};
  for (int idx : support) b.radius_sq = std::max(b.radius_sq, (pts[static_cast<std::size_t>(idx)] - b.center).squaredNorm());
  return b;
}

class MoveToFrontSolver {
 public:
  MoveToFrontSolver(const std::vector<FiberPoint>& pts, double slack)
      : pts_(pts), dim_(pts.front().size()), slack_(slack), order_(pts.size()) {
    std::iota(order_.begin(), order_.end(), 0);
  }

  Ball solve() {
    std::vector<int> support;
    return recurse(order_.size(), support);
  }

 private:
  bool outside(int idx, const Ball& b) const {
    if (b.radius_sq < 0.0) return true;
    return (pts_[static_cast<std::size_t>(idx)] - b.center).squaredNorm() > b.radius_sq + slack_;
  }

  Ball recurse(std::size_t end, std::vector<int>& support) {
    Ball b = circumball(pts_, support, dim_);
    if (static_cast<Eigen::Index>(support.size()) == dim_ + 1) return b;
    for (std::size_t i = 0; i < end; ++i) {
      const int p = order_[i];
      if (!outside(p, b)) continue;
      support.push_back(p);
      b = recurse(i, support);
      support.pop_back();
      std::rotate(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(i),
                  order_.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    }
    return b;
  }

  const std::vector<FiberPoint>& pts_;
  Eigen::Index dim_;
  double slack_;
  std::vector<int> order_;
};

double max_distance(const std::vector<FiberPoint>& pts, const FiberPoint& c) {
  double r = 0.0;
  for (const auto& p : pts) r = std::max(r, (p - c).norm());
  return r;
}

// Minimax descent on f(c) = max_i |c - p_i|: step toward the farthest point
// with step 1/(t+1) (a subgradient step on f^2 without line search).
SebResult descend(const std::vector<FiberPoint>& pts, FiberPoint start, const SebOptions& options, double scale) {
  FiberPoint c = std::move(start);
  FiberPoint best = c;
  double best_r = max_distance(pts, c);
  int t = 0;
  int stalled = 0;
  for (; t < options.max_iterations; ++t) {
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double d = (pts[i] - c).squaredNorm();
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    const double step = 1.0 / (t + 2.0);
    const FiberPoint delta = step * (pts[far] - c);
    c += delta;
    const double r = max_distance(pts, c);
    if (r < best_r) {
      best_r = r;
      best = c;
    }
    stalled = delta.norm() <= options.tolerance * scale ? stalled + 1 : 0;
    if (stalled >= 16) break;
  }
  return {best, best_r, false, t < options.max_iterations, t};
}

}  // namespace

SebResult seb_center(const std::vector<FiberPoint>& points, const SebOptions& options) {
  if (points.empty()) throw DomainError("seb_center: empty point set");
  const Eigen::Index dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw StructuralError("seb_center: points of unequal dimension");
    if (!p.allFinite()) throw StructuralError("seb_center: non-finite coordinate");
  }

  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, (p - points.front()).norm());
  if (scale == 0.0) return {points.front(), 0.0, true, true, 0};

  if (options.method == SebMethod::Subgradient) {
    FiberPoint mean = FiberPoint::Zero(dim);
    for (const auto& p : points) mean += p;
    mean /= static_cast<double>(points.size());
    return descend(points, mean, options, scale);
  }

  const double slack = 1e-13 * scale * scale;
  const Ball ball = MoveToFrontSolver(points, slack).solve();
  const double radius = max_distance(points, ball.center);
  const bool consistent = radius <= std::sqrt(std::max(ball.radius_sq, 0.0)) + 1e-9 * scale;
  if (consistent || options.method == SebMethod::Exact) {
    return {ball.center, radius, consistent, true, 0};
  }
  return descend(points, ball.center, options, scale);
}

}  // namespace urns

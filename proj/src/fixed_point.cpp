#include "urns/fixed_point.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>

#include "urns/errors.hpp"

namespace urns {
namespace {

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void IterationTrace::write_csv(std::ostream& os) const {
  const std::size_t n = steps.empty() ? 0 : steps.front().point.index_count();
  os << "step,diameter";
  for (std::size_t i = 0; i < n; ++i) os << ",x" << i;
  os << '\n';
  for (const auto& s : steps) {
    os << s.index << ',' << shortest(s.diameter);
    for (std::size_t i = 0; i < n; ++i) os << ',' << shortest(s.point(i, 0));
    os << '\n';
  }
}

Box initial_admissible_box(const GroupSpec& group, const SupPoint& x0) {
  const PointCloud cloud = orbit(group, x0, 0.0);
  const double delta = cloud_diameter(cloud);
  const Box hull = bounding_box(cloud);
  // intersection of B(p, delta) over p: [max p - delta, min p + delta]
  Eigen::VectorXd lo = hull.hi().array() - delta;
  Eigen::VectorXd hi = hull.lo().array() + delta;
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) throw ContractError("iterate_box: empty initial admissible set");
  }
  return Box(std::move(lo), std::move(hi));
}

BoxIterationResult iterate_box(const GroupSpec& group, const SupPoint& x0, double tol, int max_iter) {
  if (!group.closed()) throw ContractError("iterate_box: group is not closed");
  if (x0.fiber_dim() != 1) throw StructuralError("iterate_box: requires real l_inf^n (fiber dimension 1)");
  if (!(tol > 0.0)) throw DomainError("iterate_box: tolerance must be positive");
  constexpr double c = 0.5;

  BoxIterationResult out;
  Box current = initial_admissible_box(group, x0);
  if (current.diameter() == 0.0) current = Box::point(x0.matrix().col(0));
  for (int n = 0;; ++n) {
    SupPoint center = box_center(current);
    const double diam = current.diameter();
    out.trace.steps.push_back({n, diam, center, current});
    if (diam <= tol) {
      out.trace.terminated = Termination::Tolerance;
      break;
    }
    if (n >= max_iter) {
      out.trace.terminated = Termination::MaxIter;
      break;
    }
    Box next = box_H(current, c);
    if (next.empty()) throw ContractError("iterate_box: H produced an empty set");
    current = std::move(next);
  }
  out.point = out.trace.steps.back().point;
  return out;
}

OrbitCenterResult orbit_center_fixed_point(const GroupSpec& group, const SupPoint& x0, const SpaceDescriptor& space) {
  const CenterResult c = urns_center_detailed(orbit(group, x0), space);
  return {c.center, c.exact};
}

double residual(const GroupSpec& group, const SupPoint& x) {
  if (!group.closed()) throw ContractError("residual: group is not closed");
  double r = 0.0;
  for (const auto& g : group.elements) r = std::max(r, sup_distance(g.apply(x), x));
  return r;
}

}  // namespace urns

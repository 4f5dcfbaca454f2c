#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "urns/geometry.hpp"
#include "urns/isometry.hpp"

namespace urns {

enum class Termination { Tolerance, MaxIter };

struct IterationStep {
  int index = 0;
  double diameter = 0.0;  // diam A_n
  SupPoint point;         // x_n = center of A_n
  Box admissible;         // A_n
};

struct IterationTrace {
  std::vector<IterationStep> steps;
  Termination terminated = Termination::Tolerance;

  /// CSV with columns step,diameter,x0,...,x{n-1}; doubles in round-trip form.
  void write_csv(std::ostream& os) const;
};

struct BoxIterationResult {
  SupPoint point;
  IterationTrace trace;
  bool converged() const noexcept { return trace.terminated == Termination::Tolerance; }
};

/// Admissible-set contraction in real l_inf^n:
///   A_0 = intersection over g of B(g x0, diam orbit(x0)),  A_{n+1} = H(A_n),
/// with x_n the midpoint of A_n; stops once diam A_n <= tol.
/// Requires k = 1 and a closed group.
BoxIterationResult iterate_box(const GroupSpec& group, const SupPoint& x0, double tol = 1e-10, int max_iter = 200);

/// Exact box A_0 built from the orbit of x0.
Box initial_admissible_box(const GroupSpec& group, const SupPoint& x0);

struct OrbitCenterResult {
  SupPoint point;
  bool exact = true;  // false if some enclosing-ball fiber fell back to descent
};

/// urns_center of the orbit of x0; fixed by G through equivariance of the
/// selector.
OrbitCenterResult orbit_center_fixed_point(const GroupSpec& group, const SupPoint& x0, const SpaceDescriptor& space);

/// max over g in G of sup_distance(g x, x).
double residual(const GroupSpec& group, const SupPoint& x);

}  // namespace urns

#pragma once

#include <vector>

#include "urns/geometry.hpp"

namespace urns {

enum class SebMethod {
  Auto,        // exact move-to-front solver, minimax descent as fallback
  Exact,
  Subgradient
};

struct SebOptions {
  SebMethod method = SebMethod::Auto;
  double tolerance = 1e-10;
  int max_iterations = 100000;
};

struct SebResult {
  FiberPoint center;
  double radius = 0.0;
  bool exact = true;      // produced by the combinatorial solver
  bool converged = true;  // false only if the descent hit its cap
  int iterations = 0;
};

/// Smallest enclosing Euclidean ball of a finite set. The reported radius
/// is always recomputed as the max distance from the returned center, so the
/// ball covers every input point. Throws DomainError on empty input.
SebResult seb_center(const std::vector<FiberPoint>& points, const SebOptions& options = {});

}  // namespace urns

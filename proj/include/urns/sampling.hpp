#pragma once

#include <vector>

#include "urns/geometry.hpp"
#include "urns/random.hpp"

namespace urns {

/// Random points y with cloud contained in B(y, radius). Each fiber of y is
/// z_gamma + t u with u a random unit direction and t uniform in [0, t_max],
/// where t_max is the largest step keeping every cloud fiber within radius.
/// Requires that z itself satisfies the containment (max_x d(x, z) <= radius).
std::vector<SupPoint> sample_hypothesis_centers(const PointCloud& cloud, const SupPoint& z, double radius,
                                                std::size_t count, StableRng& rng);

/// Uniform random cloud with coordinates in [lo, hi].
PointCloud random_cloud(StableRng& rng, std::size_t points, std::size_t m, std::size_t k, double lo, double hi);

}  // namespace urns

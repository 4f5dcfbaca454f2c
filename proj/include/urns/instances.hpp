#pragma once

// Seeded generators for the randomized scenario suites. All randomness goes
// through StableRng so instances are reproducible across platforms.

#include <string>
#include <vector>

#include "urns/derivation.hpp"
#include "urns/group_algebra.hpp"
#include "urns/isometry.hpp"
#include "urns/random.hpp"

namespace urns {

struct BoxGroupInstance {
  GroupSpec group;
  SupPoint x0;
  std::vector<double> center;  // a common fixed point used to build the translations
};

/// Finite group of signed permutations with translations on real l_inf^n,
/// conjugated by a translation so it fixes a random point. All data are
/// dyadic rationals with few bits (x0 on a 1/64 grid in [-2, 2], the
/// conjugating center on a 1/8 grid in [-1, 1]), so box arithmetic on orbits
/// stays exact for the ~40 halvings needed to reach 1e-10.
BoxGroupInstance random_box_group(StableRng& rng, std::size_t n, std::size_t max_order = 48);

/// Q8, S3, C<n> (rotation of R^2 by 2 pi / n).
UnitaryGroup named_unitary_group(const std::string& name);

/// Z<n> (cyclic) or S<n> (symmetric) as permutation groups.
FiniteGroup named_finite_group(const std::string& name);

/// Generator values of delta(g) = T0 g - g T0 for a complex Gaussian T0.
std::map<std::string, MatrixElement> random_inner_values(const UnitaryGroup& group, StableRng& rng);

/// Adds `amount` to entry (row, col) of the value on generator `label`.
void corrupt_value(std::map<std::string, MatrixElement>& values, const std::string& label, int row, int col,
                   double amount);

}  // namespace urns

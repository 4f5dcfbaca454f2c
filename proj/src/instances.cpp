#include "urns/instances.hpp"

#include <algorithm>
#include <cctype>

#include "urns/errors.hpp"

namespace urns {
namespace {

FiberPermIsometry random_signed_perm_fixing(StableRng& rng, const std::vector<double>& center) {
  const std::size_t n = center.size();
  const std::vector<int> perm = rng.permutation(static_cast<int>(n));
  std::vector<int> signs(n);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    signs[i] = rng.uniform() < 0.5 ? -1 : 1;
    // x -> F (x - c) + c
    t[i] = center[i] - signs[i] * center[static_cast<std::size_t>(perm[i])];
  }
  return FiberPermIsometry::signed_permutation(perm, signs, t);
}

int parse_order(const std::string& name, std::size_t prefix) {
  const std::string digits = name.substr(prefix);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw StructuralError("unknown named group '" + name + "'");
  }
  return std::stoi(digits);
}

}  // namespace

BoxGroupInstance random_box_group(StableRng& rng, std::size_t n, std::size_t max_order) {
  BoxGroupInstance out;
  out.center.resize(n);
  for (auto& c : out.center) c = (static_cast<double>(rng.index(17)) - 8.0) / 8.0;
  std::vector<double> x0(n);
  for (auto& x : x0) x = (static_cast<double>(rng.index(257)) - 128.0) / 64.0;
  out.x0 = SupPoint::from_coords(x0);

  for (int attempt = 0; attempt < 24; ++attempt) {
    const std::size_t count = 1 + rng.index(2);
    std::vector<FiberPermIsometry> gens;
    for (std::size_t i = 0; i < count; ++i) gens.push_back(random_signed_perm_fixing(rng, out.center));
    try {
      out.group = group_closure(gens, max_order);
      return out;
    } catch (const GroupNotFiniteError&) {
    }
  }
  // A single signed permutation of n <= 8 points has order <= 30.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    try {
      out.group = group_closure({random_signed_perm_fixing(rng, out.center)}, max_order);
      return out;
    } catch (const GroupNotFiniteError&) {
    }
  }
  throw GroupNotFiniteError("random_box_group: no group of order <= " + std::to_string(max_order) + " found on " +
                            std::to_string(n) + " coordinates");
}

UnitaryGroup named_unitary_group(const std::string& name) {
  if (name == "Q8") return quaternion_group();
  if (name == "S3") return symmetric_group_s3();
  if (!name.empty() && name[0] == 'C') return cyclic_rotation_group(parse_order(name, 1));
  throw StructuralError("unknown named unitary group '" + name + "'");
}

FiniteGroup named_finite_group(const std::string& name) {
  if (!name.empty() && name[0] == 'Z') return cyclic_group(parse_order(name, 1));
  if (!name.empty() && name[0] == 'S') return symmetric_group(parse_order(name, 1));
  throw StructuralError("unknown named finite group '" + name + "'");
}

std::map<std::string, MatrixElement> random_inner_values(const UnitaryGroup& group, StableRng& rng) {
  const MatrixElement t0 = random_complex_matrix(rng, group.dim(), group.dim());
  std::map<std::string, MatrixElement> values;
  for (std::size_t s = 0; s < group.spec.generators.size(); ++s) {
    const MatrixElement& g = group.matrices[group.generator_index(s)];
    values[group.spec.generator_labels[s]] = t0 * g - g * t0;
  }
  return values;
}

void corrupt_value(std::map<std::string, MatrixElement>& values, const std::string& label, int row, int col,
                   double amount) {
  auto it = values.find(label);
  if (it == values.end()) throw StructuralError("corrupt: unknown generator '" + label + "'");
  if (row < 0 || col < 0 || row >= it->second.rows() || col >= it->second.cols()) {
    throw StructuralError("corrupt: entry out of range");
  }
  it->second(row, col) += amount;
}

}  // namespace urns

#include "urns/group_algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "urns/errors.hpp"
#include "urns/fixed_point.hpp"

namespace urns {
namespace {

std::vector<int> multiply(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[static_cast<std::size_t>(b[i])];
  return out;
}

bool is_permutation_of_range(const std::vector<int>& p) {
  std::vector<int> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != static_cast<int>(i)) return false;
  }
  return true;
}

}  // namespace

std::size_t FiniteGroup::index_of(const std::vector<int>& perm) const {
  const auto it = std::lower_bound(elements.begin(), elements.end(), perm);
  if (it == elements.end() || *it != perm) throw DomainError("permutation is not an element of the group");
  return static_cast<std::size_t>(it - elements.begin());
}

FiniteGroup permutation_group(const std::vector<std::vector<int>>& generators, std::size_t max_size) {
  if (generators.empty()) throw StructuralError("permutation_group: no generators");
  const std::size_t degree = generators.front().size();
  for (const auto& g : generators) {
    if (g.size() != degree || !is_permutation_of_range(g)) {
      throw StructuralError("permutation_group: generator is not a permutation of the common degree");
    }
  }
  std::vector<int> id(degree);
  std::iota(id.begin(), id.end(), 0);

  std::map<std::vector<int>, std::vector<int>> word_of{{id, {}}};
  std::vector<std::vector<int>> bfs{id};
  for (std::size_t head = 0; head < bfs.size(); ++head) {
    for (std::size_t s = 0; s < generators.size(); ++s) {
      auto next = multiply(bfs[head], generators[s]);
      if (word_of.count(next)) continue;
      if (bfs.size() >= max_size) {
        throw GroupNotFiniteError("permutation_group: closure exceeds " + std::to_string(max_size) + " elements");
      }
      auto w = word_of[bfs[head]];
      w.push_back(static_cast<int>(s));
      word_of.emplace(next, std::move(w));
      bfs.push_back(std::move(next));
    }
  }

  FiniteGroup out;
  for (const auto& [perm, _] : word_of) out.elements.push_back(perm);  // std::map iterates in lex order
  out.words.resize(out.size());
  for (const auto& p : bfs) {
    const std::size_t idx = out.index_of(p);
    out.bfs_order.push_back(idx);
    out.words[idx] = word_of.at(p);
  }
  out.identity = out.index_of(id);
  for (const auto& g : generators) out.generators.push_back(out.index_of(g));

  const std::size_t n = out.size();
  out.product.assign(n, std::vector<int>(n));
  out.inverse.assign(n, -1);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t ab = out.index_of(multiply(out.elements[a], out.elements[b]));
      out.product[a][b] = static_cast<int>(ab);
      if (ab == out.identity) out.inverse[a] = static_cast<int>(b);
    }
  }
  return out;
}

FiniteGroup cyclic_group(int n) {
  if (n < 1) throw DomainError("cyclic_group: order must be positive");
  std::vector<int> shift(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) shift[static_cast<std::size_t>(i)] = (i + 1) % n;
  return permutation_group({shift});
}

FiniteGroup symmetric_group(int n) {
  if (n < 1) throw DomainError("symmetric_group: degree must be positive");
  if (n == 1) return permutation_group({{0}});
  std::vector<int> swap(static_cast<std::size_t>(n));
  std::iota(swap.begin(), swap.end(), 0);
  std::swap(swap[0], swap[1]);
  std::vector<int> cycle(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cycle[static_cast<std::size_t>(i)] = (i + 1) % n;
  return permutation_group({swap, cycle});
}

std::string element_label(const FiniteGroup& group, std::size_t element) {
  std::string out = "(";
  for (std::size_t i = 0; i < group.elements.at(element).size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(group.elements[element][i]);
  }
  return out + ")";
}

GroupCocycle inner_group_cocycle(const FiniteGroup& group, const Eigen::VectorXcd& t) {
  const auto n = static_cast<Eigen::Index>(group.size());
  if (t.size() != n) throw StructuralError("inner_group_cocycle: t must have one entry per element");
  GroupCocycle d(n, n);
  for (Eigen::Index g = 0; g < n; ++g) {
    for (Eigen::Index s = 0; s < n; ++s) {
      d(s, g) = t(group.product[static_cast<std::size_t>(g)][static_cast<std::size_t>(s)]) -
                t(group.product[static_cast<std::size_t>(s)][static_cast<std::size_t>(g)]);
    }
  }
  return d;
}

GroupCocycle extend_group_cocycle_unchecked(const FiniteGroup& group, const Eigen::MatrixXcd& generator_values) {
  const auto n = static_cast<Eigen::Index>(group.size());
  if (generator_values.rows() != n || generator_values.cols() != static_cast<Eigen::Index>(group.generators.size())) {
    throw StructuralError("extend_group_cocycle: expected |G| x (number of generators) values");
  }
  std::map<std::vector<int>, std::size_t> by_word;
  for (std::size_t i = 0; i < group.size(); ++i) by_word.emplace(group.words[i], i);

  GroupCocycle d = GroupCocycle::Zero(n, n);
  for (std::size_t idx : group.bfs_order) {
    const auto& word = group.words[idx];
    if (word.empty()) continue;
    const auto s = static_cast<std::size_t>(word.back());
    const std::size_t w = by_word.at(std::vector<int>(word.begin(), word.end() - 1));
    const std::size_t gen = group.generators[s];
    // D(w s)(x) = D(w)(s x) + D(s)(x w)
    for (std::size_t x = 0; x < group.size(); ++x) {
      d(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(idx)) =
          d(group.product[gen][x], static_cast<Eigen::Index>(w)) +
          generator_values(group.product[x][w], static_cast<Eigen::Index>(s));
    }
  }
  return d;
}

double group_cocycle_defect(const FiniteGroup& group, const GroupCocycle& cocycle, std::size_t* first,
                            std::size_t* second) {
  const std::size_t n = group.size();
  if (cocycle.rows() != static_cast<Eigen::Index>(n) || cocycle.cols() != static_cast<Eigen::Index>(n)) {
    throw StructuralError("group cocycle must be |G| x |G|");
  }
  double worst = 0.0;
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h) {
      const auto gh = group.product[g][h];
      for (std::size_t s = 0; s < n; ++s) {
        const double v = std::abs(cocycle(static_cast<Eigen::Index>(s), gh) -
                                  cocycle(group.product[h][s], static_cast<Eigen::Index>(g)) -
                                  cocycle(group.product[s][g], static_cast<Eigen::Index>(h)));
        if (v > worst) {
          worst = v;
          if (first) *first = g;
          if (second) *second = h;
        }
      }
    }
  }
  return worst;
}

GroupSpec group_algebra_action(const FiniteGroup& group, const GroupCocycle& cocycle, Scalars scalars) {
  const std::size_t n = group.size();
  const std::size_t k = scalars == Scalars::Real ? 1 : 2;
  if (scalars == Scalars::Real && cocycle.imag().cwiseAbs().maxCoeff() > 0.0) {
    throw StructuralError("real group-algebra model needs a real cocycle");
  }
  const auto kk = static_cast<Eigen::Index>(k);

  GroupSpec out;
  for (std::size_t g = 0; g < n; ++g) {
    const auto g_inv = static_cast<std::size_t>(group.inverse[g]);
    std::vector<int> perm(n);
    SupPoint t(n, k);
    for (std::size_t s = 0; s < n; ++s) {
      // x(g^{-1} s g) + D(g)(g^{-1} s)
      const auto gis = static_cast<std::size_t>(group.product[g_inv][s]);
      perm[s] = group.product[gis][g];
      const std::complex<double> v = cocycle(static_cast<Eigen::Index>(gis), static_cast<Eigen::Index>(g));
      t(s, 0) = v.real();
      if (k == 2) t(s, 1) = v.imag();
    }
    out.elements.emplace_back(std::move(perm), std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Identity(kk, kk)),
                              std::move(t));
  }
  for (std::size_t s = 0; s < group.generators.size(); ++s) {
    out.generators.push_back(out.elements[group.generators[s]]);
    out.generator_labels.push_back(element_label(group, group.generators[s]));
  }
  // GroupSpec convention: element 0 is the identity.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::swap(order[0], order[group.identity]);
  std::vector<int> position(n);
  for (std::size_t i = 0; i < n; ++i) position[order[i]] = static_cast<int>(i);
  std::vector<FiberPermIsometry> reordered;
  for (std::size_t i : order) reordered.push_back(out.elements[i]);
  out.elements = std::move(reordered);
  out.words.resize(n);
  out.product.assign(n, std::vector<int>(n));
  out.inverse.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    out.words[i] = group.words[order[i]];
    out.inverse[i] = position[static_cast<std::size_t>(group.inverse[order[i]])];
    for (std::size_t j = 0; j < n; ++j) out.product[i][j] = position[static_cast<std::size_t>(group.product[order[i]][order[j]])];
  }
  return out;
}

double group_algebra_residual(const FiniteGroup& group, const GroupCocycle& cocycle, const Eigen::VectorXcd& t) {
  return (cocycle - inner_group_cocycle(group, t)).cwiseAbs().maxCoeff();
}

GroupAlgebraWitness finite_group_algebra_witness(const FiniteGroup& group, const GroupCocycle& cocycle,
                                                 Scalars scalars, GroupAlgebraMethod method, double tol) {
  std::size_t first = 0;
  std::size_t second = 0;
  const double defect = group_cocycle_defect(group, cocycle, &first, &second);
  if (defect > tol) {
    throw CocycleInconsistencyError(element_label(group, first), element_label(group, second), defect);
  }
  const std::size_t n = group.size();
  const GroupSpec action = group_algebra_action(group, cocycle, scalars);
  const std::size_t k = scalars == Scalars::Real ? 1 : 2;

  SupPoint point(n, k);
  if (method == GroupAlgebraMethod::OrbitCenter) {
    const auto space = scalars == Scalars::Real ? SpaceDescriptor::box_real(n) : SpaceDescriptor::fiber_hilbert(n, 2);
    point = orbit_center_fixed_point(action, SupPoint(n, k), space).point;
  } else {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    for (const auto& g : action.elements) sum += g.translation().matrix();
    point = SupPoint(sum / static_cast<double>(n));
  }

  GroupAlgebraWitness out;
  out.method = method;
  out.t = Eigen::VectorXcd(static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < n; ++s) {
    out.t(static_cast<Eigen::Index>(s)) = {point(s, 0), k == 2 ? point(s, 1) : 0.0};
  }
  out.residual = group_algebra_residual(group, cocycle, out.t);
  return out;
}

}  // namespace urns

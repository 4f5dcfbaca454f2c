#include "urns/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "urns/errors.hpp"

namespace urns {
namespace {

bool is_bijection(const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= perm.size() || seen[static_cast<std::size_t>(p)]) return false;
    seen[static_cast<std::size_t>(p)] = true;
  }
  return true;
}

// Zero, every basis point e_{gamma,j}, and one fixed generic point.
std::vector<SupPoint> probe_points(std::size_t m, std::size_t k) {
  std::vector<SupPoint> probes;
  probes.emplace_back(m, k);
  for (std::size_t g = 0; g < m; ++g) {
    for (std::size_t j = 0; j < k; ++j) {
      SupPoint e(m, k);
      e(g, j) = 1.0;
      probes.push_back(std::move(e));
    }
  }
  SupPoint generic(m, k);
  for (std::size_t g = 0; g < m; ++g) {
    for (std::size_t j = 0; j < k; ++j) generic(g, j) = std::sin(1.0 + 0.7 * static_cast<double>(g * k + j)) + 0.25;
  }
  probes.push_back(std::move(generic));
  return probes;
}

Eigen::MatrixXd signature(const FiberPermIsometry& a, const std::vector<SupPoint>& probes) {
  const auto rows = static_cast<Eigen::Index>(a.index_count());
  const auto cols = static_cast<Eigen::Index>(a.fiber_dim());
  Eigen::MatrixXd sig(rows * static_cast<Eigen::Index>(probes.size()), cols);
  for (std::size_t p = 0; p < probes.size(); ++p) {
    sig.middleRows(static_cast<Eigen::Index>(p) * rows, rows) = a.apply(probes[p]).matrix();
  }
  return sig;
}

}  // namespace

FiberPermIsometry::FiberPermIsometry(std::vector<int> perm, std::vector<Eigen::MatrixXd> fiber_maps,
                                     SupPoint translation, double orthogonality_tol)
    : perm_(std::move(perm)), fiber_maps_(std::move(fiber_maps)), translation_(std::move(translation)) {
  if (!is_bijection(perm_)) throw StructuralError("isometry: index map is not a bijection");
  if (fiber_maps_.size() != perm_.size() || translation_.index_count() != perm_.size()) {
    throw StructuralError("isometry: perm, fiber maps and translation disagree on |Gamma|");
  }
  const auto k = static_cast<Eigen::Index>(translation_.fiber_dim());
  for (std::size_t g = 0; g < fiber_maps_.size(); ++g) {
    const auto& f = fiber_maps_[g];
    if (f.rows() != k || f.cols() != k) throw StructuralError("isometry: fiber map has wrong shape");
    const double defect = (f.transpose() * f - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
    if (defect > orthogonality_tol) {
      throw StructuralError("isometry: fiber map " + std::to_string(g) + " is not orthogonal (defect " +
                            std::to_string(defect) + ")");
    }
  }
}

FiberPermIsometry FiberPermIsometry::identity(std::size_t m, std::size_t k) {
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  const auto kk = static_cast<Eigen::Index>(k);
  return FiberPermIsometry(std::move(perm), std::vector<Eigen::MatrixXd>(m, Eigen::MatrixXd::Identity(kk, kk)),
                           SupPoint(m, k));
}

FiberPermIsometry FiberPermIsometry::translation_by(const SupPoint& t) {
  FiberPermIsometry id = identity(t.index_count(), t.fiber_dim());
  return FiberPermIsometry(id.perm_, id.fiber_maps_, t);
}

FiberPermIsometry FiberPermIsometry::signed_permutation(const std::vector<int>& perm, const std::vector<int>& signs,
                                                        const std::vector<double>& translation) {
  if (signs.size() != perm.size() || translation.size() != perm.size()) {
    throw StructuralError("signed permutation: perm, signs and translation lengths differ");
  }
  std::vector<Eigen::MatrixXd> maps;
  maps.reserve(perm.size());
  for (int s : signs) {
    if (s != 1 && s != -1) throw StructuralError("signed permutation: signs must be +1 or -1");
    maps.push_back(Eigen::MatrixXd::Constant(1, 1, static_cast<double>(s)));
  }
  return FiberPermIsometry(perm, std::move(maps), SupPoint::from_coords(translation));
}

SupPoint FiberPermIsometry::apply(const SupPoint& x) const {
  if (x.index_count() != index_count() || x.fiber_dim() != fiber_dim()) {
    throw StructuralError("isometry applied to a point of another space");
  }
  Eigen::MatrixXd out(x.matrix().rows(), x.matrix().cols());
  for (std::size_t g = 0; g < perm_.size(); ++g) {
    const auto row = static_cast<Eigen::Index>(g);
    out.row(row) = (fiber_maps_[g] * x.matrix().row(perm_[g]).transpose() + translation_.matrix().row(row).transpose())
                       .transpose();
  }
  return SupPoint(std::move(out));
}

Box FiberPermIsometry::apply(const Box& box) const {
  if (fiber_dim() != 1) throw StructuralError("box image needs a real (k = 1) isometry");
  if (box.dim() != index_count()) throw StructuralError("box dimension does not match isometry");
  if (box.empty()) return box;
  Eigen::VectorXd lo(box.lo().size());
  Eigen::VectorXd hi(box.lo().size());
  for (std::size_t i = 0; i < perm_.size(); ++i) {
    const double s = fiber_maps_[i](0, 0);
    const double a = s * box.lo()[perm_[i]];
    const double b = s * box.hi()[perm_[i]];
    const double t = translation_(i, 0);
    lo[static_cast<Eigen::Index>(i)] = std::min(a, b) + t;
    hi[static_cast<Eigen::Index>(i)] = std::max(a, b) + t;
  }
  return Box(std::move(lo), std::move(hi));
}

FiberPermIsometry compose(const FiberPermIsometry& a, const FiberPermIsometry& b) {
  if (!a.same_space(b)) throw StructuralError("compose: isometries act on different spaces");
  const std::size_t m = a.index_count();
  std::vector<int> perm(m);
  std::vector<Eigen::MatrixXd> maps(m);
  Eigen::MatrixXd t(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(a.fiber_dim()));
  // (a(bx))_g = A_g (B_{pa(g)} x_{pb(pa(g))} + tb_{pa(g)}) + ta_g
  for (std::size_t g = 0; g < m; ++g) {
    const int pa = a.perm()[g];
    perm[g] = b.perm()[static_cast<std::size_t>(pa)];
    maps[g] = a.fiber_maps()[g] * b.fiber_maps()[static_cast<std::size_t>(pa)];
    t.row(static_cast<Eigen::Index>(g)) =
        (a.fiber_maps()[g] * b.translation().matrix().row(pa).transpose()).transpose() +
        a.translation().matrix().row(static_cast<Eigen::Index>(g));
  }
  return FiberPermIsometry(std::move(perm), std::move(maps), SupPoint(std::move(t)), 1e-8);
}

FiberPermIsometry invert(const FiberPermIsometry& a) {
  const std::size_t m = a.index_count();
  std::vector<int> perm(m);
  std::vector<Eigen::MatrixXd> maps(m);
  Eigen::MatrixXd t(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(a.fiber_dim()));
  // y_g = F_g x_{p(g)} + t_g  =>  x_d = F_e^T (y_e - t_e) with e = p^{-1}(d)
  for (std::size_t g = 0; g < m; ++g) perm[static_cast<std::size_t>(a.perm()[g])] = static_cast<int>(g);
  for (std::size_t d = 0; d < m; ++d) {
    const auto e = static_cast<std::size_t>(perm[d]);
    maps[d] = a.fiber_maps()[e].transpose();
    t.row(static_cast<Eigen::Index>(d)) =
        -(maps[d] * a.translation().matrix().row(static_cast<Eigen::Index>(e)).transpose()).transpose();
  }
  return FiberPermIsometry(std::move(perm), std::move(maps), SupPoint(std::move(t)), 1e-8);
}

double action_distance(const FiberPermIsometry& a, const FiberPermIsometry& b) {
  if (!a.same_space(b)) throw StructuralError("action_distance: different spaces");
  const auto probes = probe_points(a.index_count(), a.fiber_dim());
  return (signature(a, probes) - signature(b, probes)).cwiseAbs().maxCoeff();
}

std::string GroupSpec::label(std::size_t element) const {
  const auto& w = words.at(element);
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '*';
    const auto g = static_cast<std::size_t>(w[i]);
    out += g < generator_labels.size() ? generator_labels[g] : "g" + std::to_string(g);
  }
  return out;
}

int GroupSpec::find(const FiberPermIsometry& g, double tol) const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].same_space(g) && action_distance(elements[i], g) <= tol) return static_cast<int>(i);
  }
  return -1;
}

GroupSpec group_closure(const std::vector<FiberPermIsometry>& generators, std::size_t max_size, double tol,
                        std::vector<std::string> labels) {
  if (generators.empty()) throw StructuralError("group_closure: no generators");
  for (const auto& g : generators) {
    if (!g.same_space(generators.front())) throw StructuralError("group_closure: generators act on different spaces");
  }
  const std::size_t m = generators.front().index_count();
  const std::size_t k = generators.front().fiber_dim();
  const auto probes = probe_points(m, k);

  GroupSpec group;
  group.generators = generators;
  if (labels.empty()) {
    for (std::size_t i = 0; i < generators.size(); ++i) labels.push_back("g" + std::to_string(i));
  }
  if (labels.size() != generators.size()) throw StructuralError("group_closure: one label per generator required");
  group.generator_labels = std::move(labels);

  std::vector<Eigen::MatrixXd> sigs;
  auto lookup = [&](const Eigen::MatrixXd& sig) -> int {
    for (std::size_t i = 0; i < sigs.size(); ++i) {
      if ((sigs[i] - sig).cwiseAbs().maxCoeff() <= tol) return static_cast<int>(i);
    }
    return -1;
  };

  group.elements.push_back(FiberPermIsometry::identity(m, k));
  group.words.emplace_back();
  sigs.push_back(signature(group.elements.front(), probes));

  for (std::size_t head = 0; head < group.elements.size(); ++head) {
    for (std::size_t s = 0; s < generators.size(); ++s) {
      FiberPermIsometry candidate = compose(group.elements[head], generators[s]);
      Eigen::MatrixXd sig = signature(candidate, probes);
      if (lookup(sig) >= 0) continue;
      if (group.elements.size() >= max_size) {
        throw GroupNotFiniteError("group not finite at this cap: closure exceeds " + std::to_string(max_size) +
                                  " elements");
      }
      auto word = group.words[head];
      word.push_back(static_cast<int>(s));
      group.elements.push_back(std::move(candidate));
      group.words.push_back(std::move(word));
      sigs.push_back(std::move(sig));
    }
  }

  const std::size_t n = group.elements.size();
  group.product.assign(n, std::vector<int>(n, -1));
  group.inverse.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const int idx = lookup(signature(compose(group.elements[i], group.elements[j]), probes));
      if (idx < 0) throw ContractError("group_closure: product left the enumerated set (tolerance too tight?)");
      group.product[i][j] = idx;
      if (idx == 0) group.inverse[i] = static_cast<int>(j);
    }
    if (group.inverse[i] < 0) throw ContractError("group_closure: element without inverse");
  }
  return group;
}

PointCloud orbit(const GroupSpec& group, const SupPoint& x0, double dedup_tol) {
  if (!group.closed()) throw ContractError("orbit: group is not closed");
  PointCloud out;
  for (const auto& g : group.elements) {
    SupPoint y = g.apply(x0);
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const SupPoint& p) { return sup_distance(p, y) <= dedup_tol; });
    if (!seen) out.push_back(std::move(y));
  }
  return out;
}

double orbit_diameter(const GroupSpec& group, const SupPoint& x0) {
  return cloud_diameter(orbit(group, x0));
}

}  // namespace urns

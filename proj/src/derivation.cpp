#include "urns/derivation.hpp"

#include <algorithm>
#include <cmath>

#include "urns/errors.hpp"
#include "urns/fixed_point.hpp"

namespace urns {
namespace {

double spectral_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues()(0);
}

double max_row_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  return a.rowwise().norm().maxCoeff();
}

Eigen::MatrixXcd permutation_matrix(const std::vector<int>& pi) {
  return tilde_matrix(pi).cast<std::complex<double>>();
}

void check_generator_values(const UnitaryGroup& group, const std::map<std::string, MatrixElement>& values) {
  const int d = group.dim();
  for (const auto& label : group.spec.generator_labels) {
    auto it = values.find(label);
    if (it == values.end()) throw StructuralError("derivation: no value for generator '" + label + "'");
    if (it->second.rows() != d || it->second.cols() != d) {
      throw StructuralError("derivation: value for '" + label + "' has wrong shape");
    }
  }
  for (const auto& [label, _] : values) {
    const auto& labels = group.spec.generator_labels;
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
      throw StructuralError("derivation: value given for unknown generator '" + label + "'");
    }
  }
}

}  // namespace

DerivationData extend_cocycle_unchecked(const UnitaryGroup& group, std::map<std::string, MatrixElement> values) {
  check_generator_values(group, values);
  const auto& spec = group.spec;
  const int d = group.dim();
  std::map<std::vector<int>, std::size_t> by_word;
  for (std::size_t i = 0; i < spec.size(); ++i) by_word.emplace(spec.words[i], i);

  DerivationData out;
  out.extended.assign(spec.size(), MatrixElement::Zero(d, d));
  // BFS order: the prefix of every word is enumerated before the word.
  for (std::size_t i = 1; i < spec.size(); ++i) {
    const auto& word = spec.words[i];
    const auto s = static_cast<std::size_t>(word.back());
    const std::size_t prefix = by_word.at(std::vector<int>(word.begin(), word.end() - 1));
    const MatrixElement& gen = group.matrices[group.generator_index(s)];
    const MatrixElement& delta_s = values.at(spec.generator_labels[s]);
    // delta(w s) = delta(w) s + w delta(s)
    out.extended[i] = out.extended[prefix] * gen + group.matrices[prefix] * delta_s;
  }
  out.values = std::move(values);
  return out;
}

CocycleDefect cocycle_defect(const UnitaryGroup& group, const std::vector<MatrixElement>& extended) {
  if (extended.size() != group.size()) throw StructuralError("cocycle_defect: one value per element required");
  CocycleDefect worst;
  for (std::size_t g = 0; g < group.size(); ++g) {
    for (std::size_t h = 0; h < group.size(); ++h) {
      const auto gh = static_cast<std::size_t>(group.spec.product[g][h]);
      const MatrixElement diff =
          extended[gh] - extended[g] * group.matrices[h] - group.matrices[g] * extended[h];
      const double defect = spectral_norm(diff);
      if (defect > worst.defect) worst = {defect, g, h};
    }
  }
  return worst;
}

DerivationData extend_cocycle(const UnitaryGroup& group, std::map<std::string, MatrixElement> values, double tol) {
  DerivationData out = extend_cocycle_unchecked(group, std::move(values));
  const CocycleDefect defect = cocycle_defect(group, out.extended);
  if (defect.defect > tol) {
    throw CocycleInconsistencyError(group.spec.label(defect.first), group.spec.label(defect.second), defect.defect);
  }
  return out;
}

DerivationData inner_derivation(const UnitaryGroup& group, const MatrixElement& t0) {
  std::map<std::string, MatrixElement> values;
  for (std::size_t s = 0; s < group.spec.generators.size(); ++s) {
    const MatrixElement& g = group.matrices[group.generator_index(s)];
    values[group.spec.generator_labels[s]] = t0 * g - g * t0;
  }
  return extend_cocycle(group, std::move(values));
}

Eigen::MatrixXcd NormingSet::embedding() const {
  if (gammas.empty()) return {};
  Eigen::MatrixXcd e(static_cast<Eigen::Index>(gammas.size()), gammas.front().size());
  for (std::size_t i = 0; i < gammas.size(); ++i) e.row(static_cast<Eigen::Index>(i)) = gammas[i].adjoint();
  return e;
}

NormingSet embed_norming_set(const UnitaryGroup& group, std::vector<Eigen::VectorXcd> seeds) {
  const int d = group.dim();
  if (seeds.empty()) {
    for (int i = 0; i < d; ++i) seeds.push_back(Eigen::VectorXcd::Unit(d, i));
  }
  NormingSet out;
  auto known = [&](const Eigen::VectorXcd& v) {
    return std::any_of(out.gammas.begin(), out.gammas.end(),
                       [&](const Eigen::VectorXcd& w) { return (v - w).cwiseAbs().maxCoeff() <= 1e-10; });
  };
  for (const auto& seed : seeds) {
    if (seed.size() != d) throw StructuralError("embed_norming_set: seed of wrong dimension");
    if (std::abs(seed.norm() - 1.0) > 1e-10) throw DomainError("embed_norming_set: seeds must be unit vectors");
    for (const auto& g : group.matrices) {
      Eigen::VectorXcd v = g.adjoint() * seed;
      if (!known(v)) out.gammas.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<int> extend_unitary_tilde(const MatrixElement& g, const NormingSet& gammas, double tol) {
  std::vector<int> pi(gammas.size(), -1);
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const Eigen::VectorXcd image = g.adjoint() * gammas.gammas[i];
    for (std::size_t j = 0; j < gammas.size(); ++j) {
      if ((image - gammas.gammas[j]).cwiseAbs().maxCoeff() <= tol) {
        pi[i] = static_cast<int>(j);
        break;
      }
    }
    if (pi[i] < 0) {
      throw InvarianceViolationError("norming set not invariant: g* gamma_" + std::to_string(i) + " is missing");
    }
  }
  return pi;
}

Eigen::MatrixXd tilde_matrix(const std::vector<int>& pi) {
  const auto m = static_cast<Eigen::Index>(pi.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) p(i, pi[static_cast<std::size_t>(i)]) = 1.0;
  return p;
}

GroupSpec build_affine_action(const UnitaryGroup& group, const DerivationData& delta, const NormingSet& gammas,
                              bool verify) {
  if (delta.extended.size() != group.size()) throw StructuralError("build_affine_action: derivation not extended");
  const std::size_t m = gammas.size();
  const Eigen::MatrixXcd e = gammas.embedding();

  auto alpha = [&](std::size_t idx) {
    const MatrixElement& g = group.matrices[idx];
    const MatrixElement g_inv = g.adjoint();
    // row r -> r g^{-1}, i.e. column r^T -> conj(g) r^T
    const Eigen::MatrixXd fiber = realify(g.conjugate());
    return FiberPermIsometry(extend_unitary_tilde(g, gammas), std::vector<Eigen::MatrixXd>(m, fiber),
                             operator_to_point(e * delta.extended[idx] * g_inv));
  };

  GroupSpec out;
  out.generator_labels = group.spec.generator_labels;
  for (std::size_t s = 0; s < group.spec.generators.size(); ++s) out.generators.push_back(alpha(group.generator_index(s)));
  for (std::size_t i = 0; i < group.size(); ++i) out.elements.push_back(alpha(i));
  out.words = group.spec.words;
  out.product = group.spec.product;
  out.inverse = group.spec.inverse;

  if (verify) {
    for (std::size_t g = 0; g < out.size(); ++g) {
      for (std::size_t h = 0; h < out.size(); ++h) {
        const auto gh = static_cast<std::size_t>(out.product[g][h]);
        const double dev = action_distance(compose(out.elements[g], out.elements[h]), out.elements[gh]);
        if (dev > 1e-10) {
          throw ContractError("affine action is not a homomorphism at (" + out.label(g) + ", " + out.label(h) + ")");
        }
      }
    }
  }
  return out;
}

std::string to_string(WitnessMethod method) {
  switch (method) {
    case WitnessMethod::OrbitCenter: return "orbit_center";
    case WitnessMethod::Averaging: return "averaging";
    case WitnessMethod::LeastSquares: return "least_squares";
  }
  return "unknown";
}

WitnessMethod witness_method_from_string(const std::string& name) {
  if (name == "orbit_center") return WitnessMethod::OrbitCenter;
  if (name == "averaging") return WitnessMethod::Averaging;
  if (name == "least_squares") return WitnessMethod::LeastSquares;
  throw StructuralError("unknown witness method '" + name + "'");
}

WitnessResidual witness_residual(const UnitaryGroup& group, const DerivationData& delta, const NormingSet& gammas,
                                 const Eigen::MatrixXcd& t) {
  const Eigen::MatrixXcd e = gammas.embedding();
  if (t.rows() != e.rows() || t.cols() != e.cols()) throw StructuralError("witness has wrong shape");
  WitnessResidual out;
  std::vector<double> per_element(group.size(), 0.0);
  for (std::size_t i = 0; i < group.size(); ++i) {
    const MatrixElement& g = group.matrices[i];
    const Eigen::MatrixXcd diff =
        e * delta.extended[i] - (t * g - permutation_matrix(extend_unitary_tilde(g, gammas)) * t);
    per_element[i] = max_row_norm(diff);
    if (per_element[i] > out.model) {
      out.model = per_element[i];
      out.worst_element = i;
    }
    out.op2 = std::max(out.op2, spectral_norm(diff));
  }
  for (std::size_t s = 0; s < group.spec.generators.size(); ++s) {
    out.per_generator.push_back(per_element[group.generator_index(s)]);
  }
  return out;
}

namespace {

Eigen::MatrixXcd least_squares_witness(const UnitaryGroup& group, const DerivationData& delta,
                                       const NormingSet& gammas) {
  const Eigen::MatrixXcd e = gammas.embedding();
  const Eigen::Index m = e.rows();
  const Eigen::Index d = e.cols();
  const Eigen::Index unknowns = m * d;
  const auto n = static_cast<Eigen::Index>(group.size());
  // vec(T) column-major: T(i, j) -> i + j m.  Row (g, i, c):
  //   sum_j T(i, j) g(j, c) - T(pi(i), c) = (E delta(g))(i, c)
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n * m * d, unknowns);
  Eigen::VectorXcd b(n * m * d);
  for (Eigen::Index gi = 0; gi < n; ++gi) {
    const MatrixElement& g = group.matrices[static_cast<std::size_t>(gi)];
    const auto pi = extend_unitary_tilde(g, gammas);
    const Eigen::MatrixXcd rhs = e * delta.extended[static_cast<std::size_t>(gi)];
    for (Eigen::Index c = 0; c < d; ++c) {
      for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index row = (gi * d + c) * m + i;
        for (Eigen::Index j = 0; j < d; ++j) a(row, i + j * m) += g(j, c);
        a(row, pi[static_cast<std::size_t>(i)] + c * m) -= 1.0;
        b(row) = rhs(i, c);
      }
    }
  }
  const Eigen::VectorXcd x = a.completeOrthogonalDecomposition().solve(b);
  return Eigen::Map<const Eigen::MatrixXcd>(x.data(), m, d);
}

}  // namespace

WitnessReport solve_witness(const UnitaryGroup& group, const DerivationData& delta, const NormingSet& gammas,
                            WitnessMethod method) {
  if (delta.extended.size() != group.size()) throw StructuralError("solve_witness: derivation not extended");
  const Eigen::MatrixXcd e = gammas.embedding();
  const auto m = static_cast<std::size_t>(e.rows());
  const auto d = static_cast<std::size_t>(e.cols());

  WitnessReport out;
  out.method = method;
  switch (method) {
    case WitnessMethod::OrbitCenter: {
      const GroupSpec action = build_affine_action(group, delta, gammas, false);
      const auto space = SpaceDescriptor::fiber_hilbert(m, 2 * d);
      const OrbitCenterResult center = orbit_center_fixed_point(action, SupPoint(m, 2 * d), space);
      out.t = point_to_operator(center.point);
      out.approximate = !center.exact;
      out.trace = "fiberwise enclosing-ball center of the orbit of 0 (m=" + std::to_string(m) +
                  ", k=" + std::to_string(2 * d) + ")";
      break;
    }
    case WitnessMethod::Averaging: {
      out.t = Eigen::MatrixXcd::Zero(e.rows(), e.cols());
      for (std::size_t i = 0; i < group.size(); ++i) out.t += e * delta.extended[i] * group.matrices[i].adjoint();
      out.t /= static_cast<double>(group.size());
      out.trace = "barycenter of the orbit of 0 over " + std::to_string(group.size()) + " elements";
      break;
    }
    case WitnessMethod::LeastSquares: {
      out.t = least_squares_witness(group, delta, gammas);
      out.trace = "minimum-norm least squares over " + std::to_string(group.size() * m * d) + " equations";
      break;
    }
  }
  out.residual = witness_residual(group, delta, gammas, out.t);
  out.no_exact_witness = out.residual.model > kNoExactWitnessThreshold;
  return out;
}

Eigen::MatrixXcd similarity_u(const MatrixElement& g, const MatrixElement& delta_g) {
  const Eigen::Index d = g.rows();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  u.topLeftCorner(d, d) = g;
  u.topRightCorner(d, d) = -delta_g;
  u.bottomRightCorner(d, d) = g;
  return u;
}

SimilarityReport build_similarity(const Eigen::MatrixXcd& t, const UnitaryGroup& group, const DerivationData& delta,
                                  const NormingSet& gammas, double tol) {
  const WitnessResidual res = witness_residual(group, delta, gammas, t);
  if (res.model > 1e-8) {
    throw ContractError("build_similarity: witness residual " + std::to_string(res.model) + " exceeds 1e-8");
  }
  const Eigen::MatrixXcd e = gammas.embedding();
  const Eigen::Index m = e.rows();
  const Eigen::Index d = e.cols();
  // E has full column rank because Gamma contains the seeds' orbits.
  const Eigen::MatrixXcd e_plus = (e.adjoint() * e).inverse() * e.adjoint();

  SimilarityReport out;
  out.s = Eigen::MatrixXcd::Zero(2 * m, 2 * d);
  out.s.topLeftCorner(m, d) = e;
  out.s.topRightCorner(m, d) = t;
  out.s.bottomRightCorner(m, d) = e;
  out.s_inv = Eigen::MatrixXcd::Zero(2 * d, 2 * m);
  out.s_inv.topLeftCorner(d, m) = e_plus;
  out.s_inv.topRightCorner(d, m) = -e_plus * t * e_plus;
  out.s_inv.bottomRightCorner(d, m) = e_plus;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(out.s).singularValues();
  out.condition = sv(0) / sv(sv.size() - 1);

  std::vector<Eigen::MatrixXcd> u(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) u[i] = similarity_u(group.matrices[i], delta.extended[i]);

  out.unitality_violation = spectral_norm(u[0] - Eigen::MatrixXcd::Identity(2 * d, 2 * d));
  for (std::size_t g = 0; g < group.size(); ++g) {
    for (std::size_t h = 0; h < group.size(); ++h) {
      const auto gh = static_cast<std::size_t>(group.spec.product[g][h]);
      const double v = spectral_norm(u[gh] - u[g] * u[h]);
      if (v > out.homomorphism_violation) {
        out.homomorphism_violation = v;
        out.homomorphism_pair_first = g;
        out.homomorphism_pair_second = h;
      }
    }
    const Eigen::MatrixXcd p = permutation_matrix(extend_unitary_tilde(group.matrices[g], gammas));
    Eigen::MatrixXcd big_g = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
    big_g.topLeftCorner(m, m) = p;
    big_g.bottomRightCorner(m, m) = p;
    const double inter = spectral_norm(out.s * u[g] - big_g * out.s);
    const double conj = spectral_norm(out.s_inv * big_g * out.s - u[g]);
    if (std::max(inter, conj) > std::max(out.intertwining_violation, out.conjugation_violation)) out.worst_element = g;
    out.intertwining_violation = std::max(out.intertwining_violation, inter);
    out.conjugation_violation = std::max(out.conjugation_violation, conj);
  }
  out.ok = out.homomorphism_violation <= tol && out.intertwining_violation <= tol &&
           out.conjugation_violation <= tol && out.unitality_violation <= tol;
  return out;
}

}  // namespace urns

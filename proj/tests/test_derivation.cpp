#include <doctest.h>

#include "urns/derivation.hpp"
#include "urns/errors.hpp"
#include "urns/instances.hpp"
#include "urns/random.hpp"

using namespace urns;

namespace {

const WitnessMethod kMethods[] = {WitnessMethod::OrbitCenter, WitnessMethod::Averaging, WitnessMethod::LeastSquares};

}  // namespace

TEST_CASE("inner derivation is a commutator") {
  const UnitaryGroup g = quaternion_group();
  StableRng rng(1);
  const MatrixElement t0 = random_complex_matrix(rng, 2, 2);
  const DerivationData d = inner_derivation(g, t0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK((d.extended[i] - (t0 * g.matrices[i] - g.matrices[i] * t0)).norm() < 1e-12);
  }
  CHECK(cocycle_defect(g, d.extended).defect < 1e-12);
}

TEST_CASE("norming set sizes") {
  CHECK(embed_norming_set(symmetric_group_s3()).size() == 3);
  CHECK(embed_norming_set(quaternion_group()).size() == 8);
  CHECK(embed_norming_set(cyclic_rotation_group(4)).size() == 4);
}

TEST_CASE("property: the tilde map is a homomorphism intertwining the embedding") {
  const UnitaryGroup g = quaternion_group();
  const NormingSet gammas = embed_norming_set(g);
  const Eigen::MatrixXcd e = gammas.embedding();
  std::vector<Eigen::MatrixXd> p;
  for (const auto& u : g.matrices) p.push_back(tilde_matrix(extend_unitary_tilde(u, gammas)));
  int pairs = 0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    CHECK((e * g.matrices[a] - p[a].cast<std::complex<double>>() * e).norm() < 1e-12);
    for (std::size_t b = 0; b < g.size(); ++b) {
      const auto ab = static_cast<std::size_t>(g.spec.product[a][b]);
      CHECK((p[ab] - p[a] * p[b]).norm() == 0.0);
      ++pairs;
    }
  }
  CHECK(pairs == 64);
}

TEST_CASE("a set that is not G*-invariant is rejected") {
  const UnitaryGroup g = quaternion_group();
  NormingSet partial;
  partial.gammas.push_back(Eigen::Vector2cd(1, 0));
  CHECK_THROWS_AS(extend_unitary_tilde(g.matrices[g.generator_index(0)], partial), InvarianceViolationError);
}

TEST_CASE("embedded inner derivation: T = E T0 is an exact witness") {
  StableRng rng(2);
  for (const char* name : {"Q8", "S3", "C12"}) {
    const UnitaryGroup g = named_unitary_group(name);
    const NormingSet gammas = embed_norming_set(g);
    const MatrixElement t0 = random_complex_matrix(rng, g.dim(), g.dim());
    const DerivationData d = inner_derivation(g, t0);
    CHECK(witness_residual(g, d, gammas, gammas.embedding() * t0).model < 1e-12);
  }
}

TEST_CASE("all three methods give witnesses on random inner derivations") {
  StableRng rng(3);
  for (const char* name : {"Q8", "S3", "C12", "C4"}) {
    const UnitaryGroup g = named_unitary_group(name);
    const NormingSet gammas = embed_norming_set(g);
    for (int trial = 0; trial < 5; ++trial) {
      const DerivationData d = extend_cocycle(g, random_inner_values(g, rng));
      for (auto m : kMethods) {
        const WitnessReport w = solve_witness(g, d, gammas, m);
        CHECK(w.residual.model <= 1e-8);
        CHECK(w.residual.op2 <= 1e-8);
        CHECK_FALSE(w.no_exact_witness);
      }
    }
  }
}

TEST_CASE("orbit-center witness is a fixed point of the affine action") {
  StableRng rng(4);
  const UnitaryGroup g = quaternion_group();
  const NormingSet gammas = embed_norming_set(g);
  const DerivationData d = extend_cocycle(g, random_inner_values(g, rng));
  const GroupSpec action = build_affine_action(g, d, gammas);
  CHECK(action.size() == g.size());
  const WitnessReport w = solve_witness(g, d, gammas, WitnessMethod::OrbitCenter);
  const SupPoint x = operator_to_point(w.t);
  for (const auto& a : action.elements) CHECK(sup_distance(a(x), x) < 1e-10);
}

TEST_CASE("least-squares witness is linear in the derivation") {
  StableRng rng(5);
  const UnitaryGroup g = symmetric_group_s3();
  const NormingSet gammas = embed_norming_set(g);
  std::vector<DerivationData> ds;
  std::vector<Eigen::MatrixXcd> ts;
  for (int i = 0; i < 4; ++i) {
    ds.push_back(extend_cocycle(g, random_inner_values(g, rng)));
    ts.push_back(solve_witness(g, ds.back(), gammas, WitnessMethod::LeastSquares).t);
  }
  const std::complex<double> coef[] = {{1, 0}, {-2, 0.5}, {0, 3}, {0.25, -1}};
  std::map<std::string, MatrixElement> values;
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(ts[0].rows(), ts[0].cols());
  for (int i = 0; i < 4; ++i) {
    for (const auto& [label, v] : ds[static_cast<std::size_t>(i)].values) {
      auto [it, fresh] = values.try_emplace(label, MatrixElement::Zero(v.rows(), v.cols()));
      it->second += coef[i] * v;
    }
    expected += coef[i] * ts[static_cast<std::size_t>(i)];
  }
  const DerivationData combo = extend_cocycle(g, values);
  const WitnessReport w = solve_witness(g, combo, gammas, WitnessMethod::LeastSquares);
  CHECK(w.residual.model < 1e-10);
  CHECK((w.t - expected).norm() < 1e-9);
}

TEST_CASE("corrupted data: cocycle check names a pair and least squares flags it") {
  StableRng rng(6);
  const UnitaryGroup g = quaternion_group();
  auto values = random_inner_values(g, rng);
  corrupt_value(values, "i", 0, 0, 1e-2);
  try {
    extend_cocycle(g, values);
    FAIL("expected a cocycle inconsistency");
  } catch (const CocycleInconsistencyError& e) {
    CHECK(e.defect() > 1e-3);
    CHECK_FALSE(e.first().empty());
  }
  const NormingSet gammas = embed_norming_set(g);
  const DerivationData d = extend_cocycle_unchecked(g, values);
  const WitnessReport ls = solve_witness(g, d, gammas, WitnessMethod::LeastSquares);
  CHECK(ls.no_exact_witness);
  CHECK(solve_witness(g, d, gammas, WitnessMethod::OrbitCenter).residual.model > 1e-6);
}

TEST_CASE("similarity on C4") {
  StableRng rng(7);
  const UnitaryGroup g = cyclic_rotation_group(4);
  const NormingSet gammas = embed_norming_set(g);
  const DerivationData d = extend_cocycle(g, random_inner_values(g, rng));
  const WitnessReport w = solve_witness(g, d, gammas, WitnessMethod::OrbitCenter);
  const SimilarityReport s = build_similarity(w.t, g, d, gammas);
  CHECK(s.ok);
  CHECK(s.homomorphism_violation <= 1e-9);
  CHECK(s.intertwining_violation <= 1e-9);
  CHECK(s.conjugation_violation <= 1e-9);
  CHECK(s.unitality_violation <= 1e-9);
  CHECK(s.condition >= 1.0);
  // S^{-1} S is the identity on C^{2d}.
  CHECK((s.s_inv * s.s - Eigen::MatrixXcd::Identity(2 * g.dim(), 2 * g.dim())).norm() < 1e-10);
}

TEST_CASE("similarity refuses a non-witness") {
  StableRng rng(8);
  const UnitaryGroup g = cyclic_rotation_group(4);
  const NormingSet gammas = embed_norming_set(g);
  const DerivationData d = extend_cocycle(g, random_inner_values(g, rng));
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(gammas.size()), g.dim());
  CHECK_THROWS_AS(build_similarity(zero, g, d, gammas), ContractError);
}

TEST_CASE("realify and complexify round trip") {
  StableRng rng(9);
  const MatrixElement a = random_complex_matrix(rng, 3, 3);
  CHECK((complexify(realify(a)) - a).norm() == 0.0);
  const MatrixElement u = random_unitary(rng, 4);
  CHECK(is_unitary(u));
}

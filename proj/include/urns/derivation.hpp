#pragma once

// Finite-model witnesses for derivations delta of a finite unitary group
// G in U(d) with values in B(C^d):
//
//   H = C^d embeds in l_inf(Gamma) by h -> (<h, gamma>)_gamma for a finite
//   G*-invariant set Gamma of unit vectors; each g extends to the index
//   permutation g~ : (z_gamma) -> (z_{g* gamma}); operators T : H -> l_inf(Gamma)
//   are m x d matrices, normed as l_inf(Gamma, C^d) row by row.
//
// A witness is T with E delta(g) = T g - g~ T for every g in G (E the
// embedding matrix). Equivalently T is a fixed point of the affine isometric
// action alpha(g) X = g~ X g^{-1} + E delta(g) g^{-1}.
//
// Matrix derivations go through this embedding only. Operator-norm B(H)
// need not have uniform relative normal structure, so no witness is sought
// directly in B(H).

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "urns/isometry.hpp"
#include "urns/unitary.hpp"

namespace urns {

struct DerivationData {
  std::map<std::string, MatrixElement> values;  // on generators, by label
  std::vector<MatrixElement> extended;          // indexed like the group elements
};

struct CocycleDefect {
  double defect = 0.0;  // max || delta(gh) - delta(g) h - g delta(h) ||_2
  std::size_t first = 0;
  std::size_t second = 0;
};

/// delta extended along the recorded word of each element, with no
/// consistency check.
DerivationData extend_cocycle_unchecked(const UnitaryGroup& group, std::map<std::string, MatrixElement> values);

CocycleDefect cocycle_defect(const UnitaryGroup& group, const std::vector<MatrixElement>& extended);

/// Extends and checks the derivation law on all |G|^2 pairs. Throws
/// CocycleInconsistencyError naming the worst pair if the defect exceeds tol.
DerivationData extend_cocycle(const UnitaryGroup& group, std::map<std::string, MatrixElement> values,
                              double tol = 1e-8);

/// delta(g) = T0 g - g T0 given on generators and extended.
DerivationData inner_derivation(const UnitaryGroup& group, const MatrixElement& t0);

struct NormingSet {
  std::vector<Eigen::VectorXcd> gammas;

  std::size_t size() const noexcept { return gammas.size(); }
  /// m x d matrix with rows gamma_i^*, so (E h)_i = <h, gamma_i>.
  Eigen::MatrixXcd embedding() const;
};

/// Union of the G*-orbits of the seeds (default: standard basis of C^d),
/// deduplicated within 1e-10.
NormingSet embed_norming_set(const UnitaryGroup& group, std::vector<Eigen::VectorXcd> seeds = {});

/// pi with gamma_{pi(i)} = g* gamma_i. Throws InvarianceViolationError if some
/// g* gamma_i is not in Gamma.
std::vector<int> extend_unitary_tilde(const MatrixElement& g, const NormingSet& gammas, double tol = 1e-10);

/// Permutation matrix P with (P z)_i = z_{pi(i)}.
Eigen::MatrixXd tilde_matrix(const std::vector<int>& pi);

/// The action alpha on l_inf(Gamma, R^{2d}) ~ B(H, l_inf(Gamma)), one
/// isometry per element of G (same indexing, words and product table).
/// With verify = true, throws ContractError if alpha(gh) != alpha(g) alpha(h)
/// beyond 1e-10 (only possible for inconsistent derivation data).
GroupSpec build_affine_action(const UnitaryGroup& group, const DerivationData& delta, const NormingSet& gammas,
                              bool verify = true);

enum class WitnessMethod { OrbitCenter, Averaging, LeastSquares };

std::string to_string(WitnessMethod method);
WitnessMethod witness_method_from_string(const std::string& name);

struct WitnessResidual {
  double model = 0.0;  // max_g of max_gamma row norm of E delta(g) - (T g - g~ T)
  double op2 = 0.0;    // max_g of the spectral norm of the same matrix
  std::vector<double> per_generator;  // model norm, one per generator
  std::size_t worst_element = 0;
};

WitnessResidual witness_residual(const UnitaryGroup& group, const DerivationData& delta, const NormingSet& gammas,
                                 const Eigen::MatrixXcd& t);

struct WitnessReport {
  Eigen::MatrixXcd t;  // |Gamma| x d
  WitnessResidual residual;
  WitnessMethod method = WitnessMethod::OrbitCenter;
  bool no_exact_witness = false;  // least-squares residual above the flag threshold
  bool approximate = false;       // an enclosing-ball fiber used the descent fallback
  std::string trace;              // free-form provenance of the computation
};

inline constexpr double kNoExactWitnessThreshold = 1e-6;

/// Witness by one of three independent routes:
///  * OrbitCenter: fiberwise enclosing-ball center of the alpha-orbit of 0;
///  * Averaging: barycenter (1/|G|) sum_g E delta(g) g^{-1} of that orbit;
///  * LeastSquares: minimum-norm solution of the stacked linear system
///    T g - g~ T = E delta(g) over all g.
WitnessReport solve_witness(const UnitaryGroup& group, const DerivationData& delta, const NormingSet& gammas,
                            WitnessMethod method);

struct SimilarityReport {
  Eigen::MatrixXcd s;      // [[E, T], [0, E]] : C^{2d} -> C^{2m}
  Eigen::MatrixXcd s_inv;  // [[E+, -E+ T E+], [0, E+]], inverse of S on its range
  double condition = 0.0;  // sigma_max / sigma_min of S
  double homomorphism_violation = 0.0;  // max ||u(gh) - u(g) u(h)||_2
  std::size_t homomorphism_pair_first = 0;
  std::size_t homomorphism_pair_second = 0;
  double intertwining_violation = 0.0;  // max ||S u(g) - G~ S||_2
  double conjugation_violation = 0.0;   // max ||S^{-1} G~ S - u(g)||_2
  std::size_t worst_element = 0;
  double unitality_violation = 0.0;  // ||u(e) - I||_2
  bool ok = false;
};

/// u(g) = [[g, -delta(g)], [0, g]] on H (+)_2 H.
Eigen::MatrixXcd similarity_u(const MatrixElement& g, const MatrixElement& delta_g);

/// Requires witness residual <= 1e-8 (ContractError otherwise); `ok` reports
/// whether every identity held within tol.
SimilarityReport build_similarity(const Eigen::MatrixXcd& t, const UnitaryGroup& group, const DerivationData& delta,
                                  const NormingSet& gammas, double tol = 1e-9);

}  // namespace urns

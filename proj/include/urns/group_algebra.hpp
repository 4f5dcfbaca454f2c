#pragma once

// Finite-group analog of inner derivations l1(G) -> l_inf(G).
//
// For a finite group G, l_inf(G) is the dual bimodule of the convolution
// algebra l1(G); point masses act by
//   (delta_g . x)(s) = x(s g),    (x . delta_g)(s) = x(g s).
// A derivation is determined by D(g) = delta~(delta_g) in l_inf(G) with
//   D(gh)(s) = D(g)(h s) + D(h)(s g),
// and is inner with witness t when D(g)(s) = t(g s) - t(s g). Witnesses are
// fixed points of the affine isometric action
//   (alpha(g) x)(s) = x(g^{-1} s g) + D(g)(g^{-1} s).

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "urns/isometry.hpp"

namespace urns {

/// Permutation group on {0..degree-1}. Elements are sorted lexicographically
/// by their image lists; this ordering indexes the coordinates of l_inf(G).
/// Product convention: (a b)(i) = a(b(i)).
struct FiniteGroup {
  std::vector<std::vector<int>> elements;
  std::vector<std::vector<int>> product;  // product[a][b] = index of a b
  std::vector<int> inverse;
  std::size_t identity = 0;
  std::vector<std::size_t> generators;   // element indices of the generators
  std::vector<std::vector<int>> words;   // generator words, BFS order
  std::vector<std::size_t> bfs_order;    // element indices in BFS order

  std::size_t size() const noexcept { return elements.size(); }
  std::size_t index_of(const std::vector<int>& perm) const;
};

/// Throws StructuralError for non-permutations and GroupNotFiniteError above max_size.
FiniteGroup permutation_group(const std::vector<std::vector<int>>& generators, std::size_t max_size = 5040);
FiniteGroup cyclic_group(int n);
FiniteGroup symmetric_group(int n);

enum class Scalars { Real, Complex };

/// D(g) for every element, one column per element: |G| x |G| complex matrix,
/// column g = D(g) as a function on G.
using GroupCocycle = Eigen::MatrixXcd;

/// D(g)(s) = t(g s) - t(s g).
GroupCocycle inner_group_cocycle(const FiniteGroup& group, const Eigen::VectorXcd& t);

/// Extends values on generators (one column per generator) along words.
GroupCocycle extend_group_cocycle_unchecked(const FiniteGroup& group, const Eigen::MatrixXcd& generator_values);

/// Worst violation of D(gh)(s) = D(g)(h s) + D(h)(s g); fills the offending pair.
double group_cocycle_defect(const FiniteGroup& group, const GroupCocycle& cocycle, std::size_t* first = nullptr,
                            std::size_t* second = nullptr);

/// The action alpha as isometries of l_inf(G) (k = 1 real, k = 2 complex),
/// indexed like the group elements.
GroupSpec group_algebra_action(const FiniteGroup& group, const GroupCocycle& cocycle, Scalars scalars);

enum class GroupAlgebraMethod { OrbitCenter, Averaging };

struct GroupAlgebraWitness {
  Eigen::VectorXcd t;
  double residual = 0.0;  // max_{g,s} |D(g)(s) - (t(g s) - t(s g))|
  GroupAlgebraMethod method = GroupAlgebraMethod::OrbitCenter;
};

double group_algebra_residual(const FiniteGroup& group, const GroupCocycle& cocycle, const Eigen::VectorXcd& t);

/// Checks the cocycle law (CocycleInconsistencyError above tol), then
/// computes a witness as a fixed point of alpha: the midpoint center in the
/// real box model (c = 1/2) or the fiberwise enclosing-ball center in the
/// complex model (c = sqrt(3)/2); Averaging takes the barycenter of the
/// orbit of 0 instead.
GroupAlgebraWitness finite_group_algebra_witness(const FiniteGroup& group, const GroupCocycle& cocycle,
                                                 Scalars scalars,
                                                 GroupAlgebraMethod method = GroupAlgebraMethod::OrbitCenter,
                                                 double tol = 1e-8);

std::string element_label(const FiniteGroup& group, std::size_t element);

}  // namespace urns

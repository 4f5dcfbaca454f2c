#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace urns {

/// Reproducible random source: raw 64-bit words from std::mt19937_64
/// (fully specified by the standard), converted by fixed formulas:
///   uniform()  = (word >> 11) * 2^-53
///   index(n)   = min(floor(uniform() * n), n - 1)
///   normal()   = Box-Muller cosine branch, sqrt(-2 ln(1 - u1)) cos(2 pi u2)
/// std:: distributions are avoided because their output is
/// implementation-defined.
class StableRng {
 public:
  explicit StableRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_word() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n);
  double normal();
  std::complex<double> complex_normal() { return {normal(), normal()}; }

  /// Fisher-Yates driven by index().
  std::vector<int> permutation(int n);

  /// Derive an independent stream for sub-instance i.
  StableRng fork(std::uint64_t i);

 private:
  std::mt19937_64 engine_;
};

Eigen::MatrixXcd random_complex_matrix(StableRng& rng, int rows, int cols);

/// Haar-like unitary from the QR factor of a complex Gaussian matrix.
Eigen::MatrixXcd random_unitary(StableRng& rng, int d);

}  // namespace urns

#include "urns/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "urns/errors.hpp"
#include "urns/sampling.hpp"

namespace urns {

double StableRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t StableRng::index(std::size_t n) {
  if (n == 0) throw DomainError("StableRng::index: empty range");
  const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return std::min(i, n - 1);
}

double StableRng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<int> StableRng::permutation(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    std::swap(p[static_cast<std::size_t>(i)], p[index(static_cast<std::size_t>(i) + 1)]);
  }
  return p;
}

StableRng StableRng::fork(std::uint64_t i) {
  // splitmix64 of (word, i) seeds the child stream.
  std::uint64_t z = next_word() + 0x9E3779B97F4A7C15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return StableRng(z ^ (z >> 31));
}

Eigen::MatrixXcd random_complex_matrix(StableRng& rng, int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  }
  return m;
}

Eigen::MatrixXcd random_unitary(StableRng& rng, int d) {
  const Eigen::MatrixXcd z = random_complex_matrix(rng, d, d);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(d, d);
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const std::complex<double> diag = r(j, j);
    if (std::abs(diag) > 0.0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

std::vector<SupPoint> sample_hypothesis_centers(const PointCloud& cloud, const SupPoint& z, double radius,
                                                std::size_t count, StableRng& rng) {
  if (cloud.empty()) throw DomainError("sample_hypothesis_centers: empty cloud");
  const std::size_t m = z.index_count();
  const std::size_t k = z.fiber_dim();
  std::vector<SupPoint> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    SupPoint y = z;
    for (std::size_t g = 0; g < m; ++g) {
      FiberPoint u(static_cast<Eigen::Index>(k));
      for (auto& v : u) v = rng.normal();
      if (u.norm() == 0.0) continue;
      u.normalize();
      // |x - z - t u|^2 <= r^2  <=>  t^2 - 2 t <u, x - z> + |x - z|^2 - r^2 <= 0
      double t_max = std::numeric_limits<double>::infinity();
      const FiberPoint zg = z.fiber(g);
      for (const auto& x : cloud) {
        const FiberPoint w = x.fiber(g) - zg;
        const double b = u.dot(w);
        const double c = w.squaredNorm() - radius * radius;
        const double disc = std::max(b * b - c, 0.0);
        t_max = std::min(t_max, b + std::sqrt(disc));
      }
      t_max = std::max(t_max, 0.0);
      y.set_fiber(g, zg + rng.uniform() * t_max * u);
    }
    out.push_back(std::move(y));
  }
  return out;
}

PointCloud random_cloud(StableRng& rng, std::size_t points, std::size_t m, std::size_t k, double lo, double hi) {
  PointCloud cloud;
  cloud.reserve(points);
  for (std::size_t p = 0; p < points; ++p) {
    SupPoint x(m, k);
    for (std::size_t g = 0; g < m; ++g) {
      for (std::size_t j = 0; j < k; ++j) x(g, j) = rng.uniform(lo, hi);
    }
    cloud.push_back(std::move(x));
  }
  return cloud;
}

}  // namespace urns

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "urns/errors.hpp"
#include "urns/geometry.hpp"
#include "urns/random.hpp"
#include "urns/sampling.hpp"
#include "urns/seb.hpp"

using namespace urns;

TEST_CASE("sup distance takes the worst fiber") {
  SupPoint x(2, 2);
  SupPoint y(2, 2);
  y.set_fiber(0, Eigen::Vector2d(3, 4));
  y.set_fiber(1, Eigen::Vector2d(1, 0));
  CHECK(sup_distance(x, y) == doctest::Approx(5.0));
  CHECK(y.norm() == doctest::Approx(5.0));
}

TEST_CASE("box rejects inverted bounds") {
  CHECK_THROWS_AS(Box(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)), StructuralError);
}

TEST_CASE("box_A and box_H agree with a grid oracle on dyadic intervals") {
  // Grid step 1/64 contains every endpoint below exactly.
  const double step = 1.0 / 64;
  for (double lo : {-1.0, -0.5, 0.25}) {
    for (double width : {0.0, 0.5, 1.0, 1.5}) {
      const double hi = lo + width;
      const Box b(Eigen::VectorXd::Constant(1, lo), Eigen::VectorXd::Constant(1, hi));
      const double r = 0.5 * width;
      const auto [first, last] = oracle::interval_ball_intersection(lo, hi, r, step);
      const Box a = box_A(b, 0.5);
      CHECK(a.lo()(0) == doctest::Approx(first));
      CHECK(a.hi()(0) == doctest::Approx(last));
      const Box h = box_H(b, 0.5);
      CHECK(h.lo()(0) == doctest::Approx(std::max(first, lo)));
      CHECK(h.hi()(0) == doctest::Approx(std::min(last, hi)));
    }
  }
}

TEST_CASE("box_H halves the diameter and stays inside") {
  StableRng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(8);
    Eigen::VectorXd lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
      lo(static_cast<Eigen::Index>(i)) = std::min(a, b);
      hi(static_cast<Eigen::Index>(i)) = std::max(a, b);
    }
    const Box b(lo, hi);
    const Box h = box_H(b, 0.5);
    CHECK(h.diameter() <= 0.5 * b.diameter());
    CHECK((h.lo().array() >= b.lo().array()).all());
    CHECK((h.hi().array() <= b.hi().array()).all());
    CHECK(h.contains(box_center(b).matrix().col(0)));
  }
}

TEST_CASE("enclosing ball: simple configurations") {
  const auto two = seb_center({Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 0)});
  CHECK(two.center.isApprox(Eigen::Vector2d(1, 0)));
  CHECK(two.radius == doctest::Approx(1.0));

  // Obtuse triangle: ball spanned by the long side only.
  const auto obtuse = seb_center({Eigen::Vector2d(-1, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 0.2)});
  CHECK(obtuse.center.isApprox(Eigen::Vector2d(0, 0)));
  CHECK(obtuse.radius == doctest::Approx(1.0));

  const double s = std::sqrt(3.0);
  const auto eq = seb_center({Eigen::Vector2d(1, 0), Eigen::Vector2d(-0.5, s / 2), Eigen::Vector2d(-0.5, -s / 2)});
  CHECK(eq.center.norm() < 1e-12);
  CHECK(eq.radius == doctest::Approx(1.0));

  const auto single = seb_center({Eigen::Vector3d(1, 2, 3)});
  CHECK(single.radius == 0.0);
  CHECK_THROWS_AS(seb_center({}), DomainError);
}

TEST_CASE("enclosing ball matches brute force over subsets") {
  StableRng rng(42);
  for (int trial = 0; trial < 150; ++trial) {
    const int dim = 1 + static_cast<int>(rng.index(5));
    const std::size_t n = 1 + rng.index(8);
    std::vector<Eigen::VectorXd> pts;
    for (std::size_t i = 0; i < n; ++i) {
      Eigen::VectorXd p(dim);
      for (int j = 0; j < dim; ++j) p(j) = rng.normal();
      pts.push_back(p);
    }
    const auto got = seb_center(pts);
    const auto want = oracle::enclosing_ball(pts);
    CHECK(got.exact);
    CHECK(got.radius == doctest::Approx(want.radius).epsilon(1e-9));
    CHECK((got.center - want.center).norm() < 1e-7);
  }
}

TEST_CASE("enclosing ball with duplicates and cospherical points") {
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 12; ++i) {
    const double t = 2 * M_PI * i / 12;
    pts.push_back(Eigen::Vector3d(std::cos(t), std::sin(t), 0));
    pts.push_back(Eigen::Vector3d(std::cos(t), std::sin(t), 0));
  }
  const auto r = seb_center(pts);
  CHECK(r.center.norm() < 1e-12);
  CHECK(r.radius == doctest::Approx(1.0));
}

TEST_CASE("urns center in the box space is the bounding-box midpoint") {
  const PointCloud cloud{SupPoint::from_coords(std::vector<double>{0, 1}), SupPoint::from_coords(std::vector<double>{2, -1}),
                         SupPoint::from_coords(std::vector<double>{1, 3})};
  const SupPoint z = urns_center(cloud, SpaceDescriptor::box_real(2));
  CHECK(z(0, 0) == 1.0);
  CHECK(z(1, 0) == 1.0);
  CHECK(cloud_diameter(cloud) == doctest::Approx(4.0));
}

TEST_CASE("urns constants") {
  CHECK(SpaceDescriptor::box_real(3).urns_constant == 0.5);
  CHECK(SpaceDescriptor::fiber_hilbert(3, 2).urns_constant == doctest::Approx(std::sqrt(3.0) / 2));
}

TEST_CASE("property: fiberwise center satisfies the certificate") {
  StableRng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.index(6);
    const std::size_t k = 1 + rng.index(4);
    const PointCloud cloud = random_cloud(rng, 2 + rng.index(10), m, k, -1, 1);
    const auto space = SpaceDescriptor::fiber_hilbert(m, k);
    const SupPoint z = urns_center(cloud, space);
    const double diam = cloud_diameter(cloud);
    for (const auto& x : cloud) CHECK(sup_distance(x, z) <= space.urns_constant * diam + 1e-12);
    const auto ys = sample_hypothesis_centers(cloud, z, space.urns_constant * diam, 20, rng);
    for (const auto& y : ys) {
      for (const auto& x : cloud) CHECK(sup_distance(x, y) <= space.urns_constant * diam + 1e-12);
    }
    CHECK(verify_urns_certificate(cloud, z, space.urns_constant, ys));
  }
}

TEST_CASE("certificate rejects a far-off center") {
  const PointCloud cloud{SupPoint::from_coords(std::vector<double>{0}), SupPoint::from_coords(std::vector<double>{1})};
  CHECK_FALSE(verify_urns_certificate(cloud, SupPoint::from_coords(std::vector<double>{5}), 0.5, {}));
}

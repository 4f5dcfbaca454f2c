#include "urns/unitary.hpp"

#include <cmath>
#include <numbers>

#include "urns/errors.hpp"

namespace urns {

Eigen::MatrixXd realify(const MatrixElement& a) {
  const Eigen::Index r = a.rows();
  const Eigen::Index c = a.cols();
  Eigen::MatrixXd out(2 * r, 2 * c);
  out.topLeftCorner(r, c) = a.real();
  out.topRightCorner(r, c) = -a.imag();
  out.bottomLeftCorner(r, c) = a.imag();
  out.bottomRightCorner(r, c) = a.real();
  return out;
}

MatrixElement complexify(const Eigen::MatrixXd& m) {
  const Eigen::Index r = m.rows() / 2;
  const Eigen::Index c = m.cols() / 2;
  MatrixElement out(r, c);
  out.real() = m.topLeftCorner(r, c);
  out.imag() = m.bottomLeftCorner(r, c);
  return out;
}

Eigen::VectorXd realify_row(const Eigen::RowVectorXcd& row) {
  Eigen::VectorXd v(2 * row.size());
  v.head(row.size()) = row.real().transpose();
  v.tail(row.size()) = row.imag().transpose();
  return v;
}

Eigen::RowVectorXcd complexify_row(const Eigen::VectorXd& fiber) {
  const Eigen::Index d = fiber.size() / 2;
  Eigen::RowVectorXcd row(d);
  row.real() = fiber.head(d).transpose();
  row.imag() = fiber.tail(d).transpose();
  return row;
}

SupPoint operator_to_point(const Eigen::MatrixXcd& t) {
  Eigen::MatrixXd data(t.rows(), 2 * t.cols());
  data.leftCols(t.cols()) = t.real();
  data.rightCols(t.cols()) = t.imag();
  return SupPoint(std::move(data));
}

Eigen::MatrixXcd point_to_operator(const SupPoint& x) {
  if (x.fiber_dim() % 2 != 0) throw StructuralError("operator point needs even fiber dimension");
  const auto d = static_cast<Eigen::Index>(x.fiber_dim() / 2);
  Eigen::MatrixXcd t(x.matrix().rows(), d);
  t.real() = x.matrix().leftCols(d);
  t.imag() = x.matrix().rightCols(d);
  return t;
}

bool is_unitary(const MatrixElement& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - MatrixElement::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

std::size_t UnitaryGroup::generator_index(std::size_t s) const {
  for (std::size_t i = 0; i < spec.words.size(); ++i) {
    if (spec.words[i].size() == 1 && static_cast<std::size_t>(spec.words[i][0]) == s) return i;
  }
  // generator equal to the identity or to an earlier generator
  const int idx = spec.find(spec.generators.at(s));
  if (idx < 0) throw ContractError("generator missing from its own closure");
  return static_cast<std::size_t>(idx);
}

UnitaryGroup unitary_group(const std::vector<MatrixElement>& generators, std::vector<std::string> labels,
                           std::size_t max_size) {
  if (generators.empty()) throw StructuralError("unitary_group: no generators");
  const Eigen::Index d = generators.front().rows();
  std::vector<FiberPermIsometry> isos;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const auto& g = generators[i];
    if (g.rows() != d || g.cols() != d) throw StructuralError("unitary_group: generators of different size");
    if (!is_unitary(g)) throw StructuralError("unitary_group: generator " + std::to_string(i) + " is not unitary");
    isos.emplace_back(std::vector<int>{0}, std::vector<Eigen::MatrixXd>{realify(g)},
                      SupPoint(1, static_cast<std::size_t>(2 * d)));
  }
  UnitaryGroup out;
  out.spec = group_closure(isos, max_size, 1e-10, std::move(labels));
  out.matrices.reserve(out.spec.size());
  for (const auto& e : out.spec.elements) out.matrices.push_back(complexify(e.fiber_maps().front()));
  return out;
}

UnitaryGroup quaternion_group() {
  using C = std::complex<double>;
  MatrixElement i(2, 2), j(2, 2);
  i << C(0, 1), 0, 0, C(0, -1);
  j << 0, 1, -1, 0;
  return unitary_group({i, j}, {"i", "j"});
}

UnitaryGroup symmetric_group_s3() {
  MatrixElement swap = MatrixElement::Zero(3, 3);
  swap(0, 1) = swap(1, 0) = swap(2, 2) = 1.0;
  MatrixElement cycle = MatrixElement::Zero(3, 3);
  cycle(1, 0) = cycle(2, 1) = cycle(0, 2) = 1.0;
  return unitary_group({swap, cycle}, {"s", "r"});
}

UnitaryGroup cyclic_rotation_group(int n) {
  if (n < 1) throw DomainError("cyclic_rotation_group: order must be positive");
  const double a = 2.0 * std::numbers::pi / n;
  MatrixElement r(2, 2);
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return unitary_group({r}, {"r"});
}

}  // namespace urns

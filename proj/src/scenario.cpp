#include "urns/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include "urns/derivation.hpp"
#include "urns/errors.hpp"
#include "urns/fixed_point.hpp"
#include "urns/group_algebra.hpp"
#include "urns/instances.hpp"
#include "urns/random.hpp"
#include "urns/sampling.hpp"
#include "urns/seb.hpp"

namespace urns::cli {

using nlohmann::json;

namespace {

class SchemaError : public Error {
 public:
  using Error::Error;
};

constexpr double kGeometryTol = 1e-10;
constexpr double kAlgebraTol = 1e-8;

// ---------------------------------------------------------------- parsing

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw SchemaError(what + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw SchemaError(what + " must be finite");
  return x;
}

long long integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw SchemaError(what + " must be an integer");
  return v.get<long long>();
}

std::size_t positive(const json& v, const std::string& what) {
  const long long x = integer(v, what);
  if (x < 1) throw SchemaError(what + " must be positive");
  return static_cast<std::size_t>(x);
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string("field '") + key + "' has the wrong type");
  }
}

std::vector<double> numbers(const json& v, const std::string& what) {
  if (!v.is_array()) throw SchemaError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, what));
  return out;
}

std::vector<int> ints(const json& v, const std::string& what) {
  if (!v.is_array()) throw SchemaError(what + " must be an array of integers");
  std::vector<int> out;
  for (const auto& x : v) out.push_back(static_cast<int>(integer(x, what)));
  return out;
}

std::complex<double> complex_value(const json& v, const std::string& what) {
  if (v.is_number()) return {number(v, what), 0.0};
  if (v.is_array() && v.size() == 2) return {number(v[0], what), number(v[1], what)};
  throw SchemaError(what + " entries must be numbers or [re, im] pairs");
}

// Row-major list of d*d [re, im] pairs, or a list of d rows.
Eigen::MatrixXcd complex_matrix(const json& v, int d, const std::string& what) {
  if (!v.is_array()) throw SchemaError(what + " must be an array");
  Eigen::MatrixXcd out(d, d);
  const auto dd = static_cast<std::size_t>(d);
  if (v.size() == dd * dd && (v.empty() || v[0].is_number() || (v[0].is_array() && v[0].size() == 2 && v[0][0].is_number()))) {
    for (std::size_t i = 0; i < dd * dd; ++i) out(static_cast<Eigen::Index>(i / dd), static_cast<Eigen::Index>(i % dd)) = complex_value(v[i], what);
    return out;
  }
  if (v.size() != dd) throw SchemaError(what + " must have " + std::to_string(dd * dd) + " entries");
  for (std::size_t r = 0; r < dd; ++r) {
    if (!v[r].is_array() || v[r].size() != dd) throw SchemaError(what + " row has wrong length");
    for (std::size_t c = 0; c < dd; ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_value(v[r][c], what);
  }
  return out;
}

Eigen::VectorXcd complex_vector(const json& v, const std::string& what) {
  if (!v.is_array()) throw SchemaError(what + " must be an array");
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = complex_value(v[i], what);
  return out;
}

Eigen::MatrixXd real_matrix(const json& v, std::size_t rows, std::size_t cols, const std::string& what) {
  if (!v.is_array()) throw SchemaError(what + " must be an array");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  if (v.size() == rows * cols && (v.empty() || v[0].is_number())) {
    for (std::size_t i = 0; i < rows * cols; ++i) out(static_cast<Eigen::Index>(i / cols), static_cast<Eigen::Index>(i % cols)) = number(v[i], what);
    return out;
  }
  if (v.size() != rows) throw SchemaError(what + " must have " + std::to_string(rows) + " rows");
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = numbers(v[r], what);
    if (row.size() != cols) throw SchemaError(what + " row has wrong length");
    for (std::size_t c = 0; c < cols; ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  }
  return out;
}

// A point of l_inf(Gamma, R^k): numbers for k = 1, else a list of m fibers.
SupPoint sup_point(const json& v, std::size_t m, std::size_t k, const std::string& what) {
  if (k == 1 && v.is_array() && (v.empty() || v[0].is_number())) {
    const auto xs = numbers(v, what);
    if (xs.size() != m) throw SchemaError(what + " must have " + std::to_string(m) + " coordinates");
    return SupPoint::from_coords(xs);
  }
  return SupPoint(real_matrix(v, m, k, what));
}

// ---------------------------------------------------------------- output

json to_json(const SupPoint& x) {
  if (x.fiber_dim() == 1) {
    json out = json::array();
    for (std::size_t i = 0; i < x.index_count(); ++i) out.push_back(x(i, 0));
    return out;
  }
  json out = json::array();
  for (std::size_t g = 0; g < x.index_count(); ++g) {
    json row = json::array();
    for (std::size_t j = 0; j < x.fiber_dim(); ++j) row.push_back(x(g, j));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const Eigen::MatrixXcd& a) {
  json out = json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.push_back({a(r, c).real(), a(r, c).imag()});
  }
  return out;
}

json to_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

struct Outcome {
  json result;
  int exit_code = kOk;
  std::string message;
  std::vector<std::string> warnings;
};

std::uint64_t seed_of(const json& s) { return get_or<std::uint64_t>(s, "seed", 0); }

// ---------------------------------------------------------------- box

bool exact_contraction(const IterationTrace& trace, double* worst_ratio) {
  bool ok = true;
  for (std::size_t i = 1; i < trace.steps.size(); ++i) {
    const double prev = trace.steps[i - 1].diameter;
    const double cur = trace.steps[i].diameter;
    if (cur > 0.5 * prev) ok = false;
    if (prev > 0.0) *worst_ratio = std::max(*worst_ratio, cur / prev);
  }
  return ok;
}

bool invariant_boxes(const GroupSpec& group, const IterationTrace& trace) {
  for (const auto& step : trace.steps) {
    for (const auto& g : group.elements) {
      if (!(g.apply(step.admissible) == step.admissible)) return false;
    }
  }
  return true;
}

void write_trace(const IterationTrace& trace, const RunOptions& options, const std::string& stem, Outcome& out) {
  if (!options.trace_dir) return;
  std::filesystem::create_directories(*options.trace_dir);
  const auto path = *options.trace_dir / (stem + ".trace.csv");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write trace file " + path.string());
  trace.write_csv(os);
  out.result["trace_file"] = path.filename().string();
}

Outcome run_box_random(const json& s, double tol, int max_iter) {
  const auto& spec = s.at("random");
  const std::size_t n = positive(require(s, "n"), "n");
  const std::size_t instances = positive(require(spec, "instances"), "random.instances");
  const std::size_t max_order = get_or<std::size_t>(spec, "max_order", 48);
  const double residual_tol = get_or<double>(s, "residual_tol", std::max(2.0 * tol, 1e-9));
  const bool with_orbit_center = get_or<std::string>(s, "method", "iterate_box") != "iterate_box";

  StableRng rng(seed_of(s));
  Outcome out;
  std::size_t min_order = max_order, max_seen = 0;
  int max_steps = 0;
  double max_residual = 0.0, max_center_residual = 0.0, worst_ratio = 0.0;
  bool contraction = true, invariance = true, converged = true;
  for (std::size_t i = 0; i < instances; ++i) {
    StableRng inst = rng.fork(i);
    const BoxGroupInstance g = random_box_group(inst, n, max_order);
    min_order = std::min(min_order, g.group.size());
    max_seen = std::max(max_seen, g.group.size());
    const BoxIterationResult r = iterate_box(g.group, g.x0, tol, max_iter);
    max_steps = std::max(max_steps, static_cast<int>(r.trace.steps.size()) - 1);
    converged = converged && r.converged();
    contraction = exact_contraction(r.trace, &worst_ratio) && contraction;
    invariance = invariance && invariant_boxes(g.group, r.trace);
    max_residual = std::max(max_residual, residual(g.group, r.point));
    if (with_orbit_center) {
      const auto c = orbit_center_fixed_point(g.group, g.x0, SpaceDescriptor::box_real(n));
      max_center_residual = std::max(max_center_residual, residual(g.group, c.point));
    }
  }
  out.result = {{"instances", instances},           {"min_group_order", min_order},
                {"max_group_order", max_seen},      {"max_iterations", max_steps},
                {"max_residual", max_residual},     {"max_contraction_ratio", worst_ratio},
                {"contraction_exact", contraction}, {"admissible_sets_invariant", invariance},
                {"all_converged", converged},       {"residual_tol", residual_tol}};
  if (with_orbit_center) out.result["orbit_center_max_residual"] = max_center_residual;
  const bool passed = contraction && invariance && converged && max_residual <= residual_tol &&
                      max_center_residual <= residual_tol;
  out.result["passed"] = passed;
  if (!converged) {
    out.exit_code = kNonConvergence;
    out.message = "iteration cap reached";
  } else if (!passed) {
    out.exit_code = kNonConvergence;
    out.message = "contraction, invariance or residual check failed";
  }
  return out;
}

Outcome run_box(const json& s, const RunOptions& options, const std::string& stem, double tol, int max_iter) {
  if (s.contains("random")) return run_box_random(s, tol, max_iter);
  const std::size_t n = positive(require(s, "n"), "n");
  std::vector<FiberPermIsometry> gens;
  for (const auto& g : require(s, "generators")) {
    const auto perm = ints(require(g, "perm"), "perm");
    if (perm.size() != n) throw SchemaError("perm must have length n");
    const auto signs = g.contains("signs") ? ints(g.at("signs"), "signs") : std::vector<int>(n, 1);
    const auto t = g.contains("translation") ? numbers(g.at("translation"), "translation") : std::vector<double>(n, 0.0);
    gens.push_back(FiberPermIsometry::signed_permutation(perm, signs, t));
  }
  const GroupSpec group = group_closure(gens, get_or<std::size_t>(s, "max_order", 4096));
  const SupPoint x0 = sup_point(require(s, "x0"), n, 1, "x0");
  const std::string method = get_or<std::string>(s, "method", "iterate_box");
  if (method != "iterate_box" && method != "orbit_center" && method != "both") throw SchemaError("unknown method '" + method + "'");
  const double residual_tol = get_or<double>(s, "residual_tol", std::max(2.0 * tol, 1e-12));

  Outcome out;
  out.result = {{"group_order", group.size()}, {"orbit_diameter", orbit_diameter(group, x0)}};
  bool ok = true;
  if (method != "orbit_center") {
    const BoxIterationResult r = iterate_box(group, x0, tol, max_iter);
    double ratio = 0.0;
    const bool contraction = exact_contraction(r.trace, &ratio);
    const double res = residual(group, r.point);
    out.result["iterate_box"] = {{"point", to_json(r.point)},
                                 {"residual", res},
                                 {"iterations", r.trace.steps.size() - 1},
                                 {"final_diameter", r.trace.steps.back().diameter},
                                 {"terminated", r.converged() ? "tolerance" : "max_iter"},
                                 {"contraction_exact", contraction}};
    write_trace(r.trace, options, stem, out);
    if (!r.converged()) {
      out.exit_code = kNonConvergence;
      out.message = "iteration cap reached";
    }
    ok = ok && contraction && res <= residual_tol;
  }
  if (method != "iterate_box") {
    const auto c = orbit_center_fixed_point(group, x0, SpaceDescriptor::box_real(n));
    const double res = residual(group, c.point);
    out.result["orbit_center"] = {{"point", to_json(c.point)}, {"residual", res}};
    ok = ok && res <= residual_tol;
  }
  if (!ok && out.exit_code == kOk) {
    out.exit_code = kNonConvergence;
    out.message = "fixed-point residual above " + std::to_string(residual_tol);
  }
  return out;
}

// ---------------------------------------------------------------- fiber

Outcome run_fiber(const json& s, double tol) {
  const std::size_t m = positive(require(s, "m"), "m");
  const std::size_t k = positive(require(s, "k"), "k");
  const auto kk = static_cast<Eigen::Index>(k);
  std::vector<FiberPermIsometry> gens;
  for (const auto& g : require(s, "generators")) {
    const auto perm = ints(require(g, "perm"), "perm");
    if (perm.size() != m) throw SchemaError("perm must have length m");
    std::vector<Eigen::MatrixXd> maps(m, Eigen::MatrixXd::Identity(kk, kk));
    if (g.contains("fiber_maps")) {
      const auto& fm = g.at("fiber_maps");
      if (!fm.is_array() || fm.size() != m) throw SchemaError("fiber_maps must list one k x k matrix per index");
      for (std::size_t i = 0; i < m; ++i) maps[i] = real_matrix(fm[i], k, k, "fiber_maps");
    }
    const SupPoint t = g.contains("translation") ? sup_point(g.at("translation"), m, k, "translation") : SupPoint(m, k);
    gens.emplace_back(perm, std::move(maps), t);
  }
  const GroupSpec group = group_closure(gens, get_or<std::size_t>(s, "max_order", 4096));
  const SupPoint x0 = sup_point(require(s, "x0"), m, k, "x0");
  const double residual_tol = get_or<double>(s, "residual_tol", kAlgebraTol);

  const auto space = SpaceDescriptor::fiber_hilbert(m, k);
  const PointCloud cloud = orbit(group, x0);
  const auto c = orbit_center_fixed_point(group, x0, space);
  const double res = residual(group, c.point);
  Outcome out;
  out.result = {{"group_order", group.size()},
                {"orbit_size", cloud.size()},
                {"orbit_diameter", cloud_diameter(cloud)},
                {"urns_constant", space.urns_constant},
                {"point", to_json(c.point)},
                {"residual", res},
                {"exact_center", c.exact}};
  if (!c.exact) out.warnings.push_back("enclosing-ball descent fallback used");
  if (res > residual_tol) {
    out.exit_code = kNonConvergence;
    out.message = "fixed-point residual " + std::to_string(res) + " above " + std::to_string(residual_tol);
  }
  (void)tol;
  return out;
}

// ---------------------------------------------------------------- certificate

struct CertificateCheck {
  bool passed = false;
  std::size_t hypothesis_samples = 0;
  double center_ratio = 0.0;  // max_x d(x, z) / diam
  double y_ratio = 0.0;       // max_y d(y, z) / diam
};

CertificateCheck certify(const PointCloud& cloud, const SupPoint& z, double c, std::size_t samples, StableRng& rng,
                         double tol) {
  CertificateCheck out;
  const double diam = cloud_diameter(cloud);
  const double radius = c * diam;
  double reach = 0.0;
  for (const auto& x : cloud) reach = std::max(reach, sup_distance(x, z));
  std::vector<SupPoint> ys;
  if (reach <= radius) ys = sample_hypothesis_centers(cloud, z, radius, samples, rng);
  for (const auto& y : ys) {
    const bool hyp = std::all_of(cloud.begin(), cloud.end(), [&](const SupPoint& x) { return sup_distance(x, y) <= radius + tol; });
    if (hyp) {
      ++out.hypothesis_samples;
      if (diam > 0) out.y_ratio = std::max(out.y_ratio, sup_distance(y, z) / diam);
    }
  }
  if (diam > 0) out.center_ratio = reach / diam;
  out.passed = verify_urns_certificate(cloud, z, c, ys, tol);
  return out;
}

Outcome run_certificate(const json& s, double tol) {
  const std::string space_name = get_or<std::string>(s, "space", "fiber");
  if (space_name != "box" && space_name != "fiber") throw SchemaError("space must be 'box' or 'fiber'");
  const bool box = space_name == "box";
  const std::size_t samples = get_or<std::size_t>(s, "y_samples", 50);
  StableRng rng(seed_of(s));
  Outcome out;

  if (s.contains("random")) {
    const auto& spec = s.at("random");
    const std::size_t instances = positive(require(spec, "instances"), "random.instances");
    const std::size_t m_max = get_or<std::size_t>(spec, "m_max", 6);
    const std::size_t k = box ? 1 : get_or<std::size_t>(spec, "k", 3);
    const std::size_t pmin = get_or<std::size_t>(spec, "points_min", 2);
    const std::size_t pmax = get_or<std::size_t>(spec, "points_max", 20);
    if (m_max < 1 || k < 1 || pmin < 1 || pmax < pmin) throw SchemaError("invalid random certificate parameters");
    std::size_t passed = 0, min_samples = samples;
    double center_ratio = 0.0, y_ratio = 0.0;
    for (std::size_t i = 0; i < instances; ++i) {
      StableRng inst = rng.fork(i);
      const std::size_t m = 1 + inst.index(m_max);
      const std::size_t npts = pmin + inst.index(pmax - pmin + 1);
      const PointCloud cloud = random_cloud(inst, npts, m, k, -1.0, 1.0);
      const auto space = box ? SpaceDescriptor::box_real(m) : SpaceDescriptor::fiber_hilbert(m, k);
      const SupPoint z = urns_center(cloud, space);
      const CertificateCheck chk = certify(cloud, z, space.urns_constant, samples, inst, tol);
      passed += chk.passed ? 1 : 0;
      min_samples = std::min(min_samples, chk.hypothesis_samples);
      center_ratio = std::max(center_ratio, chk.center_ratio);
      y_ratio = std::max(y_ratio, chk.y_ratio);
    }
    const double c = box ? 0.5 : std::sqrt(3.0) / 2.0;
    out.result = {{"instances", instances},
                  {"urns_constant", c},
                  {"certified", passed},
                  {"min_hypothesis_samples", min_samples},
                  {"max_center_ratio", center_ratio},
                  {"max_hypothesis_center_ratio", y_ratio},
                  {"passed", passed == instances && min_samples == samples}};
    if (!out.result["passed"].get<bool>()) {
      out.exit_code = kNonConvergence;
      out.message = "certificate failed on " + std::to_string(instances - passed) + " instances";
    }
    return out;
  }

  PointCloud cloud;
  std::size_t m = 0, k = 1;
  if (s.contains("box")) {
    if (!box) throw SchemaError("'box' input requires space 'box'");
    const auto lo = numbers(require(s.at("box"), "lo"), "box.lo");
    const auto hi = numbers(require(s.at("box"), "hi"), "box.hi");
    if (lo.size() != hi.size() || lo.empty() || lo.size() > 16) throw SchemaError("box bounds must have equal length 1..16");
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (lo[i] > hi[i]) throw SchemaError("box has lo > hi at coordinate " + std::to_string(i));
    }
    m = lo.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      std::vector<double> corner(m);
      for (std::size_t i = 0; i < m; ++i) corner[i] = (mask >> i) & 1 ? hi[i] : lo[i];
      cloud.push_back(SupPoint::from_coords(corner));
    }
  } else {
    m = positive(require(s, "m"), "m");
    k = box ? 1 : positive(require(s, "k"), "k");
    for (const auto& p : require(s, "points")) cloud.push_back(sup_point(p, m, k, "points"));
    if (cloud.empty()) throw SchemaError("points must be nonempty");
  }
  const auto space = box ? SpaceDescriptor::box_real(m) : SpaceDescriptor::fiber_hilbert(m, k);
  const SupPoint z = s.contains("z") ? sup_point(s.at("z"), m, k, "z") : urns_center(cloud, space);
  const double c = get_or<double>(s, "c", space.urns_constant);
  const CertificateCheck chk = certify(cloud, z, c, samples, rng, tol);
  out.result = {{"urns_constant", c},
                {"diameter", cloud_diameter(cloud)},
                {"center", to_json(z)},
                {"max_center_ratio", chk.center_ratio},
                {"hypothesis_samples", chk.hypothesis_samples},
                {"max_hypothesis_center_ratio", chk.y_ratio},
                {"certificate", chk.passed}};
  if (!chk.passed) {
    out.exit_code = kNonConvergence;
    out.message = "certificate failed";
  }
  return out;
}

// ---------------------------------------------------------------- matrix derivations

UnitaryGroup parse_unitary_group(const json& g) {
  if (g.contains("named")) return named_unitary_group(g.at("named").get<std::string>());
  const auto& gens = require(g, "generators");
  if (!gens.is_array() || gens.empty()) throw SchemaError("group.generators must be a nonempty array");
  std::vector<MatrixElement> mats;
  std::vector<std::string> labels;
  const auto& first = require(gens[0], "matrix");
  const std::size_t entries = first.size();
  int d = 0;
  if (!first.empty() && first[0].is_array() && !first[0].empty() && first[0][0].is_array()) {
    d = static_cast<int>(entries);
  } else {
    d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(entries))));
  }
  if (d < 1) throw SchemaError("generator matrix is empty");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    labels.push_back(get_or<std::string>(gens[i], "label", "g" + std::to_string(i)));
    mats.push_back(complex_matrix(require(gens[i], "matrix"), d, "generator matrix"));
  }
  return unitary_group(mats, labels, get_or<std::size_t>(g, "max_order", 4096));
}

std::map<std::string, MatrixElement> parse_derivation(const json& dj, const UnitaryGroup& group, StableRng& rng) {
  const int d = group.dim();
  if (dj.contains("values")) {
    std::map<std::string, MatrixElement> values;
    for (const auto& [label, m] : dj.at("values").items()) values[label] = complex_matrix(m, d, "derivation value");
    return values;
  }
  if (dj.contains("inner")) {
    const MatrixElement t0 = complex_matrix(dj.at("inner"), d, "derivation.inner");
    std::map<std::string, MatrixElement> values;
    for (std::size_t s = 0; s < group.spec.generators.size(); ++s) {
      const auto& g = group.matrices[group.generator_index(s)];
      values[group.spec.generator_labels[s]] = t0 * g - g * t0;
    }
    return values;
  }
  if (get_or<bool>(dj, "random_inner", false)) return random_inner_values(group, rng);
  throw SchemaError("derivation needs 'values', 'inner' or 'random_inner'");
}

std::vector<WitnessMethod> parse_methods(const json& s) {
  std::vector<WitnessMethod> out;
  if (s.contains("method")) {
    out.push_back(witness_method_from_string(s.at("method").get<std::string>()));
  } else if (s.contains("methods")) {
    for (const auto& m : s.at("methods")) out.push_back(witness_method_from_string(m.get<std::string>()));
  } else {
    out = {WitnessMethod::OrbitCenter, WitnessMethod::Averaging, WitnessMethod::LeastSquares};
  }
  if (out.empty()) throw SchemaError("no witness method selected");
  return out;
}

// Residual recomputed from the raw matrices: rows of E delta(g) - T g + g~ T.
double independent_witness_residual(const UnitaryGroup& group, const DerivationData& delta, const NormingSet& gammas,
                                    const Eigen::MatrixXcd& t) {
  const std::size_t m = gammas.size();
  const Eigen::Index d = group.dim();
  double worst = 0.0;
  for (std::size_t gi = 0; gi < group.size(); ++gi) {
    const auto& g = group.matrices[gi];
    for (std::size_t i = 0; i < m; ++i) {
      const Eigen::VectorXcd moved = g.adjoint() * gammas.gammas[i];
      std::size_t image = m;
      double best = 1e300;
      for (std::size_t j = 0; j < m; ++j) {
        const double dist = (moved - gammas.gammas[j]).norm();
        if (dist < best) {
          best = dist;
          image = j;
        }
      }
      double row_sq = 0.0;
      for (Eigen::Index c = 0; c < d; ++c) {
        std::complex<double> v = 0.0;
        for (Eigen::Index r = 0; r < d; ++r) v += std::conj(gammas.gammas[i](r)) * delta.extended[gi](r, c);
        for (Eigen::Index r = 0; r < d; ++r) v -= t(static_cast<Eigen::Index>(i), r) * g(r, c);
        v += t(static_cast<Eigen::Index>(image), c);
        row_sq += std::norm(v);
      }
      worst = std::max(worst, std::sqrt(row_sq));
    }
  }
  return worst;
}

json witness_json(const WitnessReport& w, const UnitaryGroup& group) {
  json per = json::object();
  for (std::size_t s = 0; s < group.spec.generator_labels.size(); ++s) {
    per[group.spec.generator_labels[s]] = w.residual.per_generator[s];
  }
  return {{"T", to_json(w.t)},
          {"residual", w.residual.model},
          {"residual_op2", w.residual.op2},
          {"per_generator_residual", per},
          {"worst_element", group.spec.label(w.residual.worst_element)},
          {"no_exact_witness", w.no_exact_witness},
          {"approximate_center", w.approximate},
          {"trace", w.trace}};
}

json similarity_json(const SimilarityReport& r, const UnitaryGroup& group) {
  return {{"condition_number_2", r.condition},
          {"homomorphism_violation", r.homomorphism_violation},
          {"homomorphism_worst_pair", {group.spec.label(r.homomorphism_pair_first), group.spec.label(r.homomorphism_pair_second)}},
          {"intertwining_violation", r.intertwining_violation},
          {"conjugation_violation", r.conjugation_violation},
          {"worst_element", group.spec.label(r.worst_element)},
          {"unitality_violation", r.unitality_violation},
          {"ok", r.ok}};
}

Outcome run_matrix_random(const json& s, const UnitaryGroup& group, const NormingSet& gammas, double tol) {
  const auto& spec = s.at("random");
  const std::size_t instances = positive(require(spec, "instances"), "random.instances");
  const std::size_t corrupted = get_or<std::size_t>(spec, "corrupted", 0);
  const double amount = get_or<double>(spec, "corruption", 1e-2);
  const auto methods = parse_methods(s);
  StableRng rng(seed_of(s));

  std::map<std::string, double> max_res;
  for (auto m : methods) max_res[to_string(m)] = 0.0;
  double max_sim = 0.0;
  bool consistent_ok = true;
  std::size_t rejected_cocycle = 0, flagged_ls = 0, flagged_center = 0, agree = 0;
  for (std::size_t i = 0; i < instances + corrupted; ++i) {
    StableRng inst = rng.fork(i);
    auto values = random_inner_values(group, inst);
    const bool corrupt = i >= instances;
    if (corrupt) corrupt_value(values, group.spec.generator_labels.front(), 0, 0, amount);

    bool cocycle_ok = true;
    DerivationData delta;
    try {
      delta = extend_cocycle(group, values, tol);
    } catch (const CocycleInconsistencyError&) {
      cocycle_ok = false;
      delta = extend_cocycle_unchecked(group, values);
    }
    const WitnessReport ls = solve_witness(group, delta, gammas, WitnessMethod::LeastSquares);
    const WitnessReport oc = solve_witness(group, delta, gammas, WitnessMethod::OrbitCenter);
    const bool ls_accept = ls.residual.model <= kNoExactWitnessThreshold;
    const bool oc_accept = oc.residual.model <= kNoExactWitnessThreshold;
    agree += ls_accept == oc_accept ? 1 : 0;

    if (!corrupt) {
      consistent_ok = consistent_ok && cocycle_ok;
      for (auto m : methods) {
        const WitnessReport w = m == WitnessMethod::LeastSquares ? ls
                                : m == WitnessMethod::OrbitCenter ? oc
                                                                  : solve_witness(group, delta, gammas, m);
        auto& slot = max_res[to_string(m)];
        slot = std::max(slot, w.residual.model);
        if (w.residual.model > tol) {
          consistent_ok = false;
        } else {
          const SimilarityReport sim = build_similarity(w.t, group, delta, gammas);
          max_sim = std::max({max_sim, sim.homomorphism_violation, sim.intertwining_violation, sim.conjugation_violation});
          consistent_ok = consistent_ok && sim.ok;
        }
      }
    } else {
      rejected_cocycle += cocycle_ok ? 0 : 1;
      flagged_ls += ls.no_exact_witness ? 1 : 0;
      flagged_center += oc_accept ? 0 : 1;
    }
  }

  Outcome out;
  json residuals = json::object();
  for (const auto& [k, v] : max_res) residuals[k] = v;
  const bool corrupted_ok = rejected_cocycle == corrupted && flagged_ls == corrupted && flagged_center == corrupted;
  const bool passed = consistent_ok && corrupted_ok && agree == instances + corrupted;
  out.result = {{"group_order", group.size()},
                {"norming_set_size", gammas.size()},
                {"instances", instances},
                {"corrupted", corrupted},
                {"max_residual", residuals},
                {"max_similarity_violation", max_sim},
                {"corrupted_rejected_by_cocycle_check", rejected_cocycle},
                {"corrupted_flagged_least_squares", flagged_ls},
                {"corrupted_flagged_orbit_center", flagged_center},
                {"decisions_agree", agree},
                {"passed", passed}};
  if (!passed) {
    out.exit_code = kNonConvergence;
    out.message = "randomized witness suite failed";
  }
  return out;
}

Outcome run_matrix(const json& s, double tol) {
  const UnitaryGroup group = parse_unitary_group(require(s, "group"));
  std::vector<Eigen::VectorXcd> seeds;
  if (s.contains("seeds")) {
    for (const auto& v : s.at("seeds")) seeds.push_back(complex_vector(v, "seeds"));
  }
  const NormingSet gammas = embed_norming_set(group, seeds);
  if (s.contains("random")) return run_matrix_random(s, group, gammas, tol);

  StableRng rng(seed_of(s));
  auto values = parse_derivation(require(s, "derivation"), group, rng);
  if (s.contains("corrupt")) {
    const auto& c = s.at("corrupt");
    const auto entry = c.contains("entry") ? ints(c.at("entry"), "corrupt.entry") : std::vector<int>{0, 0};
    if (entry.size() != 2) throw SchemaError("corrupt.entry must be [row, col]");
    corrupt_value(values, get_or<std::string>(c, "generator", group.spec.generator_labels.front()), entry[0], entry[1],
                  get_or<double>(c, "delta", 1e-2));
  }
  const DerivationData delta =
      get_or<bool>(s, "check_cocycle", true) ? extend_cocycle(group, values, tol) : extend_cocycle_unchecked(group, values);

  Outcome out;
  out.result = {{"group_order", group.size()},
                {"norming_set_size", gammas.size()},
                {"cocycle_defect", cocycle_defect(group, delta.extended).defect}};
  json methods = json::object();
  bool flagged = false, failed = false;
  std::optional<WitnessReport> for_similarity;
  for (const auto m : parse_methods(s)) {
    const WitnessReport w = solve_witness(group, delta, gammas, m);
    const double recomputed = independent_witness_residual(group, delta, gammas, w.t);
    if (std::abs(recomputed - w.residual.model) > 1e-12) {
      throw std::runtime_error("residual mismatch for " + to_string(m) + ": solver " + std::to_string(w.residual.model) +
                               ", recomputed " + std::to_string(recomputed));
    }
    json wj = witness_json(w, group);
    wj["residual"] = recomputed;
    methods[to_string(m)] = std::move(wj);
    if (w.approximate) out.warnings.push_back(to_string(m) + ": enclosing-ball descent fallback used");
    if (m == WitnessMethod::LeastSquares && w.no_exact_witness) flagged = true;
    if (w.residual.model > tol) failed = true;
    if (w.residual.model <= tol && !for_similarity) for_similarity = w;
  }
  out.result["methods"] = methods;
  if (get_or<bool>(s, "similarity", true) && for_similarity) {
    const SimilarityReport sim = build_similarity(for_similarity->t, group, delta, gammas);
    json sj = similarity_json(sim, group);
    sj["witness_method"] = to_string(for_similarity->method);
    out.result["similarity"] = sj;
    if (!sim.ok) failed = true;
  }
  if (flagged) {
    out.exit_code = kInconsistent;
    out.message = "no exact witness in model (least-squares residual above " + std::to_string(kNoExactWitnessThreshold) + ")";
  } else if (failed) {
    out.exit_code = kNonConvergence;
    out.message = "witness residual or similarity check above tolerance";
  }
  return out;
}

// ---------------------------------------------------------------- group algebra

FiniteGroup parse_finite_group(const json& g) {
  if (g.contains("named")) return named_finite_group(g.at("named").get<std::string>());
  std::vector<std::vector<int>> gens;
  for (const auto& p : require(g, "permutations")) gens.push_back(ints(p, "permutation"));
  if (gens.empty()) throw SchemaError("group.permutations must be nonempty");
  return permutation_group(gens);
}

Eigen::VectorXcd random_function(StableRng& rng, std::size_t n, Scalars scalars) {
  Eigen::VectorXcd t(static_cast<Eigen::Index>(n));
  for (auto& v : t) v = scalars == Scalars::Real ? std::complex<double>(rng.normal(), 0.0) : rng.complex_normal();
  return t;
}

// D(g)(s) - (t(g s) - t(s g)) straight from the permutations.
double independent_group_residual(const FiniteGroup& group, const GroupCocycle& cocycle, const Eigen::VectorXcd& t) {
  double worst = 0.0;
  for (std::size_t g = 0; g < group.size(); ++g) {
    for (std::size_t s = 0; s < group.size(); ++s) {
      std::vector<int> gs(group.elements[g].size()), sg(group.elements[g].size());
      for (std::size_t i = 0; i < gs.size(); ++i) {
        gs[i] = group.elements[g][static_cast<std::size_t>(group.elements[s][i])];
        sg[i] = group.elements[s][static_cast<std::size_t>(group.elements[g][i])];
      }
      const auto v = cocycle(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(g)) -
                     (t(static_cast<Eigen::Index>(group.index_of(gs))) - t(static_cast<Eigen::Index>(group.index_of(sg))));
      worst = std::max(worst, std::abs(v));
    }
  }
  return worst;
}

Outcome run_group_algebra(const json& s, double tol) {
  const FiniteGroup group = parse_finite_group(require(s, "group"));
  const std::string scal = get_or<std::string>(s, "scalars", "real");
  if (scal != "real" && scal != "complex") throw SchemaError("scalars must be 'real' or 'complex'");
  const Scalars scalars = scal == "real" ? Scalars::Real : Scalars::Complex;
  const std::string method_name = get_or<std::string>(s, "method", "orbit_center");
  std::vector<GroupAlgebraMethod> methods;
  if (method_name == "orbit_center" || method_name == "both") methods.push_back(GroupAlgebraMethod::OrbitCenter);
  if (method_name == "averaging" || method_name == "both") methods.push_back(GroupAlgebraMethod::Averaging);
  if (methods.empty()) throw SchemaError("unknown method '" + method_name + "'");
  auto name = [](GroupAlgebraMethod m) { return m == GroupAlgebraMethod::OrbitCenter ? "orbit_center" : "averaging"; };
  const std::size_t n = group.size();
  StableRng rng(seed_of(s));
  Outcome out;

  if (s.contains("random")) {
    const std::size_t instances = positive(require(s.at("random"), "instances"), "random.instances");
    std::map<std::string, double> worst;
    for (auto m : methods) worst[name(m)] = 0.0;
    for (std::size_t i = 0; i < instances; ++i) {
      StableRng inst = rng.fork(i);
      const GroupCocycle cocycle = inner_group_cocycle(group, random_function(inst, n, scalars));
      for (auto m : methods) {
        const auto w = finite_group_algebra_witness(group, cocycle, scalars, m, tol);
        worst[name(m)] = std::max(worst[name(m)], independent_group_residual(group, cocycle, w.t));
      }
    }
    json res = json::object();
    bool passed = true;
    for (const auto& [k, v] : worst) {
      res[k] = v;
      passed = passed && v <= tol;
    }
    out.result = {{"group_order", n}, {"instances", instances}, {"max_residual", res}, {"passed", passed}};
    if (!passed) {
      out.exit_code = kNonConvergence;
      out.message = "group-algebra witness residual above tolerance";
    }
    return out;
  }

  const auto& dj = require(s, "derivation");
  GroupCocycle cocycle;
  if (dj.contains("inner")) {
    const auto t0 = complex_vector(dj.at("inner"), "derivation.inner");
    if (t0.size() != static_cast<Eigen::Index>(n)) throw SchemaError("derivation.inner needs one value per element");
    cocycle = inner_group_cocycle(group, t0);
  } else if (dj.contains("generator_values")) {
    const auto& gv = dj.at("generator_values");
    if (!gv.is_array() || gv.size() != group.generators.size()) throw SchemaError("one value list per generator required");
    Eigen::MatrixXcd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(gv.size()));
    for (std::size_t j = 0; j < gv.size(); ++j) {
      const auto col = complex_vector(gv[j], "generator_values");
      if (col.size() != static_cast<Eigen::Index>(n)) throw SchemaError("generator value needs one entry per element");
      values.col(static_cast<Eigen::Index>(j)) = col;
    }
    cocycle = extend_group_cocycle_unchecked(group, values);
  } else if (get_or<bool>(dj, "random_inner", false)) {
    cocycle = inner_group_cocycle(group, random_function(rng, n, scalars));
  } else {
    throw SchemaError("derivation needs 'inner', 'generator_values' or 'random_inner'");
  }

  out.result = {{"group_order", n}};
  json mj = json::object();
  bool failed = false;
  for (auto m : methods) {
    const auto w = finite_group_algebra_witness(group, cocycle, scalars, m, tol);
    const double recomputed = independent_group_residual(group, cocycle, w.t);
    if (std::abs(recomputed - w.residual) > 1e-12) throw std::runtime_error("group-algebra residual mismatch");
    mj[name(m)] = {{"t", to_json(w.t)}, {"residual", recomputed}};
    failed = failed || recomputed > tol;
  }
  out.result["methods"] = mj;
  if (failed) {
    out.exit_code = kNonConvergence;
    out.message = "group-algebra witness residual above tolerance";
  }
  return out;
}

}  // namespace

json Report::deterministic() const {
  json warn = json::array();
  for (const auto& w : warnings) warn.push_back(w);
  return {{"scenario", scenario},
          {"result", result},
          {"status", {{"exit_code", exit_code}, {"message", message}, {"warnings", warn}}}};
}

json Report::to_json() const {
  json out = deterministic();
  out["timing"] = {{"elapsed_ms", elapsed_ms}};
  return out;
}

Report run_scenario(const json& scenario, const RunOptions& options, const std::string& stem) {
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.scenario = scenario;
  if (options.seed) report.scenario["seed"] = *options.seed;
  if (options.tol) report.scenario["tol"] = *options.tol;
  const json& s = report.scenario;

  Outcome outcome;
  try {
    if (!s.is_object()) throw SchemaError("scenario must be a JSON object");
    const std::string kind = require(s, "kind").get<std::string>();
    const bool algebra = kind == "matrix_derivation" || kind == "group_algebra_derivation";
    const double tol = s.contains("tol") ? number(s.at("tol"), "tol") : (algebra ? kAlgebraTol : kGeometryTol);
    if (!(tol > 0.0)) throw SchemaError("tol must be positive");
    const int max_iter = static_cast<int>(get_or<long long>(s, "max_iter", 200));
    if (kind == "box_fixed_point") {
      outcome = run_box(s, options, stem, tol, max_iter);
    } else if (kind == "fiber_fixed_point") {
      outcome = run_fiber(s, tol);
    } else if (kind == "urns_certificate") {
      outcome = run_certificate(s, tol);
    } else if (kind == "matrix_derivation") {
      outcome = run_matrix(s, tol);
    } else if (kind == "group_algebra_derivation") {
      outcome = run_group_algebra(s, tol);
    } else {
      throw SchemaError("unknown scenario kind '" + kind + "'");
    }
  } catch (const SchemaError& e) {
    outcome = {json::object(), kSchemaError, std::string("schema error: ") + e.what(), {}};
  } catch (const json::exception& e) {
    outcome = {json::object(), kSchemaError, std::string("schema error: ") + e.what(), {}};
  } catch (const StructuralError& e) {
    outcome = {json::object(), kSchemaError, std::string("malformed input: ") + e.what(), {}};
  } catch (const CocycleInconsistencyError& e) {
    outcome = {json::object(), kInconsistent, e.what(), {}};
    outcome.result["violating_pair"] = {e.first(), e.second()};
    outcome.result["defect"] = e.defect();
  } catch (const InvarianceViolationError& e) {
    outcome = {json::object(), kInconsistent, e.what(), {}};
  } catch (const GroupNotFiniteError& e) {
    outcome = {json::object(), kInconsistent, e.what(), {}};
  } catch (const std::exception& e) {
    outcome = {json::object(), kFailure, std::string("internal error: ") + e.what(), {}};
  }
  report.result = std::move(outcome.result);
  report.exit_code = outcome.exit_code;
  report.message = std::move(outcome.message);
  report.warnings = std::move(outcome.warnings);
  report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Report run_scenario_file(const std::filesystem::path& path, const RunOptions& options) {
  std::ifstream in(path);
  const std::string stem = path.stem().string();
  if (!in) {
    Report r;
    r.exit_code = kSchemaError;
    r.message = "cannot read scenario file " + path.string();
    return r;
  }
  json scenario;
  try {
    scenario = json::parse(in);
  } catch (const json::exception& e) {
    Report r;
    r.exit_code = kSchemaError;
    r.message = std::string("schema error: invalid JSON: ") + e.what();
    return r;
  }
  return run_scenario(scenario, options, stem);
}

int SuiteSummary::exit_code() const noexcept {
  return std::all_of(entries.begin(), entries.end(), [](const SuiteEntry& e) { return e.passed(); }) ? kOk : kFailure;
}

json SuiteSummary::to_json() const {
  json list = json::array();
  std::size_t passed = 0;
  for (const auto& e : entries) {
    passed += e.passed() ? 1 : 0;
    list.push_back({{"name", e.name},
                    {"exit_code", e.report.exit_code},
                    {"expected_exit", e.expected_exit},
                    {"passed", e.passed()},
                    {"message", e.report.message}});
  }
  return {{"scenarios", list}, {"total", entries.size()}, {"passed", passed}, {"exit_code", exit_code()}};
}

SuiteSummary run_suite(const std::filesystem::path& directory, const RunOptions& options) {
  if (!std::filesystem::is_directory(directory)) throw std::runtime_error("not a directory: " + directory.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<std::future<Report>> jobs;
  for (const auto& f : files) {
    jobs.push_back(std::async(std::launch::async, [f, &options] { return run_scenario_file(f, options); }));
  }
  SuiteSummary summary;
  for (std::size_t i = 0; i < files.size(); ++i) {
    SuiteEntry e;
    e.name = files[i].filename().string();
    e.report = jobs[i].get();
    e.expected_exit = kOk;
    if (e.report.scenario.is_object() && e.report.scenario.contains("expect_exit")) {
      e.expected_exit = e.report.scenario.at("expect_exit").get<int>();
    }
    summary.entries.push_back(std::move(e));
  }
  return summary;
}

}  // namespace urns::cli

// Power-network problem instances: buses, lines, admittance and cost
// matrices, JSON case files, and random radial instance generation.
#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace opfdec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Thrown when a case file or in-memory case violates the model invariants.
class CaseError : public std::runtime_error {
 public:
  explicit CaseError(const std::string& what) : std::runtime_error(what) {}
};

/// One bus. `id` is 1-based, matching the case-file schema.
struct Bus {
  int id = 0;
  double v_min = 0.0;  // per-unit voltage magnitude lower bound
  double v_max = 0.0;  // per-unit voltage magnitude upper bound
  double c0 = 0.0;     // constant cost term (accepted, ignored in objectives)
  double c1 = 0.0;     // linear cost coefficient
  double c2 = 0.0;     // quadratic cost coefficient, >= 0
};

/// One line between two buses, with series admittance y = g + jb.
struct Line {
  int from = 0;  // 1-based bus id
  int to = 0;    // 1-based bus id
  Complex admittance{0.0, 0.0};
};

struct PowerCase {
  std::vector<Bus> buses;
  std::vector<Line> lines;

  int size() const { return static_cast<int>(buses.size()); }
};

namespace detail {

inline std::pair<int, int> unordered_pair(int a, int b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

inline bool case_connected(const PowerCase& pc) {
  const int n = pc.size();
  if (n == 0) return false;
  std::vector<std::vector<int>> adj(n);
  for (const Line& ln : pc.lines) {
    adj[ln.from - 1].push_back(ln.to - 1);
    adj[ln.to - 1].push_back(ln.from - 1);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == n;
}

}  // namespace detail

/// Checks every model invariant; throws CaseError naming the offending
/// bus or line. Buses must carry contiguous ids 1..n in any order.
inline void validate_case(const PowerCase& pc) {
  const int n = pc.size();
  if (n < 1) throw CaseError("case has no buses");

  std::vector<char> seen_id(n + 1, 0);
  for (const Bus& b : pc.buses) {
    if (b.id < 1 || b.id > n)
      throw CaseError("bus id " + std::to_string(b.id) +
                      " outside 1.." + std::to_string(n));
    if (seen_id[b.id]) throw CaseError("duplicate bus id " + std::to_string(b.id));
    seen_id[b.id] = 1;
    if (!(b.v_min > 0.0))
      throw CaseError("bus " + std::to_string(b.id) + ": v_min must be > 0");
    if (b.v_min > b.v_max)
      throw CaseError("bus " + std::to_string(b.id) + ": v_min (" +
                      std::to_string(b.v_min) + ") > v_max (" +
                      std::to_string(b.v_max) + ")");
    if (b.c2 < 0.0)
      throw CaseError("bus " + std::to_string(b.id) + ": c2 must be >= 0");
  }

  std::set<std::pair<int, int>> pairs;
  for (const Line& ln : pc.lines) {
    const std::string tag =
        "line " + std::to_string(ln.from) + "-" + std::to_string(ln.to);
    if (ln.from < 1 || ln.from > n || ln.to < 1 || ln.to > n)
      throw CaseError(tag + ": endpoint outside 1.." + std::to_string(n));
    if (ln.from == ln.to) throw CaseError(tag + ": self-loop");
    if (std::abs(ln.admittance) == 0.0) throw CaseError(tag + ": zero admittance");
    if (!pairs.insert(detail::unordered_pair(ln.from, ln.to)).second)
      throw CaseError(tag + ": duplicate line");
  }

  if (n > 1 && !detail::case_connected(pc))
    throw CaseError("line graph is not connected");
}

/// Bus admittance matrix: Y_ii = sum of incident line admittances,
/// Y_ik = -y_ik on lines, 0 elsewhere.
inline Matrix build_admittance(const PowerCase& pc) {
  const int n = pc.size();
  Matrix y = Matrix::Zero(n, n);
  for (const Line& ln : pc.lines) {
    const int i = ln.from - 1;
    const int k = ln.to - 1;
    y(i, k) -= ln.admittance;
    y(k, i) -= ln.admittance;
    y(i, i) += ln.admittance;
    y(k, k) += ln.admittance;
  }
  return y;
}

/// Objective matrix M = (Y^H C + C Y)/2 with C = diag(costs), so that
/// Tr(M vv^H) equals the total linear generation cost of voltage v.
inline Matrix build_cost_matrix(const Matrix& admittance, const RealVector& costs) {
  if (costs.size() != admittance.rows())
    throw std::invalid_argument("cost vector length does not match bus count");
  const Matrix c = costs.cast<Complex>().asDiagonal();
  Matrix m = 0.5 * (admittance.adjoint() * c + c * admittance);
  return 0.5 * (m + Matrix(m.adjoint()));  // scrub rounding asymmetry
}

inline Matrix build_cost_matrix(const PowerCase& pc) {
  RealVector costs(pc.size());
  for (const Bus& b : pc.buses) costs[b.id - 1] = b.c1;
  return build_cost_matrix(build_admittance(pc), costs);
}

inline RealVector linear_costs(const PowerCase& pc) {
  RealVector costs(pc.size());
  for (const Bus& b : pc.buses) costs[b.id - 1] = b.c1;
  return costs;
}

/// Real power injected at each bus by voltage vector v: Re{diag(vv^H Y^H)}.
inline RealVector power_injections(const Matrix& admittance, const ComplexVector& v) {
  const ComplexVector yv = admittance * v;
  RealVector p(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    p[i] = std::real(v[i] * std::conj(yv[i]));
  return p;
}

/// Deterministic uniform draws from a seeded mt19937_64. The bit-to-double
/// mapping is fixed here so generated cases are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on the open interval (lo, hi).
  double uniform(double lo, double hi) {
    const double u = (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  /// Uniform integer in [0, n).
  int below(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 gen_;
};

/// Random radial instance following the simulation protocol: star with the
/// hub at bus n (or a random tree when `tree` is set), one source bus with
/// c1 in (0,10), sinks in (-10,0), voltage bounds 0.95*xi .. 1.05*xi with
/// xi in (0.9,1.1), and line conductance/susceptance magnitudes in (0,10).
/// Lines take y = g - jb (positive conductance, inductive susceptance).
inline PowerCase generate_radial(int n, std::uint64_t seed, bool tree = false) {
  if (n < 2) throw std::invalid_argument("generate_radial requires n >= 2");
  Rng rng(seed);

  PowerCase pc;
  pc.buses.resize(n);
  if (tree) {
    for (int i = 2; i <= n; ++i) {
      const int parent = 1 + rng.below(i - 1);
      pc.lines.push_back({parent, i, Complex{}});
    }
  } else {
    for (int l = 1; l < n; ++l) pc.lines.push_back({l, n, Complex{}});
  }
  const int source = tree ? 1 + rng.below(n) : n;

  for (int id = 1; id <= n; ++id) {
    Bus& b = pc.buses[id - 1];
    b.id = id;
    const double xi = rng.uniform(0.9, 1.1);
    b.v_min = 0.95 * xi;
    b.v_max = 1.05 * xi;
    b.c1 = (id == source) ? rng.uniform(0.0, 10.0) : rng.uniform(-10.0, 0.0);
  }
  for (Line& ln : pc.lines) {
    const double g = rng.uniform(0.0, 10.0);
    const double bsus = rng.uniform(0.0, 10.0);
    ln.admittance = Complex{g, -bsus};
  }
  validate_case(pc);
  return pc;
}

// --- JSON case files -------------------------------------------------------
//
// { "buses": [{"id","v_min","v_max","c0","c1","c2"}],
//   "lines": [{"from","to","g","b"}] }

inline PowerCase parse_case(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CaseError(std::string("malformed JSON: ") + e.what());
  }

  auto require = [](const nlohmann::json& obj, const char* field,
                    const std::string& where) -> const nlohmann::json& {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_number())
      throw CaseError(where + ": missing or non-numeric field '" + field + "'");
    return *it;
  };

  if (!doc.contains("buses") || !doc["buses"].is_array())
    throw CaseError("case: missing 'buses' array");
  if (!doc.contains("lines") || !doc["lines"].is_array())
    throw CaseError("case: missing 'lines' array");

  PowerCase pc;
  int bus_no = 0;
  for (const auto& jb : doc["buses"]) {
    const std::string where = "buses[" + std::to_string(bus_no++) + "]";
    Bus b;
    b.id = require(jb, "id", where).get<int>();
    b.v_min = require(jb, "v_min", where).get<double>();
    b.v_max = require(jb, "v_max", where).get<double>();
    b.c0 = require(jb, "c0", where).get<double>();
    b.c1 = require(jb, "c1", where).get<double>();
    b.c2 = require(jb, "c2", where).get<double>();
    pc.buses.push_back(b);
  }
  int line_no = 0;
  for (const auto& jl : doc["lines"]) {
    const std::string where = "lines[" + std::to_string(line_no++) + "]";
    Line ln;
    ln.from = require(jl, "from", where).get<int>();
    ln.to = require(jl, "to", where).get<int>();
    ln.admittance = Complex{require(jl, "g", where).get<double>(),
                            require(jl, "b", where).get<double>()};
    pc.lines.push_back(ln);
  }
  validate_case(pc);
  return pc;
}

/// Inverse of parse_case. Output is bit-stable for identical inputs.
inline std::string serialize_case(const PowerCase& pc) {
  nlohmann::json doc;
  doc["buses"] = nlohmann::json::array();
  std::vector<Bus> buses = pc.buses;
  std::sort(buses.begin(), buses.end(),
            [](const Bus& a, const Bus& b) { return a.id < b.id; });
  for (const Bus& b : buses) {
    doc["buses"].push_back({{"id", b.id},
                            {"v_min", b.v_min},
                            {"v_max", b.v_max},
                            {"c0", b.c0},
                            {"c1", b.c1},
                            {"c2", b.c2}});
  }
  doc["lines"] = nlohmann::json::array();
  for (const Line& ln : pc.lines) {
    doc["lines"].push_back({{"from", ln.from},
                            {"to", ln.to},
                            {"g", ln.admittance.real()},
                            {"b", ln.admittance.imag()}});
  }
  return doc.dump(2);
}

}  // namespace opfdec

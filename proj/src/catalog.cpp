#include "symind/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace symind {

namespace {

MatrixFunction one() { return MatrixFunction::constant(Mat::Identity(1, 1)); }
MatrixFunction zero() { return MatrixFunction::constant(Mat::Zero(1, 1)); }

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries{
      {"free", "free", "-x'' on a bounded interval",
       {"P = 1, Q = 0, R = 0", "Dirichlet spectrum on (0, L): (k pi / L)^2, Morse index 0"}},
      {"harmonic", "harmonic(omega)", "-x'' - omega^2 x",
       {"P = 1, Q = 0, R = -omega^2",
        "Dirichlet on (0, 1): Morse index #{k >= 1 : (k pi)^2 < omega^2}, conjugate points k pi / omega",
        "omega = 2, 5, 10 on (0, 1): 0, 1, 3"}},
      {"bessel", "bessel(q)", "-x'' + q/t^2 x on (0, 1], singular at 0",
       {"P = 1, Q = 0, R = q / t^2, q = -1/4 + r^2 (r >= 0) or -1/4 - r^2 (r < 0)",
        "r > 0: y1 = (t^(1/2-r) + t^(1/2+r)) / 2, y2 = (t^(1/2+r) - t^(1/2-r)) / (2r)",
        "r = 0: y1 = t^(1/2), y2 = t^(1/2) ln t",
        "r < 0: y1 = t^(1/2) cos(r ln t), y2 = t^(1/2) sin(r ln t) / r",
        "limit circle at 0 for q < 3/4, limit point for q >= 3/4",
        "q < -1/4: conjugate points t_k = exp(-k pi / sqrt(-1/4 - q)), Morse index infinite",
        "q >= -1/4 with the Friedrichs condition: Morse index 0"}},
      {"bessel_r", "bessel_r(r)", "bessel(q) parametrized by r", {"q = -1/4 + r^2 (r >= 0), -1/4 - r^2 (r < 0)"}},
      {"mathieu", "mathieu(a,q)", "-x'' + (2q cos 2t - a) x on (0, pi)",
       {"P = 1, Q = 0, R = 2 q cos(2t) - a", "q = 0: Dirichlet Morse index #{k >= 1 : k^2 < a}"}},
      {"nbody-asymptotic", "nbody-asymptotic(config-id, motion)",
       "limiting Bessel-type system of an asymptotic N-body motion",
       {"config-id: two-body, lagrange3, euler3, square4 (equal masses)",
        "motion: collision (R = B/t^2 on (0,1]), parabolic (R = B/t^2 on [1, inf)), hyperbolic (R = B/t^3 on [1, inf))",
        "B = (2/9) M^(-1) D^2U(a) / U(a); finite Morse index iff every eigenvalue of B exceeds -1/4; hyperbolic always finite",
        "radial eigenvalue 4/9, translation eigenvalue 0 with multiplicity d"}},
  };
  return entries;
}

const CatalogEntry& catalog_lookup(const std::string& name) {
  for (const auto& e : catalog_entries())
    if (e.name == name) return e;
  throw Error(ErrorCode::UnknownCatalogEntry, "no catalog entry named '" + name + "'");
}

std::string catalog_describe(const std::string& name) {
  const CatalogEntry& e = catalog_lookup(name);
  std::ostringstream os;
  os << e.signature << ": " << e.summary << "\n";
  for (const auto& d : e.details) os << "  " << d << "\n";
  return os.str();
}

CatalogCall parse_catalog_call(const std::string& text) {
  CatalogCall c;
  auto open = text.find('(');
  if (open == std::string::npos) {
    c.name = trim(text);
    return c;
  }
  auto close = text.rfind(')');
  if (close == std::string::npos || close < open) throw Error(ErrorCode::ConfigInvalid, "unbalanced parentheses in '" + text + "'");
  c.name = trim(text.substr(0, open));
  std::string inner = text.substr(open + 1, close - open - 1);
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) c.args.push_back(item);
  }
  return c;
}

SLProblem free_problem(double a, double b) { return make_problem(a, b, one(), zero(), zero(), "free"); }

SLProblem harmonic_problem(double omega, double a, double b) {
  return make_problem(a, b, one(), zero(), MatrixFunction::constant(Mat::Constant(1, 1, -omega * omega)),
                      "harmonic");
}

SLProblem bessel_problem(double q, double b) {
  SLProblem p = make_problem(0.0, b, one(), zero(), MatrixFunction::scalar([q](double t) { return q / (t * t); }, "q/t^2"),
                             "bessel");
  p.left = q < 0.75 ? EndpointKind::SingularLimitCircle : EndpointKind::SingularLimitPoint;
  p.bessel_q = q;
  return p;
}

SLProblem mathieu_problem(double a, double q) {
  return make_problem(0.0, std::numbers::pi, one(), zero(),
                      MatrixFunction::scalar([a, q](double t) { return 2.0 * q * std::cos(2.0 * t) - a; }, "2q cos 2t - a"),
                      "mathieu");
}

CentralConfig named_central_configuration(const std::string& id) {
  if (id == "two-body") {
    MassSystem s = MassSystem::make({1.0, 1.0}, 2);
    return central_configuration(s, collinear_seed(s));
  }
  if (id == "lagrange3") {
    MassSystem s = MassSystem::make({1.0, 1.0, 1.0}, 2);
    return central_configuration(s, equilateral_seed(s));
  }
  if (id == "euler3") {
    MassSystem s = MassSystem::make({1.0, 1.0, 1.0}, 2);
    return central_configuration(s, collinear_seed(s));
  }
  if (id == "square4") {
    MassSystem s = MassSystem::make({1.0, 1.0, 1.0, 1.0}, 2);
    return central_configuration(s, square_seed(s));
  }
  throw Error(ErrorCode::UnknownCatalogEntry, "no built-in configuration '" + id + "'");
}

SLProblem nbody_asymptotic_problem(const std::string& id, Motion motion) {
  CentralConfig cc = named_central_configuration(id);
  Mat B = bbar_symmetric(cc);
  const int n = static_cast<int>(B.rows());
  const double inf = std::numeric_limits<double>::infinity();
  auto I = MatrixFunction::constant(Mat::Identity(n, n));
  auto Z = MatrixFunction::constant(Mat::Zero(n, n));
  std::string name = "nbody-asymptotic(" + id + "," + motion_name(motion) + ")";
  if (motion == Motion::TotalCollision) {
    SLProblem p = make_problem(0.0, 1.0, I, Z, MatrixFunction(n, [B](double t) { return Mat(B / (t * t)); }), name);
    p.left = EndpointKind::SingularLimitCircle;
    return p;
  }
  double power = motion == Motion::ParabolicInfinity ? 2.0 : 3.0;
  SLProblem p = make_problem(1.0, inf, I, Z,
                             MatrixFunction(n, [B, power](double t) { return Mat(B / std::pow(t, power)); }), name);
  p.right = EndpointKind::SingularLimitPoint;
  return p;
}

}  // namespace symind

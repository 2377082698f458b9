#include "symind/nbody.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace symind {

MassSystem MassSystem::make(std::vector<double> masses, int d) {
  if (d < 1) throw Error(ErrorCode::ConfigInvalid, "dimension must be positive");
  for (double m : masses)
    if (!(m > 0)) throw Error(ErrorCode::ConfigInvalid, "masses must be positive");
  MassSystem s;
  s.n_bodies = static_cast<int>(masses.size());
  s.d = d;
  s.masses = std::move(masses);
  return s;
}

Vec MassSystem::mass_diagonal() const {
  Vec m(dim());
  for (int i = 0; i < n_bodies; ++i) m.segment(i * d, d).setConstant(masses[i]);
  return m;
}

double min_distance(const Configuration& c) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < c.system.n_bodies; ++i)
    for (int j = i + 1; j < c.system.n_bodies; ++j) best = std::min(best, (c.body(i) - c.body(j)).norm());
  return best;
}

namespace {

void require_collision_free(const Configuration& c) {
  if (!(min_distance(c) > 0)) throw Error(ErrorCode::CollisionConfiguration, "two bodies coincide");
}

}  // namespace

double potential(const Configuration& c) {
  require_collision_free(c);
  const auto& m = c.system.masses;
  double U = 0.0;
  for (int i = 0; i < c.system.n_bodies; ++i)
    for (int j = i + 1; j < c.system.n_bodies; ++j) U += m[i] * m[j] / (c.body(i) - c.body(j)).norm();
  return U;
}

Vec potential_gradient(const Configuration& c) {
  require_collision_free(c);
  const int d = c.system.d;
  const auto& m = c.system.masses;
  Vec g = Vec::Zero(c.system.dim());
  for (int i = 0; i < c.system.n_bodies; ++i)
    for (int j = i + 1; j < c.system.n_bodies; ++j) {
      Vec x = c.body(i) - c.body(j);
      double r = x.norm();
      Vec f = -m[i] * m[j] / (r * r * r) * x;
      g.segment(i * d, d) += f;
      g.segment(j * d, d) -= f;
    }
  return g;
}

Mat hessian(const Configuration& c) {
  require_collision_free(c);
  const int d = c.system.d, nb = c.system.n_bodies;
  const auto& m = c.system.masses;
  Mat H = Mat::Zero(c.system.dim(), c.system.dim());
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) {
      if (i == j) continue;
      Vec x = c.body(i) - c.body(j);
      double r = x.norm();
      Vec u = x / r;
      Mat D = m[i] * m[j] / (r * r * r) * (Mat::Identity(d, d) - 3.0 * u * u.transpose());
      H.block(i * d, j * d, d, d) = D;
      H.block(i * d, i * d, d, d) -= D;
    }
  return H;
}

double moment_of_inertia(const Configuration& c) {
  return c.q.dot(c.system.mass_diagonal().cwiseProduct(c.q));
}

Configuration normalize(Configuration c) {
  const int d = c.system.d;
  Vec com = Vec::Zero(d);
  double total = 0.0;
  for (int i = 0; i < c.system.n_bodies; ++i) {
    com += c.system.masses[i] * c.body(i);
    total += c.system.masses[i];
  }
  com /= total;
  for (int i = 0; i < c.system.n_bodies; ++i) c.q.segment(i * d, d) -= com;
  double I = moment_of_inertia(c);
  if (!(I > 0)) throw Error(ErrorCode::CollisionConfiguration, "configuration has zero moment of inertia");
  c.q /= std::sqrt(I);
  return c;
}

Vec cc_residual(const Configuration& c) {
  return potential_gradient(c) + potential(c) * c.system.mass_diagonal().cwiseProduct(c.q);
}

CentralConfig central_configuration(const MassSystem& system, const Configuration& initial, double tol) {
  if (initial.q.size() != system.dim()) throw Error(ErrorCode::ConfigInvalid, "position vector has wrong length");
  Configuration c{system, initial.q};
  require_collision_free(c);
  c = normalize(c);
  const Vec mdiag = system.mass_diagonal();
  double res = cc_residual(c).norm();
  for (int it = 0; it < 200 && res > tol; ++it) {
    Vec F = cc_residual(c);
    Mat DF = hessian(c) + mdiag.cwiseProduct(c.q) * potential_gradient(c).transpose();
    DF.diagonal() += potential(c) * mdiag;
    Eigen::JacobiSVD<Mat> svd(DF, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-6);
    Vec step = -svd.solve(F);
    double lambda = 1.0;
    bool improved = false;
    for (int k = 0; k < 40; ++k, lambda *= 0.5) {
      Configuration trial{system, c.q + lambda * step};
      if (!(min_distance(trial) > 1e-8)) continue;
      trial = normalize(trial);
      double r = cc_residual(trial).norm();
      if (r < res) {
        c = trial;
        res = r;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (min_distance(c) < 1e-6) throw Error(ErrorCode::ConvergedToCollision, "iteration approached a collision");
  if (!(res <= tol)) throw Error(ErrorCode::SolverDiverged, "central configuration residual " + std::to_string(res));
  return {c, true, res};
}

Configuration equilateral_seed(const MassSystem& system) {
  if (system.n_bodies != 3 || system.d < 2) throw Error(ErrorCode::ConfigInvalid, "equilateral seed needs 3 planar bodies");
  Configuration c{system, Vec::Zero(system.dim())};
  for (int i = 0; i < 3; ++i) {
    double a = 2.0 * std::numbers::pi * i / 3.0 + 0.5 * std::numbers::pi;
    c.q(i * system.d) = std::cos(a);
    c.q(i * system.d + 1) = std::sin(a);
  }
  return normalize(c);
}

Configuration square_seed(const MassSystem& system) {
  if (system.n_bodies != 4 || system.d < 2) throw Error(ErrorCode::ConfigInvalid, "square seed needs 4 planar bodies");
  Configuration c{system, Vec::Zero(system.dim())};
  for (int i = 0; i < 4; ++i) {
    double a = 0.5 * std::numbers::pi * i + 0.25 * std::numbers::pi;
    c.q(i * system.d) = std::cos(a);
    c.q(i * system.d + 1) = std::sin(a);
  }
  return normalize(c);
}

Configuration collinear_seed(const MassSystem& system) {
  Configuration c{system, Vec::Zero(system.dim())};
  for (int i = 0; i < system.n_bodies; ++i) c.q(i * system.d) = i;
  return normalize(c);
}

Configuration configuration_from_json(const nlohmann::json& j) {
  if (!j.contains("masses") || !j.contains("positions"))
    throw Error(ErrorCode::ConfigInvalid, "configuration needs masses and positions");
  auto masses = j.at("masses").get<std::vector<double>>();
  auto pos = j.at("positions").get<std::vector<std::vector<double>>>();
  int d = j.contains("dimension") ? j.at("dimension").get<int>() : (pos.empty() ? 2 : static_cast<int>(pos[0].size()));
  if (pos.size() != masses.size()) throw Error(ErrorCode::ConfigInvalid, "one position per mass required");
  MassSystem s = MassSystem::make(masses, d);
  Configuration c{s, Vec::Zero(s.dim())};
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (static_cast<int>(pos[i].size()) != d) throw Error(ErrorCode::ConfigInvalid, "position has wrong dimension");
    for (int k = 0; k < d; ++k) c.q(static_cast<int>(i) * d + k) = pos[i][k];
  }
  return c;
}

Mat bbar_symmetric(const CentralConfig& cc) {
  const Configuration& c = cc.config;
  if (!cc.normalized || std::abs(moment_of_inertia(c) - 1.0) > 1e-9)
    throw Error(ErrorCode::NotNormalized, "central configuration must have unit moment of inertia");
  Vec isq = c.system.mass_diagonal().cwiseSqrt().cwiseInverse();
  Mat B = (2.0 / 9.0) / potential(c) * (isq.asDiagonal() * hessian(c) * isq.asDiagonal());
  return 0.5 * (B + B.transpose());
}

Vec bbar_spectrum(const CentralConfig& cc) {
  Eigen::SelfAdjointEigenSolver<Mat> es(bbar_symmetric(cc), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

const char* motion_name(Motion m) {
  switch (m) {
    case Motion::TotalCollision: return "collision";
    case Motion::ParabolicInfinity: return "parabolic";
    case Motion::HyperbolicInfinity: return "hyperbolic";
  }
  return "collision";
}

Motion motion_from_name(const std::string& name) {
  if (name == "collision" || name == "TotalCollision") return Motion::TotalCollision;
  if (name == "parabolic" || name == "ParabolicInfinity") return Motion::ParabolicInfinity;
  if (name == "hyperbolic" || name == "HyperbolicInfinity") return Motion::HyperbolicInfinity;
  throw Error(ErrorCode::ConfigInvalid, "unknown motion '" + name + "'");
}

SLProblem asymptotic_direction_problem(double b, Motion motion) {
  auto one = MatrixFunction::constant(Mat::Identity(1, 1));
  auto zero = MatrixFunction::constant(Mat::Zero(1, 1));
  if (motion == Motion::TotalCollision) {
    SLProblem p = make_problem(0.0, 1.0, one, zero, MatrixFunction::scalar([b](double t) { return b / (t * t); }),
                               "collision direction");
    p.left = b < 0.75 ? EndpointKind::SingularLimitCircle : EndpointKind::SingularLimitPoint;
    p.bessel_q = b;
    return p;
  }
  const double inf = std::numeric_limits<double>::infinity();
  SLProblem p;
  if (motion == Motion::ParabolicInfinity)
    p = make_problem(1.0, inf, one, zero, MatrixFunction::scalar([b](double t) { return b / (t * t); }),
                     "parabolic direction");
  else
    p = make_problem(1.0, inf, one, zero, MatrixFunction::scalar([b](double t) { return b / (t * t * t); }),
                     "hyperbolic direction");
  p.right = EndpointKind::SingularLimitPoint;
  return p;
}

IndexReport asymptotic_morse_from_bbar(const Mat& bbar, Motion motion, const std::vector<double>& delta_schedule) {
  IndexReport rep;
  rep.command = "nbody";
  rep.index = "asymptotic_morse";
  rep.assumptions = {{"H1", true}, {"H2", true}, {"H3", true}, {"H4", true}};
  rep.diagnostics["motion"] = motion_name(motion);
  const int n = static_cast<int>(bbar.rows());
  Mat S = 0.5 * (bbar + bbar.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
  Vec ev = es.eigenvalues();
  rep.diagnostics["bbar_spectrum"] = std::vector<double>(ev.data(), ev.data() + ev.size());

  std::vector<DirectionVerdict> dirs(n, DirectionVerdict::FiniteMorse);
  DirectionVerdict overall = DirectionVerdict::FiniteMorse;
  if (motion != Motion::HyperbolicInfinity) {
    BesselMatrixProblem bp;
    bp.n = n;
    bp.R = [S](double t) { return Mat(S / (t * t)); };
    bp.end = motion == Motion::TotalCollision ? TailEnd::ZeroEnd : TailEnd::InfinityEnd;
    bp.tail = TailModel{TailModel::Kind::Constant, S, Mat::Zero(n, n), 1.0};
    BesselClassification cl = classify(bp);
    dirs = cl.directions;
    overall = cl.overall;
    rep.diagnostics["fredholm"] = cl.fredholm;
  } else {
    rep.diagnostics["note"] = "potential decays like t^-3; finite for every limiting configuration";
  }
  std::vector<std::string> names;
  for (auto v : dirs) names.push_back(direction_verdict_name(v));
  rep.diagnostics["directions"] = names;

  if (overall == DirectionVerdict::InfiniteMorse) {
    rep.verdict = Verdict::infinite("an eigenvalue of the limiting matrix lies below -1/4");
    return rep;
  }
  if (overall == DirectionVerdict::Threshold) {
    rep.verdict = Verdict::undetermined("an eigenvalue of the limiting matrix equals -1/4; the threshold case is open");
    return rep;
  }

  long total = 0;
  nlohmann::ordered_json per = nlohmann::ordered_json::array();
  std::vector<std::pair<double, long>> done;
  for (int i = 0; i < n; ++i) {
    double b = ev(i);
    long idx = -1;
    for (auto& [bv, k] : done)
      if (std::abs(bv - b) <= 1e-9 * std::max(1.0, std::abs(b))) idx = k;
    if (idx < 0) {
      IndexReport sub = morse_index_dirichlet(asymptotic_direction_problem(b, motion), delta_schedule);
      if (!sub.verdict.is_integer()) {
        rep.verdict = Verdict::undetermined("direction index did not stabilize: " + sub.verdict.reason);
        return rep;
      }
      idx = sub.verdict.value;
      done.emplace_back(b, idx);
    }
    per.push_back({{"eigenvalue", b}, {"index", idx}});
    total += idx;
  }
  rep.diagnostics["direction_indices"] = per;
  if (motion == Motion::HyperbolicInfinity) rep.diagnostics["index_source"] = "truncated interval, diagnostic";
  rep.verdict = Verdict::integer(total);
  return rep;
}

IndexReport asymptotic_morse(const CentralConfig& cc, Motion motion, const std::vector<double>& delta_schedule) {
  if (!cc.normalized || std::abs(moment_of_inertia(cc.config) - 1.0) > 1e-9)
    throw Error(ErrorCode::UnnormalizedCC, "central configuration must be normalized");
  if (!(cc_residual(cc.config).norm() <= 1e-8))
    throw Error(ErrorCode::UnnormalizedCC, "configuration is not central within tolerance");
  IndexReport rep = asymptotic_morse_from_bbar(bbar_symmetric(cc), motion, delta_schedule);
  rep.diagnostics["cc_residual"] = cc.residual;
  return rep;
}

}  // namespace symind

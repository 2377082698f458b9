#include "symind/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace symind {

double q_of_r(double r) {
  if (!(r < 1.0)) throw Error(ErrorCode::OutOfRange, "r must be below 1");
  return r >= 0 ? -0.25 + r * r : -0.25 - r * r;
}

double r_of_q(double q) {
  if (!(q < 0.75)) throw Error(ErrorCode::OutOfRange, "q must be below 3/4");
  return q >= -0.25 ? std::sqrt(q + 0.25) : -std::sqrt(-0.25 - q);
}

SingularPair singular_solutions(double r, double t) {
  const double s = std::sqrt(t), lt = std::log(t);
  if (r > 0) {
    // ½(t^{1/2-r} + t^{1/2+r}) and (t^{1/2+r} - t^{1/2-r})/2r without cancellation
    double ch = std::cosh(r * lt), sh = std::sinh(r * lt);
    double y1 = s * ch, y2 = s * sh / r;
    return {y1, y2, (0.5 * y1 + r * s * sh) / t, (0.5 * y2 + s * ch) / t};
  }
  if (r == 0) {
    return {s, s * lt, 0.5 / s, (0.5 * lt + 1.0) / s};
  }
  double c = std::cos(r * lt), sn = std::sin(r * lt);
  return {s * c, s * sn / r, (0.5 * c - r * sn) / s, (0.5 * sn / r + c) / s};
}

std::vector<double> zero_sequence(double q, double eps, double c) { return zero_sequence(q, eps, c, c); }

std::vector<double> zero_sequence(double q, double eps, double c, double phase_point) {
  if (!(q < -0.25)) throw Error(ErrorCode::OutOfRange, "oscillatory zeros need q < -1/4");
  const double nu = std::sqrt(-0.25 - q);
  std::vector<double> z;
  // zeros of t^{1/2} sin(ν ln(t / phase_point)) at phase_point·e^{kπ/ν}
  double kmax = std::floor(std::log(c / phase_point) * nu / std::numbers::pi);
  for (double k = kmax;; k -= 1.0) {
    double t = phase_point * std::exp(k * std::numbers::pi / nu);
    if (!(t > eps)) break;
    if (t <= c && std::abs(t - phase_point) > 1e-15 * phase_point) z.push_back(t);
    if (z.size() > 100000) break;
  }
  std::sort(z.begin(), z.end());
  return z;
}

const char* direction_verdict_name(DirectionVerdict v) {
  switch (v) {
    case DirectionVerdict::FiniteMorse: return "FiniteMorse";
    case DirectionVerdict::InfiniteMorse: return "InfiniteMorse";
    case DirectionVerdict::Threshold: return "Threshold";
  }
  return "Threshold";
}

DirectionVerdict classify_coupling(double mu, double tol) {
  if (mu > -0.25 + tol) return DirectionVerdict::FiniteMorse;
  if (mu < -0.25 - tol) return DirectionVerdict::InfiniteMorse;
  return DirectionVerdict::Threshold;
}

BesselClassification classify(const BesselMatrixProblem& problem, double tol) {
  if (!problem.tail) throw Error(ErrorCode::TailModelMissing, "classification needs a declared tail model");
  const Mat& L = problem.tail->limit;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (L + L.transpose()), Eigen::EigenvaluesOnly);
  BesselClassification out;
  bool any_inf = false, any_thr = false;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double mu = es.eigenvalues()(i);
    out.limit_eigenvalues.push_back(mu);
    DirectionVerdict v = classify_coupling(mu, tol);
    out.directions.push_back(v);
    any_inf |= v == DirectionVerdict::InfiniteMorse;
    any_thr |= v == DirectionVerdict::Threshold;
  }
  out.overall = any_inf   ? DirectionVerdict::InfiniteMorse
                : any_thr ? DirectionVerdict::Threshold
                          : DirectionVerdict::FiniteMorse;
  // at infinity 0 sits in the essential spectrum
  out.fredholm = problem.end == TailEnd::ZeroEnd;
  return out;
}

LagrangianFrame friedrichs_trace_frame(double r) {
  if (r >= 1.0) throw Error(ErrorCode::LimitPointNoCondition, "limit point endpoint takes no boundary condition");
  if (!(r > 0.0)) throw Error(ErrorCode::OutOfRange, "Friedrichs selection needs 0 < r < 1");
  Mat v(2, 1);
  v << 1.0, -r;
  return lagrangian_from_columns(SymplecticSpace::standard(1), v);
}

}  // namespace symind

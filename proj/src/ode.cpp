#include "symind/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace symind {

Mat symplectic_project(const Mat& M, const Mat& J, int iterations) {
  Mat X = M;
  const int d = static_cast<int>(M.rows());
  for (int k = 0; k < iterations; ++k) {
    Mat E = X.transpose() * J * X - J;
    if (E.cwiseAbs().maxCoeff() < 1e-15) break;
    X = X * (Mat::Identity(d, d) + 0.5 * J * E);
  }
  return X;
}

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

}  // namespace

OdeResult integrate(const MatrixField& f, double t0, const Mat& y0, double t1, const OdeOptions& opt) {
  OdeResult res;
  res.nodes.push_back({t0, y0});
  if (t0 == t1) return res;
  if (std::abs(t1 - t0) <= opt.h_min_rel * std::max(1.0, std::abs(t0))) {
    res.nodes.push_back({t1, y0 + (t1 - t0) * f(t0, y0)});
    return res;
  }
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  double h = opt.h_init > 0 ? std::min(opt.h_init, span) : span * 1e-3;
  Mat J;
  if (opt.symplectic) J = standard_J(static_cast<int>(y0.rows()) / 2);

  double t = t0;
  Mat y = y0;
  Mat k1 = f(t, y);
  int steps = 0;
  while (dir * (t1 - t) > 0) {
    if (++steps > opt.max_steps) throw Error(ErrorCode::StepSizeUnderflow, "step budget exhausted");
    double hmin = opt.h_min_rel * std::max(1.0, std::abs(t));
    if (h < hmin) {
      std::ostringstream os;
      os << "step " << h << " below floor at t=" << t;
      throw Error(ErrorCode::StepSizeUnderflow, os.str());
    }
    bool last = false;
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    double s = dir * h;
    Mat k2 = f(t + c2 * s, y + s * (a21 * k1));
    Mat k3 = f(t + c3 * s, y + s * (a31 * k1 + a32 * k2));
    Mat k4 = f(t + c4 * s, y + s * (a41 * k1 + a42 * k2 + a43 * k3));
    Mat k5 = f(t + c5 * s, y + s * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Mat k6 = f(t + s, y + s * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Mat yn = y + s * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Mat k7 = f(t + s, yn);
    Mat err = s * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double en = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
      double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y.data()[i]), std::abs(yn.data()[i]));
      en = std::max(en, std::abs(err.data()[i]) / sc);
    }
    if (!std::isfinite(en)) {
      h *= 0.25;
      continue;
    }
    if (en <= 1.0) {
      t = last ? t1 : t + s;
      y = std::move(yn);
      if (opt.symplectic) {
        double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
        double drift = symplectic_residual(y, J) / (scale * scale);
        res.drift.push_back(drift);
        res.max_drift = std::max(res.max_drift, drift);
        if (drift > opt.drift_budget) {
          std::ostringstream os;
          os << "drift " << drift << " at t=" << t;
          throw Error(ErrorCode::DriftBudgetExceeded, os.str());
        }
        if (drift > opt.project_above) y = symplectic_project(y, J);
      }
      res.nodes.push_back({t, y});
      k1 = f(t, y);
      double fac = en > 0 ? 0.9 * std::pow(en, -0.2) : 5.0;
      h *= std::clamp(fac, 0.2, 5.0);
    } else {
      h *= std::clamp(0.9 * std::pow(en, -0.25), 0.1, 0.9);
    }
  }
  return res;
}

}  // namespace symind

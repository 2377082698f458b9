#pragma once

#include <functional>
#include <vector>

#include "symind/symplectic.hpp"

namespace symind {

struct OdeOptions {
  double abs_tol = 1e-11;
  double rel_tol = 1e-10;
  double h_init = 0.0;  // 0 picks a step from the span
  double h_min_rel = 1e-14;
  int max_steps = 2000000;
  // Hamiltonian systems: project onto the symplectic group when drift exceeds project_above.
  bool symplectic = false;
  double project_above = 1e-10;
  double drift_budget = 1e-8;
};

struct OdeNode {
  double t;
  Mat y;
};

struct OdeResult {
  std::vector<OdeNode> nodes;
  std::vector<double> drift;  // residual per accepted step, before projection
  double max_drift = 0.0;
};

using MatrixField = std::function<Mat(double, const Mat&)>;

// Dormand–Prince 5(4) from t0 to t1 (either direction).
OdeResult integrate(const MatrixField& f, double t0, const Mat& y0, double t1, const OdeOptions& opt = {});

// One correction step M ← M(I + ½ J E) with E = MᵀJM − J, repeated while it helps.
Mat symplectic_project(const Mat& M, const Mat& J, int iterations = 3);

}  // namespace symind

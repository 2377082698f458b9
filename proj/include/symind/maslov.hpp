#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "symind/symplectic.hpp"

namespace symind {

struct LagrangianPath {
  SymplecticSpace space;
  std::function<LagrangianFrame(double)> sampler;
  double a = 0.0;
  double b = 1.0;
  int samples = 256;
  bool refinable = true;
  bool constant = false;
  // parameters the scan must sample, e.g. accepted ODE steps of the underlying flow
  std::vector<double> knots;

  LagrangianFrame operator()(double t) const { return sampler(t); }
};

LagrangianPath constant_path(const LagrangianFrame& L, double a, double b);
// t ↦ M(t)·L for a path of symplectic matrices.
LagrangianPath transported_path(const LagrangianFrame& L, std::function<Mat(double)> M, double a, double b);

struct CrossingRecord {
  double t = 0.0;
  Mat intersection_basis;
  InertiaTriple inertia;
  int contribution = 0;
};

struct MaslovOptions {
  int samples = 256;
  double t_tol = 1e-10;
  double merge_tol = 1e-8;
  double angle_budget = 0.39269908169872414;  // π/8
  double endpoint_angle_tol = 1e-8;
  double fd_rel_step = 1e-5;
  double form_floor = 1e-7;
  int max_samples = 1 << 15;
  std::vector<double> deltas{1e-6, 1e-5, 1e-4};
  unsigned seed = 20240611u;
};

struct MaslovResult {
  int value = 0;
  std::vector<CrossingRecord> crossings;
  double perturbation = 0.0;
};

// Quadratic form v ↦ d/dt ω(v, w(t)) on ℓ(t0) ∩ reference, expressed in the returned basis.
struct CrossingForm {
  Mat basis;
  Mat gamma;
  InertiaTriple inertia;
};

CrossingForm crossing_form_matrix(const LagrangianPath& path, const LagrangianFrame& reference, double t0, double h,
                                  const MaslovOptions& opt = {});
InertiaTriple crossing_form(const LagrangianPath& path, const LagrangianFrame& reference, double t0, double h);

// The n×n form d/dt ω(v, w(t)) on all of ℓ(t0), computed in the chart of complement W.
Mat q_form(const LagrangianPath& path, double t0, double h, const Mat& W, double a, double b);

MaslovResult maslov_clm(const LagrangianPath& path1, const LagrangianPath& path2, double a, double b,
                        const MaslovOptions& opt = {});

// Eigenvalues of the unitary V Vᵀ with V = U1* U2; eigenvalue 1 has multiplicity dim(ℓ1 ∩ ℓ2).
Eigen::VectorXcd souriau_spectrum(const LagrangianFrame& l1, const LagrangianFrame& l2);

int triple_index(const LagrangianFrame& alpha, const LagrangianFrame& beta, const LagrangianFrame& gamma,
                 double tol = kDefaultTol);
int hormander_index(const LagrangianFrame& l1, const LagrangianFrame& l2, const LagrangianFrame& m1,
                    const LagrangianFrame& m2, double tol = kDefaultTol);

}  // namespace symind

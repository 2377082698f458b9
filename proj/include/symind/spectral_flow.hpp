#pragma once

#include <functional>
#include <vector>

#include "symind/sturm_liouville.hpp"

namespace symind {

struct Mesh {
  std::vector<double> t;  // nodes t_0 = a < ... < t_N = b

  static Mesh uniform(double a, double b, int cells);
  // nodes cluster toward a (power > 1) as t = a + (b - a) ξ^power
  static Mesh graded_left(double a, double b, int cells, double power);
  int cells() const { return static_cast<int>(t.size()) - 1; }
};

// Mass-normalized symmetric matrix W^{-1/2} K W^{-1/2} stored as a band block followed by a dense border
// (the border carries boundary unknowns of non-separated conditions).
struct DiscreteOperator {
  SLProblem problem;
  BoundaryCondition bc;
  int grid_size = 0;
  int bandwidth = 0;
  int boundary_lead = 0;   // leading band rows carrying left boundary unknowns
  int boundary_trail = 0;  // trailing band rows carrying right boundary unknowns
  Mat band;    // band(i, d) = A(i, i + d), d = 0..bandwidth
  Mat border;  // band_size × k
  Mat corner;  // k × k
  std::vector<double> nodes;

  int band_size() const { return static_cast<int>(band.rows()); }
  int size() const { return band_size() + static_cast<int>(corner.rows()); }
  Mat dense() const;
  // Gershgorin bound on the spectral radius
  double norm() const;
};

DiscreteOperator discretize(const SLProblem& problem, const BoundaryCondition& bc, int N);
DiscreteOperator discretize(const SLProblem& problem, const BoundaryCondition& bc, const Mesh& mesh);

// number of eigenvalues strictly below shift
int count_below(const DiscreteOperator& op, double shift);
// 1e-9 times the Gershgorin bound over the interior rows
double kernel_threshold(const DiscreteOperator& op);
Vec eigenvalues(const DiscreteOperator& op);
// eigenvalues below the mass-normalized matrix's k-th smallest (ascending)
Vec lowest_eigenvalues(const DiscreteOperator& op, int k);

struct SpectralFlowOptions {
  double window_gap = 1.0;
  int max_bisections = 40;
  double min_cell = 1e-9;
};

struct SpectralFlowResult {
  int flow = 0;
  std::vector<double> partition;
  std::vector<double> margins;
};

SpectralFlowResult spectral_flow(const std::function<DiscreteOperator(double)>& family, double s0, double s1,
                                 const SpectralFlowOptions& opt = {});

struct SfFormulaReport {
  int sf = 0;
  int maslov = 0;
  bool agree = false;
  MaslovResult maslov_detail;
};

// spfl(L_s) against −μ(Λ_s, Graph(γ_s(b))) for regular problems.
SfFormulaReport verify_sf_formula(const std::function<SLProblem(double)>& problem_family,
                                  const std::function<BoundaryCondition(double)>& bc_family, double s0, double s1,
                                  int N, const SpectralFlowOptions& opt = {});

// Line in R² at angle θ from the quasi-derivative axis, in (x^{[1]}, x) coordinates.
LagrangianFrame rotated_line(double theta);

struct EigenTrace {
  std::vector<double> s;
  std::vector<Vec> eigenvalues;
};

EigenTrace eigen_trace(const std::function<DiscreteOperator(double)>& family, const std::vector<double>& s_grid,
                       int tracked);

struct RellichReport {
  std::vector<double> u;
  std::vector<double> M;
  std::vector<std::vector<int>> count_below_minus_M;  // [u][M]
  std::vector<double> bottom_eigenvalue;              // λ₁(u)
  int maslov_prediction = 0;
  bool monotone_bottom = false;
};

struct RellichOptions {
  std::vector<double> u{0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
  std::vector<double> M{10.0, 1e2, 1e3, 1e4};
  int N = 2048;
  double grading = 3.0;
};

// Rellich scan for a singular-end family: bc_line(u) is the singular-end trace line (τ coordinates) at
// parameter u, with bc_line(0) the Friedrichs line; the regular end stays Dirichlet.
RellichReport rellich_ghosts(double q, double truncation, const std::function<LagrangianFrame(double)>& bc_line,
                             const RellichOptions& opt = {});

struct MorseJumpReport {
  int morse0 = 0;
  int morse1 = 0;
  int sf = 0;
  int maslov = 0;
  int residual = 0;
};

MorseJumpReport morse_jump_check(const SLProblem& problem, const std::function<BoundaryCondition(double)>& bc_path,
                                 int N);

}  // namespace symind

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "symind/symplectic.hpp"

namespace symind {

struct BesselParam {
  double q;
  double r;
};

// q(r) = -1/4 + r² for r ≥ 0 and -1/4 - r² for r < 0
double q_of_r(double r);
double r_of_q(double q);

struct SingularPair {
  double y1, y2, dy1, dy2;
};

// Solution pair of -y'' + (q(r)/t²) y = 0 with [y1, y2] = -1.
SingularPair singular_solutions(double r, double t);

// Zeros in (eps, c] of the solution vanishing at phase_point (defaults to c), ascending.
std::vector<double> zero_sequence(double q, double eps, double c);
std::vector<double> zero_sequence(double q, double eps, double c, double phase_point);

enum class TailEnd { ZeroEnd, InfinityEnd };

struct TailModel {
  enum class Kind { Constant, PowerDecay };
  Kind kind = Kind::Constant;
  Mat limit;       // R at the singular end
  Mat amplitude;   // PowerDecay: R(t) ≈ limit + amplitude·s^power, s → 0 the distance-like variable
  double power = 1.0;
};

// l_R = -d²/dt² + R(t)/t² near the singular end.
struct BesselMatrixProblem {
  int n = 1;
  std::function<Mat(double)> R;
  TailEnd end = TailEnd::ZeroEnd;
  std::optional<TailModel> tail;
};

enum class DirectionVerdict { FiniteMorse, InfiniteMorse, Threshold };
const char* direction_verdict_name(DirectionVerdict v);

struct BesselClassification {
  std::vector<double> limit_eigenvalues;  // ascending
  std::vector<DirectionVerdict> directions;
  DirectionVerdict overall = DirectionVerdict::FiniteMorse;
  bool fredholm = false;
};

BesselClassification classify(const BesselMatrixProblem& problem, double threshold_tol = 1e-12);
DirectionVerdict classify_coupling(double limit_eigenvalue, double threshold_tol = 1e-12);

// Friedrichs line in the singular-end trace coordinates τ = (c1, -c2) for f = c1 y1 + c2 y2.
LagrangianFrame friedrichs_trace_frame(double r);

}  // namespace symind

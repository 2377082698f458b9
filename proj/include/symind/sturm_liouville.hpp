#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "symind/coefficients.hpp"
#include "symind/maslov.hpp"
#include "symind/ode.hpp"
#include "symind/report.hpp"

namespace symind {

enum class EndpointKind { Regular, SingularLimitPoint, SingularLimitCircle, Unknown };
enum class Endpoint { Left, Right };
enum class EndpointClass { Regular, LimitCircle, LimitPoint };

const char* endpoint_class_name(EndpointClass c);

// l x = -(P x' + Q x)' + Qᵀ x' + R x on (a, b); b may be +infinity.
struct SLProblem {
  int n = 1;
  double a = 0.0;
  double b = 1.0;
  EndpointKind left = EndpointKind::Regular;
  EndpointKind right = EndpointKind::Regular;
  MatrixFunction P, Q, R;
  std::function<Mat(double, double)> perturbation;  // (s, t) ↦ C(s, t), C(0, ·) = 0
  std::string name;
  std::optional<double> bessel_q;  // R = q/t², P = 1, Q = 0 on (0, b]; analytic kernel available

  // problem with R replaced by R + C(s,·)
  SLProblem at_parameter(double s) const;
  // problem with R replaced by R - λ
  SLProblem shifted(double lambda) const;
};

SLProblem make_problem(double a, double b, MatrixFunction P, MatrixFunction Q, MatrixFunction R,
                       std::string name = "");

struct HamiltonianField {
  SLProblem problem;
  // ż = J H z with z = (x^{[1]}, x)
  Mat H(double t) const;
  Mat A(double t) const;
};

HamiltonianField to_hamiltonian(const SLProblem& problem);

class FundamentalSolution {
 public:
  FundamentalSolution(SLProblem problem, double base, std::vector<OdeNode> nodes, std::vector<double> drift,
                      double max_drift, OdeOptions opt);

  const SLProblem& problem() const { return problem_; }
  double base() const { return base_; }
  double lo() const { return nodes_.front().t; }
  double hi() const { return nodes_.back().t; }
  // γ(t) for t inside the integrated span, re-integrating from the nearest stored node
  Mat at(double t) const;
  double max_drift() const { return max_drift_; }
  const std::vector<double>& drift_log() const { return drift_; }
  const std::vector<OdeNode>& nodes() const { return nodes_; }

 private:
  SLProblem problem_;
  double base_;
  std::vector<OdeNode> nodes_;  // sorted by t
  std::vector<double> drift_;
  double max_drift_;
  OdeOptions opt_;
};

FundamentalSolution fundamental_solution(const SLProblem& problem, double t0, double c, double d,
                                         const OdeOptions& opt = {});

// ⟨f^{[1]}, g⟩ - ⟨f, g^{[1]}⟩ with data stacked as (x^{[1]}, x)
double boundary_bracket(const Vec& f_data, const Vec& g_data);

struct ConjugatePoint {
  double t;
  int multiplicity;
};

struct ConjugateOptions {
  // scan variable: t = origin + e^u (left singular end at origin) when log_scan is set
  bool log_scan = false;
  double origin = 0.0;
  // the base point of γ is the right end of the span when set
  bool base_at_right = false;
  OdeOptions ode{};
  MaslovOptions maslov{};
};

struct ConjugateResult {
  std::vector<ConjugatePoint> points;
  bool all_positive = true;
  double max_drift = 0.0;
};

ConjugateResult conjugate_points(const SLProblem& problem, const LagrangianFrame& bc_at_start,
                                 const LagrangianFrame& reference, double c, double d,
                                 const ConjugateOptions& opt = {});
ConjugateResult conjugate_points(const FundamentalSolution& fs, const LagrangianFrame& bc_at_start,
                                 const LagrangianFrame& reference, double c, double d,
                                 const ConjugateOptions& opt = {});

std::vector<double> default_delta_schedule();

IndexReport morse_index_dirichlet(const SLProblem& problem, const std::vector<double>& delta_schedule,
                                  const OdeOptions& ode = {});

struct BoundaryCondition {
  enum class Kind { Dirichlet, Neumann, GeneralLagrangian, FriedrichsAtSingular };
  Kind kind = Kind::Dirichlet;
  std::optional<LagrangianFrame> frame;  // in the boundary space (−Ω ⊕ Ω)

  static BoundaryCondition dirichlet() { return {Kind::Dirichlet, std::nullopt}; }
  static BoundaryCondition neumann() { return {Kind::Neumann, std::nullopt}; }
  static BoundaryCondition friedrichs() { return {Kind::FriedrichsAtSingular, std::nullopt}; }
  static BoundaryCondition general(LagrangianFrame f) { return {Kind::GeneralLagrangian, std::move(f)}; }
};

// Lagrangian in the boundary space encoding the condition for this problem.
LagrangianFrame boundary_lagrangian(const SLProblem& problem, const BoundaryCondition& bc);
// Traces of the kernel of the maximal operator at λ = 0.
LagrangianFrame kernel_trace(const SLProblem& problem, const OdeOptions& ode = {});

IndexReport morse_index_general(const SLProblem& problem, const BoundaryCondition& bc,
                                const std::vector<double>& delta_schedule = default_delta_schedule(),
                                int discrete_check_N = 1024);

using SolutionData = std::function<Vec(double)>;  // t ↦ (x^{[1]}(t), x(t))

struct TraceOptions {
  std::vector<double> offsets{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  double cauchy_tol = 1e-6;
};

// (−[f, y_i](a⁺) for kernel functions, [f, z_j](b) for probes)
Vec trace_map(const SLProblem& problem, const SolutionData& f, const std::vector<SolutionData>& kernel_basis,
              const std::vector<SolutionData>& regular_end_probes, const TraceOptions& opt = {});

// Indices of `count` candidates whose bracket Gram matrix G_ij = [y_i, y_j](a⁺) is nondegenerate.
std::vector<int> select_kernel_functions(const SLProblem& problem, const std::vector<SolutionData>& candidates, int count,
                                         const TraceOptions& opt = {});

EndpointClass endpoint_classify(const SLProblem& problem, Endpoint end);

}  // namespace symind

#pragma once

#include <string>
#include <vector>

#include "symind/bessel.hpp"
#include "symind/report.hpp"
#include "symind/sturm_liouville.hpp"

namespace symind {

struct MassSystem {
  int n_bodies = 0;
  int d = 2;
  std::vector<double> masses;

  static MassSystem make(std::vector<double> masses, int d);
  // diag(m_i I_d)
  Vec mass_diagonal() const;
  int dim() const { return n_bodies * d; }
};

struct Configuration {
  MassSystem system;
  Vec q;  // q_i stacked

  Eigen::Ref<const Vec> body(int i) const { return q.segment(i * system.d, system.d); }
};

struct CentralConfig {
  Configuration config;
  bool normalized = false;
  double residual = 0.0;
};

double potential(const Configuration& c);
Vec potential_gradient(const Configuration& c);
Mat hessian(const Configuration& c);
double moment_of_inertia(const Configuration& c);
double min_distance(const Configuration& c);

// subtract the center of mass and scale to moment of inertia 1
Configuration normalize(Configuration c);
// ∇U(q) + U(q) M q
Vec cc_residual(const Configuration& c);

CentralConfig central_configuration(const MassSystem& system, const Configuration& initial, double tol = 1e-12);

Configuration equilateral_seed(const MassSystem& system);
Configuration square_seed(const MassSystem& system);
Configuration collinear_seed(const MassSystem& system);
// {"masses": [...], "positions": [[...]], "dimension": d}
Configuration configuration_from_json(const nlohmann::json& j);

// (2/9) M^{-1/2} D²U M^{-1/2} / U, similar to (2/9) M^{-1} D²U / U
Mat bbar_symmetric(const CentralConfig& cc);
Vec bbar_spectrum(const CentralConfig& cc);

enum class Motion { TotalCollision, ParabolicInfinity, HyperbolicInfinity };
const char* motion_name(Motion m);
Motion motion_from_name(const std::string& name);

IndexReport asymptotic_morse(const CentralConfig& cc, Motion motion,
                             const std::vector<double>& delta_schedule = default_delta_schedule());
// classification from a given symmetric B̄
IndexReport asymptotic_morse_from_bbar(const Mat& bbar, Motion motion,
                                       const std::vector<double>& delta_schedule = default_delta_schedule());

// scalar limiting problem along one eigendirection of B̄
SLProblem asymptotic_direction_problem(double bbar_eigenvalue, Motion motion);

}  // namespace symind

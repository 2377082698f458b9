#pragma once

#include <string>
#include <vector>

#include "symind/nbody.hpp"
#include "symind/sturm_liouville.hpp"

namespace symind {

struct CatalogEntry {
  std::string name;
  std::string signature;
  std::string summary;
  std::vector<std::string> details;  // coefficient formulas and known values
};

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry& catalog_lookup(const std::string& name);
std::string catalog_describe(const std::string& name);

// "name(arg, arg)" → name and raw arguments
struct CatalogCall {
  std::string name;
  std::vector<std::string> args;
};
CatalogCall parse_catalog_call(const std::string& text);

SLProblem free_problem(double a, double b);
// -x'' - ω² x on (a, b)
SLProblem harmonic_problem(double omega, double a, double b);
// -x'' + q/t² x on (0, b]
SLProblem bessel_problem(double q, double b = 1.0);
// -x'' + (2q cos 2t - a) x on (0, π)
SLProblem mathieu_problem(double a, double q);

// two-body, lagrange3, euler3, square4
CentralConfig named_central_configuration(const std::string& id);
// R = B̄/t² on (0, 1] (collision), R = B̄/t² on [1, ∞) (parabolic), R = B̄/t³ on [1, ∞) (hyperbolic)
SLProblem nbody_asymptotic_problem(const std::string& id, Motion motion);

}  // namespace symind

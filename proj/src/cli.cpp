#include "symind/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "symind/bessel.hpp"
#include "symind/catalog.hpp"
#include "symind/nbody.hpp"
#include "symind/spectral_flow.hpp"

namespace symind::cli {

int exit_code_for(const Verdict& v) { return v.kind == Verdict::Kind::Undetermined ? 2 : 0; }

namespace {

using ojson = nlohmann::ordered_json;

struct Options {
  std::string problem = "harmonic";
  std::vector<double> interval;
  std::optional<double> omega, q, r;
  std::string bc = "dirichlet";
  std::vector<double> delta_schedule;
  int N = 1024;
  double perturbation = -100.0;
  double truncation = 1e-7;
  std::vector<double> window;
  std::string alpha, beta, gamma, l1, l2, m1, m2;
  std::string config_id = "lagrange3";
  std::string input;
  std::string motion = "collision";
  std::string catalog_action;
  std::string catalog_name;
  std::string config_file;
  std::string report;
  std::string csv;
  int jobs = 1;
};

struct Tolerance {
  OdeOptions ode;
  double lin = kDefaultTol;
  std::optional<double> override_value;
};

Tolerance tolerance_from_env() {
  Tolerance t;
  if (const char* s = std::getenv("SYMIND_TOL")) {
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || !(v > 0) || !(v < 1e-2))
      throw Error(ErrorCode::ConfigInvalid, "SYMIND_TOL must be a number in (0, 1e-2)");
    t.override_value = v;
    t.ode.rel_tol = v;
    t.ode.abs_tol = 0.1 * v;
    t.lin = v;
  }
  return t;
}

bool is_catalog_name(const std::string& name) {
  for (const auto& e : catalog_entries())
    if (e.name == name) return true;
  return false;
}

double number(const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigInvalid, "not a number: '" + s + "'");
  }
}

std::pair<double, double> interval_or(const Options& o, double a, double b) {
  if (o.interval.empty()) return {a, b};
  if (o.interval.size() != 2 || !(o.interval[0] < o.interval[1]))
    throw Error(ErrorCode::ConfigInvalid, "--interval needs two increasing numbers");
  return {o.interval[0], o.interval[1]};
}

double param(const CatalogCall& c, std::size_t i, const std::optional<double>& flag, const char* what) {
  if (c.args.size() > i) return number(c.args[i]);
  if (flag) return *flag;
  throw Error(ErrorCode::ConfigInvalid, std::string("missing parameter ") + what);
}

SLProblem resolve_problem(const Options& o) {
  CatalogCall c = parse_catalog_call(o.problem);
  if (!is_catalog_name(c.name)) {
    if (!std::filesystem::exists(o.problem))
      throw Error(ErrorCode::ConfigInvalid, "problem '" + o.problem + "' is neither a catalog entry nor a file");
    GridCoefficients g = read_coefficient_csv(o.problem);
    auto [a, b] = interval_or(o, g.t_min, g.t_max);
    if (a < g.t_min || b > g.t_max) throw Error(ErrorCode::ConfigInvalid, "interval exceeds the sampled range");
    return make_problem(a, b, g.P, g.Q, g.R, o.problem);
  }
  if (c.name == "free") {
    auto [a, b] = interval_or(o, 0.0, 1.0);
    return free_problem(a, b);
  }
  if (c.name == "harmonic") {
    auto [a, b] = interval_or(o, 0.0, 1.0);
    return harmonic_problem(param(c, 0, o.omega, "omega"), a, b);
  }
  if (c.name == "bessel" || c.name == "bessel_r") {
    double q = c.name == "bessel" ? param(c, 0, o.q, "q") : q_of_r(param(c, 0, o.r, "r"));
    if (c.name == "bessel" && o.r && c.args.empty() && !o.q) q = q_of_r(*o.r);
    auto [a, b] = interval_or(o, 0.0, 1.0);
    if (a != 0.0) throw Error(ErrorCode::ConfigInvalid, "the Bessel problem lives on (0, b]");
    return bessel_problem(q, b);
  }
  if (c.name == "mathieu") {
    if (c.args.size() != 2) throw Error(ErrorCode::ConfigInvalid, "mathieu(a,q) takes two parameters");
    return mathieu_problem(number(c.args[0]), number(c.args[1]));
  }
  throw Error(ErrorCode::ConfigInvalid, "catalog entry '" + c.name + "' is not a Sturm-Liouville problem here");
}

BoundaryCondition resolve_bc(const std::string& s) {
  if (s == "dirichlet") return BoundaryCondition::dirichlet();
  if (s == "neumann") return BoundaryCondition::neumann();
  if (s == "friedrichs") return BoundaryCondition::friedrichs();
  throw Error(ErrorCode::ConfigInvalid, "unknown boundary condition '" + s + "'");
}

LagrangianFrame parse_frame(const std::string& text, const char* what, double tol) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigInvalid, std::string(what) + " is not valid JSON");
  }
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::ConfigInvalid, std::string(what) + " needs column vectors");
  auto cols = j.get<std::vector<std::vector<double>>>();
  const int dim = static_cast<int>(cols[0].size());
  if (dim % 2 != 0 || dim == 0) throw Error(ErrorCode::ConfigInvalid, std::string(what) + " has odd dimension");
  Mat F(dim, static_cast<int>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (static_cast<int>(cols[k].size()) != dim) throw Error(ErrorCode::ConfigInvalid, "ragged frame columns");
    for (int i = 0; i < dim; ++i) F(i, static_cast<int>(k)) = cols[k][i];
  }
  return lagrangian_from_columns(SymplecticSpace::standard(dim / 2), F, tol);
}

class Emitter {
 public:
  Emitter(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  void report(IndexReport rep, const ojson& config) {
    rep.config_hash = config_hash(config);
    std::string text = rep.to_json().dump(2);
    if (o_.report.empty()) {
      out_ << text << "\n";
    } else {
      std::ofstream f(o_.report);
      if (!f) throw Error(ErrorCode::ConfigInvalid, "cannot write report '" + o_.report + "'");
      f << text << "\n";
    }
  }

  void csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    if (o_.csv.empty()) return;
    std::ofstream f(o_.csv);
    if (!f) throw Error(ErrorCode::ConfigInvalid, "cannot write csv '" + o_.csv + "'");
    for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
    f << "\n" << std::setprecision(17);
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << r[i];
      f << "\n";
    }
  }

 private:
  const Options& o_;
  std::ostream& out_;
};

ojson base_config(const std::string& command, const Options& o, const Tolerance& tol) {
  ojson c;
  c["command"] = command;
  c["problem"] = o.problem;
  c["interval"] = o.interval;
  if (o.omega) c["omega"] = *o.omega;
  if (o.q) c["q"] = *o.q;
  if (o.r) c["r"] = *o.r;
  c["bc"] = o.bc;
  c["N"] = o.N;
  c["delta_schedule"] = o.delta_schedule;
  if (tol.override_value) c["tolerance"] = *tol.override_value;
  return c;
}

std::vector<double> schedule(const Options& o) {
  if (o.delta_schedule.empty()) return default_delta_schedule();
  for (double d : o.delta_schedule)
    if (!(d > 0)) throw Error(ErrorCode::ConfigInvalid, "delta schedule entries must be positive");
  return o.delta_schedule;
}

void tolerance_diagnostics(IndexReport& rep, const Tolerance& tol) {
  rep.diagnostics["ode_rel_tol"] = tol.ode.rel_tol;
  rep.diagnostics["ode_abs_tol"] = tol.ode.abs_tol;
  rep.diagnostics["linear_tol"] = tol.lin;
}

int cmd_maslov(const Options& o, const Tolerance& tol, Emitter& em) {
  SLProblem p = resolve_problem(o);
  if (p.left != EndpointKind::Regular || !std::isfinite(p.b))
    throw Error(ErrorCode::ConfigInvalid, "maslov needs a regular problem");
  FundamentalSolution fs = fundamental_solution(p, p.a, p.a, p.b, tol.ode);
  const SymplecticSpace sp = SymplecticSpace::standard(p.n);
  LagrangianFrame start = resolve_bc(o.bc).kind == BoundaryCondition::Kind::Neumann ? neumann(sp) : dirichlet(sp);
  LagrangianPath path{sp, [&](double t) { return transform(SymplecticMatrix{sp, fs.at(t)}, start); }, p.a, p.b};
  MaslovResult m = maslov_clm(constant_path(dirichlet(sp), p.a, p.b), path, p.a, p.b);
  IndexReport rep;
  rep.command = "maslov";
  rep.index = "maslov_clm";
  rep.verdict = Verdict::integer(m.value);
  std::vector<std::vector<double>> rows;
  for (const auto& c : m.crossings) {
    rep.crossings.push_back({c.t, c.inertia.dim(), c.inertia.n_plus, c.inertia.n_zero, c.inertia.n_minus, c.contribution});
    rows.push_back({c.t, double(c.inertia.dim()), double(c.contribution)});
  }
  rep.diagnostics["reference"] = "dirichlet";
  rep.diagnostics["max_drift"] = fs.max_drift();
  tolerance_diagnostics(rep, tol);
  em.csv({"t", "multiplicity", "contribution"}, rows);
  em.report(rep, base_config("maslov", o, tol));
  return 0;
}

int cmd_triple(const Options& o, const Tolerance& tol, Emitter& em, bool hormander) {
  IndexReport rep;
  rep.command = hormander ? "hormander" : "triple";
  rep.index = hormander ? "hormander" : "triple";
  ojson cfg;
  cfg["command"] = rep.command;
  if (hormander) {
    auto a = parse_frame(o.l1, "--l1", tol.lin), b = parse_frame(o.l2, "--l2", tol.lin);
    auto c = parse_frame(o.m1, "--m1", tol.lin), d = parse_frame(o.m2, "--m2", tol.lin);
    rep.verdict = Verdict::integer(hormander_index(a, b, c, d, tol.lin));
    cfg["frames"] = {o.l1, o.l2, o.m1, o.m2};
  } else {
    auto a = parse_frame(o.alpha, "--alpha", tol.lin), b = parse_frame(o.beta, "--beta", tol.lin);
    auto c = parse_frame(o.gamma, "--gamma", tol.lin);
    rep.verdict = Verdict::integer(triple_index(a, b, c, tol.lin));
    rep.diagnostics["intersections"] = {intersection_dim(a, b, tol.lin), intersection_dim(b, c, tol.lin),
                                        intersection_dim(a, c, tol.lin)};
    cfg["frames"] = {o.alpha, o.beta, o.gamma};
  }
  tolerance_diagnostics(rep, tol);
  em.report(rep, cfg);
  return 0;
}

int cmd_conjugate(const Options& o, const Tolerance& tol, Emitter& em) {
  SLProblem p = resolve_problem(o);
  if (p.left != EndpointKind::Regular || !std::isfinite(p.b))
    throw Error(ErrorCode::ConfigInvalid, "conjugate needs a regular problem; use bessel for the singular case");
  const SymplecticSpace sp = SymplecticSpace::standard(p.n);
  LagrangianFrame start = resolve_bc(o.bc).kind == BoundaryCondition::Kind::Neumann ? neumann(sp) : dirichlet(sp);
  ConjugateOptions co;
  co.ode = tol.ode;
  ConjugateResult cr = conjugate_points(p, start, dirichlet(sp), p.a, p.b, co);
  IndexReport rep;
  rep.command = "conjugate";
  rep.index = "conjugate_points";
  long total = 0;
  std::vector<std::vector<double>> rows;
  for (const auto& c : cr.points) {
    total += c.multiplicity;
    rep.crossings.push_back({c.t, c.multiplicity, c.multiplicity, 0, 0, c.multiplicity});
    rows.push_back({c.t, double(c.multiplicity)});
  }
  rep.verdict = Verdict::integer(total);
  rep.diagnostics["max_drift"] = cr.max_drift;
  rep.diagnostics["crossings_positive"] = cr.all_positive;
  tolerance_diagnostics(rep, tol);
  em.csv({"t", "multiplicity"}, rows);
  em.report(rep, base_config("conjugate", o, tol));
  return 0;
}

int cmd_nbody_problem(const Options& o, const Tolerance& tol, Emitter& em, const CatalogCall& c, const char* command) {
  if (c.args.size() != 2) throw Error(ErrorCode::ConfigInvalid, "nbody-asymptotic(config-id, motion)");
  CentralConfig cc = named_central_configuration(c.args[0]);
  IndexReport rep = asymptotic_morse(cc, motion_from_name(c.args[1]), schedule(o));
  rep.command = command;
  tolerance_diagnostics(rep, tol);
  em.report(rep, base_config(command, o, tol));
  return exit_code_for(rep.verdict);
}

void crossings_csv(Emitter& em, const IndexReport& rep) {
  std::vector<std::vector<double>> rows;
  for (const auto& c : rep.crossings) rows.push_back({c.t, double(c.multiplicity)});
  em.csv({"t", "multiplicity"}, rows);
}

int cmd_morse(const Options& o, const Tolerance& tol, Emitter& em) {
  CatalogCall c = parse_catalog_call(o.problem);
  if (c.name == "nbody-asymptotic") return cmd_nbody_problem(o, tol, em, c, "morse");
  SLProblem p = resolve_problem(o);
  BoundaryCondition bc = resolve_bc(o.bc);
  IndexReport rep;
  bool regular = p.left == EndpointKind::Regular && p.right == EndpointKind::Regular && std::isfinite(p.b);
  if (bc.kind == BoundaryCondition::Kind::Neumann) {
    rep = morse_index_general(p, bc, schedule(o), regular ? o.N : 0);
  } else {
    rep = morse_index_dirichlet(p, schedule(o), tol.ode);
    if (regular && o.N > 0) {
      DiscreteOperator op = discretize(p, bc, o.N);
      int neg = count_below(op, -kernel_threshold(op));
      rep.diagnostics["discrete_negative_count"] = neg;
      rep.diagnostics["discrete_agree"] = rep.verdict.is_integer() && neg == rep.verdict.value;
    }
  }
  rep.command = "morse";
  tolerance_diagnostics(rep, tol);
  crossings_csv(em, rep);
  em.report(rep, base_config("morse", o, tol));
  return exit_code_for(rep.verdict);
}

int cmd_spectral_flow(const Options& o, const Tolerance& tol, Emitter& em) {
  SLProblem base = resolve_problem(o);
  if (base.left != EndpointKind::Regular || !std::isfinite(base.b))
    throw Error(ErrorCode::ConfigInvalid, "spectral-flow needs a regular problem");
  if (o.N < 16) throw Error(ErrorCode::GridTooCoarse, "at least 16 cells required");
  const double c = o.perturbation;
  const int n = base.n;
  base.perturbation = [c, n](double s, double) { return Mat(c * s * Mat::Identity(n, n)); };
  BoundaryCondition bc = resolve_bc(o.bc);
  auto family = [&](double s) { return base.at_parameter(s); };
  auto bcs = [&](double) { return bc; };
  SfFormulaReport sf = verify_sf_formula(family, bcs, 0.0, 1.0, o.N);
  IndexReport rep;
  rep.command = "spectral-flow";
  rep.index = "spectral_flow";
  rep.verdict = Verdict::integer(sf.sf);
  rep.diagnostics["maslov"] = sf.maslov;
  rep.diagnostics["formula_agree"] = sf.agree;
  rep.diagnostics["perturbation"] = c;
  for (const auto& cr : sf.maslov_detail.crossings)
    rep.crossings.push_back({cr.t, cr.inertia.dim(), cr.inertia.n_plus, cr.inertia.n_zero, cr.inertia.n_minus,
                             cr.contribution});
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  EigenTrace tr = eigen_trace([&](double s) { return discretize(family(s), bc, o.N); }, grid, 6);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < tr.s.size(); ++i) {
    std::vector<double> row{tr.s[i]};
    for (int k = 0; k < tr.eigenvalues[i].size(); ++k) row.push_back(tr.eigenvalues[i](k));
    rows.push_back(row);
  }
  em.csv({"s", "lambda1", "lambda2", "lambda3", "lambda4", "lambda5", "lambda6"}, rows);
  tolerance_diagnostics(rep, tol);
  ojson cfg = base_config("spectral-flow", o, tol);
  cfg["perturbation"] = c;
  em.report(rep, cfg);
  return 0;
}

int cmd_rellich(const Options& o, const Tolerance& tol, Emitter& em) {
  double q = o.q ? *o.q : (o.r ? q_of_r(*o.r) : 0.0);
  double r = r_of_q(q);
  LagrangianFrame F = friedrichs_trace_frame(r);
  Vec v = F.frame().col(0);
  double base_angle = std::atan2(v(1), v(0));
  auto line = [base_angle](double u) { return rotated_line(base_angle - u * std::numbers::pi / 2); };
  RellichOptions ro;
  ro.N = o.N;
  RellichReport rr = rellich_ghosts(q, o.truncation, line, ro);
  IndexReport rep;
  rep.command = "rellich";
  rep.index = "maslov_friedrichs";
  rep.verdict = Verdict::integer(rr.maslov_prediction);
  rep.diagnostics["u"] = rr.u;
  rep.diagnostics["M"] = rr.M;
  rep.diagnostics["count_below_minus_M"] = rr.count_below_minus_M;
  rep.diagnostics["bottom_eigenvalue"] = rr.bottom_eigenvalue;
  rep.diagnostics["monotone_bottom"] = rr.monotone_bottom;
  rep.diagnostics["truncation"] = o.truncation;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rr.u.size(); ++i) rows.push_back({rr.u[i], rr.bottom_eigenvalue[i]});
  em.csv({"u", "bottom_eigenvalue"}, rows);
  tolerance_diagnostics(rep, tol);
  ojson cfg = base_config("rellich", o, tol);
  cfg["truncation"] = o.truncation;
  em.report(rep, cfg);
  return 0;
}

int cmd_bessel(const Options& o, const Tolerance& tol, Emitter& em) {
  double q;
  if (o.q)
    q = *o.q;
  else if (o.r)
    q = q_of_r(*o.r);
  else
    throw Error(ErrorCode::ConfigInvalid, "bessel needs --q or --r");
  double eps = 1e-4, c = 1.0;
  if (!o.window.empty()) {
    if (o.window.size() != 2 || !(o.window[0] > 0) || !(o.window[0] < o.window[1]))
      throw Error(ErrorCode::ConfigInvalid, "--window needs 0 < eps < c");
    eps = o.window[0];
    c = o.window[1];
  }
  SLProblem p = bessel_problem(q, c);
  IndexReport rep = morse_index_dirichlet(p, schedule(o), tol.ode);
  rep.command = "bessel";
  rep.crossings.clear();
  const SymplecticSpace sp = SymplecticSpace::standard(1);
  ConjugateOptions co;
  co.ode = tol.ode;
  co.base_at_right = true;
  co.log_scan = true;
  co.origin = 0.0;
  ConjugateResult cr = conjugate_points(p, dirichlet(sp), dirichlet(sp), eps, c, co);
  std::vector<std::vector<double>> rows;
  for (const auto& pt : cr.points) {
    rep.crossings.push_back({pt.t, pt.multiplicity, pt.multiplicity, 0, 0, pt.multiplicity});
    rows.push_back({pt.t, double(pt.multiplicity)});
  }
  rep.diagnostics["window"] = {eps, c};
  rep.diagnostics["r"] = r_of_q(q);
  rep.diagnostics["direction"] = direction_verdict_name(classify_coupling(q));
  if (q < -0.25) rep.diagnostics["analytic_points"] = zero_sequence(q, eps, c);
  em.csv({"t", "multiplicity"}, rows);
  tolerance_diagnostics(rep, tol);
  ojson cfg = base_config("bessel", o, tol);
  cfg["window"] = {eps, c};
  em.report(rep, cfg);
  return exit_code_for(rep.verdict);
}

int cmd_nbody(const Options& o, const Tolerance& tol, Emitter& em) {
  CentralConfig cc;
  ojson cfg;
  cfg["command"] = "nbody";
  cfg["motion"] = o.motion;
  if (!o.input.empty()) {
    std::ifstream f(o.input);
    if (!f) throw Error(ErrorCode::ConfigInvalid, "cannot read '" + o.input + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(f);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigInvalid, "'" + o.input + "' is not valid JSON");
    }
    Configuration seed = configuration_from_json(j);
    cc = central_configuration(seed.system, seed);
    cfg["input"] = j;
  } else {
    cc = named_central_configuration(o.config_id);
    cfg["config_id"] = o.config_id;
  }
  IndexReport rep = asymptotic_morse(cc, motion_from_name(o.motion), schedule(o));
  rep.diagnostics["positions"] = std::vector<double>(cc.config.q.data(), cc.config.q.data() + cc.config.q.size());
  tolerance_diagnostics(rep, tol);
  em.report(rep, cfg);
  return exit_code_for(rep.verdict);
}

int cmd_catalog(const Options& o, std::ostream& out) {
  if (o.catalog_action == "list") {
    for (const auto& e : catalog_entries()) out << e.signature << "  " << e.summary << "\n";
    return 0;
  }
  if (o.catalog_action == "describe") {
    if (o.catalog_name.empty()) throw Error(ErrorCode::ConfigInvalid, "catalog describe needs a name");
    out << catalog_describe(o.catalog_name);
    return 0;
  }
  throw Error(ErrorCode::ConfigInvalid, "catalog action must be list or describe");
}

std::vector<std::string> args_from_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ConfigInvalid, "cannot read config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigInvalid, "config is not valid JSON");
  }
  if (!j.is_object() || !j.contains("command")) throw Error(ErrorCode::ConfigInvalid, "config needs a command");
  std::vector<std::string> args{j["command"].get<std::string>()};
  auto num = [](const nlohmann::json& v) {
    std::ostringstream os;
    os << std::setprecision(17) << v.get<double>();
    return os.str();
  };
  if (j.contains("problem")) {
    std::string p = j["problem"].get<std::string>();
    if (!is_catalog_name(parse_catalog_call(p).name) && !std::filesystem::exists(p))
      throw Error(ErrorCode::ConfigInvalid, "problem file '" + p + "' does not exist");
    args.insert(args.end(), {"--problem", p});
  }
  if (j.contains("bc")) args.insert(args.end(), {"--bc", j["bc"].get<std::string>()});
  for (const char* key : {"omega", "q", "r", "perturbation", "truncation"})
    if (j.contains(key)) args.insert(args.end(), {std::string("--") + key, num(j[key])});
  for (const char* key : {"interval", "window"})
    if (j.contains(key)) {
      args.push_back(std::string("--") + key);
      for (const auto& v : j[key]) args.push_back(num(v));
    }
  for (const char* key : {"motion", "config-id", "input", "alpha", "beta", "gamma", "l1", "l2", "m1", "m2"})
    if (j.contains(key)) {
      const auto& v = j[key];
      args.insert(args.end(), {std::string("--") + key, v.is_string() ? v.get<std::string>() : v.dump()});
    }
  if (j.contains("numeric")) {
    const auto& n = j["numeric"];
    if (n.contains("N")) {
      if (!(n["N"].get<int>() > 0)) throw Error(ErrorCode::ConfigInvalid, "numeric.N must be positive");
      args.insert(args.end(), {"--N", std::to_string(n["N"].get<int>())});
    }
    if (n.contains("delta_schedule")) {
      args.push_back("--delta-schedule");
      for (const auto& v : n["delta_schedule"]) args.push_back(num(v));
    }
  }
  if (j.contains("output")) {
    const auto& out = j["output"];
    if (out.contains("report")) args.insert(args.end(), {"--report", out["report"].get<std::string>()});
    if (out.contains("csv")) args.insert(args.end(), {"--csv", out["csv"].get<std::string>()});
  }
  if (j.contains("catalog")) {
    for (const auto& v : j["catalog"]) args.push_back(v.get<std::string>());
  }
  return args;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth);

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
  CLI::App app{"symplectic index toolkit", "symind"};
  app.require_subcommand(1);
  app.set_version_flag("--version", toolkit_version());
  Options o;

  auto outputs = [&](CLI::App* s) {
    s->add_option("--report", o.report, "JSON report path (stdout when absent)");
    s->add_option("--csv", o.csv, "CSV trace path");
    s->add_option("--jobs", o.jobs, "worker cap")->check(CLI::PositiveNumber);
  };
  auto problem = [&](CLI::App* s) {
    s->add_option("--problem", o.problem, "catalog entry, e.g. harmonic or harmonic(10), or a CSV file");
    s->add_option("--interval", o.interval)->expected(2);
    s->add_option("--omega", o.omega);
    s->add_option("--q", o.q);
    s->add_option("--r", o.r);
    s->add_option("--bc", o.bc, "dirichlet | neumann | friedrichs");
    s->add_option("--delta-schedule", o.delta_schedule)->expected(1, 64);
    s->add_option("--N", o.N, "grid cells for discrete checks");
  };

  auto* maslov = app.add_subcommand("maslov", "Maslov index of the flowed boundary line against Dirichlet");
  problem(maslov);
  outputs(maslov);
  auto* triple = app.add_subcommand("triple", "triple index of three Lagrangians (JSON column lists)");
  triple->add_option("--alpha", o.alpha)->required();
  triple->add_option("--beta", o.beta)->required();
  triple->add_option("--gamma", o.gamma)->required();
  outputs(triple);
  auto* horm = app.add_subcommand("hormander", "Hormander index s(l1, l2; m1, m2)");
  horm->add_option("--l1", o.l1)->required();
  horm->add_option("--l2", o.l2)->required();
  horm->add_option("--m1", o.m1)->required();
  horm->add_option("--m2", o.m2)->required();
  outputs(horm);
  auto* conj = app.add_subcommand("conjugate", "conjugate points of a regular problem");
  problem(conj);
  outputs(conj);
  auto* morse = app.add_subcommand("morse", "Morse index");
  problem(morse);
  outputs(morse);
  auto* sf = app.add_subcommand("spectral-flow", "spectral flow of R + c s I, s in [0, 1]");
  problem(sf);
  sf->add_option("--perturbation", o.perturbation, "c");
  outputs(sf);
  auto* rel = app.add_subcommand("rellich", "ghost eigenvalues under a rotating singular-end condition");
  rel->add_option("--q", o.q);
  rel->add_option("--r", o.r);
  rel->add_option("--truncation", o.truncation);
  rel->add_option("--N", o.N);
  outputs(rel);
  auto* bes = app.add_subcommand("bessel", "conjugate points and Morse verdict of -x'' + q/t^2 x");
  bes->add_option("--q", o.q);
  bes->add_option("--r", o.r);
  bes->add_option("--window", o.window)->expected(2);
  bes->add_option("--delta-schedule", o.delta_schedule)->expected(1, 64);
  outputs(bes);
  auto* nb = app.add_subcommand("nbody", "Morse classification of asymptotic N-body motions");
  nb->add_option("--config-id", o.config_id, "two-body | lagrange3 | euler3 | square4");
  nb->add_option("--input", o.input, "JSON with masses, positions, dimension");
  nb->add_option("--motion", o.motion, "collision | parabolic | hyperbolic");
  nb->add_option("--delta-schedule", o.delta_schedule)->expected(1, 64);
  outputs(nb);
  auto* cat = app.add_subcommand("catalog", "list or describe built-in problems");
  cat->add_option("action", o.catalog_action)->required();
  cat->add_option("name", o.catalog_name);
  auto* run = app.add_subcommand("run", "run a JSON config");
  run->add_option("--config", o.config_file)->required();

  std::vector<std::string> argv_store{"symind"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << toolkit_version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }

  if (*run) {
    if (depth > 0) throw Error(ErrorCode::ConfigInvalid, "nested run");
    return dispatch(args_from_config(o.config_file), out, err, depth + 1);
  }
  if (*cat) return cmd_catalog(o, out);

  Tolerance tol = tolerance_from_env();
  Emitter em(o, out);
  if (*maslov) return cmd_maslov(o, tol, em);
  if (*triple) return cmd_triple(o, tol, em, false);
  if (*horm) return cmd_triple(o, tol, em, true);
  if (*conj) return cmd_conjugate(o, tol, em);
  if (*morse) return cmd_morse(o, tol, em);
  if (*sf) return cmd_spectral_flow(o, tol, em);
  if (*rel) return cmd_rellich(o, tol, em);
  if (*bes) return cmd_bessel(o, tol, em);
  if (*nb) return cmd_nbody(o, tol, em);
  throw Error(ErrorCode::ConfigInvalid, "no command");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err, 0);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: cli.ConfigInvalid: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace symind::cli

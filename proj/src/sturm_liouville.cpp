#include "symind/sturm_liouville.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "symind/bessel.hpp"
#include "symind/spectral_flow.hpp"

namespace symind {

const char* endpoint_class_name(EndpointClass c) {
  switch (c) {
    case EndpointClass::Regular: return "Regular";
    case EndpointClass::LimitCircle: return "LimitCircle";
    case EndpointClass::LimitPoint: return "LimitPoint";
  }
  return "Regular";
}

SLProblem make_problem(double a, double b, MatrixFunction P, MatrixFunction Q, MatrixFunction R, std::string name) {
  SLProblem p;
  p.n = P.dim();
  p.a = a;
  p.b = b;
  p.P = std::move(P);
  p.Q = std::move(Q);
  p.R = std::move(R);
  p.name = std::move(name);
  return p;
}

SLProblem SLProblem::at_parameter(double s) const {
  if (!perturbation) return *this;
  SLProblem out = *this;
  MatrixFunction R0 = R;
  auto C = perturbation;
  out.R = MatrixFunction(n, [R0, C, s](double t) { return Mat(R0(t) + C(s, t)); }, R0.description() + " + C(s)");
  out.perturbation = nullptr;
  out.bessel_q.reset();
  return out;
}

SLProblem SLProblem::shifted(double lambda) const {
  if (lambda == 0.0) return *this;
  SLProblem out = *this;
  MatrixFunction R0 = R;
  int dim = n;
  out.R = MatrixFunction(
      n, [R0, lambda, dim](double t) { return Mat(R0(t) - lambda * Mat::Identity(dim, dim)); }, R0.description());
  out.bessel_q.reset();
  return out;
}

Mat HamiltonianField::H(double t) const {
  const int n = problem.n;
  Mat P = problem.P(t), Q = problem.Q(t), R = problem.R(t);
  Eigen::FullPivLU<Mat> lu(P);
  if (!P.allFinite() || !lu.isInvertible()) {
    std::ostringstream os;
    os << "P not invertible at t=" << t;
    throw Error(ErrorCode::CoefficientSingular, os.str());
  }
  Mat Pi = lu.inverse();
  Mat H(2 * n, 2 * n);
  H.topLeftCorner(n, n) = -Pi;
  H.topRightCorner(n, n) = Pi * Q;
  H.bottomLeftCorner(n, n) = Q.transpose() * Pi;
  H.bottomRightCorner(n, n) = R - Q.transpose() * Pi * Q;
  return 0.5 * (H + H.transpose());
}

Mat HamiltonianField::A(double t) const {
  const int n = problem.n;
  Mat P = problem.P(t), Q = problem.Q(t), R = problem.R(t);
  Eigen::FullPivLU<Mat> lu(P);
  if (!P.allFinite() || !lu.isInvertible()) {
    std::ostringstream os;
    os << "P not invertible at t=" << t;
    throw Error(ErrorCode::CoefficientSingular, os.str());
  }
  Mat Pi = lu.inverse();
  Mat QtPi = Q.transpose() * Pi;
  Mat A(2 * n, 2 * n);
  A.topLeftCorner(n, n) = QtPi;
  A.topRightCorner(n, n) = R - QtPi * Q;
  A.bottomLeftCorner(n, n) = Pi;
  A.bottomRightCorner(n, n) = -Pi * Q;
  return A;
}

HamiltonianField to_hamiltonian(const SLProblem& problem) { return HamiltonianField{problem}; }

FundamentalSolution::FundamentalSolution(SLProblem problem, double base, std::vector<OdeNode> nodes,
                                         std::vector<double> drift, double max_drift, OdeOptions opt)
    : problem_(std::move(problem)),
      base_(base),
      nodes_(std::move(nodes)),
      drift_(std::move(drift)),
      max_drift_(max_drift),
      opt_(opt) {}

Mat FundamentalSolution::at(double t) const {
  double slack = 1e-12 * std::max(1.0, std::abs(hi() - lo()));
  if (t < lo() - slack || t > hi() + slack) {
    std::ostringstream os;
    os << "t=" << t << " outside the integrated span [" << lo() << ", " << hi() << "]";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
  t = std::clamp(t, lo(), hi());
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t, [](const OdeNode& n, double x) { return n.t < x; });
  const OdeNode* best;
  if (it == nodes_.end())
    best = &nodes_.back();
  else if (it == nodes_.begin())
    best = &*it;
  else
    best = (std::abs(it->t - t) < std::abs((it - 1)->t - t)) ? &*it : &*(it - 1);
  if (best->t == t) return best->y;
  HamiltonianField hf = to_hamiltonian(problem_);
  OdeOptions o = opt_;
  o.h_init = std::abs(t - best->t);
  OdeResult r = integrate([&hf](double s, const Mat& y) { return Mat(hf.A(s) * y); }, best->t, best->y, t, o);
  return r.nodes.back().y;
}

FundamentalSolution fundamental_solution(const SLProblem& problem, double t0, double c, double d,
                                         const OdeOptions& opt) {
  if (!(c <= t0 && t0 <= d)) throw Error(ErrorCode::OutOfRange, "base point outside the span");
  HamiltonianField hf = to_hamiltonian(problem);
  OdeOptions o = opt;
  o.symplectic = true;
  auto f = [&hf](double s, const Mat& y) { return Mat(hf.A(s) * y); };
  const int dim = 2 * problem.n;
  Mat I = Mat::Identity(dim, dim);
  OdeResult fwd = integrate(f, t0, I, d, o);
  OdeResult bwd = integrate(f, t0, I, c, o);
  std::vector<OdeNode> nodes;
  nodes.reserve(fwd.nodes.size() + bwd.nodes.size());
  for (auto it = bwd.nodes.rbegin(); it != bwd.nodes.rend(); ++it) nodes.push_back(*it);
  for (std::size_t i = 1; i < fwd.nodes.size(); ++i) nodes.push_back(fwd.nodes[i]);
  std::vector<double> drift = bwd.drift;
  drift.insert(drift.end(), fwd.drift.begin(), fwd.drift.end());
  return FundamentalSolution(problem, t0, std::move(nodes), std::move(drift),
                             std::max(fwd.max_drift, bwd.max_drift), o);
}

double boundary_bracket(const Vec& f, const Vec& g) {
  const int n = static_cast<int>(f.size()) / 2;
  return f.head(n).dot(g.tail(n)) - f.tail(n).dot(g.head(n));
}

ConjugateResult conjugate_points(const SLProblem& problem, const LagrangianFrame& bc_at_start,
                                 const LagrangianFrame& reference, double c, double d, const ConjugateOptions& opt) {
  double base = opt.base_at_right ? d : c;
  FundamentalSolution fs = fundamental_solution(problem, base, c, d, opt.ode);
  return conjugate_points(fs, bc_at_start, reference, c, d, opt);
}

ConjugateResult conjugate_points(const FundamentalSolution& fs, const LagrangianFrame& bc_at_start,
                                 const LagrangianFrame& reference, double c, double d, const ConjugateOptions& opt) {
  const SymplecticSpace sp = bc_at_start.space();
  auto t_of = [&opt](double u) { return opt.log_scan ? opt.origin + std::exp(u) : u; };
  double u0 = opt.log_scan ? std::log(c - opt.origin) : c;
  double u1 = opt.log_scan ? std::log(d - opt.origin) : d;
  // (p, x) ↦ (√s p, x/√s) with s = t - origin keeps the Dirichlet line fixed and evens out the rotation speed
  const int n = sp.half_dim();
  const bool rescale = opt.log_scan && intersection_dim(reference, dirichlet(sp)) == n;
  LagrangianPath path{sp,
                      [&fs, &bc_at_start, &t_of, &opt, sp, n, rescale](double u) {
                        double t = t_of(u);
                        Mat M = fs.at(t);
                        if (rescale) {
                          double w = std::sqrt(t - opt.origin);
                          M.topRows(n) *= w;
                          M.bottomRows(n) /= w;
                        }
                        return transform(SymplecticMatrix{sp, M}, bc_at_start);
                      },
                      u0, u1};
  for (const auto& node : fs.nodes()) {
    if (opt.log_scan && node.t <= opt.origin) continue;
    path.knots.push_back(opt.log_scan ? std::log(node.t - opt.origin) : node.t);
  }
  LagrangianPath ref = constant_path(reference, u0, u1);
  MaslovResult m = maslov_clm(ref, path, u0, u1, opt.maslov);
  ConjugateResult out;
  out.max_drift = fs.max_drift();
  double edge = 1e-9 * (u1 - u0);
  for (const auto& rec : m.crossings) {
    if (rec.t - u0 <= edge || u1 - rec.t <= edge) continue;
    int mult = rec.inertia.dim();
    if (rec.inertia.n_zero > 0)
      throw Error(ErrorCode::NonIsolatedCrossing, "conjugate point with degenerate crossing form");
    if (rec.inertia.n_plus != mult) out.all_positive = false;
    out.points.push_back({t_of(rec.t), mult});
  }
  std::sort(out.points.begin(), out.points.end(), [](auto& x, auto& y) { return x.t < y.t; });
  return out;
}

std::vector<double> default_delta_schedule() { return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7}; }

namespace {

std::map<std::string, bool> declared_assumptions() {
  return {{"H1", true}, {"H2", true}, {"H3", true}, {"H4", true}};
}

void fill_crossings(IndexReport& rep, const std::vector<ConjugatePoint>& pts) {
  for (const auto& p : pts) rep.crossings.push_back({p.t, p.multiplicity, p.multiplicity, 0, 0, p.multiplicity});
}

}  // namespace

IndexReport morse_index_dirichlet(const SLProblem& problem, const std::vector<double>& delta_schedule,
                                  const OdeOptions& ode) {
  IndexReport rep;
  rep.command = "morse";
  rep.index = "morse_dirichlet";
  rep.assumptions = declared_assumptions();
  rep.diagnostics["assumptions_note"] = "declared, not verified";
  const SymplecticSpace sp = SymplecticSpace::standard(problem.n);
  const LagrangianFrame LD = dirichlet(sp);
  const bool left_reg = problem.left == EndpointKind::Regular;
  const bool right_reg = problem.right == EndpointKind::Regular && std::isfinite(problem.b);

  ConjugateOptions co;
  co.ode = ode;
  if (left_reg && right_reg) {
    ConjugateResult cr = conjugate_points(problem, LD, LD, problem.a, problem.b, co);
    long count = 0;
    for (const auto& p : cr.points) count += p.multiplicity;
    fill_crossings(rep, cr.points);
    rep.verdict = Verdict::integer(count);
    rep.diagnostics["max_drift"] = cr.max_drift;
    rep.diagnostics["crossings_positive"] = cr.all_positive;
    return rep;
  }
  if (!left_reg && !right_reg) throw Error(ErrorCode::ConfigInvalid, "two-sided singular problems are not supported");
  if (delta_schedule.size() < 4) throw Error(ErrorCode::ScheduleTooShort, "need at least four truncation offsets");
  std::vector<double> sched = delta_schedule;
  std::sort(sched.begin(), sched.end(), std::greater<>());
  const double dmin = sched.back();

  std::vector<ConjugatePoint> pts;
  double max_drift = 0.0;
  bool positive = true;
  std::function<double(double)> cutoff;
  if (!left_reg) {
    double lo = problem.a + dmin;
    co.base_at_right = true;
    co.log_scan = true;
    co.origin = problem.a;
    FundamentalSolution fs = fundamental_solution(problem, problem.b, lo, problem.b, ode);
    ConjugateResult cr = conjugate_points(fs, LD, LD, lo, problem.b, co);
    pts = cr.points;
    max_drift = cr.max_drift;
    positive = cr.all_positive;
    cutoff = [&problem](double d) { return problem.a + d; };
  } else {
    bool infinite = !std::isfinite(problem.b);
    double hi = infinite ? 1.0 / dmin : problem.b - dmin;
    if (infinite && problem.a > 0) {
      co.log_scan = true;
      co.origin = 0.0;
    }
    FundamentalSolution fs = fundamental_solution(problem, problem.a, problem.a, hi, ode);
    ConjugateResult cr = conjugate_points(fs, LD, LD, problem.a, hi, co);
    pts = cr.points;
    max_drift = cr.max_drift;
    positive = cr.all_positive;
    cutoff = [&problem, infinite](double d) { return infinite ? 1.0 / d : problem.b - d; };
  }

  std::vector<long> counts;
  for (double d : sched) {
    double c = cutoff(d);
    long k = 0;
    for (const auto& p : pts)
      if (!left_reg ? p.t > c : p.t < c) k += p.multiplicity;
    counts.push_back(k);
  }
  fill_crossings(rep, pts);
  rep.diagnostics["delta_schedule"] = sched;
  rep.diagnostics["counts"] = counts;
  rep.diagnostics["max_drift"] = max_drift;
  rep.diagnostics["crossings_positive"] = positive;

  const std::size_t m = counts.size();
  bool stable = counts[m - 1] == counts[m - 2] && counts[m - 2] == counts[m - 3];
  bool growing = true;
  for (std::size_t i = 1; i < m; ++i) growing &= counts[i] > counts[i - 1];
  if (stable) {
    rep.verdict = Verdict::integer(counts.back());
  } else if (growing) {
    bool rate_ok = true;
    if (problem.bessel_q && *problem.bessel_q < -0.25) {
      double nu = std::sqrt(-0.25 - *problem.bessel_q);
      std::vector<double> expected;
      for (std::size_t i = 1; i < m; ++i) {
        double e = nu / std::numbers::pi * std::log(sched[i - 1] / sched[i]);
        expected.push_back(e);
        if (std::abs(static_cast<double>(counts[i] - counts[i - 1]) - e) > 1.5) rate_ok = false;
      }
      rep.diagnostics["expected_growth"] = expected;
    }
    if (rate_ok)
      rep.verdict = Verdict::infinite("conjugate-point count grows at every truncation");
    else
      rep.verdict = Verdict::undetermined("count grows but not at the oscillation rate");
  } else {
    rep.verdict = Verdict::undetermined("count neither stabilizes over three offsets nor grows at every offset");
  }
  return rep;
}

namespace {

bool bessel_limit_circle(const SLProblem& p) {
  return p.bessel_q && *p.bessel_q < 0.75 && p.left != EndpointKind::Regular && p.n == 1;
}

LagrangianFrame left_block(const SLProblem& problem, const BoundaryCondition& bc) {
  const SymplecticSpace sp = SymplecticSpace::standard(problem.n);
  if (problem.left == EndpointKind::Regular) {
    if (bc.kind == BoundaryCondition::Kind::Neumann) return neumann(sp);
    return dirichlet(sp);
  }
  if (bc.kind == BoundaryCondition::Kind::Neumann)
    throw Error(ErrorCode::ConfigInvalid, "Neumann condition at a singular endpoint");
  if (!bessel_limit_circle(problem))
    throw Error(ErrorCode::KernelBasisUnavailable, "no analytic limit-circle data at the singular endpoint");
  return friedrichs_trace_frame(r_of_q(*problem.bessel_q));
}

}  // namespace

LagrangianFrame boundary_lagrangian(const SLProblem& problem, const BoundaryCondition& bc) {
  const SymplecticSpace bsp = SymplecticSpace::minus_plus(problem.n, problem.n);
  if (bc.kind == BoundaryCondition::Kind::GeneralLagrangian) {
    if (!bc.frame || bc.frame->space() != bsp) throw Error(ErrorCode::SpaceMismatch, "boundary frame space");
    return *bc.frame;
  }
  const SymplecticSpace sp = SymplecticSpace::standard(problem.n);
  LagrangianFrame right = bc.kind == BoundaryCondition::Kind::Neumann ? neumann(sp) : dirichlet(sp);
  return direct_sum(left_block(problem, bc), right);
}

LagrangianFrame kernel_trace(const SLProblem& problem, const OdeOptions& ode) {
  const int n = problem.n;
  if (problem.left == EndpointKind::Regular && problem.right == EndpointKind::Regular && std::isfinite(problem.b)) {
    FundamentalSolution fs = fundamental_solution(problem, problem.a, problem.a, problem.b, ode);
    return graph_lagrangian(SymplecticMatrix{SymplecticSpace::standard(n), fs.at(problem.b)}, 1e-7);
  }
  if (bessel_limit_circle(problem) && problem.right == EndpointKind::Regular) {
    double r = r_of_q(*problem.bessel_q);
    SingularPair y = singular_solutions(r, problem.b);
    Mat C(4, 2);
    C << 1.0, 0.0,   //
        0.0, -1.0,   //
        y.dy1, y.dy2,  //
        y.y1, y.y2;
    return lagrangian_from_columns(SymplecticSpace::minus_plus(1, 1), C, 1e-9);
  }
  throw Error(ErrorCode::KernelBasisUnavailable, "no kernel basis for this problem");
}

IndexReport morse_index_general(const SLProblem& problem, const BoundaryCondition& bc,
                                const std::vector<double>& delta_schedule, int discrete_check_N) {
  LagrangianFrame K = kernel_trace(problem);
  LagrangianFrame L = boundary_lagrangian(problem, bc);
  LagrangianFrame LF = boundary_lagrangian(problem, BoundaryCondition::friedrichs());
  IndexReport base = morse_index_dirichlet(problem, delta_schedule);
  IndexReport rep = base;
  rep.index = "morse_general";
  int corr = triple_index(K, L, LF);
  rep.diagnostics["friedrichs_index"] = base.verdict.is_integer() ? nlohmann::ordered_json(base.verdict.value)
                                                                  : nlohmann::ordered_json(nullptr);
  rep.diagnostics["triple_index_correction"] = corr;
  if (!base.verdict.is_integer()) return rep;
  rep.verdict = Verdict::integer(base.verdict.value + corr);
  bool regular = problem.left == EndpointKind::Regular && problem.right == EndpointKind::Regular;
  if (regular && discrete_check_N > 0) {
    DiscreteOperator op = discretize(problem, bc, discrete_check_N);
    int neg = count_below(op, -kernel_threshold(op));
    rep.diagnostics["discrete_negative_count"] = neg;
    rep.diagnostics["discrete_agree"] = neg == rep.verdict.value;
  }
  return rep;
}

Vec trace_map(const SLProblem& problem, const SolutionData& f, const std::vector<SolutionData>& kernel_basis,
              const std::vector<SolutionData>& probes, const TraceOptions& opt) {
  Vec out(kernel_basis.size() + probes.size());
  if (!kernel_basis.empty() && problem.left == EndpointKind::SingularLimitPoint)
    throw Error(ErrorCode::BracketLimitDiverges, "limit-point endpoint carries no trace");
  for (std::size_t i = 0; i < kernel_basis.size(); ++i) {
    if (problem.left == EndpointKind::Regular) {
      out(i) = -boundary_bracket(f(problem.a), kernel_basis[i](problem.a));
      continue;
    }
    std::vector<double> vals;
    for (double off : opt.offsets) {
      double t = problem.a + off;
      vals.push_back(-boundary_bracket(f(t), kernel_basis[i](t)));
    }
    std::size_t m = vals.size();
    double last = vals[m - 1], prev = vals[m - 2];
    if (!std::isfinite(last) || std::abs(last - prev) > opt.cauchy_tol * std::max(1.0, std::abs(last)))
      throw Error(ErrorCode::BracketLimitDiverges, "bracket fails the Cauchy test toward the singular endpoint");
    out(i) = last;
  }
  for (std::size_t j = 0; j < probes.size(); ++j)
    out(kernel_basis.size() + j) = boundary_bracket(f(problem.b), probes[j](problem.b));
  return out;
}

std::vector<int> select_kernel_functions(const SLProblem& problem, const std::vector<SolutionData>& candidates, int count,
                                         const TraceOptions& opt) {
  const int k = static_cast<int>(candidates.size());
  if (count < 0 || count > k) throw Error(ErrorCode::SelectionFailed, "requested more kernel functions than candidates");
  const double t = problem.a + opt.offsets.back();
  Mat G = Mat::Zero(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) G(i, j) = boundary_bracket(candidates[i](t), candidates[j](t));
  const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
  Eigen::ColPivHouseholderQR<Mat> qr(G);
  qr.setThreshold(1e-9);
  if (qr.rank() < count) throw Error(ErrorCode::SelectionFailed, "bracket Gram matrix is rank deficient");
  std::vector<int> chosen;
  for (int i = 0; i < count; ++i) chosen.push_back(qr.colsPermutation().indices()(i));
  std::sort(chosen.begin(), chosen.end());
  Mat sub(count, count);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j) sub(i, j) = G(chosen[i], chosen[j]);
  Eigen::JacobiSVD<Mat> svd(sub);
  if (count > 0 && svd.singularValues().minCoeff() <= 1e-9 * scale)
    throw Error(ErrorCode::SelectionFailed, "no nondegenerate subset among the leading pivots");
  return chosen;
}

EndpointClass endpoint_classify(const SLProblem& problem, Endpoint end) {
  double e = end == Endpoint::Left ? problem.a : problem.b;
  if (problem.bessel_q && end == Endpoint::Left && problem.a == 0.0)
    return *problem.bessel_q < 0.75 ? EndpointClass::LimitCircle : EndpointClass::LimitPoint;
  if (std::isfinite(e)) {
    try {
      Mat P = problem.P(e), Q = problem.Q(e), R = problem.R(e);
      Eigen::FullPivLU<Mat> lu(P);
      if (P.allFinite() && Q.allFinite() && R.allFinite() && lu.isInvertible()) return EndpointClass::Regular;
    } catch (const Error&) {
    }
  }
  // numeric: square-integrability of the fundamental system through tail increments on geometric cutoffs
  const double inner = end == Endpoint::Left ? (std::isfinite(problem.b) ? 0.5 * (problem.a + problem.b) : problem.a + 1.0)
                                             : (std::isfinite(problem.b) ? 0.5 * (problem.a + problem.b) : std::max(1.0, problem.a + 1.0));
  auto at_level = [&](int k) {
    if (end == Endpoint::Left) return problem.a + (inner - problem.a) * std::pow(10.0, -k);
    if (!std::isfinite(problem.b)) return inner * std::pow(10.0, k);
    return problem.b - (problem.b - inner) * std::pow(10.0, -k);
  };
  const int levels = 6;
  double far = at_level(levels);
  FundamentalSolution fs = end == Endpoint::Left ? fundamental_solution(problem, inner, far, inner)
                                                 : fundamental_solution(problem, inner, inner, far);
  const int n = problem.n;
  std::vector<double> incr;
  for (int k = 0; k < levels; ++k) {
    double t0 = at_level(k), t1 = at_level(k + 1);
    // Simpson in log distance to the endpoint
    const int m = 64;
    double acc = 0.0;
    auto dist = [&](double t) { return end == Endpoint::Left ? t - problem.a : (std::isfinite(problem.b) ? problem.b - t : t); };
    double l0 = std::log(dist(t0)), l1 = std::log(dist(t1));
    for (int i = 0; i <= m; ++i) {
      double l = l0 + (l1 - l0) * i / m;
      double d = std::exp(l);
      double t = end == Endpoint::Left ? problem.a + d : (std::isfinite(problem.b) ? problem.b - d : d);
      double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      Mat g = fs.at(t);
      acc += w * g.bottomRows(n).squaredNorm() * d;
    }
    incr.push_back(std::abs(acc * (l1 - l0) / (3.0 * m)));
  }
  double ratio = incr[levels - 1] / incr[levels - 2];
  double ratio2 = incr[levels - 2] / incr[levels - 3];
  if (ratio < 0.97 && ratio2 < 0.97) return EndpointClass::LimitCircle;
  if (ratio > 1.03 && ratio2 > 1.03) return EndpointClass::LimitPoint;
  throw Error(ErrorCode::Inconclusive, "tail growth ratio inside the ambiguity band");
}

}  // namespace symind

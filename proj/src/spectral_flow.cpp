#include "symind/spectral_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "symind/bessel.hpp"

namespace symind {

namespace {

// LDLᵀ of the band block minus shift, no pivoting; unit lower factor stored above the diagonal.
struct BandFactor {
  Mat W;  // W(k, 0) = D_k, W(k, d) = L(k + d, k)
  int bw = 0;

  int negatives() const {
    int c = 0;
    for (int k = 0; k < W.rows(); ++k)
      if (W(k, 0) < 0) ++c;
    return c;
  }

  Vec solve(Vec y) const {
    const int n = static_cast<int>(W.rows());
    for (int k = 0; k < n; ++k)
      for (int d = 1; d <= bw && k + d < n; ++d) y(k + d) -= W(k, d) * y(k);
    for (int k = 0; k < n; ++k) y(k) /= W(k, 0);
    for (int k = n - 1; k >= 0; --k)
      for (int d = 1; d <= bw && k + d < n; ++d) y(k) -= W(k, d) * y(k + d);
    return y;
  }
};

BandFactor factor_band(const DiscreteOperator& op, double shift) {
  BandFactor f;
  f.bw = op.bandwidth;
  f.W = op.band;
  const int n = op.band_size(), bw = op.bandwidth;
  f.W.col(0).array() -= shift;
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(1.0, op.norm() + std::abs(shift));
  for (int k = 0; k < n; ++k) {
    double D = f.W(k, 0);
    if (std::abs(D) < tiny) D = f.W(k, 0) = tiny;
    const int last = std::min(k + bw, n - 1);
    for (int i = k + 1; i <= last; ++i) {
      const double l = f.W(k, i - k) / D;
      for (int j = i; j <= last; ++j) f.W(i, j - i) -= l * f.W(k, j - k);
    }
    for (int i = k + 1; i <= last; ++i) f.W(k, i - k) /= D;
  }
  return f;
}

}  // namespace

int count_below(const DiscreteOperator& op, double shift) {
  BandFactor f = factor_band(op, shift);
  int count = f.negatives();
  const int k = static_cast<int>(op.corner.rows());
  if (k == 0) return count;
  Mat X(op.band_size(), k);
  for (int j = 0; j < k; ++j) X.col(j) = f.solve(op.border.col(j));
  Mat S = op.corner - shift * Mat::Identity(k, k) - op.border.transpose() * X;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
  for (int i = 0; i < k; ++i)
    if (es.eigenvalues()(i) < 0) ++count;
  return count;
}

double kernel_threshold(const DiscreteOperator& op) {
  const int nb = op.band_size(), bw = op.bandwidth;
  const int lo = op.boundary_lead, hi = nb - op.boundary_trail;
  double best = 0.0;
  for (int i = lo; i < hi; ++i) {
    double row = 0.0;
    for (int d = -bw; d <= bw; ++d) {
      int j = i + d;
      if (j < 0 || j >= nb) continue;
      row += std::abs(d >= 0 ? op.band(i, d) : op.band(j, -d));
    }
    if (op.border.cols() > 0) row += op.border.row(i).cwiseAbs().sum();
    best = std::max(best, row);
  }
  return 1e-9 * best;
}

Vec eigenvalues(const DiscreteOperator& op) {
  if (op.corner.rows() == 0 && op.bandwidth == 1) {
    const int n = op.band_size();
    Vec diag = op.band.col(0);
    Vec sub = n > 1 ? Vec(op.band.col(1).head(n - 1)) : Vec(0);
    Eigen::SelfAdjointEigenSolver<Mat> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(op.dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Vec lowest_eigenvalues(const DiscreteOperator& op, int k) {
  k = std::min(k, op.size());
  Vec out(k);
  for (int j = 0; j < k; ++j) {
    // smallest x with count_below(x) > j
    double lo = -1.0, hi = 1.0;
    while (count_below(op, lo) > j) lo *= 2.0;
    while (count_below(op, hi) <= j) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo) + std::abs(hi)); ++it) {
      double mid = 0.5 * (lo + hi);
      if (count_below(op, mid) > j)
        hi = mid;
      else
        lo = mid;
    }
    out(j) = 0.5 * (lo + hi);
  }
  return out;
}

SpectralFlowResult spectral_flow(const std::function<DiscreteOperator(double)>& family, double s0, double s1,
                                 const SpectralFlowOptions& opt) {
  struct Sample {
    DiscreteOperator op;
    double thr;
    std::map<double, int> counts;
    int below(double x) {
      auto it = counts.find(x);
      if (it != counts.end()) return it->second;
      int c = count_below(op, x);
      counts.emplace(x, c);
      return c;
    }
  };
  std::map<double, Sample> cache;
  auto at = [&](double s) -> Sample& {
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    DiscreteOperator op = family(s);
    double thr = kernel_threshold(op);
    return cache.emplace(s, Sample{std::move(op), thr, {}}).first->second;
  };

  SpectralFlowResult res;
  res.partition.push_back(s0);
  struct Cell {
    double l, r;
    int depth;
  };
  std::vector<Cell> stack{{s0, s1, 0}};
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    const double m = 0.5 * (c.l + c.r);
    Sample& L = at(c.l);
    Sample& Mi = at(m);
    Sample& R = at(c.r);
    const double thr = std::max({L.thr, Mi.thr, R.thr});
    const bool tiny = std::abs(c.r - c.l) < opt.min_cell;
    const bool same_size = L.op.size() == Mi.op.size() && Mi.op.size() == R.op.size();
    bool accepted = false;
    for (double a = opt.window_gap; (tiny || same_size) && a > 10.0 * thr; a *= 0.5) {
      bool empty = true;
      for (Sample* s : {&L, &Mi, &R})
        if (s->below(2.0 * a) != s->below(0.5 * a)) empty = false;
      if (!empty) continue;
      if (!tiny && !(L.below(a) == Mi.below(a) && Mi.below(a) == R.below(a))) continue;
      int nl = L.below(a) - L.below(-L.thr), nr = R.below(a) - R.below(-R.thr);
      res.flow += nr - nl;
      res.margins.push_back(a);
      res.partition.push_back(c.r);
      accepted = true;
      break;
    }
    if (accepted) continue;
    if (c.depth >= opt.max_bisections)
      throw Error(ErrorCode::NoSpectralGap, "no spectral gap around zero on a parameter cell");
    stack.push_back({m, c.r, c.depth + 1});
    stack.push_back({c.l, m, c.depth + 1});
  }
  return res;
}

SfFormulaReport verify_sf_formula(const std::function<SLProblem(double)>& problem_family,
                                  const std::function<BoundaryCondition(double)>& bc_family, double s0, double s1,
                                  int N, const SpectralFlowOptions& opt) {
  SfFormulaReport rep;
  rep.sf = spectral_flow([&](double s) { return discretize(problem_family(s), bc_family(s), N); }, s0, s1, opt).flow;
  const SymplecticSpace bsp = SymplecticSpace::minus_plus(problem_family(s0).n, problem_family(s0).n);
  LagrangianPath p1{bsp, [&](double s) { return boundary_lagrangian(problem_family(s), bc_family(s)); }, s0, s1};
  LagrangianPath p2{bsp, [&](double s) { return kernel_trace(problem_family(s)); }, s0, s1};
  rep.maslov_detail = maslov_clm(p1, p2, s0, s1);
  rep.maslov = rep.maslov_detail.value;
  rep.agree = rep.sf == -rep.maslov;
  return rep;
}

LagrangianFrame rotated_line(double theta) {
  Mat v(2, 1);
  v << std::cos(theta), std::sin(theta);
  return LagrangianFrame(SymplecticSpace::standard(1), v);
}

EigenTrace eigen_trace(const std::function<DiscreteOperator(double)>& family, const std::vector<double>& s_grid,
                       int tracked) {
  EigenTrace tr;
  for (double s : s_grid) {
    tr.s.push_back(s);
    tr.eigenvalues.push_back(lowest_eigenvalues(family(s), tracked));
  }
  return tr;
}

namespace {

SLProblem truncated_bessel(double q, double delta) {
  SLProblem p = make_problem(delta, 1.0, MatrixFunction::constant(Mat::Identity(1, 1)),
                             MatrixFunction::constant(Mat::Zero(1, 1)),
                             MatrixFunction::scalar([q](double t) { return q / (t * t); }, "q/t^2"), "bessel");
  return p;
}

// data (x^{[1]}, x) at delta of the functions with trace on the given line
LagrangianFrame trace_line_to_data(double r, double delta, const LagrangianFrame& line) {
  SingularPair y = singular_solutions(r, delta);
  Mat K(2, 2);
  K << -y.y2, y.dy2, -y.y1, y.dy1;
  Mat z = K.fullPivLu().solve(line.frame());
  return lagrangian_from_columns(SymplecticSpace::standard(1), z);
}

}  // namespace

RellichReport rellich_ghosts(double q, double truncation, const std::function<LagrangianFrame(double)>& bc_line,
                             const RellichOptions& opt) {
  const double r = r_of_q(q);
  const LagrangianFrame F = friedrichs_trace_frame(r);
  const SymplecticSpace sing = SymplecticSpace::minus_plus(1, 0);
  RellichReport rep;
  rep.u = opt.u;
  rep.M = opt.M;
  SLProblem prob = truncated_bessel(q, truncation);
  Mesh mesh = Mesh::graded_left(truncation, 1.0, opt.N, opt.grading);
  double umax = 0.0;
  for (double u : opt.u) {
    LagrangianFrame line = bc_line(u);
    if (u != 0.0 && intersection_dim(line, F, 1e-12) > 0)
      throw Error(ErrorCode::TransversalityViolated, "boundary line meets the Friedrichs line away from u = 0");
    umax = std::max(umax, u);
    LagrangianFrame left = trace_line_to_data(r, truncation, line);
    BoundaryCondition bc =
        BoundaryCondition::general(direct_sum(left, dirichlet(SymplecticSpace::standard(1))));
    DiscreteOperator op = discretize(prob, bc, mesh);
    std::vector<int> row;
    for (double M : opt.M) row.push_back(count_below(op, -M));
    rep.count_below_minus_M.push_back(row);
    rep.bottom_eigenvalue.push_back(lowest_eigenvalues(op, 1)(0));
  }
  rep.monotone_bottom = true;
  for (std::size_t i = 1; i < opt.u.size(); ++i) {
    bool closer = std::abs(opt.u[i]) < std::abs(opt.u[i - 1]);
    if (closer && !(rep.bottom_eigenvalue[i] < rep.bottom_eigenvalue[i - 1])) rep.monotone_bottom = false;
  }
  LagrangianFrame Fs(sing, F.frame());
  LagrangianPath fixed = constant_path(Fs, 0.0, umax);
  LagrangianPath moving{sing, [&](double u) { return LagrangianFrame(sing, bc_line(u).frame()); }, 0.0, umax};
  rep.maslov_prediction = maslov_clm(fixed, moving, 0.0, umax).value;
  return rep;
}

MorseJumpReport morse_jump_check(const SLProblem& problem, const std::function<BoundaryCondition(double)>& bc_path,
                                 int N) {
  auto family = [&](double s) { return discretize(problem, bc_path(s), N); };
  MorseJumpReport rep;
  DiscreteOperator op0 = family(0.0), op1 = family(1.0);
  rep.morse0 = count_below(op0, -kernel_threshold(op0));
  rep.morse1 = count_below(op1, -kernel_threshold(op1));
  rep.sf = spectral_flow(family, 0.0, 1.0).flow;
  const SymplecticSpace bsp = SymplecticSpace::minus_plus(problem.n, problem.n);
  LagrangianPath fixed = constant_path(boundary_lagrangian(problem, BoundaryCondition::friedrichs()), 0.0, 1.0);
  LagrangianPath moving{bsp, [&](double s) { return boundary_lagrangian(problem, bc_path(s)); }, 0.0, 1.0};
  rep.maslov = maslov_clm(fixed, moving, 0.0, 1.0).value;
  rep.residual = rep.morse1 - rep.morse0 + rep.sf - rep.maslov;
  return rep;
}

}  // namespace symind

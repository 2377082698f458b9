#include "symind/maslov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

namespace symind {

namespace {

using CMat = Eigen::MatrixXcd;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

CMat unitary_of(const LagrangianFrame& L) {
  Mat C = L.space().to_canonical() * L.frame();
  int n = L.half_dim();
  CMat U(n, n);
  U.real() = C.topRows(n);
  U.imag() = C.bottomRows(n);
  return U;
}

std::vector<double> sorted_angles(const LagrangianFrame& l1, const LagrangianFrame& l2) {
  Eigen::VectorXcd ev = souriau_spectrum(l1, l2);
  std::vector<double> a(ev.size());
  for (int i = 0; i < ev.size(); ++i) a[i] = std::arg(ev(i));
  std::sort(a.begin(), a.end());
  return a;
}

double circ_diff(double to, double from) { return std::remainder(to - from, kTwoPi); }

// Nearest multiple of 2π and the signed offset from it.
double offset_from_lattice(double phi, double& m) {
  m = std::round(phi / kTwoPi);
  return phi - kTwoPi * m;
}

Mat random_symmetric(int n, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) S(i, j) = g(rng);
  return 0.5 * (S + S.transpose());
}

Mat smallest_sine_directions(const LagrangianFrame& A, const LagrangianFrame& B, int k) {
  Mat R = B.frame() - A.frame() * (A.frame().transpose() * B.frame());
  Eigen::JacobiSVD<Mat> svd(R, Eigen::ComputeFullV);
  return orthonormal_basis(B.frame() * svd.matrixV().rightCols(k), 1e-12);
}

struct Track {
  std::vector<double> t;
  std::vector<std::vector<double>> lifted;  // lifted[sample][track]
};

class Scanner {
 public:
  Scanner(const LagrangianPath& p1, const LagrangianPath& p2, const MaslovOptions& o) : p1_(p1), p2_(p2), opt_(o) {}

  std::vector<double> angles(double t) const { return sorted_angles(p1_(t), p2_(t)); }

  Track scan(double a, double b) {
    Track tr;
    std::vector<double> a0 = angles(a);
    tr.t.push_back(a);
    tr.lifted.push_back(a0);
    int m = std::max(2, opt_.samples);
    std::vector<double> grid;
    for (int i = 1; i < m - 1; ++i) grid.push_back(a + (b - a) * i / (m - 1));
    const double lo = std::min(a, b), hi = std::max(a, b);
    for (const auto* p : {&p1_, &p2_})
      for (double k : p->knots)
        if (k > lo && k < hi) grid.push_back(k);
    if (b > a)
      std::sort(grid.begin(), grid.end());
    else
      std::sort(grid.begin(), grid.end(), std::greater<>());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    grid.push_back(b);
    budget_ = opt_.max_samples + static_cast<int>(grid.size());
    double prev = a;
    for (double t : grid) {
      if (t == prev) continue;
      advance(tr, prev, t, 0);
      prev = t;
    }
    return tr;
  }

  // Lifted value of the track closest to `guess` at parameter t.
  double track_value(double t, double guess) const {
    std::vector<double> a = angles(t);
    double best = guess, bd = 1e300;
    for (double x : a) {
      double d = circ_diff(x, guess);
      if (std::abs(d) < bd) {
        bd = std::abs(d);
        best = guess + d;
      }
    }
    return best;
  }

 private:
  void advance(Track& tr, double t0, double t1, int depth) {
    const std::vector<double>& prev = tr.lifted.back();
    std::vector<double> next_red = angles(t1);
    int n = static_cast<int>(prev.size());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::vector<double> prev_red(n);
    for (int i = 0; i < n; ++i) prev_red[i] = std::remainder(prev[i], kTwoPi);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return prev_red[x] < prev_red[y]; });
    double best = 1e300;
    int best_shift = 0;
    for (int s = 0; s < n; ++s) {
      double worst = 0.0;
      for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(circ_diff(next_red[(i + s) % n], prev_red[order[i]])));
      if (worst < best) {
        best = worst;
        best_shift = s;
      }
    }
    if (best > opt_.angle_budget) {
      if (depth > 40 || t1 - t0 < 1e-13 || static_cast<int>(tr.t.size()) > budget_)
        throw Error(ErrorCode::ContinuityBudgetExceeded, "eigen-angle step exceeds the continuity budget");
      double mid = 0.5 * (t0 + t1);
      advance(tr, t0, mid, depth + 1);
      advance(tr, mid, t1, depth + 1);
      return;
    }
    std::vector<double> lifted(n);
    for (int i = 0; i < n; ++i) {
      int k = order[i];
      lifted[k] = prev[k] + circ_diff(next_red[(i + best_shift) % n], prev_red[k]);
    }
    tr.t.push_back(t1);
    tr.lifted.push_back(std::move(lifted));
  }

  const LagrangianPath& p1_;
  const LagrangianPath& p2_;
  const MaslovOptions& opt_;
  int budget_ = 0;
};

struct RawCrossing {
  double t;
  int count;
  int endpoint;  // -1 at a, +1 at b, 0 interior
  int direction_votes = 0;  // from the angle scan, used when the crossing form is degenerate
};

Mat symmetric_chart(const LagrangianPath& path, double t, const Mat& F0, const Mat& W, const Mat& JW) {
  int n = static_cast<int>(F0.cols());
  Mat B(F0.rows(), 2 * n);
  B << F0, W;
  Mat XY = B.fullPivLu().solve(path(t).frame());
  Mat X = XY.topRows(n), Y = XY.bottomRows(n);
  Mat S = (F0.transpose() * JW) * Y * X.inverse();
  return 0.5 * (S + S.transpose());
}

}  // namespace

LagrangianPath constant_path(const LagrangianFrame& L, double a, double b) {
  LagrangianPath p{L.space(), [L](double) { return L; }, a, b};
  p.refinable = false;
  p.constant = true;
  return p;
}

LagrangianPath transported_path(const LagrangianFrame& L, std::function<Mat(double)> M, double a, double b) {
  SymplecticSpace sp = L.space();
  return LagrangianPath{sp,
                        [L, M, sp](double t) {
                          return transform(SymplecticMatrix{sp, M(t)}, L);
                        },
                        a, b};
}

Eigen::VectorXcd souriau_spectrum(const LagrangianFrame& l1, const LagrangianFrame& l2) {
  if (l1.space() != l2.space()) throw Error(ErrorCode::SpaceMismatch, "frames live in different spaces");
  CMat V = unitary_of(l1).adjoint() * unitary_of(l2);
  CMat W = V * V.transpose();
  Eigen::ComplexEigenSolver<CMat> es(W, false);
  return es.eigenvalues();
}

Mat q_form(const LagrangianPath& path, double t0, double h, const Mat& W, double a, double b) {
  Mat F0 = path(t0).frame();
  Mat JW = path.space.J() * W;
  auto S = [&](double t) { return symmetric_chart(path, t, F0, W, JW); };
  double slack = 1e-12 * std::max(1.0, std::abs(b - a));
  auto deriv = [&](double hh) -> Mat {
    if (t0 - hh >= a - slack && t0 + hh <= b + slack) return (S(t0 + hh) - S(t0 - hh)) / (2.0 * hh);
    Mat S0 = S(t0);
    if (t0 + 2.0 * hh <= b + slack) return (-3.0 * S0 + 4.0 * S(t0 + hh) - S(t0 + 2.0 * hh)) / (2.0 * hh);
    return (3.0 * S0 - 4.0 * S(t0 - hh) + S(t0 - 2.0 * hh)) / (2.0 * hh);
  };
  Mat D = (4.0 * deriv(0.5 * h) - deriv(h)) / 3.0;
  return 0.5 * (D + D.transpose());
}

CrossingForm crossing_form_matrix(const LagrangianPath& path, const LagrangianFrame& reference, double t0, double h,
                                  const MaslovOptions& opt) {
  LagrangianFrame L0 = path(t0);
  Mat V = intersection_basis(L0, reference, 1e-7);
  if (V.cols() == 0) throw Error(ErrorCode::NotACrossing, "path is transversal to the reference at t0");
  const Mat& F0 = L0.frame();
  const Mat& J = path.space.J();
  int n = L0.half_dim();
  Mat C = F0.transpose() * V;
  std::mt19937 rng(opt.seed);
  Mat W = J * F0;
  Mat G = C.transpose() * q_form(path, t0, h, W, path.a, path.b) * C;
  double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
  for (int attempt = 0; attempt < 8; ++attempt) {
    Mat W2 = orthonormal_basis(J * F0 + F0 * random_symmetric(n, rng), 1e-12);
    Mat B(F0.rows(), 2 * n);
    B << F0, W2;
    if (W2.cols() != n || B.fullPivLu().rank() < 2 * n) continue;
    Mat G2 = C.transpose() * q_form(path, t0, h, W2, path.a, path.b) * C;
    if ((G - G2).cwiseAbs().maxCoeff() <= 1e-4 * scale) {
      return CrossingForm{V, G, inertia(G, 0.0, opt.form_floor * scale)};
    }
  }
  throw Error(ErrorCode::ChartBreakdown, "crossing form depends on the chosen complement");
}

InertiaTriple crossing_form(const LagrangianPath& path, const LagrangianFrame& reference, double t0, double h) {
  return crossing_form_matrix(path, reference, t0, h).inertia;
}

namespace {

MaslovResult maslov_regular(const LagrangianPath& path1, const LagrangianPath& path2, double a, double b,
                            const MaslovOptions& opt, bool& degenerate) {
  degenerate = false;
  Scanner sc(path1, path2, opt);
  Track tr = sc.scan(a, b);
  const int ns = static_cast<int>(tr.t.size());
  const int nt = static_cast<int>(tr.lifted[0].size());
  const double ztol = opt.endpoint_angle_tol;
  std::vector<RawCrossing> raw;

  for (int j = 0; j < nt; ++j) {
    std::vector<double> off(ns), lat(ns);
    std::vector<bool> zero(ns);
    for (int i = 0; i < ns; ++i) {
      off[i] = offset_from_lattice(tr.lifted[i][j], lat[i]);
      zero[i] = std::abs(off[i]) <= ztol;
    }
    auto locate = [&](int i0, int i1, double target) {
      double x0 = tr.lifted[i0][j], x1 = tr.lifted[i1][j];
      double lo = tr.t[i0], hi = tr.t[i1], vlo = x0 - target;
      while (std::abs(hi - lo) > opt.t_tol) {
        double mid = 0.5 * (lo + hi);
        double guess = x0 + (x1 - x0) * (mid - tr.t[i0]) / (tr.t[i1] - tr.t[i0]);
        double v = sc.track_value(mid, guess) - target;
        if (v == 0.0) return mid;
        if ((v > 0) == (vlo > 0))
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    };
    auto sgn = [](double v) { return (v > 0) - (v < 0); };
    int i = 0;
    while (i < ns) {
      if (zero[i]) {
        int k = i;
        while (k + 1 < ns && zero[k + 1]) ++k;
        double base = kTwoPi * lat[i];
        auto rel = [&](int idx) { return sgn(tr.lifted[idx][j] - base); };
        if (i == 0 && k == ns - 1) {
          // identically intersecting along the whole interval: both endpoint terms, opposite directions cancel
          raw.push_back({tr.t[0], 1, -1, 0});
          raw.push_back({tr.t[ns - 1], 1, +1, 0});
          degenerate = true;
        } else if (i == 0) {
          int exit = rel(k + 1);
          raw.push_back({tr.t[0], 1, -1, exit});
          for (int q = 1; q <= k; ++q)
            if (rel(q) != exit) degenerate = true;
        } else if (k == ns - 1) {
          int entry = rel(i - 1);
          raw.push_back({tr.t[ns - 1], 1, +1, -entry});
          for (int q = i; q < ns - 1; ++q)
            if (rel(q) != entry) degenerate = true;
        } else {
          // sign changes of the offset across the run, zero samples skipped
          int changes = 0, last_sign = rel(i - 1), last_idx = i - 1, at = -1, from = -1;
          for (int q = i; q <= k + 1; ++q) {
            int sq = rel(q);
            if (sq == 0) continue;
            if (sq != last_sign) {
              ++changes;
              from = last_idx;
              at = q;
            }
            last_sign = sq;
            last_idx = q;
          }
          if (changes == 1) {
            double tc = (at - from == 1) ? locate(from, at, base) : tr.t[(from + at) / 2];
            raw.push_back({tc, 1, 0, rel(k + 1)});
          } else if (changes == 0 && k == i) {
            raw.push_back({tr.t[i], 1, 0, 0});
          } else {
            degenerate = true;
            raw.push_back({tr.t[i], 1, 0, 0});
          }
        }
        i = k + 1;
        continue;
      }
      if (i + 1 < ns && !zero[i + 1]) {
        double x0 = tr.lifted[i][j], x1 = tr.lifted[i + 1][j];
        double m = std::ceil(std::min(x0, x1) / kTwoPi);
        if (kTwoPi * m < std::max(x0, x1) && kTwoPi * m > std::min(x0, x1))
          raw.push_back({locate(i, i + 1, kTwoPi * m), 1, 0, x1 > x0 ? 1 : -1});
      }
      ++i;
    }
  }

  std::sort(raw.begin(), raw.end(), [](const RawCrossing& x, const RawCrossing& y) { return x.t < y.t; });
  std::vector<RawCrossing> merged;
  std::vector<int> votes_pos, votes_neg;
  for (const auto& r : raw) {
    if (!merged.empty() && r.endpoint == merged.back().endpoint && r.t - merged.back().t <= opt.merge_tol) {
      merged.back().count += r.count;
      (r.direction_votes > 0 ? votes_pos.back() : votes_neg.back()) += r.direction_votes != 0;
    } else {
      merged.push_back(r);
      votes_pos.push_back(r.direction_votes > 0);
      votes_neg.push_back(r.direction_votes < 0);
    }
  }

  MaslovResult res;
  double h = opt.fd_rel_step * (b - a);
  for (std::size_t c = 0; c < merged.size(); ++c) {
    const RawCrossing& r = merged[c];
    LagrangianFrame L1 = path1(r.t), L2 = path2(r.t);
    Mat V = smallest_sine_directions(L1, L2, r.count);
    Mat G = Mat::Zero(r.count, r.count);
    if (!path2.constant) {
      Mat F = L2.frame();
      Mat C = F.transpose() * V;
      G += C.transpose() * q_form(path2, r.t, h, path2.space.J() * F, path2.a, path2.b) * C;
    }
    if (!path1.constant) {
      Mat F = L1.frame();
      Mat C = F.transpose() * V;
      G -= C.transpose() * q_form(path1, r.t, h, path1.space.J() * F, path1.a, path1.b) * C;
    }
    double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
    CrossingRecord rec{r.t, V, inertia(G, 0.0, opt.form_floor * scale), 0};
    if (rec.inertia.n_zero == 0) {
      rec.contribution = r.endpoint < 0 ? rec.inertia.n_plus
                         : r.endpoint > 0 ? -rec.inertia.n_minus
                                          : rec.inertia.signature();
    } else if (r.endpoint != 0) {
      // degenerate endpoint crossing: read the direction off the angle scan
      rec.contribution = r.endpoint < 0 ? votes_pos[c] : -votes_neg[c];
    } else {
      degenerate = true;
    }
    res.crossings.push_back(rec);
    res.value += rec.contribution;
  }
  return res;
}

}  // namespace

MaslovResult maslov_clm(const LagrangianPath& path1, const LagrangianPath& path2, double a, double b,
                        const MaslovOptions& opt) {
  if (path1.space != path2.space) throw Error(ErrorCode::SpaceMismatch, "paths live in different spaces");
  bool degenerate = false;
  MaslovResult base = maslov_regular(path1, path2, a, b, opt, degenerate);
  if (!degenerate) return base;

  std::mt19937 rng(opt.seed);
  const int dim = path2.space.dim();
  Mat S = random_symmetric(dim, rng);
  Mat H = path2.space.J() * S;
  H /= H.norm();
  bool have_prev = false;
  int prev = 0;
  MaslovResult prev_res;
  for (double delta : opt.deltas) {
    LagrangianPath p2 = path2;
    LagrangianPath orig = path2;
    p2.sampler = [orig, H, delta, a, b](double t) {
      double phi = std::sin(kPi * (t - a) / (b - a));
      Mat E = (delta * phi * H).exp();
      return transform(SymplecticMatrix{orig.space, E}, orig(t));
    };
    p2.constant = false;
    bool deg = false;
    MaslovResult r;
    try {
      r = maslov_regular(path1, p2, a, b, opt, deg);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ContinuityBudgetExceeded) throw;
      deg = true;
    }
    if (deg) {
      have_prev = false;
      continue;
    }
    if (have_prev && r.value == prev) {
      prev_res.perturbation = delta;
      return prev_res;
    }
    have_prev = true;
    prev = r.value;
    prev_res = r;
    prev_res.perturbation = delta;
  }
  throw Error(ErrorCode::UnresolvedDegeneracy, "no perturbation magnitude regularizes the crossings stably");
}

int triple_index(const LagrangianFrame& alpha, const LagrangianFrame& beta, const LagrangianFrame& gamma,
                 double tol) {
  if (alpha.space() != beta.space() || beta.space() != gamma.space())
    throw Error(ErrorCode::SpaceMismatch, "triple index needs frames in one space");
  const Mat& A = alpha.frame();
  const Mat& B = beta.frame();
  const Mat& G = gamma.frame();
  const Mat& J = alpha.space().J();
  int n = alpha.half_dim();
  int d = alpha.space().dim();

  // u = A x = B y + G z, and with u = b + g the form is ω(b, g)
  Mat K(d, 3 * n);
  K << A, -B, -G;
  Mat N = null_space(K, tol);
  int nplus = 0;
  if (N.cols() > 0) {
    Mat Bv = B * N.middleRows(n, n);
    Mat Gv = G * N.bottomRows(n);
    Mat Q = Bv.transpose() * J * Gv;
    nplus = inertia(0.5 * (Q + Q.transpose()), tol, tol).n_plus;
  }
  Mat K3 = Mat::Zero(2 * d, 3 * n);
  K3.block(0, 0, d, n) = A;
  K3.block(0, n, d, n) = -B;
  K3.block(d, 0, d, n) = A;
  K3.block(d, 2 * n, d, n) = -G;
  int abg = static_cast<int>(null_space(K3, tol).cols());
  return nplus + intersection_dim(alpha, gamma, tol) - abg;
}

int hormander_index(const LagrangianFrame& l1, const LagrangianFrame& l2, const LagrangianFrame& m1,
                    const LagrangianFrame& m2, double tol) {
  return triple_index(l1, l2, m2, tol) - triple_index(l1, l2, m1, tol);
}

}  // namespace symind

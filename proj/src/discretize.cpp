#include <algorithm>
#include <cmath>

#include "symind/spectral_flow.hpp"

namespace symind {

Mesh Mesh::uniform(double a, double b, int cells) {
  Mesh m;
  m.t.resize(cells + 1);
  for (int i = 0; i <= cells; ++i) m.t[i] = a + (b - a) * i / cells;
  m.t.back() = b;
  return m;
}

Mesh Mesh::graded_left(double a, double b, int cells, double power) {
  Mesh m;
  m.t.resize(cells + 1);
  for (int i = 0; i <= cells; ++i) m.t[i] = a + (b - a) * std::pow(static_cast<double>(i) / cells, power);
  m.t.back() = b;
  return m;
}

Mat DiscreteOperator::dense() const {
  const int nb = band_size(), k = static_cast<int>(corner.rows());
  Mat A = Mat::Zero(nb + k, nb + k);
  for (int i = 0; i < nb; ++i)
    for (int d = 0; d <= bandwidth && i + d < nb; ++d) {
      A(i, i + d) = band(i, d);
      A(i + d, i) = band(i, d);
    }
  if (k > 0) {
    A.topRightCorner(nb, k) = border;
    A.bottomLeftCorner(k, nb) = border.transpose();
    A.bottomRightCorner(k, k) = corner;
  }
  return A;
}

double DiscreteOperator::norm() const {
  const int nb = band_size(), k = static_cast<int>(corner.rows());
  Vec row = Vec::Zero(nb + k);
  for (int i = 0; i < nb; ++i)
    for (int d = 0; d <= bandwidth && i + d < nb; ++d) {
      row(i) += std::abs(band(i, d));
      if (d > 0) row(i + d) += std::abs(band(i, d));
    }
  if (k > 0) {
    row.head(nb) += border.cwiseAbs().rowwise().sum();
    row.tail(k) += border.cwiseAbs().colwise().sum().transpose() + corner.cwiseAbs().rowwise().sum();
  }
  return row.maxCoeff();
}

namespace {

// X = range(B) and the symmetric S with P = S X on X, for a Lagrangian frame in canonical (P; X) rows.
struct Constraint {
  Mat B;
  Mat S;
};

Constraint constraint_from_canonical(const Mat& Fp, const Mat& Fx) {
  Eigen::JacobiSVD<Mat> svd(Fx, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  int k = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > 1e-10) ++k;
  Constraint c;
  c.B = svd.matrixU().leftCols(k);
  Mat Gp = Fp * svd.matrixV();
  c.S = Mat::Zero(k, k);
  if (k > 0) {
    Mat S = c.B.transpose() * Gp.leftCols(k) * s.head(k).cwiseInverse().asDiagonal();
    c.S = 0.5 * (S + S.transpose());
  }
  return c;
}

struct Entry {
  int index;
  double coeff;
};

class Assembler {
 public:
  Assembler(int nb, int k, int bw)
      : band_(Mat::Zero(nb, bw + 1)), border_(Mat::Zero(nb, k)), corner_(Mat::Zero(k, k)), nb_(nb), bw_(bw) {}

  void add(int i, int j, double v) {
    if (i > j) return;
    if (j < nb_) {
      if (j - i > bw_) throw Error(ErrorCode::BCEliminationSingular, "coupling outside the band");
      band_(i, j - i) += v;
    } else if (i < nb_) {
      border_(i, j - nb_) += v;
    } else {
      corner_(i - nb_, j - nb_) += v;
      if (i != j) corner_(j - nb_, i - nb_) += v;
    }
  }

  Mat band_, border_, corner_;

 private:
  int nb_, bw_;
};

}  // namespace

DiscreteOperator discretize(const SLProblem& problem, const BoundaryCondition& bc, int N) {
  if (N < 16) throw Error(ErrorCode::GridTooCoarse, "at least 16 cells required");
  return discretize(problem, bc, Mesh::uniform(problem.a, problem.b, N));
}

DiscreteOperator discretize(const SLProblem& problem, const BoundaryCondition& bc, const Mesh& mesh) {
  const int N = mesh.cells();
  if (N < 16) throw Error(ErrorCode::GridTooCoarse, "at least 16 cells required");
  const int n = problem.n;
  LagrangianFrame L = boundary_lagrangian(problem, bc);
  Mat C = L.space().to_canonical() * L.frame();  // rows (P_a, P_b, X_a, X_b)

  // separated if Λ splits into a left and a right Lagrangian
  auto rows = [&](std::initializer_list<int> starts) {
    Mat R(n * static_cast<int>(starts.size()) * 2, 2 * n);
    int r = 0;
    for (int s0 : starts)
      for (int i = 0; i < n; ++i) R.row(r++) = C.row(s0 + i);
    return Mat(R.topRows(r));
  };
  Mat right_rows = rows({n, 3 * n});
  Mat left_rows = rows({0, 2 * n});
  Mat Na = null_space(right_rows, 1e-10), Nb = null_space(left_rows, 1e-10);
  const bool separated = Na.cols() + Nb.cols() == 2 * n;

  // nodal dof (node, comp) → reduced combination
  std::vector<std::vector<Entry>> map(static_cast<std::size_t>(n) * (N + 1));
  auto dof = [n](int node, int c) { return node * n + c; };
  int nb = 0, kb = 0, bw = 2 * n - 1, lead = 0, trail = 0;
  Mat S_total;
  std::vector<int> sidx;  // reduced indices carrying -S
  if (separated) {
    Mat Fa = left_rows * Na;   // (P_a; X_a)
    Mat Fb = right_rows * Nb;  // (P_b; X_b)
    Constraint ca = constraint_from_canonical(Fa.topRows(n), Fa.bottomRows(n));
    Constraint cb = constraint_from_canonical(Fb.topRows(n), Fb.bottomRows(n));
    const int ka = static_cast<int>(ca.B.cols()), kbb = static_cast<int>(cb.B.cols());
    nb = ka + n * (N - 1) + kbb;
    lead = ka;
    trail = kbb;
    for (int c = 0; c < n; ++c)
      for (int l = 0; l < ka; ++l) map[dof(0, c)].push_back({l, ca.B(c, l)});
    for (int node = 1; node < N; ++node)
      for (int c = 0; c < n; ++c) map[dof(node, c)].push_back({ka + (node - 1) * n + c, 1.0});
    for (int c = 0; c < n; ++c)
      for (int l = 0; l < kbb; ++l) map[dof(N, c)].push_back({ka + n * (N - 1) + l, cb.B(c, l)});
    S_total = Mat::Zero(ka + kbb, ka + kbb);
    S_total.topLeftCorner(ka, ka) = ca.S;
    S_total.bottomRightCorner(kbb, kbb) = cb.S;
    for (int l = 0; l < ka; ++l) sidx.push_back(l);
    for (int l = 0; l < kbb; ++l) sidx.push_back(ka + n * (N - 1) + l);
  } else {
    Constraint c = constraint_from_canonical(C.topRows(2 * n), C.bottomRows(2 * n));
    const int k = static_cast<int>(c.B.cols());
    nb = n * (N - 1);
    kb = k;
    for (int node = 1; node < N; ++node)
      for (int cc = 0; cc < n; ++cc) map[dof(node, cc)].push_back({(node - 1) * n + cc, 1.0});
    for (int cc = 0; cc < n; ++cc)
      for (int l = 0; l < k; ++l) {
        map[dof(0, cc)].push_back({nb + l, c.B(cc, l)});
        map[dof(N, cc)].push_back({nb + l, c.B(n + cc, l)});
      }
    S_total = c.S;
    for (int l = 0; l < k; ++l) sidx.push_back(nb + l);
  }

  Assembler K(nb, kb, bw), M(nb, kb, bw);
  auto scatter = [&](Assembler& A, int p, int q, double v) {
    if (v == 0.0) return;
    for (const Entry& e : map[p])
      for (const Entry& f : map[q]) A.add(e.index, f.index, e.coeff * f.coeff * v);
  };

  const auto& t = mesh.t;
  for (int i = 0; i < N; ++i) {
    double h = t[i + 1] - t[i];
    double tm = 0.5 * (t[i] + t[i + 1]);
    Mat P = problem.P(tm), Q = problem.Q(tm);
    Mat Qs = 0.5 * (Q + Q.transpose()), Qa = 0.5 * (Q - Q.transpose());
    // element matrix on (u_i, u_{i+1})
    Mat E(2 * n, 2 * n);
    E.topLeftCorner(n, n) = P / h - Qs;
    E.topRightCorner(n, n) = -P / h - Qa;
    E.bottomLeftCorner(n, n) = -P / h + Qa;
    E.bottomRightCorner(n, n) = P / h + Qs;
    for (int r = 0; r < 2 * n; ++r)
      for (int c = 0; c < 2 * n; ++c) {
        int p = dof(i + r / n, r % n), q = dof(i + c / n, c % n);
        scatter(K, p, q, E(r, c));
      }
  }
  std::vector<double> w(N + 1, 0.0);
  for (int i = 0; i < N; ++i) {
    double h = t[i + 1] - t[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  for (int i = 0; i <= N; ++i) {
    Mat R = problem.R(t[i]);
    Mat Rs = 0.5 * (R + R.transpose());
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) scatter(K, dof(i, r), dof(i, c), w[i] * Rs(r, c));
    for (int r = 0; r < n; ++r) scatter(M, dof(i, r), dof(i, r), w[i]);
  }
  for (std::size_t x = 0; x < sidx.size(); ++x)
    for (std::size_t y = 0; y < sidx.size(); ++y)
      if (S_total(x, y) != 0.0) K.add(sidx[x], sidx[y], -S_total(x, y));

  // mass normalization
  Vec mb = M.band_.col(0);
  for (int i = 0; i < nb; ++i)
    for (int d = 1; d <= bw; ++d)
      if (std::abs(M.band_(i, d)) > 1e-12 * mb(i)) throw Error(ErrorCode::BCEliminationSingular, "mass matrix not diagonal in the band");
  if (kb > 0 && M.border_.cwiseAbs().maxCoeff() > 1e-12 * mb.cwiseAbs().maxCoeff())
    throw Error(ErrorCode::BCEliminationSingular, "mass couples band and border");
  for (int i = 0; i < nb; ++i)
    if (!(mb(i) > 0)) throw Error(ErrorCode::BCEliminationSingular, "nonpositive lumped mass");
  Vec isq = mb.cwiseSqrt().cwiseInverse();

  DiscreteOperator op;
  op.problem = problem;
  op.bc = bc;
  op.grid_size = N;
  op.bandwidth = bw;
  op.boundary_lead = lead;
  op.boundary_trail = trail;
  op.nodes = t;
  op.band = Mat::Zero(nb, bw + 1);
  for (int i = 0; i < nb; ++i)
    for (int d = 0; d <= bw && i + d < nb; ++d) op.band(i, d) = K.band_(i, d) * isq(i) * isq(i + d);
  op.border = Mat::Zero(nb, kb);
  op.corner = Mat::Zero(kb, kb);
  if (kb > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> es(M.corner_);
    if (es.eigenvalues().minCoeff() <= 0) throw Error(ErrorCode::BCEliminationSingular, "boundary mass singular");
    Mat Wm = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
             es.eigenvectors().transpose();
    op.border = isq.asDiagonal() * K.border_ * Wm;
    Mat Cn = Wm * K.corner_ * Wm;
    op.corner = 0.5 * (Cn + Cn.transpose());
  }
  return op;
}

}  // namespace symind

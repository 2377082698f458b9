#include "symind/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace symind {

Mat standard_J(int n) {
  Mat J = Mat::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n).setIdentity();
  J.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return J;
}

SymplecticSpace::SymplecticSpace(Kind k, int nl, int nr) : kind_(k), n_left_(nl), n_right_(nr) {
  if (nl < 0 || nr < 0 || nl + nr == 0) throw Error(ErrorCode::SpaceMismatch, "half dimension must be positive");
  if (k == Kind::Standard) {
    J_ = standard_J(nl);
    T_ = Mat::Identity(2 * nl, 2 * nl);
    return;
  }
  int n = nl + nr;
  J_ = Mat::Zero(2 * n, 2 * n);
  if (nl > 0) J_.block(0, 0, 2 * nl, 2 * nl) = -standard_J(nl);
  if (nr > 0) J_.block(2 * nl, 2 * nl, 2 * nr, 2 * nr) = standard_J(nr);
  // P = (-p_a, p_b), X = (x_a, x_b)
  T_ = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < nl; ++i) {
    T_(i, i) = -1.0;
    T_(n + i, nl + i) = 1.0;
  }
  for (int i = 0; i < nr; ++i) {
    T_(nl + i, 2 * nl + i) = 1.0;
    T_(n + nl + i, 2 * nl + nr + i) = 1.0;
  }
}

SymplecticSpace SymplecticSpace::standard(int n) { return SymplecticSpace(Kind::Standard, n, 0); }

SymplecticSpace SymplecticSpace::minus_plus(int n_left, int n_right) {
  return SymplecticSpace(Kind::MinusPlus, n_left, n_right);
}

LagrangianFrame::LagrangianFrame(SymplecticSpace space, Mat orthonormal_frame)
    : space_(std::move(space)), frame_(std::move(orthonormal_frame)) {
  if (frame_.rows() != space_.dim() || frame_.cols() != space_.half_dim())
    throw Error(ErrorCode::SpaceMismatch, "frame shape does not match the space");
}

Mat orthonormal_basis(const Mat& columns, double tol) {
  if (columns.cols() == 0) return Mat(columns.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(columns, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * std::max(1.0, smax)) ++r;
  return svd.matrixU().leftCols(r);
}

Mat null_space(const Mat& A, double tol) {
  int m = static_cast<int>(A.cols());
  if (A.rows() == 0) return Mat::Identity(m, m);
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * std::max(1.0, smax)) ++r;
  return svd.matrixV().rightCols(m - r);
}

LagrangianFrame lagrangian_from_columns(const SymplecticSpace& space, const Mat& columns, double tol) {
  if (columns.rows() != space.dim()) throw Error(ErrorCode::SpaceMismatch, "column length differs from space dimension");
  double scale = columns.size() ? columns.cwiseAbs().maxCoeff() : 0.0;
  Mat Q = orthonormal_basis(columns, tol);
  double iso = Q.cols() ? (Q.transpose() * space.J() * Q).cwiseAbs().maxCoeff() : 0.0;
  if (iso > tol * (1.0 + scale)) {
    std::ostringstream os;
    os << "symplectic pairing " << iso << " on the span";
    throw Error(ErrorCode::NotIsotropic, os.str());
  }
  if (Q.cols() < space.half_dim()) {
    std::ostringstream os;
    os << "rank " << Q.cols() << " < " << space.half_dim();
    throw Error(ErrorCode::RankDeficient, os.str());
  }
  return LagrangianFrame(space, Q);
}

namespace {

Eigen::JacobiSVD<Mat> sine_svd(const LagrangianFrame& A, const LagrangianFrame& B) {
  if (A.space() != B.space()) throw Error(ErrorCode::SpaceMismatch, "frames live in different spaces");
  Mat R = B.frame() - A.frame() * (A.frame().transpose() * B.frame());
  return Eigen::JacobiSVD<Mat>(R, Eigen::ComputeFullV);
}

}  // namespace

// Counts principal angles whose sine is below tol.
int intersection_dim(const LagrangianFrame& A, const LagrangianFrame& B, double tol) {
  auto svd = sine_svd(A, B);
  const Vec& s = svd.singularValues();
  int k = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) <= tol) ++k;
  return k;
}

Mat intersection_basis(const LagrangianFrame& A, const LagrangianFrame& B, double tol) {
  auto svd = sine_svd(A, B);
  const Vec& s = svd.singularValues();
  int n = static_cast<int>(s.size());
  int k = 0;
  for (int i = 0; i < n; ++i)
    if (s(i) <= tol) ++k;
  Mat C = B.frame() * svd.matrixV().rightCols(k);
  return orthonormal_basis(C, 1e-12);
}

double symplectic_residual(const Mat& M, const Mat& J) {
  return (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
}

double symplectic_residual(const SymplecticMatrix& M) { return symplectic_residual(M.entries, M.space.J()); }

LagrangianFrame graph_lagrangian(const SymplecticMatrix& M, double tol) {
  double res = symplectic_residual(M);
  if (res > tol * (1.0 + M.entries.cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << "residual " << res;
    throw Error(ErrorCode::NotSymplectic, os.str());
  }
  int n = M.space.half_dim();
  Mat G(4 * n, 2 * n);
  G.topRows(2 * n).setIdentity();
  G.bottomRows(2 * n) = M.entries;
  SymplecticSpace big = SymplecticSpace::minus_plus(n, n);
  if (M.space.kind() != SymplecticSpace::Kind::Standard) {
    // Conjugate into Darboux coordinates so the graph lives in the standard block layout.
    const Mat& T = M.space.to_canonical();
    G.topRows(2 * n) = T;
    G.bottomRows(2 * n) = T * M.entries;
  }
  return LagrangianFrame(big, orthonormal_basis(G, 1e-12));
}

LagrangianFrame transform(const SymplecticMatrix& M, const LagrangianFrame& L) {
  if (M.space != L.space()) throw Error(ErrorCode::SpaceMismatch, "matrix and frame spaces differ");
  Eigen::HouseholderQR<Mat> qr(M.entries * L.frame());
  Mat Q = qr.householderQ() * Mat::Identity(L.space().dim(), L.half_dim());
  return LagrangianFrame(L.space(), Q);
}

LagrangianFrame direct_sum(const LagrangianFrame& left, const LagrangianFrame& right) {
  if (left.space().kind() != SymplecticSpace::Kind::Standard || right.space().kind() != SymplecticSpace::Kind::Standard)
    throw Error(ErrorCode::SpaceMismatch, "direct sum takes standard-space frames");
  int nl = left.half_dim(), nr = right.half_dim();
  Mat F = Mat::Zero(2 * (nl + nr), nl + nr);
  F.block(0, 0, 2 * nl, nl) = left.frame();
  F.block(2 * nl, nl, 2 * nr, nr) = right.frame();
  return LagrangianFrame(SymplecticSpace::minus_plus(nl, nr), F);
}

namespace {

Mat axis_frame(const SymplecticSpace& space, bool momentum) {
  int n = space.half_dim();
  Mat F = Mat::Zero(space.dim(), n);
  if (space.kind() == SymplecticSpace::Kind::Standard) {
    for (int i = 0; i < n; ++i) F(momentum ? i : n + i, i) = 1.0;
    return F;
  }
  int nl = space.n_left(), nr = space.n_right();
  for (int i = 0; i < nl; ++i) F(momentum ? i : nl + i, i) = 1.0;
  for (int i = 0; i < nr; ++i) F(2 * nl + (momentum ? i : nr + i), nl + i) = 1.0;
  return F;
}

}  // namespace

LagrangianFrame dirichlet(const SymplecticSpace& space) { return LagrangianFrame(space, axis_frame(space, true)); }

LagrangianFrame neumann(const SymplecticSpace& space) { return LagrangianFrame(space, axis_frame(space, false)); }

InertiaTriple inertia(const Mat& symmetric, double rel_tol, double abs_floor) {
  InertiaTriple t;
  if (symmetric.rows() == 0) return t;
  Mat S = 0.5 * (symmetric + symmetric.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
  const Vec& ev = es.eigenvalues();
  double thr = std::max(abs_floor, rel_tol * ev.cwiseAbs().maxCoeff());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > thr)
      ++t.n_plus;
    else if (ev(i) < -thr)
      ++t.n_minus;
    else
      ++t.n_zero;
  }
  return t;
}

}  // namespace symind

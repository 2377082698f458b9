#pragma once

#include <Eigen/Dense>

#include "symind/error.hpp"

namespace symind {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;

// Ω((p,q),(p',q')) = <p,q'> - <q,p'> with coordinates ordered (quasi-derivative, position).
Mat standard_J(int n);

/// Either (R^{2n}, Ω) or the boundary space (R^{2nl} ⊕ R^{2nr}, -Ω ⊕ Ω).
/// MinusPlus coordinates are (p_a, x_a, p_b, x_b).
class SymplecticSpace {
 public:
  enum class Kind { Standard, MinusPlus };

  static SymplecticSpace standard(int n);
  static SymplecticSpace minus_plus(int n_left, int n_right);

  Kind kind() const { return kind_; }
  int half_dim() const { return n_left_ + n_right_; }
  int dim() const { return 2 * half_dim(); }
  int n_left() const { return n_left_; }
  int n_right() const { return n_right_; }

  const Mat& J() const { return J_; }
  // Orthogonal T with T^T J_std T = J, sending space coordinates to (P, X) Darboux coordinates.
  const Mat& to_canonical() const { return T_; }

  double omega(const Vec& u, const Vec& v) const { return u.dot(J_ * v); }

  bool operator==(const SymplecticSpace& o) const {
    return kind_ == o.kind_ && n_left_ == o.n_left_ && n_right_ == o.n_right_;
  }
  bool operator!=(const SymplecticSpace& o) const { return !(*this == o); }

 private:
  SymplecticSpace(Kind k, int nl, int nr);
  Kind kind_;
  int n_left_;
  int n_right_;
  Mat J_;
  Mat T_;
};

class LagrangianFrame {
 public:
  LagrangianFrame(SymplecticSpace space, Mat orthonormal_frame);

  const SymplecticSpace& space() const { return space_; }
  const Mat& frame() const { return frame_; }
  int half_dim() const { return space_.half_dim(); }

 private:
  SymplecticSpace space_;
  Mat frame_;
};

struct SymplecticMatrix {
  SymplecticSpace space;
  Mat entries;
};

struct InertiaTriple {
  int n_plus = 0;
  int n_zero = 0;
  int n_minus = 0;
  int dim() const { return n_plus + n_zero + n_minus; }
  int signature() const { return n_plus - n_minus; }
  bool operator==(const InertiaTriple&) const = default;
};

// Orthonormal basis for the column span (rank decided relative to the largest singular value).
Mat orthonormal_basis(const Mat& columns, double tol = kDefaultTol);
// Orthonormal basis of the null space of A.
Mat null_space(const Mat& A, double tol = kDefaultTol);

LagrangianFrame lagrangian_from_columns(const SymplecticSpace& space, const Mat& columns,
                                        double tol = kDefaultTol);

int intersection_dim(const LagrangianFrame& A, const LagrangianFrame& B, double tol = kDefaultTol);
Mat intersection_basis(const LagrangianFrame& A, const LagrangianFrame& B, double tol = kDefaultTol);

LagrangianFrame graph_lagrangian(const SymplecticMatrix& M, double tol = 1e-8);
double symplectic_residual(const SymplecticMatrix& M);
double symplectic_residual(const Mat& M, const Mat& J);

LagrangianFrame transform(const SymplecticMatrix& M, const LagrangianFrame& L);
LagrangianFrame direct_sum(const LagrangianFrame& left, const LagrangianFrame& right);

LagrangianFrame dirichlet(const SymplecticSpace& space);
LagrangianFrame neumann(const SymplecticSpace& space);

InertiaTriple inertia(const Mat& symmetric, double rel_tol = 1e-9, double abs_floor = 0.0);

}  // namespace symind

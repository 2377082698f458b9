#pragma once

#include <functional>
#include <string>
#include <vector>

#include "symind/symplectic.hpp"

namespace symind {

// Matrix-valued coefficient t ↦ C(t).
class MatrixFunction {
 public:
  MatrixFunction() = default;
  MatrixFunction(int n, std::function<Mat(double)> f, std::string description = "")
      : n_(n), f_(std::move(f)), description_(std::move(description)) {}

  static MatrixFunction constant(const Mat& value);
  static MatrixFunction scalar(std::function<double(double)> f, std::string description = "");
  // Σ_k coeffs[k] t^k
  static MatrixFunction polynomial(const std::vector<Mat>& coeffs);
  // natural cubic spline through (t_i, values_i), entrywise
  static MatrixFunction spline(const std::vector<double>& t, const std::vector<Mat>& values);

  Mat operator()(double t) const { return f_(t); }
  int dim() const { return n_; }
  const std::string& description() const { return description_; }
  explicit operator bool() const { return static_cast<bool>(f_); }

 private:
  int n_ = 0;
  std::function<Mat(double)> f_;
  std::string description_;
};

struct GridCoefficients {
  int n = 1;
  MatrixFunction P, Q, R;
  double t_min = 0.0;
  double t_max = 0.0;
};

// CSV columns: t, P_11..P_nn, Q_11..Q_nn, R_11..R_nn (row-major), one header row.
GridCoefficients read_coefficient_csv(const std::string& path);

}  // namespace symind

#include "symind/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace symind {

MatrixFunction MatrixFunction::constant(const Mat& value) {
  std::ostringstream os;
  os << "constant " << value.rows() << "x" << value.cols();
  return MatrixFunction(static_cast<int>(value.rows()), [value](double) { return value; }, os.str());
}

MatrixFunction MatrixFunction::scalar(std::function<double(double)> f, std::string description) {
  return MatrixFunction(1, [f](double t) { return Mat::Constant(1, 1, f(t)); }, std::move(description));
}

MatrixFunction MatrixFunction::polynomial(const std::vector<Mat>& coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::ConfigInvalid, "empty polynomial");
  int n = static_cast<int>(coeffs.front().rows());
  return MatrixFunction(
      n,
      [coeffs](double t) {
        Mat acc = coeffs.back();
        for (int k = static_cast<int>(coeffs.size()) - 2; k >= 0; --k) acc = acc * t + coeffs[k];
        return acc;
      },
      "polynomial of degree " + std::to_string(coeffs.size() - 1));
}

namespace {

struct Spline {
  std::vector<double> t;
  std::vector<Mat> y, m;  // values and second derivatives

  Mat eval(double x) const {
    const std::size_t n = t.size();
    if (x <= t.front()) x = t.front();
    if (x >= t.back()) x = t.back();
    std::size_t i = std::upper_bound(t.begin(), t.end(), x) - t.begin();
    i = std::clamp<std::size_t>(i, 1, n - 1);
    double h = t[i] - t[i - 1];
    double A = (t[i] - x) / h, B = (x - t[i - 1]) / h;
    return A * y[i - 1] + B * y[i] + ((A * A * A - A) * m[i - 1] + (B * B * B - B) * m[i]) * (h * h / 6.0);
  }
};

}  // namespace

MatrixFunction MatrixFunction::spline(const std::vector<double>& t, const std::vector<Mat>& values) {
  const std::size_t n = t.size();
  if (n < 2 || values.size() != n) throw Error(ErrorCode::ConfigInvalid, "spline needs at least two matching samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(t[i] > t[i - 1])) throw Error(ErrorCode::ConfigInvalid, "spline abscissae must increase");
  auto s = std::make_shared<Spline>();
  s->t = t;
  s->y = values;
  Mat zero = Mat::Zero(values[0].rows(), values[0].cols());
  s->m.assign(n, zero);
  // tridiagonal solve for natural boundary conditions
  std::vector<double> c(n, 0.0);
  std::vector<Mat> d(n, zero);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double h0 = t[i] - t[i - 1], h1 = t[i + 1] - t[i];
    double diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
    Mat rhs = 6.0 * ((values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0) - h0 * d[i - 1];
    c[i] = h1 / diag;
    d[i] = rhs / diag;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    s->m[i] = d[i] - c[i] * s->m[i + 1];
    if (i == 1) break;
  }
  return MatrixFunction(static_cast<int>(values[0].rows()), [s](double x) { return s->eval(x); }, "cubic spline");
}

GridCoefficients read_coefficient_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open coefficient file " + path);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw Error(ErrorCode::ConfigInvalid, "coefficient file needs at least two rows");
  std::size_t cols = rows[0].size();
  int n = static_cast<int>(std::lround(std::sqrt((cols - 1) / 3.0)));
  if (n < 1 || static_cast<std::size_t>(3 * n * n + 1) != cols)
    throw Error(ErrorCode::ConfigInvalid, "coefficient file must have 1 + 3n² columns");
  std::vector<double> t;
  std::vector<Mat> P, Q, R;
  for (const auto& r : rows) {
    if (r.size() != cols) throw Error(ErrorCode::ConfigInvalid, "ragged coefficient file");
    t.push_back(r[0]);
    Mat p(n, n), q(n, n), rr(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        p(i, j) = r[1 + i * n + j];
        q(i, j) = r[1 + n * n + i * n + j];
        rr(i, j) = r[1 + 2 * n * n + i * n + j];
      }
    P.push_back(p);
    Q.push_back(q);
    R.push_back(rr);
  }
  return GridCoefficients{n, MatrixFunction::spline(t, P), MatrixFunction::spline(t, Q), MatrixFunction::spline(t, R),
                          t.front(), t.back()};
}

}  // namespace symind

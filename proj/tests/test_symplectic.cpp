#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symind/symplectic.hpp"
#include "test_support.hpp"

using namespace symind;

namespace {

Mat cols(std::initializer_list<std::initializer_list<double>> columns) {
  const int k = static_cast<int>(columns.size());
  const int m = static_cast<int>(columns.begin()->size());
  Mat A(m, k);
  int j = 0;
  for (auto c : columns) {
    int i = 0;
    for (double v : c) A(i++, j) = v;
    ++j;
  }
  return A;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::ConfigInvalid;
}

}  // namespace

TEST_CASE("frames from columns") {
  auto R2 = SymplecticSpace::standard(1);
  auto d = lagrangian_from_columns(R2, cols({{1, 0}}));
  CHECK(intersection_dim(d, dirichlet(R2)) == 1);
  auto diag = lagrangian_from_columns(R2, cols({{1, 1}}));
  CHECK(std::abs(std::abs(diag.frame()(0, 0)) - std::sqrt(0.5)) < 1e-12);
  CHECK(std::abs(diag.frame()(0, 0) - diag.frame()(1, 0)) < 1e-12);

  auto R4 = SymplecticSpace::standard(2);
  auto D2 = lagrangian_from_columns(R4, cols({{1, 0, 0, 0}, {0, 1, 0, 0}}));
  CHECK(intersection_dim(D2, dirichlet(R4)) == 2);
  // Ω((1,0,1,0),(0,1,0,0)) = 0, so this pair is a Lagrangian plane
  CHECK(lagrangian_from_columns(R4, cols({{1, 0, 1, 0}, {0, 1, 0, 0}})).half_dim() == 2);
  CHECK(code_of([&] { lagrangian_from_columns(R4, cols({{1, 0, 0, 0}, {0, 0, 1, 0}})); }) ==
        ErrorCode::NotIsotropic);
  CHECK(code_of([&] { lagrangian_from_columns(R4, cols({{1, 0, 0, 0}})); }) == ErrorCode::RankDeficient);
  CHECK(code_of([&] { lagrangian_from_columns(R4, cols({{1, 0, 0, 0}, {2, 0, 0, 0}})); }) ==
        ErrorCode::RankDeficient);
}

TEST_CASE("intersection dimensions") {
  auto R2 = SymplecticSpace::standard(1);
  CHECK(intersection_dim(dirichlet(R2), neumann(R2)) == 0);
  CHECK(intersection_dim(dirichlet(R2), dirichlet(R2)) == 1);
  auto R4 = SymplecticSpace::standard(2);
  auto B = lagrangian_from_columns(R4, cols({{1, 0, 0, 0}, {0, 0, 0, 1}}));
  CHECK(intersection_dim(dirichlet(R4), B) == 1);
  CHECK(code_of([&] { intersection_dim(dirichlet(R2), dirichlet(R4)); }) == ErrorCode::SpaceMismatch);
}

TEST_CASE("graphs of symplectic maps") {
  auto R2 = SymplecticSpace::standard(1);
  auto G = graph_lagrangian({R2, Mat::Identity(2, 2)});
  Mat diag(4, 2);
  diag << Mat::Identity(2, 2), Mat::Identity(2, 2);
  CHECK(oracle::intersection_dim(G.frame(), diag) == 2);

  Mat rot(2, 2);
  rot << 0, -1, 1, 0;
  auto Gr = graph_lagrangian({R2, rot});
  Mat expect(4, 2);
  expect << 1, 0, 0, 1, 0, -1, 1, 0;
  CHECK(oracle::intersection_dim(Gr.frame(), expect) == 2);
  Mat Jb = Gr.space().J();
  CHECK((Gr.frame().transpose() * Jb * Gr.frame()).cwiseAbs().maxCoeff() < 1e-12);

  Mat bad = Mat::Identity(2, 2);
  bad(0, 0) = 1.001;
  CHECK(code_of([&] { graph_lagrangian({R2, bad}, 1e-8); }) == ErrorCode::NotSymplectic);
}

TEST_CASE("symplectic residual") {
  auto R2 = SymplecticSpace::standard(1);
  CHECK(symplectic_residual(SymplecticMatrix{R2, Mat::Identity(2, 2)}) == 0.0);
  Mat s(2, 2);
  s << 2, 0, 0, 0.5;
  CHECK(symplectic_residual(SymplecticMatrix{R2, s}) == 0.0);
  CHECK(symplectic_residual(SymplecticMatrix{R2, 2.0 * Mat::Identity(2, 2)}) == doctest::Approx(3.0));
}

TEST_CASE("standard form matches the fixed convention") {
  for (int n = 1; n <= 3; ++n) CHECK((standard_J(n) - oracle::omega_matrix(n)).norm() == 0.0);
}

TEST_CASE("inertia counts") {
  Mat A = Vec::LinSpaced(5, -2, 2).asDiagonal();
  CHECK(inertia(A) == InertiaTriple{2, 1, 2});
}

TEST_CASE("property: random symplectic images stay Lagrangian") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + trial % 3;
    auto V = SymplecticSpace::standard(n);
    Mat M = oracle::random_symplectic(n, rng);
    CHECK(symplectic_residual(M, oracle::omega_matrix(n)) < 1e-9 * std::max(1.0, M.squaredNorm()));
    auto L = lagrangian_from_columns(V, oracle::random_lagrangian_columns(n, rng));
    auto ML = transform({V, M}, L);
    CHECK((ML.frame().transpose() * V.J() * ML.frame()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(oracle::intersection_dim(ML.frame(), M * L.frame()) == n);
  }
}

TEST_CASE("property: intersection dimension is symmetric and basis independent") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + trial % 3;
    auto V = SymplecticSpace::standard(n);
    Mat a = oracle::random_lagrangian_columns(n, rng), b = oracle::random_lagrangian_columns(n, rng);
    auto A = lagrangian_from_columns(V, a), B = lagrangian_from_columns(V, b);
    int d = intersection_dim(A, B);
    CHECK(d == intersection_dim(B, A));
    CHECK(d == oracle::intersection_dim(a, b));
    Mat O = oracle::random_unitary(n, rng).real();
    Eigen::HouseholderQR<Mat> qr(O);
    Mat Q = qr.householderQ() * Mat::Identity(n, n);
    CHECK(intersection_dim(lagrangian_from_columns(V, a * Q), B) == d);
  }
}

TEST_CASE("property: graph intersection equals fixed space dimension") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + trial % 3;
    auto V = SymplecticSpace::standard(n);
    Mat M;
    int expected;
    if (trial % 2 == 0) {
      M = oracle::random_symplectic(n, rng);
      expected = 2 * n - oracle::rank(M - Mat::Identity(2 * n, 2 * n), 1e-9);
    } else {
      // conjugated shear with a rank-deficient symmetric block: fixed space has dimension 2n - rank S
      int r = trial % (n + 1);
      Mat G = Mat::Random(n, r);
      Mat S = G * G.transpose();
      Mat shear = Mat::Identity(2 * n, 2 * n);
      shear.bottomLeftCorner(n, n) = S;
      Mat T = oracle::random_symplectic(n, rng, 0.5);
      M = T * shear * T.inverse();
      expected = 2 * n - oracle::rank(S, 1e-9);
    }
    auto G = graph_lagrangian({V, M}, 1e-6);
    auto Id = graph_lagrangian({V, Mat::Identity(2 * n, 2 * n)});
    CHECK(intersection_dim(G, Id, 1e-7) == expected);
  }
}

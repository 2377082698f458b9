#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "symind/bessel.hpp"
#include "symind/catalog.hpp"
#include "symind/spectral_flow.hpp"
#include "test_support.hpp"

using namespace symind;
using oracle::pi;

namespace {

Vec data(double p, double x) {
  Vec v(2);
  v << p, x;
  return v;
}

std::vector<double> times(const std::vector<ConjugatePoint>& pts) {
  std::vector<double> t;
  for (const auto& p : pts) t.push_back(p.t);
  return t;
}

std::vector<double> dirichlet_points(const SLProblem& p) {
  auto R2 = SymplecticSpace::standard(1);
  return times(conjugate_points(p, dirichlet(R2), dirichlet(R2), p.a, p.b).points);
}

}  // namespace

TEST_CASE("Hamiltonian reduction") {
  auto hf = to_hamiltonian(harmonic_problem(3.0, 0, 1));
  Mat H = hf.H(0.3);
  CHECK((H - H.transpose()).norm() == 0.0);
  // ±diag(1, -R) depending on the orientation of J
  CHECK(std::abs(H(0, 0)) == doctest::Approx(1.0));
  CHECK(H(1, 1) == doctest::Approx(9.0 * H(0, 0)));
  CHECK(H(0, 1) == 0.0);
  auto bad = make_problem(0, 1, MatrixFunction::constant(Mat::Zero(1, 1)), MatrixFunction::constant(Mat::Zero(1, 1)),
                          MatrixFunction::constant(Mat::Zero(1, 1)));
  CHECK_THROWS_AS(to_hamiltonian(bad).H(0.5), Error);
}

TEST_CASE("fundamental solutions against closed forms") {
  SUBCASE("free particle") {
    auto fs = fundamental_solution(free_problem(0, 1), 0, 0, 1);
    for (double t : {0.0, 0.25, 0.6, 1.0}) {
      Mat g = fs.at(t);
      Mat e(2, 2);
      e << 1, 0, t, 1;
      CHECK((g - e).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("harmonic") {
    double w = 2.5;
    auto fs = fundamental_solution(harmonic_problem(w, 0, 2), 0, 0, 2);
    for (double t : {0.1, 0.7, 1.3, 2.0}) {
      Mat g = fs.at(t);
      // columns: x = sin(wt)/w and x = cos(wt)
      CHECK(std::abs(g(1, 0) - std::sin(w * t) / w) < 1e-9);
      CHECK(std::abs(g(0, 0) - std::cos(w * t)) < 1e-9);
      CHECK(std::abs(g(1, 1) - std::cos(w * t)) < 1e-9);
      CHECK(std::abs(g(0, 1) + w * std::sin(w * t)) < 1e-9);
    }
    auto q = fundamental_solution(harmonic_problem(1.0, 0, pi / 2), 0, 0, pi / 2);
    Vec out = q.at(pi / 2) * data(1, 0);
    CHECK((out - data(0, 1)).norm() < 1e-9);
  }
  SUBCASE("Bessel powers") {
    // q = 0: solutions t and 1; q = 2: t² and 1/t
    auto f0 = fundamental_solution(bessel_problem(0.0), 1.0, 0.5, 1.0);
    for (double t : {0.5, 0.75}) {
      Mat e(2, 2);
      e << 1, 0, t - 1, 1;
      CHECK((f0.at(t) - e).cwiseAbs().maxCoeff() < 1e-8);
    }
    auto f2 = fundamental_solution(bessel_problem(2.0), 1.0, 0.5, 1.0);
    for (double t : {0.5, 0.8}) {
      Mat e(2, 2);
      for (int j = 0; j < 2; ++j) {
        double a = j == 0 ? 1 : 0, b = j == 0 ? 0 : 1;
        double c1 = (a + b) / 3, c2 = (2 * b - a) / 3;
        e(1, j) = c1 * t * t + c2 / t;
        e(0, j) = 2 * c1 * t - c2 / (t * t);
      }
      CHECK((f2.at(t) - e).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("property: drift and Wronskian along integrations") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> U(-5, 5);
  for (int trial = 0; trial < 8; ++trial) {
    auto p = mathieu_problem(U(rng) + 5, U(rng));
    auto fs = fundamental_solution(p, p.a, p.a, p.b);
    CHECK(fs.max_drift() < 1e-8);
    for (const auto& node : fs.nodes()) {
      CHECK(symplectic_residual(node.y, oracle::omega_matrix(1)) < 1e-8);
      double w = boundary_bracket(node.y.col(0), node.y.col(1));
      CHECK(std::abs(w - 1.0) < 1e-9);
    }
  }
  // a coupled two-dimensional system
  Mat Q(2, 2);
  Q << 0.0, 0.4, -0.2, 0.1;
  auto p2 = make_problem(0, 3, MatrixFunction(2, [](double t) { return Mat(Mat::Identity(2, 2) * (1.0 + 0.2 * t)); }),
                         MatrixFunction::constant(Q),
                         MatrixFunction(2, [](double t) {
                           Mat R(2, 2);
                           R << -4 * std::cos(t), 0.5, 0.5, -2.0;
                           return R;
                         }));
  auto fs2 = fundamental_solution(p2, 0, 0, 3);
  CHECK(fs2.max_drift() < 1e-8);
  for (const auto& node : fs2.nodes()) CHECK(symplectic_residual(node.y, oracle::omega_matrix(2)) < 1e-8);
}

TEST_CASE("boundary bracket") {
  Vec f = data(0.3, -1.2);
  CHECK(boundary_bracket(f, f) == 0.0);
  Vec g = data(2.0, 0.5);
  CHECK(boundary_bracket(f, g) == doctest::Approx(-boundary_bracket(g, f)));
  for (double t : {0.0, 0.4, 2.0}) {
    // cos has data (-sin, cos), sin has data (cos, sin)
    CHECK(boundary_bracket(data(-std::sin(t), std::cos(t)), data(std::cos(t), std::sin(t))) == doctest::Approx(-1.0));
  }
  for (double r : {0.5, 0.2, 0.0, -0.7}) {
    for (double t : {1e-6, 1e-3, 0.5}) {
      auto y = singular_solutions(r, t);
      CHECK(boundary_bracket(data(y.dy1, y.y1), data(y.dy2, y.y2)) == doctest::Approx(-1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("conjugate points") {
  auto a = dirichlet_points(harmonic_problem(2.0, 0, pi));
  REQUIRE(a.size() == 1);
  CHECK(a[0] == doctest::Approx(pi / 2).epsilon(1e-8));
  auto b = dirichlet_points(harmonic_problem(10.0, 0, 1));
  REQUIRE(b.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(b[k] == doctest::Approx((k + 1) * pi / 10).epsilon(1e-8));
  CHECK(dirichlet_points(free_problem(0, 1)).empty());
}

TEST_CASE("property: conjugate points are positive and monotone in the interval") {
  auto R2 = SymplecticSpace::standard(1);
  int last = 0;
  for (double b : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    auto p = mathieu_problem(9.0, 1.5);
    p.b = b;
    auto cr = conjugate_points(p, dirichlet(R2), dirichlet(R2), 0, b);
    CHECK(cr.all_positive);
    int count = static_cast<int>(cr.points.size());
    CHECK(count >= last);
    last = count;
  }
}

TEST_CASE("Morse index with Dirichlet conditions") {
  CHECK(morse_index_dirichlet(harmonic_problem(10.0, 0, 1), default_delta_schedule()).verdict.value == 3);
  auto b0 = morse_index_dirichlet(bessel_problem(0.0), default_delta_schedule());
  REQUIRE(b0.verdict.is_integer());
  CHECK(b0.verdict.value == 0);
  auto osc = morse_index_dirichlet(bessel_problem(-0.25 - pi * pi), default_delta_schedule());
  CHECK(osc.verdict.is_infinite());
  auto zeros = oracle::oscillatory_bessel_zeros(pi, 1e-7);
  REQUIRE(osc.crossings.size() == zeros.size() - 1);  // t = 1 is the boundary itself
  for (std::size_t k = 0; k < osc.crossings.size(); ++k)
    CHECK(osc.crossings[k].t == doctest::Approx(zeros[k]).epsilon(1e-6));
  CHECK_THROWS_AS(morse_index_dirichlet(bessel_problem(0.0), {1e-2, 1e-3, 1e-4}), Error);
}

TEST_CASE("regular Morse index equals the discrete count") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> U(0, 1);
  for (int trial = 0; trial < 5; ++trial) {
    auto p = mathieu_problem(20 * U(rng), 6 * U(rng) - 3);
    long m = morse_index_dirichlet(p, default_delta_schedule()).verdict.value;
    for (int N : {512, 1024}) {
      auto op = discretize(p, BoundaryCondition::dirichlet(), N);
      CHECK(count_below(op, -kernel_threshold(op)) == m);
    }
  }
}

TEST_CASE("Morse index with general conditions") {
  auto h = harmonic_problem(2.0, 0, pi);
  auto d = morse_index_general(h, BoundaryCondition::dirichlet());
  CHECK(d.verdict.value == 1);
  CHECK(d.diagnostics["triple_index_correction"] == 0);
  auto n = morse_index_general(h, BoundaryCondition::neumann());
  CHECK(n.verdict.value == 2);
  CHECK(n.diagnostics["triple_index_correction"] == 1);
  CHECK(n.diagnostics["discrete_agree"] == true);

  // Bessel q = 0, singular-end line rotated inside the limit-circle trace plane
  auto bq = bessel_problem(0.0);
  auto mp = SymplecticSpace::minus_plus(1, 1);
  auto y = singular_solutions(0.5, 1.0);
  Mat K(4, 2);
  K << 1, 0, 0, -1, y.dy1, y.dy2, y.y1, y.y2;
  auto kernel = lagrangian_from_columns(mp, K);
  Mat F(4, 2);
  F << 1, 0, -0.5, 0, 0, 1, 0, 0;
  auto friedrichs = lagrangian_from_columns(mp, F);
  for (double theta : {0.3, 1.2, 2.5}) {
    Mat L(4, 2);
    L << std::cos(theta), 0, std::sin(theta), 0, 0, 1, 0, 0;
    auto bc = lagrangian_from_columns(mp, L);
    auto rep = morse_index_general(bq, BoundaryCondition::general(bc));
    CHECK(rep.diagnostics["triple_index_correction"] == triple_index(kernel, bc, friedrichs));
  }
}

TEST_CASE("trace map") {
  auto h = harmonic_problem(1.0, 0, 1);
  SolutionData f = [](double t) { return data(std::cos(t), std::sin(t)); };
  SolutionData y1 = [](double) { return data(0, 1); }, y2 = [](double) { return data(1, 0); };
  SolutionData z1 = [](double) { return data(0, 1); }, z2 = [](double) { return data(-1, 0); };
  Vec tr = trace_map(h, f, {y1, y2}, {z1, z2});
  Vec expect(4);
  expect << -1, 0, std::cos(1.0), std::sin(1.0);
  CHECK((tr - expect).norm() < 1e-12);

  auto b0 = bessel_problem(0.0);
  SolutionData s1 = [](double t) {
    auto y = singular_solutions(0.5, t);
    return data(y.dy1, y.y1);
  };
  SolutionData s2 = [](double t) {
    auto y = singular_solutions(0.5, t);
    return data(y.dy2, y.y2);
  };
  Vec tb = trace_map(b0, s1, {s2}, {});
  CHECK(tb(0) == doctest::Approx(1.0));

  auto lp = bessel_problem(2.0);
  CHECK_THROWS_AS(trace_map(lp, s1, {s2}, {}), Error);
  CHECK(trace_map(lp, s1, {}, {z1}).size() == 1);
}

TEST_CASE("kernel function selection") {
  auto b0 = bessel_problem(0.0);
  auto sol = [](double scale, int which) {
    return SolutionData([=](double t) {
      auto y = singular_solutions(0.5, t);
      return Vec(scale * (which == 1 ? data(y.dy1, y.y1) : data(y.dy2, y.y2)));
    });
  };
  auto pick = select_kernel_functions(b0, {sol(1, 1), sol(2, 1), sol(1, 2)}, 2);
  REQUIRE(pick.size() == 2);
  CHECK(pick.back() == 2);
  try {
    select_kernel_functions(b0, {sol(1, 1), sol(2, 1)}, 2);
    FAIL("rank-deficient Gram matrix accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SelectionFailed);
  }
}

TEST_CASE("endpoint classification") {
  auto h = harmonic_problem(2.0, 0, 1);
  CHECK(endpoint_classify(h, Endpoint::Left) == EndpointClass::Regular);
  CHECK(endpoint_classify(h, Endpoint::Right) == EndpointClass::Regular);
  CHECK(endpoint_classify(bessel_problem(0.0), Endpoint::Left) == EndpointClass::LimitCircle);
  CHECK(endpoint_classify(bessel_problem(2.0), Endpoint::Left) == EndpointClass::LimitPoint);
  // same potentials without the analytic shortcut
  auto numeric = [](double q) {
    auto p = make_problem(0, 1, MatrixFunction::constant(Mat::Identity(1, 1)), MatrixFunction::constant(Mat::Zero(1, 1)),
                          MatrixFunction::scalar([q](double t) { return q / (t * t); }));
    p.left = EndpointKind::Unknown;
    return endpoint_classify(p, Endpoint::Left);
  };
  CHECK(numeric(2.0) == EndpointClass::LimitPoint);
  CHECK(numeric(0.3) == EndpointClass::LimitCircle);
}

TEST_CASE("grid-sampled coefficients") {
  std::string path = "sl_grid_coefficients.csv";
  {
    std::ofstream os(path);
    os << "t,P,Q,R\n";
    for (int i = 0; i <= 200; ++i) os << i / 200.0 << ",1,0,-100\n";
  }
  auto g = read_coefficient_csv(path);
  std::remove(path.c_str());
  auto p = make_problem(g.t_min, g.t_max, g.P, g.Q, g.R);
  auto pts = dirichlet_points(p);
  REQUIRE(pts.size() == 3);
  CHECK(pts[2] == doctest::Approx(3 * pi / 10).epsilon(1e-7));
}

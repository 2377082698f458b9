#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symind/maslov.hpp"
#include "test_support.hpp"

using namespace symind;
using oracle::pi;

namespace {

const SymplecticSpace R2 = SymplecticSpace::standard(1);

LagrangianFrame line(double theta) {
  Mat c(2, 1);
  c << std::cos(theta), std::sin(theta);
  return lagrangian_from_columns(R2, c);
}

LagrangianPath line_path(std::function<double(double)> theta, double a, double b) {
  LagrangianPath p{R2, [theta](double t) { return line(theta(t)); }, a, b};
  return p;
}

LagrangianPath unitary_path(const SymplecticSpace& V, const oracle::UnitaryPath& u, double a = 0.0, double b = 1.0) {
  return LagrangianPath{V, [V, u](double s) { return lagrangian_from_columns(V, oracle::frame_of_unitary(u.at(s))); },
                        a, b};
}

}  // namespace

TEST_CASE("crossing form of the rotating line") {
  auto ref = line(0.0);
  CHECK(crossing_form(line_path([](double t) { return t; }, -1, 1), ref, 0.0, 1e-5) == InertiaTriple{1, 0, 0});
  CHECK(crossing_form(line_path([](double t) { return -t; }, -1, 1), ref, 0.0, 1e-5) == InertiaTriple{0, 0, 1});
  CHECK(crossing_form(constant_path(ref, -1, 1), ref, 0.0, 1e-5) == InertiaTriple{0, 1, 0});
  CHECK_THROWS_AS(crossing_form(line_path([](double t) { return t; }, -1, 1), ref, 0.5, 1e-5), Error);
}

TEST_CASE("crossing form is independent of the complement") {
  std::mt19937 rng(3);
  auto path = line_path([](double t) { return 0.7 * t + 0.2 * t * t; }, -1, 1);
  auto ref = line(0.0);
  for (int k = 0; k < 10; ++k) {
    Mat W(2, 1);
    W << std::normal_distribution<double>()(rng), 1.0;
    Mat Q = q_form(path, 0.0, 1e-5, W, -1, 1);
    CHECK(Q(0, 0) == doctest::Approx(0.7).epsilon(1e-5));
  }
}

TEST_CASE("Maslov index of the rotating line") {
  auto ref = constant_path(line(0.0), -pi, 2 * pi);
  auto rot = line_path([](double t) { return t; }, -pi, 2 * pi);
  auto r1 = maslov_clm(ref, rot, -pi / 4, pi / 4);
  CHECK(r1.value == 1);
  REQUIRE(r1.crossings.size() == 1);
  CHECK(std::abs(r1.crossings[0].t) < 1e-8);
  CHECK(maslov_clm(ref, rot, 0.0, pi).value == 1);
  CHECK(maslov_clm(ref, constant_path(line(1.0), -pi, 2 * pi), 0.0, 1.0).value == 0);
}

TEST_CASE("property: rotating lines agree with the winding oracle") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    double c0 = 3 * U(rng), c1 = 6 * U(rng), c2 = 3 * U(rng), theta0 = pi * U(rng);
    auto theta = [=](double t) { return c0 + c1 * t + c2 * std::sin(3 * t); };
    auto r = maslov_clm(constant_path(line(theta0), 0, 1), line_path(theta, 0, 1), 0, 1);
    CHECK(r.value == oracle::rotating_line_maslov(theta, theta0, 0, 1));
  }
}

TEST_CASE("triple index examples") {
  auto x = line(0.0), y = line(pi / 2), d = line(pi / 4), a = line(-pi / 4);
  CHECK(triple_index(x, y, x) == 1);
  CHECK(triple_index(x, x, x) == 0);
  CHECK(triple_index(x, y, d) == 1);
  CHECK(triple_index(x, y, a) == 0);
  auto R4 = SymplecticSpace::standard(2);
  CHECK(triple_index(dirichlet(R4), neumann(R4), dirichlet(R4)) == 2);
}

TEST_CASE("Hoermander index examples") {
  auto x = line(0.0), y = line(pi / 2), d = line(pi / 4), a = line(-pi / 4);
  CHECK(hormander_index(x, d, y, y) == 0);
  int s = hormander_index(x, d, y, a);
  CHECK(s == triple_index(x, d, a) - triple_index(x, d, y));
  // the same value from the rotating path 0 → π/4
  auto lam = line_path([](double t) { return t; }, 0, pi / 4);
  int via_path = maslov_clm(constant_path(a, 0, pi / 4), lam, 0, pi / 4).value -
                 maslov_clm(constant_path(y, 0, pi / 4), lam, 0, pi / 4).value;
  CHECK(s == via_path);
}

TEST_CASE("Souriau spectrum sees intersections") {
  auto R4 = SymplecticSpace::standard(2);
  Mat b(4, 2);
  b << 1, 0, 0, 0, 0, 0, 0, 1;
  auto B = lagrangian_from_columns(R4, b);
  auto ev = souriau_spectrum(dirichlet(R4), B);
  int ones = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i) - 1.0) < 1e-9) ++ones;
  CHECK(ones == 1);
}

TEST_CASE("property: triple index bound and cyclic identity") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 150; ++trial) {
    int n = 1 + trial % 3;
    auto V = SymplecticSpace::standard(n);
    auto A = lagrangian_from_columns(V, oracle::random_lagrangian_columns(n, rng));
    auto B = lagrangian_from_columns(V, oracle::random_lagrangian_columns(n, rng));
    auto C = lagrangian_from_columns(V, oracle::random_lagrangian_columns(n, rng));
    int abc = triple_index(A, B, C);
    int dab = oracle::intersection_dim(A.frame(), B.frame());
    int dac = oracle::intersection_dim(A.frame(), C.frame());
    CHECK(abc >= 0);
    CHECK(abc <= n);
    CHECK(abc - triple_index(B, C, A) == dac - dab);
    CHECK(triple_index(A, B, A) == n - dab);
  }
}

TEST_CASE("property: additivity and symplectic invariance on random paths") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 12; ++trial) {
    int n = 1 + trial % 3;
    auto V = SymplecticSpace::standard(n);
    auto path = oracle::UnitaryPath::make(oracle::random_unitary(n, rng), oracle::random_unitary(n, rng),
                                          {trial % 2, 0, -1});
    auto lam = unitary_path(V, path);
    auto mu = lagrangian_from_columns(V, oracle::frame_of_unitary(oracle::random_unitary(n, rng)));
    auto ref = constant_path(mu, 0, 1);
    int whole = maslov_clm(ref, lam, 0, 1).value;
    double c = 0.37 + 0.01 * trial;
    CHECK(whole == maslov_clm(ref, lam, 0, c).value + maslov_clm(ref, lam, c, 1).value);

    Mat M = oracle::random_symplectic(n, rng, 0.5);
    auto Mlam = LagrangianPath{V, [=](double s) { return transform({V, M}, lam(s)); }, 0, 1};
    CHECK(whole == maslov_clm(constant_path(transform({V, M}, mu), 0, 1), Mlam, 0, 1).value);
  }
}

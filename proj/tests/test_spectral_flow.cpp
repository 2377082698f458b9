#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symind/bessel.hpp"
#include "symind/catalog.hpp"
#include "symind/spectral_flow.hpp"
#include "test_support.hpp"

using namespace symind;
using oracle::pi;

namespace {

SLProblem constant_r(double r, double b = 1.0) {
  return make_problem(0, b, MatrixFunction::constant(Mat::Identity(1, 1)), MatrixFunction::constant(Mat::Zero(1, 1)),
                      MatrixFunction::constant(Mat::Constant(1, 1, r)));
}

BoundaryCondition left_line(double theta) {
  return BoundaryCondition::general(direct_sum(rotated_line(theta), dirichlet(SymplecticSpace::standard(1))));
}

BoundaryCondition both_lines(double theta) { return BoundaryCondition::general(direct_sum(rotated_line(theta), rotated_line(theta))); }

}  // namespace

TEST_CASE("discretization of the free problem") {
  auto p = free_problem(0, 1);
  auto op = discretize(p, BoundaryCondition::dirichlet(), 64);
  double h = 1.0 / 64;
  CHECK(op.size() == 63);
  for (int i = 0; i < op.band_size(); ++i) {
    CHECK(op.band(i, 0) == doctest::Approx(2 / (h * h)));
    if (i + 1 < op.band_size()) CHECK(op.band(i, 1) == doctest::Approx(-1 / (h * h)));
  }
  Mat A = op.dense();
  CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * A.cwiseAbs().maxCoeff());

  // second-order convergence of the lowest eigenvalues
  Vec e64 = eigenvalues(op);
  Vec e128 = eigenvalues(discretize(p, BoundaryCondition::dirichlet(), 128));
  for (int k = 0; k < 3; ++k) {
    double exact = std::pow((k + 1) * pi, 2);
    double ratio = (e64(k) - exact) / (e128(k) - exact);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.02));
  }
  CHECK_THROWS_AS(discretize(p, BoundaryCondition::dirichlet(), 8), Error);
}

TEST_CASE("negative counts of the harmonic problem") {
  for (double w : {2.0, 5.0, 10.0}) {
    auto op = discretize(harmonic_problem(w, 0, 1), BoundaryCondition::dirichlet(), 512);
    CHECK(count_below(op, -kernel_threshold(op)) == oracle::harmonic_dirichlet_count(w, 1));
    Vec ev = eigenvalues(op);
    int neg = 0;
    for (int i = 0; i < ev.size(); ++i) neg += ev(i) < 0;
    CHECK(neg == oracle::harmonic_dirichlet_count(w, 1));
  }
}

TEST_CASE("Neumann conditions") {
  auto h = harmonic_problem(2.0, 0, pi);
  auto built_in = discretize(h, BoundaryCondition::neumann(), 1024);
  auto V = SymplecticSpace::standard(1);
  auto general = discretize(h, BoundaryCondition::general(direct_sum(neumann(V), neumann(V))), 1024);
  Vec a = lowest_eigenvalues(built_in, 4), b = lowest_eigenvalues(general, 4);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(count_below(built_in, -kernel_threshold(built_in)) == oracle::harmonic_neumann_count(2.0, pi));

  // against the ghost-point stencil
  for (int N : {64, 128, 256}) {
    Vec g = oracle::ghost_point_neumann(-4.0, pi, N);
    Vec lam = lowest_eigenvalues(discretize(h, BoundaryCondition::neumann(), N), 3);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(lam(k) - g(k)) < 1.0 / N);
    CHECK(lam(0) == doctest::Approx(-4.0).epsilon(1e-9));
  }
}

TEST_CASE("counts agree with dense spectra for coupled conditions") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    auto mp = SymplecticSpace::minus_plus(1, 1);
    Mat C = oracle::frame_of_unitary(oracle::random_unitary(2, rng));
    // reorder (p_a, p_b, x_a, x_b) into (p_a, x_a, p_b, x_b); sign flip on p_a for the -Ω summand
    Mat F(4, 2);
    F.row(0) = -C.row(0);
    F.row(1) = C.row(2);
    F.row(2) = C.row(1);
    F.row(3) = C.row(3);
    auto bc = BoundaryCondition::general(lagrangian_from_columns(mp, F));
    auto op = discretize(mathieu_problem(3.0, 1.0), bc, 64);
    Mat A = op.dense();
    Eigen::SelfAdjointEigenSolver<Mat> es(A);
    for (double shift : {-50.0, -5.0, 0.3, 10.0}) {
      int dense = 0;
      for (int i = 0; i < A.rows(); ++i) dense += es.eigenvalues()(i) < shift;
      CHECK(count_below(op, shift) == dense);
    }
  }
}

TEST_CASE("spectral flow of simple families") {
  auto p = free_problem(0, 1);
  double l1 = lowest_eigenvalues(discretize(p, BoundaryCondition::dirichlet(), 128), 1)(0);
  // A + sI with one eigenvalue at -1/2 in (-1, 0)
  auto up = [&](double s) { return discretize(constant_r(-l1 - 0.5 + s), BoundaryCondition::dirichlet(), 128); };
  CHECK(spectral_flow(up, 0, 1).flow == 1);
  auto still = [&](double) { return discretize(harmonic_problem(4.0, 0, 1), BoundaryCondition::dirichlet(), 128); };
  CHECK(spectral_flow(still, 0, 1).flow == 0);
  auto down = [](double s) { return discretize(constant_r(-100 * s), BoundaryCondition::dirichlet(), 256); };
  auto r = spectral_flow(down, 0, 1);
  CHECK(r.flow == -3);
  CHECK(r.partition.front() == 0.0);
  CHECK(r.partition.back() == 1.0);
}

TEST_CASE("property: partition independence and additivity") {
  auto fam = [](double s) { return discretize(mathieu_problem(30 * s, 2.0), BoundaryCondition::dirichlet(), 256); };
  int whole = spectral_flow(fam, 0, 1).flow;
  SpectralFlowOptions fine;
  fine.window_gap = 0.25;
  CHECK(spectral_flow(fam, 0, 1, fine).flow == whole);
  CHECK(spectral_flow(fam, 0, 0.4).flow + spectral_flow(fam, 0.4, 1).flow == whole);
  // fixed domain: flow equals the drop of the Morse index
  auto m0 = fam(0), m1 = fam(1);
  CHECK(whole == count_below(m0, -kernel_threshold(m0)) - count_below(m1, -kernel_threshold(m1)));
}

TEST_CASE("property: grid refinement keeps integer outputs") {
  for (auto p : {harmonic_problem(10.0, 0, 1), mathieu_problem(7.3, -1.1), harmonic_problem(2.0, 0, pi)}) {
    for (auto bc : {BoundaryCondition::dirichlet(), BoundaryCondition::neumann()}) {
      auto a = discretize(p, bc, 512), b = discretize(p, bc, 1024);
      CHECK(count_below(a, -kernel_threshold(a)) == count_below(b, -kernel_threshold(b)));
    }
  }
}

TEST_CASE("spectral flow formula") {
  auto fam = [](double s) { return constant_r(-100 * s); };
  auto dir = [](double) { return BoundaryCondition::dirichlet(); };
  for (int N : {512, 1024}) {
    auto rep = verify_sf_formula(fam, dir, 0, 1, N);
    CHECK(rep.sf == -3);
    CHECK(rep.maslov == 3);
    CHECK(rep.agree);
  }
  auto flat = verify_sf_formula([](double) { return constant_r(1.0); }, dir, 0, 1, 256);
  CHECK(flat.sf == 0);
  CHECK(flat.maslov == 0);

  // rotating condition at the left end, passing the kernel trace once
  auto rot = verify_sf_formula([](double) { return free_problem(0, 1); },
                               [](double s) { return left_line(s * (3 * pi / 4 + 0.3)); }, 0, 1, 256);
  CHECK(rot.agree);
  CHECK(std::abs(rot.sf) == 1);
  auto op0 = discretize(free_problem(0, 1), left_line(0), 256);
  auto op1 = discretize(free_problem(0, 1), left_line(3 * pi / 4 + 0.3), 256);
  CHECK(rot.sf == count_below(op0, 0) - count_below(op1, 0));
}

TEST_CASE("eigen trace") {
  auto fam = [](double s) { return discretize(constant_r(-50 * s), BoundaryCondition::dirichlet(), 128); };
  auto tr = eigen_trace(fam, {0.0, 0.5, 1.0}, 3);
  REQUIRE(tr.eigenvalues.size() == 3);
  for (const auto& ev : tr.eigenvalues) {
    REQUIRE(ev.size() == 3);
    CHECK(ev(0) < ev(1));
    CHECK(ev(1) < ev(2));
  }
  CHECK(tr.eigenvalues[2](0) == doctest::Approx(tr.eigenvalues[0](0) - 50).epsilon(1e-9));
}

TEST_CASE("Morse jumps between boundary conditions") {
  auto h = harmonic_problem(2.0, 0, pi);
  auto same = morse_jump_check(h, [](double) { return BoundaryCondition::dirichlet(); }, 256);
  CHECK(same.residual == 0);
  CHECK(same.sf == 0);
  CHECK(same.maslov == 0);
  auto dn = morse_jump_check(h, [](double s) { return both_lines(s * pi / 2); }, 512);
  CHECK(dn.morse0 == 1);
  CHECK(dn.morse1 == 2);
  CHECK(dn.residual == 0);

  std::mt19937 rng(37);
  std::uniform_real_distribution<double> U(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    double a = 10 * U(rng);
    double q = 4 * U(rng) - 2;
    auto p = mathieu_problem(a, q);
    double ta = 2.5 * U(rng) + 0.2;
    double tb = 2.5 * U(rng) + 0.2;
    auto rep = morse_jump_check(
        p,
        [=](double s) {
          return BoundaryCondition::general(direct_sum(rotated_line(s * ta), rotated_line(s * tb)));
        },
        256);
    CHECK(rep.residual == 0);
  }
}

TEST_CASE("ghost eigenvalues of a regular end approaching Dirichlet") {
  // one rotation direction produces an eigenvalue below -M, the other does not
  auto p = free_problem(0, 1);
  auto mp = SymplecticSpace::minus_plus(1, 1);
  auto F = direct_sum(dirichlet(SymplecticSpace::standard(1)), dirichlet(SymplecticSpace::standard(1)));
  int total = 0;
  for (double dir : {1.0, -1.0}) {
    auto op = discretize(p, left_line(dir * 1e-4), 1024);
    int count = count_below(op, -100.0);
    LagrangianPath moving{mp, [dir](double u) { return *left_line(dir * u).frame; }, 0, 1e-4};
    int mu = maslov_clm(constant_path(F, 0, 1e-4), moving, 0, 1e-4).value;
    CHECK(count == mu);
    total += count;
  }
  CHECK(total == 1);
}

TEST_CASE("Rellich scan for the truncated Bessel problem") {
  RellichOptions opt;
  opt.u = {0.05, 0.01, 0.002};
  opt.M = {10.0, 100.0};
  opt.N = 1024;
  double r = 0.5;
  auto rep = rellich_ghosts(0.0, 1e-4, [r](double u) {
    double base = std::atan2(-r, 1.0);
    return rotated_line(base - u * pi / 2);
  }, opt);
  CHECK(rep.maslov_prediction == 1);
  CHECK(rep.count_below_minus_M.back()[0] == 1);
  CHECK(rep.monotone_bottom);
  CHECK_THROWS_AS(rellich_ghosts(0.0, 1e-4, [](double) { return friedrichs_trace_frame(0.5); }, opt), Error);
}

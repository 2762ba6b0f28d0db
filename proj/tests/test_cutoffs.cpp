#include <doctest.h>

#include <cmath>
#include <random>

#include "commsum/cutoffs.hpp"
#include "commsum/functionals.hpp"
#include "oracles/cutoff_oracle.hpp"

using namespace commsum;

TEST_CASE("phi matches its closed form and is a smooth step") {
  const SmoothStep phi = make_phi();
  for (double x = -0.5; x <= 1.5; x += 0.01) CHECK(phi(x) == doctest::Approx(oracle::phi(x)).epsilon(1e-14));
  CHECK(phi(0.0) == 0.0);
  CHECK(phi(1.0) == 1.0);
  CHECK(phi(0.5) == doctest::Approx(0.5));
}

TEST_CASE("phi derivatives against central differences") {
  const SmoothStep phi = make_phi();
  for (double x = 0.02; x < 1.0; x += 0.02) {
    CHECK(phi.d1(x) == doctest::Approx(oracle::phi_d1(x)).epsilon(1e-6).scale(1.0));
    CHECK(phi.d2(x) == doctest::Approx(oracle::phi_d2(x)).epsilon(1e-4).scale(1.0));
  }
  CHECK(phi.d1(-1.0) == 0.0);
  CHECK(phi.d2(2.0) == 0.0);
}

TEST_CASE("psi and C1 against Simpson quadrature") {
  const CutoffPair& pair = CutoffPair::canonical();
  const double slope = oracle::psi_slope(1.0);
  CHECK(pair.psi.slope() == doctest::Approx(slope).epsilon(1e-7));
  CHECK(pair.c1 == doctest::Approx(slope).epsilon(1e-7));
  CHECK(pair.c1 == doctest::Approx(10.1658).epsilon(1e-4));
  for (double x : {0.1, 0.25, 0.5, 0.77, 1.0, 1.5, 4.0}) {
    CHECK(pair.psi(x) == doctest::Approx(oracle::psi(x)).epsilon(1e-8).scale(1.0));
    CHECK(pair.psi.d1(x) == doctest::Approx(oracle::psi_slope(x)).epsilon(1e-8).scale(1.0));
  }
  CHECK(pair.psi(-1.0) == 0.0);
}

TEST_CASE("psi is nondecreasing, convex and below C1 max(x, 0)") {
  const CutoffPair& pair = CutoffPair::canonical();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    CHECK(pair.psi(a) <= pair.psi(b) + 1e-12);
    CHECK(pair.psi(0.5 * (a + b)) <= 0.5 * (pair.psi(a) + pair.psi(b)) + 1e-12);
    CHECK(pair.psi(b) <= pair.c1 * std::max(b, 0.0) + 1e-12);
  }
}

TEST_CASE("C2 from C1") { CHECK(commutator_constant(10.0) == doctest::Approx(40.0 + 52.0 / std::log(2.0))); }

TEST_CASE("g and h vanish inside the unit disc") {
  const CutoffPair& pair = CutoffPair::canonical();
  CHECK(eval_g(pair, 0.0) == 0.0);
  CHECK(eval_h(pair, 0.0) == 0.0);
  CHECK(eval_g(pair, Complex(0.3, 0.4)) == 0.0);
  CHECK(eval_h(pair, Complex(-0.9, 0.1)) == 0.0);
  const Complex z(3.0, -4.0);
  CHECK(eval_h(pair, z) == doctest::Approx(pair.psi(std::log(5.0)) - 3.0));
}

TEST_CASE("laplacian of h is nonnegative on the annulus") {
  const CutoffPair& pair = CutoffPair::canonical();
  const LaplacianScan scan = laplacian_grid_check(pair, 0.5, 10.0, 200);
  CHECK(scan.points > 20000);
  CHECK(scan.min_laplacian >= -1e-6);
  const LaplacianScan flipped =
      laplacian_grid_check([&pair](Complex z) { return -eval_h(pair, z); }, 0.5, 10.0, 200);
  CHECK(flipped.min_laplacian <= -1e-3);
}

TEST_CASE("analytic laplacian of g in the radial variable") {
  // For g = psi(log r): Laplacian = psi''(log r) / r^2.
  const CutoffPair& pair = CutoffPair::canonical();
  const Complex z = std::polar(std::exp(0.3), 0.7);
  const double h = 2e-4 * std::abs(z);
  const double lap = (eval_g(pair, z + h) + eval_g(pair, z - h) + eval_g(pair, z + Complex(0, h)) +
                      eval_g(pair, z - Complex(0, h)) - 4.0 * eval_g(pair, z)) / (h * h);
  CHECK(lap == doctest::Approx(oracle::psi_curvature(0.3) / std::norm(z)).epsilon(1e-4));
}

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace commsum {

using Complex = std::complex<double>;

/// The C-infinity step phi(x) = b(x) / (b(x) + b(1 - x)) with b(t) = exp(-1/t)
/// for t > 0 and 0 otherwise. phi = 0 on (-inf, 0] and phi = 1 on [1, inf).
class SmoothStep {
 public:
  double operator()(double x) const noexcept;
  double d1(double x) const noexcept;
  double d2(double x) const noexcept;
};

/// Convex corrector psi with psi = 0 on (-inf, 0] and
/// psi''(x) = e^x (|phi''(x)| + 2 |phi'(x)|) on [0, inf).
///
/// psi' and psi are accumulated panel by panel with adaptive Gauss-Kronrod
/// quadrature on [0, 1] and stored at the panel nodes together with psi'';
/// evaluation inside a panel is quintic Hermite interpolation. psi'' vanishes
/// on [1, inf), where psi is extended affinely.
class ConvexCorrector {
 public:
  /// Throws NumericalError if a panel integral misses 1e-10 absolute accuracy.
  ConvexCorrector(SmoothStep phi, std::size_t panels = 1024);

  double operator()(double x) const noexcept;
  double d1(double x) const noexcept;
  double d2(double x) const noexcept;

  /// psi'(1), the slope of the affine part.
  double slope() const noexcept { return slope_.back(); }

 private:
  SmoothStep phi_;
  double step_;
  std::vector<double> value_;
  std::vector<double> slope_;
  std::vector<double> curvature_;
};

/// phi, psi and the constant C1 with psi(x) <= C1 max(x, 0).
struct CutoffPair {
  SmoothStep phi;
  ConvexCorrector psi;
  double c1;

  /// Process-wide immutable instance built on first use.
  static const CutoffPair& canonical();
};

SmoothStep make_phi();
ConvexCorrector make_psi(const SmoothStep& phi);

/// sup_{x > 0} psi(x)/x over a dense grid on (0, 10] together with the
/// asymptotic slope psi'(1).
double c1_constant(const ConvexCorrector& psi);

CutoffPair make_cutoff_pair();

/// g(z) = psi(log|z|), g(0) = 0.
double eval_g(const CutoffPair& pair, Complex z);

/// h(z) = psi(log|z|) - Re(z) phi(log|z|), h(0) = 0.
double eval_h(const CutoffPair& pair, Complex z);

struct LaplacianScan {
  double min_laplacian = 0.0;
  Complex argmin{};
  std::size_t points = 0;
};

/// Five-point discrete Laplacian of `f` at the nodes of a gridSize x gridSize
/// lattice over [-rMax, rMax]^2 that fall in the annulus rMin <= |z| <= rMax.
/// The stencil step at z is min(grid spacing, 2e-4 |z|).
LaplacianScan laplacian_grid_check(const std::function<double(Complex)>& f, double r_min,
                                   double r_max, std::size_t grid_size);

/// Same scan applied to h.
LaplacianScan laplacian_grid_check(const CutoffPair& pair, double r_min, double r_max,
                                   std::size_t grid_size);

}  // namespace commsum

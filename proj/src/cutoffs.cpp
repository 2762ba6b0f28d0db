#include "commsum/cutoffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "commsum/error.hpp"

namespace commsum {

namespace {

// b(t) = exp(-1/t) and its first two derivatives, zero for t <= 0.
// Divisions are done one factor at a time so tiny t gives 0, not 0/0.
double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double bump_d1(double t) {
  if (t <= 0.0) return 0.0;
  return bump(t) / t / t;
}

double bump_d2(double t) {
  if (t <= 0.0) return 0.0;
  const double b = bump(t);
  return b / t / t / t / t - 2.0 * b / t / t / t;
}

}  // namespace

double SmoothStep::operator()(double x) const noexcept {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double u = bump(x);
  const double v = bump(1.0 - x);
  return u / (u + v);
}

double SmoothStep::d1(double x) const noexcept {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double u = bump(x);
  const double v = bump(1.0 - x);
  const double d = u + v;
  return (bump_d1(x) * v + u * bump_d1(1.0 - x)) / d / d;
}

double SmoothStep::d2(double x) const noexcept {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double u = bump(x);
  const double v = bump(1.0 - x);
  const double du = bump_d1(x);
  const double dv = bump_d1(1.0 - x);  // d/dx b(1-x) = -dv
  const double d = u + v;
  const double num = du * v + u * dv;
  const double num_d = bump_d2(x) * v - u * bump_d2(1.0 - x);
  const double d_d = du - dv;
  return num_d / d / d - 2.0 * num * d_d / d / d / d;
}

ConvexCorrector::ConvexCorrector(SmoothStep phi, std::size_t panels)
    : phi_(phi), step_(1.0 / static_cast<double>(panels)) {
  if (panels < 2) throw DomainError("psi needs at least two panels");
  auto curvature = [this](double x) {
    return std::exp(x) * (std::abs(phi_.d2(x)) + 2.0 * std::abs(phi_.d1(x)));
  };
  value_.assign(panels + 1, 0.0);
  slope_.assign(panels + 1, 0.0);
  curvature_.assign(panels + 1, 0.0);
  for (std::size_t k = 0; k <= panels; ++k) {
    curvature_[k] = curvature(static_cast<double>(k) * step_);
  }
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 15>;
  constexpr double kRequired = 1e-10;
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = static_cast<double>(k) * step_;
    const double b = static_cast<double>(k + 1) * step_;
    double err_slope = 0.0;
    double err_value = 0.0;
    const double inc_slope = Quadrature::integrate(curvature, a, b, 8, 1e-10, &err_slope);
    const double inc_value = Quadrature::integrate(
        [&](double u) { return (b - u) * curvature(u); }, a, b, 8, 1e-10, &err_value);
    const double scale = std::max(1.0, std::abs(inc_slope));
    if (!(err_slope * scale <= kRequired) || !(err_value <= kRequired)) {
      throw NumericalError("psi quadrature missed 1e-10 on panel [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
    }
    slope_[k + 1] = slope_[k] + inc_slope;
    value_[k + 1] = value_[k] + step_ * slope_[k] + inc_value;
  }
}

double ConvexCorrector::operator()(double x) const noexcept {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return value_.back() + (x - 1.0) * slope_.back();
  const std::size_t panels = value_.size() - 1;
  std::size_t k = std::min(static_cast<std::size_t>(x / step_), panels - 1);
  const double t = (x - static_cast<double>(k) * step_) / step_;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t3 * t;
  const double t5 = t4 * t;
  const double h = step_;
  const double h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
  const double h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
  const double h20 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  const double h21 = 0.5 * t3 - t4 + 0.5 * t5;
  const double h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
  const double h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
  return h00 * value_[k] + h10 * h * slope_[k] + h20 * h * h * curvature_[k] +
         h21 * h * h * curvature_[k + 1] + h11 * h * slope_[k + 1] + h01 * value_[k + 1];
}

double ConvexCorrector::d1(double x) const noexcept {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return slope_.back();
  const std::size_t panels = value_.size() - 1;
  std::size_t k = std::min(static_cast<std::size_t>(x / step_), panels - 1);
  const double t = (x - static_cast<double>(k) * step_) / step_;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t3 * t;
  const double h = step_;
  const double h00 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
  const double h10 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
  const double h20 = t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4;
  const double h21 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4;
  const double h11 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
  const double h01 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
  return (h00 * value_[k] + h01 * value_[k + 1]) / h + h10 * slope_[k] + h11 * slope_[k + 1] +
         h * (h20 * curvature_[k] + h21 * curvature_[k + 1]);
}

double ConvexCorrector::d2(double x) const noexcept {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::exp(x) * (std::abs(phi_.d2(x)) + 2.0 * std::abs(phi_.d1(x)));
}

SmoothStep make_phi() { return SmoothStep{}; }

ConvexCorrector make_psi(const SmoothStep& phi) { return ConvexCorrector(phi); }

double c1_constant(const ConvexCorrector& psi) {
  constexpr std::size_t kGrid = 100000;
  double best = psi.slope();
  for (std::size_t i = 1; i <= kGrid; ++i) {
    const double x = 10.0 * static_cast<double>(i) / static_cast<double>(kGrid);
    best = std::max(best, psi(x) / x);
  }
  return best;
}

CutoffPair make_cutoff_pair() {
  SmoothStep phi = make_phi();
  ConvexCorrector psi = make_psi(phi);
  const double c1 = c1_constant(psi);
  return CutoffPair{phi, std::move(psi), c1};
}

const CutoffPair& CutoffPair::canonical() {
  static const CutoffPair pair = make_cutoff_pair();
  return pair;
}

double eval_g(const CutoffPair& pair, Complex z) {
  const double r = std::abs(z);
  if (r <= 1.0) return 0.0;
  return pair.psi(std::log(r));
}

double eval_h(const CutoffPair& pair, Complex z) {
  const double r = std::abs(z);
  if (r <= 1.0) return 0.0;
  const double t = std::log(r);
  return pair.psi(t) - z.real() * pair.phi(t);
}

LaplacianScan laplacian_grid_check(const std::function<double(Complex)>& f, double r_min,
                                   double r_max, std::size_t grid_size) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw DomainError("annulus needs 0 < rMin < rMax");
  if (grid_size < 16) throw DomainError("grid size must be at least 16");
  const double spacing = 2.0 * r_max / static_cast<double>(grid_size - 1);
  LaplacianScan scan;
  scan.min_laplacian = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double x = -r_max + spacing * static_cast<double>(i);
    for (std::size_t j = 0; j < grid_size; ++j) {
      const double y = -r_max + spacing * static_cast<double>(j);
      const Complex z(x, y);
      const double r = std::abs(z);
      if (r < r_min || r > r_max) continue;
      const double d = std::min(spacing, 2e-4 * r);
      const double lap = (f(Complex(x + d, y)) + f(Complex(x - d, y)) + f(Complex(x, y + d)) +
                          f(Complex(x, y - d)) - 4.0 * f(z)) /
                         (d * d);
      ++scan.points;
      if (lap < scan.min_laplacian) {
        scan.min_laplacian = lap;
        scan.argmin = z;
      }
    }
  }
  if (scan.points == 0) scan.min_laplacian = 0.0;
  return scan;
}

LaplacianScan laplacian_grid_check(const CutoffPair& pair, double r_min, double r_max,
                                   std::size_t grid_size) {
  return laplacian_grid_check([&pair](Complex z) { return eval_h(pair, z); }, r_min, r_max,
                              grid_size);
}

}  // namespace commsum

#include "commsum/functionals.hpp"

#include <cmath>
#include <numbers>

#include "commsum/error.hpp"
#include "commsum/parallel.hpp"

namespace commsum {

namespace {

// Upper bound on the number of terms scanned for a symbolic law with
// values above 1.
constexpr std::size_t kSymbolicScanLimit = 100'000'000;

template <class Visit>
void for_each_above_one(const ScalarSequence& s, Visit visit) {
  if (s.is_finite()) {
    for (const double v : s.finite_values()) {
      if (rounded_modulus(v) >= 1.0) visit(v);
    }
    return;
  }
  for (std::size_t n = 1;; ++n) {
    if (n > kSymbolicScanLimit) throw DomainError("symbolic law exceeds 1 for too many terms");
    const double v = s.value(n);
    if (rounded_modulus(v) < 1.0) break;
    visit(v);
  }
}

}  // namespace

std::size_t nu(const EigenSequence& lambda) {
  std::size_t count = 0;
  for (const Complex z : lambda.values()) {
    if (rounded_modulus(z) >= 1.0) ++count;
  }
  return count;
}

double mu(const EigenSequence& lambda) {
  double sum = 0.0;
  for (const Complex z : lambda.values()) {
    const double m = std::abs(z);
    if (m > 1.0) sum += std::log(m);
  }
  return sum;
}

Complex chi(const EigenSequence& lambda) {
  Complex sum{};
  for (const Complex z : lambda.values()) {
    if (rounded_modulus(z) >= 1.0) sum += z;
  }
  return sum;
}

Complex chi_phi(const EigenSequence& lambda, const CutoffPair& pair) {
  Complex sum{};
  for (const Complex z : lambda.values()) {
    const double m = std::abs(z);
    if (m == 0.0) continue;
    sum += z * pair.phi(std::log(m));
  }
  return sum;
}

std::size_t nu(const ScalarSequence& s) {
  std::size_t count = 0;
  for_each_above_one(s, [&](double) { ++count; });
  return count;
}

double mu(const ScalarSequence& s) {
  double sum = 0.0;
  for_each_above_one(s, [&](double v) {
    if (v > 1.0) sum += std::log(v);
  });
  return sum;
}

VanishingFunction g_function(const CutoffPair& pair) {
  return {[&pair](Complex z) { return eval_g(pair, z); }, 1.0};
}

VanishingFunction h_function(const CutoffPair& pair) {
  return {[&pair](Complex z) { return eval_h(pair, z); }, 1.0};
}

double f_hat(const EigenSequence& lambda, const VanishingFunction& f) {
  if (!(f.radius > 0.0) || !f.f) {
    throw DomainError("f_hat needs a function with a declared vanishing radius > 0");
  }
  double sum = 0.0;
  for (const Complex z : lambda.values()) {
    if (std::abs(z) > f.radius) sum += f.f(z);
  }
  return sum;
}

double circle_mean(const ComplexMatrix& s, const ComplexMatrix& t, const VanishingFunction& f,
                   std::size_t nodes) {
  if (nodes < 8) throw DomainError("circle mean needs at least 8 nodes");
  if (s.dim() != t.dim()) throw DomainError("dimension mismatch in circle mean");
  const std::vector<double> values = parallel_map(nodes, [&](std::size_t k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nodes);
    const ComplexMatrix point = s + std::polar(1.0, theta) * t;
    return f_hat(eigenvalue_sequence(point), f);
  });
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(nodes);
}

FunctionalReport functional_report(const EigenSequence& lambda, const CutoffPair& pair) {
  FunctionalReport report{nu(lambda), mu(lambda), chi(lambda), chi_phi(lambda, pair)};
  const double gap = std::abs(report.chi - report.chi_phi);
  const double bound = std::numbers::e * static_cast<double>(report.nu);
  if (gap > bound + 1e-8 * (1.0 + bound)) {
    throw NumericalError("|chi - chi_phi| exceeds e*nu");
  }
  return report;
}

double commutator_constant(double c1) { return 4.0 * c1 + 52.0 / std::numbers::ln2; }

}  // namespace commsum

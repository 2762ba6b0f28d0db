#include "commsum/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "commsum/criterion.hpp"
#include "commsum/cutoffs.hpp"
#include "commsum/error.hpp"
#include "commsum/functionals.hpp"
#include "commsum/ideals.hpp"
#include "commsum/parallel.hpp"

namespace commsum {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kStoredViolations = 100;

Complex complex_normal(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  const double re = nd(rng);
  const double im = nd(rng);
  return {re, im};
}

double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

std::size_t uniform_int(std::mt19937_64& rng, std::size_t a, std::size_t b) {
  return std::uniform_int_distribution<std::size_t>(a, b)(rng);
}

bool near_unit_threshold(Complex z) {
  constexpr double gap = 1e-6;
  return std::abs(std::abs(z) - 1.0) < gap || std::abs(std::abs(z.real()) - 1.0) < gap ||
         std::abs(std::abs(z.imag()) - 1.0) < gap;
}

DenseMatrix gaussian(std::size_t dim, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  DenseMatrix g(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) g(r, c) = complex_normal(rng);
  }
  return g;
}

Ensemble any_ensemble(std::mt19937_64& rng) { return static_cast<Ensemble>(uniform_int(rng, 0, 5)); }

std::vector<double> singular_values(const ComplexMatrix& m) {
  const ScalarSequence s = singular_sequence(m);
  return {s.finite_values().begin(), s.finite_values().end()};
}

ScalarSequence times(std::vector<double> v, double factor) {
  for (double& x : v) x *= factor;
  return ScalarSequence::finite(std::move(v));
}

std::string pair_fingerprint(const ComplexMatrix& a, const ComplexMatrix& b) {
  return fingerprint(a) + "-" + fingerprint(b);
}

std::string sequence_fingerprint(std::span<const Complex> values) {
  if (values.empty()) return "empty";
  return fingerprint(ComplexMatrix::diagonal(values));
}

enum class Agg { Max, Min, Sum };

struct Extra {
  std::string key;
  double value;
  Agg agg;
};

// Outcome of one trial: the worst (lhs, rhs) pair by normalized slack.
struct Trial {
  std::string fingerprint;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = -std::numeric_limits<double>::infinity();
  bool informative = false;
  double ratio = kNaN;
  std::vector<Extra> extras;

  void check(double l, double r) {
    const double s = (l - r) / (1.0 + std::abs(r));
    if (s > slack) {
      slack = s;
      lhs = l;
      rhs = r;
    }
    if (r > 0.0) ratio = std::isnan(ratio) ? l / r : std::max(ratio, l / r);
  }
  void extra(std::string key, double value, Agg agg = Agg::Max) {
    extras.push_back({std::move(key), value, agg});
  }
};

using SuiteFn = std::function<Trial(std::mt19937_64&, const SuiteConfig&, bool mutant, std::size_t index)>;

Trial weyl_horn(std::mt19937_64& rng, const SuiteConfig& cfg, bool mutant, std::size_t) {
  const std::size_t d = uniform_int(rng, 2, cfg.max_dim);
  const ComplexMatrix s = gen_matrix(any_ensemble(rng), d, rng);
  const ComplexMatrix t = gen_matrix(any_ensemble(rng), d, rng);
  Trial out;
  out.fingerprint = pair_fingerprint(s, t);
  out.informative = true;
  const ScalarSequence ss = singular_sequence(s);
  const ScalarSequence st = singular_sequence(t);
  const std::vector<double> sum = singular_values(s + t);
  const std::vector<double> prod = singular_values(s * t);
  const std::size_t shift = mutant ? 2 : 1;
  for (std::size_t m = 1; m <= d; ++m) {
    for (std::size_t n = 1; n <= d; ++n) {
      if (m + n < shift + 1 || m + n - shift > d) continue;
      out.check(sum[m + n - shift - 1], ss.value(m) + st.value(n));
    }
  }
  for (std::size_t n = 1; n <= d; ++n) {
    const double half = static_cast<double>(n) / 2.0;
    out.check(sum[n - 1], frac_index(ss, half) + frac_index(st, half));
    out.check(prod[n - 1], frac_index(ss, half) * frac_index(st, half));
  }
  const EigenSequence lambda = eigenvalue_sequence(s);
  double lhs = 1.0;
  double rhs = 1.0;
  for (std::size_t n = 1; n <= d; ++n) {
    lhs *= std::abs(lambda.at(n));
    rhs *= ss.value(n);
    if (mutant) {
      out.check(rhs, lhs);
    } else {
      out.check(lhs, rhs);
    }
  }
  return out;
}

Trial lemma2_2(std::mt19937_64& rng, const SuiteConfig& cfg, bool mutant, std::size_t) {
  const std::size_t d = uniform_int(rng, 2, cfg.max_dim);
  const ComplexMatrix t = gen_matrix(any_ensemble(rng), d, rng);
  Trial out;
  out.fingerprint = fingerprint(t);
  const double mu_t = mu(eigenvalue_sequence(t));
  const double mu_abs = mu(singular_sequence(t));
  out.informative = mu_abs > 0.0;
  out.check(-mu_t, 0.0);
  if (mutant) {
    out.check(mu_abs, mu_t);
  } else {
    out.check(mu_t, mu_abs);
  }
  return out;
}

Trial lemma2_3(std::mt19937_64& rng, const SuiteConfig& cfg, bool mutant, std::size_t) {
  const std::size_t d = uniform_int(rng, 2, cfg.max_dim);
  const ComplexMatrix s = gen_matrix(any_ensemble(rng), d, rng);
  const ComplexMatrix t = gen_matrix(any_ensemble(rng), d, rng);
  Trial out;
  out.fingerprint = pair_fingerprint(s, t);
  const double factor = mutant ? 1.0 : 2.0;
  const double lhs = static_cast<double>(nu(singular_sequence(s + t)));
  const double rhs = static_cast<double>(nu(times(singular_values(s), factor)) +
                                         nu(times(singular_values(t), factor)));
  out.check(lhs, rhs);
  const double nu_h = static_cast<double>(nu(eigenvalue_sequence(hermitian_split(t).h)));
  const double nu_abs = static_cast<double>(nu(singular_sequence(t)));
  out.check(nu_h, factor * nu_abs);
  out.informative = rhs > 0.0 || nu_abs > 0.0;
  return out;
}

Trial lemma2_4_1(std::mt19937_64& rng, const SuiteConfig& cfg, bool mutant, std::size_t) {
  const std::size_t d = uniform_int(rng, 2, cfg.max_dim);
  ComplexMatrix t = ComplexMatrix::zero(d);
  if (mutant) {
    t = gen_matrix(Ensemble::General, d, rng);
  } else if (uniform_int(rng, 0, 1) == 0) {
    t = gen_matrix(Ensemble::Hermitian, d, rng);
  } else {
    const ComplexMatrix u = random_unitary(d, rng);
    t = u * gen_matrix(Ensemble::NormalDiagonal, d, rng) * u.adjoint();
  }
  Trial out;
  out.fingerprint = fingerprint(t);
  const EigenSequence lambda = eigenvalue_sequence(t);
  const Complex chi_h = chi(eigenvalue_sequence(hermitian_split(t).h));
  const double rhs = static_cast<double>(nu(lambda));
  out.check(std::abs(chi_h.real() - chi(lambda).real()), rhs);
  out.informative = rhs > 0.0;
  return out;
}

Trial lemma2_4_2(std::mt19937_64& rng, const SuiteConfig& cfg, bool mutant, std::size_t) {
  const std::size_t d = uniform_int(rng, 2, cfg.max_dim);
  const ComplexMatrix t = gen_matrix(any_ensemble(rng), d, rng);
  const EigenSequence lambda = eigenvalue_sequence(t);
  // Half the draws sit near alpha = 1/|lambda_1|, where the bound is tight.
  double r = std::exp(uniform(rng, -2.0, 0.0));
  const double top = std::abs(lambda.at(1));
  if (uniform_int(rng, 0, 1) == 0 && top >= 1.0) r = std::min(1.0, uniform(rng, 0.95, 1.05) / top);
  const Complex alpha = std::polar(r, uniform(rng, 0.0, 2.0 * std::numbers::pi));
  Trial out;
  out.fingerprint = fingerprint(t);
  const double nu_t = static_cast<double>(nu(lambda));
  const double lhs = std::abs(alpha * chi(lambda) - chi(eigenvalue_sequence(alpha * t)));
  out.check(lhs, mutant ? nu_t / 2.0 : nu_t);
  out.informative = nu_t > 0.0;
  return out;
}

Trial lemma2_4_3(std::mt19937_64& rng, const SuiteConfig& cfg, bool mutant, std::size_t) {
  const std::size_t d = uniform_int(rng, 2, cfg.max_dim);
  const std::size_t count = uniform_int(rng, 2, 4);
  std::vector<std::vector<Complex>> diags(count, std::vector<Complex>(d));
  for (std::size_t i = 0; i < d; ++i) {
    Complex sum{};
    for (std::size_t j = 0; j + 1 < count; ++j) {
      diags[j][i] = 0.8 * complex_normal(rng);
      sum += diags[j][i];
    }
    diags[count - 1][i] = -sum;
  }
  Trial out;
  Complex chi_sum{};
  double nu_sum = 0.0;
  std::vector<Complex> all;
  for (const auto& dj : diags) {
    const EigenSequence lambda = eigenvalue_sequence(ComplexMatrix::diagonal(dj));
    chi_sum += chi(lambda);
    nu_sum += static_cast<double>(nu(lambda));
    all.insert(all.end(), dj.begin(), dj.end());
  }
  out.fingerprint = sequence_fingerprint(all);
  const double factor = mutant ? 1.0 : static_cast<double>(count - 1);
  out.check(std::abs(chi_sum), factor * nu_sum);
  out.informative = nu_sum > 0.0;
  return out;
}

Trial lemma2_5(std::mt19937_64& rng, const SuiteConfig& cfg, bool mutant, std::size_t) {
  const std::size_t d = uniform_int(rng, 2, cfg.max_dim);
  const ComplexMatrix t = gen_matrix(any_ensemble(rng), d, rng);
  const EigenSequence lambda = eigenvalue_sequence(t);
  Trial out;
  out.fingerprint = fingerprint(t);
  const double nu_t = static_cast<double>(nu(lambda));
  const double lhs = std::abs(chi(lambda) - chi_phi(lambda, CutoffPair::canonical()));
  out.check(lhs, mutant ? nu_t : std::numbers::e * nu_t);
  out.informative = nu_t > 0.0;
  return out;
}

double five_point_laplacian(const std::function<double(Complex)>& f, Complex z, double h) {
  const double sum = f(z + h) + f(z - h) + f(z + Complex(0.0, h)) + f(z - Complex(0.0, h));
  return (sum - 4.0 * f(z)) / (h * h);
}

Trial lemma2_6(std::mt19937_64& rng, const SuiteConfig&, bool mutant, std::size_t index) {
  const CutoffPair& pair = CutoffPair::canonical();
  const double sign = mutant ? -1.0 : 1.0;
  const std::function<double(Complex)> f = [&pair, sign](Complex z) { return sign * eval_h(pair, z); };
  Trial out;
  if (index == 0) {
    const LaplacianScan scan = laplacian_grid_check(f, 0.5, 10.0, 400);
    out.fingerprint = "grid-400";
    out.informative = true;
    out.check(-scan.min_laplacian, 0.0);
    out.extra("minGridLaplacian", scan.min_laplacian, Agg::Min);
    return out;
  }
  // Three quarters of the points land in 1 < |z| < e, where h is not harmonic.
  const double log_r = uniform_int(rng, 0, 3) == 0 ? uniform(rng, std::log(0.5), std::log(10.0))
                                                   : uniform(rng, 0.0, 1.0);
  const Complex z = std::polar(std::exp(log_r), uniform(rng, 0.0, 2.0 * std::numbers::pi));
  const double lap = five_point_laplacian(f, z, 2e-4 * std::abs(z));
  out.fingerprint = sequence_fingerprint(std::span<const Complex>(&z, 1));
  out.informative = log_r > 0.0 && log_r < 1.0;
  out.check(-lap, 0.0);
  out.extra("minPointLaplacian", lap, Agg::Min);
  return out;
}

// psi'' contains |phi''|, so psi''' jumps where phi'' changes sign. A circle
// mean whose eigenvalue paths cross |z| = e^x at such x has a C^2 integrand
// only, and the rectangle rule loses its fast convergence there.
const std::vector<double>& kink_radii() {
  static const std::vector<double> radii = [] {
    const SmoothStep& phi = CutoffPair::canonical().phi;
    std::vector<double> out;
    constexpr int grid = 4096;
    for (int k = 1; k + 1 < grid; ++k) {
      double a = static_cast<double>(k) / grid;
      double b = static_cast<double>(k + 1) / grid;
      if ((phi.d2(a) > 0.0) == (phi.d2(b) > 0.0)) continue;
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + b);
        ((phi.d2(m) > 0.0) == (phi.d2(a) > 0.0) ? a : b) = m;
      }
      out.push_back(std::exp(0.5 * (a + b)));
    }
    return out;
  }();
  return radii;
}

double kink_distance(const EigenSequence& lambda) {
  double dist = std::numeric_limits<double>::infinity();
  for (const Complex z : lambda.values()) {
    for (const double r : kink_radii()) dist = std::min(dist, std::abs(std::abs(z) - r));
  }
  return dist;
}

double min_gap(const EigenSequence& lambda) {
  double gap = std::numeric_limits<double>::infinity();
  const auto v = lambda.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) gap = std::min(gap, std::abs(v[i] - v[j]));
  }
  return gap;
}

Trial lemma2_1_3(std::mt19937_64& rng, const SuiteConfig& cfg, bool mutant, std::size_t) {
  const std::size_t d = uniform_int(rng, 2, std::min<std::size_t>(cfg.max_dim, 6));
  const ComplexMatrix s = gen_matrix(any_ensemble(rng), d, rng);
  const ComplexMatrix t = gen_matrix(any_ensemble(rng), d, rng);
  const CutoffPair& pair = CutoffPair::canonical();
  std::vector<VanishingFunction> fs;
  if (mutant) {
    fs.push_back({[&pair](Complex z) { return -eval_g(pair, z); }, 1.0});
  } else {
    fs.push_back(h_function(pair));
    fs.push_back(g_function(pair));
  }
  Trial out;
  out.fingerprint = pair_fingerprint(s, t);

  // The N-node rule uses the even nodes of the 2N-node rule.
  const std::size_t fine = 2 * cfg.nodes;
  std::vector<double> sum_even(fs.size(), 0.0);
  std::vector<double> sum_all(fs.size(), 0.0);
  double gap = std::numeric_limits<double>::infinity();
  double kink = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < fine; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(fine);
    const EigenSequence lambda = eigenvalue_sequence(s + std::polar(1.0, theta) * t);
    gap = std::min(gap, min_gap(lambda));
    kink = std::min(kink, kink_distance(lambda));
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const double v = f_hat(lambda, fs[i]);
      sum_all[i] += v;
      if (k % 2 == 0) sum_even[i] += v;
    }
  }
  const EigenSequence lambda_s = eigenvalue_sequence(s);
  // Smooth: simple eigenvalues along the circle and no path through a kink radius.
  const bool smooth = gap >= 0.05 && kink >= 0.02;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const double mean = sum_even[i] / static_cast<double>(cfg.nodes);
    const double mean_fine = sum_all[i] / static_cast<double>(fine);
    const double lhs = f_hat(lambda_s, fs[i]);
    out.check(lhs, mean);
    if (lhs != 0.0 || mean != 0.0) out.informative = true;
    out.extra("maxNodeDoublingChange", std::abs(mean_fine - mean));
    if (smooth) out.extra("maxNodeDoublingChangeSmooth", std::abs(mean_fine - mean));
  }
  out.extra("smoothTrials", smooth ? 1.0 : 0.0, Agg::Sum);
  return out;
}

Trial thm2_7(std::mt19937_64& rng, const SuiteConfig& cfg, bool mutant, std::size_t) {
  const std::size_t d = uniform_int(rng, 2, cfg.max_dim);
  const ComplexMatrix t = gen_matrix(any_ensemble(rng), d, rng);
  const EigenSequence lambda = eigenvalue_sequence(t);
  const HermitianSplit split = hermitian_split(t);
  const double mu2 = mu(times(singular_values(t), 2.0));
  const double c2 = commutator_constant(CutoffPair::canonical().c1);
  const double rhs = mutant ? 0.0 : c2 * mu2;
  const Complex chi_t = chi(lambda);
  const double dev_re = std::abs(chi(eigenvalue_sequence(split.h)).real() - chi_t.real());
  const double dev_im = std::abs(chi(eigenvalue_sequence(split.k)).real() - chi_t.imag());
  Trial out;
  out.fingerprint = fingerprint(t);
  out.check(dev_re, rhs);
  out.check(dev_im, rhs);
  out.informative = mu2 > 0.0;
  if (mu2 > 0.0) out.extra("maxDeviationOverMu", std::max(dev_re, dev_im) / mu2);
  return out;
}

Trial pencil_suite(std::mt19937_64& rng, const SuiteConfig& cfg, bool mutant, std::size_t) {
  const std::size_t d = uniform_int(rng, 2, cfg.max_dim);
  const ComplexMatrix t = gen_matrix(any_ensemble(rng), d, rng);
  const Complex z = std::polar(1.0, uniform(rng, 0.0, 2.0 * std::numbers::pi));
  const ComplexMatrix f = pencil(t, z);
  const HermitianSplit split = hermitian_split(t);
  const Complex i(0.0, 1.0);
  const ComplexMatrix residual = f - (0.5 * (1.0 + z)) * split.h - (i * 0.5 * (1.0 - z)) * split.k;
  Trial out;
  out.fingerprint = fingerprint(t);
  out.check(frobenius_norm(residual) / std::max(1.0, frobenius_norm(t)), 0.0);
  const double nu_abs = static_cast<double>(nu(singular_sequence(t)));
  const double factor = mutant ? 1.0 : 2.0;
  out.check(static_cast<double>(nu(singular_sequence(f))), factor * nu_abs);
  out.check(static_cast<double>(nu(eigenvalue_sequence(split.h))), 2.0 * nu_abs);
  out.check(static_cast<double>(nu(eigenvalue_sequence(split.k))), 2.0 * nu_abs);
  out.informative = nu_abs > 0.0;
  return out;
}

Trial thm3_1_cycle(std::mt19937_64& rng, const SuiteConfig& cfg, bool mutant, std::size_t) {
  const std::size_t n = uniform_int(rng, 1, cfg.max_dim);
  const double decay = uniform(rng, 0.0, 1.5);
  const double scale = std::exp(uniform(rng, -2.0, 2.0));
  const bool positive = uniform_int(rng, 0, 3) == 0;
  std::vector<Complex> values(n);
  Complex sum{};
  for (std::size_t k = 0; k < n; ++k) {
    Complex z = complex_normal(rng);
    if (positive) z = std::abs(z);
    values[k] = scale * z * std::pow(static_cast<double>(k + 1), -decay);
    sum += values[k];
  }
  if (n > 1 && uniform_int(rng, 0, 2) == 0) values[n - 1] -= sum;
  const EigenSequence lambda(values);
  Trial out;
  out.fingerprint = sequence_fingerprint(lambda.values());
  out.informative = true;

  CheckOptions options;
  options.tail_breakpoints = 1024;
  double failures = 0.0;
  const WitnessCheck c3 = condition3_check(lambda, Witness::from(max_envelope(lambda)), 0.0);
  if (!c3.holds) failures += 1.0;
  Witness w4 = witness_3_to_4(lambda, c3.witness);
  if (mutant) w4 = Witness({w4.base().begin(), w4.base().end()}, w4.harmonic_tail());
  const ConditionCheck c4 = condition4_check(lambda, w4, options);
  out.extra("maxCondition4Ratio", c4.worst_ratio);
  if (!c4.holds) {
    failures += 1.0;
  } else {
    const WitnessCheck back = witness_4_to_3(lambda, w4, 2.0, options);
    out.extra("maxCondition3Ratio", back.worst_ratio);
    if (!back.holds) failures += 1.0;
    const ConditionCheck c5 = condition5_check(lambda, w4.scaled(std::numbers::e), options);
    if (!c5.holds) failures += 1.0;
  }
  out.check(failures, 0.0);
  return out;
}

Trial prop3_2(std::mt19937_64& rng, const SuiteConfig& cfg, bool mutant, std::size_t) {
  static constexpr double kExponents[] = {0.5, 1.0, 2.0};
  const double p = kExponents[uniform_int(rng, 0, 2)];
  const double c = std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
  const bool power = uniform_int(rng, 0, 1) == 0;
  const ScalarSequence s = power ? ScalarSequence::power(c, 1.0 / p + uniform(rng, 0.05, 2.0))
                                 : ScalarSequence::geometric(c, uniform(rng, 0.05, 0.95));
  const StabilityReport report = check_geometric_stability(s, IdealSpec::schatten(p), cfg.terms);
  Trial out;
  const std::vector<Complex> tag = {Complex(p, c), power ? Complex(s.value(1), s.value(2)) : Complex(0.0, s.value(1))};
  out.fingerprint = sequence_fingerprint(tag);
  out.informative = true;
  out.check(static_cast<double>(report.proof_bound_failures), 0.0);
  out.check(report.geometric_means.status == MembershipStatus::In ? 0.0 : 1.0, 0.0);
  out.check(report.empirical_constant, mutant ? 1.0 : report.proof_constant_limit);
  out.extra("maxEmpiricalConstant", report.empirical_constant);
  out.extra("maxProofConstant", report.proof_constant);
  return out;
}

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"weyl_horn", weyl_horn},   {"lemma2_2", lemma2_2},     {"lemma2_3", lemma2_3},
      {"lemma2_4_1", lemma2_4_1}, {"lemma2_4_2", lemma2_4_2}, {"lemma2_4_3", lemma2_4_3},
      {"lemma2_5", lemma2_5},     {"lemma2_6", lemma2_6},     {"lemma2_1_3", lemma2_1_3},
      {"thm2_7", thm2_7},         {"pencil", pencil_suite},   {"thm3_1_cycle", thm3_1_cycle},
      {"prop3_2", prop3_2},
  };
  return suites;
}

}  // namespace

const char* to_string(Ensemble e) {
  switch (e) {
    case Ensemble::General:
      return "general";
    case Ensemble::Hermitian:
      return "hermitian";
    case Ensemble::NormalDiagonal:
      return "normal-diagonal";
    case Ensemble::Nilpotent:
      return "nilpotent";
    case Ensemble::Jordan:
      return "jordan";
    case Ensemble::Scaled:
      return "scaled";
  }
  return "general";
}

Ensemble parse_ensemble(const std::string& name) {
  for (int k = 0; k < 6; ++k) {
    const auto e = static_cast<Ensemble>(k);
    if (name == to_string(e)) return e;
  }
  throw DomainError("unknown ensemble '" + name + "'");
}

ComplexMatrix random_unitary(std::size_t dim, std::mt19937_64& rng) {
  const DenseMatrix g = gaussian(dim, rng);
  const Eigen::HouseholderQR<DenseMatrix> qr(g);
  DenseMatrix q = qr.householderQ();
  const DenseMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return ComplexMatrix(std::move(q));
}

ComplexMatrix gen_matrix(Ensemble kind, std::size_t dim, std::mt19937_64& rng) {
  if (dim == 0) throw DomainError("matrix dimension must be >= 1");
  const auto n = static_cast<Eigen::Index>(dim);
  switch (kind) {
    case Ensemble::General:
      return ComplexMatrix(gaussian(dim, rng));
    case Ensemble::Hermitian: {
      const DenseMatrix g = gaussian(dim, rng);
      return ComplexMatrix(DenseMatrix(0.5 * (g + g.adjoint())));
    }
    case Ensemble::NormalDiagonal: {
      std::vector<Complex> d(dim);
      for (Complex& z : d) {
        do {
          z = complex_normal(rng);
        } while (near_unit_threshold(z));
      }
      return ComplexMatrix::diagonal(d);
    }
    case Ensemble::Nilpotent: {
      DenseMatrix g = gaussian(dim, rng);
      for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c <= r; ++c) g(r, c) = 0.0;
      }
      return ComplexMatrix(std::move(g));
    }
    case Ensemble::Jordan: {
      DenseMatrix j = DenseMatrix::Zero(n, n);
      std::size_t start = 0;
      while (start < dim) {
        const std::size_t size = uniform_int(rng, 1, dim - start);
        const Complex eig = complex_normal(rng);
        for (std::size_t k = start; k < start + size; ++k) {
          const auto kk = static_cast<Eigen::Index>(k);
          j(kk, kk) = eig;
          if (k + 1 < start + size) j(kk, kk + 1) = 1.0;
        }
        start += size;
      }
      const ComplexMatrix u = random_unitary(dim, rng);
      return u * ComplexMatrix(std::move(j)) * u.adjoint();
    }
    case Ensemble::Scaled: {
      const DenseMatrix g = gaussian(dim, rng);
      return ComplexMatrix(DenseMatrix(std::exp(uniform(rng, -3.0, 3.0)) * g));
    }
  }
  throw DomainError("unknown ensemble");
}

ComplexMatrix gen_matrix(Ensemble kind, std::size_t dim, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(kind), static_cast<std::uint32_t>(dim)};
  std::mt19937_64 rng(seq);
  return gen_matrix(kind, dim, rng);
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  for (const auto& [name, fn] : registry()) names.push_back(name + "_mutant");
  return names;
}

double default_tolerance(const std::string& suite) {
  const std::string base = suite.ends_with("_mutant") ? suite.substr(0, suite.size() - 7) : suite;
  if (base == "lemma2_1_3" || base == "lemma2_6") return 1e-6;
  return 1e-8;
}

SuiteReport run_suite(const SuiteConfig& config) {
  const bool mutant = config.suite.ends_with("_mutant");
  const std::string base = mutant ? config.suite.substr(0, config.suite.size() - 7) : config.suite;
  const auto& suites = registry();
  const auto it = std::find_if(suites.begin(), suites.end(), [&](const auto& e) { return e.first == base; });
  if (it == suites.end()) throw DomainError("unknown suite '" + config.suite + "'");
  if (config.trials < 1) throw DomainError("trials must be >= 1");
  if (config.max_dim < 2) throw DomainError("max-dim must be >= 2");
  if (config.nodes < 8) throw DomainError("nodes must be >= 8");
  const double tolerance = config.tolerance.value_or(default_tolerance(config.suite));
  if (!(tolerance >= 0.0)) throw DomainError("tolerance must be >= 0");

  const SuiteFn& fn = it->second;
  const std::vector<Trial> trials = parallel_map(config.trials, [&](std::size_t i) {
    std::mt19937_64 rng = trial_rng(config.seed, i);
    return fn(rng, config, mutant, i);
  });

  SuiteReport report;
  report.suite = config.suite;
  report.trials = config.trials;
  report.max_dim = config.max_dim;
  report.seed = config.seed;
  report.tolerance = tolerance;
  report.worst_slack = -std::numeric_limits<double>::infinity();
  double max_ratio = kNaN;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const Trial& t = trials[i];
    if (t.informative) ++report.informative;
    report.worst_slack = std::max(report.worst_slack, t.slack);
    if (t.slack > tolerance) {
      ++report.violation_count;
      if (report.violations.size() < kStoredViolations) {
        report.violations.push_back({i, t.fingerprint, t.lhs, t.rhs, t.slack});
      }
    }
    if (!std::isnan(t.ratio)) max_ratio = std::isnan(max_ratio) ? t.ratio : std::max(max_ratio, t.ratio);
    for (const Extra& e : t.extras) {
      auto [pos, fresh] = report.empirical_constants.emplace(e.key, e.value);
      if (fresh) continue;
      switch (e.agg) {
        case Agg::Max:
          pos->second = std::max(pos->second, e.value);
          break;
        case Agg::Min:
          pos->second = std::min(pos->second, e.value);
          break;
        case Agg::Sum:
          pos->second += e.value;
          break;
      }
    }
  }
  report.empirical_constants["maxRatio"] = std::isnan(max_ratio) ? 0.0 : max_ratio;
  if (base == "thm2_7") {
    report.empirical_constants["c1"] = CutoffPair::canonical().c1;
    report.empirical_constants["c2"] = commutator_constant(CutoffPair::canonical().c1);
  }
  return report;
}

double estimate_constant(const std::string& suite, SuiteConfig config) {
  config.suite = suite;
  return run_suite(config).empirical_constants.at("maxRatio");
}

}  // namespace commsum

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "commsum/spectral.hpp"

namespace commsum {

enum class Ensemble { General, Hermitian, NormalDiagonal, Nilpotent, Jordan, Scaled };

const char* to_string(Ensemble e);
/// "general", "hermitian", "normal-diagonal", "nilpotent", "jordan", "scaled".
Ensemble parse_ensemble(const std::string& name);

/// Complex standard normal entries (real and imaginary parts N(0, 1/2)),
/// then shaped:
///   hermitian        (G + G*)/2
///   normal-diagonal  diagonal of complex normals, redrawn within 1e-6 of the
///                    unit thresholds |z| = 1, |Re z| = 1, |Im z| = 1
///   nilpotent        strictly upper triangular part of G
///   jordan           random Jordan blocks conjugated by a random unitary
///   scaled           G times exp(U(-3, 3))
ComplexMatrix gen_matrix(Ensemble kind, std::size_t dim, std::mt19937_64& rng);
ComplexMatrix gen_matrix(Ensemble kind, std::size_t dim, std::uint64_t seed);

/// Haar-distributed unitary from the QR factorization of a complex Gaussian.
ComplexMatrix random_unitary(std::size_t dim, std::mt19937_64& rng);

/// Generator for trial `index` of a run seeded with `seed`.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index);

struct SuiteConfig {
  std::string suite;
  std::size_t trials = 1000;
  std::size_t max_dim = 8;
  std::uint64_t seed = 0;
  /// Normalized slack (lhs - rhs)/(1 + |rhs|) allowed before a trial counts as
  /// a violation. Defaults per suite when unset.
  std::optional<double> tolerance;
  /// Quadrature nodes for the circle-mean suite.
  std::size_t nodes = 512;
  /// Sequence length for the geometric stability suite.
  std::size_t terms = 100000;
};

struct Violation {
  std::size_t trial = 0;
  std::string fingerprint;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::size_t trials = 0;
  std::size_t max_dim = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  /// Trials where the right-hand side carried information (nonzero bound or
  /// a nontrivial comparison).
  std::size_t informative = 0;
  std::size_t violation_count = 0;
  /// First violations in trial order (at most 100 stored).
  std::vector<Violation> violations;
  double worst_slack = 0.0;
  /// "maxRatio" is max lhs/rhs over trials with rhs > 0; suites add their own.
  std::map<std::string, double> empirical_constants;
};

/// Base suites followed by their "_mutant" negative controls.
std::vector<std::string> suite_names();
double default_tolerance(const std::string& suite);

/// Throws DomainError for an unknown suite or an invalid config.
SuiteReport run_suite(const SuiteConfig& config);

/// Max lhs/rhs over the trials with rhs > 0.
double estimate_constant(const std::string& suite, SuiteConfig config);

}  // namespace commsum

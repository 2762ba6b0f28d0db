#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "commsum/spectral.hpp"

namespace commsum {

/// Tail models for the values past a stored prefix. `exact` tails give the
/// values themselves; the others give the leading asymptotics.
struct ZeroTail {};

/// c n^(-a) (ln n)^b.
struct PowerTail {
  double c = 0.0;
  double a = 0.0;
  double b = 0.0;
  bool exact = false;
};

/// c q^n.
struct GeometricTail {
  double c = 0.0;
  double q = 0.0;
  bool exact = false;
};

/// Nothing is known past the prefix.
struct UnknownTail {};

using Tail = std::variant<ZeroTail, PowerTail, GeometricTail, UnknownTail>;

/// A nonnegative sequence stored as a finite prefix plus a tail model. Outputs
/// of the sequence transforms use this form; `rearranged` marks sequences
/// that are not nonincreasing (raw Cesaro means).
class TailedSequence {
 public:
  TailedSequence() = default;
  TailedSequence(std::vector<double> prefix, Tail tail, bool nonincreasing = true);

  static TailedSequence from(const ScalarSequence& s);

  std::span<const double> prefix() const noexcept { return prefix_; }
  const Tail& tail() const noexcept { return tail_; }
  bool nonincreasing() const noexcept { return nonincreasing_; }

  /// 1-based value; past the prefix uses the tail model, NaN for UnknownTail.
  double value(std::size_t n) const;

  /// Copy with the prefix sorted into nonincreasing order.
  TailedSequence sorted() const;

 private:
  std::vector<double> prefix_;
  Tail tail_ = ZeroTail{};
  bool nonincreasing_ = true;
};

class IdealSpec {
 public:
  enum class Family { Schatten, WeakLp, Custom };
  using Predicate = std::function<std::optional<bool>(const TailedSequence&)>;

  static IdealSpec schatten(double p);
  static IdealSpec weak_lp(double p);
  static IdealSpec custom(std::string name, Predicate predicate, bool geometrically_stable);

  /// "schatten:p=<v>" or "weaklp:p=<v>". Throws ParseError.
  static IdealSpec parse(const std::string& text);

  Family family() const noexcept { return family_; }
  double p() const noexcept { return p_; }
  const std::string& name() const noexcept { return name_; }
  const Predicate& predicate() const noexcept { return predicate_; }

  /// Schatten classes and weak-l_p carry an ideal quasi-norm.
  bool quasi_banach() const noexcept { return family_ != Family::Custom; }
  bool geometrically_stable() const noexcept { return stable_; }

  /// Exponent r in (0, 1] such that the ideal quasi-norm is equivalent to an r-norm.
  double r_norm_exponent() const;

  std::string to_string() const;

 private:
  Family family_ = Family::Schatten;
  double p_ = 1.0;
  std::string name_;
  Predicate predicate_;
  bool stable_ = true;
};

enum class MembershipStatus { In, Out, UndecidedAtScale };

const char* to_string(MembershipStatus s);

struct MembershipVerdict {
  MembershipStatus status = MembershipStatus::UndecidedAtScale;
  std::size_t scale = 0;
  std::map<std::string, double> evidence;
  std::string note;
};

/// Membership of diag(s) in J. Analytic for symbolic tails; finite sequences
/// with zero tail are always In. Raw (rearranged) sequences are sorted first.
MembershipVerdict membership(const TailedSequence& s, const IdealSpec& ideal);
MembershipVerdict membership(const ScalarSequence& s, const IdealSpec& ideal);

/// Symbolic eigenvalue law lambda_n = c n^(-a) or c q^n, times (-1)^(n+1)
/// when alternating.
struct EigenLaw {
  enum class Kind { Power, Geometric };
  Kind kind = Kind::Power;
  double c = 1.0;
  double rate = 1.0;  ///< a for Power, q for Geometric
  bool alternating = false;

  double value(std::size_t n) const;
  /// |lambda_n| as a ScalarSequence.
  ScalarSequence moduli() const;
  /// Validates c > 0 and the rate range; throws DomainError.
  void validate() const;
};

/// |S_N| below this is treated as an exact zero total (rounding of a
/// vanishing trace).
double total_sum_tolerance(const EigenSequence& lambda);

/// c_n = |lambda_1 + ... + lambda_n| / n. For a finite sequence the tail is
/// the exact harmonic law |S_N| / n (zero when S_N vanishes).
TailedSequence cesaro_sequence(const EigenSequence& lambda);

/// Prefix of `count` terms (compensated summation) plus the analytic tail law.
TailedSequence cesaro_sequence(const EigenLaw& law, std::size_t count);

/// u_n = max_{m >= n} c_m including the zero-padded tail |S_N| / m.
TailedSequence max_envelope(const EigenSequence& lambda);

/// t_n = (s_1 ... s_n)^(1/n) in log space. Symbolic inputs are expanded to
/// `count` terms.
TailedSequence geometric_mean_seq(const ScalarSequence& s, std::size_t count = 100000);

/// u_n = sum_k 2^(-theta k) s_{n / 2^k} with the fractional-index convention.
/// Throws DomainError for theta <= 0.
TailedSequence dyadic_series_envelope(const ScalarSequence& s, double theta,
                                      std::size_t count = 100000);

struct StabilityReport {
  MembershipVerdict input;
  MembershipVerdict geometric_means;
  double r = 1.0;
  double theta = 2.0;
  std::size_t scale = 0;
  /// max_n t_n / u_n over the examined prefix.
  double empirical_constant = 0.0;
  /// max_n 2^theta n^theta (n!)^(-theta/n), and its limit (2e)^theta.
  double proof_constant = 0.0;
  double proof_constant_limit = 0.0;
  /// t_n <= 2^theta n^theta (n!)^(-theta/n) u_n for every examined n.
  bool proof_bound_holds = true;
  std::size_t proof_bound_failures = 0;
  TailedSequence t;
  TailedSequence u;
};

/// Geometric stability witnesses for s in J. Throws PreconditionError unless
/// membership(s, J) is In.
StabilityReport check_geometric_stability(const ScalarSequence& s, const IdealSpec& ideal,
                                          std::size_t count = 100000);

/// Nonincreasing rearrangement of the union of two finite sequences.
ScalarSequence merge_decreasing(const ScalarSequence& a, const ScalarSequence& b);

/// Least-squares fit n^a x_n = A (ln n)^b + B + C/n over the prefix indices in
/// [from, to]; returns {A, B, C}.
std::vector<double> fit_tail(const TailedSequence& x, double a, double b, std::size_t from,
                             std::size_t to);

}  // namespace commsum

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "commsum/ideals.hpp"
#include "commsum/spectral.hpp"

namespace commsum {

/// Singular value sequence of a candidate operator T in the criterion: a
/// nonincreasing base prefix b_1..b_L followed by the harmonic tail tau/m
/// (m > L), repeated `copies` times and multiplied by `scale`:
///   s_n(T) = scale * b_{ceil(n / copies)}.
/// Finite and harmonic tails are the shapes produced by the constructive
/// proofs, and they keep every threshold scan exact.
class Witness {
 public:
  /// Throws DomainError unless the base is nonnegative, nonincreasing and
  /// b_L >= tau/(L+1).
  explicit Witness(std::vector<double> base, double harmonic_tail = 0.0, std::size_t copies = 1,
                   double scale = 1.0);

  /// Finite lists and PowerLaw with a = 1. Other laws throw DomainError.
  static Witness from(const ScalarSequence& s);
  /// Zero tail or an exact harmonic tail (PowerTail a = 1, b = 0).
  static Witness from(const TailedSequence& s);

  std::span<const double> base() const noexcept { return base_; }
  double harmonic_tail() const noexcept { return tail_; }
  std::size_t copies() const noexcept { return copies_; }
  double scale() const noexcept { return scale_; }

  /// 1-based s_n.
  double value(std::size_t n) const;

  Witness scaled(double factor) const;
  /// Direct sum of k copies.
  Witness replicated(std::size_t k) const;

  /// Expanded prefix of copies * L values with the asymptotic tail.
  TailedSequence to_sequence() const;

 private:
  std::vector<double> base_;
  double tail_ = 0.0;
  std::size_t copies_ = 1;
  double scale_ = 1.0;
};

struct CheckOptions {
  /// Relative slack absorbing rounding in the eigenvalue sums.
  double tolerance = 1e-9;
  /// Minimum number of harmonic-tail breakpoints scanned exactly before the
  /// analytic bound takes over (condition 5).
  std::size_t tail_breakpoints = 1u << 16;
  /// Hard cap on exactly scanned tail breakpoints.
  std::size_t max_tail_breakpoints = 1u << 22;
};

struct ConditionCheck {
  bool holds = true;
  /// False when the scan could not rule out a violation beyond its cap.
  bool certified = true;
  /// Largest lhs/rhs seen; +inf when the rhs vanishes under a nonzero lhs.
  double worst_ratio = 0.0;
  std::optional<double> failing_alpha;
  std::size_t breakpoints = 0;
  /// Number of witness values examined explicitly.
  std::size_t witness_scale = 0;
  std::string note;
};

/// |chi(alpha lambda)| <= nu(alpha T) for every alpha > 0, decided on the
/// finitely many threshold intervals where both counts are constant.
ConditionCheck condition4_check(const EigenSequence& lambda, const Witness& t,
                                const CheckOptions& options = {});

/// |chi(alpha lambda)| <= mu(alpha T) for every alpha > 0. Between
/// breakpoints alpha |S| - mu(alpha T) is convex, so both one-sided limits at
/// each breakpoint decide the inequality; the far harmonic tail is bounded
/// analytically.
ConditionCheck condition5_check(const EigenSequence& lambda, const Witness& t,
                                const CheckOptions& options = {});

/// membership(sorted Cesaro sequence, J).
MembershipVerdict condition2(const EigenSequence& lambda, const IdealSpec& ideal);
MembershipVerdict condition2(const EigenLaw& law, const IdealSpec& ideal,
                             std::size_t count = 100000);

struct WitnessCheck {
  Witness witness{{}};
  bool holds = true;
  bool certified = true;
  /// max_n c_n / s_n(witness).
  double worst_ratio = 0.0;
  std::optional<std::size_t> failing_n;
};

/// c_n <= s_n(t) for every n, including the zero-padded tail |S_N|/n.
WitnessCheck condition3_check(const EigenSequence& lambda, const Witness& t,
                              double tolerance = 1e-9);

/// The max-envelope u of lambda as a witness for condition 3, with the check
/// c_n <= u_n attached.
WitnessCheck condition3_witness(const EigenSequence& lambda);

/// Four copies of max(u_n, |lambda_n|): the envelope raised to dominate the
/// moduli, then quadrupled.
Witness witness_3_to_4(const EigenSequence& lambda, const Witness& t);

/// factor * T with the check c_n <= factor * s_n(T). Throws
/// PreconditionError when condition 4 fails for (lambda, T) or s_n(T) < |lambda_n|.
WitnessCheck witness_4_to_3(const EigenSequence& lambda, const Witness& t, double factor = 2.0,
                            const CheckOptions& options = {});

/// (lambda, T) pair with condition 4 true but c_n > s_n(T) at n = size:
/// lambda = ((size-1) s, s, ..., s), T = ((size-1) s x (size-1), s x (size-1),
/// harmonic tail (2 size - 1) s / m). Needs size >= 3.
std::pair<EigenSequence, Witness> factor_two_control(std::size_t size, double s = 1.0);

enum class Verdict { InComJ, NotInComJ, UndecidedAtScale };
const char* to_string(Verdict v);

struct SplitReport {
  MembershipVerdict h;
  MembershipVerdict k;
  bool agrees = true;
  /// |chi(H) - Re chi(T)| and |chi(K) - Im chi(T)|.
  double deviation_re = 0.0;
  double deviation_im = 0.0;
  double mu_2abs = 0.0;
  double c2 = 0.0;
  bool within_bound = true;
};

struct CriterionReport {
  std::string ideal;
  MembershipVerdict condition2;
  TailedSequence cesaro;
  std::optional<WitnessCheck> condition3;
  std::optional<ConditionCheck> condition4;
  std::optional<ConditionCheck> condition5;
  std::optional<WitnessCheck> condition4_to_3;
  std::optional<SplitReport> split;
  Verdict verdict = Verdict::UndecidedAtScale;
  std::string note;
};

CriterionReport commutator_membership(const ComplexMatrix& m, const IdealSpec& ideal,
                                      const CheckOptions& options = {});
CriterionReport commutator_membership(const EigenSequence& lambda, const IdealSpec& ideal,
                                      const CheckOptions& options = {});
CriterionReport commutator_membership(const EigenLaw& law, const IdealSpec& ideal,
                                      std::size_t count = 100000);

}  // namespace commsum

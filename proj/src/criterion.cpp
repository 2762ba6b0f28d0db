#include "commsum/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "commsum/cutoffs.hpp"
#include "commsum/error.hpp"
#include "commsum/functionals.hpp"
#include "compensated.hpp"

namespace commsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nonzero eigenvalues sorted by exact modulus with cumulative sums, so that
// S_{>b} = sum of lambda with |lambda| > b is a binary search away.
class Levels {
 public:
  explicit Levels(const EigenSequence& lambda) {
    std::vector<Complex> values;
    for (const Complex z : lambda.values()) {
      if (z != Complex{}) values.push_back(z);
    }
    std::stable_sort(values.begin(), values.end(),
                     [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
    detail::CompensatedSum<Complex> sum;
    detail::CompensatedSum<double> mass;
    for (const Complex z : values) {
      sum.add(z);
      mass.add(std::abs(z));
      moduli_.push_back(std::abs(z));
      sums_.push_back(sum.value());
      masses_.push_back(mass.value());
    }
    total_zero_ = values.empty() || std::abs(sum.value()) <= total_sum_tolerance(lambda);
  }

  bool empty() const { return moduli_.empty(); }
  std::span<const double> moduli() const { return moduli_; }
  double min_modulus() const { return moduli_.back(); }
  /// |S_N| with the vanishing-trace snap.
  double total() const { return total_zero_ ? 0.0 : std::abs(sums_.back()); }

  std::size_t count(double b, bool strict) const {
    const auto it = strict ? std::partition_point(moduli_.begin(), moduli_.end(),
                                                  [b](double m) { return m > b; })
                           : std::partition_point(moduli_.begin(), moduli_.end(),
                                                  [b](double m) { return m >= b; });
    return static_cast<std::size_t>(it - moduli_.begin());
  }
  double sum_modulus(double b, bool strict) const {
    const std::size_t k = count(b, strict);
    if (k == moduli_.size()) return total();
    return k == 0 ? 0.0 : std::abs(sums_[k - 1]);
  }
  double mass(double b, bool strict) const {
    const std::size_t k = count(b, strict);
    return k == 0 ? 0.0 : masses_[k - 1];
  }

 private:
  std::vector<double> moduli_;
  std::vector<Complex> sums_;
  std::vector<double> masses_;
  bool total_zero_ = true;
};

// Threshold counts and log masses of a witness, in base-index units (one
// copy, scale applied).
class Profile {
 public:
  explicit Profile(const Witness& w)
      : tau_(w.harmonic_tail() * w.scale()), copies_(static_cast<double>(w.copies())) {
    double acc = 0.0;
    for (const double b : w.base()) {
      const double v = b * w.scale();
      if (v <= 0.0) break;
      values_.push_back(v);
      acc += std::log(v);
      log_cum_.push_back(acc);
    }
    length_ = w.base().size();
  }

  std::span<const double> values() const { return values_; }
  double tau() const { return tau_; }
  double copies() const { return copies_; }
  std::size_t length() const { return length_; }

  // Base indices with value > b; `tail_m` gives the exact count when b is the
  // tail breakpoint tau/m.
  double count_above(double b, std::optional<double> tail_m = std::nullopt) const {
    const auto p = static_cast<std::size_t>(
        std::partition_point(values_.begin(), values_.end(), [b](double v) { return v > b; }) -
        values_.begin());
    if (p < length_ || tau_ == 0.0) return static_cast<double>(p);
    return static_cast<double>(length_) + tail_count(b, tail_m);
  }

  // mu(T / b) per copy: sum over values v > b of log(v / b).
  double log_mass(double b, std::optional<double> tail_m = std::nullopt) const {
    const auto p = static_cast<std::size_t>(
        std::partition_point(values_.begin(), values_.end(), [b](double v) { return v > b; }) -
        values_.begin());
    double m = p == 0 ? 0.0 : log_cum_[p - 1] - static_cast<double>(p) * std::log(b);
    if (p == length_ && tau_ > 0.0) {
      const double k = tail_count(b, tail_m);
      if (k > 0.0) {
        const double l = static_cast<double>(length_);
        m += k * std::log(tau_ / b) - (std::lgamma(l + k + 1.0) - std::lgamma(l + 1.0));
      }
    }
    return m;
  }

  // Sum of log(v_j / tau) over the base plus log L!.
  double stirling_offset() const {
    const double l = static_cast<double>(length_);
    const double logs = values_.empty() ? 0.0 : log_cum_.back();
    return logs - l * std::log(tau_) + std::lgamma(l + 1.0);
  }

 private:
  // #{j > L : tau / j > b}.
  double tail_count(double b, std::optional<double> tail_m) const {
    const double l = static_cast<double>(length_);
    if (tail_m) return std::max(0.0, *tail_m - 1.0 - l);
    const double y = tau_ / b;
    if (!std::isfinite(y)) return kInf;
    if (y > 1e15) return std::max(0.0, std::floor(y) - l);
    double j = std::floor(y);
    while (j > l && !(tau_ / j > b)) j -= 1.0;
    while (tau_ / (j + 1.0) > b) j += 1.0;
    return std::max(0.0, j - l);
  }

  std::vector<double> values_;
  std::vector<double> log_cum_;
  std::size_t length_ = 0;
  double tau_;
  double copies_;
};

struct Candidate {
  double b;
  std::optional<double> tail_m;
};

void sort_candidates(std::vector<Candidate>& c) {
  std::sort(c.begin(), c.end(), [](const Candidate& x, const Candidate& y) { return x.b > y.b; });
}

void record(ConditionCheck& check, double lhs, double rhs, double slack, double b) {
  ++check.breakpoints;
  if (lhs <= slack) return;
  const double ratio = rhs > 0.0 ? lhs / rhs : kInf;
  check.worst_ratio = std::max(check.worst_ratio, ratio);
  if (lhs > rhs + slack && check.holds) {
    check.holds = false;
    check.failing_alpha = 1.0 / b;
  }
}

}  // namespace

Witness::Witness(std::vector<double> base, double harmonic_tail, std::size_t copies, double scale)
    : base_(std::move(base)), tail_(harmonic_tail), copies_(copies), scale_(scale) {
  if (copies_ == 0) throw DomainError("witness needs at least one copy");
  if (!(scale_ >= 0.0) || !std::isfinite(scale_)) throw DomainError("witness scale must be finite and >= 0");
  if (!(tail_ >= 0.0) || !std::isfinite(tail_)) throw DomainError("harmonic tail must be finite and >= 0");
  for (std::size_t i = 0; i < base_.size(); ++i) {
    if (!(base_[i] >= 0.0) || !std::isfinite(base_[i])) throw DomainError("witness values must be finite and >= 0");
    if (i > 0 && base_[i] > base_[i - 1]) throw DomainError("witness values must be nonincreasing");
  }
  const double next = tail_ / static_cast<double>(base_.size() + 1);
  if (!base_.empty() && base_.back() < next * (1.0 - 1e-12)) {
    throw DomainError("harmonic tail exceeds the last base value");
  }
}

Witness Witness::from(const ScalarSequence& s) {
  if (s.is_finite()) return Witness({s.finite_values().begin(), s.finite_values().end()});
  if (const auto* pw = std::get_if<PowerLaw>(&s.law()); pw && pw->a == 1.0) return Witness({}, pw->c);
  throw DomainError("witness must be a finite list or a harmonic law c/n");
}

Witness Witness::from(const TailedSequence& s) {
  std::vector<double> base(s.prefix().begin(), s.prefix().end());
  if (!s.nonincreasing()) std::sort(base.begin(), base.end(), std::greater<>());
  if (std::holds_alternative<ZeroTail>(s.tail())) return Witness(std::move(base));
  if (const auto* pt = std::get_if<PowerTail>(&s.tail()); pt && pt->exact && pt->a == 1.0 && pt->b == 0.0) {
    return Witness(std::move(base), pt->c);
  }
  throw DomainError("witness tail must be zero or exactly harmonic");
}

double Witness::value(std::size_t n) const {
  if (n == 0) throw DomainError("witness index must be >= 1");
  const std::size_t j = (n + copies_ - 1) / copies_;
  if (j <= base_.size()) return scale_ * base_[j - 1];
  return scale_ * tail_ / static_cast<double>(j);
}

Witness Witness::scaled(double factor) const { return Witness(base_, tail_, copies_, scale_ * factor); }

Witness Witness::replicated(std::size_t k) const { return Witness(base_, tail_, copies_ * k, scale_); }

TailedSequence Witness::to_sequence() const {
  std::vector<double> prefix;
  prefix.reserve(base_.size() * copies_);
  for (const double b : base_) prefix.insert(prefix.end(), copies_, scale_ * b);
  if (tail_ == 0.0 || scale_ == 0.0) return TailedSequence(std::move(prefix), ZeroTail{});
  const double c = scale_ * tail_ * static_cast<double>(copies_);
  return TailedSequence(std::move(prefix), PowerTail{c, 1.0, 0.0, copies_ == 1});
}

ConditionCheck condition4_check(const EigenSequence& lambda, const Witness& t,
                                const CheckOptions& options) {
  const Levels levels(lambda);
  const Profile profile(t);
  ConditionCheck check;
  check.witness_scale = t.base().size() * t.copies();
  if (levels.empty()) return check;

  // On (b_i, b_{i+1}] both counts are constant and x * N grows with x, so the
  // left limits at the breakpoints decide. Harmonic breakpoints inside one
  // block of constant lhs give copies * tau (m-1)/m, increasing in m: only the
  // first one per block matters.
  std::vector<Candidate> candidates;
  for (const double m : levels.moduli()) {
    candidates.push_back({m, std::nullopt});
    if (profile.tau() > 0.0) {
      const double first = std::max(static_cast<double>(profile.length()) + 1.0,
                                    std::floor(profile.tau() / m) + 1.0);
      candidates.push_back({profile.tau() / first, first});
    }
  }
  for (const double v : profile.values()) candidates.push_back({v, std::nullopt});
  sort_candidates(candidates);

  double upper = kInf;  // previous (larger) breakpoint
  for (const Candidate& c : candidates) {
    const double n_above = profile.copies() * profile.count_above(c.b, c.tail_m);
    const double lhs = levels.sum_modulus(c.b, true);
    const double rhs = c.b * n_above;
    const double slack = options.tolerance * (rhs + levels.mass(c.b, true));
    const bool was_holding = check.holds;
    record(check, lhs, rhs, slack, c.b);
    if (was_holding && !check.holds) {
      // The violation lives on (b, min(upper, lhs / N)) in x = 1/alpha; report its midpoint.
      double top = std::min(upper, n_above > 0.0 ? lhs / n_above : kInf);
      if (!std::isfinite(top)) top = 2.0 * c.b;
      check.failing_alpha = 2.0 / (c.b + top);
    }
    if (c.b < upper) upper = c.b;
  }

  // Below every breakpoint a finite witness gives x * N -> 0.
  if (profile.tau() == 0.0 && levels.total() > 0.0) {
    const double n_total = profile.copies() * profile.count_above(0.0);
    double x = levels.min_modulus();
    if (!profile.values().empty()) x = std::min(x, profile.values().back());
    x = 0.5 * std::min(x, levels.total() / std::max(n_total, 1.0));
    check.worst_ratio = kInf;
    if (check.holds) {
      check.holds = false;
      check.failing_alpha = 1.0 / x;
    }
    check.note = "finite witness against a nonzero total sum";
  }
  return check;
}

ConditionCheck condition5_check(const EigenSequence& lambda, const Witness& t,
                                const CheckOptions& options) {
  const Levels levels(lambda);
  const Profile profile(t);
  ConditionCheck check;
  check.witness_scale = t.base().size() * t.copies();
  if (levels.empty()) return check;

  auto evaluate = [&](double b, std::optional<double> tail_m) {
    const double lhs = std::max(levels.sum_modulus(b, true), levels.sum_modulus(b, false)) / b;
    const double rhs = profile.copies() * profile.log_mass(b, tail_m);
    const double slack = options.tolerance * (rhs + levels.mass(b, false) / b);
    record(check, lhs, rhs, slack, b);
    return lhs > rhs + slack;
  };

  std::vector<Candidate> candidates;
  for (const double m : levels.moduli()) candidates.push_back({m, std::nullopt});
  for (const double v : profile.values()) candidates.push_back({v, std::nullopt});

  const double l = static_cast<double>(profile.length());
  double m_end = l;
  if (profile.tau() > 0.0) {
    const double needed = std::ceil(profile.tau() / levels.min_modulus()) + 1.0;
    const double floor_count = l + static_cast<double>(options.tail_breakpoints);
    const double cap = l + static_cast<double>(options.max_tail_breakpoints);
    m_end = std::min(std::max(floor_count, needed), cap);
    for (double m = l + 1.0; m <= m_end; m += 1.0) candidates.push_back({profile.tau() / m, m});
  }
  sort_candidates(candidates);
  for (const Candidate& c : candidates) evaluate(c.b, c.tail_m);

  if (profile.tau() > 0.0) {
    // For x <= x0 = tau/m_end: |S_{>=x}| <= a_max, while
    // x mu(T/x) >= copies tau (1 + (D - 1 - log y)/y - 1/y^2) with y = tau/x.
    const double x0 = profile.tau() / m_end;
    const double a_max = levels.sum_modulus(x0, true) + (levels.mass(0.0, true) - levels.mass(x0, true));
    const double d = profile.stirling_offset();
    const double y_star = d > 700.0 ? kInf : std::max(m_end, std::exp(d));
    const double h = std::isfinite(y_star) ? (d - 1.0 - std::log(y_star)) / y_star : 0.0;
    const double bound = profile.copies() * profile.tau() * (1.0 + h - 1.0 / (m_end * m_end));
    if (a_max > bound + options.tolerance * (bound + a_max)) {
      // Either a genuine violation deep in the tail or a loose bound.
      const double s = levels.total();
      double y = m_end;
      bool found = false;
      for (int k = 0; k < 200 && s > 0.0; ++k, y *= 2.0) {
        if (evaluate(profile.tau() / y, std::nullopt)) {
          found = true;
          break;
        }
      }
      if (!found) {
        check.certified = false;
        check.note = "tail beyond the scanned breakpoints is not certified";
        if (s > profile.copies() * profile.tau()) {
          check.holds = false;
          check.worst_ratio = std::max(check.worst_ratio, s / (profile.copies() * profile.tau()));
        }
      }
    }
  } else if (levels.total() > 0.0) {
    // Finite witness: mu(alpha T) grows like log alpha against alpha |S|.
    double x = levels.min_modulus();
    if (!profile.values().empty()) x = std::min(x, profile.values().back());
    for (int k = 0; k < 4000; ++k) {
      x *= 0.5;
      if (evaluate(x, std::nullopt)) break;
    }
    check.note = "finite witness against a nonzero total sum";
  }
  return check;
}

MembershipVerdict condition2(const EigenSequence& lambda, const IdealSpec& ideal) {
  return membership(cesaro_sequence(lambda), ideal);
}

MembershipVerdict condition2(const EigenLaw& law, const IdealSpec& ideal, std::size_t count) {
  return membership(cesaro_sequence(law, count), ideal);
}

WitnessCheck condition3_check(const EigenSequence& lambda, const Witness& t, double tolerance) {
  WitnessCheck check;
  check.witness = t;
  // Same sums as the envelope, so c <= u holds exactly for the envelope witness.
  const TailedSequence cesaro = cesaro_sequence(lambda);
  const auto* harmonic = std::get_if<PowerTail>(&cesaro.tail());
  const double total = harmonic ? harmonic->c : 0.0;
  const std::size_t n_terms = lambda.size();
  const std::size_t copies = t.copies();
  const std::size_t explicit_n = std::max(n_terms, copies * (t.base().size() + 1)) + copies;

  double mass = 0.0;
  auto test = [&](std::size_t n) {
    if (n <= n_terms) mass += std::abs(lambda.at(n));
    const double x = static_cast<double>(n);
    const double c = n <= n_terms ? cesaro.prefix()[n - 1] : total / x;
    const double w = t.value(n);
    const double slack = tolerance * (w + mass / x);
    if (c <= slack) return;
    check.worst_ratio = std::max(check.worst_ratio, w > 0.0 ? c / w : kInf);
    if (c > w + slack && check.holds) {
      check.holds = false;
      check.failing_n = n;
    }
  };
  for (std::size_t n = 1; n <= explicit_n; ++n) test(n);
  if (!check.holds || total == 0.0) return check;

  // Past explicit_n: c_n = |S|/n and s_n = tau'/ceil(n/k) >= k tau'/(n + k - 1).
  const double tau = t.harmonic_tail() * t.scale();
  const double k = static_cast<double>(copies);
  const double n1 = static_cast<double>(explicit_n + 1);
  const bool sufficient = copies == 1 ? total <= tau * (1.0 + tolerance)
                                      : n1 * (k * tau - total) >= total * (k - 1.0) * (1.0 - tolerance);
  if (total > k * tau) check.worst_ratio = std::max(check.worst_ratio, total / (k * tau));
  if (sufficient) return check;
  for (std::size_t n = explicit_n + 1; n <= explicit_n + 1000000 && check.holds; ++n) test(n);
  if (check.holds) check.certified = false;
  return check;
}

WitnessCheck condition3_witness(const EigenSequence& lambda) {
  return condition3_check(lambda, Witness::from(max_envelope(lambda)));
}

Witness witness_3_to_4(const EigenSequence& lambda, const Witness& t) {
  if (t.copies() != 1) throw DomainError("witness_3_to_4 expects a single-copy witness");
  const std::size_t length = std::max(lambda.size(), t.base().size());
  std::vector<double> base(length);
  double suffix = 0.0;
  for (std::size_t n = length; n >= 1; --n) {
    suffix = std::max(suffix, std::abs(lambda.at(n)));
    base[n - 1] = std::max(t.value(n), suffix);
  }
  return Witness(std::move(base), t.harmonic_tail() * t.scale(), 4, 1.0);
}

WitnessCheck witness_4_to_3(const EigenSequence& lambda, const Witness& t, double factor,
                            const CheckOptions& options) {
  const ConditionCheck c4 = condition4_check(lambda, t, options);
  if (!c4.holds) {
    throw PreconditionError("condition 4 fails for the given witness at alpha = " +
                            std::to_string(c4.failing_alpha.value_or(kInf)));
  }
  for (std::size_t n = 1; n <= lambda.size(); ++n) {
    const double m = std::abs(lambda.at(n));
    if (t.value(n) < m * (1.0 - options.tolerance)) {
      throw PreconditionError("witness value below |lambda_n| at n = " + std::to_string(n));
    }
  }
  return condition3_check(lambda, t.scaled(factor), options.tolerance);
}

std::pair<EigenSequence, Witness> factor_two_control(std::size_t size, double s) {
  if (size < 3) throw DomainError("factor-two control needs size >= 3");
  if (!(s > 0.0)) throw DomainError("factor-two control needs s > 0");
  const double big = static_cast<double>(size - 1) * s;
  std::vector<Complex> lambda(size, Complex(s, 0.0));
  lambda[0] = Complex(big, 0.0);
  std::vector<double> base(size - 1, big);
  base.insert(base.end(), size - 1, s);
  const double tau = static_cast<double>(2 * size - 1) * s;
  return {EigenSequence(std::move(lambda)), Witness(std::move(base), tau)};
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::InComJ:
      return "InComJ";
    case Verdict::NotInComJ:
      return "NotInComJ";
    case Verdict::UndecidedAtScale:
      return "UndecidedAtScale";
  }
  return "UndecidedAtScale";
}

namespace {

void set_verdict(CriterionReport& report, const IdealSpec& ideal) {
  if (!ideal.geometrically_stable()) {
    report.verdict = Verdict::UndecidedAtScale;
    report.note = std::string("condition (2) is ") + to_string(report.condition2.status) +
                  ", but the ideal is not geometrically stable, so (2) does not decide Com J";
    return;
  }
  switch (report.condition2.status) {
    case MembershipStatus::In:
      report.verdict = Verdict::InComJ;
      break;
    case MembershipStatus::Out:
      report.verdict = Verdict::NotInComJ;
      break;
    case MembershipStatus::UndecidedAtScale:
      report.verdict = Verdict::UndecidedAtScale;
      break;
  }
}

}  // namespace

CriterionReport commutator_membership(const EigenSequence& lambda, const IdealSpec& ideal,
                                      const CheckOptions& options) {
  CriterionReport report;
  report.ideal = ideal.to_string();
  report.cesaro = cesaro_sequence(lambda);
  report.condition2 = membership(report.cesaro, ideal);

  const WitnessCheck c3 = condition3_witness(lambda);
  const Witness w4 = witness_3_to_4(lambda, c3.witness);
  report.condition3 = c3;
  report.condition4 = condition4_check(lambda, w4, options);
  report.condition5 = condition5_check(lambda, w4.scaled(std::numbers::e), options);
  if (report.condition4->holds) {
    report.condition4_to_3 = witness_4_to_3(lambda, w4, 2.0, options);
  }
  set_verdict(report, ideal);
  return report;
}

CriterionReport commutator_membership(const ComplexMatrix& m, const IdealSpec& ideal,
                                      const CheckOptions& options) {
  const EigenSequence lambda = eigenvalue_sequence(m);
  CriterionReport report = commutator_membership(lambda, ideal, options);

  const HermitianSplit split = hermitian_split(m);
  const EigenSequence lh = eigenvalue_sequence(split.h);
  const EigenSequence lk = eigenvalue_sequence(split.k);
  SplitReport sr;
  sr.h = condition2(lh, ideal);
  sr.k = condition2(lk, ideal);
  const bool any_undecided = sr.h.status == MembershipStatus::UndecidedAtScale ||
                             sr.k.status == MembershipStatus::UndecidedAtScale ||
                             report.condition2.status == MembershipStatus::UndecidedAtScale;
  const bool joint = report.condition2.status == MembershipStatus::In;
  const bool parts = sr.h.status == MembershipStatus::In && sr.k.status == MembershipStatus::In;
  sr.agrees = any_undecided || joint == parts;

  const Complex chi_t = chi(lambda);
  sr.deviation_re = std::abs(chi(lh).real() - chi_t.real());
  sr.deviation_im = std::abs(chi(lk).real() - chi_t.imag());
  const ScalarSequence s = singular_sequence(m);
  for (const double v : s.finite_values()) {
    if (2.0 * v > 1.0) sr.mu_2abs += std::log(2.0 * v);
  }
  sr.c2 = commutator_constant(CutoffPair::canonical().c1);
  const double bound = sr.c2 * sr.mu_2abs;
  const double slack = 1e-8 * (1.0 + bound);
  sr.within_bound = sr.deviation_re <= bound + slack && sr.deviation_im <= bound + slack;
  report.split = sr;
  return report;
}

CriterionReport commutator_membership(const EigenLaw& law, const IdealSpec& ideal, std::size_t count) {
  CriterionReport report;
  report.ideal = ideal.to_string();
  report.cesaro = cesaro_sequence(law, count);
  report.condition2 = membership(report.cesaro, ideal);
  set_verdict(report, ideal);
  if (report.note.empty()) report.note = "witness checks need a finite spectrum; symbolic input decided by condition (2)";
  return report;
}

}  // namespace commsum

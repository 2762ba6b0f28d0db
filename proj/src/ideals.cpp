#include "commsum/ideals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/special_functions/zeta.hpp>

#include "commsum/error.hpp"
#include "compensated.hpp"

namespace commsum {

namespace {

using detail::CompensatedSum;

constexpr double kExponentEps = 1e-12;

bool exponent_equal(double x, double y) { return std::abs(x - y) <= kExponentEps * std::max(1.0, std::abs(y)); }

// Least-squares slope of log s_n against log n over the second half of the
// nonzero prefix.
std::pair<double, double> fit_decay_exponent(std::span<const double> prefix) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t n = prefix.size() / 2 + 1; n <= prefix.size(); ++n) {
    if (prefix[n - 1] > 0.0) {
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(prefix[n - 1]));
    }
  }
  const std::size_t m = xs.size();
  if (m < 3) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(m);
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  const double slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ys[i] - my - slope * (xs[i] - mx);
    sse += r * r;
  }
  const double stderr_slope = std::sqrt(sse / static_cast<double>(m - 2) / sxx);
  return {-slope, stderr_slope};
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TailedSequence::TailedSequence(std::vector<double> prefix, Tail tail, bool nonincreasing)
    : prefix_(std::move(prefix)), tail_(std::move(tail)), nonincreasing_(nonincreasing) {}

TailedSequence TailedSequence::from(const ScalarSequence& s) {
  return std::visit(
      [](const auto& law) -> TailedSequence {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, FiniteValues>) {
          return TailedSequence(law.values, ZeroTail{});
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return TailedSequence({}, PowerTail{law.c, law.a, 0.0, true});
        } else {
          return TailedSequence({}, GeometricTail{law.c, law.q, true});
        }
      },
      s.law());
}

double TailedSequence::value(std::size_t n) const {
  if (n == 0) throw DomainError("sequence index must be >= 1");
  if (n <= prefix_.size()) return prefix_[n - 1];
  const double x = static_cast<double>(n);
  return std::visit(
      [x](const auto& tail) -> double {
        using T = std::decay_t<decltype(tail)>;
        if constexpr (std::is_same_v<T, ZeroTail>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, PowerTail>) {
          const double log_factor = tail.b == 0.0 ? 1.0 : std::pow(std::log(x), tail.b);
          return tail.c * std::pow(x, -tail.a) * log_factor;
        } else if constexpr (std::is_same_v<T, GeometricTail>) {
          return tail.c * std::pow(tail.q, x);
        } else {
          return std::numeric_limits<double>::quiet_NaN();
        }
      },
      tail_);
}

TailedSequence TailedSequence::sorted() const {
  std::vector<double> p = prefix_;
  std::sort(p.begin(), p.end(), std::greater<>());
  return TailedSequence(std::move(p), tail_, true);
}

IdealSpec IdealSpec::schatten(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("Schatten exponent must be finite and > 0");
  IdealSpec j;
  j.family_ = Family::Schatten;
  j.p_ = p;
  j.name_ = "schatten";
  return j;
}

IdealSpec IdealSpec::weak_lp(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("weak-l_p exponent must be finite and > 0");
  IdealSpec j;
  j.family_ = Family::WeakLp;
  j.p_ = p;
  j.name_ = "weaklp";
  return j;
}

IdealSpec IdealSpec::custom(std::string name, Predicate predicate, bool geometrically_stable) {
  if (!predicate) throw DomainError("custom ideal needs a predicate");
  IdealSpec j;
  j.family_ = Family::Custom;
  j.p_ = std::numeric_limits<double>::quiet_NaN();
  j.name_ = std::move(name);
  j.predicate_ = std::move(predicate);
  j.stable_ = geometrically_stable;
  return j;
}

IdealSpec IdealSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("ideal", "expected <family>:p=<value>, got '" + text + "'");
  const std::string family = text.substr(0, colon);
  const std::string params = text.substr(colon + 1);
  if (params.rfind("p=", 0) != 0) throw ParseError("ideal", "expected p=<value> after '" + family + ":'");
  const std::string number = params.substr(2);
  char* end = nullptr;
  const double p = std::strtod(number.c_str(), &end);
  if (number.empty() || end != number.c_str() + number.size()) {
    throw ParseError("ideal", "cannot parse exponent '" + number + "'");
  }
  try {
    if (family == "schatten") return schatten(p);
    if (family == "weaklp") return weak_lp(p);
  } catch (const DomainError& e) {
    throw ParseError("ideal", e.what());
  }
  throw ParseError("ideal", "unknown ideal family '" + family + "'");
}

double IdealSpec::r_norm_exponent() const {
  switch (family_) {
    case Family::Schatten:
      return std::min(p_, 1.0);
    case Family::WeakLp:
      return std::min(p_, 1.0) / 2.0;
    case Family::Custom:
      return 1.0;
  }
  return 1.0;
}

std::string IdealSpec::to_string() const {
  if (family_ == Family::Custom) return "custom:" + name_;
  return name_ + ":p=" + format_number(p_);
}

const char* to_string(MembershipStatus s) {
  switch (s) {
    case MembershipStatus::In:
      return "In";
    case MembershipStatus::Out:
      return "Out";
    case MembershipStatus::UndecidedAtScale:
      return "UndecidedAtScale";
  }
  return "UndecidedAtScale";
}

MembershipVerdict membership(const TailedSequence& input, const IdealSpec& ideal) {
  const TailedSequence s = input.nonincreasing() ? input : input.sorted();
  MembershipVerdict v;
  v.scale = s.prefix().size();

  if (ideal.family() == IdealSpec::Family::Custom) {
    const std::optional<bool> answer = ideal.predicate()(s);
    if (answer) {
      v.status = *answer ? MembershipStatus::In : MembershipStatus::Out;
    } else {
      v.note = "custom predicate gave no answer";
    }
    return v;
  }

  const double p = ideal.p();
  const bool schatten = ideal.family() == IdealSpec::Family::Schatten;
  if (schatten) {
    CompensatedSum<double> sum;
    for (const double x : s.prefix()) sum.add(std::pow(x, p));
    v.evidence["partialSum"] = sum.value();
  } else {
    double sup = 0.0;
    for (std::size_t n = 1; n <= s.prefix().size(); ++n) {
      sup = std::max(sup, std::pow(static_cast<double>(n), 1.0 / p) * s.prefix()[n - 1]);
    }
    v.evidence["partialSup"] = sup;
  }
  v.evidence["criticalExponent"] = 1.0 / p;

  std::visit(
      [&](const auto& tail) {
        using T = std::decay_t<decltype(tail)>;
        if constexpr (std::is_same_v<T, ZeroTail>) {
          v.status = MembershipStatus::In;
          v.note = "zero tail";
        } else if constexpr (std::is_same_v<T, PowerTail>) {
          v.evidence["tailCoefficient"] = tail.c;
          v.evidence["tailExponent"] = tail.a;
          v.evidence["tailLogPower"] = tail.b;
          if (tail.c == 0.0) {
            v.status = MembershipStatus::In;
            v.note = "zero tail";
            return;
          }
          bool in = false;
          if (schatten) {
            const double x = tail.a * p;
            if (exponent_equal(x, 1.0)) {
              in = tail.b * p < -1.0 - kExponentEps;
            } else {
              in = x > 1.0;
            }
            v.note = in ? "sum of c^p n^(-ap) (ln n)^(bp) converges" : "sum of c^p n^(-ap) (ln n)^(bp) diverges";
          } else {
            if (exponent_equal(tail.a, 1.0 / p)) {
              in = tail.b <= 0.0;
            } else {
              in = tail.a > 1.0 / p;
            }
            v.note = in ? "n^(1/p) s_n bounded" : "n^(1/p) s_n unbounded";
          }
          v.status = in ? MembershipStatus::In : MembershipStatus::Out;
        } else if constexpr (std::is_same_v<T, GeometricTail>) {
          v.evidence["tailRatio"] = tail.q;
          v.status = MembershipStatus::In;
          v.note = "geometric decay";
        } else {
          const auto [exponent, err] = fit_decay_exponent(s.prefix());
          v.evidence["fittedExponent"] = exponent;
          v.evidence["fittedExponentStdErr"] = err;
          v.status = MembershipStatus::UndecidedAtScale;
          v.note = "tail unknown past the prefix";
        }
      },
      s.tail());
  return v;
}

MembershipVerdict membership(const ScalarSequence& s, const IdealSpec& ideal) {
  return membership(TailedSequence::from(s), ideal);
}

double EigenLaw::value(std::size_t n) const {
  const double x = static_cast<double>(n);
  const double magnitude = kind == Kind::Power ? c * std::pow(x, -rate) : c * std::pow(rate, x);
  return (alternating && n % 2 == 0) ? -magnitude : magnitude;
}

ScalarSequence EigenLaw::moduli() const {
  return kind == Kind::Power ? ScalarSequence::power(c, rate) : ScalarSequence::geometric(c, rate);
}

void EigenLaw::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("eigenvalue law needs c > 0");
  if (kind == Kind::Power && !(rate > 0.0 && std::isfinite(rate))) {
    throw DomainError("power eigenvalue law needs a > 0");
  }
  if (kind == Kind::Geometric && !(rate > 0.0 && rate < 1.0)) {
    throw DomainError("geometric eigenvalue law needs 0 < q < 1");
  }
}

double total_sum_tolerance(const EigenSequence& lambda) {
  double mass = 0.0;
  for (const Complex z : lambda.values()) mass += std::abs(z);
  return 64.0 * std::numeric_limits<double>::epsilon() *
         static_cast<double>(std::max<std::size_t>(1, lambda.size())) * mass;
}

TailedSequence cesaro_sequence(const EigenSequence& lambda) {
  std::vector<double> c(lambda.size());
  CompensatedSum<Complex> sum;
  for (std::size_t n = 1; n <= lambda.size(); ++n) {
    sum.add(lambda.at(n));
    c[n - 1] = std::abs(sum.value()) / static_cast<double>(n);
  }
  const double total = std::abs(sum.value());
  if (total <= total_sum_tolerance(lambda)) return TailedSequence(std::move(c), ZeroTail{}, false);
  return TailedSequence(std::move(c), PowerTail{total, 1.0, 0.0, true}, false);
}

TailedSequence cesaro_sequence(const EigenLaw& law, std::size_t count) {
  law.validate();
  std::vector<double> c(count);
  CompensatedSum<double> sum;
  for (std::size_t n = 1; n <= count; ++n) {
    sum.add(law.value(n));
    c[n - 1] = std::abs(sum.value()) / static_cast<double>(n);
  }
  PowerTail tail;
  if (law.kind == EigenLaw::Kind::Power) {
    const double a = law.rate;
    if (law.alternating) {
      const double eta = exponent_equal(a, 1.0) ? std::numbers::ln2
                                                : (1.0 - std::pow(2.0, 1.0 - a)) * boost::math::zeta(a);
      tail = {law.c * eta, 1.0, 0.0, false};
    } else if (exponent_equal(a, 1.0)) {
      tail = {law.c, 1.0, 1.0, false};
    } else if (a < 1.0) {
      tail = {law.c / (1.0 - a), a, 0.0, false};
    } else {
      tail = {law.c * boost::math::zeta(a), 1.0, 0.0, false};
    }
  } else {
    const double q = law.rate;
    const double limit = law.alternating ? law.c * q / (1.0 + q) : law.c * q / (1.0 - q);
    tail = {limit, 1.0, 0.0, false};
  }
  return TailedSequence(std::move(c), tail, false);
}

TailedSequence max_envelope(const EigenSequence& lambda) {
  const TailedSequence c = cesaro_sequence(lambda);
  const std::size_t n_terms = c.prefix().size();
  double total = 0.0;
  Tail tail = ZeroTail{};
  if (const auto* harmonic = std::get_if<PowerTail>(&c.tail())) {
    total = harmonic->c;
    tail = *harmonic;
  }
  std::vector<double> u(n_terms);
  double running = total / static_cast<double>(n_terms + 1);
  for (std::size_t n = n_terms; n >= 1; --n) {
    running = std::max(running, c.prefix()[n - 1]);
    u[n - 1] = running;
  }
  return TailedSequence(std::move(u), tail, true);
}

TailedSequence geometric_mean_seq(const ScalarSequence& s, std::size_t count) {
  return std::visit(
      [&](const auto& law) -> TailedSequence {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, FiniteValues>) {
          std::vector<double> t(law.values.size());
          double log_sum = 0.0;
          bool hit_zero = false;
          for (std::size_t n = 1; n <= law.values.size(); ++n) {
            const double v = law.values[n - 1];
            if (v == 0.0) hit_zero = true;
            if (hit_zero) {
              t[n - 1] = 0.0;
              continue;
            }
            log_sum += std::log(v);
            double tn = std::exp(log_sum / static_cast<double>(n));
            if (n > 1) tn = std::min(tn, t[n - 2]);
            t[n - 1] = std::max(tn, v);
          }
          return TailedSequence(std::move(t), ZeroTail{});
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          std::vector<double> t(count);
          for (std::size_t n = 1; n <= count; ++n) {
            const double x = static_cast<double>(n);
            double tn = law.c * std::exp(-law.a * std::lgamma(x + 1.0) / x);
            if (n > 1) tn = std::min(tn, t[n - 2]);
            t[n - 1] = std::max(tn, law.c * std::pow(x, -law.a));
          }
          return TailedSequence(std::move(t), PowerTail{law.c * std::exp(law.a), law.a, 0.0, false});
        } else {
          std::vector<double> t(count);
          for (std::size_t n = 1; n <= count; ++n) {
            t[n - 1] = law.c * std::pow(law.q, (static_cast<double>(n) + 1.0) / 2.0);
          }
          const double root = std::sqrt(law.q);
          return TailedSequence(std::move(t), GeometricTail{law.c * root, root, true});
        }
      },
      s.law());
}

TailedSequence dyadic_series_envelope(const ScalarSequence& s, double theta, std::size_t count) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("dyadic envelope needs theta > 0");
  const std::size_t n_terms = s.is_finite() ? s.finite_values().size() : count;
  const std::vector<double> values = s.is_finite() ? std::vector<double>(s.finite_values().begin(), s.finite_values().end())
                                                   : s.prefix(n_terms);
  // s_r with the fractional-index convention, read from the cached prefix.
  auto at = [&values](double r) {
    const double fl = std::floor(r);
    const double idx = (fl == r) ? r : fl + 1.0;
    if (idx > static_cast<double>(values.size())) return 0.0;
    return values[static_cast<std::size_t>(idx) - 1];
  };
  const double s1 = values.empty() ? 0.0 : values.front();
  const double ratio = std::exp2(-theta);
  std::vector<double> u(n_terms);
  for (std::size_t n = 1; n <= n_terms; ++n) {
    double sum = 0.0;
    double weight = 1.0;
    double r = static_cast<double>(n);
    while (r >= 1.0) {
      sum += weight * at(r);
      weight *= ratio;
      r *= 0.5;
    }
    sum += s1 * weight / (1.0 - ratio);
    u[n - 1] = sum;
  }
  // Leading asymptotics: the slower of n^-theta and the decay of s.
  Tail tail = PowerTail{0.0, theta, 0.0, false};
  if (const auto* pw = std::get_if<PowerLaw>(&s.law())) {
    if (exponent_equal(pw->a, theta)) {
      tail = PowerTail{0.0, theta, 1.0, false};
    } else {
      tail = PowerTail{0.0, std::min(pw->a, theta), 0.0, false};
    }
  }
  if (s1 == 0.0) tail = ZeroTail{};
  if (auto* pt = std::get_if<PowerTail>(&tail); pt && n_terms > 1) {
    const double x = static_cast<double>(n_terms);
    const double log_factor = pt->b == 0.0 ? 1.0 : std::pow(std::log(x), pt->b);
    pt->c = u.back() * std::pow(x, pt->a) / log_factor;
  }
  return TailedSequence(std::move(u), tail);
}

StabilityReport check_geometric_stability(const ScalarSequence& s, const IdealSpec& ideal,
                                          std::size_t count) {
  StabilityReport report;
  report.input = membership(s, ideal);
  if (report.input.status != MembershipStatus::In) {
    throw PreconditionError("geometric stability check needs diag(s) in " + ideal.to_string());
  }
  report.r = ideal.r_norm_exponent();
  report.theta = 2.0 / report.r;
  report.t = geometric_mean_seq(s, count);
  report.u = dyadic_series_envelope(s, report.theta, count);
  report.geometric_means = membership(report.t, ideal);
  report.proof_constant_limit = std::pow(2.0 * std::numbers::e, report.theta);

  const std::size_t n_terms = std::min(report.t.prefix().size(), report.u.prefix().size());
  report.scale = n_terms;
  for (std::size_t n = 1; n <= n_terms; ++n) {
    const double x = static_cast<double>(n);
    const double factor =
        std::exp(report.theta * (std::numbers::ln2 + std::log(x) - std::lgamma(x + 1.0) / x));
    report.proof_constant = std::max(report.proof_constant, factor);
    const double t = report.t.prefix()[n - 1];
    const double u = report.u.prefix()[n - 1];
    if (u > 0.0) report.empirical_constant = std::max(report.empirical_constant, t / u);
    if (t > factor * u * (1.0 + 1e-12)) {
      report.proof_bound_holds = false;
      ++report.proof_bound_failures;
    }
  }
  return report;
}

ScalarSequence merge_decreasing(const ScalarSequence& a, const ScalarSequence& b) {
  if (!a.is_finite() || !b.is_finite()) {
    throw DomainError("merge_decreasing needs finite sequences");
  }
  std::vector<double> out;
  out.reserve(a.finite_values().size() + b.finite_values().size());
  std::merge(a.finite_values().begin(), a.finite_values().end(), b.finite_values().begin(),
             b.finite_values().end(), std::back_inserter(out), std::greater<>());
  return ScalarSequence::finite(std::move(out));
}

std::vector<double> fit_tail(const TailedSequence& x, double a, double b, std::size_t from,
                             std::size_t to) {
  to = std::min(to, x.prefix().size());
  if (from < 1 || from >= to) throw DomainError("fit_tail needs 1 <= from < to <= prefix length");
  const bool with_log = b != 0.0;
  const Eigen::Index cols = with_log ? 3 : 2;
  const std::size_t stride = std::max<std::size_t>(1, (to - from + 1) / 20000);
  std::vector<std::size_t> rows;
  for (std::size_t n = from; n <= to; n += stride) rows.push_back(n);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(rows.size()), cols);
  Eigen::VectorXd target(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double n = static_cast<double>(rows[i]);
    const auto r = static_cast<Eigen::Index>(i);
    Eigen::Index col = 0;
    if (with_log) design(r, col++) = std::pow(std::log(n), b);
    design(r, col++) = 1.0;
    design(r, col) = 1.0 / n;
    target(r) = std::pow(n, a) * x.prefix()[rows[i] - 1];
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(target);
  if (with_log) return {coef(0), coef(1), coef(2)};
  return {coef(0), 0.0, coef(1)};
}

}  // namespace commsum

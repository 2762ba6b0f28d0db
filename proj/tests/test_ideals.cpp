#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "commsum/error.hpp"
#include "commsum/ideals.hpp"
#include "oracles/sequence_oracle.hpp"

using namespace commsum;

namespace {

std::vector<Complex> random_values(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = Complex(nd(rng), nd(rng)) / std::sqrt(static_cast<double>(k + 1));
  return v;
}

}  // namespace

TEST_CASE("ideal spec strings") {
  const IdealSpec s = IdealSpec::parse("schatten:p=1");
  CHECK(s.family() == IdealSpec::Family::Schatten);
  CHECK(s.p() == 1.0);
  CHECK(IdealSpec::parse("weaklp:p=0.5").family() == IdealSpec::Family::WeakLp);
  CHECK(IdealSpec::parse(s.to_string()).p() == 1.0);
  CHECK_THROWS_AS(IdealSpec::parse("schatten"), ParseError);
  CHECK_THROWS_AS(IdealSpec::parse("schatten:q=1"), ParseError);
  CHECK_THROWS_AS(IdealSpec::parse("schatten:p=abc"), ParseError);
  CHECK_THROWS_AS(IdealSpec::parse("lorentz:p=1"), ParseError);
  CHECK_THROWS_AS(IdealSpec::parse("schatten:p=-1"), ParseError);
  CHECK(IdealSpec::schatten(2).r_norm_exponent() == 1.0);
  CHECK(IdealSpec::schatten(0.5).r_norm_exponent() == 0.5);
}

TEST_CASE("Schatten membership of power tails") {
  const IdealSpec s1 = IdealSpec::schatten(1);
  CHECK(membership(ScalarSequence::power(1, 1), s1).status == MembershipStatus::Out);
  CHECK(membership(ScalarSequence::power(1, 1.01), s1).status == MembershipStatus::In);
  CHECK(membership(ScalarSequence::power(1, 0.6), IdealSpec::schatten(2)).status == MembershipStatus::In);
  CHECK(membership(ScalarSequence::power(1, 0.5), IdealSpec::schatten(2)).status == MembershipStatus::Out);
  CHECK(membership(ScalarSequence::geometric(5, 0.9), IdealSpec::schatten(0.1)).status == MembershipStatus::In);
  // Boundary with a log factor: n^-1 (ln n)^b is trace class iff b < -1.
  const TailedSequence log2({1.0}, PowerTail{1, 1, -2, false});
  const TailedSequence log1({1.0}, PowerTail{1, 1, -1, false});
  CHECK(membership(log2, s1).status == MembershipStatus::In);
  CHECK(membership(log1, s1).status == MembershipStatus::Out);
}

TEST_CASE("weak-lp membership") {
  const IdealSpec w1 = IdealSpec::weak_lp(1);
  CHECK(membership(ScalarSequence::power(1, 1), w1).status == MembershipStatus::In);
  CHECK(membership(ScalarSequence::power(1, 0.9), w1).status == MembershipStatus::Out);
  const TailedSequence harmonic_log({1.0}, PowerTail{1, 1, 1, false});
  CHECK(membership(harmonic_log, w1).status == MembershipStatus::Out);
}

TEST_CASE("finite and unknown tails") {
  CHECK(membership(ScalarSequence::finite({3, 2, 1}), IdealSpec::schatten(0.1)).status == MembershipStatus::In);
  std::vector<double> prefix(2000);
  for (std::size_t n = 1; n <= prefix.size(); ++n) prefix[n - 1] = std::pow(static_cast<double>(n), -0.75);
  const MembershipVerdict v = membership(TailedSequence(prefix, UnknownTail{}), IdealSpec::schatten(1));
  CHECK(v.status == MembershipStatus::UndecidedAtScale);
  CHECK(v.evidence.at("fittedExponent") == doctest::Approx(0.75).epsilon(1e-3));
  CHECK(v.evidence.count("fittedExponentStdErr") == 1);
}

TEST_CASE("custom predicate ideal") {
  const IdealSpec finite_rank = IdealSpec::custom(
      "finite-rank",
      [](const TailedSequence& s) -> std::optional<bool> {
        return std::holds_alternative<ZeroTail>(s.tail());
      },
      false);
  CHECK(membership(ScalarSequence::finite({1}), finite_rank).status == MembershipStatus::In);
  CHECK(membership(ScalarSequence::power(1, 2), finite_rank).status == MembershipStatus::Out);
  CHECK_FALSE(finite_rank.geometrically_stable());
}

TEST_CASE("Cesaro means and envelope against direct sums") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial;
    std::vector<Complex> v = random_values(rng, n);
    const EigenSequence lambda(v);
    const std::vector<Complex> sorted(lambda.values().begin(), lambda.values().end());
    const TailedSequence c = cesaro_sequence(lambda);
    const TailedSequence u = max_envelope(lambda);
    const std::size_t horizon = 20 * n + 50;
    const std::vector<double> c_ref = oracle::cesaro(sorted, horizon);
    const std::vector<double> u_ref = oracle::envelope(sorted, horizon);
    for (std::size_t k = 1; k <= horizon; ++k) {
      CHECK(c.value(k) == doctest::Approx(c_ref[k - 1]).epsilon(1e-12).scale(1e-12));
      // The explicit horizon misses nothing: the tail |S|/m is decreasing.
      CHECK(u.value(k) == doctest::Approx(u_ref[k - 1]).epsilon(1e-12).scale(1e-12));
      CHECK(c.value(k) <= u.value(k));
    }
  }
}

TEST_CASE("vanishing total snaps to a zero tail") {
  const EigenSequence lambda({1.0, Complex(0.1, 0.3), Complex(-1.1, -0.3)});
  const TailedSequence c = cesaro_sequence(lambda);
  CHECK(std::holds_alternative<ZeroTail>(c.tail()));
  CHECK(c.value(10) == 0.0);
  const EigenSequence nonzero({1.0});
  const auto* tail = std::get_if<PowerTail>(&cesaro_sequence(nonzero).tail());
  REQUIRE(tail != nullptr);
  CHECK(tail->exact);
  CHECK(cesaro_sequence(nonzero).value(8) == 0.125);
}

TEST_CASE("law Cesaro tails") {
  EigenLaw alt{EigenLaw::Kind::Power, 1.0, 1.0, true};
  const TailedSequence c = cesaro_sequence(alt, 1000);
  const auto* tail = std::get_if<PowerTail>(&c.tail());
  REQUIRE(tail != nullptr);
  CHECK(tail->c == doctest::Approx(std::numbers::ln2));
  CHECK(tail->a == 1.0);
  CHECK(c.value(1) == 1.0);
  CHECK(c.value(2) == 0.25);

  EigenLaw harmonic{EigenLaw::Kind::Power, 2.0, 1.0, false};
  const auto* ht = std::get_if<PowerTail>(&cesaro_sequence(harmonic, 10).tail());
  REQUIRE(ht != nullptr);
  CHECK(ht->b == 1.0);
  CHECK(ht->c == 2.0);

  EigenLaw slow{EigenLaw::Kind::Power, 1.0, 0.5, false};
  const auto* st = std::get_if<PowerTail>(&cesaro_sequence(slow, 10).tail());
  REQUIRE(st != nullptr);
  CHECK(st->c == doctest::Approx(2.0));
  CHECK(st->a == 0.5);

  EigenLaw fast{EigenLaw::Kind::Power, 1.0, 2.0, false};
  const auto* ft = std::get_if<PowerTail>(&cesaro_sequence(fast, 10).tail());
  REQUIRE(ft != nullptr);
  CHECK(ft->c == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0));

  EigenLaw geo{EigenLaw::Kind::Geometric, 1.0, 0.5, true};
  const auto* gt = std::get_if<PowerTail>(&cesaro_sequence(geo, 10).tail());
  REQUIRE(gt != nullptr);
  CHECK(gt->c == doctest::Approx(0.5 / 1.5));

  CHECK_THROWS_AS((EigenLaw{EigenLaw::Kind::Geometric, 1.0, 1.5, false}.validate()), DomainError);
  CHECK_THROWS_AS((EigenLaw{EigenLaw::Kind::Power, -1.0, 1.0, false}.validate()), DomainError);
}

TEST_CASE("geometric means against plain products") {
  const std::vector<double> s = {9, 7, 7, 4, 2, 1.5, 1, 0.25, 0.1};
  const TailedSequence t = geometric_mean_seq(ScalarSequence::finite(s));
  const std::vector<double> ref = oracle::geometric_means(s);
  for (std::size_t n = 1; n <= s.size(); ++n) CHECK(t.value(n) == doctest::Approx(ref[n - 1]).epsilon(1e-14));

  const TailedSequence tp = geometric_mean_seq(ScalarSequence::power(2.0, 1.5), 60);
  std::vector<double> sp(60);
  for (std::size_t n = 1; n <= 60; ++n) sp[n - 1] = 2.0 * std::pow(static_cast<double>(n), -1.5);
  const std::vector<double> rp = oracle::geometric_means(sp);
  for (std::size_t n = 1; n <= 60; ++n) CHECK(tp.value(n) == doctest::Approx(rp[n - 1]).epsilon(1e-12));

  const TailedSequence tg = geometric_mean_seq(ScalarSequence::geometric(3.0, 0.7), 40);
  for (std::size_t n = 1; n <= 40; ++n) CHECK(tg.value(n) == doctest::Approx(3.0 * std::pow(0.7, (n + 1) / 2.0)));
}

TEST_CASE("dyadic envelope against a long direct sum") {
  const ScalarSequence s = ScalarSequence::power(1.0, 0.8);
  const TailedSequence u = dyadic_series_envelope(s, 2.0, 500);
  auto at = [&s](std::size_t i) { return s.value(i); };
  for (std::size_t n : {1u, 2u, 3u, 7u, 64u, 100u, 499u}) {
    CHECK(u.value(n) == doctest::Approx(oracle::dyadic(at, n, 2.0)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(dyadic_series_envelope(s, 0.0, 10), DomainError);
}

TEST_CASE("geometric stability of Schatten sequences") {
  for (const double p : {0.5, 1.0, 2.0}) {
    const IdealSpec ideal = IdealSpec::schatten(p);
    const StabilityReport r = check_geometric_stability(ScalarSequence::power(1.0, 1.0 / p + 0.3), ideal, 20000);
    CHECK(r.theta == doctest::Approx(2.0 / std::min(p, 1.0)));
    CHECK(r.proof_bound_holds);
    CHECK(r.geometric_means.status == MembershipStatus::In);
    CHECK(r.empirical_constant <= r.proof_constant);
    CHECK(r.proof_constant <= r.proof_constant_limit * (1 + 1e-12));
  }
  CHECK_THROWS_AS(check_geometric_stability(ScalarSequence::power(1, 1), IdealSpec::schatten(1), 100), PreconditionError);
}

TEST_CASE("merge and tail fit") {
  const ScalarSequence m = merge_decreasing(ScalarSequence::finite({5, 3, 1}), ScalarSequence::finite({4, 2}));
  CHECK(m.prefix(5) == std::vector<double>{5, 4, 3, 2, 1});

  std::vector<double> x(5000);
  for (std::size_t n = 1; n <= x.size(); ++n) {
    const double d = static_cast<double>(n);
    x[n - 1] = (0.7 * std::log(d) + 0.2 + 3.0 / d) / d;
  }
  const std::vector<double> coef = fit_tail(TailedSequence(x, UnknownTail{}), 1.0, 1.0, 10, 5000);
  CHECK(coef[0] == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(coef[1] == doctest::Approx(0.2).epsilon(1e-8));
  CHECK(coef[2] == doctest::Approx(3.0).epsilon(1e-6));
}

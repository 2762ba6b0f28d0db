#include <doctest.h>

#include <cstdlib>

#include "commsum/error.hpp"
#include "commsum/functionals.hpp"
#include "commsum/verify.hpp"

using namespace commsum;

namespace {

SuiteConfig small(const std::string& suite, std::size_t trials) {
  SuiteConfig c;
  c.suite = suite;
  c.trials = trials;
  c.max_dim = 6;
  c.seed = 99;
  c.nodes = 128;
  c.terms = 5000;
  return c;
}

std::size_t trials_for(const std::string& suite) {
  if (suite.starts_with("lemma2_1_3") || suite.starts_with("prop3_2")) return 8;
  if (suite.starts_with("lemma2_6")) return 20;
  return 300;
}

}  // namespace

TEST_CASE("ensembles have their shapes") {
  std::mt19937_64 rng(1);
  CHECK(gen_matrix(Ensemble::Hermitian, 5, rng).is_hermitian());
  const ComplexMatrix nil = gen_matrix(Ensemble::Nilpotent, 5, rng);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c <= r; ++c) CHECK(nil(r, c) == Complex(0, 0));
  const ComplexMatrix d = gen_matrix(Ensemble::NormalDiagonal, 6, rng);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(std::abs(std::abs(d(i, i)) - 1.0) >= 1e-6);
    CHECK(std::abs(std::abs(d(i, i).real()) - 1.0) >= 1e-6);
  }
  const ComplexMatrix u = random_unitary(5, rng);
  CHECK(frobenius_norm(u.adjoint() * u - ComplexMatrix::identity(5)) < 1e-12);
  CHECK(gen_matrix(Ensemble::Jordan, 4, rng).dim() == 4);
  CHECK_THROWS_AS(gen_matrix(Ensemble::General, 0, rng), DomainError);
}

TEST_CASE("seeded generation is reproducible") {
  for (int k = 0; k < 6; ++k) {
    const auto e = static_cast<Ensemble>(k);
    CHECK(fingerprint(gen_matrix(e, 4, 7)) == fingerprint(gen_matrix(e, 4, 7)));
    CHECK(fingerprint(gen_matrix(e, 4, 7)) != fingerprint(gen_matrix(e, 4, 8)));
    CHECK(parse_ensemble(to_string(e)) == e);
  }
  CHECK_THROWS_AS(parse_ensemble("gaussian"), DomainError);
  auto a = trial_rng(3, 4);
  auto b = trial_rng(3, 4);
  auto c = trial_rng(3, 5);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
}

TEST_CASE("every suite is clean and every mutant is caught") {
  for (const std::string& name : suite_names()) {
    CAPTURE(name);
    const SuiteReport r = run_suite(small(name, trials_for(name)));
    CHECK(r.trials == trials_for(name));
    if (name.ends_with("_mutant")) {
      CHECK(r.violation_count >= 1);
      CHECK(r.worst_slack > r.tolerance);
      CHECK_FALSE(r.violations.empty());
    } else {
      CHECK(r.violation_count == 0);
      CHECK(r.worst_slack <= r.tolerance);
      CHECK(r.informative * 2 > r.trials);
    }
  }
}

TEST_CASE("reports do not depend on the thread count") {
  const SuiteConfig c = small("lemma2_3", 200);
  setenv("COMMSUM_THREADS", "1", 1);
  const SuiteReport one = run_suite(c);
  setenv("COMMSUM_THREADS", "4", 1);
  const SuiteReport four = run_suite(c);
  unsetenv("COMMSUM_THREADS");
  CHECK(one.worst_slack == four.worst_slack);
  CHECK(one.informative == four.informative);
  CHECK(one.empirical_constants == four.empirical_constants);
}

TEST_CASE("tolerances and configuration errors") {
  CHECK(default_tolerance("weyl_horn") == 1e-8);
  CHECK(default_tolerance("lemma2_6_mutant") == 1e-6);
  CHECK_THROWS_AS(run_suite(small("nope", 1)), DomainError);
  CHECK_THROWS_AS(run_suite(small("weyl_horn", 0)), DomainError);
  SuiteConfig c = small("weyl_horn", 5);
  c.tolerance = -1.0;
  CHECK_THROWS_AS(run_suite(c), DomainError);
  // A generous tolerance silences a mutant.
  SuiteConfig loose = small("lemma2_3_mutant", 50);
  loose.tolerance = 1e6;
  CHECK(run_suite(loose).violation_count == 0);
}

TEST_CASE("thm2_7 reports C2 and the observed ratio") {
  const SuiteReport r = run_suite(small("thm2_7", 200));
  CHECK(r.empirical_constants.at("c2") == doctest::Approx(commutator_constant(r.empirical_constants.at("c1"))));
  CHECK(r.empirical_constants.at("maxDeviationOverMu") < r.empirical_constants.at("c2"));
  CHECK(estimate_constant("lemma2_4_2", small("", 100)) <= 1.0 + 1e-8);
}

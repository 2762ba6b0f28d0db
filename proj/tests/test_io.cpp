#include <doctest.h>

#include <json.hpp>

#include "commsum/error.hpp"
#include "commsum/io.hpp"

using namespace commsum;
using nlohmann::json;

TEST_CASE("doubles print with 17 significant digits and round-trip") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(std::nan("")) == "null");
  for (const double x : {1.0 / 3.0, 2.0e-300, 123456789.123456789, -0.0}) {
    CHECK(std::stod(io::format_double(x)) == x);
  }
}

TEST_CASE("json writer escapes and nests") {
  io::Json j = io::Json::object();
  io::Json arr = io::Json::array();
  arr.push(1).push(Complex(1, -2)).push("a\"b");
  j.set("x", std::move(arr)).set("ok", true).set("none", nullptr).set("inf", std::numeric_limits<double>::infinity());
  const json back = json::parse(j.dump());
  CHECK(back["x"][1][1] == -2);
  CHECK(back["x"][2] == "a\"b");
  CHECK(back["ok"] == true);
  CHECK(back["none"].is_null());
  CHECK(back["inf"].is_null());
}

TEST_CASE("matrix documents") {
  const ComplexMatrix m = io::parse_matrix(R"({"n": 2, "entries": [[1, 0], [0, 2], 3, [4, -1]]})");
  CHECK(m(0, 1) == Complex(0, 2));
  CHECK(m(1, 0) == Complex(3, 0));
  CHECK(m(1, 1) == Complex(4, -1));
}

TEST_CASE("parse errors name the line or the field") {
  try {
    io::parse_matrix("{\n  \"n\": 2,\n  \"entries\": [1, 2,\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.where().starts_with("line 4"));
  }
  CHECK_THROWS_WITH_AS(io::parse_matrix(R"({"n": 2, "entries": [1, 2, 3]})"), doctest::Contains("entries"), ParseError);
  CHECK_THROWS_WITH_AS(io::parse_matrix(R"({"n": 1, "entries": [[1, "x"]]})"), doctest::Contains("entries[0][1]"), ParseError);
  CHECK_THROWS_WITH_AS(io::parse_matrix(R"({"entries": []})"), doctest::Contains("n: missing"), ParseError);
  CHECK_THROWS_AS(io::parse_matrix(R"({"schema": "commsum/0", "n": 1, "entries": [1]})"), ParseError);
  CHECK_THROWS_AS(io::parse_sequence(R"({"kind": "finite", "values": [1, 2]})"), ParseError);
  CHECK_THROWS_AS(io::parse_sequence(R"({"kind": "zeta"})"), ParseError);
  CHECK_THROWS_AS(io::parse_criterion_input(R"({"kind": "geometric", "c": 1, "q": 2})"), ParseError);
  CHECK_THROWS_AS(io::parse_criterion_input(R"({"kind": "power", "c": 1, "a": 1, "alternating": 1})"), ParseError);
}

TEST_CASE("sequence and criterion inputs") {
  const ScalarSequence s = io::parse_sequence(R"({"kind": "power", "c": 2, "a": 1.5})");
  CHECK(s.value(4) == doctest::Approx(0.25));
  const auto lam = io::parse_criterion_input(R"({"kind": "finite", "values": [1, [0, 2]]})");
  REQUIRE(std::holds_alternative<EigenSequence>(lam));
  CHECK(std::get<EigenSequence>(lam).at(1) == Complex(0, 2));
  const auto law = io::parse_criterion_input(R"({"kind": "power", "c": 1, "a": 1, "alternating": true})");
  REQUIRE(std::holds_alternative<EigenLaw>(law));
  CHECK(std::get<EigenLaw>(law).alternating);
  const auto mat = io::parse_criterion_input(R"({"n": 1, "entries": [[5, 0]]})");
  CHECK(std::holds_alternative<ComplexMatrix>(mat));
}

TEST_CASE("emitted documents carry the schema and re-parse") {
  const EigenSequence lambda({3.0, Complex(0, -2), 1.0});
  const json spec = json::parse(io::spectrum_document(lambda, ScalarSequence::finite({3, 2, 1})).dump());
  CHECK(spec["schema"] == io::kSchema);
  CHECK(spec["values"][1][1] == -2);

  const CriterionReport rep = commutator_membership(lambda, IdealSpec::schatten(1));
  const json crit = json::parse(io::criterion_document(rep).dump());
  CHECK(crit["schema"] == io::kSchema);
  CHECK(crit["verdict"] == "NotInComJ");
  CHECK(crit["cesaro"]["tail"]["model"] == "power");

  SuiteConfig c;
  c.suite = "lemma2_2";
  c.trials = 10;
  const json suite = json::parse(io::suite_document(run_suite(c)).dump());
  CHECK(suite["schema"] == io::kSchema);
  CHECK(suite["violationCount"] == 0);
}

TEST_CASE("tables") {
  const io::CriterionInput in = EigenSequence({2.0});
  const std::string table = io::criterion_table(in, 0);
  CHECK(table == "n,c_n,u_n\n1,2,2\n2,1,1\n");
  const io::CriterionInput law = EigenLaw{EigenLaw::Kind::Geometric, 1.0, 0.5, false};
  const std::string lt = io::criterion_table(law, 3);
  CHECK(lt.starts_with("n,c_n,u_n\n1,0.5,0.5\n2,0.375,0.375\n"));
}

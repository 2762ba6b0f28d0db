#include "commsum/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commsum/error.hpp"

namespace commsum::io {

namespace {

using nlohmann::json;

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

void write_string(std::string& out, const std::string& s) {
  out += '"';
  for (const char ch : s) {
    switch (ch) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(ch));
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    const auto colon = what.rfind(": ");
    if (colon != std::string::npos) what = what.substr(colon + 2);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column), what);
  }
}

void check_schema(const json& doc) {
  if (!doc.is_object()) throw ParseError("document", "expected a JSON object");
  if (const auto it = doc.find("schema"); it != doc.end()) {
    if (!it->is_string() || it->get<std::string>() != kSchema) {
      throw ParseError("schema", std::string("unsupported schema, expected \"") + kSchema + "\"");
    }
  }
}

const json& field(const json& obj, const std::string& key, const std::string& path = "") {
  const std::string where = path.empty() ? key : path + "." + key;
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where, "missing field");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where, "expected a number");
  return j.get<double>();
}

Complex complex_value(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
  throw ParseError(where, "expected a number or an [re, im] pair");
}

std::string kind_of(const json& doc) {
  const json& k = field(doc, "kind");
  if (!k.is_string()) throw ParseError("kind", "expected a string");
  return k.get<std::string>();
}

ComplexMatrix matrix_from(const json& doc) {
  const json& n_field = field(doc, "n");
  if (!n_field.is_number_integer() || n_field.get<std::int64_t>() < 1) {
    throw ParseError("n", "expected a positive integer");
  }
  const auto n = n_field.get<std::size_t>();
  const json& entries = field(doc, "entries");
  if (!entries.is_array()) throw ParseError("entries", "expected an array");
  if (entries.size() != n * n) {
    throw ParseError("entries", "expected " + std::to_string(n * n) + " entries, found " +
                                    std::to_string(entries.size()));
  }
  std::vector<Complex> values;
  values.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    values.push_back(complex_value(entries[i], "entries[" + std::to_string(i) + "]"));
  }
  return ComplexMatrix(n, values);
}

template <typename F>
auto as_parse_error(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ParseError(where, e.what());
  }
}

std::string csv_row(std::initializer_list<double> values, std::size_t n) {
  std::string row = std::to_string(n);
  for (const double v : values) {
    row += ',';
    row += format_double(v);
  }
  row += '\n';
  return row;
}

Json tail_json(const Tail& tail) {
  return std::visit(
      [](const auto& t) -> Json {
        using T = std::decay_t<decltype(t)>;
        Json j = Json::object();
        if constexpr (std::is_same_v<T, ZeroTail>) {
          j.set("model", "zero");
        } else if constexpr (std::is_same_v<T, PowerTail>) {
          j.set("model", "power").set("c", t.c).set("a", t.a).set("b", t.b).set("exact", t.exact);
        } else if constexpr (std::is_same_v<T, GeometricTail>) {
          j.set("model", "geometric").set("c", t.c).set("q", t.q).set("exact", t.exact);
        } else {
          j.set("model", "unknown");
        }
        return j;
      },
      tail);
}

Json document(const char* kind) {
  Json j = Json::object();
  j.set("schema", kSchema).set("kind", kind);
  return j;
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json& Json::set(std::string key, Json value) {
  std::get<Object>(v_).emplace_back(std::move(key), std::move(value));
  return *this;
}

Json& Json::push(Json value) {
  std::get<Array>(v_).push_back(std::move(value));
  return *this;
}

std::string Json::dump() const {
  std::string out;
  write(out, 0);
  out += '\n';
  return out;
}

void Json::write(std::string& out, int depth) const {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::nullptr_t>) {
          out += "null";
        } else if constexpr (std::is_same_v<T, bool>) {
          out += v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t> || std::is_same_v<T, std::uint64_t>) {
          out += std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          out += format_double(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          write_string(out, v);
        } else if constexpr (std::is_same_v<T, Array>) {
          // Arrays of scalars stay on one line.
          const bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) {
            return !std::holds_alternative<Object>(e.v_) &&
                   !(std::holds_alternative<Array>(e.v_) && std::get<Array>(e.v_).size() > 2);
          });
          out += '[';
          for (std::size_t i = 0; i < v.size(); ++i) {
            if (i > 0) out += flat ? ", " : ",";
            if (!flat) {
              out += '\n';
              indent(out, depth + 1);
            }
            v[i].write(out, depth + 1);
          }
          if (!flat && !v.empty()) {
            out += '\n';
            indent(out, depth);
          }
          out += ']';
        } else {
          out += '{';
          for (std::size_t i = 0; i < v.size(); ++i) {
            if (i > 0) out += ',';
            out += '\n';
            indent(out, depth + 1);
            write_string(out, v[i].first);
            out += ": ";
            v[i].second.write(out, depth + 1);
          }
          if (!v.empty()) {
            out += '\n';
            indent(out, depth);
          }
          out += '}';
        }
      },
      v_);
}

ComplexMatrix parse_matrix(const std::string& text) {
  const json doc = parse_document(text);
  check_schema(doc);
  return as_parse_error("entries", [&] { return matrix_from(doc); });
}

ScalarSequence parse_sequence(const std::string& text) {
  const json doc = parse_document(text);
  check_schema(doc);
  const std::string kind = kind_of(doc);
  if (kind == "finite") {
    const json& values = field(doc, "values");
    if (!values.is_array()) throw ParseError("values", "expected an array");
    std::vector<double> v;
    for (std::size_t i = 0; i < values.size(); ++i) {
      v.push_back(number(values[i], "values[" + std::to_string(i) + "]"));
    }
    return as_parse_error("values", [&] { return ScalarSequence::finite(std::move(v)); });
  }
  if (kind == "power") {
    const double c = number(field(doc, "c"), "c");
    const double a = number(field(doc, "a"), "a");
    return as_parse_error("kind", [&] { return ScalarSequence::power(c, a); });
  }
  if (kind == "geometric") {
    const double c = number(field(doc, "c"), "c");
    const double q = number(field(doc, "q"), "q");
    return as_parse_error("kind", [&] { return ScalarSequence::geometric(c, q); });
  }
  throw ParseError("kind", "expected \"finite\", \"power\" or \"geometric\", found \"" + kind + "\"");
}

CriterionInput parse_criterion_input(const std::string& text) {
  const json doc = parse_document(text);
  check_schema(doc);
  if (doc.contains("entries")) return as_parse_error("entries", [&] { return matrix_from(doc); });
  const std::string kind = kind_of(doc);
  if (kind == "finite") {
    const json& values = field(doc, "values");
    if (!values.is_array()) throw ParseError("values", "expected an array");
    std::vector<Complex> v;
    for (std::size_t i = 0; i < values.size(); ++i) {
      v.push_back(complex_value(values[i], "values[" + std::to_string(i) + "]"));
      if (!std::isfinite(v.back().real()) || !std::isfinite(v.back().imag())) {
        throw ParseError("values[" + std::to_string(i) + "]", "value is not finite");
      }
    }
    return EigenSequence(std::move(v));
  }
  EigenLaw law;
  if (kind == "power") {
    law.kind = EigenLaw::Kind::Power;
    law.rate = number(field(doc, "a"), "a");
  } else if (kind == "geometric") {
    law.kind = EigenLaw::Kind::Geometric;
    law.rate = number(field(doc, "q"), "q");
  } else {
    throw ParseError("kind", "expected \"finite\", \"power\" or \"geometric\", found \"" + kind + "\"");
  }
  law.c = number(field(doc, "c"), "c");
  if (const auto it = doc.find("alternating"); it != doc.end()) {
    if (!it->is_boolean()) throw ParseError("alternating", "expected true or false");
    law.alternating = it->get<bool>();
  }
  as_parse_error("kind", [&] {
    law.validate();
    return 0;
  });
  return law;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write to '" + path + "' failed");
}

Json to_json(const EigenSequence& lambda) {
  Json values = Json::array();
  for (const Complex z : lambda.values()) values.push(z);
  return values;
}

Json to_json(const ScalarSequence& s) {
  return std::visit(
      [](const auto& law) -> Json {
        using T = std::decay_t<decltype(law)>;
        Json j = Json::object();
        if constexpr (std::is_same_v<T, FiniteValues>) {
          Json values = Json::array();
          for (const double v : law.values) values.push(v);
          j.set("kind", "finite").set("values", std::move(values));
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          j.set("kind", "power").set("c", law.c).set("a", law.a);
        } else {
          j.set("kind", "geometric").set("c", law.c).set("q", law.q);
        }
        return j;
      },
      s.law());
}

Json to_json(const TailedSequence& s, std::size_t head) {
  Json values = Json::array();
  const auto prefix = s.prefix();
  for (std::size_t i = 0; i < std::min(head, prefix.size()); ++i) values.push(prefix[i]);
  Json j = Json::object();
  j.set("length", static_cast<std::uint64_t>(prefix.size()))
      .set("nonincreasing", s.nonincreasing())
      .set("head", std::move(values))
      .set("tail", tail_json(s.tail()));
  return j;
}

Json to_json(const MembershipVerdict& v) {
  Json evidence = Json::object();
  for (const auto& [key, value] : v.evidence) evidence.set(key, value);
  Json j = Json::object();
  j.set("status", to_string(v.status))
      .set("scale", static_cast<std::uint64_t>(v.scale))
      .set("evidence", std::move(evidence))
      .set("note", v.note);
  return j;
}

Json to_json(const ConditionCheck& c) {
  Json j = Json::object();
  j.set("holds", c.holds)
      .set("certified", c.certified)
      .set("worstRatio", c.worst_ratio)
      .set("failingAlpha", c.failing_alpha ? Json(*c.failing_alpha) : Json())
      .set("breakpoints", static_cast<std::uint64_t>(c.breakpoints))
      .set("witnessScale", static_cast<std::uint64_t>(c.witness_scale))
      .set("note", c.note);
  return j;
}

Json to_json(const Witness& w) {
  Json base = Json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(16, w.base().size()); ++i) base.push(w.base()[i]);
  Json j = Json::object();
  j.set("copies", static_cast<std::uint64_t>(w.copies()))
      .set("scale", w.scale())
      .set("harmonicTail", w.harmonic_tail())
      .set("baseLength", static_cast<std::uint64_t>(w.base().size()))
      .set("baseHead", std::move(base));
  return j;
}

Json to_json(const WitnessCheck& c) {
  Json j = Json::object();
  j.set("holds", c.holds)
      .set("certified", c.certified)
      .set("worstRatio", c.worst_ratio)
      .set("failingN", c.failing_n ? Json(static_cast<std::uint64_t>(*c.failing_n)) : Json())
      .set("witness", to_json(c.witness));
  return j;
}

Json spectrum_document(const EigenSequence& lambda, const ScalarSequence& singular) {
  Json sv = Json::array();
  for (const double v : singular.finite_values()) sv.push(v);
  Json j = document("spectrum");
  j.set("n", static_cast<std::uint64_t>(lambda.size())).set("values", to_json(lambda)).set("singularValues", std::move(sv));
  return j;
}

Json functional_document(const FunctionalReport& report) {
  Json j = document("functional");
  j.set("nu", static_cast<std::uint64_t>(report.nu))
      .set("mu", report.mu)
      .set("chi", report.chi)
      .set("chiPhi", report.chi_phi);
  return j;
}

Json cutoff_document(const CutoffPair& pair, const LaplacianScan& scan) {
  Json j = document("cutoff-report");
  j.set("c1", pair.c1)
      .set("psi(1)", pair.psi(1.0))
      .set("psiSlope", pair.psi.slope())
      .set("c2", commutator_constant(pair.c1))
      .set("minLaplacian", scan.min_laplacian)
      .set("argmin", scan.argmin)
      .set("gridPoints", static_cast<std::uint64_t>(scan.points));
  return j;
}

Json criterion_document(const CriterionReport& report) {
  Json j = document("criterion");
  j.set("ideal", report.ideal)
      .set("verdict", to_string(report.verdict))
      .set("note", report.note)
      .set("condition2", to_json(report.condition2))
      .set("cesaro", to_json(report.cesaro));
  if (report.condition3) j.set("condition3", to_json(*report.condition3));
  if (report.condition4) j.set("condition4", to_json(*report.condition4));
  if (report.condition5) j.set("condition5", to_json(*report.condition5));
  if (report.condition4_to_3) j.set("condition4To3", to_json(*report.condition4_to_3));
  if (report.split) {
    const SplitReport& s = *report.split;
    Json split = Json::object();
    split.set("h", to_json(s.h))
        .set("k", to_json(s.k))
        .set("agrees", s.agrees)
        .set("deviationRe", s.deviation_re)
        .set("deviationIm", s.deviation_im)
        .set("mu2Abs", s.mu_2abs)
        .set("c2", s.c2)
        .set("withinBound", s.within_bound);
    j.set("split", std::move(split));
  }
  return j;
}

Json stability_document(const StabilityReport& report) {
  Json j = document("stability");
  j.set("input", to_json(report.input))
      .set("geometricMeans", to_json(report.geometric_means))
      .set("r", report.r)
      .set("theta", report.theta)
      .set("scale", static_cast<std::uint64_t>(report.scale))
      .set("empiricalConstant", report.empirical_constant)
      .set("proofConstant", report.proof_constant)
      .set("proofConstantLimit", report.proof_constant_limit)
      .set("proofBoundHolds", report.proof_bound_holds)
      .set("proofBoundFailures", static_cast<std::uint64_t>(report.proof_bound_failures))
      .set("t", to_json(report.t))
      .set("u", to_json(report.u));
  return j;
}

Json suite_document(const SuiteReport& report) {
  Json constants = Json::object();
  for (const auto& [key, value] : report.empirical_constants) constants.set(key, value);
  Json violations = Json::array();
  for (const Violation& v : report.violations) {
    Json entry = Json::object();
    entry.set("trial", static_cast<std::uint64_t>(v.trial))
        .set("fingerprint", v.fingerprint)
        .set("lhs", v.lhs)
        .set("rhs", v.rhs)
        .set("slack", v.slack);
    violations.push(std::move(entry));
  }
  Json j = document("verify");
  j.set("suite", report.suite)
      .set("trials", static_cast<std::uint64_t>(report.trials))
      .set("maxDim", static_cast<std::uint64_t>(report.max_dim))
      .set("seed", report.seed)
      .set("tolerance", report.tolerance)
      .set("informative", static_cast<std::uint64_t>(report.informative))
      .set("violationCount", static_cast<std::uint64_t>(report.violation_count))
      .set("worstSlack", report.worst_slack)
      .set("empiricalConstants", std::move(constants))
      .set("violations", std::move(violations));
  return j;
}

std::string criterion_table(const CriterionInput& input, std::size_t terms) {
  std::string out = "n,c_n,u_n\n";
  if (const auto* law = std::get_if<EigenLaw>(&input)) {
    const TailedSequence c = cesaro_sequence(*law, terms);
    const auto prefix = c.prefix();
    std::vector<double> u(prefix.size());
    double running = c.value(prefix.size() + 1);
    if (!std::isfinite(running)) running = 0.0;
    for (std::size_t n = prefix.size(); n >= 1; --n) {
      running = std::max(running, prefix[n - 1]);
      u[n - 1] = running;
    }
    for (std::size_t n = 1; n <= prefix.size(); ++n) out += csv_row({prefix[n - 1], u[n - 1]}, n);
    return out;
  }
  const EigenSequence lambda = std::holds_alternative<ComplexMatrix>(input)
                                   ? eigenvalue_sequence(std::get<ComplexMatrix>(input))
                                   : std::get<EigenSequence>(input);
  const TailedSequence c = cesaro_sequence(lambda);
  const TailedSequence u = max_envelope(lambda);
  // One row past the stored values shows the harmonic tail.
  for (std::size_t n = 1; n <= lambda.size() + 1; ++n) out += csv_row({c.value(n), u.value(n)}, n);
  return out;
}

std::string stability_table(const ScalarSequence& s, const StabilityReport& report) {
  std::string out = "n,s_n,t_n,u_n\n";
  const std::size_t rows = std::min(report.t.prefix().size(), report.u.prefix().size());
  for (std::size_t n = 1; n <= rows; ++n) {
    out += csv_row({s.value(n), report.t.prefix()[n - 1], report.u.prefix()[n - 1]}, n);
  }
  return out;
}

}  // namespace commsum::io

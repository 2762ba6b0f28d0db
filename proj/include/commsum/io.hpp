#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "commsum/criterion.hpp"
#include "commsum/cutoffs.hpp"
#include "commsum/functionals.hpp"
#include "commsum/ideals.hpp"
#include "commsum/spectral.hpp"
#include "commsum/verify.hpp"

namespace commsum::io {

/// Embedded in every emitted document as "schema".
inline constexpr const char* kSchema = "commsum/1";

/// Ordered JSON tree for output. Doubles print with 17 significant digits,
/// non-finite doubles as null.
class Json {
 public:
  using Array = std::vector<Json>;
  using Object = std::vector<std::pair<std::string, Json>>;

  Json() = default;
  Json(std::nullptr_t) {}
  Json(bool b) : v_(b) {}
  Json(int i) : v_(static_cast<std::int64_t>(i)) {}
  Json(std::int64_t i) : v_(i) {}
  Json(std::uint64_t u) : v_(u) {}
  Json(unsigned long long u) : v_(static_cast<std::uint64_t>(u)) {}
  Json(double d) : v_(d) {}
  Json(Complex z) : v_(Array{Json(z.real()), Json(z.imag())}) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}
  Json(Array a) : v_(std::move(a)) {}

  static Json object() { Json j; j.v_ = Object{}; return j; }
  static Json array() { Json j; j.v_ = Array{}; return j; }

  /// Appends a member (objects) and returns *this.
  Json& set(std::string key, Json value);
  /// Appends an element (arrays).
  Json& push(Json value);

  /// Two-space indented document with a trailing newline.
  std::string dump() const;

 private:
  void write(std::string& out, int depth) const;
  std::variant<std::nullptr_t, bool, std::int64_t, std::uint64_t, double, std::string, Array, Object> v_;
};

/// "%.17g"; "null" for non-finite values.
std::string format_double(double x);

// Parsing. Every function throws ParseError naming the line (syntax errors)
// or the field path (shape errors).

ComplexMatrix parse_matrix(const std::string& text);
/// Real nonnegative sequence: finite values, power (c, a) or geometric (c, q).
ScalarSequence parse_sequence(const std::string& text);

/// Input of the criterion command: a matrix, a finite eigenvalue list
/// (numbers or [re, im] pairs) or an eigenvalue law with optional
/// "alternating".
using CriterionInput = std::variant<ComplexMatrix, EigenSequence, EigenLaw>;
CriterionInput parse_criterion_input(const std::string& text);

/// Throws ParseError naming the file when it cannot be read.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Serializers. The top-level documents carry "schema" and "kind".

Json to_json(const EigenSequence& lambda);
Json to_json(const ScalarSequence& s);
/// Length, the first `head` values and the tail model.
Json to_json(const TailedSequence& s, std::size_t head = 16);
Json to_json(const MembershipVerdict& v);
Json to_json(const ConditionCheck& c);
Json to_json(const WitnessCheck& c);
Json to_json(const Witness& w);

Json spectrum_document(const EigenSequence& lambda, const ScalarSequence& singular);
Json functional_document(const FunctionalReport& report);
Json cutoff_document(const CutoffPair& pair, const LaplacianScan& scan);
Json criterion_document(const CriterionReport& report);
Json stability_document(const StabilityReport& report);
Json suite_document(const SuiteReport& report);

/// CSV n,c_n,u_n. Finite inputs list the stored prefix plus one tail row;
/// laws list the computed prefix with u_n as the running max from the right.
std::string criterion_table(const CriterionInput& input, std::size_t terms);
/// CSV n,s_n,t_n,u_n over the examined prefix.
std::string stability_table(const ScalarSequence& s, const StabilityReport& report);

}  // namespace commsum::io

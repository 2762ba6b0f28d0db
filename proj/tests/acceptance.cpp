// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "commsum/criterion.hpp"
#include "commsum/cutoffs.hpp"
#include "commsum/functionals.hpp"
#include "commsum/ideals.hpp"
#include "commsum/io.hpp"
#include "commsum/verify.hpp"

using namespace commsum;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("%s %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Timed {
  SuiteReport report;
  double seconds;
};

Timed timed_suite(const std::string& suite, std::size_t trials, std::size_t max_dim, std::uint64_t seed) {
  SuiteConfig c;
  c.suite = suite;
  c.trials = trials;
  c.max_dim = max_dim;
  c.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport r = run_suite(c);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(r), s};
}

std::string summary(const SuiteReport& r) {
  return r.suite + " " + std::to_string(r.violation_count) + "/" + std::to_string(r.trials) +
         " violations, worst slack " + fmt("%.3g", r.worst_slack);
}

void ac1() {
  const Timed t = timed_suite("weyl_horn", 10000, 12, 1);
  report("AC1", t.report.violation_count == 0 && t.seconds <= 120.0,
         summary(t.report) + ", " + fmt("%.1f s", t.seconds));
}

void ac2() {
  bool ok = true;
  std::string detail;
  for (const char* s : {"lemma2_2", "lemma2_3", "lemma2_4_1", "lemma2_4_2", "lemma2_4_3", "lemma2_5"}) {
    const SuiteReport base = timed_suite(s, 10000, 10, 2).report;
    const SuiteReport mutant = timed_suite(std::string(s) + "_mutant", 1000, 10, 2).report;
    ok = ok && base.violation_count == 0 && mutant.violation_count >= 1;
    detail += std::string(s) + " " + std::to_string(base.violation_count) + "/10000, mutant " +
              std::to_string(mutant.violation_count) + "/1000; ";
  }
  report("AC2", ok, detail);
}

void ac3() {
  const CutoffPair& pair = CutoffPair::canonical();
  const LaplacianScan scan = laplacian_grid_check(pair, 0.5, 10.0, 400);
  const LaplacianScan flipped =
      laplacian_grid_check([&pair](Complex z) { return -eval_h(pair, z); }, 0.5, 10.0, 400);
  report("AC3", scan.min_laplacian >= -1e-6 && flipped.min_laplacian <= -1e-3,
         "min Laplacian of h " + fmt("%.3g", scan.min_laplacian) + " over " + std::to_string(scan.points) +
             " nodes, sign-flipped " + fmt("%.3g", flipped.min_laplacian));
}

void ac4() {
  const SuiteReport r = timed_suite("lemma2_1_3", 200, 6, 4).report;
  const double change = r.empirical_constants.at("maxNodeDoublingChangeSmooth");
  const double smooth = r.empirical_constants.at("smoothTrials");
  report("AC4", r.violation_count == 0 && smooth > 0 && change < 1e-7,
         summary(r) + ", node doubling change " + fmt("%.3g", change) + " on " + fmt("%.0f", smooth) +
             " smooth trials (" + fmt("%.3g", r.empirical_constants.at("maxNodeDoublingChange")) + " over all)");
}

void ac5() {
  const SuiteReport r = timed_suite("thm2_7", 10000, 10, 5).report;
  const double ratio = r.empirical_constants.at("maxDeviationOverMu");
  const double c2 = r.empirical_constants.at("c2");
  report("AC5", r.violation_count == 0 && ratio < c2,
         summary(r) + ", C1 " + fmt("%.6f", r.empirical_constants.at("c1")) + ", C2 " + fmt("%.4f", c2) +
             ", max ratio " + fmt("%.4f", ratio));
}

void ac6() {
  const SuiteReport r = timed_suite("thm3_1_cycle", 1000, 50, 6).report;
  report("AC6", r.violation_count == 0,
         summary(r) + ", max condition-4 ratio " + fmt("%.4f", r.empirical_constants.at("maxCondition4Ratio")) +
             ", max condition-3 ratio " + fmt("%.4f", r.empirical_constants.at("maxCondition3Ratio")));
}

void ac7() {
  const SuiteReport r = timed_suite("prop3_2", 100, 8, 7).report;
  const double c = r.empirical_constants.at("maxEmpiricalConstant");
  report("AC7", r.violation_count == 0 && std::isfinite(c),
         summary(r) + ", empirical C " + fmt("%.4f", c) + " (proof constant up to " +
             fmt("%.1f", r.empirical_constants.at("maxProofConstant")) + ")");
}

void ac8() {
  constexpr std::size_t terms = 1000000;
  const EigenLaw alt{EigenLaw::Kind::Power, 1.0, 1.0, true};
  const TailedSequence ca = cesaro_sequence(alt, terms);
  const double tail_value = ca.value(terms) * static_cast<double>(terms);
  const std::vector<double> fa = fit_tail(ca, 1.0, 0.0, terms / 10, terms);
  const TailedSequence fitted_alt({1.0}, PowerTail{fa[0], 1.0, 0.0, false});
  const bool alt_out = condition2(alt, IdealSpec::schatten(1), terms).status == MembershipStatus::Out &&
                       membership(fitted_alt, IdealSpec::schatten(1)).status == MembershipStatus::Out;
  const bool alt_in2 = condition2(alt, IdealSpec::schatten(2), terms).status == MembershipStatus::In;
  const bool alt_limit = std::abs(tail_value - std::numbers::ln2) <= 1e-5 && std::abs(fa[0] - std::numbers::ln2) <= 1e-5;

  const EigenLaw harmonic{EigenLaw::Kind::Power, 1.0, 1.0, false};
  const TailedSequence ch = cesaro_sequence(harmonic, terms);
  const std::vector<double> fh = fit_tail(ch, 1.0, 1.0, terms / 10, terms);
  const double literal = ch.value(terms) * static_cast<double>(terms) / std::log(static_cast<double>(terms));
  const bool h_out = condition2(harmonic, IdealSpec::schatten(1), terms).status == MembershipStatus::Out;
  const bool h_limit = std::abs(fh[0] - 1.0) <= 1e-3;

  report("AC8", alt_out && alt_in2 && alt_limit && h_out && h_limit,
         "alternating: n c_n " + fmt("%.9f", tail_value) + ", fitted " + fmt("%.9f", fa[0]) + " vs ln 2, S1 " +
             (alt_out ? "Out" : "?") + ", S2 " + (alt_in2 ? "In" : "?") + "; harmonic: S1 " + (h_out ? "Out" : "?") +
             ", fitted n c_n / ln n " + fmt("%.6f", fh[0]) + " (literal at 1e6: " + fmt("%.4f", literal) + ")");
}

std::string capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return "<popen failed>";
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return out + "\nstatus " + std::to_string(status);
}

void ac9() {
  const fs::path dir = fs::temp_directory_path() / "commsum_acceptance";
  fs::create_directories(dir);
  io::write_file((dir / "m.json").string(),
                 R"({"n": 3, "entries": [[1,2],[0,1],[3,0],[0.5,0],[2,-1],[1,1],[0,0],[1,0],[-2,0.5]]})");
  io::write_file((dir / "alt.json").string(), R"({"kind": "power", "c": 1, "a": 1, "alternating": true})");
  io::write_file((dir / "p.json").string(), R"({"kind": "power", "c": 1, "a": 1.5})");
  const std::string bin = COMMSUM_BIN;
  const std::string d = dir.string();
  const std::vector<std::string> commands = {
      "spectrum -i " + d + "/m.json",
      "functional -i " + d + "/m.json",
      "cutoff-report",
      "criterion -i " + d + "/m.json --ideal schatten:p=1",
      "criterion -i " + d + "/alt.json --ideal schatten:p=1",
      "stability -i " + d + "/p.json --ideal schatten:p=1 --terms 20000",
      "verify --suite lemma2_3 --trials 1000 --seed 7",
      "verify --suite lemma2_1_3 --trials 16 --max-dim 5 --seed 3",
      "verify --suite thm3_1_cycle --trials 200 --max-dim 30 --seed 9",
      "verify --suite prop3_2_mutant --trials 8 --seed 2",
  };
  bool ok = true;
  std::size_t compared = 0;
  for (const std::string& c : commands) {
    const std::string a = capture(bin + " " + c + " 2>&1");
    const std::string b = capture(bin + " " + c + " 2>&1");
    const std::string one = capture("COMMSUM_THREADS=1 " + bin + " " + c + " 2>&1");
    const std::string three = capture("COMMSUM_THREADS=3 " + bin + " " + c + " 2>&1");
    const bool same = a == b && a == one && a == three && a.size() > 20;
    if (!same) std::printf("  AC9 mismatch: %s\n", c.c_str());
    ok = ok && same;
    compared += 4;
  }
  report("AC9", ok, std::to_string(commands.size()) + " commands, " + std::to_string(compared) +
                        " runs (repeat, COMMSUM_THREADS=1, =3) byte-identical");
}

}  // namespace

int main() {
  ac1();
  ac2();
  ac3();
  ac4();
  ac5();
  ac6();
  ac7();
  ac8();
  ac9();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

#include "commsum/cli.hpp"

#include <algorithm>
#include <iostream>

#include <CLI11.hpp>

#include "commsum/criterion.hpp"
#include "commsum/cutoffs.hpp"
#include "commsum/error.hpp"
#include "commsum/functionals.hpp"
#include "commsum/io.hpp"
#include "commsum/verify.hpp"

namespace commsum::cli {

namespace {

struct Options {
  std::string input;
  std::string output;
  std::string ideal;
  std::string table;
  std::string suite;
  std::size_t terms = 100000;
  std::size_t trials = 1000;
  std::size_t max_dim = 8;
  std::uint64_t seed = 0;
  std::optional<double> tolerance;
  std::size_t nodes = 512;
  std::size_t grid = 400;
};

void emit(const Options& opt, const io::Json& doc, std::ostream& out) {
  if (opt.output.empty()) {
    out << doc.dump();
  } else {
    io::write_file(opt.output, doc.dump());
  }
}

int spectrum(const Options& opt, std::ostream& out) {
  const ComplexMatrix m = io::parse_matrix(io::read_file(opt.input));
  emit(opt, io::spectrum_document(eigenvalue_sequence(m), singular_sequence(m)), out);
  return kOk;
}

int functional(const Options& opt, std::ostream& out) {
  const ComplexMatrix m = io::parse_matrix(io::read_file(opt.input));
  const FunctionalReport report = functional_report(eigenvalue_sequence(m), CutoffPair::canonical());
  emit(opt, io::functional_document(report), out);
  return kOk;
}

int cutoff_report(const Options& opt, std::ostream& out) {
  const CutoffPair& pair = CutoffPair::canonical();
  emit(opt, io::cutoff_document(pair, laplacian_grid_check(pair, 0.5, 10.0, opt.grid)), out);
  return kOk;
}

int criterion(const Options& opt, std::ostream& out) {
  const io::CriterionInput input = io::parse_criterion_input(io::read_file(opt.input));
  const IdealSpec ideal = IdealSpec::parse(opt.ideal);
  const CriterionReport report = std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, EigenLaw>) {
          return commutator_membership(x, ideal, opt.terms);
        } else {
          return commutator_membership(x, ideal);
        }
      },
      input);
  if (!opt.table.empty()) io::write_file(opt.table, io::criterion_table(input, opt.terms));
  emit(opt, io::criterion_document(report), out);
  return kOk;
}

int stability(const Options& opt, std::ostream& out) {
  const ScalarSequence s = io::parse_sequence(io::read_file(opt.input));
  const IdealSpec ideal = IdealSpec::parse(opt.ideal);
  const StabilityReport report = check_geometric_stability(s, ideal, opt.terms);
  if (!opt.table.empty()) io::write_file(opt.table, io::stability_table(s, report));
  emit(opt, io::stability_document(report), out);
  return kOk;
}

int verify(const Options& opt, std::ostream& out) {
  SuiteConfig config;
  config.suite = opt.suite;
  config.trials = opt.trials;
  config.max_dim = opt.max_dim;
  config.seed = opt.seed;
  config.tolerance = opt.tolerance;
  config.nodes = opt.nodes;
  config.terms = opt.terms;
  const SuiteReport report = run_suite(config);
  const io::Json doc = io::suite_document(report);
  if (opt.output.empty()) {
    out << doc.dump();
  } else {
    io::write_file(opt.output, doc.dump());
    out << report.suite << ": " << report.trials << " trials, " << report.violation_count
        << " violations, worst slack " << io::format_double(report.worst_slack) << '\n';
  }
  return report.violation_count == 0 ? kOk : kViolations;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Commutator-subspace membership and spectral inequality checks", "commsum"};
  app.require_subcommand(1, 1);
  Options opt;

  auto* spec = app.add_subcommand("spectrum", "Eigenvalues and singular values of a matrix");
  spec->add_option("-i,--input", opt.input, "Matrix JSON")->required();
  spec->add_option("-o,--output", opt.output, "Write the document here instead of stdout");

  auto* func = app.add_subcommand("functional", "nu, mu, chi and chi_phi of a matrix");
  func->add_option("-i,--input", opt.input, "Matrix JSON")->required();
  func->add_option("-o,--output", opt.output, "Write the document here instead of stdout");

  auto* cut = app.add_subcommand("cutoff-report", "Constants of the shipped cutoff pair");
  cut->add_option("--grid", opt.grid, "Laplacian grid size")->check(CLI::Range(16, 4000));
  cut->add_option("-o,--output", opt.output, "Write the document here instead of stdout");

  auto* crit = app.add_subcommand("criterion", "Commutator-subspace membership");
  crit->add_option("-i,--input", opt.input, "Matrix, eigenvalue list or eigenvalue law JSON")->required();
  crit->add_option("--ideal", opt.ideal, "schatten:p=<v> or weaklp:p=<v>")->required();
  crit->add_option("--terms", opt.terms, "Prefix length for eigenvalue laws")->check(CLI::Range(1, 100000000));
  crit->add_option("--emit-table", opt.table, "Write the n,c_n,u_n CSV here");
  crit->add_option("-o,--output", opt.output, "Write the document here instead of stdout");

  auto* stab = app.add_subcommand("stability", "Geometric-mean stability witnesses");
  stab->add_option("-i,--input", opt.input, "Sequence JSON")->required();
  stab->add_option("--ideal", opt.ideal, "schatten:p=<v> or weaklp:p=<v>")->required();
  stab->add_option("--terms", opt.terms, "Prefix length")->check(CLI::Range(1, 100000000));
  stab->add_option("--emit-table", opt.table, "Write the n,s_n,t_n,u_n CSV here");
  stab->add_option("-o,--output", opt.output, "Write the document here instead of stdout");

  auto* ver = app.add_subcommand("verify", "Randomized inequality suite");
  ver->add_option("--suite", opt.suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));
  ver->add_option("--trials", opt.trials, "Number of trials")->check(CLI::Range(1, 100000000));
  ver->add_option("--max-dim", opt.max_dim, "Largest matrix dimension")->check(CLI::Range(2, 512));
  ver->add_option("--seed", opt.seed, "Base seed");
  ver->add_option("--tolerance", opt.tolerance, "Allowed normalized slack")->check(CLI::NonNegativeNumber);
  ver->add_option("--nodes", opt.nodes, "Circle-mean quadrature nodes")->check(CLI::Range(8, 1 << 20));
  ver->add_option("--terms", opt.terms, "Prefix length for stability trials")->check(CLI::Range(1, 100000000));
  ver->add_option("--json,-o,--output", opt.output, "Write the report here and print a summary");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "commsum: " << e.what() << '\n';
    return kBadInput;
  }

  try {
    if (spec->parsed()) return spectrum(opt, out);
    if (func->parsed()) return functional(opt, out);
    if (cut->parsed()) return cutoff_report(opt, out);
    if (crit->parsed()) return criterion(opt, out);
    if (stab->parsed()) return stability(opt, out);
    return verify(opt, out);
  } catch (const ParseError& e) {
    err << "commsum: parse error at " << e.what() << '\n';
    return kBadInput;
  } catch (const DomainError& e) {
    err << "commsum: invalid input: " << e.what() << '\n';
    return kBadInput;
  } catch (const PreconditionError& e) {
    err << "commsum: precondition failed: " << e.what() << '\n';
    return kBadInput;
  } catch (const NumericalError& e) {
    err << "commsum: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "commsum: " << e.what() << '\n';
    return kNumerical;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace commsum::cli

// wproc: weighted Procrustes problems from the command line.
//
// Subcommands: solve (closed-form minimizer and report), shorted (shorted
// operator of a weight to a subspace), verify (seeded invariant battery),
// gen (deterministic instance files).
//
// Exit codes: 0 success, 1 verification property failure, 2 parse/shape/usage
// error, 3 solvability-condition tolerance breakdown.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wproc/wproc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConditionFailed = 3;

struct SolveArgs {
  std::string a_path;
  std::string b_path;
  bool identity = false;
  std::string w_path;
  std::string p_text = "2";
  double residual_tol = wproc::ToleranceProfile{}.residual_tol;
  std::string out_path;
};

struct ShortedArgs {
  std::string w_path;
  std::string s_path;
  std::string out_path;
};

struct VerifyArgs {
  std::uint64_t seed = 42;
  std::size_t trials = 20;
  long long n = 5;
  std::string p_list = "1,2,3";
  bool inject_zero_tolerance = false;
};

struct GenArgs {
  std::string spec_path;
  std::string out_prefix;
};

std::vector<double> parse_p_list(const std::string& text) {
  std::vector<double> values;
  std::istringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    values.push_back(wproc::schatten_order_from_string(item).value());
  }
  if (values.empty()) throw wproc::ParseError("p: empty list");
  return values;
}

int run_solve(const SolveArgs& args) {
  const wproc::DenseMatrix a = wproc::read_matrix_file(args.a_path);
  const wproc::DenseMatrix b = args.identity
                                   ? wproc::DenseMatrix::Identity(a.rows(), a.rows())
                                   : wproc::read_matrix_file(args.b_path);
  wproc::ToleranceProfile tol;
  tol.residual_tol = args.residual_tol;
  const wproc::PsdMatrix w = [&] {
    try {
      return wproc::PsdMatrix(wproc::read_matrix_file(args.w_path), tol);
    } catch (const wproc::Error& e) {
      throw wproc::ParseError(args.w_path + ": " + e.what());
    }
  }();
  const wproc::SchattenOrder p = wproc::schatten_order_from_string(args.p_text);

  const wproc::ProcrustesProblem prob(a, b, w, p, tol);
  const wproc::ProcrustesSolution sol = wproc::w_inverse(prob);
  const wproc::Json report = wproc::solution_report(prob, sol);
  if (args.out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    wproc::write_json_file(args.out_path, report);
  }
  return kExitOk;
}

int run_shorted(const ShortedArgs& args) {
  wproc::ToleranceProfile tol;
  const wproc::PsdMatrix w = [&] {
    try {
      return wproc::PsdMatrix(wproc::read_matrix_file(args.w_path), tol);
    } catch (const wproc::Error& e) {
      throw wproc::ParseError(args.w_path + ": " + e.what());
    }
  }();
  const wproc::DenseMatrix s_matrix = wproc::read_matrix_file(args.s_path);
  if (s_matrix.rows() != w.dim()) {
    throw wproc::ShapeError(args.s_path + ": subspace matrix has " +
                            std::to_string(s_matrix.rows()) + " rows, weight needs " +
                            std::to_string(w.dim()));
  }
  const wproc::Subspace s = wproc::range_of(s_matrix, tol);
  const wproc::ShortedPair pair = wproc::short_to(w, s, tol);
  const wproc::ShortedRangeReport ranges = wproc::shorted_range_nullspace_report(w, s, tol);
  const wproc::Json report = wproc::shorted_report(pair, ranges, tol);
  if (args.out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    wproc::write_json_file(args.out_path, report);
  }
  return kExitOk;
}

int run_verify(const VerifyArgs& args) {
  wproc::VerifyOptions opts;
  opts.seed = args.seed;
  opts.trials = args.trials;
  opts.n = args.n;
  opts.p_values = parse_p_list(args.p_list);
  opts.zero_comparison_tolerances = args.inject_zero_tolerance;
  if (!opts.valid()) {
    throw wproc::ParseError("verify: trials, n and every p must be positive (p >= 1)");
  }
  const wproc::VerifyReport report = wproc::run_verification(opts);

  std::size_t width = 0;
  for (const auto& prop : report.properties) width = std::max(width, prop.name.size());
  for (const auto& prop : report.properties) {
    std::cout << std::left << std::setw(static_cast<int>(width + 2)) << prop.name
              << (prop.passed ? "pass" : "FAIL") << "  checks=" << prop.checks
              << "  worst_margin=" << std::scientific << std::setprecision(3)
              << prop.worst_margin << std::defaultfloat;
    if (!prop.passed) std::cout << "  first_failure=[" << prop.first_failure << "]";
    std::cout << "\n";
  }
  if (!report.all_passed()) {
    std::cout << "repro: " << report.repro << "\n";
    return kExitPropertyFailure;
  }
  return kExitOk;
}

int run_gen(const GenArgs& args) {
  wproc::Json spec_json;
  {
    std::ifstream in(args.spec_path);
    if (!in) throw wproc::ParseError(args.spec_path + ": cannot open for reading");
    try {
      spec_json = wproc::Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw wproc::ParseError(args.spec_path + ": " + e.what());
    }
  }
  const wproc::InstanceSpec spec =
      wproc::instance_spec_from_json(spec_json, args.spec_path);
  const wproc::ProcrustesProblem prob = wproc::generate_instance(spec);
  wproc::write_json_file(args.out_prefix + "a.json", wproc::matrix_to_json(prob.a));
  wproc::write_json_file(args.out_prefix + "b.json", wproc::matrix_to_json(prob.b));
  wproc::write_json_file(args.out_prefix + "w.json", wproc::matrix_to_json(prob.w.matrix()));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Procrustes problems: closed-form solve, shorted operators, "
               "verification battery, instance generation"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Minimize ||W^{1/2}(A X - B)||_p");
  solve->add_option("--a", solve_args.a_path, "Matrix A file (JSON or CSV)")->required();
  auto* b_opt = solve->add_option("--b", solve_args.b_path, "Matrix B file (JSON or CSV)");
  auto* id_opt = solve->add_flag("--identity", solve_args.identity, "Use B = I");
  b_opt->excludes(id_opt);
  solve->add_option("--w", solve_args.w_path, "Weight W file (hermitian PSD)")->required();
  solve->add_option("--p", solve_args.p_text, "Schatten order: real >= 1 or 'inf'");
  solve->add_option("--tol", solve_args.residual_tol, "Residual tolerance")
      ->check(CLI::PositiveNumber);
  solve->add_option("--out", solve_args.out_path, "Report file (default: stdout)");

  ShortedArgs shorted_args;
  auto* shorted = app.add_subcommand("shorted", "Shorted operator W_{/S} and compression");
  shorted->add_option("--w", shorted_args.w_path, "Weight W file (hermitian PSD)")->required();
  shorted->add_option("--s", shorted_args.s_path, "Matrix whose range is S")->required();
  shorted->add_option("--out", shorted_args.out_path, "Report file (default: stdout)");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run the seeded invariant battery");
  verify->add_option("--seed", verify_args.seed, "Base seed");
  verify->add_option("--trials", verify_args.trials, "Trial count (>= 1)");
  verify->add_option("--n", verify_args.n, "Ambient dimension (>= 1)");
  verify->add_option("--p", verify_args.p_list, "Comma-separated Schatten orders");
  verify
      ->add_flag("--inject-zero-tolerance", verify_args.inject_zero_tolerance,
                 "Run all comparisons with tolerance zero (failure-path demo)")
      ->group("");  // hidden

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a seeded instance as a/b/w files");
  gen->add_option("--spec", gen_args.spec_path,
                  "Instance spec JSON {n,k,m,seed[,rank_a,rank_w,p]}")
      ->required();
  gen->add_option("--out-prefix", gen_args.out_prefix, "Prefix for a.json b.json w.json")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0 through app.exit; everything else is a
    // usage error.
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) {
      if (!solve_args.identity && solve_args.b_path.empty()) {
        std::cerr << "solve: either --b FILE or --identity is required\n";
        return kExitUsage;
      }
      return run_solve(solve_args);
    }
    if (shorted->parsed()) return run_shorted(shorted_args);
    if (verify->parsed()) return run_verify(verify_args);
    if (gen->parsed()) return run_gen(gen_args);
  } catch (const wproc::ConditionFailedError& e) {
    std::cerr << "condition failed: " << e.what() << "\n";
    return kExitConditionFailed;
  } catch (const wproc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

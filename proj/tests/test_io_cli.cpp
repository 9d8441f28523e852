#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wproc/io.hpp"
#include "wproc/solver.hpp"

using namespace wproc;

namespace {

DenseMatrix m2(Complex a, Complex b, Complex c, Complex d) {
  DenseMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Per-test file names so discovered tests can run concurrently.
std::string temp_path(const std::string& name) {
  const ::testing::TestInfo* info = ::testing::UnitTest::GetInstance()->current_test_info();
  return ::testing::TempDir() + std::string(info->test_suite_name()) + "_" + info->name() +
         "_" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

struct CommandResult {
  int code = -1;
  std::string out;
  std::string err;
};

CommandResult run_cli(const std::string& args) {
  CommandResult result;
  const std::string out_path = temp_path("stdout.txt");
  const std::string err_path = temp_path("stderr.txt");
  const std::string cmd =
      std::string(WPROC_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  result.code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

struct WorkedPaths {
  std::string a;
  std::string b;
  std::string w;
};

// The worked instance as on-disk files: A = (1,0)^T, B = I_2, W = [[2,1],[1,1]].
WorkedPaths write_worked_instance_files() {
  WorkedPaths paths{temp_path("a.json"), temp_path("b.json"), temp_path("w.json")};
  DenseMatrix a(2, 1);
  a << 1, 0;
  write_json_file(paths.a, matrix_to_json(a));
  write_json_file(paths.b, matrix_to_json(DenseMatrix::Identity(2, 2)));
  write_json_file(paths.w, matrix_to_json(m2(2, 1, 1, 1)));
  return paths;
}

void expect_parse_error_mentions(const Json& j, const std::string& needle) {
  try {
    matrix_from_json(j, "ctx");
    FAIL() << "expected ParseError for " << j.dump();
  } catch (const ParseError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("ctx"), std::string::npos) << what;
    EXPECT_NE(what.find(needle), std::string::npos) << what;
  }
}

TEST(MatrixJson, RealEntriesStayNumbers) {
  const DenseMatrix m = m2(1.0, 2.0, 3.5, -4.0);
  const Json j = matrix_to_json(m);
  EXPECT_EQ(j["rows"].get<Index>(), 2);
  EXPECT_EQ(j["cols"].get<Index>(), 2);
  EXPECT_TRUE(j["data"][0][0].is_number());
  EXPECT_TRUE(j["data"][1][1].is_number());
  const DenseMatrix back = matrix_from_json(j, "m");
  EXPECT_EQ(back, m);
}

TEST(MatrixJson, ComplexEntriesUsePairs) {
  DenseMatrix m = m2(1.0, Complex(1.0, 2.0), Complex(0.0, -3.0), 4.0);
  const Json j = matrix_to_json(m);
  EXPECT_TRUE(j["data"][0][0].is_number());
  ASSERT_TRUE(j["data"][0][1].is_array());
  EXPECT_EQ(j["data"][0][1][0].get<double>(), 1.0);
  EXPECT_EQ(j["data"][0][1][1].get<double>(), 2.0);
  const DenseMatrix back = matrix_from_json(j, "m");
  EXPECT_EQ(back, m);
}

TEST(MatrixJson, RoundTripsThroughTextExactly) {
  // Awkward doubles must survive dump -> parse bit-for-bit (shortest
  // round-trip printing).
  DenseMatrix m(2, 3);
  m << 0.1, 1.0 / 3.0, 1e-17, std::acos(-1.0), Complex(0.3, -0.7), 2.0 / 7.0;
  const std::string text = matrix_to_json(m).dump(2);
  const DenseMatrix back = matrix_from_json(Json::parse(text), "m");
  EXPECT_EQ(back, m);
}

TEST(MatrixJson, EmptyShapes) {
  const DenseMatrix zero_by_zero(0, 0);
  const DenseMatrix zero_by_three(0, 3);
  const DenseMatrix back0 = matrix_from_json(matrix_to_json(zero_by_zero), "m");
  EXPECT_EQ(back0.rows(), 0);
  EXPECT_EQ(back0.cols(), 0);
  const DenseMatrix back3 = matrix_from_json(matrix_to_json(zero_by_three), "m");
  EXPECT_EQ(back3.rows(), 0);
  EXPECT_EQ(back3.cols(), 3);
}

TEST(MatrixJson, RejectsMalformedInput) {
  expect_parse_error_mentions(Json::array(), "expected an object");
  expect_parse_error_mentions(Json::parse(R"({"rows": 1, "cols": 1})"), "data");
  expect_parse_error_mentions(Json::parse(R"({"rows": 1.5, "cols": 1, "data": [[0]]})"),
                              "integers");
  expect_parse_error_mentions(Json::parse(R"({"rows": -1, "cols": 1, "data": []})"),
                              "nonnegative");
  expect_parse_error_mentions(Json::parse(R"({"rows": 2, "cols": 1, "data": [[0]]})"),
                              "array of 2 rows");
  expect_parse_error_mentions(Json::parse(R"({"rows": 1, "cols": 2, "data": [[0]]})"),
                              "2 entries");
  expect_parse_error_mentions(Json::parse(R"({"rows": 1, "cols": 1, "data": [["x"]]})"),
                              "entry (0,0)");
  expect_parse_error_mentions(Json::parse(R"({"rows": 1, "cols": 1, "data": [[[1, 2, 3]]]})"),
                              "two-element");
  expect_parse_error_mentions(Json::parse(R"({"rows": 1, "cols": 1, "data": [[[1, "i"]]]})"),
                              "number");
}

TEST(Csv, ParsesRectangularRealMatrix) {
  std::istringstream in("1, 2.5\n-3,4e2\n");
  const DenseMatrix m = read_matrix_csv(in, "m.csv");
  ASSERT_EQ(m.rows(), 2);
  ASSERT_EQ(m.cols(), 2);
  EXPECT_EQ(m(0, 0), Complex(1.0));
  EXPECT_EQ(m(0, 1), Complex(2.5));
  EXPECT_EQ(m(1, 0), Complex(-3.0));
  EXPECT_EQ(m(1, 1), Complex(400.0));
}

TEST(Csv, ToleratesMissingTrailingNewlineAndBlankLines) {
  std::istringstream bare("1,2");
  EXPECT_EQ(read_matrix_csv(bare, "m.csv").rows(), 1);
  std::istringstream gappy("1,2\n\n3,4\n");
  const DenseMatrix m = read_matrix_csv(gappy, "m.csv");
  ASSERT_EQ(m.rows(), 2);
  EXPECT_EQ(m(1, 0), Complex(3.0));
}

TEST(Csv, RejectsRaggedRowsAndJunkTokens) {
  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(read_matrix_csv(ragged, "m.csv"), ParseError);
  std::istringstream junk("1,x\n");
  EXPECT_THROW(read_matrix_csv(junk, "m.csv"), ParseError);
  std::istringstream trailing("1,2 3\n");
  EXPECT_THROW(read_matrix_csv(trailing, "m.csv"), ParseError);
}

TEST(MatrixFile, DispatchesOnExtension) {
  const std::string csv_path = temp_path("m.csv");
  write_text(csv_path, "1,0\n0,2\n");
  const DenseMatrix from_csv = read_matrix_file(csv_path);
  EXPECT_EQ(from_csv(1, 1), Complex(2.0));

  const std::string json_path = temp_path("m.json");
  write_json_file(json_path, matrix_to_json(m2(1, 0, 0, 3)));
  EXPECT_EQ(read_matrix_file(json_path)(1, 1), Complex(3.0));

  // Anything that is not .csv goes through the JSON parser.
  const std::string txt_path = temp_path("m.txt");
  write_json_file(txt_path, matrix_to_json(m2(0, 0, 0, 5)));
  EXPECT_EQ(read_matrix_file(txt_path)(1, 1), Complex(5.0));

  EXPECT_THROW(read_matrix_file(temp_path("missing.json")), ParseError);
  const std::string broken = temp_path("broken.json");
  write_text(broken, "{ not json");
  EXPECT_THROW(read_matrix_file(broken), ParseError);
}

TEST(WriteJson, ByteStableAcrossRewrites) {
  DenseMatrix m(2, 2);
  m << 0.1, Complex(1.0 / 3.0, -2.0 / 7.0), 1e-300, 12345.6789;
  const Json j = matrix_to_json(m);
  const std::string first = temp_path("one.json");
  const std::string second = temp_path("two.json");
  write_json_file(first, j);
  write_json_file(second, matrix_to_json(matrix_from_json(Json::parse(slurp(first)), "m")));
  const std::string text = slurp(first);
  EXPECT_EQ(text, slurp(second));
  ASSERT_FALSE(text.empty());
  EXPECT_EQ(text.back(), '\n');
}

TEST(SchattenOrderParse, ValuesAndRejections) {
  EXPECT_EQ(schatten_order_from_string("2").value(), 2.0);
  EXPECT_EQ(schatten_order_from_string("1").value(), 1.0);
  EXPECT_EQ(schatten_order_from_string("2.5").value(), 2.5);
  EXPECT_TRUE(schatten_order_from_string("inf").is_infinity());
  EXPECT_THROW(schatten_order_from_string("two"), ParseError);
  EXPECT_THROW(schatten_order_from_string("2x"), ParseError);
  EXPECT_THROW(schatten_order_from_string(""), ParseError);
  // Parses as a number but fails the p >= 1 constraint.
  EXPECT_THROW(schatten_order_from_string("0.5"), Error);
}

TEST(InstanceSpecJson, AppliesDefaults) {
  const InstanceSpec spec =
      instance_spec_from_json(Json::parse(R"({"n": 3, "k": 2, "m": 4, "seed": 7})"), "spec");
  EXPECT_EQ(spec.n, 3);
  EXPECT_EQ(spec.k, 2);
  EXPECT_EQ(spec.m, 4);
  EXPECT_EQ(spec.seed, 7u);
  EXPECT_EQ(spec.rank_a, 2);  // min(n, k)
  EXPECT_EQ(spec.rank_w, 3);  // n
  EXPECT_EQ(spec.p.value(), 2.0);
}

TEST(InstanceSpecJson, HonorsOverrides) {
  const InstanceSpec spec = instance_spec_from_json(
      Json::parse(R"({"n": 4, "k": 3, "m": 2, "seed": 1, "rank_a": 1, "rank_w": 0, "p": "inf"})"),
      "spec");
  EXPECT_EQ(spec.rank_a, 1);
  EXPECT_EQ(spec.rank_w, 0);
  EXPECT_TRUE(spec.p.is_infinity());
  const InstanceSpec numeric_p = instance_spec_from_json(
      Json::parse(R"({"n": 2, "k": 2, "m": 2, "seed": 1, "p": 3})"), "spec");
  EXPECT_EQ(numeric_p.p.value(), 3.0);
}

TEST(InstanceSpecJson, RejectsBadSpecs) {
  EXPECT_THROW(instance_spec_from_json(Json::array(), "spec"), ParseError);
  EXPECT_THROW(
      instance_spec_from_json(Json::parse(R"({"n": 2, "k": 2, "m": 2})"), "spec"),
      ParseError);  // missing seed
  EXPECT_THROW(instance_spec_from_json(
                   Json::parse(R"({"n": 2.5, "k": 2, "m": 2, "seed": 1})"), "spec"),
               ParseError);
  EXPECT_THROW(instance_spec_from_json(
                   Json::parse(R"({"n": 2, "k": 2, "m": 2, "seed": 1, "typo": 3})"), "spec"),
               ParseError);
  try {
    instance_spec_from_json(
        Json::parse(R"({"n": 3, "k": 2, "m": 2, "seed": 1, "rank_a": 5})"), "spec");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("ranks out of bounds"), std::string::npos);
  }
  EXPECT_THROW(instance_spec_from_json(
                   Json::parse(R"({"n": 2, "k": 2, "m": 2, "seed": 1, "p": []})"), "spec"),
               ParseError);
}

TEST(Reports, SolutionReportFieldsInOrder) {
  DenseMatrix a(2, 1);
  a << 1, 0;
  const ProcrustesProblem prob(a, DenseMatrix::Identity(2, 2), PsdMatrix(m2(2, 1, 1, 1)),
                               SchattenOrder(2.0));
  const ProcrustesSolution sol = w_inverse(prob);
  const Json j = solution_report(prob, sol);

  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> expected = {
      "x0",           "min_value",       "shorted",
      "infimum_operator", "normal_residual", "condition_holds",
      "condition_routes_agree", "manifold_nullspace_dim", "p",
      "tolerances"};
  EXPECT_EQ(keys, expected);

  EXPECT_NEAR(j["min_value"].get<double>(), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(j["condition_holds"].get<bool>());
  EXPECT_EQ(j["manifold_nullspace_dim"].get<Index>(), 0);
  EXPECT_EQ(j["p"].get<double>(), 2.0);
  const DenseMatrix x0 = matrix_from_json(j["x0"], "x0");
  EXPECT_EQ(x0, sol.x0);
  EXPECT_EQ(j["tolerances"]["residual_tol"].get<double>(), sol.tol.residual_tol);
}

TEST(Reports, ShortedReportFields) {
  const PsdMatrix w(m2(2, 1, 1, 1));
  const Subspace s = Subspace::span_of((DenseMatrix(2, 1) << 1, 0).finished());
  const ToleranceProfile tol;
  const Json j = shorted_report(short_to(w, s, tol),
                                shorted_range_nullspace_report(w, s, tol), tol);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> expected = {"shorted", "compression", "range_equality",
                                             "nullspace_equality", "tolerances"};
  EXPECT_EQ(keys, expected);
  EXPECT_TRUE(j["range_equality"].get<bool>());
  EXPECT_TRUE(j["nullspace_equality"].get<bool>());
  const DenseMatrix shorted = matrix_from_json(j["shorted"], "shorted");
  EXPECT_NEAR(std::abs(shorted(1, 1) - Complex(0.5)), 0.0, 1e-12);
  EXPECT_NEAR(shorted.norm(), 0.5, 1e-12);
}

TEST(Cli, SolveWorkedInstance) {
  const WorkedPaths paths = write_worked_instance_files();
  const CommandResult run =
      run_cli("solve --a " + paths.a + " --b " + paths.b + " --w " + paths.w + " --p 2");
  ASSERT_EQ(run.code, 0) << run.err;
  const Json report = Json::parse(run.out);
  EXPECT_NEAR(report["min_value"].get<double>(), 0.7071067811865476, 1e-12);
  const DenseMatrix x0 = matrix_from_json(report["x0"], "x0");
  ASSERT_EQ(x0.rows(), 1);
  ASSERT_EQ(x0.cols(), 2);
  EXPECT_NEAR(std::abs(x0(0, 0) - Complex(1.0)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(x0(0, 1) - Complex(0.5)), 0.0, 1e-10);
  EXPECT_TRUE(report["condition_holds"].get<bool>());
  EXPECT_TRUE(report["condition_routes_agree"].get<bool>());
  EXPECT_EQ(report["manifold_nullspace_dim"].get<Index>(), 0);

  // --out writes byte-identical content to what stdout carried.
  const std::string out_path = temp_path("report.json");
  const CommandResult to_file = run_cli("solve --a " + paths.a + " --b " + paths.b +
                                        " --w " + paths.w + " --p 2 --out " + out_path);
  ASSERT_EQ(to_file.code, 0) << to_file.err;
  EXPECT_EQ(slurp(out_path), run.out);
}

TEST(Cli, SolveReadsCsvAndIdentityFlag) {
  const WorkedPaths paths = write_worked_instance_files();
  const std::string a_csv = temp_path("a.csv");
  write_text(a_csv, "1\n0\n");
  const CommandResult run = run_cli("solve --a " + a_csv + " --identity --w " + paths.w);
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_NEAR(Json::parse(run.out)["min_value"].get<double>(), 0.7071067811865476, 1e-12);

  // A = I makes every B exactly attainable.
  const std::string a_id = temp_path("a_id.json");
  write_json_file(a_id, matrix_to_json(DenseMatrix::Identity(2, 2)));
  const CommandResult exact = run_cli("solve --a " + a_id + " --identity --w " + paths.w);
  ASSERT_EQ(exact.code, 0) << exact.err;
  EXPECT_NEAR(Json::parse(exact.out)["min_value"].get<double>(), 0.0, 1e-10);
}

TEST(Cli, SolveHonorsTolOverride) {
  const WorkedPaths paths = write_worked_instance_files();
  const CommandResult run = run_cli("solve --a " + paths.a + " --b " + paths.b + " --w " +
                                    paths.w + " --tol 1e-6");
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_EQ(Json::parse(run.out)["tolerances"]["residual_tol"].get<double>(), 1e-6);
}

TEST(Cli, SolveUsageAndParseFailures) {
  const WorkedPaths paths = write_worked_instance_files();

  // Neither --b nor --identity.
  EXPECT_EQ(run_cli("solve --a " + paths.a + " --w " + paths.w).code, 2);
  // Both --b and --identity.
  EXPECT_EQ(run_cli("solve --a " + paths.a + " --b " + paths.b + " --identity --w " +
                    paths.w)
                .code,
            2);

  // Shape mismatch: B with the wrong row count.
  const std::string b_bad = temp_path("b_bad.json");
  write_json_file(b_bad, matrix_to_json(DenseMatrix::Identity(3, 3)));
  EXPECT_EQ(run_cli("solve --a " + paths.a + " --b " + b_bad + " --w " + paths.w).code, 2);

  // Weight that is not PSD; the error names the offending file.
  const std::string w_bad = temp_path("w_bad.json");
  write_json_file(w_bad, matrix_to_json(m2(1, 2, 2, 1)));
  const CommandResult bad_w =
      run_cli("solve --a " + paths.a + " --b " + paths.b + " --w " + w_bad);
  EXPECT_EQ(bad_w.code, 2);
  EXPECT_NE(bad_w.err.find("w_bad.json"), std::string::npos) << bad_w.err;

  // Invalid Schatten order text.
  EXPECT_EQ(run_cli("solve --a " + paths.a + " --b " + paths.b + " --w " + paths.w +
                    " --p nope")
                .code,
            2);
  // Unreadable input file.
  EXPECT_EQ(run_cli("solve --a " + temp_path("absent.json") + " --b " + paths.b + " --w " +
                    paths.w)
                .code,
            2);
}

TEST(Cli, ShortedWorkedInstanceAndEdgeSubspaces) {
  const WorkedPaths paths = write_worked_instance_files();
  const std::string s_path = temp_path("s.json");
  write_json_file(s_path, matrix_to_json((DenseMatrix(2, 1) << 1, 0).finished()));

  const CommandResult run = run_cli("shorted --w " + paths.w + " --s " + s_path);
  ASSERT_EQ(run.code, 0) << run.err;
  const Json report = Json::parse(run.out);
  const DenseMatrix shorted = matrix_from_json(report["shorted"], "shorted");
  EXPECT_NEAR(std::abs(shorted(0, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(shorted(1, 1) - Complex(0.5)), 0.0, 1e-12);
  EXPECT_TRUE(report["range_equality"].get<bool>());
  EXPECT_TRUE(report["nullspace_equality"].get<bool>());

  // W = I shorts to the orthogonal projection onto S^perp.
  const std::string w_id = temp_path("w_id.json");
  write_json_file(w_id, matrix_to_json(DenseMatrix::Identity(2, 2)));
  const CommandResult identity = run_cli("shorted --w " + w_id + " --s " + s_path);
  ASSERT_EQ(identity.code, 0) << identity.err;
  const DenseMatrix p_perp =
      matrix_from_json(Json::parse(identity.out)["shorted"], "shorted");
  EXPECT_NEAR((p_perp - m2(0, 0, 0, 1)).norm(), 0.0, 1e-12);

  // S the whole space kills the weight entirely.
  const std::string s_full = temp_path("s_full.json");
  write_json_file(s_full, matrix_to_json(DenseMatrix::Identity(2, 2)));
  const CommandResult full = run_cli("shorted --w " + paths.w + " --s " + s_full);
  ASSERT_EQ(full.code, 0) << full.err;
  EXPECT_NEAR(matrix_from_json(Json::parse(full.out)["shorted"], "shorted").norm(), 0.0,
              1e-12);

  // Subspace matrix with the wrong ambient dimension.
  const std::string s_bad = temp_path("s_bad.json");
  write_json_file(s_bad, matrix_to_json(DenseMatrix::Identity(3, 1)));
  EXPECT_EQ(run_cli("shorted --w " + paths.w + " --s " + s_bad).code, 2);
}

TEST(Cli, VerifySmallBatteryPasses) {
  const CommandResult run = run_cli("verify --seed 42 --trials 4 --n 4 --p 1,2,3");
  ASSERT_EQ(run.code, 0) << run.out << run.err;
  for (const char* name : {"order-lower-bound", "min-value-equality", "shorted-attainment",
                           "oracle-agreement", "derivative-check", "manifold-check"}) {
    EXPECT_NE(run.out.find(name), std::string::npos) << run.out;
  }
  EXPECT_EQ(run.out.find("FAIL"), std::string::npos) << run.out;
}

TEST(Cli, VerifyDefaultSeedPasses) {
  const CommandResult run = run_cli("verify --seed 42");
  EXPECT_EQ(run.code, 0) << run.out << run.err;
}

TEST(Cli, VerifyZeroToleranceInjectionFails) {
  const CommandResult run =
      run_cli("verify --seed 42 --trials 3 --n 4 --p 2 --inject-zero-tolerance");
  EXPECT_EQ(run.code, 1) << run.out << run.err;
  EXPECT_NE(run.out.find("FAIL"), std::string::npos) << run.out;
  EXPECT_NE(run.out.find("repro: wproc verify"), std::string::npos) << run.out;
  EXPECT_NE(run.out.find("--inject-zero-tolerance"), std::string::npos) << run.out;
}

TEST(Cli, VerifyUsageErrors) {
  EXPECT_EQ(run_cli("verify --trials 0").code, 2);
  EXPECT_EQ(run_cli("verify --p junk").code, 2);
  EXPECT_EQ(run_cli("verify --p 0.5").code, 2);
  EXPECT_EQ(run_cli("verify --unknown-flag").code, 2);
}

TEST(Cli, HelpAndMissingSubcommand) {
  const CommandResult help = run_cli("--help");
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("solve"), std::string::npos) << help.out;
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("frobnicate").code, 2);
}

TEST(Cli, GenIsByteDeterministicAndSolvable) {
  const std::string spec_path = temp_path("spec.json");
  Json spec;
  spec["n"] = 3;
  spec["k"] = 2;
  spec["m"] = 2;
  spec["seed"] = 9;
  spec["rank_a"] = 1;
  spec["rank_w"] = 2;
  write_json_file(spec_path, spec);

  const std::string first = temp_path("one_");
  const std::string second = temp_path("two_");
  ASSERT_EQ(run_cli("gen --spec " + spec_path + " --out-prefix " + first).code, 0);
  ASSERT_EQ(run_cli("gen --spec " + spec_path + " --out-prefix " + second).code, 0);
  for (const char* name : {"a.json", "b.json", "w.json"}) {
    const std::string text = slurp(first + name);
    ASSERT_FALSE(text.empty()) << name;
    EXPECT_EQ(text, slurp(second + name)) << name;
  }

  const CommandResult solved = run_cli("solve --a " + first + "a.json --b " + first +
                                       "b.json --w " + first + "w.json");
  ASSERT_EQ(solved.code, 0) << solved.err;
  const Json report = Json::parse(solved.out);
  EXPECT_TRUE(report["condition_holds"].get<bool>());

  // Re-validate the reported minimizer in-process against the same files.
  const ProcrustesProblem prob(read_matrix_file(first + "a.json"),
                               read_matrix_file(first + "b.json"),
                               PsdMatrix(read_matrix_file(first + "w.json")),
                               SchattenOrder(2.0));
  EXPECT_TRUE(is_minimizer(matrix_from_json(report["x0"], "x0"), prob));
  // rank_a = 1 < k = 2 leaves a one-dimensional minimizer manifold.
  EXPECT_EQ(report["manifold_nullspace_dim"].get<Index>(), 1);
}

TEST(Cli, GenRejectsBadSpecs) {
  const std::string rank_bad = temp_path("rank_bad.json");
  write_text(rank_bad, R"({"n": 3, "k": 2, "m": 2, "seed": 1, "rank_w": 5})");
  const CommandResult run =
      run_cli("gen --spec " + rank_bad + " --out-prefix " + temp_path("x_"));
  EXPECT_EQ(run.code, 2);
  EXPECT_NE(run.err.find("ranks out of bounds"), std::string::npos) << run.err;

  const std::string unknown = temp_path("unknown.json");
  write_text(unknown, R"({"n": 3, "k": 2, "m": 2, "seed": 1, "oops": 1})");
  EXPECT_EQ(run_cli("gen --spec " + unknown + " --out-prefix " + temp_path("y_")).code, 2);

  const std::string broken = temp_path("broken.json");
  write_text(broken, "{ not json");
  EXPECT_EQ(run_cli("gen --spec " + broken + " --out-prefix " + temp_path("z_")).code, 2);
}

}  // namespace

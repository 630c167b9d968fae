#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "genprob/cli.hpp"

using namespace genprob;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

ExperimentConfig args(std::vector<std::string> a, std::optional<std::string> env = std::nullopt) {
  return parse_args(a, env);
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("genprob_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.command = Command::Sweep;
  c.family = "PSp4";
  c.qs = {3, 5, 7};
  c.r = 2;
  c.s = 3;
  c.reps = {"0,1;4,0", "1 1;0 1"};
  c.exact = true;
  c.name = "my run";
  c.trials = 1234;
  c.seed = 0xFFFFFFFFFFFFFFFFull;
  c.closure_cap = 77;
  c.threads = 3;
  c.gens = {"1,1;0,1"};
  c.dims = {128, 168};
  c.delta = 2;
  c.degrees = {2, 4};
  c.word = "xY";
  c.output = "out.csv";
  c.plot = "out.gp";
  CHECK(parse_config(serialize_config(c)) == c);
  CHECK(parse_config(serialize_config(ExperimentConfig{})) == ExperimentConfig{});

  bool seed_given = true;
  const ExperimentConfig partial = parse_config("# comment\ncommand=decay\np=3\n", &seed_given);
  CHECK_FALSE(seed_given);
  CHECK(partial.command == Command::Decay);
  CHECK(partial.p == 3);
  CHECK(partial.trials == ExperimentConfig{}.trials);
  CHECK_THROWS_AS(parse_config("colour=blue\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("trials=many\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("no equals sign\n"), ConfigError);
}

TEST_CASE("report CSV round trip") {
  const GroupSpec spec = GroupSpec::parse("PSL2", 7);
  std::vector<EstimateReport> reports;
  reports.push_back(exact_P(spec, 2, 3).to_report());
  reports.push_back(monte_carlo_P(spec, Population::orders(2, 3), 700, 5));
  const std::string text = emit_csv(reports);
  CHECK(text.rfind(std::string(kReportHeader) + "\n", 0) == 0);
  const auto back = parse_csv(text);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].spec.name() == reports[i].spec.name());
    CHECK(back[i].mode == reports[i].mode);
    CHECK(back[i].r == reports[i].r);
    CHECK(back[i].tally == reports[i].tally);
    CHECK(back[i].trials == reports[i].trials);
    CHECK(back[i].point == reports[i].point);
    CHECK(back[i].wilson95 == reports[i].wilson95);
    CHECK(back[i].seed == reports[i].seed);
  }
  CHECK(emit_csv(back) == text);
  CHECK_THROWS(parse_csv("not,a,header\n"));
}

TEST_CASE("decay CSV round trip") {
  const auto rows = subfield_trace_decay(3, {2, 3}, "xyXY", 300, 9);
  const std::string text = emit_decay_csv(rows);
  const auto back = parse_decay_csv(text);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].hits == rows[i].hits);
    CHECK(back[i].fraction == rows[i].fraction);
    CHECK(back[i].scaled == rows[i].scaled);
    CHECK(back[i].word == rows[i].word);
  }
}

TEST_CASE("CSV quoting") {
  CHECK(split_csv_line("a,\"b,c\",\"say \"\"hi\"\"\",") == std::vector<std::string>{"a", "b,c", "say \"hi\"", ""});
  const GroupSpec spec = GroupSpec::parse("SL2", 5);
  const FiniteField& F = spec.field();
  const ClassSpec c = make_class(spec, Matrix::from_rows(F, {{0, 1}, {4, 0}}), "4A,x");
  const ClassSpec d = make_class(spec, Matrix::from_rows(F, {{0, 1}, {4, 4}}), "3\"A");
  const std::vector<EstimateReport> reps{exact_P_classes(spec, c, d).to_report()};
  const auto back = parse_csv(emit_csv(reps));
  CHECK(back[0].class_c == "4A,x");
  CHECK(back[0].class_d == "3\"A");
}

TEST_CASE("seed precedence") {
  const std::string path = temp_path("seed.cfg");
  std::ofstream(path) << "command=estimate\nfamily=SL2\nq=5\nwhole-group=true\nseed=7\n";
  CHECK(args({"estimate", "--q", "5", "--whole-group"}).seed == 0);
  CHECK(args({"estimate", "--q", "5", "--whole-group"}, "42").seed == 42);
  CHECK(args({"estimate", "--config", path}, "42").seed == 7);
  CHECK(args({"estimate", "--config", path, "--seed", "3"}, "42").seed == 3);
  CHECK(args({"estimate", "--q", "5", "--seed", "9"}, "42").seed == 9);
  CHECK_THROWS_AS(args({"estimate", "--q", "5"}, "abc"), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("flags override the config file") {
  const std::string path = temp_path("flags.cfg");
  std::ofstream(path) << "command=sweep\nfamily=PSL2\nq=5,7\nr=2\ns=3\ntrials=100\n";
  const ExperimentConfig c = args({"sweep", "--config", path, "--trials", "50"});
  CHECK(c.trials == 50);
  CHECK(c.qs == std::vector<u64>{5, 7});
  CHECK(c.family == "PSL2");
  CHECK_THROWS_AS(args({"exact", "--config", path}), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == kExitInvalid);
  CHECK(invoke({"frobnicate"}).code == kExitInvalid);
  CHECK(invoke({"exact", "--family", "GL9", "--q", "5", "--whole-group"}).code == kExitInvalid);
  CHECK(invoke({"exact", "--family", "SL2", "--q", "6", "--whole-group"}).code == kExitInvalid);
  CHECK(invoke({"exact", "--family", "SL2", "--q", "5"}).code == kExitInvalid);
  CHECK(invoke({"exact", "--family", "SL2", "--q", "7", "--whole-group", "--enum-cap", "10"}).code == kExitOverflow);
  CHECK(invoke({"estimate", "--q", "5", "--whole-group", "--plot", "x.gp"}).code == kExitInvalid);
  CHECK(invoke({"estimate", "--q", "5", "--bogus"}).code == kExitInvalid);
  CHECK(invoke({"audit-table1"}).code == kExitFailure);
  const CliRun help = invoke({"exact", "--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("--whole-group") != std::string::npos);
}

TEST_CASE("commands produce expected output") {
  const CliRun ex = invoke({"exact", "--family", "PSL2", "--q", "7", "--r", "2", "--s", "3"});
  REQUIRE(ex.code == kExitOk);
  const auto rows = parse_csv(ex.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].tally.generates == 336);
  CHECK(rows[0].trials == 1176);

  CHECK(invoke({"scott-check", "--group", "E8", "--dims", "128,168"}).out == "true\n");
  CHECK(invoke({"scott-check", "--group", "E8", "--dims", "0,0"}).out == "false\n");
  CHECK(invoke({"scott-check", "--group", "C2", "--dims", "4,6", "--delta", "2"}).out == "true\n");
  CHECK(invoke({"trace-field", "--family", "SL2", "--q", "9", "--gen", "1 1;0 1", "--gen", "1 0;1 1"}).out == "1\n");
  CHECK(invoke({"trace-field", "--family", "SL2", "--q", "9", "--gen", "1 0;0 1", "--gen", "1 1;0 1"}).code == kExitInvalid);
}

TEST_CASE("runs are byte-identical") {
  const std::vector<std::string> a{"estimate", "--family", "PSL2", "--q", "11", "--r", "2", "--s", "3",
                                   "--trials", "600", "--seed", "5"};
  const CliRun x = invoke(a);
  REQUIRE(x.code == kExitOk);
  CHECK(invoke(a).out == x.out);
  auto threaded = a;
  threaded.insert(threaded.end(), {"--threads", "4"});
  CHECK(invoke(threaded).out == x.out);
}

TEST_CASE("output and plot files") {
  const std::string csv = temp_path("decay.csv"), gp = temp_path("decay.gp");
  const CliRun o = invoke({"decay", "--p", "2", "--degrees", "2,3", "--trials", "200", "--output", csv, "--plot", gp});
  REQUIRE(o.code == kExitOk);
  CHECK(o.out.empty());
  CHECK(slurp(csv).rfind(std::string(kDecayHeader), 0) == 0);
  const std::string script = slurp(gp);
  CHECK(script.find(csv) != std::string::npos);
  CHECK(script == plot_script(Command::Decay, csv));
  std::remove(csv.c_str());
  std::remove(gp.c_str());
}

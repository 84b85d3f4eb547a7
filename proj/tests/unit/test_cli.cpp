#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "pathkf_cli/batch.hpp"
#include "pathkf_cli/config.hpp"
#include "pathkf_cli/io.hpp"

using namespace pathkf;
using namespace pathkf::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("pathkf_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> times_of(const TimeSeriesData& s) {
  const auto t = s.grid().times();
  return {t.begin(), t.end()};
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int tool(const std::string& args) {
  const std::string cmd = std::string(PATHKF_TOOL) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kTwoSeries =
    "series_id,time,value\n"
    "a,0,1.5\n"
    "a,0,2.5\n"
    "b,0,10\n"
    "b,0,11\n"
    "a,2,3.25\n"
    "a,1,2\n"
    "a,1,2.5\n"
    "a,2,3.75\n"
    "b,1,12\n"
    "b,1,13\n"
    "b,2,14\n"
    "b,2,15\n";

}  // namespace

TEST(ReadSeriesCsv, TwoSeriesThreeTimepoints) {
  std::istringstream in(kTwoSeries);
  const auto table = parse_series_csv(in);
  ASSERT_EQ(table.series.size(), 2u);
  EXPECT_EQ(table.rows, 12u);
  EXPECT_TRUE(table.skipped.empty());
  EXPECT_EQ(table.series[0].series_id(), "a");
  EXPECT_EQ(table.series[1].series_id(), "b");
  for (const auto& s : table.series) {
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(times_of(s), (std::vector<double>{0, 1, 2}));
    for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(s.samples_at(t).size(), 2u);
  }
  EXPECT_EQ(table.series[0].samples()[1], (std::vector<double>{2, 2.5}));
}

TEST(ReadSeriesCsv, NonNumericValueNamesItsLine) {
  std::istringstream in(
      "series_id,time,value\na,0,1\na,1,2\na,2,3\nb,0,1\nb,1,2\nb,2,oops\n");
  try {
    parse_series_csv(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7u);
    EXPECT_NE(std::string(e.what()).find("line 7"), std::string::npos);
  }
}

TEST(ReadSeriesCsv, MalformedInputs) {
  std::istringstream no_header("a,0,1\n");
  EXPECT_THROW(parse_series_csv(no_header), ParseError);
  std::istringstream short_row("series_id,time,value\na,0\n");
  EXPECT_THROW(parse_series_csv(short_row), ParseError);
  EXPECT_THROW(read_series_csv("/nonexistent/pathkf.csv"), IoError);
}

TEST(ReadSeriesCsv, ShortSeriesAreSkippedNotLost) {
  std::istringstream in("series_id,time,value\nshort,0,1\nshort,1,2\nlong,0,1\nlong,1,2\nlong,2,3\n");
  const auto table = parse_series_csv(in);
  ASSERT_EQ(table.series.size(), 1u);
  EXPECT_EQ(table.skipped, (std::vector<std::string>{"short"}));
  EXPECT_EQ(table.rows, 5u);
}

TEST(SeriesCsv, RoundTripIsBitExact) {
  const auto sim = synth::simulate_birth_death({});
  std::ostringstream out;
  write_series_csv(out, {sim.data});
  std::istringstream in(out.str());
  const auto table = parse_series_csv(in);
  ASSERT_EQ(table.series.size(), 1u);
  EXPECT_EQ(table.series[0].samples(), sim.data.samples());
  EXPECT_EQ(times_of(table.series[0]), times_of(sim.data));
}

TEST(WriteResult, TrajectoryRoundTripIsBitExact) {
  TempDir dir;
  const auto sim = synth::simulate_birth_death({});
  const auto r = pkf::run_pkf(sim.data, models::ModelKind::BirthDeath);
  write_result(r.final.filter, dir / "traj.json");
  const auto back = read_trajectory_json(dir / "traj.json");
  EXPECT_EQ(back.means(), r.final.filter.means());
  EXPECT_EQ(back.variances(), r.final.filter.variances());
  EXPECT_TRUE(std::ranges::equal(back.grid().times(), r.final.filter.grid().times()));
}

TEST(WriteResult, PkfResultFieldsAndHistoryBlocks) {
  TempDir dir;
  const auto sim = synth::simulate_birth_death({});
  const auto r = pkf::run_pkf(sim.data, models::ModelKind::BirthDeath, {4, true, 0.0});
  write_result(r, dir / "pkf.json");
  const auto j = nlohmann::json::parse(slurp(dir / "pkf.json"));
  for (const char* key : {"time", "filter_mean", "filter_variance", "process_uncertainty", "w_data",
                          "w_model", "w_filter"}) {
    ASSERT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j[key].size(), sim.data.size()) << key;
  }
  ASSERT_EQ(j["history"].size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(j["history"][i]["iteration"], i + 1);
  EXPECT_EQ(j["process_uncertainty"].get<std::vector<double>>(), r.final.process_uncertainty);
}

TEST(WriteResult, EmptyBenchmarkReportIsHeaderOnly) {
  TempDir dir;
  write_result(bench::BenchmarkReport{}, dir / "bench.csv");
  EXPECT_EQ(slurp(dir / "bench.csv"), "algorithm,parameters,mse,error\n");
}

TEST(WriteResult, UnwritablePathIsIoError) {
  EXPECT_THROW(write_result(bench::BenchmarkReport{}, "/nonexistent/dir/out.csv"), IoError);
}

TEST(BatchRun, OutputIndependentOfWorkerCount) {
  synth::GenePanelScenario p;
  p.n_genes = 40;
  std::vector<TimeSeriesData> series;
  for (auto& s : synth::simulate_gene_panel(p)) series.push_back(std::move(s.data));
  RunConfig c;
  c.jobs = 1;
  const auto one = to_json(batch_run(c, models::ModelKind::ConstantRegulation, series), {}).dump();
  c.jobs = 8;
  const auto eight = to_json(batch_run(c, models::ModelKind::ConstantRegulation, series), {}).dump();
  EXPECT_EQ(one, eight);
}

TEST(BatchRun, FailuresAreIsolated) {
  std::istringstream in(
      "series_id,time,value\nbad,0,1\nbad,1,1e-300\nbad,2,1e300\nbad,3,1\nok,0,1\nok,1,2\nok,2,3\n");
  const auto table = parse_series_csv(in);
  const auto result = batch_run(RunConfig{}, models::ModelKind::BirthDeath, table.series);
  ASSERT_EQ(result.outcomes.size(), 2u);
  EXPECT_EQ(result.failures, 1u);
  EXPECT_FALSE(result.outcomes[0].ok());
  EXPECT_TRUE(result.outcomes[1].ok());
}

TEST(Config, JsonOverlayAndValidation) {
  RunConfig c;
  apply_json(c, nlohmann::json::parse(
                    R"({"algorithm":"ipls","q":10,"iterations":3,"model":"const-reg","jobs":4,)"
                    R"("scenario":{"replicates":20},"panel":{"n_genes":12}})"));
  EXPECT_EQ(c.algorithm, bench::Method::IPLS);
  EXPECT_EQ(c.q, 10.0);
  EXPECT_EQ(c.iterations, 3u);
  EXPECT_EQ(c.model, models::ModelKind::ConstantRegulation);
  EXPECT_EQ(c.jobs, 4u);
  EXPECT_EQ(c.scenario.replicates, 20u);
  EXPECT_EQ(c.panel.n_genes, 12u);
  EXPECT_EQ(c.spec().label(), "ipls q=10 iterations=3");

  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"bogus":1})")), InvalidConfig);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"algorithm":"magic"})")), InvalidConfig);
  RunConfig bad;
  bad.jobs = 0;
  EXPECT_THROW(bad.validate(), InvalidConfig);
  bad = {};
  bad.iterations = 0;
  EXPECT_THROW(bad.validate(), InvalidConfig);
}

TEST(Tool, ExitCodes) {
  TempDir dir;
  const auto data = dir / "data.csv";
  EXPECT_EQ(tool("simulate --output " + data.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "data_truth.csv"));
  EXPECT_EQ(tool("run --input " + data.string() + " --output " + (dir / "r.json").string()), 0);
  EXPECT_EQ(tool("run --algorithm ukf --q 10 --input " + data.string() + " --output " +
                 (dir / "u.json").string()),
            0);

  spit(dir / "partial.csv",
       "series_id,time,value\nbad,0,1\nbad,1,1e-300\nbad,2,1e300\nbad,3,1\nok,0,1\nok,1,2\nok,2,3\n");
  EXPECT_EQ(tool("run --input " + (dir / "partial.csv").string() + " --output " +
                 (dir / "p.json").string()),
            1);

  EXPECT_EQ(tool("run --input " + (dir / "missing.csv").string()), 2);
  EXPECT_EQ(tool("run --algorithm magic --input " + data.string()), 2);
  spit(dir / "broken.csv", "series_id,time,value\na,0,x\n");
  EXPECT_EQ(tool("run --input " + (dir / "broken.csv").string()), 2);
  spit(dir / "bad.json", R"({"nope": true})");
  EXPECT_EQ(tool("run --config " + (dir / "bad.json").string() + " --input " + data.string()), 2);
  EXPECT_EQ(tool("frobnicate"), 2);
}

TEST(Tool, FlagsOverrideConfigFile) {
  TempDir dir;
  spit(dir / "cfg.json", R"({"seed": 7, "scenario": {"replicates": 5}})");
  ASSERT_EQ(tool("simulate --config " + (dir / "cfg.json").string() + " --output " +
                 (dir / "a.csv").string()),
            0);
  ASSERT_EQ(tool("simulate --config " + (dir / "cfg.json").string() + " --seed 8 --output " +
                 (dir / "b.csv").string()),
            0);
  ASSERT_EQ(tool("simulate --seed 8 --output " + (dir / "c.csv").string()), 0);

  const auto a = read_series_csv(dir / "a.csv");
  const auto b = read_series_csv(dir / "b.csv");
  const auto c = read_series_csv(dir / "c.csv");
  EXPECT_EQ(a.series[0].samples_at(0).size(), 5u);
  EXPECT_EQ(b.series[0].samples_at(0).size(), 5u);
  EXPECT_EQ(c.series[0].samples_at(0).size(), 100u);
  EXPECT_NE(a.series[0].samples(), b.series[0].samples());
}

TEST(Tool, BatchIsByteIdenticalAcrossJobs) {
  TempDir dir;
  const std::string common = "batch --config " + (dir / "cfg.json").string();
  spit(dir / "cfg.json", R"({"panel": {"n_genes": 30}})");
  ASSERT_EQ(tool(common + " --jobs 1 --output " + (dir / "one.json").string()), 0);
  ASSERT_EQ(tool(common + " --jobs 8 --output " + (dir / "eight.json").string()), 0);
  const auto one = slurp(dir / "one.json");
  EXPECT_FALSE(one.empty());
  EXPECT_EQ(one, slurp(dir / "eight.json"));
  EXPECT_NE(one.find("q_ratio_summary"), std::string::npos);
}

TEST(BatchRun, WallTimeScalesLinearlyInSeriesCount) {
  synth::GenePanelScenario p;
  p.n_genes = 1000;
  std::vector<TimeSeriesData> all;
  for (auto& s : synth::simulate_gene_panel(p)) all.push_back(std::move(s.data));
  const std::vector<TimeSeriesData> few(all.begin(), all.begin() + 100);
  auto per_series = [](const std::vector<TimeSeriesData>& series) {
    const auto start = std::chrono::steady_clock::now();
    batch_run(RunConfig{}, models::ModelKind::ConstantRegulation, series);
    const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
    return d.count() / static_cast<double>(series.size());
  };
  per_series(few);
  const double small = per_series(few);
  const double large = per_series(all);
  EXPECT_LT(large / small, 2.0);
  EXPECT_GT(large / small, 0.5);
}

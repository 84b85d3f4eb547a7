#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pathkf/error.hpp"
#include "pathkf_cli/commands.hpp"
#include "pathkf_cli/config.hpp"

namespace {

struct Flags {
  std::string algorithm;
  std::string model;
  std::size_t iterations = 0;
  double q = 0.0;
  std::string input;
  std::string output;
  std::string config;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;
  bool retain_history = false;
  std::string truth;
  std::string labels;
  std::string traces;
};

struct Options {
  CLI::Option* algorithm = nullptr;
  CLI::Option* model = nullptr;
  CLI::Option* iterations = nullptr;
  CLI::Option* q = nullptr;
  CLI::Option* input = nullptr;
  CLI::Option* output = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* jobs = nullptr;
  CLI::Option* retain_history = nullptr;
};

Options add_common(CLI::App* cmd, Flags& f) {
  Options o;
  o.algorithm = cmd->add_option("--algorithm", f.algorithm, "pkf|kf|ukf|urts|ipls")
                    ->check(CLI::IsMember({"pkf", "kf", "ukf", "urts", "ipls"}));
  o.model = cmd->add_option("--model", f.model, "birth-death|const-reg")
                ->check(CLI::IsMember({"birth-death", "const-reg"}));
  o.iterations = cmd->add_option("--iterations", f.iterations, "PKF/IPLS iterations");
  o.q = cmd->add_option("--q", f.q, "Constant process uncertainty for the baselines");
  o.input = cmd->add_option("--input", f.input, "Long-format CSV: series_id,time,value");
  o.output = cmd->add_option("--output", f.output, "Output path ('-' for stdout)");
  cmd->add_option("--config", f.config, "JSON config; flags override its values");
  o.seed = cmd->add_option("--seed", f.seed, "Seed for simulated data");
  o.jobs = cmd->add_option("--jobs", f.jobs, "Worker threads across series");
  o.retain_history = cmd->add_flag("--retain-history", f.retain_history,
                                   "Keep every PKF iteration in the output");
  return o;
}

pathkf::cli::RunConfig build_config(const Flags& f, const Options& o) {
  using namespace pathkf::cli;
  RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (o.algorithm->count()) c.algorithm = parse_method(f.algorithm);
  if (o.model->count()) c.model = pathkf::models::parse_model_kind(f.model);
  if (o.iterations->count()) c.iterations = f.iterations;
  if (o.q->count()) c.q = f.q;
  if (o.input->count()) c.input = f.input;
  if (o.output->count()) c.output = f.output;
  if (o.seed->count()) c.seed = f.seed;
  if (o.jobs->count()) c.jobs = f.jobs;
  if (o.retain_history->count()) c.retain_history = f.retain_history;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pathkf::cli;
  CLI::App app{"Pathspace Kalman filtering of replicated time series"};
  app.require_subcommand(1);
  Flags flags;

  auto* simulate = app.add_subcommand("simulate", "Write a synthetic scenario as CSV");
  const Options simulate_opts = add_common(simulate, flags);
  simulate->add_option("--truth", flags.truth, "Ground-truth CSV path");
  simulate->add_option("--labels", flags.labels, "Gene label CSV path (const-reg panel)");

  auto* run = app.add_subcommand("run", "Run one algorithm on every input series");
  const Options run_opts = add_common(run, flags);

  auto* bench = app.add_subcommand("bench", "Benchmark table on the birth-death scenario");
  const Options bench_opts = add_common(bench, flags);
  bench->add_option("--traces", flags.traces, "JSON file for per-row trajectories");

  auto* batch = app.add_subcommand("batch", "Panel workflow with the log(Q/V) summary");
  const Options batch_opts = add_common(batch, flags);
  batch->add_option("--labels", flags.labels, "CSV of series_id,label");

  auto* convergence = app.add_subcommand("convergence", "Per-iteration PKF traces");
  const Options convergence_opts = add_common(convergence, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kConfigError;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(build_config(flags, simulate_opts), flags.truth, flags.labels);
    }
    if (run->parsed()) return cmd_run(build_config(flags, run_opts));
    if (bench->parsed()) return cmd_bench(build_config(flags, bench_opts), flags.traces);
    if (batch->parsed()) return cmd_batch(build_config(flags, batch_opts), flags.labels);
    if (convergence->parsed()) return cmd_convergence(build_config(flags, convergence_opts));
  } catch (const pathkf::InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const pathkf::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kConfigError;
  } catch (const pathkf::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

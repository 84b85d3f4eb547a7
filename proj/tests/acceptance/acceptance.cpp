// Runs the ten acceptance criteria and prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "pathkf/pathkf.hpp"
#include "pathkf_cli/batch.hpp"

using namespace pathkf;
using models::ModelKind;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double mse_of(const std::vector<double>& est, const std::vector<double>& truth) {
  double s = 0;
  for (std::size_t t = 0; t < truth.size(); ++t) s += (est[t] - truth[t]) * (est[t] - truth[t]);
  return s / static_cast<double>(truth.size());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

const synth::SimulatedSeries& default_series() {
  static const auto s = synth::simulate_birth_death({});
  return s;
}

Outcome weight_oracle() {
  const auto start = Clock::now();
  oracle::Gen gen(1001);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double a = gen.log_uniform(1e-3, 1e3);
    const double b = gen.log_uniform(1e-3, 1e3);
    const double c = gen.log_uniform(1e-3, 1e3);
    const auto w = pkf::pkf_weights(a, b, c);
    const auto ref = oracle::brute_force_weights(a, b, c);
    worst = std::max({worst, std::abs(w.w_data - ref[0]), std::abs(w.w_model - ref[1]),
                      std::abs(w.w_filter - ref[2])});
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-3 && secs < 10, fmt::format("max weight error {:.2e}, {:.2f} s", worst, secs)};
}

Outcome convergence() {
  const auto start = Clock::now();
  const auto& s = default_series();
  const auto r = pkf::run_pkf(s.data, ModelKind::BirthDeath, {50, true, 0.0});
  double worst_rise = 0;
  auto prev = pkf::initial_state(s.data).filter.variances();
  for (const auto& st : r.history) {
    const auto v = st.filter.variances();
    for (std::size_t t = 0; t < v.size(); ++t) worst_rise = std::max(worst_rise, v[t] - prev[t]);
    prev = v;
  }
  const auto& q = r.history.back().process_uncertainty;
  const double rel = r.convergence.max_abs_dq.back() / *std::max_element(q.begin(), q.end());
  const double secs = seconds_since(start);
  return {worst_rise <= 1e-12 && rel < 1e-3 && secs < 60,
          fmt::format("max variance rise {:.1e}, relative dQ at 50 = {:.2e}, {:.2f} s", worst_rise,
                      rel, secs)};
}

Outcome non_monotone_gain() {
  const auto& s = default_series();
  const auto r = pkf::run_pkf(s.data, ModelKind::BirthDeath, {1, false, 0.0});
  std::size_t ups = 0, downs = 0;
  for (std::size_t t = 1; t < r.final.weights.size(); ++t) {
    ups += r.final.weights[t].w_data > r.final.weights[t - 1].w_data;
    downs += r.final.weights[t].w_data < r.final.weights[t - 1].w_data;
  }
  return {ups > 0 && downs > 0, fmt::format("{} increases, {} decreases of w_data", ups, downs)};
}

Outcome table_reproduction() {
  const auto start = Clock::now();
  const auto report = bench::run_benchmark(synth::BirthDeathScenario{}, bench::table2_specs());
  auto find = [&](bench::Method m, double q, std::size_t it) {
    for (const auto& row : report.rows) {
      if (row.spec.method == m && (m == bench::Method::PKF || row.spec.q == q) &&
          row.spec.iterations == it) {
        return row.mse;
      }
    }
    return static_cast<double>(NAN);
  };
  using bench::Method;
  const double pkf10 = find(Method::PKF, 0, 10);
  bool b = true;
  double best_other = INFINITY;
  std::string best_label;
  for (const auto& row : report.rows) {
    if (!row.ok()) b = false;
    if (row.spec.method == Method::PKF) continue;
    b = b && pkf10 < 0.5 * row.mse;
    if (row.mse < best_other) {
      best_other = row.mse;
      best_label = row.spec.label();
    }
  }
  const bool a = pkf10 <= 5.0;
  const bool c = find(Method::AdaptiveKF, 10, 1) <= find(Method::AdaptiveKF, 1, 1) &&
                 find(Method::UnscentedKF, 10, 1) <= find(Method::UnscentedKF, 1, 1) &&
                 find(Method::UnscentedRTS, 10, 1) <= find(Method::UnscentedRTS, 1, 1) &&
                 find(Method::IPLS, 10, 1) <= find(Method::IPLS, 1, 1) &&
                 find(Method::IPLS, 10, 10) <= find(Method::IPLS, 1, 10);
  const bool d = best_label == "ipls q=10 iterations=10";
  const double secs = seconds_since(start);
  return {a && b && c && d && secs < 600,
          fmt::format("pkf(10) {:.3f} (a {}), best baseline {} {:.3f} (b {}, d {}), q ordering {}, "
                      "{:.2f} s",
                      pkf10, a, best_label, best_other, b, d, c, secs)};
}

Outcome change_points() {
  const auto& s = default_series();
  const auto r = pkf::run_pkf(s.data, ModelKind::BirthDeath, {});
  const auto& g = s.data.grid();
  const auto& q = r.final.process_uncertainty;
  std::vector<double> calm;
  for (std::size_t t = 0; t < g.size(); ++t) {
    if ((g[t] >= 1 && g[t] <= 4) || (g[t] >= 16 && g[t] <= 19)) calm.push_back(q[t]);
  }
  const double base = median(calm);
  const double r5 = q[g.nearest_index(5)] / base;
  const double r15 = q[g.nearest_index(15)] / base;
  return {r5 >= 5 && r15 >= 5, fmt::format("Q ratio {:.1f} at t=5, {:.1f} at t=15", r5, r15)};
}

Outcome linear_optimality() {
  std::size_t wins = 0;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    oracle::Gen gen(5000 + seed);
    const std::size_t n = 30;
    const double a = gen.uniform(0.9, 1.05);
    const double b = gen.uniform(-2, 2);
    std::vector<double> truth(n);
    truth[0] = gen.uniform(20, 50);
    for (std::size_t t = 1; t < n; ++t) truth[t] = a * truth[t - 1] + b;
    std::vector<std::vector<double>> samples(n);
    for (std::size_t t = 0; t < n; ++t) {
      for (int k = 0; k < 100; ++k) samples[t].push_back(gen.normal(truth[t], 5.0));
    }
    const TimeSeriesData data("linear", TimeGrid::uniform(0, 1, n), samples);
    const models::AffineMapModel model(std::vector<double>(n - 1, a), std::vector<double>(n - 1, b));
    const auto r = pkf::run_pkf(data, model, {});
    std::vector<double> sample_means;
    for (const auto& e : data.summarize()) sample_means.push_back(e.mean);
    const double ratio = mse_of(r.final.filter.means(), truth) / mse_of(sample_means, truth);
    worst = std::max(worst, ratio);
    wins += ratio <= 1.0;
  }
  return {wins == 10, fmt::format("{}/10 seeds, worst MSE ratio pkf/sample-mean {:.3f}", wins, worst)};
}

Outcome analytics() {
  using models::FitPosition;
  oracle::Gen gen(7007);
  double round_trip = 0, flow = 0, norm = 0, refine = 0;

  for (auto kind : {ModelKind::BirthDeath, ModelKind::ConstantRegulation}) {
    for (auto pos : {FitPosition::Center, FitPosition::RightEndpoint, FitPosition::LeftEndpoint}) {
      for (int i = 0; i < 1000; ++i) {
        double t[3] = {gen.uniform(-5, 5), 0, 0};
        t[1] = t[0] + gen.uniform(0.05, 3);
        t[2] = t[1] + gen.uniform(0.05, 3);
        models::Window w;
        if (pos == FitPosition::Center) {
          w.a.time = t[0], w.target_time = t[1], w.b.time = t[2];
        } else if (pos == FitPosition::RightEndpoint) {
          w.a.time = t[0], w.b.time = t[1], w.target_time = t[2];
        } else {
          w.target_time = t[0], w.a.time = t[1], w.b.time = t[2];
        }
        w.a.value = gen.uniform(0.5, 200);
        w.b.value = gen.uniform(0.5, 200);
        const double k1 = gen.log_uniform(1e-3, 3);
        const double dt = w.b.time - w.a.time;
        const double at_b =
            kind == ModelKind::BirthDeath
                ? models::flow_birth_death(w.a.value, models::solve_k_birth(k1, w, pos), k1, dt)
                : models::flow_const_reg(w.a.value, models::solve_k_exp(k1, w, pos), k1, dt);
        round_trip = std::max(round_trip, std::abs(at_b - w.b.value) / w.b.value);
      }
    }
  }

  for (int i = 0; i < 200; ++i) {
    const double x0 = gen.uniform(1, 300), k1 = gen.uniform(0, 1), k2 = gen.log_uniform(1e-3, 2);
    const double dt = gen.uniform(-2, 4);
    const double bd = oracle::rk4([&](double, double n) { return (k1 - k2) * n; }, x0, 0, dt, 2000);
    const double cr = oracle::rk4([&](double, double x) { return 50 * k1 - k2 * x; }, x0, 0, dt, 2000);
    flow = std::max(flow, std::abs(models::flow_birth_death(x0, k1, k2, dt) - bd) / bd);
    flow = std::max(flow, std::abs(models::flow_const_reg(x0, 50 * k1, k2, dt) - cr) / std::abs(cr));
  }

  for (int i = 0; i < 200; ++i) {
    models::Window w{{0, gen.uniform(1, 100)}, {gen.uniform(0.5, 4), gen.uniform(1, 100)}, 0, {}};
    w.target_time = gen.uniform(0.1, 0.9) * w.b.time;
    w.target = {gen.uniform(1, 100), gen.log_uniform(0.01, 100)};
    for (auto kind : {ModelKind::BirthDeath, ModelKind::ConstantRegulation}) {
      const auto post = models::fit_spline_posterior(w, kind, FitPosition::Center);
      double s = 0;
      for (double x : post.weights) s += x;
      norm = std::max(norm, std::abs(s - 1));
    }
  }

  const models::Window cases[] = {{{0, 100}, {2, 120}, 1, {108, 4}}, {{0, 10}, {8, 30}, 4, {24, 1.0}}};
  const ModelKind kinds[] = {ModelKind::BirthDeath, ModelKind::ConstantRegulation};
  for (int c = 0; c < 2; ++c) {
    const auto coarse = models::posterior_moments(
        models::fit_spline_posterior(cases[c], kinds[c], FitPosition::Center)).estimate;
    models::ScanConfig dense;
    dense.points = 2000;
    const auto fine = models::posterior_moments(
        models::fit_spline_posterior(cases[c], kinds[c], FitPosition::Center, dense)).estimate;
    refine = std::max({refine, std::abs(coarse.mean - fine.mean) / std::abs(fine.mean),
                       std::abs(coarse.variance - fine.variance) / fine.variance});
  }

  const bool pass = round_trip < 1e-9 && flow < 1e-8 && norm < 1e-12 && refine < 1e-4;
  return {pass, fmt::format("round trip {:.1e}, flow {:.1e}, normalization {:.1e}, refinement {:.1e}",
                            round_trip, flow, norm, refine)};
}

Outcome affine_oracle() {
  double worst = 0, fixed_point = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    oracle::Gen gen(9000 + seed);
    const std::size_t n = 25;
    std::vector<double> a, b;
    std::vector<std::vector<double>> samples(n);
    double x = gen.uniform(5, 50);
    for (std::size_t t = 0; t < n; ++t) {
      if (t > 0) {
        a.push_back(gen.uniform(0.5, 1.5));
        b.push_back(gen.uniform(-3, 3));
        x = a.back() * x + b.back();
      }
      for (int k = 0; k < 4; ++k) samples[t].push_back(gen.normal(x, gen.uniform(0.5, 3)));
    }
    const TimeSeriesData data("affine", TimeGrid::uniform(0, 1, n), samples);
    std::vector<double> z, r;
    for (const auto& e : data.summarize()) {
      z.push_back(e.mean);
      r.push_back(e.variance);
    }
    const double q = gen.log_uniform(0.01, 10);
    const baselines::AffineDynamics dyn(a, b);
    const auto kf = oracle::linear_kf(a, b, q, z, r);
    const auto rts = oracle::linear_rts(a, b, q, z, r);
    const auto ukf = baselines::run_ukf(data, dyn, q);
    const auto urts = baselines::run_urts(data, dyn, q);
    const auto ipls1 = baselines::run_ipls(data, dyn, q, 1);
    const auto ipls5 = baselines::run_ipls(data, dyn, q, 5);
    for (std::size_t t = 0; t < n; ++t) {
      worst = std::max({worst, std::abs(ukf[t].mean - kf.mean[t]), std::abs(ukf[t].variance - kf.variance[t]),
                        std::abs(urts[t].mean - rts.mean[t]), std::abs(urts[t].variance - rts.variance[t]),
                        std::abs(ipls1[t].mean - rts.mean[t])});
      fixed_point = std::max({fixed_point, std::abs(ipls5[t].mean - ipls1[t].mean),
                              std::abs(ipls5[t].variance - ipls1[t].variance)});
    }
  }
  return {worst < 1e-8 && fixed_point < 1e-8,
          fmt::format("max deviation from linear KF/RTS {:.1e}, IPLS fixed point {:.1e}", worst,
                      fixed_point)};
}

Outcome scalability() {
  synth::GenePanelScenario panel;
  panel.n_genes = 1000;
  std::vector<TimeSeriesData> series;
  for (auto& s : synth::simulate_gene_panel(panel)) series.push_back(std::move(s.data));
  cli::RunConfig config;
  config.iterations = 10;

  config.jobs = 8;
  const auto start = Clock::now();
  const auto eight = cli::to_json(cli::batch_run(config, ModelKind::ConstantRegulation, series), {}).dump();
  const double secs8 = seconds_since(start);

  config.jobs = 1;
  const auto start1 = Clock::now();
  const auto one = cli::to_json(cli::batch_run(config, ModelKind::ConstantRegulation, series), {}).dump();
  const double secs1 = seconds_since(start1);

  return {one == eight && secs8 < 60,
          fmt::format("1000 series: {:.2f} s with 8 jobs, {:.2f} s with 1 job, outputs {}", secs8, secs1,
                      one == eight ? "identical" : "differ")};
}

Outcome panel_direction() {
  const auto panel = synth::simulate_gene_panel({});
  std::vector<pkf::PkfResult> results;
  results.reserve(panel.size());
  for (const auto& s : panel) results.push_back(pkf::run_pkf(s.data, ModelKind::ConstantRegulation));
  std::vector<bench::LabeledRun> runs;
  for (std::size_t i = 0; i < panel.size(); ++i) runs.push_back({panel[i].label, results[i], panel[i].data});
  const auto summary = bench::q_ratio_summary(runs);
  double dynamic = NAN, stat = NAN;
  for (const auto& g : summary.by_label) {
    if (g.key == "dynamic") dynamic = g.mean_log_ratio;
    if (g.key == "static") stat = g.mean_log_ratio;
  }
  return {dynamic > stat, fmt::format("mean log(Q/V) dynamic {:.3f}, static {:.3f}", dynamic, stat)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 weight oracle", weight_oracle},
      {"AC2 convergence", convergence},
      {"AC3 non-monotone data gain", non_monotone_gain},
      {"AC4 benchmark table", table_reproduction},
      {"AC5 change-point spikes", change_points},
      {"AC6 exact linear model optimality", linear_optimality},
      {"AC7 model analytics", analytics},
      {"AC8 affine oracle", affine_oracle},
      {"AC9 scalability", scalability},
      {"AC10 panel direction", panel_direction},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
  }
  std::cout << fmt::format("{}/{} criteria passed", criteria.size() - failed, criteria.size()) << std::endl;
  return failed == 0 ? 0 : 1;
}

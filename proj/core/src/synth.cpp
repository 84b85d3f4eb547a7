#include "pathkf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pathkf/models.hpp"

namespace pathkf::synth {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

template <typename Segment>
void check_coverage(const std::vector<Segment>& segments, double t_end, const char* what) {
  if (segments.empty()) throw InvalidConfig(std::string(what) + " schedule is empty");
  if (segments.front().start > 0.0) {
    throw InvalidConfig(std::string(what) + " schedule does not start at t = 0");
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (!(s.start < s.end)) throw InvalidConfig(std::string(what) + " segment has end <= start");
    if (i > 0 && s.start != segments[i - 1].end) {
      throw InvalidConfig(std::string(what) + " schedule has a gap or overlap at t = " +
                          std::to_string(s.start));
    }
  }
  if (segments.back().end < t_end) {
    throw InvalidConfig(std::string(what) + " schedule ends before t_end");
  }
}

std::string gene_id(std::size_t i) {
  std::string digits = std::to_string(i);
  if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
  return "gene" + digits;
}

std::vector<std::vector<double>> draw_replicates(const std::vector<double>& truth,
                                                 const std::vector<double>& sd,
                                                 std::size_t replicates, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> samples(truth.size(), std::vector<double>(replicates));
  for (std::size_t t = 0; t < truth.size(); ++t) {
    for (double& v : samples[t]) v = truth[t] + sd[t] * normal(rng);
  }
  return samples;
}

}  // namespace

void BirthDeathScenario::validate() const {
  if (!(n0 > 0.0) || !std::isfinite(n0)) throw InvalidConfig("n0 must be finite and > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidConfig("dt must be finite and > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidConfig("t_end must be finite and > 0");
  if (replicates < 1) throw InvalidConfig("replicates must be >= 1");
  check_coverage(rates, t_end, "rate");
  check_coverage(noise, t_end, "noise");
  for (const auto& r : rates) {
    if (!std::isfinite(r.k_birth) || !std::isfinite(r.k_death)) {
      throw InvalidConfig("rates must be finite");
    }
  }
  for (const auto& s : noise) {
    if (!(s.sd >= 0.0) || !std::isfinite(s.sd)) throw InvalidConfig("noise sd must be >= 0");
  }
}

TimeGrid BirthDeathScenario::grid() const {
  const auto count = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9)) + 1;
  if (count < 3) throw InvalidConfig("scenario grid needs at least 3 timepoints");
  return TimeGrid::uniform(0.0, dt, count);
}

double birth_death_truth(const BirthDeathScenario& scenario, double t) {
  double n = scenario.n0;
  for (const auto& seg : scenario.rates) {
    const double lo = std::max(seg.start, 0.0);
    if (t <= lo) break;
    const double hi = std::min(seg.end, t);
    n *= std::exp((seg.k_birth - seg.k_death) * (hi - lo));
  }
  return n;
}

SimulatedSeries simulate_birth_death(const BirthDeathScenario& scenario) {
  scenario.validate();
  const TimeGrid grid = scenario.grid();
  std::vector<double> truth(grid.size());
  std::vector<double> sd(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    truth[i] = birth_death_truth(scenario, grid[i]);
    const auto seg = std::find_if(scenario.noise.begin(), scenario.noise.end(),
                                  [&](const NoiseSegment& s) { return grid[i] < s.end; });
    sd[i] = seg == scenario.noise.end() ? scenario.noise.back().sd : seg->sd;
  }
  auto rng = make_engine(scenario.seed, 0, 0);
  auto samples = draw_replicates(truth, sd, scenario.replicates, rng);
  return SimulatedSeries{GroundTruth(grid, std::move(truth)),
                         TimeSeriesData("birth-death", grid, std::move(samples)), "birth-death"};
}

double gene_truth(const GeneSpec& gene, double t) {
  double x = gene.x0;
  for (const auto& seg : gene.schedule) {
    const double lo = std::max(seg.start, 0.0);
    if (t <= lo) break;
    const double hi = std::min(seg.end, t);
    x = models::flow_const_reg(x, seg.k_exp, seg.k_deg, hi - lo);
  }
  return x;
}

std::vector<double> GenePanelScenario::default_times() {
  std::vector<double> t(14);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = 4.0 * static_cast<double>(i);
  return t;
}

void GenePanelScenario::validate() const {
  if (n_genes < 1) throw InvalidConfig("gene panel needs at least one gene");
  if (replicates < 1) throw InvalidConfig("replicates must be >= 1");
  if (!(dynamic_fraction >= 0.0 && dynamic_fraction <= 1.0)) {
    throw InvalidConfig("dynamic_fraction must lie in [0, 1]");
  }
  if (!(noise_fraction >= 0.0) || !std::isfinite(noise_fraction)) {
    throw InvalidConfig("noise_fraction must be finite and >= 0");
  }
  if (times.empty() || times.front() < 0.0) throw InvalidConfig("gene panel times must start at >= 0");
  (void)TimeGrid(times);
}

std::vector<GeneSpec> make_gene_specs(const GenePanelScenario& scenario) {
  scenario.validate();
  constexpr double kPeriod = 24.0;
  const double t_max = scenario.times.back();
  std::vector<GeneSpec> genes(scenario.n_genes);

  for (std::size_t i = 0; i < scenario.n_genes; ++i) {
    auto rng = make_engine(scenario.seed, i, 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double k_deg = 0.1 * std::pow(5.0, unit(rng));     // log-uniform in [0.1, 0.5]
    const double level = 10.0 * std::pow(100.0, unit(rng));  // log-uniform in [10, 1000]
    const double amplitude = 0.5 + 0.4 * unit(rng);
    const double phase = kPeriod * unit(rng);

    GeneSpec& g = genes[i];
    g.id = gene_id(i);
    g.x0 = level;
    g.noise_sd = scenario.noise_fraction * level;

    const double fi = static_cast<double>(i);
    const bool dynamic = std::floor((fi + 1.0) * scenario.dynamic_fraction) >
                         std::floor(fi * scenario.dynamic_fraction);
    if (!dynamic) {
      g.schedule.push_back({0.0, std::numeric_limits<double>::infinity(), level * k_deg, k_deg});
      continue;
    }
    // Square wave in k_exp around the baseline, switching every half period.
    const double half = 0.5 * kPeriod;
    double start = 0.0;
    double next = half - std::fmod(phase, half);
    bool high = std::fmod(std::floor(phase / half), 2.0) == 0.0;
    while (start <= t_max) {
      const double end = next > t_max ? std::numeric_limits<double>::infinity() : next;
      const double k_exp = level * k_deg * (high ? 1.0 + amplitude : 1.0 - amplitude);
      g.schedule.push_back({start, end, k_exp, k_deg});
      if (end == std::numeric_limits<double>::infinity()) break;
      start = end;
      next = end + half;
      high = !high;
    }
  }
  return genes;
}

SimulatedSeries simulate_gene(const GeneSpec& gene, const TimeGrid& grid, std::size_t replicates,
                              std::uint64_t seed, std::uint64_t index) {
  std::vector<double> truth(grid.size());
  for (std::size_t t = 0; t < grid.size(); ++t) truth[t] = gene_truth(gene, grid[t]);
  const std::vector<double> sd(grid.size(), gene.noise_sd);
  auto rng = make_engine(seed, index, 2);
  auto samples = draw_replicates(truth, sd, replicates, rng);
  const std::string label = gene.schedule.size() > 1 ? "dynamic" : "static";
  return SimulatedSeries{GroundTruth(grid, std::move(truth)),
                         TimeSeriesData(gene.id, grid, std::move(samples)), label};
}

std::vector<SimulatedSeries> simulate_gene_panel(const GenePanelScenario& scenario) {
  const auto genes = make_gene_specs(scenario);
  const TimeGrid grid(scenario.times);
  std::vector<SimulatedSeries> out;
  out.reserve(genes.size());
  for (std::size_t i = 0; i < genes.size(); ++i) {
    out.push_back(simulate_gene(genes[i], grid, scenario.replicates, scenario.seed, i));
  }
  return out;
}

}  // namespace pathkf::synth

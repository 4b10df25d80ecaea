#include "abcomm/simcore.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <thread>

#include "abcomm/error.hpp"

namespace abcomm::simcore {

namespace {

constexpr std::uint64_t kTrialStream = 0x73696d636f7265;  // per-trial fields

struct Counts {
  std::vector<long long> energy_fail, covered;
  long long guarded = 0;
};

std::vector<double> portions(const SimulationConfig& c) {
  std::vector<double> l;
  for (const auto& p : c.patterns) l.push_back(p.portion);
  return l;
}

}  // namespace

IncidentPower realize_incident_power(const geometry::PointPattern& pattern, int label, double power,
                                     double path_loss, Rng& rng, double guard, double bernoulli_busy) {
  IncidentPower out;
  if (!pattern.labels.empty() && pattern.labels.size() != pattern.points.size()) {
    throw DomainError("incident power: pattern labels do not match its points");
  }
  std::exponential_distribution<double> fading(1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < pattern.points.size(); ++i) {
    const int l = pattern.labels.empty() ? 0 : pattern.labels[i];
    if (l != label) continue;
    double d = std::abs(pattern.points[i]);
    if (d < guard) {
      d = guard;
      ++out.guarded;
    }
    const double h = fading(rng);
    double p = power;
    if (bernoulli_busy > 0.0) {
      if (unif(rng) >= bernoulli_busy) continue;
      p = power / bernoulli_busy;
    }
    out.value += p * h * std::pow(d, -path_loss);
  }
  return out;
}

TrialResult evaluate_link(double incident, double fading, const analytics::LinkBudget& budget,
                          const analytics::DerivedConstants& derived) {
  TrialResult t;
  t.incident = incident;
  t.harvested = derived.harvest_factor * incident;
  t.reflected = derived.cross_section * incident;
  t.snr = derived.c0 * incident * fading;
  t.energy_ok = incident > 0.0 && incident >= derived.p_low;
  t.interference_ok = t.reflected <= budget.max_reflected;
  t.snr_ok = incident > 0.0 && fading >= budget.snr_threshold / (derived.c0 * incident);
  return t;
}

TrialResult evaluate_link(double incident, double fading, const analytics::LinkBudget& budget) {
  return evaluate_link(incident, fading, budget, analytics::derive(budget));
}

TrialResult realize_link(double incident, const analytics::LinkBudget& budget, Rng& rng) {
  if (!(incident >= 0.0)) throw DomainError("realize_link: incident power must be >= 0");
  std::exponential_distribution<double> fading(1.0);
  return evaluate_link(incident, fading(rng), budget);
}

McResult mc_metrics(const SimulationConfig& config, long long trials, std::uint64_t seed, int threads,
                    std::ostream* dump) {
  if (trials < 1) throw DomainError("mc_metrics: trials must be >= 1");
  if (config.patterns.empty()) throw DomainError("mc_metrics: no traffic classes");
  config.budget.validate();
  const auto derived = analytics::derive(config.budget);
  const auto l = portions(config);
  const std::size_t k_count = config.patterns.size();
  std::vector<double> power(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    power[k] = analytics::effective_power(config.budget, config.patterns[k].busy_probability);
  }
  if (config.alpha != 0.0) geometry::repulsion_order(config.alpha);
  if (dump) threads = 1;
  threads = std::max(1, threads);

  auto run = [&](long long begin, long long end, Counts& c) {
    c.energy_fail.assign(k_count, 0);
    c.covered.assign(k_count, 0);
    for (long long t = begin; t < end; ++t) {
      Rng rng = make_rng(seed, kTrialStream, static_cast<std::uint64_t>(t));
      auto field = geometry::sample_point_process(config.density, config.alpha, config.window_radius, rng,
                                                  config.method);
      geometry::thin_by_traffic(field, l, rng);
      std::exponential_distribution<double> fading(1.0);
      for (std::size_t k = 0; k < k_count; ++k) {
        const double busy = config.bernoulli_activity ? config.patterns[k].busy_probability : 0.0;
        const auto pi = realize_incident_power(field, static_cast<int>(k), power[k], config.budget.path_loss, rng,
                                               config.origin_guard, busy);
        c.guarded += pi.guarded;
        const auto r = evaluate_link(pi.value, fading(rng), config.budget, derived);
        if (!r.energy_ok) ++c.energy_fail[k];
        if (r.covered()) ++c.covered[k];
        if (dump) {
          *dump << t << ',' << config.patterns[k].name << ',' << r.incident << ',' << r.harvested << ','
                << r.reflected << ',' << r.snr << ',' << r.energy_ok << ',' << r.interference_ok << ','
                << r.snr_ok << '\n';
        }
      }
    }
  };

  if (dump) *dump << "trial,pattern,P_I,P_E,P_T,snr,energy_ok,interference_ok,snr_ok\n";
  std::vector<Counts> parts(static_cast<std::size_t>(threads));
  if (threads == 1) {
    run(0, trials, parts[0]);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      const long long begin = trials * w / threads, end = trials * (w + 1) / threads;
      pool.emplace_back(run, begin, end, std::ref(parts[static_cast<std::size_t>(w)]));
    }
    for (auto& th : pool) th.join();
  }

  McResult out;
  out.patterns.resize(k_count);
  const double n = static_cast<double>(trials);
  for (std::size_t k = 0; k < k_count; ++k) {
    long long fail = 0, cov = 0;
    for (const auto& c : parts) {
      fail += c.energy_fail[k];
      cov += c.covered[k];
    }
    auto& e = out.patterns[k];
    e.trials = trials;
    e.outage = fail / n;
    e.coverage = cov / n;
    e.outage_se = std::sqrt(e.outage * (1.0 - e.outage) / n);
    e.coverage_se = std::sqrt(e.coverage * (1.0 - e.coverage) / n);
  }
  for (const auto& c : parts) out.guarded_points += c.guarded;
  return out;
}

std::vector<double> sample_incident_power(const SimulationConfig& config, int label, long long trials,
                                          std::uint64_t seed) {
  if (label < 0 || static_cast<std::size_t>(label) >= config.patterns.size()) {
    throw DomainError("sample_incident_power: no such traffic class");
  }
  const auto l = portions(config);
  const double power = analytics::effective_power(config.budget, config.patterns[label].busy_probability);
  const double busy = config.bernoulli_activity ? config.patterns[label].busy_probability : 0.0;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(trials, 0LL)));
  for (long long t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, kTrialStream, static_cast<std::uint64_t>(t));
    auto field =
        geometry::sample_point_process(config.density, config.alpha, config.window_radius, rng, config.method);
    geometry::thin_by_traffic(field, l, rng);
    out.push_back(realize_incident_power(field, label, power, config.budget.path_loss, rng, config.origin_guard, busy)
                      .value);
  }
  return out;
}

}  // namespace abcomm::simcore

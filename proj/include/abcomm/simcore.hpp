#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "abcomm/analytics/link_budget.hpp"
#include "abcomm/analytics/metrics.hpp"
#include "abcomm/geometry.hpp"
#include "abcomm/rng.hpp"

namespace abcomm::simcore {

struct TrialResult {
  double incident = 0.0;   // P_I, W
  double harvested = 0.0;  // P_E, W
  double reflected = 0.0;  // P_T, W
  double snr = 0.0;
  bool energy_ok = false;
  bool interference_ok = false;
  bool snr_ok = false;

  bool covered() const { return energy_ok && interference_ok && snr_ok; }
};

struct IncidentPower {
  double value = 0.0;
  int guarded = 0;  // points moved out to the guard radius
};

/// Sum over points labelled `label` of p_k h / max(|x|, guard)^mu with
/// h ~ Exp(1). With `bernoulli` each point is instead active with
/// probability p_b and then radiates p_k / p_b.
IncidentPower realize_incident_power(const geometry::PointPattern& pattern, int label, double power,
                                     double path_loss, Rng& rng, double guard = 1e-3,
                                     double bernoulli_busy = 0.0);

/// Link outcome for a given incident power and ST-SR fading gain.
TrialResult evaluate_link(double incident, double fading, const analytics::LinkBudget& budget,
                          const analytics::DerivedConstants& derived);
TrialResult evaluate_link(double incident, double fading, const analytics::LinkBudget& budget);

/// Draws the ST-SR fading and evaluates the link.
TrialResult realize_link(double incident, const analytics::LinkBudget& budget, Rng& rng);

struct SimulationConfig {
  analytics::LinkBudget budget = analytics::LinkBudget::reference();
  double density = 0.03;  // total zeta
  double alpha = 0.0;     // 0 or -1/m
  double window_radius = 30.0;
  std::vector<analytics::PatternInput> patterns;
  double origin_guard = 1e-3;
  bool bernoulli_activity = false;
  geometry::GinibreMethod method = geometry::GinibreMethod::kostlan;
};

struct PatternEstimate {
  double outage = 0.0;
  double coverage = 0.0;
  double outage_se = 0.0;  // binomial standard errors
  double coverage_se = 0.0;
  long long trials = 0;
};

struct McResult {
  std::vector<PatternEstimate> patterns;
  long long guarded_points = 0;
};

/// Every trial draws a fresh labelled field from a seed derived from
/// (seed, trial), shared by all classes. Results do not depend on
/// `threads`. `dump`, when set, receives one CSV row per trial and class.
McResult mc_metrics(const SimulationConfig& config, long long trials, std::uint64_t seed, int threads = 1,
                    std::ostream* dump = nullptr);

/// Incident power of class `label` over `trials` independent fields.
std::vector<double> sample_incident_power(const SimulationConfig& config, int label, long long trials,
                                          std::uint64_t seed);

}  // namespace abcomm::simcore

#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "abcomm/analytics/fredholm.hpp"
#include "abcomm/analytics/inversion.hpp"
#include "abcomm/analytics/link_budget.hpp"

namespace abcomm::analytics {

struct LevyValue {
  double pdf;
  double cdf;
};

/// Levy law of the mu = 4 Poisson shot noise with parameter a_4.
LevyValue levy_pdf_cdf(double a4, double rho);

/// erfc(sqrt(a_4 / (4 P_low))).
double levy_outage(double a4, double p_low);

/// sqrt(a_4/a')/2 [erf(sqrt(a'/P_low)) - erf(sqrt(a'/P_up))], a' = tau/c_0 + a_4/4.
double levy_coverage(double a4, double p_low, double p_up, double snr_threshold, double c0);

/// One traffic class as seen by the analysis.
struct PatternInput {
  std::string name;
  double busy_probability = 0.0;  // p_b
  double portion = 0.0;           // l_k
};

/// Measured VoIP / Game / UDP classes with p_b = airtime / interarrival at
/// the given PHY rate.
std::vector<PatternInput> reference_scenario(double link_rate = 54e6);

enum class PoissonTransform {
  infinite_plane,  // exp(-(a_mu s)^{2/mu})
  windowed         // same field restricted to |x| <= R_O
};

struct AnalyticsConfig {
  LinkBudget budget = LinkBudget::reference();
  double density = 0.03;        // total zeta
  double window_radius = 30.0;  // R_O
  InversionOptions inversion;
  PoissonTransform poisson = PoissonTransform::infinite_plane;
  /// Use the erfc / erf forms for the Poisson field at mu = 4.
  bool levy_shortcut = true;
};

struct PatternAnalytics {
  std::size_t index = 0;  // 0-based position in the input
  std::string name;
  double alpha = 0.0;
  double path_loss = 0.0;
  double density = 0.0;  // zeta_k
  double busy_probability = 0.0;
  double power = 0.0;  // p_k
  double a_mu = 0.0;
  double outage = 0.0;
  double coverage = 0.0;
};

/// Outage and coverage for classes sharing one budget and window. Keeps the
/// mode quadrature between calls; not thread-safe.
class Analyzer {
 public:
  explicit Analyzer(AnalyticsConfig config);

  const AnalyticsConfig& config() const { return config_; }
  const DerivedConstants& constants() const { return derived_; }

  ShotNoiseModel model(const PatternInput& p) const;
  LogTransform transform(const PatternInput& p, double alpha) const;

  double outage(const PatternInput& p, double alpha) const;
  double coverage(const PatternInput& p, double alpha) const;
  PatternAnalytics analyze(const PatternInput& p, double alpha, std::size_t index = 0) const;
  std::vector<PatternAnalytics> analyze(std::span<const PatternInput> patterns, double alpha) const;
  Inversion distribution(const PatternInput& p, double alpha, std::span<const double> rho) const;

 private:
  bool closed_form(double alpha) const;
  double cdf(const LogTransform& f, double rho) const;
  std::shared_ptr<const ModeQuadrature> quadrature() const;

  AnalyticsConfig config_;
  DerivedConstants derived_;
  mutable std::shared_ptr<const ModeQuadrature> quad_;
};

}  // namespace abcomm::analytics

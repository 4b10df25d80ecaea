#include "abcomm/analytics/metrics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "abcomm/error.hpp"
#include "abcomm/traffic.hpp"

namespace abcomm::analytics {

LevyValue levy_pdf_cdf(double a4, double rho) {
  if (!(a4 > 0.0) || !(rho > 0.0)) throw DomainError("Levy law needs a_4 > 0 and rho > 0");
  const double pdf = 0.5 * std::sqrt(a4 / std::numbers::pi) * std::pow(rho, -1.5) * std::exp(-a4 / (4.0 * rho));
  return {pdf, std::erfc(std::sqrt(a4 / (4.0 * rho)))};
}

double levy_outage(double a4, double p_low) {
  if (p_low <= 0.0) return 0.0;
  if (a4 <= 0.0) return 1.0;
  return std::erfc(std::sqrt(a4 / (4.0 * p_low)));
}

double levy_coverage(double a4, double p_low, double p_up, double snr_threshold, double c0) {
  if (!(p_low < p_up) || a4 <= 0.0) return 0.0;
  const double ad = snr_threshold / c0 + a4 / 4.0;
  const double lo = p_low > 0.0 ? std::erf(std::sqrt(ad / p_low)) : 1.0;
  return 0.5 * std::sqrt(a4 / ad) * (lo - std::erf(std::sqrt(ad / p_up)));
}

std::vector<PatternInput> reference_scenario(double link_rate) {
  std::vector<PatternInput> out;
  for (const auto& s : traffic::reference_patterns()) {
    const double airtime = 8.0 * s.mean_length / link_rate;
    out.push_back({s.name, airtime / s.mean_interarrival, s.portion});
  }
  return out;
}

Analyzer::Analyzer(AnalyticsConfig config) : config_(std::move(config)) {
  config_.budget.validate();
  if (!(config_.density > 0.0)) throw DomainError("analytics: density must be > 0");
  if (!(config_.window_radius > 0.0)) throw DomainError("analytics: window radius must be > 0");
  derived_ = derive(config_.budget);
}

std::shared_ptr<const ModeQuadrature> Analyzer::quadrature() const {
  if (!quad_) {
    quad_ = std::make_shared<ModeQuadrature>(config_.density, config_.window_radius, config_.budget.path_loss);
  }
  return quad_;
}

ShotNoiseModel Analyzer::model(const PatternInput& p) const {
  if (!(p.busy_probability >= 0.0 && p.busy_probability <= 1.0)) {
    throw DomainError("analytics: busy probability of '" + p.name + "' must lie in [0, 1]");
  }
  if (!(p.portion >= 0.0 && p.portion <= 1.0)) {
    throw DomainError("analytics: portion of '" + p.name + "' must lie in [0, 1]");
  }
  ShotNoiseModel m;
  m.path_loss = config_.budget.path_loss;
  m.density = config_.density;
  m.portion = p.portion;
  m.power = effective_power(config_.budget, p.busy_probability);
  m.window_radius = config_.window_radius;
  return m;
}

LogTransform Analyzer::transform(const PatternInput& p, double alpha) const {
  const auto m = model(p);
  if (alpha == 0.0 && config_.poisson == PoissonTransform::infinite_plane) {
    return [m](cplx s) { return log_laplace_ppp(s, m.path_loss, m.class_density(), m.power); };
  }
  auto f = std::make_shared<FredholmLaplace>(m, alpha, quadrature());
  return [f](cplx s) { return f->log_value(s); };
}

bool Analyzer::closed_form(double alpha) const {
  return alpha == 0.0 && config_.levy_shortcut && config_.poisson == PoissonTransform::infinite_plane &&
         config_.budget.path_loss == 4.0;
}

double Analyzer::cdf(const LogTransform& f, double rho) const {
  const auto& opt = config_.inversion;
  const double c = talbot(f, rho, opt.nodes, true);
  if (opt.check_nodes > 0) {
    const double other = talbot(f, rho, opt.check_nodes, true);
    if (!(std::abs(c - other) <= opt.tolerance)) {
      std::ostringstream msg;
      msg << "inversion residual " << std::abs(c - other) << " above tolerance at rho = " << rho;
      throw NumericalError(msg.str());
    }
  }
  if (!std::isfinite(c) || c < -opt.tolerance || c > 1.0 + opt.tolerance) {
    std::ostringstream msg;
    msg << "inverted cdf " << c << " outside [0, 1] at rho = " << rho;
    throw NumericalError(msg.str());
  }
  return std::clamp(c, 0.0, 1.0);
}

double Analyzer::outage(const PatternInput& p, double alpha) const {
  const auto m = model(p);
  if (derived_.p_low <= 0.0) return 0.0;
  if (m.power == 0.0 || m.portion == 0.0) return 1.0;
  if (closed_form(alpha)) return levy_outage(a_mu(4.0, m.class_density(), m.power), derived_.p_low);
  return cdf(transform(p, alpha), derived_.p_low);
}

double Analyzer::coverage(const PatternInput& p, double alpha) const {
  const auto m = model(p);
  const double lo = derived_.p_low, hi = derived_.p_up;
  if (!(lo < hi) || m.power == 0.0 || m.portion == 0.0) return 0.0;
  const double tau_c0 = config_.budget.snr_threshold / derived_.c0;
  if (closed_form(alpha)) {
    return levy_coverage(a_mu(4.0, m.class_density(), m.power), lo, hi, config_.budget.snr_threshold, derived_.c0);
  }
  // Integration by parts against the cdf:
  // int_lo^hi g dF = g(hi)F(hi) - g(lo)F(lo) - int_lo^hi g'(rho) F(rho) drho, g = exp(-tau/(c0 rho)).
  const auto f = transform(p, alpha);
  auto g = [&](double rho) { return std::exp(-tau_c0 / rho); };
  const double f_hi = cdf(f, hi);
  const double f_lo = lo > 0.0 ? cdf(f, lo) : 0.0;
  double tail = 0.0;
  if (tau_c0 > 0.0) {
    const double a = lo > 0.0 ? std::log(lo) : std::log(hi) - 60.0;
    auto integrand = [&](double x) {
      const double rho = std::exp(x);
      return g(rho) * tau_c0 / rho * std::clamp(talbot(f, rho, config_.inversion.nodes, true), 0.0, 1.0);
    };
    double err = 0.0;
    tail = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, a, std::log(hi), 6, 1e-6, &err);
    if (!(err <= 1e-8)) {
      std::ostringstream msg;
      msg << "coverage quadrature error estimate " << err << " too large";
      throw NumericalError(msg.str());
    }
  }
  const double c = g(hi) * f_hi - (lo > 0.0 ? g(lo) * f_lo : 0.0) - tail;
  return std::clamp(c, 0.0, 1.0);
}

PatternAnalytics Analyzer::analyze(const PatternInput& p, double alpha, std::size_t index) const {
  const auto m = model(p);
  PatternAnalytics a;
  a.index = index;
  a.name = p.name;
  a.alpha = alpha;
  a.path_loss = m.path_loss;
  a.density = m.class_density();
  a.busy_probability = p.busy_probability;
  a.power = m.power;
  a.a_mu = a_mu(m.path_loss, a.density, a.power);
  a.outage = outage(p, alpha);
  a.coverage = coverage(p, alpha);
  return a;
}

std::vector<PatternAnalytics> Analyzer::analyze(std::span<const PatternInput> patterns, double alpha) const {
  std::vector<PatternAnalytics> out;
  for (std::size_t k = 0; k < patterns.size(); ++k) out.push_back(analyze(patterns[k], alpha, k));
  return out;
}

Inversion Analyzer::distribution(const PatternInput& p, double alpha, std::span<const double> rho) const {
  return invert_to_pdf_cdf(transform(p, alpha), rho, config_.inversion);
}

}  // namespace abcomm::analytics

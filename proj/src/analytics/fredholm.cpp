#include "abcomm/analytics/fredholm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "abcomm/analytics/link_budget.hpp"
#include "abcomm/error.hpp"

namespace abcomm::analytics {

using std::numbers::pi;

namespace {

constexpr int kPoints = 16;
constexpr double kSmallest = 0x1p-47;

struct Rule {
  std::array<double, kPoints> x, w;  // on [-1, 1]
};

const Rule& rule() {
  static const Rule r = [] {
    Rule out{};
    using G = boost::math::quadrature::gauss<double, kPoints>;
    const auto& xs = G::abscissa();
    const auto& ws = G::weights();
    int i = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      out.x[i] = xs[k];
      out.w[i++] = ws[k];
      out.x[i] = -xs[k];
      out.w[i++] = ws[k];
    }
    return out;
  }();
  return r;
}

// Modes whose density u^n e^{-u}/n! is non-negligible at u.
std::pair<int, int> mode_range(double u, int modes) {
  const double spread = 10.0 * std::sqrt(u) + 12.0;
  const int lo = std::max(0, static_cast<int>(std::floor(u - spread)));
  const int hi = std::min(modes - 1, static_cast<int>(std::ceil(u + spread)));
  return {lo, hi};
}

// u^n e^{-u} / n!
double mode_density(int n, double u) {
  if (n == 0) return std::exp(-u);
  return boost::math::gamma_p_derivative(n + 1.0, u);
}

cplx log1p_complex(cplx z) {
  if (std::abs(z) < 0.5) {
    const double re = z.real(), im = z.imag();
    return {0.5 * std::log1p(2.0 * re + re * re + im * im), std::atan2(im, 1.0 + re)};
  }
  return std::log(1.0 + z);
}

std::vector<cplx> probe_values() {
  std::vector<cplx> out;
  for (double arg : {0.0, pi / 2.0, 2.6}) {
    for (int e = -20; e <= 20; ++e) out.push_back(std::polar(std::pow(10.0, e), arg));
  }
  return out;
}

}  // namespace

ModeQuadrature::ModeQuadrature(double density, double window_radius, double path_loss, double tolerance)
    : density_(density), window_radius_(window_radius), path_loss_(path_loss) {
  if (!(density > 0.0)) throw DomainError("mode quadrature: density must be > 0");
  if (!(window_radius > 0.0)) throw DomainError("mode quadrature: window radius must be > 0");
  if (!(path_loss > 2.0)) throw DomainError("mode quadrature: path loss exponent must exceed 2");
  upper_ = pi * density * window_radius * window_radius;

  int n = std::max(0, static_cast<int>(std::floor(upper_)));
  while (boost::math::gamma_p(n + 1.0, upper_) >= 1e-17) ++n;
  modes_ = n + 1;

  std::vector<Panel> panels;
  double a = 0.0;
  double b = std::min(kSmallest, upper_);
  panels.push_back({a, b});
  while (b < std::min(1.0, upper_)) {
    a = b;
    b = std::min(2.0 * a, std::min(1.0, upper_));
    panels.push_back({a, b});
  }
  while (b < upper_) {
    a = b;
    const double h = std::max(1.0, 0.5 * std::sqrt(a));
    b = (upper_ - a < 1.5 * h) ? upper_ : a + h;
    panels.push_back({a, b});
  }
  build(refine(std::move(panels), tolerance));

  const auto mass = mode_masses();
  for (int k = 0; k < modes_; ++k) {
    const double exact = boost::math::gamma_p(k + 1.0, upper_);
    if (std::abs(mass[k] - exact) > 100.0 * tolerance) {
      std::ostringstream msg;
      msg << "mode quadrature: mass of mode " << k << " is " << mass[k] << ", expected " << exact;
      throw NumericalError(msg.str());
    }
  }
}

void ModeQuadrature::panel_integrals(double a, double b, std::span<const cplx> probes,
                                     std::vector<cplx>& out) const {
  const auto& q = rule();
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  const std::size_t np = probes.size();
  std::vector<cplx> w(np);
  for (int i = 0; i < kPoints; ++i) {
    const double u = mid + half * q.x[i];
    const double wt = half * q.w[i];
    const double r_mu = std::pow(u / (pi * density_), 0.5 * path_loss_);
    for (std::size_t p = 0; p < np; ++p) w[p] = probes[p] / (r_mu + probes[p]);
    const auto [lo, hi] = mode_range(u, modes_);
    for (int n = lo; n <= hi; ++n) {
      const double g = wt * mode_density(n, u);
      if (g == 0.0) continue;
      cplx* row = out.data() + static_cast<std::size_t>(n) * np;
      for (std::size_t p = 0; p < np; ++p) row[p] += g * w[p];
    }
  }
}

bool ModeQuadrature::panel_converged(const Panel& p, double tolerance) const {
  static const std::vector<cplx> probes = probe_values();
  const std::size_t size = static_cast<std::size_t>(modes_) * probes.size();
  std::vector<cplx> coarse(size), fine(size);
  panel_integrals(p.a, p.b, probes, coarse);
  const double m = 0.5 * (p.a + p.b);
  panel_integrals(p.a, m, probes, fine);
  panel_integrals(m, p.b, probes, fine);
  for (std::size_t i = 0; i < size; ++i) {
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(fine[i]);
    if (std::abs(coarse[i] - fine[i]) > tolerance + floor) return false;
  }
  return true;
}

std::vector<ModeQuadrature::Panel> ModeQuadrature::refine(std::vector<Panel> panels, double tolerance) const {
  const double per_panel = tolerance / 16.0;
  std::vector<Panel> done;
  for (int level = 0; !panels.empty(); ++level) {
    if (level > 60) throw NumericalError("mode quadrature: refinement did not converge");
    std::vector<Panel> next;
    for (const auto& p : panels) {
      if (p.b - p.a <= per_panel || panel_converged(p, per_panel)) {
        done.push_back(p);
      } else {
        const double m = 0.5 * (p.a + p.b);
        next.push_back({p.a, m});
        next.push_back({m, p.b});
      }
    }
    panels = std::move(next);
  }
  std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  return done;
}

void ModeQuadrature::build(const std::vector<Panel>& panels) {
  const auto& q = rule();
  for (const auto& p : panels) {
    const double half = 0.5 * (p.b - p.a), mid = 0.5 * (p.a + p.b);
    for (int i = 0; i < kPoints; ++i) {
      const double u = mid + half * q.x[i];
      const double wt = half * q.w[i];
      const auto [lo, hi] = mode_range(u, modes_);
      u_.push_back(u);
      r_mu_.push_back(std::pow(u / (pi * density_), 0.5 * path_loss_));
      first_.push_back(lo);
      offset_.push_back(weights_.size());
      for (int n = lo; n <= hi; ++n) weights_.push_back(wt * mode_density(n, u));
    }
  }
  offset_.push_back(weights_.size());
}

int ModeQuadrature::mode_cutoff(double portion, double threshold) const {
  int n = 0;
  while (n < modes_ - 1 && portion * boost::math::gamma_p(n + 1.0, upper_) >= threshold) ++n;
  return n;
}

void ModeQuadrature::eigenvalues(cplx sp, double portion, int count, std::vector<cplx>& out) const {
  count = std::min(count, modes_);
  out.assign(static_cast<std::size_t>(std::max(count, 0)), cplx(0.0));
  if (sp == cplx(0.0) || count <= 0) return;
  for (std::size_t j = 0; j < u_.size(); ++j) {
    const int lo = first_[j];
    if (lo >= count) continue;
    const cplx w = sp / (r_mu_[j] + sp);
    const double* g = weights_.data() + offset_[j];
    const int len = std::min(static_cast<int>(offset_[j + 1] - offset_[j]), count - lo);
    cplx* dst = out.data() + lo;
    for (int i = 0; i < len; ++i) dst[i] += g[i] * w;
  }
  for (auto& k : out) k *= portion;
}

std::vector<double> ModeQuadrature::mode_masses() const {
  std::vector<double> out(static_cast<std::size_t>(modes_), 0.0);
  for (std::size_t j = 0; j < u_.size(); ++j) {
    const double* g = weights_.data() + offset_[j];
    const auto len = offset_[j + 1] - offset_[j];
    for (std::size_t i = 0; i < len; ++i) out[static_cast<std::size_t>(first_[j]) + i] += g[i];
  }
  return out;
}

FredholmLaplace::FredholmLaplace(ShotNoiseModel model, double alpha, std::shared_ptr<const ModeQuadrature> quad)
    : model_(model), alpha_(alpha) {
  if (!(alpha >= -1.0 && alpha <= 0.0)) throw DomainError("Fredholm transform: alpha must lie in [-1, 0]");
  if (!(model.portion >= 0.0 && model.portion <= 1.0)) throw DomainError("Fredholm transform: portion must lie in [0, 1]");
  if (!(model.power >= 0.0)) throw DomainError("Fredholm transform: power must be >= 0");
  if (!quad) {
    quad = std::make_shared<ModeQuadrature>(model.density, model.window_radius, model.path_loss);
  } else if (quad->density() != model.density || quad->window_radius() != model.window_radius ||
             quad->path_loss() != model.path_loss) {
    throw DomainError("Fredholm transform: quadrature built for a different model");
  }
  quad_ = std::move(quad);
  n_modes_ = quad_->mode_cutoff(model.portion) + 1;
  integer_power_ = false;
  if (alpha < 0.0) {
    const double m = -1.0 / alpha;
    integer_power_ = std::abs(m - std::round(m)) <= 1e-9 * m;
  }
}

std::vector<cplx> FredholmLaplace::kernel_eigenvalues(cplx s) const {
  std::vector<cplx> k;
  quad_->eigenvalues(s * model_.power, model_.portion, n_modes_, k);
  return k;
}

cplx FredholmLaplace::log_value(cplx s) const {
  if (s == cplx(0.0) || model_.power == 0.0 || model_.portion == 0.0) return 0.0;
  const auto k = kernel_eigenvalues(s);
  cplx sum = 0.0;
  if (alpha_ == 0.0) {
    for (const auto& v : k) sum -= v;
    return sum;
  }
  for (std::size_t n = 0; n < k.size(); ++n) {
    const cplx z = alpha_ * k[n];
    if (!integer_power_ && 1.0 + z.real() <= 0.0) {
      std::ostringstream msg;
      msg << "Fredholm transform: factor of mode " << n << " crosses the branch cut at s = " << s;
      throw NumericalError(msg.str());
    }
    sum += log1p_complex(z);
  }
  return -sum / alpha_;
}

std::vector<cplx> kernel_eigenvalues(cplx s, const ShotNoiseModel& model, int n_max) {
  ModeQuadrature quad(model.density, model.window_radius, model.path_loss);
  const int count = (n_max < 0 ? quad.mode_cutoff(model.portion) : n_max) + 1;
  if (count > quad.modes()) {
    throw DomainError("kernel_eigenvalues: n_max exceeds the tabulated modes (" + std::to_string(quad.modes()) + ")");
  }
  std::vector<cplx> out;
  quad.eigenvalues(s * model.power, model.portion, count, out);
  return out;
}

cplx log_laplace_ppp(cplx s, double path_loss, double class_density, double power) {
  const double a = a_mu(path_loss, class_density, power);
  if (a == 0.0 || s == cplx(0.0)) return 0.0;
  return -std::pow(a * s, 2.0 / path_loss);
}

cplx laplace_ppp(cplx s, double path_loss, double class_density, double power) {
  return std::exp(log_laplace_ppp(s, path_loss, class_density, power));
}

cplx laplace_pi(cplx s, const ShotNoiseModel& model, double alpha) {
  if (alpha == 0.0) return laplace_ppp(s, model.path_loss, model.class_density(), model.power);
  return FredholmLaplace(model, alpha).value(s);
}

}  // namespace abcomm::analytics

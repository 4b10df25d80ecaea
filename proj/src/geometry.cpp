#include "abcomm/geometry.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>

#include "abcomm/error.hpp"

namespace abcomm::geometry {

namespace {

void check_window(double density, double window_radius) {
  if (!(density > 0.0)) throw DomainError("point process: density must be > 0");
  if (!(window_radius > 0.0)) throw DomainError("point process: window radius must be > 0");
}

Point uniform_angle(double r, Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  return std::polar(r, angle(rng));
}

// Appends Ginibre points inside the window, keeping each with probability `keep`.
void append_ginibre(std::vector<Point>& out, double density, double window_radius, double keep,
                    GinibreMethod method, Rng& rng) {
  const int n_max = ginibre_mode_cutoff(density, window_radius);
  const double scale = 1.0 / std::sqrt(std::numbers::pi * density);
  std::bernoulli_distribution retain(keep);
  if (method == GinibreMethod::kostlan) {
    for (int n = 1; n <= n_max; ++n) {
      if (keep < 1.0 && !retain(rng)) continue;
      std::gamma_distribution<double> g(n, 1.0);
      const double r = std::sqrt(g(rng)) * scale;
      if (r <= window_radius) out.push_back(uniform_angle(r, rng));
    }
    return;
  }
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd m(n_max, n_max);
  for (int j = 0; j < n_max; ++j) {
    for (int i = 0; i < n_max; ++i) m(i, j) = {normal(rng), normal(rng)};
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  if (solver.info() != Eigen::Success) throw NumericalError("Ginibre: eigenvalue solver failed");
  for (const auto& ev : solver.eigenvalues()) {
    const Point z = ev * scale;
    if (std::abs(z) <= window_radius && (keep >= 1.0 || retain(rng))) out.push_back(z);
  }
}

}  // namespace

int ginibre_mode_cutoff(double density, double window_radius, double tail) {
  check_window(density, window_radius);
  const double u = std::numbers::pi * density * window_radius * window_radius;
  int n = std::max(1, static_cast<int>(std::floor(u)));
  while (boost::math::gamma_p(static_cast<double>(n), u) >= tail) ++n;
  return n;
}

int repulsion_order(double alpha) {
  if (!(alpha < 0.0) || alpha < -1.0) {
    throw DomainError("sampling requires alpha = -1/m for a positive integer m");
  }
  const double m = -1.0 / alpha;
  const double rounded = std::round(m);
  if (std::abs(m - rounded) > 1e-9 * rounded) {
    throw DomainError("sampling requires alpha = -1/m for a positive integer m");
  }
  return static_cast<int>(rounded);
}

PointPattern sample_ppp(double density, double window_radius, Rng& rng) {
  check_window(density, window_radius);
  PointPattern p;
  p.density = density;
  p.alpha = 0.0;
  p.window_radius = window_radius;
  std::poisson_distribution<long> count(density * std::numbers::pi * window_radius * window_radius);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const long n = count(rng);
  p.points.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) p.points.push_back(uniform_angle(window_radius * std::sqrt(unif(rng)), rng));
  return p;
}

PointPattern sample_ginibre(double density, double window_radius, Rng& rng, GinibreMethod method) {
  return sample_alpha_gpp(density, -1.0, window_radius, rng, method);
}

PointPattern sample_alpha_gpp(double density, double alpha, double window_radius, Rng& rng,
                              GinibreMethod method) {
  check_window(density, window_radius);
  const int m = repulsion_order(alpha);
  PointPattern p;
  p.density = density;
  p.alpha = alpha;
  p.window_radius = window_radius;
  for (int c = 0; c < m; ++c) append_ginibre(p.points, density, window_radius, 1.0 / m, method, rng);
  return p;
}

PointPattern sample_point_process(double density, double alpha, double window_radius, Rng& rng,
                                  GinibreMethod method) {
  if (alpha == 0.0) return sample_ppp(density, window_radius, rng);
  return sample_alpha_gpp(density, alpha, window_radius, rng, method);
}

void thin_by_traffic(PointPattern& pattern, std::span<const double> portions, Rng& rng) {
  double total = 0.0;
  for (double l : portions) {
    if (!(l >= 0.0)) throw DomainError("thinning: portions must be >= 0");
    total += l;
  }
  if (portions.empty() || std::abs(total - 1.0) > 1e-9) {
    throw DomainError("thinning: portions must sum to 1");
  }
  pattern.labels.resize(pattern.points.size());
  if (portions.size() == 1) {
    std::fill(pattern.labels.begin(), pattern.labels.end(), 0);
    return;
  }
  std::discrete_distribution<int> pick(portions.begin(), portions.end());
  for (auto& z : pattern.labels) z = pick(rng);
}

void write_pattern_csv(std::ostream& out, const PointPattern& pattern) {
  out << "x,y,label\n";
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < pattern.points.size(); ++i) {
    out << pattern.points[i].real() << ',' << pattern.points[i].imag() << ',';
    if (i < pattern.labels.size()) out << pattern.labels[i] + 1;
    out << '\n';
  }
  out.precision(old);
}

}  // namespace abcomm::geometry

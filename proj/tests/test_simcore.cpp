#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "abcomm/analytics/metrics.hpp"
#include "abcomm/error.hpp"
#include "abcomm/simcore.hpp"

using namespace abcomm;
using namespace abcomm::simcore;
using analytics::LinkBudget;

namespace {

SimulationConfig scenario(double alpha) {
  SimulationConfig c;
  c.alpha = alpha;
  c.patterns = analytics::reference_scenario();
  return c;
}

}  // namespace

TEST_CASE("empty sub-pattern radiates nothing") {
  geometry::PointPattern p;
  p.window_radius = 30.0;
  Rng rng(1);
  CHECK(realize_incident_power(p, 0, 0.05, 4.0, rng).value == 0.0);
  p.points = {{3.0, 0.0}};
  p.labels = {1};
  CHECK(realize_incident_power(p, 0, 0.05, 4.0, rng).value == 0.0);
}

TEST_CASE("single PU at the reference distance has mean power P_PU G_PU / 4 pi") {
  const auto b = LinkBudget::reference();
  const double pk = analytics::effective_power(b, 1.0);
  CHECK(pk == doctest::Approx(b.pu_power * b.pu_gain / (4 * M_PI)));
  geometry::PointPattern p;
  p.points = {{0.0, 1.0}};
  p.labels = {0};
  Rng rng(2);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += realize_incident_power(p, 0, pk, 4.0, rng).value;
  CHECK(std::abs(sum / n - pk) < 3.0 * pk / std::sqrt(double(n)));
}

TEST_CASE("mean incident power over an annulus follows Campbell's formula") {
  const double density = 0.03, radius = 30.0, inner = 1.0, pk = 0.05, mu = 4.0;
  const int n = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    auto rng = make_rng(3, 0, static_cast<std::uint64_t>(i));
    auto p = geometry::sample_ppp(density, radius, rng);
    geometry::PointPattern ring;
    ring.window_radius = radius;
    for (auto z : p.points) {
      if (std::abs(z) >= inner) ring.points.push_back(z);
    }
    ring.labels.assign(ring.size(), 0);
    const double v = realize_incident_power(ring, 0, pk, mu, rng).value;
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  const double expected = pk * density * 2 * M_PI * (std::pow(inner, 2 - mu) - std::pow(radius, 2 - mu)) / (mu - 2);
  CHECK(std::abs(mean - expected) < 3 * se);
}

TEST_CASE("origin guard clamps and counts") {
  geometry::PointPattern p;
  p.points = {{0.0, 0.0}, {1e-4, 0.0}, {2.0, 0.0}};
  p.labels = {0, 0, 0};
  Rng rng(4);
  CHECK(realize_incident_power(p, 0, 1.0, 4.0, rng).guarded == 2);
}

TEST_CASE("zero incident power fails everything but the interference check") {
  const auto r = evaluate_link(0.0, 1.0, LinkBudget::reference());
  CHECK_FALSE(r.energy_ok);
  CHECK(r.interference_ok);
  CHECK_FALSE(r.snr_ok);
  CHECK_FALSE(r.covered());
  CHECK(r.reflected == 0.0);
}

TEST_CASE("threshold boundaries are inclusive") {
  const auto b = LinkBudget::reference();
  const auto d = analytics::derive(b);
  CHECK(evaluate_link(d.p_low, 0.0, b).energy_ok);
  CHECK_FALSE(evaluate_link(std::nextafter(d.p_low, 0.0), 0.0, b).energy_ok);
  const double pi = 3e-3;
  const double h = b.snr_threshold / (d.c0 * pi);
  CHECK(evaluate_link(pi, h, b).snr_ok);
  CHECK_FALSE(evaluate_link(pi, std::nextafter(h, 0.0), b).snr_ok);
  CHECK(evaluate_link(d.p_up, 1.0, b).interference_ok);
  CHECK_FALSE(evaluate_link(d.p_up * (1 + 1e-12), 1.0, b).interference_ok);
}

TEST_CASE("link quantities follow the budget") {
  const auto b = LinkBudget::reference();
  const auto d = analytics::derive(b);
  const auto r = evaluate_link(1e-3, 0.7, b);
  CHECK(r.harvested == doctest::Approx(0.5 * b.efficiency * 1e-3 * b.wavelength * b.wavelength * b.st_gain / (4 * M_PI)));
  CHECK(r.reflected == doctest::Approx(1e-3 * d.cross_section));
  const double snr = r.reflected * 0.7 * d.aperture_sr * std::pow(1.0 / b.link_distance, b.path_loss) / b.noise_power;
  CHECK(r.snr == doctest::Approx(snr));
  Rng rng(1);
  CHECK_THROWS_AS(realize_link(-1.0, b, rng), DomainError);
}

TEST_CASE("single trial on an empty network") {
  auto c = scenario(0.0);
  c.density = 1e-12;
  const auto res = mc_metrics(c, 1, 5);
  for (const auto& p : res.patterns) {
    CHECK(p.outage == 1.0);
    CHECK(p.coverage == 0.0);
    CHECK(p.trials == 1);
  }
  CHECK_THROWS_AS(mc_metrics(c, 0, 5), DomainError);
}

TEST_CASE("results do not depend on the thread count") {
  for (double alpha : {0.0, -0.5}) {
    const auto c = scenario(alpha);
    const auto a = mc_metrics(c, 3000, 77, 1);
    const auto b = mc_metrics(c, 3000, 77, 4);
    for (std::size_t k = 0; k < a.patterns.size(); ++k) {
      CHECK(a.patterns[k].outage == b.patterns[k].outage);
      CHECK(a.patterns[k].coverage == b.patterns[k].coverage);
      CHECK(a.patterns[k].coverage <= 1.0 - a.patterns[k].outage);
    }
  }
}

TEST_CASE("per-trial dump has one row per trial and class") {
  std::ostringstream out;
  mc_metrics(scenario(-1.0), 10, 3, 4, &out);
  const auto text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 31);
}

TEST_CASE("standard error shrinks by sqrt 2 when the trials double") {
  const auto c = scenario(0.0);
  const auto a = mc_metrics(c, 20000, 101, 4);
  const auto b = mc_metrics(c, 40000, 202, 4);
  for (std::size_t k = 0; k < a.patterns.size(); ++k) {
    if (a.patterns[k].coverage_se > 0) {
      CHECK(b.patterns[k].coverage_se / a.patterns[k].coverage_se == doctest::Approx(1 / std::sqrt(2.0)).epsilon(0.2));
    }
    CHECK(b.patterns[k].outage_se / a.patterns[k].outage_se == doctest::Approx(1 / std::sqrt(2.0)).epsilon(0.2));
  }
}

TEST_CASE("halving the origin guard does not move the estimates") {
  auto c = scenario(0.0);
  const auto a = mc_metrics(c, 20000, 9, 4);
  c.origin_guard = 0.5e-3;
  const auto b = mc_metrics(c, 20000, 9, 4);
  for (std::size_t k = 0; k < a.patterns.size(); ++k) {
    CHECK(std::abs(a.patterns[k].outage - b.patterns[k].outage) <= 3 * a.patterns[k].outage_se);
    CHECK(std::abs(a.patterns[k].coverage - b.patterns[k].coverage) <= 3 * a.patterns[k].coverage_se + 1e-12);
  }
}

TEST_CASE("incident power distribution matches the inverted transform") {
  analytics::AnalyticsConfig ac;
  ac.poisson = analytics::PoissonTransform::windowed;
  analytics::Analyzer az(ac);
  const long long n = 100000;
  for (double alpha : {0.0, -0.5, -1.0}) {
    const auto c = scenario(alpha);
    auto x = sample_incident_power(c, 0, n, 55);
    std::sort(x.begin(), x.end());
    std::vector<double> rho;
    std::vector<double> ecdf;
    const int grid = 300;
    for (int i = 1; i < grid; ++i) {
      const auto idx = static_cast<std::size_t>(i * n / grid);
      if (x[idx] <= 0.0) continue;
      rho.push_back(x[idx]);
      ecdf.push_back(static_cast<double>(idx) / n);
    }
    const auto inv = az.distribution(c.patterns[0], alpha, rho);
    double ks = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
      ks = std::max(ks, std::abs(inv.cdf[i] - ecdf[i]));
      ks = std::max(ks, std::abs(inv.cdf[i] - ecdf[i] - 1.0 / n));
    }
    MESSAGE("alpha " << alpha << " KS " << ks);
    CHECK(ks < 0.01);
  }
}

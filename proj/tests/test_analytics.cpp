#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>

#include "abcomm/analytics/fredholm.hpp"
#include "abcomm/analytics/inversion.hpp"
#include "abcomm/analytics/link_budget.hpp"
#include "abcomm/analytics/metrics.hpp"
#include "abcomm/analytics/selection.hpp"
#include "abcomm/error.hpp"

using namespace abcomm;
using namespace abcomm::analytics;

namespace {

// Gauss-Legendre on [a, b] by Golub-Welsch.
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double beta = i / std::sqrt(4.0 * i * i - 1.0);
    j(i, i - 1) = j(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    x[i] = 0.5 * (b - a) * t + 0.5 * (a + b);
    w[i] = (b - a) * v * v;
  }
}

// Eigenvalues of l sqrt(w) K sqrt(w) on the disk, K the Ginibre kernel, by a
// polar product rule.
Eigen::VectorXd nystrom(const ShotNoiseModel& m, double s, int radial, int angular) {
  std::vector<double> r, wr;
  gauss_legendre(radial, 0.0, m.window_radius, r, wr);
  const int n = radial * angular;
  std::vector<std::complex<double>> pts(n);
  std::vector<double> scale(n);
  const double z = m.density;
  for (int i = 0; i < radial; ++i) {
    const double mult = s * m.power / (std::pow(r[i], m.path_loss) + s * m.power);
    for (int a = 0; a < angular; ++a) {
      const int idx = i * angular + a;
      pts[idx] = std::polar(r[i], 2 * M_PI * a / angular);
      scale[idx] = std::sqrt(mult * wr[i] * r[i] * 2 * M_PI / angular);
    }
  }
  Eigen::MatrixXcd k(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto e = M_PI * z * (pts[i] * std::conj(pts[j])) -
                     0.5 * M_PI * z * (std::norm(pts[i]) + std::norm(pts[j]));
      k(i, j) = m.portion * z * scale[i] * scale[j] * std::exp(e);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues().reverse();
  return ev;
}

PatternInput voip() { return reference_scenario()[0]; }

}  // namespace

TEST_CASE("activation threshold of the reference budget") {
  const auto d = derive(LinkBudget::reference());
  CHECK(d.p_low == doctest::Approx(2.51e-4).epsilon(2e-3));
  CHECK(d.p_up > d.p_low);
  auto b = LinkBudget::reference();
  b.activation = 0.0;
  CHECK(derive(b).p_low == 0.0);
}

TEST_CASE("effective power and a_4 of a busy VoIP class") {
  const auto b = LinkBudget::reference();
  const double pk = effective_power(b, 0.9);
  CHECK(pk == doctest::Approx(5.70e-2).epsilon(2e-3));
  CHECK(a_mu(4.0, 0.005, pk) == doctest::Approx(3.47e-5).epsilon(2e-3));
  CHECK(a_mu(4.0, 0.005, pk) == doctest::Approx(std::pow(M_PI * M_PI * 0.005 / 2, 2) * pk).epsilon(1e-12));
  CHECK(a_mu(4.0, 0.005, 2 * pk) == doctest::Approx(2 * a_mu(4.0, 0.005, pk)).epsilon(1e-14));
  CHECK(a_mu(3.0, 0.0, pk) == 0.0);
  CHECK(sinc(0.5) == doctest::Approx(2 / M_PI));
  CHECK_THROWS_AS(a_mu(2.0, 0.005, pk), DomainError);
}

TEST_CASE("budget validation names the field") {
  auto b = LinkBudget::reference(2.0);
  try {
    b.validate();
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("path_loss") != std::string::npos);
  }
}

TEST_CASE("Poisson closed form") {
  CHECK(laplace_ppp(0.0, 4.0, 0.005, 0.05) == cplx(1.0));
  const double a = a_mu(4.0, 0.005, 0.05);
  for (double s : {1.0, 100.0, 1e4}) {
    CHECK(laplace_ppp(s, 4.0, 0.005, 0.05).real() == doctest::Approx(std::exp(-std::sqrt(a * s))).epsilon(1e-14));
  }
}

TEST_CASE("kernel eigenvalues vanish at s = 0") {
  const ShotNoiseModel m{4.0, 0.03, 0.5, 0.02, 30.0};
  for (auto k : kernel_eigenvalues(0.0, m)) CHECK(k == cplx(0.0));
}

TEST_CASE("unit multiplier gives incomplete-gamma mode masses") {
  const ModeQuadrature q(0.03, 30.0, 4.0);
  const auto masses = q.mode_masses();
  const double u = M_PI * 0.03 * 900.0;
  CHECK(q.window_mass() == doctest::Approx(u).epsilon(1e-15));
  for (std::size_t n = 0; n < masses.size(); n += 7) {
    CHECK(std::abs(masses[n] - boost::math::gamma_p(n + 1.0, u)) < 1e-12);
  }
  ShotNoiseModel m{4.0, 0.03, 1.0, 1.0, 30.0};
  const auto k = kernel_eigenvalues(1e40, m, 60);
  for (int n = 0; n <= 60; n += 6) CHECK(std::abs(k[n].real() - boost::math::gamma_p(n + 1.0, u)) < 1e-10);
}

TEST_CASE("kernel eigenvalues match a dense 2-D discretization") {
  const ShotNoiseModel m{4.0, 0.2, 0.6, 0.05, 4.0};
  for (double s : {0.5, 40.0, 3000.0}) {
    const auto ev = nystrom(m, s, 40, 44);
    auto k = kernel_eigenvalues(s, m, 20);
    std::vector<double> lib;
    for (auto v : k) lib.push_back(v.real());
    std::sort(lib.rbegin(), lib.rend());
    for (int n = 0; n < 15; ++n) CHECK(std::abs(lib[n] - ev(n)) < 1e-6);
  }
}

TEST_CASE("Fredholm transform is 1 at the origin and bounded on the right half-plane") {
  const ShotNoiseModel m{4.0, 0.03, 0.5, 0.02, 30.0};
  auto quad = std::make_shared<const ModeQuadrature>(0.03, 30.0, 4.0);
  for (double alpha : {-1.0, -0.5, -0.25, -1e-3, 0.0}) {
    FredholmLaplace f(m, alpha, quad);
    CHECK(f.value(0.0) == cplx(1.0));
    for (cplx s : {cplx(1, 0), cplx(50, 300), cplx(1e3, -1e3), cplx(0, 1e4), cplx(1e5, 0)}) {
      CHECK(std::abs(f.value(s)) <= 1.0 + 1e-14);
    }
  }
}

TEST_CASE("stronger repulsion gives a smaller transform at real s") {
  const ShotNoiseModel m{4.0, 0.03, 1.0 / 6, 0.02, 30.0};
  auto quad = std::make_shared<const ModeQuadrature>(0.03, 30.0, 4.0);
  double prev = 1.0;
  for (double alpha : {0.0, -0.25, -0.5, -1.0}) {
    const double v = FredholmLaplace(m, alpha, quad).value(200.0).real();
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("Levy law values") {
  const double a4 = 3e-5;
  CHECK(levy_pdf_cdf(a4, a4 / 4).cdf == doctest::Approx(0.15730).epsilon(1e-4));
  CHECK(levy_pdf_cdf(a4, 1e12).cdf == doctest::Approx(1.0).epsilon(1e-6));
  for (double rho = 1e-7; rho < 1.0; rho *= 3.0) {
    const double h = rho * 1e-5;
    const double fd = (levy_pdf_cdf(a4, rho + h).cdf - levy_pdf_cdf(a4, rho - h).cdf) / (2 * h);
    const double pdf = levy_pdf_cdf(a4, rho).pdf;
    if (pdf > 1e-300) CHECK(std::abs(fd - pdf) <= 1e-6 * pdf);
  }
}

TEST_CASE("Talbot inversion of the Levy transform") {
  const double a4 = 3.47e-5;
  LogTransform f = [a4](cplx s) { return -std::sqrt(a4 * s); };
  std::vector<double> rho;
  for (int i = 0; i < 25; ++i) rho.push_back(std::pow(10.0, -8.0 + 8.0 * i / 24));
  const auto inv = invert_to_pdf_cdf(f, rho);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    CHECK(std::abs(inv.cdf[i] - std::erfc(std::sqrt(a4 / (4 * rho[i])))) < 1e-6);
  }
  CHECK(std::abs(talbot(f, 1e12, 48, true) - 1.0) < 1e-6);
}

TEST_CASE("inversion reports a transform that is not a distribution") {
  LogTransform bad = [](cplx s) { return std::log(2.0 / (1.0 + s)); };  // total mass 2
  const std::vector<double> rho{10.0, 100.0};
  CHECK_THROWS_AS(invert_to_pdf_cdf(bad, rho), NumericalError);
}

TEST_CASE("quadrature coverage path agrees with the erf form") {
  AnalyticsConfig slow;
  slow.levy_shortcut = false;
  Analyzer numeric(slow);
  Analyzer closed(AnalyticsConfig{});
  for (const auto& p : reference_scenario()) {
    CHECK(std::abs(numeric.outage(p, 0.0) - closed.outage(p, 0.0)) < 1e-6);
    CHECK(std::abs(numeric.coverage(p, 0.0) - closed.coverage(p, 0.0)) < 1e-6);
  }
}

TEST_CASE("outage and coverage limits") {
  Analyzer az(AnalyticsConfig{});
  auto cfg = AnalyticsConfig{};
  cfg.budget.activation = 1e-30;
  CHECK(Analyzer(cfg).outage(voip(), 0.0) < 1e-6);
  cfg = AnalyticsConfig{};
  cfg.budget.snr_threshold = 1e30;
  CHECK(Analyzer(cfg).coverage(voip(), 0.0) < 1e-12);
  cfg.levy_shortcut = false;
  CHECK(Analyzer(cfg).coverage(voip(), -0.5) < 1e-12);
}

TEST_CASE("coverage never exceeds the mass between the thresholds") {
  Analyzer az(AnalyticsConfig{});
  const auto& d = az.constants();
  const std::vector<double> rho{d.p_low, d.p_up};
  for (double alpha : {0.0, -0.5, -1.0}) {
    for (const auto& p : reference_scenario()) {
      const auto inv = az.distribution(p, alpha, rho);
      const double cov = az.coverage(p, alpha);
      CHECK(cov >= 0.0);
      CHECK(cov <= inv.cdf[1] - inv.cdf[0] + 1e-9);
      CHECK(cov <= 1.0 - az.outage(p, alpha) + 1e-9);
    }
  }
}

TEST_CASE("outage falls and coverage rises with a_4") {
  const auto d = derive(LinkBudget::reference());
  double prev_out = 2.0, prev_cov = -1.0;
  for (int i = 0; i < 20; ++i) {
    const double a4 = 1e-7 * std::pow(10.0, 4.0 * i / 19);
    const double out = levy_outage(a4, d.p_low);
    const double cov = levy_coverage(a4, d.p_low, d.p_up, LinkBudget::reference().snr_threshold, d.c0);
    CHECK(out < prev_out);
    CHECK(cov > prev_cov);
    prev_out = out;
    prev_cov = cov;
  }
}

TEST_CASE("argmax and tie rule") {
  const std::vector<double> one{0.3};
  CHECK(argmax(one).index == 0);
  const std::vector<double> a{1e-5, 3e-5, 2e-5};
  CHECK(argmax(a).index == 1);
  CHECK_FALSE(argmax(a).tie);
  const std::vector<double> tied{0.2, 0.5, 0.5};
  CHECK(argmax(tied).index == 1);
  CHECK(argmax(tied).tie);
}

TEST_CASE("claim selection is invariant under a common power rescaling") {
  const auto b = LinkBudget::reference();
  const auto scen = reference_scenario();
  for (double mu : {3.0, 4.0, 5.0}) {
    std::size_t base = 99;
    for (double c : {1e-3, 1.0, 7.5, 1e4}) {
      std::vector<PatternAnalytics> pa;
      for (const auto& p : scen) {
        PatternAnalytics x;
        x.a_mu = a_mu(mu, p.portion * 0.03, c * effective_power(b, p.busy_probability));
        pa.push_back(x);
      }
      const auto sel = select_traffic_claim(pa);
      if (base == 99) base = sel.index;
      CHECK(sel.index == base);
    }
  }
}

TEST_CASE("identical patterns tie and the first wins") {
  Analyzer az(AnalyticsConfig{});
  const std::vector<PatternInput> two{voip(), voip()};
  const auto res = az.analyze(two, 0.0);
  const auto ex = select_traffic_exhaustive(res);
  CHECK(ex.index == 0);
  CHECK(ex.tie);
  const std::vector<PatternInput> single{voip()};
  CHECK(select_traffic_exhaustive(az.analyze(single, 0.0)).index == 0);
  CHECK(select_traffic_claim(az.analyze(single, 0.0)).index == 0);
}

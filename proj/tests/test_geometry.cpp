#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "abcomm/error.hpp"
#include "abcomm/geometry.hpp"

using namespace abcomm;
using namespace abcomm::geometry;

namespace {

struct CountStats {
  double mean = 0.0;
  double variance = 0.0;
};

template <typename Sampler>
CountStats count_stats(Sampler sample, int draws) {
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double n = static_cast<double>(sample(i).size());
    s += n;
    s2 += n * n;
  }
  const double mean = s / draws;
  return {mean, (s2 - draws * mean * mean) / (draws - 1)};
}

bool inside(const PointPattern& p) {
  for (auto z : p.points) {
    if (std::abs(z) > p.window_radius) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("PPP mean count") {
  const double radius = 10.0;
  const double density = 9.0 / (M_PI * radius * radius);
  const auto st = count_stats(
      [&](int i) {
        auto rng = make_rng(1, 0, static_cast<std::uint64_t>(i));
        auto p = sample_ppp(density, radius, rng);
        CHECK(inside(p));
        return p;
      },
      10000);
  CHECK(std::abs(st.mean - 9.0) < 0.1);
  CHECK(st.variance / st.mean == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("PPP with vanishing mean is almost always empty") {
  const double radius = 1.0;
  const double density = 1e-9 / M_PI;
  Rng rng(3);
  int nonempty = 0;
  for (int i = 0; i < 1000; ++i) nonempty += sample_ppp(density, radius, rng).size() > 0;
  CHECK(nonempty == 0);
}

TEST_CASE("samplers are deterministic for a fixed seed") {
  for (double alpha : {0.0, -1.0, -0.5, -0.25}) {
    Rng a(42), b(42);
    const auto pa = sample_point_process(0.03, alpha, 30.0, a);
    const auto pb = sample_point_process(0.03, alpha, 30.0, b);
    CHECK(pa.points == pb.points);
    CHECK(pa.alpha == alpha);
    CHECK(inside(pa));
  }
  Rng a(5), b(5);
  CHECK(sample_ginibre(0.1, 8.0, a, GinibreMethod::eigenvalues).points ==
        sample_ginibre(0.1, 8.0, b, GinibreMethod::eigenvalues).points);
}

TEST_CASE("Ginibre intensity on the half-radius disk") {
  const double radius = 20.0, density = 0.03;
  const double half = radius / 2;
  for (auto method : {GinibreMethod::kostlan, GinibreMethod::eigenvalues}) {
    const int draws = method == GinibreMethod::kostlan ? 1000 : 300;
    double inner = 0.0;
    for (int i = 0; i < draws; ++i) {
      auto rng = make_rng(7, static_cast<std::uint64_t>(method), static_cast<std::uint64_t>(i));
      const auto p = sample_ginibre(density, radius, rng, method);
      CHECK(inside(p));
      for (auto z : p.points) inner += std::abs(z) <= half;
    }
    CHECK(inner / draws / (M_PI * half * half) == doctest::Approx(density).epsilon(0.03));
  }
}

TEST_CASE("Ginibre counts are sub-Poissonian") {
  const double radius = 10.0;
  const double density = 100.0 / (M_PI * radius * radius);
  const auto st = count_stats(
      [&](int i) {
        auto rng = make_rng(11, 0, static_cast<std::uint64_t>(i));
        return sample_ginibre(density, radius, rng);
      },
      10000);
  CHECK(std::sqrt(st.variance) < 10.0);
  // Dispersion well below one with a margin of many standard errors.
  CHECK(st.variance / st.mean < 0.5);
}

TEST_CASE("Ginibre pair correlation vanishes at short range") {
  const double density = 1.0 / M_PI, radius = 6.0, inner = 4.5;
  const double r0 = 0.3 / std::sqrt(M_PI * density);
  const int draws = 1000;
  double close_pairs = 0.0;
  double centers = 0.0;
  for (int i = 0; i < draws; ++i) {
    auto rng = make_rng(13, 0, static_cast<std::uint64_t>(i));
    const auto p = sample_ginibre(density, radius, rng, GinibreMethod::eigenvalues);
    for (std::size_t a = 0; a < p.size(); ++a) {
      if (std::abs(p.points[a]) > inner) continue;
      centers += 1.0;
      for (std::size_t b = 0; b < p.size(); ++b) {
        if (a != b && std::abs(p.points[a] - p.points[b]) < r0) close_pairs += 1.0;
      }
    }
  }
  // Ratio of observed neighbours to the Poisson expectation is the mean of g on [0, r0].
  const double g_mean = close_pairs / (centers * density * M_PI * r0 * r0);
  CHECK(g_mean < 0.5);
  const double x = M_PI * density * r0 * r0;
  const double g_theory = 1.0 - (1.0 - std::exp(-x)) / x;
  CHECK(g_mean == doctest::Approx(g_theory).epsilon(0.5));
}

TEST_CASE("alpha-GPP with m = 1 is the Ginibre sampler") {
  Rng a(21), b(21);
  CHECK(sample_alpha_gpp(0.05, -1.0, 15.0, a).points == sample_ginibre(0.05, 15.0, b).points);
}

TEST_CASE("alpha-GPP with m = 2 keeps the intensity") {
  const double radius = 20.0, density = 0.03;
  const auto st = count_stats(
      [&](int i) {
        auto rng = make_rng(23, 0, static_cast<std::uint64_t>(i));
        auto p = sample_alpha_gpp(density, -0.5, radius, rng);
        CHECK(inside(p));
        return p;
      },
      1000);
  CHECK(st.mean / (M_PI * radius * radius) == doctest::Approx(density).epsilon(0.03));
}

TEST_CASE("alpha-GPP with m = 64 approaches Poisson count variance") {
  const double radius = 10.0;
  const double density = 100.0 / (M_PI * radius * radius);
  const auto st = count_stats(
      [&](int i) {
        auto rng = make_rng(29, 0, static_cast<std::uint64_t>(i));
        return sample_alpha_gpp(density, -1.0 / 64, radius, rng);
      },
      4000);
  CHECK(st.variance == doctest::Approx(100.0).epsilon(0.1));
}

TEST_CASE("repulsion order") {
  CHECK(repulsion_order(-1.0) == 1);
  CHECK(repulsion_order(-0.25) == 4);
  CHECK(repulsion_order(-1.0 / 3) == 3);
  CHECK_THROWS_AS(repulsion_order(-0.3), DomainError);
  CHECK_THROWS_AS(repulsion_order(0.5), DomainError);
  Rng rng(1);
  CHECK_THROWS_AS(sample_alpha_gpp(0.03, -0.4, 30.0, rng), DomainError);
}

TEST_CASE("mode cutoff leaves a negligible tail") {
  const int n = ginibre_mode_cutoff(0.03, 30.0);
  CHECK(n > static_cast<int>(0.03 * M_PI * 900));
  CHECK(n < 200);
}

TEST_CASE("thinning with a single class labels everything") {
  Rng rng(2);
  auto p = sample_ppp(0.03, 30.0, rng);
  const std::vector<double> one{1.0};
  thin_by_traffic(p, one, rng);
  CHECK(p.labels.size() == p.size());
  for (int l : p.labels) CHECK(l == 0);
}

TEST_CASE("thinning reproduces the VoIP fraction") {
  PointPattern p;
  p.points.assign(10000, Point(0.0, 0.0));
  p.window_radius = 1.0;
  const std::vector<double> l{0.005 / 0.03, 0.01 / 0.03, 0.015 / 0.03};
  Rng rng(31);
  thin_by_traffic(p, l, rng);
  std::vector<int> counts(3, 0);
  for (int k : p.labels) ++counts.at(k);
  CHECK(std::accumulate(counts.begin(), counts.end(), 0) == 10000);
  const double q = 1.0 / 6.0;
  CHECK(std::abs(counts[0] / 1e4 - q) < 3 * std::sqrt(q * (1 - q) / 1e4));
}

TEST_CASE("thinning two points with equal portions gives four equally likely labelings") {
  std::vector<int> hist(4, 0);
  const std::vector<double> l{0.5, 0.5};
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) {
    auto rng = make_rng(37, 0, static_cast<std::uint64_t>(i));
    PointPattern p;
    p.points = {Point(0, 0), Point(1, 0)};
    thin_by_traffic(p, l, rng);
    ++hist[2 * p.labels[0] + p.labels[1]];
  }
  for (int h : hist) CHECK(std::abs(h / double(draws) - 0.25) < 3 * std::sqrt(0.25 * 0.75 / draws));
}

TEST_CASE("thinning rejects portions that do not sum to one") {
  PointPattern p;
  p.points = {Point(0, 0)};
  Rng rng(1);
  const std::vector<double> bad{0.5, 0.4};
  CHECK_THROWS_AS(thin_by_traffic(p, bad, rng), DomainError);
}

TEST_CASE("pattern CSV uses 1-based labels") {
  PointPattern p;
  p.points = {Point(1.5, -2.0)};
  p.labels = {0};
  std::ostringstream out;
  write_pattern_csv(out, p);
  CHECK(out.str() == "x,y,label\n1.5,-2,1\n");
}

#include "abcomm/analytics/selection.hpp"

#include <cmath>
#include <vector>

#include "abcomm/error.hpp"

namespace abcomm::analytics {

namespace {

bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

}  // namespace

Selection argmax(std::span<const double> scores) {
  if (scores.empty()) throw DomainError("selection needs at least one pattern");
  Selection s;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[s.index] && !same(scores[k], scores[s.index])) s.index = k;
  }
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (k != s.index && same(scores[k], scores[s.index])) s.tie = true;
  }
  return s;
}

Selection select_traffic_claim(std::span<const PatternAnalytics> patterns) {
  std::vector<double> v;
  for (const auto& p : patterns) v.push_back(p.a_mu);
  return argmax(v);
}

Selection select_traffic_exhaustive(std::span<const PatternAnalytics> patterns) {
  std::vector<double> v;
  for (const auto& p : patterns) v.push_back(p.coverage);
  return argmax(v);
}

}  // namespace abcomm::analytics

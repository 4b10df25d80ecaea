#pragma once

#include <cstddef>
#include <span>

#include "abcomm/analytics/metrics.hpp"

namespace abcomm::analytics {

struct Selection {
  std::size_t index = 0;  // 0-based
  bool tie = false;       // another candidate scored the same
};

/// Largest score, smallest index on ties (relative gap below 1e-12).
Selection argmax(std::span<const double> scores);

/// Largest a_mu.
Selection select_traffic_claim(std::span<const PatternAnalytics> patterns);

/// Largest analytic coverage.
Selection select_traffic_exhaustive(std::span<const PatternAnalytics> patterns);

}  // namespace abcomm::analytics

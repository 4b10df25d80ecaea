#pragma once

#include <vector>

#include <Eigen/Dense>

namespace abcomm::bnp {

struct MeanShiftResult {
  std::vector<int> labels;  // 0-based, in order of first appearance
  Eigen::MatrixXd modes;    // one row per cluster
};

/// Flat-kernel mean shift on the rows of `data`. Each point climbs to a mode;
/// modes closer than bandwidth/2 share a label.
MeanShiftResult mean_shift(const Eigen::MatrixXd& data, double bandwidth, int max_iterations = 500);

}  // namespace abcomm::bnp

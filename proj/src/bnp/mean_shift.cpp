#include "abcomm/bnp/mean_shift.hpp"

#include "abcomm/error.hpp"

namespace abcomm::bnp {

MeanShiftResult mean_shift(const Eigen::MatrixXd& data, double bandwidth, int max_iterations) {
  if (!(bandwidth > 0.0)) throw DomainError("mean_shift: bandwidth must be > 0");
  const Eigen::Index n = data.rows();
  const double bw2 = bandwidth * bandwidth;
  const double tol = 1e-9 * bandwidth;

  std::vector<Eigen::VectorXd> found;
  MeanShiftResult out;
  out.labels.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd x = data.row(i).transpose();
    for (int it = 0; it < max_iterations; ++it) {
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(x.size());
      int count = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if ((data.row(j).transpose() - x).squaredNorm() <= bw2) {
          sum += data.row(j).transpose();
          ++count;
        }
      }
      if (count == 0) break;
      Eigen::VectorXd next = sum / count;
      const double step = (next - x).norm();
      x = std::move(next);
      if (step <= tol) break;
    }
    int label = -1;
    for (std::size_t k = 0; k < found.size(); ++k) {
      if ((found[k] - x).norm() < 0.5 * bandwidth) {
        label = static_cast<int>(k);
        break;
      }
    }
    if (label < 0) {
      label = static_cast<int>(found.size());
      found.push_back(x);
    }
    out.labels[static_cast<std::size_t>(i)] = label;
  }
  out.modes.resize(static_cast<Eigen::Index>(found.size()), data.cols());
  for (std::size_t k = 0; k < found.size(); ++k) out.modes.row(static_cast<Eigen::Index>(k)) = found[k];
  return out;
}

}  // namespace abcomm::bnp

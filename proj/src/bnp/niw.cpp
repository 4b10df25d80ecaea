#include "abcomm/bnp/niw.hpp"

#include <cmath>
#include <numbers>

#include "abcomm/error.hpp"

namespace abcomm::bnp {

NIWHyperparams NIWHyperparams::defaults(int dimension) {
  NIWHyperparams h;
  h.scale = Eigen::MatrixXd::Identity(dimension, dimension);
  h.dof = dimension + 1.0;
  h.mean = Eigen::VectorXd::Zero(dimension);
  h.kappa = 0.5;
  return h;
}

void NIWHyperparams::validate() const {
  const auto d = mean.size();
  if (d < 1) throw DomainError("NIW: dimension must be >= 1");
  if (scale.rows() != d || scale.cols() != d) throw DomainError("NIW: scale must be D x D");
  if (!scale.isApprox(scale.transpose())) throw DomainError("NIW: scale must be symmetric");
  if (Eigen::LLT<Eigen::MatrixXd>(scale).info() != Eigen::Success) {
    throw DomainError("NIW: scale must be positive-definite");
  }
  if (!(dof > static_cast<double>(d) - 1.0)) throw DomainError("NIW: dof must exceed D - 1");
  if (!(kappa > 0.0)) throw DomainError("NIW: kappa must be > 0");
}

double log_multigamma(double a, int dimension) {
  double out = 0.25 * dimension * (dimension - 1) * std::log(std::numbers::pi);
  for (int j = 0; j < dimension; ++j) out += std::lgamma(a - 0.5 * j);
  return out;
}

NiwCluster::NiwCluster(const NIWHyperparams& prior)
    : prior_(&prior),
      sum_(Eigen::VectorXd::Zero(prior.dimension())),
      outer_(Eigen::MatrixXd::Zero(prior.dimension(), prior.dimension())) {}

void NiwCluster::add(const Eigen::Ref<const Eigen::VectorXd>& y) {
  ++count_;
  sum_ += y;
  outer_.noalias() += y * y.transpose();
  dirty_ = true;
}

void NiwCluster::remove(const Eigen::Ref<const Eigen::VectorXd>& y) {
  --count_;
  if (count_ == 0) {
    sum_.setZero();
    outer_.setZero();
  } else {
    sum_ -= y;
    outer_.noalias() -= y * y.transpose();
  }
  dirty_ = true;
}

NiwCluster::Posterior NiwCluster::posterior() const {
  const auto& h = *prior_;
  Posterior p;
  p.kappa = h.kappa + count_;
  p.dof = h.dof + count_;
  if (count_ == 0) {
    p.mean = h.mean;
    p.scale = h.scale;
    return p;
  }
  const double n = count_;
  const Eigen::VectorXd ybar = sum_ / n;
  const Eigen::MatrixXd scatter = outer_ - n * ybar * ybar.transpose();
  const Eigen::VectorXd diff = ybar - h.mean;
  p.mean = (h.kappa * h.mean + sum_) / p.kappa;
  p.scale = h.scale + scatter + (h.kappa * n / p.kappa) * diff * diff.transpose();
  p.scale = 0.5 * (p.scale + p.scale.transpose());
  return p;
}

void NiwCluster::refresh() const {
  if (!dirty_) return;
  const auto post = posterior();
  const int d = prior_->dimension();
  t_dof_ = post.dof - d + 1.0;
  const Eigen::MatrixXd t_scale = post.scale * ((post.kappa + 1.0) / (post.kappa * t_dof_));
  Eigen::LLT<Eigen::MatrixXd> llt(t_scale);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("NIW posterior scale is not positive-definite (cluster of size " +
                         std::to_string(count_) + ")");
  }
  chol_ = llt.matrixL();
  center_ = post.mean;
  const double log_det_t = 2.0 * chol_.diagonal().array().log().sum();
  t_log_norm_ = std::lgamma(0.5 * (t_dof_ + d)) - std::lgamma(0.5 * t_dof_) -
                0.5 * d * std::log(t_dof_ * std::numbers::pi) - 0.5 * log_det_t;
  Eigen::LLT<Eigen::MatrixXd> scale_llt(post.scale);
  log_det_scale_n_ = 2.0 * Eigen::MatrixXd(scale_llt.matrixL()).diagonal().array().log().sum();
  dirty_ = false;
}

double NiwCluster::log_predictive(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  refresh();
  const Eigen::VectorXd z =
      chol_.triangularView<Eigen::Lower>().solve(Eigen::VectorXd(y - center_));
  const int d = prior_->dimension();
  return t_log_norm_ - 0.5 * (t_dof_ + d) * std::log1p(z.squaredNorm() / t_dof_);
}

double NiwCluster::log_marginal_likelihood() const {
  if (count_ == 0) return 0.0;
  refresh();
  const auto& h = *prior_;
  const int d = h.dimension();
  const double n = count_;
  const double kappa_n = h.kappa + n;
  const double dof_n = h.dof + n;
  const double log_det_0 =
      2.0 * Eigen::MatrixXd(Eigen::LLT<Eigen::MatrixXd>(h.scale).matrixL())
                .diagonal().array().log().sum();
  return -0.5 * n * d * std::log(std::numbers::pi) + log_multigamma(0.5 * dof_n, d) -
         log_multigamma(0.5 * h.dof, d) + 0.5 * h.dof * log_det_0 -
         0.5 * dof_n * log_det_scale_n_ + 0.5 * d * (std::log(h.kappa) - std::log(kappa_n));
}

double log_posterior_predictive(const Eigen::Ref<const Eigen::VectorXd>& y,
                                const Eigen::Ref<const Eigen::MatrixXd>& members,
                                const NIWHyperparams& prior) {
  if (y.size() != prior.dimension() || (members.rows() > 0 && members.cols() != y.size())) {
    throw DomainError("posterior_predictive: dimension mismatch");
  }
  NiwCluster cluster(prior);
  for (Eigen::Index i = 0; i < members.rows(); ++i) cluster.add(members.row(i).transpose());
  return cluster.log_predictive(y);
}

double posterior_predictive(const Eigen::Ref<const Eigen::VectorXd>& y,
                            const Eigen::Ref<const Eigen::MatrixXd>& members,
                            const NIWHyperparams& prior) {
  return std::exp(log_posterior_predictive(y, members, prior));
}

}  // namespace abcomm::bnp

#pragma once

#include <Eigen/Dense>

namespace abcomm::bnp {

/// Normal-Inverse-Wishart prior: Sigma ~ IW(scale, dof), mu | Sigma ~ N(mean, Sigma / kappa).
struct NIWHyperparams {
  Eigen::MatrixXd scale;  // Lambda_0, D x D, symmetric positive-definite
  double dof = 0.0;       // nu_0 > D - 1
  Eigen::VectorXd mean;   // mu_0
  double kappa = 0.0;     // kappa_0 > 0

  int dimension() const { return static_cast<int>(mean.size()); }

  /// Identity scale, nu_0 = D + 1, zero mean, kappa_0 = 0.5.
  static NIWHyperparams defaults(int dimension);

  /// Throws DomainError when an invariant is violated.
  void validate() const;
};

/// Sufficient statistics of one cluster plus a cached Student-t predictive.
class NiwCluster {
 public:
  explicit NiwCluster(const NIWHyperparams& prior);

  void add(const Eigen::Ref<const Eigen::VectorXd>& y);
  void remove(const Eigen::Ref<const Eigen::VectorXd>& y);
  int size() const { return count_; }

  /// log t_{nu_n-D+1}(y | mu_n, Lambda_n (kappa_n+1) / (kappa_n (nu_n-D+1))).
  double log_predictive(const Eigen::Ref<const Eigen::VectorXd>& y) const;

  /// log p(members) with the Gaussian parameters integrated out.
  double log_marginal_likelihood() const;

  struct Posterior {
    Eigen::VectorXd mean;
    Eigen::MatrixXd scale;
    double kappa;
    double dof;
  };
  Posterior posterior() const;

 private:
  void refresh() const;

  const NIWHyperparams* prior_;
  int count_ = 0;
  Eigen::VectorXd sum_;
  Eigen::MatrixXd outer_;

  mutable bool dirty_ = true;
  mutable Eigen::VectorXd center_;
  mutable Eigen::MatrixXd chol_;  // lower Cholesky factor of the t scale matrix
  mutable double t_dof_ = 0.0;
  mutable double t_log_norm_ = 0.0;
  mutable double log_det_scale_n_ = 0.0;
};

/// Multivariate Student-t predictive density of `y` given the rows of
/// `members` (empty -> prior predictive).
double log_posterior_predictive(const Eigen::Ref<const Eigen::VectorXd>& y,
                                const Eigen::Ref<const Eigen::MatrixXd>& members,
                                const NIWHyperparams& prior);
double posterior_predictive(const Eigen::Ref<const Eigen::VectorXd>& y,
                            const Eigen::Ref<const Eigen::MatrixXd>& members,
                            const NIWHyperparams& prior);

/// log of the multivariate gamma function Gamma_D(a).
double log_multigamma(double a, int dimension);

}  // namespace abcomm::bnp

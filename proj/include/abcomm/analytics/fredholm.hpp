#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace abcomm::analytics {

using cplx = std::complex<double>;

/// Aggregate power from one traffic class of an alpha-Ginibre field seen at
/// the origin: sum over class-k points of p_k h / |x|^mu on |x| <= R_O.
struct ShotNoiseModel {
  double path_loss = 4.0;      // mu
  double density = 0.0;        // total zeta (sets the kernel scale)
  double portion = 1.0;        // l_k = zeta_k / zeta
  double power = 0.0;          // p_k
  double window_radius = 30.0; // R_O

  double class_density() const { return portion * density; }
};

/// Fixed composite Gauss-Legendre rule in u = pi zeta r^2 on [0, pi zeta R_O^2]
/// together with the Ginibre mode densities u^n e^{-u}/n! at every node.
/// The grid is refined once, at construction, until every mode integral is
/// stable for multipliers sp/(r^mu + sp) over a wide range of complex sp.
class ModeQuadrature {
 public:
  ModeQuadrature(double density, double window_radius, double path_loss, double tolerance = 1e-14);

  double density() const { return density_; }
  double window_radius() const { return window_radius_; }
  double path_loss() const { return path_loss_; }
  /// pi zeta R_O^2.
  double window_mass() const { return upper_; }
  /// Number of modes tabulated.
  int modes() const { return modes_; }
  std::size_t nodes() const { return u_.size(); }

  /// Smallest n with portion * P(n+1, U) < threshold (P the regularized
  /// lower incomplete gamma), capped at modes() - 1.
  int mode_cutoff(double portion, double threshold = 1e-12) const;

  /// kappa_n = portion * int w(u) u^n e^{-u}/n! du for n = 0..count-1, with
  /// w = sp/(r^mu + sp).
  void eigenvalues(cplx sp, double portion, int count, std::vector<cplx>& out) const;

  /// Same integral with w = 1 (the mode mass inside the window).
  std::vector<double> mode_masses() const;

 private:
  struct Panel {
    double a, b;
  };
  void build(const std::vector<Panel>& panels);
  std::vector<Panel> refine(std::vector<Panel> panels, double tolerance) const;
  bool panel_converged(const Panel& p, double tolerance) const;
  void panel_integrals(double a, double b, std::span<const cplx> probes, std::vector<cplx>& out) const;

  double density_, window_radius_, path_loss_, upper_;
  int modes_ = 0;
  std::vector<double> u_, r_mu_;
  std::vector<int> first_;             // first mode at node j
  std::vector<std::size_t> offset_;    // start of node j in weights_
  std::vector<double> weights_;        // node weight * mode density
};

/// Laplace transform of the shot noise for alpha in [-1, 0]:
/// prod_n (1 + alpha kappa_n)^{-1/alpha}, or exp(-sum kappa_n) at alpha = 0
/// (Poisson field restricted to the same window).
class FredholmLaplace {
 public:
  FredholmLaplace(ShotNoiseModel model, double alpha, std::shared_ptr<const ModeQuadrature> quad = nullptr);

  cplx log_value(cplx s) const;
  cplx value(cplx s) const { return std::exp(log_value(s)); }
  std::vector<cplx> kernel_eigenvalues(cplx s) const;
  int mode_count() const { return n_modes_; }
  const ShotNoiseModel& model() const { return model_; }
  double alpha() const { return alpha_; }

 private:
  ShotNoiseModel model_;
  double alpha_;
  bool integer_power_;
  std::shared_ptr<const ModeQuadrature> quad_;
  int n_modes_;
};

/// kappa_0..kappa_{n_max} for the kernel of class k at transform variable s.
std::vector<cplx> kernel_eigenvalues(cplx s, const ShotNoiseModel& model, int n_max = -1);

/// Infinite-plane Poisson closed form exp(-(a_mu s)^{2/mu}).
cplx laplace_ppp(cplx s, double path_loss, double class_density, double power);
cplx log_laplace_ppp(cplx s, double path_loss, double class_density, double power);

/// Dispatches alpha = 0 to laplace_ppp, otherwise the Fredholm product.
cplx laplace_pi(cplx s, const ShotNoiseModel& model, double alpha);

}  // namespace abcomm::analytics

#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace abcomm::analytics {

/// log F(s) of a Laplace transform, analytic off the negative real axis.
using LogTransform = std::function<std::complex<double>(std::complex<double>)>;

/// Fixed Talbot contour s(theta) = r theta (cot theta + i), r = 2M/(5t).
/// Returns f(t), or the cdf int_0^t f when `cdf` is set.
double talbot(const LogTransform& log_f, double t, int nodes = 48, bool cdf = false);

struct InversionOptions {
  int nodes = 48;
  /// Second contour used to estimate the inversion residual; 0 disables.
  int check_nodes = 36;
  double tolerance = 1e-6;
};

struct Inversion {
  std::vector<double> rho, pdf, cdf;
  double max_residual = 0.0;  // largest cdf disagreement between contours
  std::vector<std::string> warnings;
};

/// pdf and cdf on a grid of positive values. cdf values outside [0, 1] by
/// more than the tolerance, or a residual above it, raise NumericalError
/// naming the worst rho. Smaller excursions are clipped, and decreases above
/// the tolerance are reported in `warnings` before a running maximum is
/// applied.
Inversion invert_to_pdf_cdf(const LogTransform& log_f, std::span<const double> rho,
                            const InversionOptions& options = {});

}  // namespace abcomm::analytics

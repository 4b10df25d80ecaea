#include "abcomm/analytics/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "abcomm/error.hpp"

namespace abcomm::analytics {

using cplx = std::complex<double>;

double talbot(const LogTransform& log_f, double t, int nodes, bool cdf) {
  if (!(t > 0.0)) throw DomainError("Laplace inversion needs t > 0");
  if (nodes < 2) throw DomainError("Laplace inversion needs at least 2 contour nodes");
  const double m = nodes;
  const double r = 2.0 * m / (5.0 * t);
  auto exponent = [&](cplx s) {
    cplx e = t * s + log_f(s);
    if (cdf) e -= std::log(s);
    return e;
  };
  double sum = 0.5 * std::exp(exponent(cplx(r))).real();
  for (int k = 1; k < nodes; ++k) {
    const double theta = k * std::numbers::pi / m;
    const double cot = std::cos(theta) / std::sin(theta);
    const cplx s(r * theta * cot, r * theta);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    sum += (std::exp(exponent(s)) * cplx(1.0, sigma)).real();
  }
  return r / m * sum;
}

Inversion invert_to_pdf_cdf(const LogTransform& log_f, std::span<const double> rho,
                            const InversionOptions& options) {
  Inversion out;
  out.rho.assign(rho.begin(), rho.end());
  out.pdf.resize(rho.size());
  out.cdf.resize(rho.size());
  const double tol = options.tolerance;
  double worst_rho = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double t = rho[i];
    if (!(t > 0.0)) throw DomainError("inversion grid values must be > 0");
    out.pdf[i] = talbot(log_f, t, options.nodes, false);
    double c = talbot(log_f, t, options.nodes, true);
    if (options.check_nodes > 0) {
      const double residual = std::abs(c - talbot(log_f, t, options.check_nodes, true));
      if (residual > out.max_residual) {
        out.max_residual = residual;
        worst_rho = t;
      }
    }
    if (!std::isfinite(c) || c < -tol || c > 1.0 + tol) {
      std::ostringstream msg;
      msg << "inverted cdf " << c << " outside [0, 1] at rho = " << t;
      throw NumericalError(msg.str());
    }
    out.cdf[i] = std::clamp(c, 0.0, 1.0);
  }
  if (out.max_residual > tol) {
    std::ostringstream msg;
    msg << "inversion residual " << out.max_residual << " above tolerance at rho = " << worst_rho;
    throw NumericalError(msg.str());
  }
  // monotonicity, in grid order when the grid is increasing
  if (std::is_sorted(out.rho.begin(), out.rho.end())) {
    double running = 0.0;
    for (std::size_t i = 0; i < out.cdf.size(); ++i) {
      if (running - out.cdf[i] > tol) {
        std::ostringstream msg;
        msg << "cdf decreases by " << running - out.cdf[i] << " at rho = " << out.rho[i];
        out.warnings.push_back(msg.str());
      }
      running = std::max(running, out.cdf[i]);
      out.cdf[i] = running;
    }
  }
  return out;
}

}  // namespace abcomm::analytics

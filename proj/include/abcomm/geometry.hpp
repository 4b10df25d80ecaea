#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "abcomm/rng.hpp"

namespace abcomm::geometry {

using Point = std::complex<double>;

/// Points on the disk |x| <= R_O around the origin.
struct PointPattern {
  std::vector<Point> points;
  double density = 0.0;        // zeta, points/m^2
  double alpha = 0.0;          // 0 is the Poisson limit
  double window_radius = 0.0;  // R_O, m
  std::vector<int> labels;     // 0-based traffic class per point; empty before thinning

  std::size_t size() const { return points.size(); }
};

enum class GinibreMethod {
  kostlan,     // independent Gamma moduli; exact for radial statistics
  eigenvalues  // spectrum of a complex Gaussian matrix; exact joint law
};

/// Smallest N with P(Gamma(N, 1) <= pi zeta R_O^2) < tail.
int ginibre_mode_cutoff(double density, double window_radius, double tail = 1e-6);

/// m for alpha = -1/m; throws DomainError otherwise.
int repulsion_order(double alpha);

PointPattern sample_ppp(double density, double window_radius, Rng& rng);

PointPattern sample_ginibre(double density, double window_radius, Rng& rng,
                            GinibreMethod method = GinibreMethod::kostlan);

/// Superposition of m independent Ginibre patterns of intensity zeta, each
/// independently thinned with retention 1/m.
PointPattern sample_alpha_gpp(double density, double alpha, double window_radius, Rng& rng,
                              GinibreMethod method = GinibreMethod::kostlan);

/// alpha = 0 gives a PPP, otherwise sample_alpha_gpp.
PointPattern sample_point_process(double density, double alpha, double window_radius, Rng& rng,
                                  GinibreMethod method = GinibreMethod::kostlan);

/// Labels every point k with probability portions[k]. Portions must sum to 1.
void thin_by_traffic(PointPattern& pattern, std::span<const double> portions, Rng& rng);

/// `x,y,label` rows (label 1-based, blank when unlabeled).
void write_pattern_csv(std::ostream& out, const PointPattern& pattern);

}  // namespace abcomm::geometry

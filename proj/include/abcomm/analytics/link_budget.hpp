#pragma once

namespace abcomm::analytics {

/// Physical parameters, all in linear units (W, m, linear gain).
struct LinkBudget {
  double pu_power = 0.2;          // P_PU
  double pu_gain = 0.0;           // G_PU
  double st_gain = 0.0;           // G_ST
  double sr_gain = 0.0;           // G_SR
  double wavelength = 0.0;        // m
  double efficiency = 0.6;        // eta
  double path_loss = 4.0;         // mu
  double reference_distance = 1;  // d_0
  double link_distance = 3.0;     // d_TR
  double noise_power = 0.0;       // N_0 * B
  double activation = 0.0;        // rho_B
  double snr_threshold = 0.0;     // tau_B
  double max_reflected = 0.2;     // P_max

  /// 1.8 GHz, 0.2 W / 6 dBi PUs, 1.8 dBi SUs, P_max 0.2 W, rho_B -36 dBm,
  /// tau_B 3 dB, d_TR 3 m, -130 dBm/Hz over 1 Hz, eta 0.6, d_0 1 m.
  static LinkBudget reference(double path_loss = 4.0);

  /// Throws DomainError naming the first invalid field.
  void validate() const;
};

struct DerivedConstants {
  double cross_section;     // Delta sigma, m^2
  double aperture_sr;       // A_e at SR, m^2
  double p_low;             // W
  double p_up;              // W
  double c0;                // SNR per watt of incident power (per unit fading)
  double harvest_factor;    // P_E / P_I
  double unit_pu_power;     // P_PU G_PU / (4 pi d_0^{2-mu}), i.e. p_k at p_b = 1
};

DerivedConstants derive(const LinkBudget& b);

/// p_k = p_b P_PU G_PU / (4 pi d_0^{2-mu}).
double effective_power(const LinkBudget& b, double busy_probability);

/// Normalized sinc, sin(pi x)/(pi x).
double sinc(double x);

/// a_mu = [pi zeta_k / sinc(2/mu)]^{mu/2} p_k.
double a_mu(double path_loss, double density, double effective_power);

}  // namespace abcomm::analytics

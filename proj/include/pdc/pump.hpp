#pragma once

namespace pdc {

// Gaussian pump: transverse radius w_p, duration tau_p. Bandwidth and
// duration are linked by dlambda_p = 4 pi sqrt(2 ln 2) c / (omega_p0^2 tau_p).
struct PumpConfig {
  double lambda_p0 = 349e-9;  // m
  double w_p = 1e-3;          // m
  double tau_p = 0.0;         // s
  bool normal_incidence = true;

  double omega_p0() const;
  double dlambda_p() const;  // intensity FWHM in wavelength, m
};

double tau_from_dlambda(double lambda_p0, double dlambda_p);

// E_p_perp(q) = w_p / sqrt(2 pi) * exp(-w_p^2 q^2 / 4); unit L2 norm over the
// 2D transverse plane.
double pump_spatial_spectrum(double q, const PumpConfig& pump);

// E_p_par(omega) = sqrt(tau_p / sqrt(2 pi)) * exp(-tau_p^2 (omega-omega_p0)^2 / 4);
// unit L2 norm over omega.
double pump_spectrum(double omega, const PumpConfig& pump);

}  // namespace pdc

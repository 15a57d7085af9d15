#include "pdc/pump.hpp"

#include <cmath>
#include <stdexcept>

#include "pdc/constants.hpp"

namespace pdc {

double PumpConfig::omega_p0() const { return 2 * pi * c_light / lambda_p0; }

double PumpConfig::dlambda_p() const {
  double w0 = omega_p0();
  return 4 * pi * std::sqrt(2 * std::log(2.0)) * c_light / (w0 * w0 * tau_p);
}

double tau_from_dlambda(double lambda_p0, double dlambda_p) {
  if (!(dlambda_p > 0))
    throw std::invalid_argument("tau_from_dlambda: dlambda_p must be > 0");
  double w0 = 2 * pi * c_light / lambda_p0;
  return 4 * pi * std::sqrt(2 * std::log(2.0)) * c_light / (w0 * w0 * dlambda_p);
}

double pump_spatial_spectrum(double q, const PumpConfig& pump) {
  if (q < 0) throw std::domain_error("pump_spatial_spectrum: q must be >= 0");
  double w = pump.w_p;
  return w / std::sqrt(2 * pi) * std::exp(-w * w * q * q / 4.0);
}

double pump_spectrum(double omega, const PumpConfig& pump) {
  if (!(omega > 0)) throw std::domain_error("pump_spectrum: omega must be > 0");
  double t = pump.tau_p;
  double d = omega - pump.omega_p0();
  return std::sqrt(t / std::sqrt(2 * pi)) * std::exp(-t * t * d * d / 4.0);
}

}  // namespace pdc

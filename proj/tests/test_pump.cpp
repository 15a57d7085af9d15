#include <doctest.h>

#include <cmath>

#include "pdc/constants.hpp"
#include "pdc/grid.hpp"
#include "pdc/pump.hpp"

using namespace pdc;

TEST_SUITE("pump") {

TEST_CASE("duration-bandwidth link and round trip") {
  CHECK(tau_from_dlambda(349e-9, 0.5e-9) ==
        doctest::Approx(3.0453555348e-13).epsilon(1e-9));
  PumpConfig p;
  p.tau_p = tau_from_dlambda(p.lambda_p0, 0.1e-9);
  CHECK(p.dlambda_p() == doctest::Approx(0.1e-9).epsilon(1e-12));
  CHECK(p.omega_p0() ==
        doctest::Approx(2 * pi * c_light / 349e-9).epsilon(1e-14));
}

TEST_CASE("spatial spectrum has unit L2 norm over the transverse plane") {
  PumpConfig p;
  p.w_p = 0.7e-3;
  // 1e-4 amplitude support ends at q = 2 sqrt(ln 1e4) / w_p.
  double q_hi = 4.0 * std::sqrt(std::log(1e4)) / p.w_p;
  Grid g = gauss_legendre(0.0, q_hi, 200, GridKind::radial);
  double norm = 0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    double e = pump_spatial_spectrum(g.points(i), p);
    norm += 2 * pi * g.points(i) * e * e * g.weights(i);
  }
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
  // Gaussian 1/e^2-intensity check: |E(2/w)|^2 / |E(0)|^2 = e^-2.
  double r = pump_spatial_spectrum(2.0 / p.w_p, p) / pump_spatial_spectrum(0.0, p);
  CHECK(r * r == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("spectrum has unit L2 norm and the configured FWHM") {
  PumpConfig p;
  p.tau_p = tau_from_dlambda(p.lambda_p0, 0.3e-9);
  double w0 = p.omega_p0();
  double half_support = 10.0 / p.tau_p;
  Grid g = gauss_legendre(w0 - half_support, w0 + half_support, 300,
                          GridKind::spectral);
  double norm = 0, peak = pump_spectrum(w0, p);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    double e = pump_spectrum(g.points(i), p);
    norm += e * e * g.weights(i);
  }
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
  // Intensity FWHM in omega: 2 sqrt(2 ln 2) / tau.
  double dw = std::sqrt(2.0 * std::numbers::ln2) / p.tau_p;
  double r = pump_spectrum(w0 + dw, p) / peak;
  CHECK(r * r == doctest::Approx(0.5).epsilon(1e-12));
}

}  // TEST_SUITE

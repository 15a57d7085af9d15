#include <doctest.h>

#include <cmath>
#include <complex>

#include "pdc/constants.hpp"
#include "pdc/kernels.hpp"
#include "pdc/pump.hpp"
#include "pdc/schmidt.hpp"

using namespace pdc;

namespace {
constexpr double deg = pi / 180.0;

CrystalConfig bbo() {
  CrystalConfig c;
  c.cut_angle_theta = 36.3 * deg;
  c.sellmeier = sellmeier_named("eimerl1987");
  return c;
}

PumpConfig pump_mm(double w_p, double dlambda = 0.1e-9) {
  PumpConfig p;
  p.w_p = w_p;
  p.tau_p = tau_from_dlambda(p.lambda_p0, dlambda);
  return p;
}
}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("mismatches vanish at the phase-matching center") {
  CrystalConfig c = bbo();
  Geometry g = solve_geometry(c, 349e-9);
  double omega_s0 = 2 * pi * c_light / g.lambda_s0;
  CHECK(std::abs(delta_kz_transverse(g.k_perp0, g.k_perp0, 0.0, g)) *
            c.length_L / 2 <
        1e-8);
  CHECK(std::abs(delta_k_spectral(omega_s0, omega_s0, g, c)) * c.length_L / 2 <
        1e-8);
  // Swap symmetry of the transverse mismatch.
  double a = delta_kz_transverse(g.k_perp0 * 1.01, g.k_perp0 * 0.98, 0.13, g);
  double b = delta_kz_transverse(g.k_perp0 * 0.98, g.k_perp0 * 1.01, -0.13, g);
  CHECK(std::abs(a - b) < 1e-7);
}

TEST_CASE("radial span golden at w_p = 1 mm") {
  CrystalConfig c = bbo();
  Geometry g = solve_geometry(c, 349e-9);
  PumpConfig p = pump_mm(1.0e-3);
  RadialSpan s = radial_span(g, c, p);
  CHECK(s.lo == doctest::Approx(1233840.272623).epsilon(1e-6));
  CHECK(s.hi == doctest::Approx(1312561.722824).epsilon(1e-6));
  CHECK(s.u_max ==
        doctest::Approx(std::sqrt(std::log(1e4)) / p.w_p).epsilon(1e-12));
  // The retained sinc range really ends at |dkz| L/2 = 8 pi on the diagonal.
  double edge = g.k_perp0 + s.t_max;
  CHECK(std::abs(delta_kz_transverse(edge, edge, 0.0, g)) * c.length_L / 2 ==
        doctest::Approx(8 * pi).epsilon(1e-6));
}

TEST_CASE("azimuthal window golden at w_p = 1 mm") {
  PumpConfig p = pump_mm(1.0e-3);
  RadialSpan ring{};
  ring.lo = 1273200.997723;
  CHECK(azimuthal_window(p, ring) ==
        doctest::Approx(5.959102812906e-3).epsilon(1e-9));
  // A very small pump would need more than the whole circle; cap at pi.
  PumpConfig tiny = pump_mm(1.0e-6);
  CHECK(azimuthal_window(tiny, ring) == pi);
}

TEST_CASE("spectral span auto-sizing goldens") {
  CrystalConfig c = bbo();
  Geometry g = solve_geometry(c, 349e-9);
  SpectralSpan s05 = spectral_span(g, c, pump_mm(1e-3, 0.5e-9));
  CHECK(s05.n == 2048);
  CHECK(s05.half == doctest::Approx(3.168795306e14).epsilon(1e-6));
  SpectralSpan s01 = spectral_span(g, c, pump_mm(1e-3, 0.1e-9));
  CHECK(s01.n == 3072);
  // Override bypasses the auto size and its cap but not the span.
  SpectralSpan s_ov = spectral_span(g, c, pump_mm(1e-3, 0.1e-9), 6144);
  CHECK(s_ov.n == 6144);
  CHECK(s_ov.half == doctest::Approx(s01.half).epsilon(1e-14));
}

TEST_CASE("transverse value at the ring center is the measure times pump peak") {
  CrystalConfig c = bbo();
  Geometry g = solve_geometry(c, 349e-9);
  PumpConfig p = pump_mm(1.0e-3);
  std::complex<double> t0 =
      transverse_value(g.k_perp0, g.k_perp0, 0.0, g, c, p);
  // x = 0: sinc = 1 and no phase, so t = sqrt(k0 k0) E_p(0).
  CHECK(t0.real() == doctest::Approx(g.k_perp0 * pump_spatial_spectrum(0.0, p))
                         .epsilon(1e-9));
  CHECK(std::abs(t0.imag()) < std::abs(t0.real()) * 1e-9);
}

TEST_CASE("kernel norm is invariant under grid refinement") {
  CrystalConfig c = bbo();
  Geometry g = solve_geometry(c, 349e-9);
  PumpConfig p = pump_mm(1e-3, 0.5e-9);
  // Fixed box around the degenerate point, well resolved at both sizes.
  double w0 = 2 * pi * c_light / g.lambda_s0;
  Grid g1 = gauss_legendre(w0 - 8e12, w0 + 8e12, 256, GridKind::spectral);
  Grid g2 = gauss_legendre(w0 - 8e12, w0 + 8e12, 384, GridKind::spectral);
  double n1 = kernel_norm(build_spectral_kernel(g, c, p, g1, g1));
  double n2 = kernel_norm(build_spectral_kernel(g, c, p, g2, g2));
  CHECK(n1 == doctest::Approx(n2).epsilon(1e-8));
}

TEST_CASE("pump-detuned spectral grids are flagged negligible") {
  CrystalConfig c = bbo();
  Geometry g = solve_geometry(c, 349e-9);
  PumpConfig p = pump_mm(1e-3, 0.5e-9);
  double w0 = 2 * pi * c_light / g.lambda_s0;
  Grid off = gauss_legendre(1.05 * w0 - 1e12, 1.05 * w0 + 1e12, 16,
                            GridKind::spectral);
  CHECK(build_spectral_kernel(g, c, p, off, off).negligible_norm);
  Grid on = gauss_legendre(w0 - 1e12, w0 + 1e12, 16, GridKind::spectral);
  CHECK_FALSE(build_spectral_kernel(g, c, p, on, on).negligible_norm);
  Grid ring = radial_grid(radial_span(g, c, p), 32);
  CHECK_FALSE(build_transverse_section(g, c, p, ring, ring).negligible_norm);
}

TEST_CASE("azimuthal-order scan matches the frozen reduced-grid values") {
  CrystalConfig c = bbo();
  Geometry g = solve_geometry(c, 349e-9);
  PumpConfig p = pump_mm(0.3e-3);
  Grid gr = radial_grid(radial_span(g, c, p), 64);
  TransverseScan scan =
      scan_transverse_orders(g, c, p, gr, gr, 128, 8192, 1e-4, 1);

  // The scan itself runs in single precision; the stop index may move by an
  // order or two against the double-precision reference value of 1160.
  CHECK(scan.m_stop >= 1158);
  CHECK(scan.m_stop <= 1162);
  CHECK_FALSE(scan.truncated_by_m_max);
  REQUIRE(int(scan.nu.size()) == scan.m_stop);
  // Every retained order sits above the stop gate.
  CHECK(scan.nu.back() >= 1e-4 * scan.nu.front());

  TransverseModeSummary sm = transverse_summary(scan);
  CHECK(sm.K_k == doctest::Approx(1.230291944).epsilon(1e-3));
  CHECK(sm.K_phi == doctest::Approx(676.9916971).epsilon(1e-3));
  CHECK(sm.K_kphi == doctest::Approx(832.8974312).epsilon(1e-3));

  // Per-order moments agree with a double-precision component build.
  for (int m : {0, 7}) {
    KernelMatrix km = build_transverse_component(m, g, c, p, gr, gr, 128);
    CHECK(scan.nu[m] == doctest::Approx(kernel_norm(km)).epsilon(1e-4));
    if (m == 0) {
      DecomposeOptions opts;
      opts.values_only = true;
      opts.coeff_truncation = 0.0;
      Eigen::VectorXd lam = decompose(km, opts).coefficients;
      double s4 = lam.array().pow(4).sum();
      CHECK(scan.sum_lambda4[0] == doctest::Approx(s4).epsilon(1e-4));
    }
  }

  // m_max truncation is reported.
  TransverseScan cut =
      scan_transverse_orders(g, c, p, gr, gr, 128, 16, 1e-4, 1);
  CHECK(cut.m_stop == 17);
  CHECK(cut.truncated_by_m_max);
}

TEST_CASE("scan results do not depend on the worker count") {
  CrystalConfig c = bbo();
  Geometry g = solve_geometry(c, 349e-9);
  PumpConfig p = pump_mm(0.3e-3);
  Grid gr = radial_grid(radial_span(g, c, p), 48);
  TransverseScan s1 = scan_transverse_orders(g, c, p, gr, gr, 96, 256, 1e-4, 1);
  TransverseScan s4 = scan_transverse_orders(g, c, p, gr, gr, 96, 256, 1e-4, 4);
  REQUIRE(s1.nu.size() == s4.nu.size());
  for (size_t i = 0; i < s1.nu.size(); ++i) {
    CHECK(s1.nu[i] == s4.nu[i]);
    CHECK(s1.sum_lambda4[i] == s4.sum_lambda4[i]);
  }
}

}  // TEST_SUITE

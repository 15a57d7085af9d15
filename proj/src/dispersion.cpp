#include "pdc/dispersion.hpp"

#include <cmath>
#include <stdexcept>

#include "pdc/constants.hpp"

namespace pdc {

SellmeierSet sellmeier_named(const std::string& name) {
  SellmeierSet s;
  s.name = name;
  if (name == "eimerl1987") {
    // D. Eimerl et al., J. Appl. Phys. 62, 1968 (1987), beta-BaB2O4.
    s.ordinary.abcd = {2.7405, 0.0184, 0.0179, 0.0155};
    s.extraordinary.abcd = {2.3730, 0.0128, 0.0156, 0.0044};
    return s;
  }
  if (name == "kato1986") {
    // K. Kato, IEEE J. Quantum Electron. 22, 1013 (1986).
    s.ordinary.abcd = {2.7359, 0.01878, 0.01822, 0.01354};
    s.extraordinary.abcd = {2.3753, 0.01224, 0.01667, 0.01516};
    return s;
  }
  throw std::invalid_argument("unknown Sellmeier set '" + name + "'");
}

static double n2_eval(const SellmeierCoeffs& c, double lam_um) {
  double l2 = lam_um * lam_um;
  return c.abcd[0] + c.abcd[1] / (l2 - c.abcd[2]) - c.abcd[3] * l2;
}

static void check_window(double lambda, const CrystalConfig& crystal) {
  const auto& s = crystal.sellmeier;
  if (lambda < s.window_lo || lambda > s.window_hi)
    throw std::domain_error(
        "wavelength " + std::to_string(lambda * 1e9) +
        " nm outside Sellmeier validity window [" +
        std::to_string(s.window_lo * 1e6) + ", " +
        std::to_string(s.window_hi * 1e6) + "] um");
}

double index_ordinary(double lambda, const CrystalConfig& crystal) {
  check_window(lambda, crystal);
  return std::sqrt(n2_eval(crystal.sellmeier.ordinary, lambda * 1e6));
}

double index_extraordinary(double lambda, double theta,
                           const CrystalConfig& crystal) {
  check_window(lambda, crystal);
  if (theta < 0 || theta > pi / 2)
    throw std::domain_error("index_extraordinary: theta outside [0, pi/2]");
  double lam_um = lambda * 1e6;
  double no2 = n2_eval(crystal.sellmeier.ordinary, lam_um);
  double ne2 = n2_eval(crystal.sellmeier.extraordinary, lam_um);
  double c = std::cos(theta), s = std::sin(theta);
  return 1.0 / std::sqrt(c * c / no2 + s * s / ne2);
}

Geometry solve_geometry(const CrystalConfig& crystal, double lambda_p0) {
  Geometry g;
  g.lambda_p0 = lambda_p0;
  g.lambda_s0 = 2.0 * lambda_p0;  // degenerate only in this release
  g.lambda_i0 = g.lambda_s0;

  double omega_p0 = 2 * pi * c_light / lambda_p0;
  double omega_s0 = omega_p0 / 2;

  g.n_p = index_extraordinary(lambda_p0, crystal.cut_angle_theta, crystal);
  double n_s = index_ordinary(g.lambda_s0, crystal);

  g.k_p0 = g.n_p * omega_p0 / c_light;
  g.k_s0 = n_s * omega_s0 / c_light;
  g.k_i0 = g.k_s0;

  // k_p = 2 k_s cos(theta_int) with transverse cancellation by symmetry.
  double cos_ti = g.k_p0 / (2.0 * g.k_s0);
  if (cos_ti > 1.0)
    throw std::runtime_error(
        "not phase-matchable: k_p exceeds 2 k_s (cos theta_int = " +
        std::to_string(cos_ti) + " > 1) for this cut angle");
  g.theta_s_int = std::acos(cos_ti);
  g.theta_i_int = g.theta_s_int;

  double sin_ext = n_s * std::sin(g.theta_s_int);
  if (sin_ext >= 1.0)
    throw std::runtime_error(
        "not phase-matchable: internal angle beyond total internal "
        "reflection at the exit face");
  g.theta_s_ext = std::asin(sin_ext);
  g.theta_i_ext = g.theta_s_ext;

  g.k_perp0 = g.k_s0 * std::sin(g.theta_s_int);

  // central finite difference for the angular dispersion of the pump index
  const double h = 1e-4;
  g.dn_p_dtheta =
      (index_extraordinary(lambda_p0, crystal.cut_angle_theta + h, crystal) -
       index_extraordinary(lambda_p0, crystal.cut_angle_theta - h, crystal)) /
      (2 * h);
  return g;
}

double anisotropy_radius(double n_p, double dn_p_dtheta, double length_L,
                         double x_e) {
  if (!(n_p > 0) || !(length_L > 0) || !(x_e > 0))
    throw std::invalid_argument("anisotropy_radius: nonpositive input");
  return std::abs(dn_p_dtheta) / n_p * length_L / x_e;
}

double anisotropy_radius(const CrystalConfig& crystal, const Geometry& geom,
                         double x_e) {
  return anisotropy_radius(geom.n_p, geom.dn_p_dtheta, crystal.length_L, x_e);
}

}  // namespace pdc

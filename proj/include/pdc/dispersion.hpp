#pragma once

#include <array>
#include <string>

namespace pdc {

// n^2(lambda) = A + B / (lambda_um^2 - C) - D * lambda_um^2, lambda in um.
struct SellmeierCoeffs {
  std::array<double, 4> abcd{};
};

struct SellmeierSet {
  SellmeierCoeffs ordinary;
  SellmeierCoeffs extraordinary;  // principal value, theta = 90 deg
  double window_lo = 0.2e-6;      // validity window, meters
  double window_hi = 1.2e-6;
  std::string name;
};

// Named published BBO sets; throws std::invalid_argument on unknown name.
SellmeierSet sellmeier_named(const std::string& name);

enum class Interaction { TypeI_eoo };

struct CrystalConfig {
  double length_L = 8e-3;                // m
  double cut_angle_theta = 0.0;          // rad, optical axis vs pump propagation
  SellmeierSet sellmeier;
  Interaction interaction = Interaction::TypeI_eoo;
};

// Central phase-matching geometry for the degenerate symmetric process.
struct Geometry {
  double lambda_p0 = 0, lambda_s0 = 0, lambda_i0 = 0;  // m
  double theta_s_ext = 0, theta_i_ext = 0;             // rad, outside crystal
  double theta_s_int = 0, theta_i_int = 0;             // rad, inside crystal
  double k_p0 = 0, k_s0 = 0, k_i0 = 0;                 // rad/m, magnitudes
  double n_p = 0;                                      // pump index at center
  double dn_p_dtheta = 0;                              // 1/rad
  double k_perp0 = 0;          // transverse wavenumber of the emission ring
};

double index_ordinary(double lambda, const CrystalConfig& crystal);

// Exact uniaxial relation 1/n_e(theta)^2 = cos^2/n_o^2 + sin^2/n_ebar^2.
double index_extraordinary(double lambda, double theta,
                           const CrystalConfig& crystal);

// Degenerate geometry: internal angles from k_p = 2 k_s cos(theta_int),
// external via Snell with the ordinary index at the signal wavelength.
// Throws std::runtime_error("not phase-matchable ...") when no angle exists.
Geometry solve_geometry(const CrystalConfig& crystal, double lambda_p0);

// Eq.-(5)-style anisotropy radius w_p^a = |dn_p/dtheta| / n_p * L / x_e.
double anisotropy_radius(double n_p, double dn_p_dtheta, double length_L,
                         double x_e = 2.2);
double anisotropy_radius(const CrystalConfig& crystal, const Geometry& geom,
                         double x_e = 2.2);

}  // namespace pdc

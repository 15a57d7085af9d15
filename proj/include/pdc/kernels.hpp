#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pdc/constants.hpp"
#include "pdc/dispersion.hpp"
#include "pdc/grid.hpp"
#include "pdc/pump.hpp"

namespace pdc {

enum class KernelLabel { T_m, F_L, T_section };

// Discretized two-photon amplitude, rows indexed by the signal grid, columns
// by the idler grid. Transverse kernels absorb the radial measure
// sqrt(k_s k_i) into the values so plain quadrature weights reproduce the
// paper's k-measure integrals; the spectral measure is flat d omega.
struct KernelMatrix {
  Eigen::MatrixXcd values;
  Grid row_grid, col_grid;
  KernelLabel label = KernelLabel::F_L;
  int order_m = 0;               // azimuthal index, T_m only
  bool negligible_norm = false;  // grids miss the phase-matching ring
};

// L2 norm under the grid quadrature (weighted Frobenius norm); invariant
// under grid refinement.
double kernel_norm(const KernelMatrix& k);

// Longitudinal mismatch with exact z-components at fixed internal angles.
// Transverse: ks_perp, ki_perp are radial transverse wavenumbers at the
// degenerate frequency, dphi = phi_s - phi_i - pi.
double delta_kz_transverse(double ks_perp, double ki_perp, double dphi,
                           const Geometry& g);
// Spectral: k_pz(omega_s + omega_i) - [k_s(omega_s) + k_i(omega_i)] cos(theta_int).
double delta_k_spectral(double omega_s, double omega_i, const Geometry& g,
                        const CrystalConfig& c);

// Automatic radial bracketing pre-scan: bisection of |delta_kz| L/2 = x_max
// along the ring diagonal plus the pump 1e-4 amplitude cut across it.
struct RadialSpan {
  double t_max = 0;      // half-extent along the degenerate diagonal, rad/m
  double u_max = 0;      // pump half-extent across the diagonal, rad/m
  double lo = 0, hi = 0; // grid interval around k_perp0
};
RadialSpan radial_span(const Geometry& g, const CrystalConfig& c,
                       const PumpConfig& p, double x_max = 8 * pi,
                       double pump_cut = 1e-4);
Grid radial_grid(const RadialSpan& span, int n);

// Support window of T_L in dphi (pump-limited), capped at pi.
double azimuthal_window(const PumpConfig& p, const RadialSpan& span,
                        double margin = 1.25, double pump_cut = 1e-4);

// Spectral span: sinc window x_max in the frequency-difference direction plus
// pump_halfwidths pump intensity FWHMs along the sum; n_points auto-sized from
// the ridge width unless n_override > 0.
struct SpectralSpan {
  double half = 0;  // half-width of the grid around omega_s0, rad/s
  int n = 0;
};
SpectralSpan spectral_span(const Geometry& g, const CrystalConfig& c,
                           const PumpConfig& p, int n_override = 0,
                           double x_max = 10 * pi, double pump_halfwidths = 5.0,
                           int n_min = 512, int n_cap = 3072);
Grid spectral_grid(const SpectralSpan& span, const Geometry& g);

// Pointwise transverse kernel value (Eq. 4 integrand with the radial measure
// absorbed): sqrt(ks ki) E_p_perp(|q_pump|) exp(-i x) sinc(x), x = dkz L/2.
std::complex<double> transverse_value(double ks_perp, double ki_perp,
                                      double dphi, const Geometry& g,
                                      const CrystalConfig& c,
                                      const PumpConfig& p);

// m-th azimuthal Fourier component of T_L (Eq. 4 reduced by radial symmetry),
// T_m = (1/2pi) integral of T_L(ks, ki, dphi) cos(m dphi) over the support
// window, n_phi-point trapezoid. Full double precision.
KernelMatrix build_transverse_component(int m, const Geometry& g,
                                        const CrystalConfig& c,
                                        const PumpConfig& p, const Grid& gs,
                                        const Grid& gi, int n_phi = 512);

// Fixed-azimuth section of Eq. (4) at phi_s = 0, phi_i = pi (dphi = 0); feeds
// the radial intensity/correlation integrals directly.
KernelMatrix build_transverse_section(const Geometry& g,
                                      const CrystalConfig& c,
                                      const PumpConfig& p, const Grid& gs,
                                      const Grid& gi);

// Spectral two-photon amplitude F_L of Eq. (9) on the given grids.
KernelMatrix build_spectral_kernel(const Geometry& g, const CrystalConfig& c,
                                   const PumpConfig& p, const Grid& gs,
                                   const Grid& gi);

// Norm and spectrum-moment scan over azimuthal orders m = 0..m_max with
// early stop when nu_m < norm_stop * nu_0. Single-precision batched
// projection; per-m Schmidt moments come from Gram Frobenius norms
// (sum sigma^4 = |B^H B|_F^2), no eigensolver. Mode functions for a specific
// m are obtained separately via decompose(build_transverse_component(m,..)).
struct TransverseScan {
  std::vector<double> nu;           // weighted norm per computed m
  std::vector<double> sum_lambda4;  // normalized sum lambda^4 per m
  int m_stop = 0;                   // orders computed: m = 0..m_stop-1
  bool truncated_by_m_max = false;
};
TransverseScan scan_transverse_orders(const Geometry& g,
                                      const CrystalConfig& c,
                                      const PumpConfig& p, const Grid& gs,
                                      const Grid& gi, int n_phi, int m_max,
                                      double norm_stop, int workers);

}  // namespace pdc

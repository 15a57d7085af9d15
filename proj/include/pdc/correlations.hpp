#pragma once

#include <Eigen/Dense>

#include "pdc/dispersion.hpp"
#include "pdc/grid.hpp"
#include "pdc/kernels.hpp"
#include "pdc/pump.hpp"

namespace pdc {

// 1D intensity profile on a quadrature grid. fwhm is the linear-interpolated
// full width at half maximum of values; peak_location the argmax grid point.
struct Profile1D {
  Grid axis;
  Eigen::VectorXd values;
  double fwhm = 0;
  double peak_location = 0;
};

enum class CorrKind { auto_amplitude, cross_intensity };
enum class CorrVariable { radial, azimuthal, spectral };

// Two-point correlation matrix. auto_amplitude entries are complex
// A(x, x') = integral over the conjugate variable of kernel* kernel;
// cross_intensity entries are |kernel|^2 (real, stored in the same type).
struct Correlation2D {
  Grid row_axis, col_axis;
  Eigen::MatrixXcd values;
  CorrKind kind = CorrKind::auto_amplitude;
  CorrVariable variable = CorrVariable::spectral;
};

// Linear-interpolated FWHM walking outward from the global maximum; NaN when
// a flank never crosses half maximum inside the grid.
double fwhm_linear(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Marginal intensity n(x) = sum_j w_j |M(x, j)|^2. The kernels absorb the
// paper's k-measure so this is Eq. (13)/(14) directly.
// Throws "no signal on grid" when the profile is identically negligible and
// "grid too narrow" when a half-max flank is missing.
Profile1D intensity_radial(const KernelMatrix& section);
Profile1D intensity_spectrum(const KernelMatrix& kernel);

// Full correlation matrices (Eqs. 15, 16) on the kernel grids.
Correlation2D auto_correlation(const KernelMatrix& kernel, CorrVariable var);
Correlation2D cross_correlation(const KernelMatrix& kernel, CorrVariable var);

// Single column A(:, fix) of the auto-correlation, for sweeps that never
// need the full matrix. Identical arithmetic to auto_correlation.
Eigen::VectorXcd auto_correlation_section(const KernelMatrix& kernel,
                                          Eigen::Index fix);

// FWHM of the modulus of the section through the column nearest `center`
// (squared = true measures |section|^2, the intensity-correlation width).
// Throws "grid too narrow" when a flank is missing.
double section_width(const Correlation2D& corr, double center,
                     bool squared = false);

// Eq. (18): K_Delta = intensity width / auto-correlation width.
double mode_ratio_KDelta(const Profile1D& intensity, double auto_width);
double mode_ratio_KDelta(double intensity_width, double auto_width);

// Azimuthal correlations at the fixed ring radii k_perp0 (Eqs. 15, 16
// azimuthal): the kernel restricted to the ring depends only on the angle
// difference, so the auto-correlation c(Delta) is computed on a uniform
// circle lattice of m_lattice points (stationarity is exact on the lattice).
struct AzimuthalCorrelation {
  double h = 0;                // lattice step, 2 pi / m_lattice
  Eigen::VectorXd delta_axis;  // symmetric difference axis, lattice-aligned
  Eigen::VectorXcd auto_c;     // c(Delta) on delta_axis
  Eigen::VectorXd cross_t2;    // |t(delta)|^2 on delta_axis
  Eigen::VectorXcd t_window;   // ring kernel t on its support window
  Eigen::Index t_offset = 0;   // lattice index of t_window(0)
  double dA = 0;               // FWHM of |c|
  double dA2 = 0;              // FWHM of |c|^2
  double dC = 0;               // FWHM of |t|^2
};
AzimuthalCorrelation azimuthal_correlation(const Geometry& g,
                                           const CrystalConfig& c,
                                           const PumpConfig& p,
                                           int m_lattice = 131072);

// Materialized sub-lattice matrix A(phi_j, phi_l) = c(phi_l - phi_j) or the
// cross intensity |t(phi_l - phi_j)|^2, for stationarity tests and export.
Correlation2D azimuthal_matrix(const AzimuthalCorrelation& az, CorrKind kind,
                               int n_sub = 257);

}  // namespace pdc

#include "pdc/correlations.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace pdc {

double fwhm_linear(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const Eigen::Index n = y.size();
  Eigen::Index i0 = 0;
  y.maxCoeff(&i0);
  double half = y(i0) / 2.0;

  Eigen::Index il = i0;
  while (il > 0 && y(il) > half) --il;
  if (y(il) > half) return std::numeric_limits<double>::quiet_NaN();
  double xl = x(il) + (half - y(il)) * (x(il + 1) - x(il)) / (y(il + 1) - y(il));

  Eigen::Index ir = i0;
  while (ir < n - 1 && y(ir) > half) ++ir;
  if (y(ir) > half) return std::numeric_limits<double>::quiet_NaN();
  double xr =
      x(ir - 1) + (half - y(ir - 1)) * (x(ir) - x(ir - 1)) / (y(ir) - y(ir - 1));
  return xr - xl;
}

namespace {

Profile1D marginal_profile(const KernelMatrix& k) {
  Profile1D p;
  p.axis = k.row_grid;
  p.values = (k.values.cwiseAbs2() * k.col_grid.weights).real();
  if (!p.values.allFinite() || p.values.maxCoeff() <= 0.0)
    throw std::runtime_error("no signal on grid");
  Eigen::Index ipk = 0;
  p.values.maxCoeff(&ipk);
  p.peak_location = p.axis.points(ipk);
  p.fwhm = fwhm_linear(p.axis.points, p.values);
  if (!std::isfinite(p.fwhm)) throw std::runtime_error("grid too narrow");
  return p;
}

}  // namespace

Profile1D intensity_radial(const KernelMatrix& section) {
  if (section.label != KernelLabel::T_section)
    throw std::invalid_argument(
        "intensity_radial: expects the fixed-azimuth section kernel");
  return marginal_profile(section);
}

Profile1D intensity_spectrum(const KernelMatrix& kernel) {
  if (kernel.label != KernelLabel::F_L)
    throw std::invalid_argument("intensity_spectrum: expects the F_L kernel");
  return marginal_profile(kernel);
}

Correlation2D auto_correlation(const KernelMatrix& kernel, CorrVariable var) {
  Correlation2D c;
  c.row_axis = kernel.row_grid;
  c.col_axis = kernel.row_grid;
  c.kind = CorrKind::auto_amplitude;
  c.variable = var;
  c.values = kernel.values.conjugate() *
             kernel.col_grid.weights.asDiagonal() * kernel.values.transpose();
  return c;
}

Correlation2D cross_correlation(const KernelMatrix& kernel, CorrVariable var) {
  Correlation2D c;
  c.row_axis = kernel.row_grid;
  c.col_axis = kernel.col_grid;
  c.kind = CorrKind::cross_intensity;
  c.variable = var;
  c.values = kernel.values.cwiseAbs2().cast<std::complex<double>>();
  return c;
}

Eigen::VectorXcd auto_correlation_section(const KernelMatrix& kernel,
                                          Eigen::Index fix) {
  Eigen::VectorXcd rhs =
      kernel.values.row(fix).transpose().cwiseProduct(
          kernel.col_grid.weights.cast<std::complex<double>>());
  return kernel.values.conjugate() * rhs;
}

double section_width(const Correlation2D& corr, double center, bool squared) {
  Eigen::Index j = 0;
  (corr.col_axis.points.array() - center).abs().minCoeff(&j);
  Eigen::VectorXd sec = corr.values.col(j).cwiseAbs();
  if (squared) sec = sec.cwiseAbs2();
  double w = fwhm_linear(corr.row_axis.points, sec);
  if (!std::isfinite(w)) throw std::runtime_error("grid too narrow");
  return w;
}

double mode_ratio_KDelta(double intensity_width, double auto_width) {
  if (!(auto_width > 0) || !std::isfinite(auto_width))
    throw std::invalid_argument("mode_ratio_KDelta: nonpositive auto width");
  if (!(intensity_width > 0) || !std::isfinite(intensity_width))
    throw std::invalid_argument(
        "mode_ratio_KDelta: nonpositive intensity width");
  return intensity_width / auto_width;
}

double mode_ratio_KDelta(const Profile1D& intensity, double auto_width) {
  return mode_ratio_KDelta(intensity.fwhm, auto_width);
}

AzimuthalCorrelation azimuthal_correlation(const Geometry& g,
                                           const CrystalConfig& c,
                                           const PumpConfig& p,
                                           int m_lattice) {
  AzimuthalCorrelation az;
  az.h = 2.0 * pi / m_lattice;

  RadialSpan ring{};
  ring.lo = g.k_perp0;  // window measured at the ring radius itself
  double W = azimuthal_window(p, ring);
  Eigen::Index n_w = Eigen::Index(std::ceil(W / az.h));
  if (2 * n_w >= m_lattice / 2)
    throw std::runtime_error(
        "azimuthal_correlation: window covers the whole circle");

  az.t_offset = -n_w;
  az.t_window.resize(2 * n_w + 1);
  for (Eigen::Index q = -n_w; q <= n_w; ++q)
    az.t_window(q + n_w) =
        transverse_value(g.k_perp0, g.k_perp0, double(q) * az.h, g, c, p);

  // c(d h) = h sum_p t*_p t_{p+d}; support |d| <= 2 n_w.
  Eigen::Index n_d = 2 * n_w;
  az.delta_axis.resize(2 * n_d + 1);
  az.auto_c = Eigen::VectorXcd::Zero(2 * n_d + 1);
  az.cross_t2 = Eigen::VectorXd::Zero(2 * n_d + 1);
  for (Eigen::Index d = -n_d; d <= n_d; ++d) {
    az.delta_axis(d + n_d) = double(d) * az.h;
    Eigen::Index lo = std::max<Eigen::Index>(-n_w, -n_w - d);
    Eigen::Index hi = std::min<Eigen::Index>(n_w, n_w - d);
    std::complex<double> s = 0;
    for (Eigen::Index q = lo; q <= hi; ++q)
      s += std::conj(az.t_window(q + n_w)) * az.t_window(q + d + n_w);
    az.auto_c(d + n_d) = az.h * s;
    if (std::abs(d) <= n_w)
      az.cross_t2(d + n_d) = std::norm(az.t_window(d + n_w));
  }

  Eigen::VectorXd ca = az.auto_c.cwiseAbs();
  az.dA = fwhm_linear(az.delta_axis, ca);
  az.dA2 = fwhm_linear(az.delta_axis, ca.cwiseAbs2());
  az.dC = fwhm_linear(az.delta_axis, az.cross_t2);
  if (!std::isfinite(az.dA) || !std::isfinite(az.dA2) ||
      !std::isfinite(az.dC))
    throw std::runtime_error("grid too narrow");
  return az;
}

Correlation2D azimuthal_matrix(const AzimuthalCorrelation& az, CorrKind kind,
                               int n_sub) {
  if (n_sub < 3 || n_sub % 2 == 0)
    throw std::invalid_argument("azimuthal_matrix: n_sub must be odd >= 3");
  Eigen::Index n_d = (az.delta_axis.size() - 1) / 2;
  Eigen::Index half = (n_sub - 1) / 2;
  Eigen::Index stride = std::max<Eigen::Index>(1, n_d / half);

  Correlation2D m;
  m.kind = kind;
  m.variable = CorrVariable::azimuthal;
  double a = -double(half * stride) * az.h, b = double(half * stride) * az.h;
  m.row_axis = trapezoid(a, b, n_sub, GridKind::azimuthal);
  m.col_axis = m.row_axis;
  m.values.resize(n_sub, n_sub);
  for (Eigen::Index jj = 0; jj < n_sub; ++jj)
    for (Eigen::Index ii = 0; ii < n_sub; ++ii) {
      Eigen::Index d = (jj - ii) * stride;
      std::complex<double> v = 0.0;
      if (std::abs(d) <= n_d)
        v = kind == CorrKind::auto_amplitude
                ? az.auto_c(d + n_d)
                : std::complex<double>(az.cross_t2(d + n_d));
      m.values(ii, jj) = v;
    }
  return m;
}

}  // namespace pdc

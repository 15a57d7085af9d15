#include "pdc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "pdc/parallel.hpp"

namespace pdc {

using cd = std::complex<double>;

double kernel_norm(const KernelMatrix& k) {
  const auto& ws = k.row_grid.weights;
  const auto& wi = k.col_grid.weights;
  double s = 0;
  for (Eigen::Index j = 0; j < k.values.cols(); ++j)
    for (Eigen::Index i = 0; i < k.values.rows(); ++i)
      s += ws(i) * wi(j) * std::norm(k.values(i, j));
  return std::sqrt(s);
}

static double sinc(double x) {
  return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
}

double delta_kz_transverse(double ks_perp, double ki_perp, double dphi,
                           const Geometry& g) {
  // |k_perp_pump|^2 = ks^2 + ki^2 + 2 ks ki cos(dphi + pi)
  double qp2 = ks_perp * ks_perp + ki_perp * ki_perp -
               2.0 * ks_perp * ki_perp * std::cos(dphi);
  double kpz = std::sqrt(g.k_p0 * g.k_p0 - qp2);
  double ksz = std::sqrt(g.k_s0 * g.k_s0 - ks_perp * ks_perp);
  double kiz = std::sqrt(g.k_i0 * g.k_i0 - ki_perp * ki_perp);
  return kpz - ksz - kiz;
}

double delta_k_spectral(double omega_s, double omega_i, const Geometry& g,
                        const CrystalConfig& c) {
  double omega_p = omega_s + omega_i;
  double lam_p = 2 * pi * c_light / omega_p;
  double lam_s = 2 * pi * c_light / omega_s;
  double lam_i = 2 * pi * c_light / omega_i;
  double kp = index_extraordinary(lam_p, c.cut_angle_theta, c) * omega_p / c_light;
  double ks = index_ordinary(lam_s, c) * omega_s / c_light;
  double ki = index_ordinary(lam_i, c) * omega_i / c_light;
  double cos_ti = std::cos(g.theta_s_int);
  return kp - (ks + ki) * cos_ti;
}

cd transverse_value(double ks, double ki, double dphi, const Geometry& g,
                    const CrystalConfig& c, const PumpConfig& p) {
  double qp2 =
      ks * ks + ki * ki - 2.0 * ks * ki * std::cos(dphi);
  double qp = std::sqrt(std::max(qp2, 0.0));
  double x = delta_kz_transverse(ks, ki, dphi, g) * c.length_L / 2.0;
  double amp = std::sqrt(ks * ki) * pump_spatial_spectrum(qp, p) * sinc(x);
  return amp * cd(std::cos(x), -std::sin(x));
}

static double bisect_increasing(double lo, double hi,
                                const std::function<double(double)>& f) {
  // f(lo) < 0 <= f(hi); returns the root to ~1e-12 relative
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

RadialSpan radial_span(const Geometry& g, const CrystalConfig& c,
                       const PumpConfig& p, double x_max, double pump_cut) {
  RadialSpan s;
  // Along the diagonal ks = ki = k_perp0 + t the pump factor is at peak and
  // the sinc argument grows with |t|; bracket where it reaches x_max.
  auto excess = [&](double t) {
    double k = g.k_perp0 + t;
    return std::abs(delta_kz_transverse(k, k, 0.0, g)) * c.length_L / 2.0 -
           x_max;
  };
  double hi = g.k_perp0 * 0.01;
  while (excess(hi) < 0 && g.k_perp0 + hi < 0.98 * g.k_s0) hi *= 2;
  s.t_max = bisect_increasing(0.0, hi, excess);

  // Across the diagonal (ks - ki = q at dphi = 0) the pump amplitude cuts off
  // at q = 2 sqrt(ln(1/pump_cut)) / w_p; half of it per beam. The interval is
  // symmetric about the ring; the outward t_max also covers the inward side,
  // where |delta_kz| grows slower.
  s.u_max = std::sqrt(std::log(1.0 / pump_cut)) / p.w_p;

  s.lo = g.k_perp0 - (s.t_max + s.u_max);
  s.hi = g.k_perp0 + (s.t_max + s.u_max);
  if (s.lo <= 0)
    throw std::runtime_error("radial_span: grid would reach k_perp <= 0");
  return s;
}

Grid radial_grid(const RadialSpan& span, int n) {
  return gauss_legendre(span.lo, span.hi, n, GridKind::radial);
}

double azimuthal_window(const PumpConfig& p, const RadialSpan& span,
                        double margin, double pump_cut) {
  double q_max = 2.0 * std::sqrt(std::log(1.0 / pump_cut)) / p.w_p;
  double k_lo = span.lo;
  return std::min(pi, margin * q_max / k_lo);
}

SpectralSpan spectral_span(const Geometry& g, const CrystalConfig& c,
                           const PumpConfig& p, int n_override, double x_max,
                           double pump_halfwidths, int n_min, int n_cap) {
  double omega_s0 = pi * c_light * 2.0 / g.lambda_s0;
  // Extent in the frequency difference where the sinc reaches x_max; the
  // bracket search must stay inside the Sellmeier window.
  auto excess = [&](double d) {
    return std::abs(delta_k_spectral(omega_s0 + d / 2, omega_s0 - d / 2, g, c)) *
               c.length_L / 2.0 -
           x_max;
  };
  double hi_cap =
      2.0 * (omega_s0 - 2 * pi * c_light / c.sellmeier.window_hi) * 0.98;
  double hi = 1e12;
  while (hi < hi_cap && excess(hi) < 0) hi = std::min(2 * hi, hi_cap);
  double d_minus = bisect_increasing(0.0, hi, excess);

  double ridge_fwhm = 2.0 * std::sqrt(2.0 * std::log(2.0)) / p.tau_p;
  double d_pump = pump_halfwidths * ridge_fwhm;
  SpectralSpan s;
  s.half = 0.5 * d_minus + 0.5 * d_pump;

  if (n_override > 0) {
    s.n = n_override;
    return s;
  }
  // The grid must resolve the narrower of the pump ridge and the
  // phase-matching-limited conditional section (sinc^2 half max at
  // x = 1.391557); for broadband pumps the sinc width dominates.
  auto excess_cond = [&](double d) {
    return std::abs(delta_k_spectral(omega_s0 + d, omega_s0, g, c)) *
               c.length_L / 2.0 -
           1.391557;
  };
  double hi2 = d_minus;
  while (hi2 < hi_cap && excess_cond(hi2) < 0) hi2 = std::min(2 * hi2, hi_cap);
  double cond_fwhm = 2.0 * bisect_increasing(0.0, hi2, excess_cond);

  double target = 8.0 * (2.0 * s.half) / std::min(ridge_fwhm, cond_fwhm);
  int n = n_min;
  while (n < target && n < n_cap) n *= 2;
  s.n = std::min(n, n_cap);
  return s;
}

Grid spectral_grid(const SpectralSpan& span, const Geometry& g) {
  double omega_s0 = 2.0 * pi * c_light / g.lambda_s0;
  return gauss_legendre(omega_s0 - span.half, omega_s0 + span.half, span.n,
                        GridKind::spectral);
}

// negligible-norm flag: compare against the on-ring peak scale
static void flag_negligible(KernelMatrix& k, double peak_scale) {
  double amax = k.values.cwiseAbs().maxCoeff();
  k.negligible_norm = amax < 1e-10 * peak_scale;
}

KernelMatrix build_transverse_component(int m, const Geometry& g,
                                        const CrystalConfig& c,
                                        const PumpConfig& p, const Grid& gs,
                                        const Grid& gi, int n_phi) {
  const Eigen::Index n_s = gs.size(), n_i = gi.size();
  KernelMatrix k;
  k.row_grid = gs;
  k.col_grid = gi;
  k.label = KernelLabel::T_m;
  k.order_m = m;
  k.values = Eigen::MatrixXcd::Zero(n_s, n_i);

  RadialSpan span{};
  span.lo = gs.points(0);  // window from the actual grid extent
  double W = azimuthal_window(p, span);
  Grid phig = trapezoid(-W, W, n_phi, GridKind::azimuthal);

  for (int l = 0; l < n_phi; ++l) {
    double phi = phig.points(l);
    double cw = phig.weights(l) * std::cos(m * phi) / (2 * pi);
    for (Eigen::Index j = 0; j < n_i; ++j)
      for (Eigen::Index i = 0; i < n_s; ++i)
        k.values(i, j) +=
            cw * transverse_value(gs.points(i), gi.points(j), phi, g, c, p);
  }
  flag_negligible(k, g.k_perp0 * pump_spatial_spectrum(0.0, p));
  return k;
}

KernelMatrix build_transverse_section(const Geometry& g,
                                      const CrystalConfig& c,
                                      const PumpConfig& p, const Grid& gs,
                                      const Grid& gi) {
  KernelMatrix k;
  k.row_grid = gs;
  k.col_grid = gi;
  k.label = KernelLabel::T_section;
  k.values.resize(gs.size(), gi.size());
  for (Eigen::Index j = 0; j < gi.size(); ++j)
    for (Eigen::Index i = 0; i < gs.size(); ++i)
      k.values(i, j) =
          transverse_value(gs.points(i), gi.points(j), 0.0, g, c, p);
  flag_negligible(k, g.k_perp0 * pump_spatial_spectrum(0.0, p));
  return k;
}

KernelMatrix build_spectral_kernel(const Geometry& g, const CrystalConfig& c,
                                   const PumpConfig& p, const Grid& gs,
                                   const Grid& gi) {
  KernelMatrix k;
  k.row_grid = gs;
  k.col_grid = gi;
  k.label = KernelLabel::F_L;

  const Eigen::Index n_s = gs.size(), n_i = gi.size();
  // wavelengths must stay inside the Sellmeier window, including the pump sum
  index_ordinary(2 * pi * c_light / gs.points(0), c);
  index_ordinary(2 * pi * c_light / gs.points(n_s - 1), c);
  index_ordinary(2 * pi * c_light / gi.points(0), c);
  index_ordinary(2 * pi * c_light / gi.points(n_i - 1), c);

  // cache per-axis signal wavenumbers (grids may differ)
  Eigen::VectorXd ks(n_s), ki(n_i);
  for (Eigen::Index i = 0; i < n_s; ++i) {
    double lam = 2 * pi * c_light / gs.points(i);
    ks(i) = index_ordinary(lam, c) * gs.points(i) / c_light;
  }
  for (Eigen::Index j = 0; j < n_i; ++j) {
    double lam = 2 * pi * c_light / gi.points(j);
    ki(j) = index_ordinary(lam, c) * gi.points(j) / c_light;
  }
  double cos_ti = std::cos(g.theta_s_int);

  k.values.resize(n_s, n_i);
  for (Eigen::Index j = 0; j < n_i; ++j) {
    double wi = gi.points(j);
    for (Eigen::Index i = 0; i < n_s; ++i) {
      double ws = gs.points(i);
      double wp = ws + wi;
      double lam_p = 2 * pi * c_light / wp;
      double kp = index_extraordinary(lam_p, c.cut_angle_theta, c) * wp / c_light;
      double dk = kp - (ks(i) + ki(j)) * cos_ti;
      double x = dk * c.length_L / 2.0;
      double amp = ws * wi / std::sqrt(ks(i) * ki(j)) *
                   pump_spectrum(wp, p) * sinc(x);
      k.values(i, j) = amp * cd(std::cos(x), -std::sin(x));
    }
  }
  double omega_s0 = 2 * pi * c_light / g.lambda_s0;
  flag_negligible(k, omega_s0 * omega_s0 / g.k_s0 *
                         pump_spectrum(2 * omega_s0, p));
  return k;
}

TransverseScan scan_transverse_orders(const Geometry& g,
                                      const CrystalConfig& c,
                                      const PumpConfig& p, const Grid& gs,
                                      const Grid& gi, int n_phi, int m_max,
                                      double norm_stop, int workers) {
  const Eigen::Index n_s = gs.size(), n_i = gi.size();
  const Eigen::Index nn = n_s * n_i;

  RadialSpan span{};
  span.lo = gs.points(0);
  double W = azimuthal_window(p, span);
  Grid phig = trapezoid(-W, W, n_phi, GridKind::azimuthal);

  // f(r = i*n_i + j, l) = M(ks_i, ki_j, phi_l), single precision
  Eigen::MatrixXf fre(nn, n_phi), fim(nn, n_phi);
  {
    const int chunk = 4096;
    int n_chunks = int((nn + chunk - 1) / chunk);
    parallel_for(n_chunks, workers, [&](int ci) {
      Eigen::Index r0 = Eigen::Index(ci) * chunk;
      Eigen::Index r1 = std::min(r0 + chunk, nn);
      for (Eigen::Index r = r0; r < r1; ++r) {
        Eigen::Index i = r / n_i, j = r % n_i;
        double ksv = gs.points(i), kiv = gi.points(j);
        for (int l = 0; l < n_phi; ++l) {
          cd v = transverse_value(ksv, kiv, phig.points(l), g, c, p);
          fre(r, l) = float(v.real());
          fim(r, l) = float(v.imag());
        }
      }
    });
  }

  Eigen::VectorXd sw_s = gs.weights.array().sqrt();
  Eigen::VectorXd sw_i = gi.weights.array().sqrt();
  Eigen::MatrixXd wouter = sw_s * sw_i.transpose();
  Eigen::VectorXf wflat(nn);  // flattened to match f's row order
  for (Eigen::Index r = 0; r < nn; ++r)
    wflat(r) = float(wouter(r / n_i, r % n_i));

  TransverseScan scan;
  scan.nu.reserve(1024);
  scan.sum_lambda4.reserve(1024);

  // block size bounded by a ~256 MB budget for the projected slabs
  int mb = int(std::clamp<Eigen::Index>(
      Eigen::Index(256) * 1024 * 1024 / (nn * 8), 16, 512));

  Eigen::MatrixXf C(n_phi, mb), tre(nn, mb), tim(nn, mb);
  double nu0 = -1;
  bool stopped = false;
  for (int m0 = 0; m0 <= m_max && !stopped; m0 += mb) {
    int m1 = std::min(m0 + mb - 1, m_max);
    int cols = m1 - m0 + 1;
    for (int mm = m0; mm <= m1; ++mm)
      for (int l = 0; l < n_phi; ++l)
        C(l, mm - m0) =
            float(phig.weights(l) * std::cos(double(mm) * phig.points(l)) /
                  (2 * pi));
    tre.leftCols(cols).noalias() = fre * C.leftCols(cols);
    tim.leftCols(cols).noalias() = fim * C.leftCols(cols);

    // weighted norms per order, in block order
    std::vector<double> nu(cols);
    for (int q = 0; q < cols; ++q) {
      double s =
          (tre.col(q).array() * wflat.array()).cast<double>().square().sum() +
          (tim.col(q).array() * wflat.array()).cast<double>().square().sum();
      nu[q] = std::sqrt(s);
    }
    if (nu0 < 0) nu0 = nu[0];

    int keep = cols;
    for (int q = 0; q < cols; ++q) {
      if (nu[q] < norm_stop * nu0) {
        keep = q;
        stopped = true;
        break;
      }
    }

    // sum sigma^4 = |B^H B|_F^2 for B = W_s^1/2 T_m W_i^1/2; normalized by
    // (sum sigma^2)^2 = nu^4. No eigensolver needed for the moments.
    std::vector<double> s4n(keep);
    parallel_for(keep, workers, [&](int q) {
      Eigen::MatrixXcd B(n_s, n_i);
      for (Eigen::Index j = 0; j < n_i; ++j)
        for (Eigen::Index i = 0; i < n_s; ++i)
          B(i, j) = cd(tre(i * n_i + j, q), tim(i * n_i + j, q)) *
                    wouter(i, j);
      Eigen::MatrixXcd G(n_i, n_i);
      G.setZero();
      G.selfadjointView<Eigen::Lower>().rankUpdate(B.adjoint());
      double fro2 = 0;  // Hermitian Frobenius from the lower triangle
      for (Eigen::Index jj = 0; jj < n_i; ++jj) {
        fro2 += std::norm(G(jj, jj));
        for (Eigen::Index ii = jj + 1; ii < n_i; ++ii)
          fro2 += 2.0 * std::norm(G(ii, jj));
      }
      double nu2 = nu[q] * nu[q];
      s4n[q] = nu2 > 0 ? fro2 / (nu2 * nu2) : 1.0;
    });
    for (int q = 0; q < keep; ++q) {
      scan.nu.push_back(nu[q]);
      scan.sum_lambda4.push_back(s4n[q]);
    }
  }
  scan.m_stop = int(scan.nu.size());
  scan.truncated_by_m_max = !stopped;
  return scan;
}

}  // namespace pdc

#include "pdc/analyze.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdc/constants.hpp"
#include "pdc/correlations.hpp"
#include "pdc/csv.hpp"
#include "pdc/grid.hpp"
#include "pdc/kernels.hpp"
#include "pdc/schmidt.hpp"
#include "pdc/sweeps.hpp"

namespace pdc {

namespace {

using json = nlohmann::ordered_json;

double require_finite(double v, const std::string& what) {
  if (!std::isfinite(v))
    throw std::runtime_error(what + " is not finite (grid too narrow)");
  return v;
}

Eigen::Index nearest_index(const Eigen::VectorXd& pts, double x) {
  Eigen::Index i = 0;
  (pts.array() - x).abs().minCoeff(&i);
  return i;
}

// Everything cmd_analyze exports beyond the plain metrics.
struct TransverseWork {
  Geometry g;
  Grid gr;
  int n_phi = 0;
  KernelMatrix section;
  Profile1D marg;
  Eigen::VectorXcd auto_sec;  // A(:, peak) of the radial section
  Eigen::VectorXd cross_sec;  // |T(:, center)|^2
  AzimuthalCorrelation az;
  TransverseMetrics m;
};

TransverseWork transverse_work(const RunConfig& cfg, int workers) {
  const CrystalConfig& crystal = cfg.crystal;
  const PumpConfig& pump = cfg.pump;
  const NumericsConfig& num = cfg.numerics;

  TransverseWork w;
  w.g = solve_geometry(crystal, pump.lambda_p0);
  RadialSpan span = radial_span(w.g, crystal, pump);
  w.gr = radial_grid(span, scaled(num.n_radial, num.grid_scale));
  w.n_phi = scaled(num.n_phi, num.grid_scale);

  TransverseScan scan =
      scan_transverse_orders(w.g, crystal, pump, w.gr, w.gr, w.n_phi,
                             num.m_max, num.azimuthal_norm_stop, workers);
  TransverseModeSummary sum = transverse_summary(scan);
  w.m.K_kphi = sum.K_kphi;
  w.m.K_k = sum.K_k;
  w.m.K_phi = sum.K_phi;
  w.m.m_stop = sum.m_stop;

  w.section = build_transverse_section(w.g, crystal, pump, w.gr, w.gr);
  w.marg = intensity_radial(w.section);
  w.m.Delta_n_k = w.marg.fwhm;

  Eigen::Index ipk = nearest_index(w.gr.points, w.marg.peak_location);
  w.auto_sec = auto_correlation_section(w.section, ipk);
  Eigen::VectorXd aabs = w.auto_sec.cwiseAbs();
  w.m.Delta_A_k = require_finite(fwhm_linear(w.gr.points, aabs), "Delta_A_k");
  w.m.Delta_A2_k = require_finite(
      fwhm_linear(w.gr.points, aabs.cwiseProduct(aabs)), "Delta_A2_k");

  Eigen::Index ic = nearest_index(w.gr.points, w.g.k_perp0);
  w.cross_sec = w.section.values.col(ic).cwiseAbs2();
  w.m.Delta_C_k =
      require_finite(fwhm_linear(w.gr.points, w.cross_sec), "Delta_C_k");

  w.az = azimuthal_correlation(w.g, crystal, pump,
                               scaled(num.n_phi_corr, num.grid_scale));
  w.m.Delta_A_phi = require_finite(w.az.dA, "Delta_A_phi");
  w.m.Delta_A2_phi = require_finite(w.az.dA2, "Delta_A2_phi");
  w.m.Delta_C_phi = require_finite(w.az.dC, "Delta_C_phi");

  w.m.KDelta_k = mode_ratio_KDelta(w.m.Delta_n_k, w.m.Delta_A_k);
  w.m.KDelta_phi = mode_ratio_KDelta(2 * pi, w.m.Delta_A_phi);
  w.m.KDelta_kphi = w.m.KDelta_k * w.m.KDelta_phi;
  w.m.w_p_a = anisotropy_radius(crystal, w.g);
  return w;
}

struct SpectralWork {
  Geometry g;
  Grid gw;
  KernelMatrix F;
  Profile1D marg;
  Eigen::VectorXcd auto_sec;
  Eigen::VectorXd cross_sec;
  SpectralMetrics m;
};

SpectralWork spectral_work(const RunConfig& cfg, double filter_fwhm) {
  const CrystalConfig& crystal = cfg.crystal;
  const PumpConfig& pump = cfg.pump;
  const NumericsConfig& num = cfg.numerics;

  SpectralWork w;
  w.g = solve_geometry(crystal, pump.lambda_p0);
  SpectralSpan span = spectral_span(w.g, crystal, pump);
  span.n = num.n_spectral > 0 ? scaled(num.n_spectral, num.grid_scale)
                              : scaled(span.n, num.grid_scale);
  w.gw = spectral_grid(span, w.g);
  w.F = build_spectral_kernel(w.g, crystal, pump, w.gw, w.gw);
  if (filter_fwhm > 0) w.F = apply_spectral_filter(w.F, filter_fwhm, w.g);

  w.m.n_spectral = span.n;
  w.m.K_omega = kernel_schmidt_number(w.F);
  w.marg = intensity_spectrum(w.F);
  w.m.Delta_n_omega = w.marg.fwhm;

  Eigen::Index ipk = nearest_index(w.gw.points, w.marg.peak_location);
  w.auto_sec = auto_correlation_section(w.F, ipk);
  Eigen::VectorXd aabs = w.auto_sec.cwiseAbs();
  w.m.Delta_A_omega =
      require_finite(fwhm_linear(w.gw.points, aabs), "Delta_A_omega");
  w.m.Delta_A2_omega = require_finite(
      fwhm_linear(w.gw.points, aabs.cwiseProduct(aabs)), "Delta_A2_omega");

  double omega_s0 = 2 * pi * c_light / w.g.lambda_s0;
  Eigen::Index ic = nearest_index(w.gw.points, omega_s0);
  w.cross_sec = w.F.values.col(ic).cwiseAbs2();
  w.m.Delta_C_omega =
      require_finite(fwhm_linear(w.gw.points, w.cross_sec), "Delta_C_omega");
  w.m.KDelta_omega = mode_ratio_KDelta(w.m.Delta_n_omega, w.m.Delta_A_omega);
  return w;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void write_profile_csv(const std::string& path, const std::string& axis_header,
                       const Profile1D& p) {
  CsvTable t;
  t.header = {axis_header, "n[arb]", "n_peak1[1]"};
  double peak = p.values.maxCoeff();
  for (Eigen::Index i = 0; i < p.axis.size(); ++i)
    t.rows.push_back({format_double(p.axis.points(i)),
                      format_double(p.values(i)),
                      format_double(p.values(i) / peak)});
  write_csv(path, t);
}

void write_sections_csv(const std::string& path, const std::string& axis_header,
                        const Eigen::VectorXd& axis,
                        const Eigen::VectorXcd& auto_sec,
                        const Eigen::VectorXd& cross_sec) {
  CsvTable t;
  t.header = {axis_header, "A_re[arb]", "A_im[arb]", "A_abs[arb]", "C[arb]"};
  for (Eigen::Index i = 0; i < axis.size(); ++i)
    t.rows.push_back({format_double(axis(i)), format_double(auto_sec(i).real()),
                      format_double(auto_sec(i).imag()),
                      format_double(std::abs(auto_sec(i))),
                      format_double(cross_sec(i))});
  write_csv(path, t);
}

void write_modes_csv(const std::string& path, const std::string& axis_header,
                     const SchmidtDecomposition& dec, int n_modes) {
  if (dec.row_grid.size() != dec.col_grid.size())
    throw std::invalid_argument("write_modes_csv: beams on different grids");
  int nq = static_cast<int>(
      std::min<Eigen::Index>(n_modes, dec.coefficients.size()));
  CsvTable t;
  t.header = {axis_header};
  for (int q = 0; q < nq; ++q) {
    std::string b = "f" + std::to_string(q);
    t.header.push_back(b + "_s_re");
    t.header.push_back(b + "_s_im");
    t.header.push_back(b + "_i_re");
    t.header.push_back(b + "_i_im");
  }
  for (Eigen::Index i = 0; i < dec.row_grid.size(); ++i) {
    std::vector<std::string> row{format_double(dec.row_grid.points(i))};
    for (int q = 0; q < nq; ++q) {
      row.push_back(format_double(dec.signal_modes(i, q).real()));
      row.push_back(format_double(dec.signal_modes(i, q).imag()));
      row.push_back(format_double(dec.idler_modes(i, q).real()));
      row.push_back(format_double(dec.idler_modes(i, q).imag()));
    }
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

void write_coefficients_csv(const std::string& path,
                            const SchmidtDecomposition& dec) {
  CsvTable t;
  t.header = {"q[1]", "lambda[1]"};
  for (Eigen::Index q = 0; q < dec.coefficients.size(); ++q)
    t.rows.push_back(
        {format_double(static_cast<double>(q)), format_double(dec.coefficients(q))});
  write_csv(path, t);
}

}  // namespace

TransverseMetrics transverse_metrics(const RunConfig& cfg, int workers) {
  return transverse_work(cfg, workers).m;
}

SpectralMetrics spectral_metrics(const RunConfig& cfg, double filter_fwhm) {
  return spectral_work(cfg, filter_fwhm).m;
}

std::vector<std::pair<std::string, double>> metric_list(
    const TransverseMetrics& m) {
  return {{"K_kphi", m.K_kphi},           {"K_k", m.K_k},
          {"K_phi", m.K_phi},             {"KDelta_k", m.KDelta_k},
          {"KDelta_phi", m.KDelta_phi},   {"KDelta_kphi", m.KDelta_kphi},
          {"Delta_n_k", m.Delta_n_k},     {"Delta_A_k", m.Delta_A_k},
          {"Delta_A2_k", m.Delta_A2_k},   {"Delta_C_k", m.Delta_C_k},
          {"Delta_A_phi", m.Delta_A_phi}, {"Delta_A2_phi", m.Delta_A2_phi},
          {"Delta_C_phi", m.Delta_C_phi}, {"w_p_a", m.w_p_a}};
}

std::vector<std::pair<std::string, double>> metric_list(
    const SpectralMetrics& m) {
  return {{"K_omega", m.K_omega},
          {"KDelta_omega", m.KDelta_omega},
          {"Delta_n_omega", m.Delta_n_omega},
          {"Delta_A_omega", m.Delta_A_omega},
          {"Delta_A2_omega", m.Delta_A2_omega},
          {"Delta_C_omega", m.Delta_C_omega}};
}

std::string manifest_text(const RunConfig& cfg, const std::string& command,
                          const std::vector<std::string>& outputs,
                          const std::string& extra_json) {
  json m;
  m["artifact"] = "pdc";
  m["command"] = command;
  m["config_hash"] = config_hash_hex(cfg);
  m["config"] = json::parse(resolved_config_text(cfg));
  m["outputs"] = outputs;
  json extra = json::parse(extra_json);
  for (auto& [k, v] : extra.items()) m[k] = v;
  return m.dump(2) + "\n";
}

void cmd_analyze(const RunConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto at = [&](const std::string& name) {
    return (fs::path(out_dir) / name).string();
  };
  const NumericsConfig& num = cfg.numerics;

  TransverseWork tw = transverse_work(cfg, num.workers);
  SpectralWork sw = spectral_work(cfg, 0.0);

  // Metrics summary: both catalogs plus the resolved discretization sizes.
  CsvTable mt;
  mt.rows.emplace_back();
  auto push = [&](const std::string& name, double v) {
    mt.header.push_back(name + "[" + metric_unit(name) + "]");
    mt.rows[0].push_back(format_double(v));
  };
  for (const auto& [name, v] : metric_list(tw.m)) push(name, v);
  for (const auto& [name, v] : metric_list(sw.m)) push(name, v);
  push("m_stop", tw.m.m_stop);
  push("n_spectral", sw.m.n_spectral);
  write_csv(at("metrics.csv"), mt);

  write_profile_csv(at("intensity_radial.csv"), "k[rad/m]", tw.marg);
  write_profile_csv(at("intensity_spectral.csv"), "omega[rad/s]", sw.marg);
  write_sections_csv(at("corr_radial.csv"), "k[rad/m]", tw.gr.points,
                     tw.auto_sec, tw.cross_sec);
  write_sections_csv(at("corr_spectral.csv"), "omega[rad/s]", sw.gw.points,
                     sw.auto_sec, sw.cross_sec);

  // Azimuthal sections on the lattice-difference axis.
  {
    Eigen::VectorXcd ac = tw.az.auto_c;
    Eigen::VectorXd cc = tw.az.cross_t2;
    write_sections_csv(at("corr_azimuthal.csv"), "delta_phi[rad]",
                       tw.az.delta_axis, ac, cc);
  }

  DecomposeOptions dopt;
  dopt.coeff_truncation = num.coeff_truncation;

  KernelMatrix t0 = build_transverse_component(0, tw.g, cfg.crystal, cfg.pump,
                                               tw.gr, tw.gr, tw.n_phi);
  SchmidtDecomposition dec_r = decompose(t0, dopt);
  write_modes_csv(at("modes_radial.csv"), "k[rad/m]", dec_r,
                  cfg.output.n_modes);
  write_coefficients_csv(at("schmidt_radial_m0.csv"), dec_r);

  // Mode export decomposes the full matrix; cap the grid so the SVD stays
  // tractable. Metrics above always use the resolution-controlled grid.
  SchmidtDecomposition dec_s;
  int n_modes_grid = static_cast<int>(sw.gw.size());
  if (sw.gw.size() > 1024) {
    SpectralSpan span = spectral_span(sw.g, cfg.crystal, cfg.pump, 1024);
    Grid gw2 = spectral_grid(span, sw.g);
    KernelMatrix F2 = build_spectral_kernel(sw.g, cfg.crystal, cfg.pump, gw2, gw2);
    dec_s = decompose(F2, dopt);
    n_modes_grid = 1024;
  } else {
    dec_s = decompose(sw.F, dopt);
  }
  write_modes_csv(at("modes_spectral.csv"), "omega[rad/s]", dec_s,
                  cfg.output.n_modes);
  write_coefficients_csv(at("schmidt_spectral.csv"), dec_s);

  std::vector<std::string> files = {
      "metrics.csv",          "intensity_radial.csv", "intensity_spectral.csv",
      "corr_radial.csv",      "corr_spectral.csv",    "corr_azimuthal.csv",
      "modes_radial.csv",     "schmidt_radial_m0.csv", "modes_spectral.csv",
      "schmidt_spectral.csv"};

  json extra;
  extra["geometry"] = {{"lambda_s0", tw.g.lambda_s0},
                       {"theta_int_deg", tw.g.theta_s_int * 180.0 / pi},
                       {"theta_ext_deg", tw.g.theta_s_ext * 180.0 / pi},
                       {"k_perp0", tw.g.k_perp0},
                       {"n_p", tw.g.n_p},
                       {"dn_p_dtheta", tw.g.dn_p_dtheta},
                       {"w_p_a", tw.m.w_p_a}};
  extra["grids"] = {{"n_radial", tw.gr.size()},
                    {"n_phi", tw.n_phi},
                    {"n_phi_corr", scaled(num.n_phi_corr, num.grid_scale)},
                    {"m_stop", tw.m.m_stop},
                    {"n_spectral", sw.m.n_spectral},
                    {"n_spectral_modes", n_modes_grid}};
  write_text(at("manifest.json"),
             manifest_text(cfg, "analyze", files, extra.dump()));
}

namespace {

struct CheckReporter {
  int failures = 0;
  void check(const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s %s (%s)\n", ok ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    if (!ok) ++failures;
  }
};

std::string rel_str(double err) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max rel err %.2e", err);
  return buf;
}

}  // namespace

int run_selfcheck(bool defect_xe) {
  CheckReporter rep;

  {  // Gauss-Legendre: exact for polynomials up to degree 2n-1.
    Grid g = gauss_legendre(0.0, 1.0, 16, GridKind::radial);
    double worst = 0;
    for (int k = 0; k <= 31; ++k) {
      double val = (g.points.array().pow(k) * g.weights.array()).sum();
      worst = std::max(worst, std::abs(val - 1.0 / (k + 1)) * (k + 1));
    }
    rep.check("quadrature-polynomial-exactness", worst < 1e-13, rel_str(worst));
  }

  {  // Trapezoid: exact for affine integrands.
    Grid g = trapezoid(0.0, 3.0, 7, GridKind::azimuthal);
    double val = ((2.0 * g.points.array() + 1.0) * g.weights.array()).sum();
    double err = std::abs(val - 12.0) / 12.0;
    rep.check("trapezoid-affine-exactness", err < 1e-13, rel_str(err));
  }

  {  // FWHM of a sampled Gaussian against 2 sqrt(2 ln 2) sigma.
    double sigma = 1.3;
    Grid g = gauss_legendre(-8.0, 8.0, 257, GridKind::spectral);
    Eigen::VectorXd y =
        (-g.points.array().square() / (2 * sigma * sigma)).exp();
    double expect = 2.0 * std::sqrt(2.0 * std::numbers::ln2) * sigma;
    double err = std::abs(fwhm_linear(g.points, y) - expect) / expect;
    rep.check("gaussian-fwhm", err < 1e-3, rel_str(err));
  }

  {  // Separable kernel has exactly one Schmidt mode.
    Grid g = gauss_legendre(-6.0, 6.0, 96, GridKind::spectral);
    KernelMatrix k;
    k.row_grid = k.col_grid = g;
    k.values.resize(g.size(), g.size());
    for (Eigen::Index j = 0; j < g.size(); ++j)
      for (Eigen::Index i = 0; i < g.size(); ++i)
        k.values(i, j) =
            std::exp(-(g.points(i) - 0.3) * (g.points(i) - 0.3)) *
            std::exp(std::complex<double>(-2.0 * g.points(j) * g.points(j),
                                          0.7 * g.points(j)));
    SchmidtDecomposition d = decompose(k);
    double err = std::abs(d.schmidt_number_K - 1.0);
    rep.check("separable-kernel-K1", err < 1e-6, rel_str(err));
  }

  {  // Double-Gaussian kernel exp(-a(x^2+y^2) - b x y): geometric Schmidt
     // spectrum lambda_q^2 = (1 - rho^2) rho^(2q), rho = 2g - sqrt(4g^2 - 1),
     // g = a / |b|.
    double a = 1.0, b = 0.8;
    double gg = a / std::abs(b);
    double rho = 2 * gg - std::sqrt(4 * gg * gg - 1.0);
    Grid g = gauss_legendre(-8.0, 8.0, 200, GridKind::spectral);
    KernelMatrix k;
    k.row_grid = k.col_grid = g;
    k.values.resize(g.size(), g.size());
    for (Eigen::Index j = 0; j < g.size(); ++j)
      for (Eigen::Index i = 0; i < g.size(); ++i)
        k.values(i, j) = std::exp(
            -a * (g.points(i) * g.points(i) + g.points(j) * g.points(j)) -
            b * g.points(i) * g.points(j));
    SchmidtDecomposition d = decompose(k);
    double worst = 0;
    for (int q = 0; q <= 5; ++q) {
      double expect = (1 - rho * rho) * std::pow(rho, 2 * q);
      double lam2 = d.coefficients(q) * d.coefficients(q);
      worst = std::max(worst, std::abs(lam2 - expect) / expect);
    }
    double k_expect = (1 + rho * rho) / (1 - rho * rho);
    worst = std::max(worst,
                     std::abs(d.schmidt_number_K - k_expect) / k_expect);
    rep.check("gaussian-schmidt-spectrum", worst < 1e-8, rel_str(worst));
  }

  {  // Eq. (5) hand value: 0.123 / 1.658 * 8 mm / 2.2 = 269.7664 um.
    double x_e = defect_xe ? 2.0 : 2.2;
    double got = anisotropy_radius(1.658, -0.123, 8e-3, x_e);
    double expect = 2.697664217567716e-4;
    double err = std::abs(got - expect) / expect;
    rep.check("anisotropy-radius-hand-value", err < 1e-12, rel_str(err));
  }

  std::printf("%s: %d failure%s\n", rep.failures ? "SELFCHECK FAILED" : "selfcheck ok",
              rep.failures, rep.failures == 1 ? "" : "s");
  return rep.failures;
}

}  // namespace pdc

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pdc/config.hpp"

namespace pdc {

// Single-point metrics for the transverse (momentum-space) kernel at the
// degenerate wavelength. Widths follow the section conventions of the
// correlation module: auto widths at the marginal-intensity peak, cross
// widths at the central transverse momentum.
struct TransverseMetrics {
  double K_kphi = 0;        // full transverse Schmidt number
  double K_k = 0;           // radial factor (m = 0 component)
  double K_phi = 0;         // azimuthal factor, K_kphi / K_k
  double Delta_n_k = 0;     // marginal intensity FWHM [rad/m]
  double Delta_A_k = 0;     // auto-correlation modulus FWHM [rad/m]
  double Delta_A2_k = 0;    // squared-modulus FWHM [rad/m]
  double Delta_C_k = 0;     // conditional intensity FWHM [rad/m]
  double Delta_A_phi = 0;   // azimuthal auto-correlation FWHM [rad]
  double Delta_A2_phi = 0;  // [rad]
  double Delta_C_phi = 0;   // [rad]
  double KDelta_k = 0;      // Delta_n_k / Delta_A_k
  double KDelta_phi = 0;    // 2 pi / Delta_A_phi
  double KDelta_kphi = 0;   // KDelta_k * KDelta_phi
  double w_p_a = 0;         // anisotropy-limited pump radius [m]
  int m_stop = 0;           // azimuthal orders retained by the scan
};

// Spectral metrics. A filter FWHM > 0 applies identical Gaussian passbands
// to both beams before decomposition (see apply_spectral_filter).
struct SpectralMetrics {
  double K_omega = 0;
  double Delta_n_omega = 0;   // [rad/s]
  double Delta_A_omega = 0;   // [rad/s]
  double Delta_A2_omega = 0;  // [rad/s]
  double Delta_C_omega = 0;   // [rad/s]
  double KDelta_omega = 0;    // Delta_n_omega / Delta_A_omega
  int n_spectral = 0;         // grid size actually used
};

TransverseMetrics transverse_metrics(const RunConfig& cfg, int workers);
SpectralMetrics spectral_metrics(const RunConfig& cfg, double filter_fwhm = 0.0);

// Name/value pairs in the fixed catalog order shared with the sweep CSVs.
std::vector<std::pair<std::string, double>> metric_list(const TransverseMetrics& m);
std::vector<std::pair<std::string, double>> metric_list(const SpectralMetrics& m);

// Deterministic manifest JSON: resolved config, its hash, the command, the
// produced files, and command-specific entries merged from extra_json.
// No timestamps; reruns are byte-identical.
std::string manifest_text(const RunConfig& cfg, const std::string& command,
                          const std::vector<std::string>& outputs,
                          const std::string& extra_json = "{}");

// Runs the full single-point analysis and writes metrics, profiles, mode
// functions, correlation sections, and a manifest into out_dir. Throws on
// any failure; the CLI maps that to error.json.
void cmd_analyze(const RunConfig& cfg, const std::string& out_dir);

// Built-in checks against closed-form results. Prints one PASS/FAIL line
// per check and returns the number of failures. defect_xe injects a wrong
// anisotropy constant so the hand-value check must fail (negative control).
int run_selfcheck(bool defect_xe = false);

}  // namespace pdc

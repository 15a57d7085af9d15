#pragma once

#include <cstdint>
#include <string>

#include "pdc/dispersion.hpp"
#include "pdc/pump.hpp"

namespace pdc {

struct NumericsConfig {
  int n_radial = 256;       // radial Gauss-Legendre points per beam
  int n_phi = 512;          // azimuthal trapezoid points for T_m projection
  int n_spectral = 0;       // 0 = auto-sized from the span
  int m_max = 8192;         // azimuthal-order scan ceiling
  int n_phi_corr = 131072;  // circle lattice for azimuthal correlations
  double coeff_truncation = 1e-12;
  double azimuthal_norm_stop = 1e-4;
  int workers = 1;
  double grid_scale = 1.0;  // multiplies all grid sizes
};

struct OutputConfig {
  std::string dir = "out";
  int n_modes = 3;  // mode functions exported per decomposition
};

struct RunConfig {
  CrystalConfig crystal;
  PumpConfig pump;
  NumericsConfig numerics;
  OutputConfig output;
  double cut_angle_deg = 36.3;  // as-given degrees; exact re-serialization
};

// Parse + validate a JSON config file. Units: lengths in meters, angles in
// degrees, durations in seconds, bandwidths in meters of wavelength.
// Fail-closed: unknown keys are rejected; errors name the offending field.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin);

// Canonical resolved-config JSON text (sorted keys, all defaults explicit,
// pump bandwidth canonicalized to tau_p). load of this text is the identity.
std::string resolved_config_text(const RunConfig& cfg);

// FNV-1a 64-bit over the canonical text; provenance marker for manifests.
std::uint64_t config_hash(const RunConfig& cfg);
std::string config_hash_hex(const RunConfig& cfg);

// Grid sizes after grid_scale (rounded to the nearest integer, minimum 8).
int scaled(int n, double grid_scale);

}  // namespace pdc

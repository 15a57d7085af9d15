#pragma once

#include <string>
#include <vector>

#include "pdc/config.hpp"
#include "pdc/kernels.hpp"

namespace pdc {

enum class SweepParameter {
  pump_radius_w_p,         // meters; drives the transverse pipeline
  pump_bandwidth_dlambda_p,  // meters of wavelength; spectral pipeline
  filter_width,            // meters of wavelength; spectral pipeline + filter
};

struct SweepSpec {
  SweepParameter parameter = SweepParameter::pump_radius_w_p;
  std::vector<double> values;        // strictly increasing, positive
  std::vector<std::string> outputs;  // metric names, subset of the catalog
  RunConfig base;
};

struct SweepRecord {
  double parameter_value = 0;
  std::vector<double> metrics;  // aligned with spec.outputs; empty on error
  std::string error;            // empty when the point succeeded
};

const std::vector<std::string>& sweep_metric_catalog(SweepParameter p);
std::string sweep_parameter_name(SweepParameter p);
std::string sweep_parameter_unit(SweepParameter p);
std::string metric_unit(const std::string& name);

// Applies identical Gaussian passbands in omega_s and omega_i, centered on
// the degenerate frequencies of the kernel's grids. filter_fwhm is the FWHM
// of the intensity transmission expressed in meters of wavelength at the
// degenerate wavelength.
KernelMatrix apply_spectral_filter(const KernelMatrix& kernel, double filter_fwhm,
                                   const Geometry& geometry);

SweepSpec parse_sweep_spec(const std::string& text, const RunConfig& base,
                           const std::string& origin);
SweepSpec load_sweep_spec(const std::string& path, const RunConfig& base);

// Evaluates every point, in spec order, failures included: a point that
// throws produces a record with the message in `error` instead of aborting
// the sweep. Points run concurrently up to `workers`; records are assembled
// in order so output does not depend on the worker count.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec, int workers);

void cmd_sweep(const SweepSpec& spec, const std::string& out_dir, int workers);

}  // namespace pdc

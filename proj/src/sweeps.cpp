#include "pdc/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "pdc/analyze.hpp"
#include "pdc/constants.hpp"
#include "pdc/csv.hpp"
#include "pdc/parallel.hpp"

namespace pdc {

namespace {

using json = nlohmann::json;

std::vector<std::string> names_of(
    const std::vector<std::pair<std::string, double>>& list) {
  std::vector<std::string> names;
  names.reserve(list.size());
  for (const auto& [n, v] : list) names.push_back(n);
  return names;
}

}  // namespace

const std::vector<std::string>& sweep_metric_catalog(SweepParameter p) {
  static const std::vector<std::string> transverse =
      names_of(metric_list(TransverseMetrics{}));
  static const std::vector<std::string> spectral =
      names_of(metric_list(SpectralMetrics{}));
  return p == SweepParameter::pump_radius_w_p ? transverse : spectral;
}

std::string sweep_parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::pump_radius_w_p:
      return "pump_radius_w_p";
    case SweepParameter::pump_bandwidth_dlambda_p:
      return "pump_bandwidth_dlambda_p";
    case SweepParameter::filter_width:
      return "filter_width";
  }
  return {};
}

std::string sweep_parameter_unit(SweepParameter p) {
  // All three are lengths: a beam radius or a width in wavelength.
  (void)p;
  return "m";
}

std::string metric_unit(const std::string& name) {
  if (!name.empty() && name.front() == 'K') return "1";
  if (name == "w_p_a") return "m";
  if (name.ends_with("_k")) return "rad/m";
  if (name.ends_with("_phi")) return "rad";
  if (name.ends_with("_omega")) return "rad/s";
  return "1";
}

KernelMatrix apply_spectral_filter(const KernelMatrix& kernel,
                                   double filter_fwhm,
                                   const Geometry& geometry) {
  if (kernel.label != KernelLabel::F_L)
    throw std::invalid_argument("apply_spectral_filter: expects a spectral kernel");
  if (!(filter_fwhm > 0) || !std::isfinite(filter_fwhm))
    throw std::invalid_argument("apply_spectral_filter: filter_fwhm must be positive");

  // filter_fwhm is the FWHM of the intensity transmission in wavelength at
  // degeneracy; convert with |d omega / d lambda| = 2 pi c / lambda^2.
  double d_omega =
      2 * pi * c_light / (geometry.lambda_s0 * geometry.lambda_s0) * filter_fwhm;
  double omega_s0 = 2 * pi * c_light / geometry.lambda_s0;
  double omega_i0 = 2 * pi * c_light / geometry.lambda_i0;
  auto amplitude = [&](double omega, double center) {
    double u = (omega - center) / d_omega;
    return std::exp(-2.0 * std::numbers::ln2 * u * u);
  };

  KernelMatrix out = kernel;
  Eigen::VectorXd gs(kernel.row_grid.size()), gi(kernel.col_grid.size());
  for (Eigen::Index i = 0; i < gs.size(); ++i)
    gs(i) = amplitude(kernel.row_grid.points(i), omega_s0);
  for (Eigen::Index j = 0; j < gi.size(); ++j)
    gi(j) = amplitude(kernel.col_grid.points(j), omega_i0);
  out.values = gs.cast<std::complex<double>>().asDiagonal() * kernel.values *
               gi.cast<std::complex<double>>().asDiagonal();
  return out;
}

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
  throw std::runtime_error(origin + ": " + msg);
}

SweepParameter parameter_from_name(const std::string& name,
                                   const std::string& origin) {
  for (SweepParameter p :
       {SweepParameter::pump_radius_w_p, SweepParameter::pump_bandwidth_dlambda_p,
        SweepParameter::filter_width})
    if (name == sweep_parameter_name(p)) return p;
  fail(origin, "unknown sweep parameter '" + name +
                   "' (expected pump_radius_w_p, pump_bandwidth_dlambda_p, "
                   "or filter_width)");
}

std::vector<double> evaluate_point(const SweepSpec& spec, double value) {
  RunConfig cfg = spec.base;
  std::vector<std::pair<std::string, double>> all;
  switch (spec.parameter) {
    case SweepParameter::pump_radius_w_p:
      cfg.pump.w_p = value;
      all = metric_list(transverse_metrics(cfg, 1));
      break;
    case SweepParameter::pump_bandwidth_dlambda_p:
      cfg.pump.tau_p = tau_from_dlambda(cfg.pump.lambda_p0, value);
      all = metric_list(spectral_metrics(cfg));
      break;
    case SweepParameter::filter_width:
      all = metric_list(spectral_metrics(cfg, value));
      break;
  }
  std::vector<double> out;
  out.reserve(spec.outputs.size());
  for (const std::string& name : spec.outputs) {
    auto it = std::find_if(all.begin(), all.end(),
                           [&](const auto& kv) { return kv.first == name; });
    if (it == all.end())
      throw std::logic_error("metric '" + name + "' missing from catalog");
    if (!std::isfinite(it->second))
      throw std::runtime_error("metric '" + name + "' is not finite");
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

SweepSpec parse_sweep_spec(const std::string& text, const RunConfig& base,
                           const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, e.what());
  }
  if (!j.is_object()) fail(origin, "sweep spec must be a JSON object");
  for (const auto& [key, v] : j.items())
    if (key != "parameter" && key != "values" && key != "outputs")
      fail(origin, "unknown key '" + key + "'");

  SweepSpec spec;
  spec.base = base;

  if (!j.contains("parameter") || !j["parameter"].is_string())
    fail(origin, "missing string field 'parameter'");
  spec.parameter = parameter_from_name(j["parameter"].get<std::string>(), origin);

  if (!j.contains("values") || !j["values"].is_array() || j["values"].empty())
    fail(origin, "'values' must be a non-empty array of numbers");
  for (const auto& v : j["values"]) {
    if (!v.is_number()) fail(origin, "'values' must be a non-empty array of numbers");
    double x = v.get<double>();
    if (!(x > 0) || !std::isfinite(x)) fail(origin, "'values' entries must be positive");
    spec.values.push_back(x);
  }
  for (size_t i = 1; i < spec.values.size(); ++i)
    if (!(spec.values[i] > spec.values[i - 1]))
      fail(origin, "'values' must be strictly increasing");

  const auto& catalog = sweep_metric_catalog(spec.parameter);
  if (!j.contains("outputs")) {
    spec.outputs = catalog;
  } else {
    if (!j["outputs"].is_array() || j["outputs"].empty())
      fail(origin, "'outputs' must be a non-empty array of metric names");
    if (j["outputs"].size() == 1 && j["outputs"][0] == "all") {
      spec.outputs = catalog;
      return spec;
    }
    for (const auto& v : j["outputs"]) {
      if (!v.is_string())
        fail(origin, "'outputs' must be a non-empty array of metric names");
      std::string name = v.get<std::string>();
      if (std::find(catalog.begin(), catalog.end(), name) == catalog.end())
        fail(origin, "unknown metric '" + name + "' for parameter '" +
                         sweep_parameter_name(spec.parameter) + "'");
      if (std::find(spec.outputs.begin(), spec.outputs.end(), name) !=
          spec.outputs.end())
        fail(origin, "duplicate metric '" + name + "' in 'outputs'");
      spec.outputs.push_back(name);
    }
  }
  return spec;
}

SweepSpec load_sweep_spec(const std::string& path, const RunConfig& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open sweep spec '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_sweep_spec(text, base, path);
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, int workers) {
  const int n = static_cast<int>(spec.values.size());
  std::vector<SweepRecord> records(n);
  // Points are independent; each inner pipeline runs single-threaded so the
  // records are identical for every worker count.
  parallel_for(n, workers, [&](int i) {
    SweepRecord& r = records[i];
    r.parameter_value = spec.values[i];
    try {
      r.metrics = evaluate_point(spec, spec.values[i]);
    } catch (const std::exception& e) {
      r.metrics.clear();
      r.error = e.what();
    }
  });
  return records;
}

void cmd_sweep(const SweepSpec& spec, const std::string& out_dir, int workers) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  std::vector<SweepRecord> records = run_sweep(spec, workers);

  std::string pname = sweep_parameter_name(spec.parameter);
  CsvTable t;
  t.header.push_back(pname + "[" + sweep_parameter_unit(spec.parameter) + "]");
  for (const std::string& name : spec.outputs)
    t.header.push_back(name + "[" + metric_unit(name) + "]");
  t.header.push_back("error");
  for (const SweepRecord& r : records) {
    std::vector<std::string> row{format_double(r.parameter_value)};
    if (r.error.empty()) {
      for (double v : r.metrics) row.push_back(format_double(v));
    } else {
      row.insert(row.end(), spec.outputs.size(), "");
    }
    row.push_back(r.error);
    t.rows.push_back(std::move(row));
  }
  std::string csv_name = "sweep_" + pname + ".csv";
  write_csv((fs::path(out_dir) / csv_name).string(), t);

  json extra;
  extra["sweep"] = {{"parameter", pname},
                    {"values", spec.values},
                    {"outputs", spec.outputs}};
  std::string manifest = manifest_text(spec.base, "sweep", {csv_name}, extra.dump());
  std::ofstream out((fs::path(out_dir) / "manifest.json").string(), std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest.json");
  out << manifest;
}

}  // namespace pdc

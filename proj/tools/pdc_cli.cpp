#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "pdc/analyze.hpp"
#include "pdc/config.hpp"
#include "pdc/sweeps.hpp"

namespace {

// Exit codes: 0 success, 1 selfcheck failures, 2 config/spec rejection,
// 3 numerical failure during a run (error.json written next to the outputs).

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  int workers = 0;         // 0 = keep the config value
  double grid_scale = 0;   // 0 = keep the config value
};

void add_common(CLI::App* sub, CommonOpts& o, bool with_out) {
  sub->add_option("--config", o.config_path, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  if (with_out)
    sub->add_option("--out", o.out_dir, "output directory (default from config)");
  sub->add_option("--workers", o.workers, "worker threads (overrides config)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--grid-scale", o.grid_scale,
                  "multiplies all grid sizes (overrides config)")
      ->check(CLI::PositiveNumber);
}

pdc::RunConfig load_with_overrides(const CommonOpts& o) {
  pdc::RunConfig cfg = pdc::load_config(o.config_path);
  if (o.workers > 0) cfg.numerics.workers = o.workers;
  if (o.grid_scale > 0) cfg.numerics.grid_scale = o.grid_scale;
  return cfg;
}

void write_error_json(const std::string& out_dir, const std::string& message) {
  try {
    std::filesystem::create_directories(out_dir);
    nlohmann::ordered_json j;
    j["error"] = message;
    std::ofstream out(std::filesystem::path(out_dir) / "error.json",
                      std::ios::binary);
    out << j.dump(2) << "\n";
  } catch (...) {
    // The primary error is already on its way to stderr.
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twin-beam mode structure for type-I PDC in BBO"};
  app.require_subcommand(1);

  CommonOpts analyze_opts, sweep_opts, print_opts;
  std::string spec_path;
  bool defect_xe = false;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "full single-configuration analysis into --out");
  add_common(analyze, analyze_opts, true);

  CLI::App* sweep =
      app.add_subcommand("sweep", "parameter sweep driven by a JSON spec");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--spec", spec_path, "JSON sweep specification")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* selfcheck = app.add_subcommand(
      "selfcheck", "verify built-in results against closed forms");
  selfcheck->add_flag("--defect-xe", defect_xe)->group("");

  CLI::App* print_config = app.add_subcommand(
      "print-config", "print the resolved configuration JSON");
  add_common(print_config, print_opts, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(selfcheck))
      return pdc::run_selfcheck(defect_xe) == 0 ? 0 : 1;

    if (app.got_subcommand(print_config)) {
      pdc::RunConfig cfg = load_with_overrides(print_opts);
      std::fputs(pdc::resolved_config_text(cfg).c_str(), stdout);
      std::fprintf(stderr, "config_hash %s\n",
                   pdc::config_hash_hex(cfg).c_str());
      return 0;
    }

    if (app.got_subcommand(analyze)) {
      pdc::RunConfig cfg = load_with_overrides(analyze_opts);
      std::string out_dir =
          analyze_opts.out_dir.empty() ? cfg.output.dir : analyze_opts.out_dir;
      try {
        pdc::cmd_analyze(cfg, out_dir);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        write_error_json(out_dir, e.what());
        return 3;
      }
      return 0;
    }

    if (app.got_subcommand(sweep)) {
      pdc::RunConfig cfg = load_with_overrides(sweep_opts);
      std::string out_dir =
          sweep_opts.out_dir.empty() ? cfg.output.dir : sweep_opts.out_dir;
      pdc::SweepSpec spec = pdc::load_sweep_spec(spec_path, cfg);
      try {
        pdc::cmd_sweep(spec, out_dir, cfg.numerics.workers);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        write_error_json(out_dir, e.what());
        return 3;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

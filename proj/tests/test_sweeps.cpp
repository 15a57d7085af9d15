#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdc/analyze.hpp"
#include "pdc/constants.hpp"
#include "pdc/csv.hpp"
#include "pdc/kernels.hpp"
#include "pdc/schmidt.hpp"
#include "pdc/sweeps.hpp"

using namespace pdc;

namespace {
constexpr double deg = pi / 180.0;

RunConfig base_cfg() {
  RunConfig cfg;
  cfg.crystal.cut_angle_theta = 36.3 * deg;
  cfg.crystal.sellmeier = sellmeier_named("eimerl1987");
  cfg.pump.w_p = 1.0e-3;
  cfg.pump.tau_p = tau_from_dlambda(cfg.pump.lambda_p0, 0.5e-9);
  cfg.numerics.n_spectral = 192;
  return cfg;
}

std::string thrown_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}
}  // namespace

TEST_SUITE("sweeps") {

TEST_CASE("spec parsing is fail-closed and names its origin") {
  RunConfig base = base_cfg();
  auto parse = [&](const std::string& text) {
    return parse_sweep_spec(text, base, "myspec.json");
  };

  SweepSpec ok = parse(
      R"({"parameter":"pump_bandwidth_dlambda_p","values":[5e-10,1e-9],)"
      R"("outputs":["K_omega","Delta_n_omega"]})");
  CHECK(ok.parameter == SweepParameter::pump_bandwidth_dlambda_p);
  CHECK(ok.values == std::vector<double>{5e-10, 1e-9});
  CHECK(ok.outputs == std::vector<std::string>{"K_omega", "Delta_n_omega"});

  // "all" expands to the catalog, and omitting outputs means the same
  const auto& cat = sweep_metric_catalog(SweepParameter::pump_bandwidth_dlambda_p);
  CHECK(parse(R"({"parameter":"pump_bandwidth_dlambda_p","values":[1e-9],)"
              R"("outputs":["all"]})")
            .outputs == cat);
  CHECK(parse(R"({"parameter":"pump_bandwidth_dlambda_p","values":[1e-9]})")
            .outputs == cat);

  struct Bad {
    const char* text;
    const char* needle;
  };
  const Bad bad[] = {
      {"{", "myspec.json"},
      {R"([1,2])", "must be a JSON object"},
      {R"({"parameter":"filter_width","values":[1e-9],"extra":1})",
       "unknown key 'extra'"},
      {R"({"values":[1e-9]})", "missing string field 'parameter'"},
      {R"({"parameter":"beam_waist","values":[1e-9]})",
       "unknown sweep parameter 'beam_waist'"},
      {R"({"parameter":"filter_width"})", "'values' must be a non-empty array"},
      {R"({"parameter":"filter_width","values":[]})",
       "'values' must be a non-empty array"},
      {R"({"parameter":"filter_width","values":["x"]})",
       "'values' must be a non-empty array of numbers"},
      {R"({"parameter":"filter_width","values":[-1e-9]})",
       "'values' entries must be positive"},
      {R"({"parameter":"filter_width","values":[2e-9,1e-9]})",
       "'values' must be strictly increasing"},
      {R"({"parameter":"filter_width","values":[1e-9,1e-9]})",
       "'values' must be strictly increasing"},
      {R"({"parameter":"filter_width","values":[1e-9],"outputs":[]})",
       "'outputs' must be a non-empty array"},
      {R"({"parameter":"filter_width","values":[1e-9],"outputs":["K_k"]})",
       "unknown metric 'K_k' for parameter 'filter_width'"},
      {R"({"parameter":"filter_width","values":[1e-9],)"
       R"("outputs":["all","K_omega"]})",
       "unknown metric 'all'"},
      {R"({"parameter":"filter_width","values":[1e-9],)"
       R"("outputs":["K_omega","K_omega"]})",
       "duplicate metric 'K_omega'"},
  };
  for (const Bad& b : bad) {
    std::string msg = thrown_message([&] { parse(b.text); });
    INFO("spec: " << b.text << " -> " << msg);
    CHECK(msg.find("myspec.json: ") == 0);
    CHECK(msg.find(b.needle) != std::string::npos);
  }
}

TEST_CASE("metric catalogs and units") {
  const auto& tr = sweep_metric_catalog(SweepParameter::pump_radius_w_p);
  const auto& sp = sweep_metric_catalog(SweepParameter::filter_width);
  CHECK(tr.size() == 14);
  CHECK(sp.size() == 6);
  CHECK(tr.front() == "K_kphi");
  CHECK(sp.front() == "K_omega");
  CHECK(std::find(tr.begin(), tr.end(), "w_p_a") != tr.end());
  CHECK(sweep_metric_catalog(SweepParameter::pump_bandwidth_dlambda_p) == sp);

  CHECK(metric_unit("K_kphi") == "1");
  CHECK(metric_unit("KDelta_omega") == "1");
  CHECK(metric_unit("Delta_n_k") == "rad/m");
  CHECK(metric_unit("Delta_A_phi") == "rad");
  CHECK(metric_unit("Delta_C_omega") == "rad/s");
  CHECK(metric_unit("w_p_a") == "m");
  CHECK(metric_unit("m_stop") == "1");

  CHECK(sweep_parameter_name(SweepParameter::pump_radius_w_p) ==
        "pump_radius_w_p");
  CHECK(sweep_parameter_unit(SweepParameter::filter_width) == "m");
}

TEST_CASE("spectral filter narrows the mode content monotonically") {
  RunConfig cfg = base_cfg();
  Geometry g = solve_geometry(cfg.crystal, cfg.pump.lambda_p0);
  SpectralSpan span = spectral_span(g, cfg.crystal, cfg.pump, 192);
  Grid gw = spectral_grid(span, g);
  KernelMatrix F = build_spectral_kernel(g, cfg.crystal, cfg.pump, gw, gw);
  double K0 = kernel_schmidt_number(F);

  // A filter much wider than the kernel support changes nothing.
  double K_wide = kernel_schmidt_number(apply_spectral_filter(F, 1e-4, g));
  CHECK(K_wide == doctest::Approx(K0).epsilon(1e-6));

  // Passbands from well below to comparable with the ~57 nm marginal width;
  // narrower ones underflow on this 192-point grid.
  double prev = 1.0;
  for (double f : {2e-9, 10e-9, 30e-9, 80e-9}) {
    double Kf = kernel_schmidt_number(apply_spectral_filter(F, f, g));
    CHECK(Kf > prev);
    CHECK(Kf <= K0 * (1 + 1e-12));
    prev = Kf;
  }

  Grid gr = gauss_legendre(1e6, 2e6, 8, GridKind::radial);
  KernelMatrix sec;
  sec.row_grid = sec.col_grid = gr;
  sec.label = KernelLabel::T_section;
  sec.values = Eigen::MatrixXcd::Ones(8, 8);
  CHECK_THROWS_AS(apply_spectral_filter(sec, 1e-9, g), std::invalid_argument);
  CHECK_THROWS_AS(apply_spectral_filter(F, 0.0, g), std::invalid_argument);
  CHECK_THROWS_AS(apply_spectral_filter(F, -1e-9, g), std::invalid_argument);
}

TEST_CASE("a failing point is recorded without aborting the sweep") {
  RunConfig base = base_cfg();
  SweepSpec spec = parse_sweep_spec(
      R"({"parameter":"pump_bandwidth_dlambda_p","values":[5e-10,1e-9,2e-7],)"
      R"("outputs":["K_omega","Delta_n_omega"]})",
      base, "spec");
  std::vector<SweepRecord> rec = run_sweep(spec, 2);
  REQUIRE(rec.size() == 3);
  CHECK(rec[0].error.empty());
  CHECK(rec[0].metrics.size() == 2);
  CHECK(rec[1].error.empty());
  // 200 nm of pump bandwidth pushes the grid outside the dispersion window
  CHECK_FALSE(rec[2].error.empty());
  CHECK(rec[2].metrics.empty());
  CHECK(rec[2].parameter_value == 2e-7);
}

TEST_CASE("records are identical for any worker count") {
  RunConfig base = base_cfg();
  base.numerics.n_spectral = 96;
  SweepSpec spec = parse_sweep_spec(
      R"({"parameter":"pump_bandwidth_dlambda_p",)"
      R"("values":[3e-10,5e-10,8e-10,1.2e-9],"outputs":["all"]})",
      base, "spec");
  std::vector<SweepRecord> r1 = run_sweep(spec, 1);
  std::vector<SweepRecord> r3 = run_sweep(spec, 3);
  REQUIRE(r1.size() == r3.size());
  for (size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].error == r3[i].error);
    REQUIRE(r1[i].metrics.size() == r3[i].metrics.size());
    for (size_t j = 0; j < r1[i].metrics.size(); ++j)
      CHECK(r1[i].metrics[j] == r3[i].metrics[j]);
  }
}

TEST_CASE("sweep output round-trips through the CSV layer") {
  namespace fs = std::filesystem;
  RunConfig base = base_cfg();
  SweepSpec spec = parse_sweep_spec(
      R"({"parameter":"pump_bandwidth_dlambda_p","values":[5e-10,1e-9,2e-7],)"
      R"("outputs":["K_omega","Delta_n_omega"]})",
      base, "spec");

  fs::path dir = fs::temp_directory_path() / "pdc_test_sweep_out";
  fs::remove_all(dir);
  cmd_sweep(spec, dir.string(), 2);

  CsvTable t = read_csv((dir / "sweep_pump_bandwidth_dlambda_p.csv").string());
  REQUIRE(t.header.size() == 4);
  CHECK(t.header[0] == "pump_bandwidth_dlambda_p[m]");
  CHECK(t.header[1] == "K_omega[1]");
  CHECK(t.header[2] == "Delta_n_omega[rad/s]");
  CHECK(t.header[3] == "error");
  REQUIRE(t.rows.size() == 3);

  std::vector<SweepRecord> rec = run_sweep(spec, 1);
  for (size_t i = 0; i < 2; ++i) {
    CHECK(std::stod(t.rows[i][0]) == rec[i].parameter_value);
    CHECK(std::stod(t.rows[i][1]) == rec[i].metrics[0]);
    CHECK(std::stod(t.rows[i][2]) == rec[i].metrics[1]);
    CHECK(t.rows[i][3].empty());
  }
  CHECK(t.rows[2][1].empty());
  CHECK(t.rows[2][2].empty());
  CHECK(t.rows[2][3] == rec[2].error);

  std::ifstream min((dir / "manifest.json").string(), std::ios::binary);
  REQUIRE(bool(min));
  nlohmann::json m = nlohmann::json::parse(min);
  CHECK(m["artifact"] == "pdc");
  CHECK(m["command"] == "sweep");
  CHECK(m["config_hash"] == config_hash_hex(base));
  CHECK(m["sweep"]["parameter"] == "pump_bandwidth_dlambda_p");
  CHECK(m["sweep"]["values"].size() == 3);
  CHECK(m["config"]["numerics"]["n_spectral"] == 192);
  fs::remove_all(dir);
}

TEST_CASE("CSV writer quotes and the reader restores") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "pdc_test_table.csv";

  CsvTable t;
  t.header = {"name", "value", "note"};
  t.rows.push_back({"plain", format_double(1.0 / 3.0), "with, comma"});
  t.rows.push_back({"quoted \"x\"", format_double(-2.5e-301), "line\nbreak"});
  t.rows.push_back({"", format_double(9.87654321012345678e16), "trailing"});
  write_csv(path.string(), t);

  CsvTable r = read_csv(path.string());
  CHECK(r.header == t.header);
  REQUIRE(r.rows.size() == t.rows.size());
  for (size_t i = 0; i < t.rows.size(); ++i) CHECK(r.rows[i] == t.rows[i]);

  // 17 significant digits: exact double round trip
  CHECK(std::stod(r.rows[0][1]) == 1.0 / 3.0);
  CHECK(std::stod(r.rows[1][1]) == -2.5e-301);
  CHECK(std::stod(r.rows[2][1]) == 9.87654321012345678e16);

  CHECK_THROWS_AS(read_csv((fs::temp_directory_path() / "nope.csv").string()),
                  std::runtime_error);
  fs::remove(path);
}

}  // TEST_SUITE

#include "pdc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pdc/constants.hpp"

namespace pdc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw std::runtime_error(msg);
}

void reject_unknown(const json& obj, const std::string& scope,
                    const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail("unknown key '" + (scope.empty() ? "" : scope + ".") + it.key() +
           "'");
}

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double need_number(const json& obj, const std::string& path) {
  if (!obj.is_number()) fail("invalid value for '" + path + "': not a number");
  return obj.get<double>();
}

double positive(const json& obj, const std::string& path) {
  double v = need_number(obj, path);
  if (!(v > 0) || !std::isfinite(v))
    fail("invalid value for '" + path + "': must be > 0");
  return v;
}

int positive_int(const json& obj, const std::string& path) {
  if (!obj.is_number_integer())
    fail("invalid value for '" + path + "': not an integer");
  auto v = obj.get<long long>();
  if (v <= 0) fail("invalid value for '" + path + "': must be > 0");
  return int(v);
}

SellmeierCoeffs coeffs_from(const json& arr, const std::string& path) {
  if (!arr.is_array() || arr.size() != 4)
    fail("invalid value for '" + path + "': expected [A, B, C, D]");
  SellmeierCoeffs c;
  for (int i = 0; i < 4; ++i) c.abcd[i] = need_number(arr[i], path);
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("config parse error in " + origin + ": " + e.what());
  }
  if (!root.is_object()) fail("config root must be an object");
  reject_unknown(root, "", {"crystal", "pump", "numerics", "output"});

  RunConfig cfg;
  cfg.crystal.sellmeier = sellmeier_named("eimerl1987");
  cfg.crystal.cut_angle_theta = 36.3 * pi / 180.0;

  if (const json* c = find(root, "crystal")) {
    reject_unknown(*c, "crystal",
                   {"length", "cut_angle_deg", "interaction", "sellmeier"});
    if (const json* v = find(*c, "length"))
      cfg.crystal.length_L = positive(*v, "crystal.length");
    if (const json* v = find(*c, "cut_angle_deg")) {
      double deg = need_number(*v, "crystal.cut_angle_deg");
      if (deg <= 0 || deg >= 90)
        fail("invalid value for 'crystal.cut_angle_deg': must be in (0, 90)");
      cfg.cut_angle_deg = deg;
      cfg.crystal.cut_angle_theta = deg * pi / 180.0;
    }
    if (const json* v = find(*c, "interaction")) {
      if (!v->is_string() || v->get<std::string>() != "type-I eoo")
        fail("invalid value for 'crystal.interaction': only \"type-I eoo\"");
    }
    if (const json* v = find(*c, "sellmeier")) {
      if (v->is_string()) {
        try {
          cfg.crystal.sellmeier = sellmeier_named(v->get<std::string>());
        } catch (const std::invalid_argument& e) {
          fail(std::string(e.what()) + " for 'crystal.sellmeier'");
        }
      } else if (v->is_object()) {
        reject_unknown(*v, "crystal.sellmeier",
                       {"name", "ordinary", "extraordinary", "window"});
        SellmeierSet s;
        s.name = "custom";
        if (const json* n = find(*v, "name")) {
          if (!n->is_string())
            fail("invalid value for 'crystal.sellmeier.name': not a string");
          s.name = n->get<std::string>();
        }
        const json* o = find(*v, "ordinary");
        const json* e = find(*v, "extraordinary");
        if (!o) fail("missing field 'crystal.sellmeier.ordinary'");
        if (!e) fail("missing field 'crystal.sellmeier.extraordinary'");
        s.ordinary = coeffs_from(*o, "crystal.sellmeier.ordinary");
        s.extraordinary = coeffs_from(*e, "crystal.sellmeier.extraordinary");
        if (const json* w = find(*v, "window")) {
          if (!w->is_array() || w->size() != 2)
            fail("invalid value for 'crystal.sellmeier.window': expected "
                 "[lo, hi]");
          s.window_lo = positive((*w)[0], "crystal.sellmeier.window");
          s.window_hi = positive((*w)[1], "crystal.sellmeier.window");
          if (s.window_hi <= s.window_lo)
            fail("invalid value for 'crystal.sellmeier.window': hi <= lo");
        }
        cfg.crystal.sellmeier = s;
      } else {
        fail("invalid value for 'crystal.sellmeier': name or table expected");
      }
    }
  }

  const json* p = find(root, "pump");
  if (!p) fail("missing field 'pump.w_p'");
  reject_unknown(*p, "pump",
                 {"lambda0", "w_p", "tau_p", "dlambda_p", "normal_incidence"});
  if (const json* v = find(*p, "lambda0"))
    cfg.pump.lambda_p0 = positive(*v, "pump.lambda0");
  const json* wp = find(*p, "w_p");
  if (!wp) fail("missing field 'pump.w_p'");
  cfg.pump.w_p = positive(*wp, "pump.w_p");
  const json* tp = find(*p, "tau_p");
  const json* dl = find(*p, "dlambda_p");
  if (tp && dl) fail("give exactly one of 'pump.tau_p' and 'pump.dlambda_p'");
  if (tp)
    cfg.pump.tau_p = positive(*tp, "pump.tau_p");
  else if (dl)
    cfg.pump.tau_p =
        tau_from_dlambda(cfg.pump.lambda_p0, positive(*dl, "pump.dlambda_p"));
  else
    cfg.pump.tau_p = tau_from_dlambda(cfg.pump.lambda_p0, 0.1e-9);
  if (const json* v = find(*p, "normal_incidence")) {
    if (!v->is_boolean())
      fail("invalid value for 'pump.normal_incidence': not a boolean");
    cfg.pump.normal_incidence = v->get<bool>();
  }

  if (const json* n = find(root, "numerics")) {
    reject_unknown(*n, "numerics",
                   {"n_radial", "n_phi", "n_spectral", "m_max", "n_phi_corr",
                    "coeff_truncation", "azimuthal_norm_stop", "workers",
                    "grid_scale"});
    NumericsConfig& x = cfg.numerics;
    if (const json* v = find(*n, "n_radial"))
      x.n_radial = positive_int(*v, "numerics.n_radial");
    if (const json* v = find(*n, "n_phi"))
      x.n_phi = positive_int(*v, "numerics.n_phi");
    if (const json* v = find(*n, "n_spectral")) {
      if (!v->is_number_integer() || v->get<long long>() < 0)
        fail("invalid value for 'numerics.n_spectral': must be >= 0");
      x.n_spectral = int(v->get<long long>());
    }
    if (const json* v = find(*n, "m_max"))
      x.m_max = positive_int(*v, "numerics.m_max");
    if (const json* v = find(*n, "n_phi_corr"))
      x.n_phi_corr = positive_int(*v, "numerics.n_phi_corr");
    if (const json* v = find(*n, "coeff_truncation"))
      x.coeff_truncation = positive(*v, "numerics.coeff_truncation");
    if (const json* v = find(*n, "azimuthal_norm_stop"))
      x.azimuthal_norm_stop = positive(*v, "numerics.azimuthal_norm_stop");
    if (const json* v = find(*n, "workers"))
      x.workers = positive_int(*v, "numerics.workers");
    if (const json* v = find(*n, "grid_scale"))
      x.grid_scale = positive(*v, "numerics.grid_scale");
  }

  if (const json* o = find(root, "output")) {
    reject_unknown(*o, "output", {"dir", "n_modes"});
    if (const json* v = find(*o, "dir")) {
      if (!v->is_string())
        fail("invalid value for 'output.dir': not a string");
      cfg.output.dir = v->get<std::string>();
    }
    if (const json* v = find(*o, "n_modes"))
      cfg.output.n_modes = positive_int(*v, "output.n_modes");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string resolved_config_text(const RunConfig& cfg) {
  json root;
  const SellmeierSet& s = cfg.crystal.sellmeier;
  json sell;
  if (s.name == "eimerl1987" || s.name == "kato1986") {
    sell = s.name;
  } else {
    sell = json{{"name", s.name},
                {"ordinary", s.ordinary.abcd},
                {"extraordinary", s.extraordinary.abcd},
                {"window", {s.window_lo, s.window_hi}}};
  }
  root["crystal"] = {{"length", cfg.crystal.length_L},
                     {"cut_angle_deg", cfg.cut_angle_deg},
                     {"interaction", "type-I eoo"},
                     {"sellmeier", sell}};
  root["pump"] = {{"lambda0", cfg.pump.lambda_p0},
                  {"w_p", cfg.pump.w_p},
                  {"tau_p", cfg.pump.tau_p},
                  {"normal_incidence", cfg.pump.normal_incidence}};
  root["numerics"] = {{"n_radial", cfg.numerics.n_radial},
                      {"n_phi", cfg.numerics.n_phi},
                      {"n_spectral", cfg.numerics.n_spectral},
                      {"m_max", cfg.numerics.m_max},
                      {"n_phi_corr", cfg.numerics.n_phi_corr},
                      {"coeff_truncation", cfg.numerics.coeff_truncation},
                      {"azimuthal_norm_stop", cfg.numerics.azimuthal_norm_stop},
                      {"workers", cfg.numerics.workers},
                      {"grid_scale", cfg.numerics.grid_scale}};
  root["output"] = {{"dir", cfg.output.dir}, {"n_modes", cfg.output.n_modes}};
  return root.dump(2);
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::string text = resolved_config_text(cfg);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash_hex(const RunConfig& cfg) {
  std::ostringstream os;
  os << std::hex << config_hash(cfg);
  return os.str();
}

int scaled(int n, double grid_scale) {
  double v = std::round(n * grid_scale);
  return v < 8 ? 8 : int(v);
}

}  // namespace pdc

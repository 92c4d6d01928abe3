#include "sponge/config.hpp"

#include <cstdint>

namespace sponge {

using nlohmann::ordered_json;

SpongeSystem RunConfig::build_system() const {
  if (maps.empty()) throw ValidationError("config contains no maps");
  return SpongeSystem::build(maps);
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

const ordered_json& require(const ordered_json& obj, const std::string& key,
                            const std::string& path) {
  if (!obj.contains(key)) fail(path, "missing required key '" + key + "'");
  return obj.at(key);
}

Rational parse_rational_field(const ordered_json& value, const std::string& path) {
  if (!value.is_string()) fail(path, "expected a rational as a \"num/den\" string");
  try {
    return parse_rational(value.get<std::string>());
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

template <typename T>
std::array<T, 3> parse_triple(const ordered_json& value, const std::string& path,
                              T (*convert)(const ordered_json&, const std::string&)) {
  if (!value.is_array() || value.size() != 3) fail(path, "expected an array of 3 entries");
  std::array<T, 3> out;
  for (int j = 0; j < 3; ++j) out[j] = convert(value[j], path + "[" + std::to_string(j) + "]");
  return out;
}

int parse_int_entry(const ordered_json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

Rational parse_rational_entry(const ordered_json& v, const std::string& path) {
  return parse_rational_field(v, path);
}

AffineContraction parse_map(const ordered_json& m, const std::string& path) {
  if (!m.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : m.items())
    if (key != "perm" && key != "signs" && key != "scales" && key != "translation")
      fail(path, "unknown key '" + key + "'");
  AffineContraction f;
  const auto perm = parse_triple<int>(require(m, "perm", path), path + ".perm", parse_int_entry);
  const auto signs =
      parse_triple<int>(require(m, "signs", path), path + ".signs", parse_int_entry);
  const auto scales = parse_triple<Rational>(require(m, "scales", path), path + ".scales",
                                             parse_rational_entry);
  const auto translation = parse_triple<Rational>(require(m, "translation", path),
                                                  path + ".translation", parse_rational_entry);
  for (int j = 0; j < 3; ++j) {
    f.linear.perm[j] = perm[j];
    f.linear.signs[j] = signs[j];
    f.linear.scales[j] = scales[j];
    f.translation[j] = translation[j];
  }
  return f;
}

double parse_double_field(const ordered_json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config root must be a JSON object");

  RunConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "maps") {
      if (!value.is_array() || value.empty()) fail("maps", "expected a non-empty array");
      for (std::size_t i = 0; i < value.size(); ++i)
        cfg.maps.push_back(parse_map(value[i], "maps[" + std::to_string(i) + "]"));
    } else if (key == "projection_overrides") {
      if (!value.is_object()) fail(key, "expected an object");
      ProjectionOverrides ov;
      for (const auto& [okey, oval] : value.items()) {
        if (okey == "p1") {
          ov.p1 = parse_triple<double>(oval, "projection_overrides.p1",
                                       +[](const ordered_json& v, const std::string& p) {
                                         return parse_double_field(v, p);
                                       });
        } else if (okey == "p2_lower") {
          ov.p2_lower = parse_double_field(oval, "projection_overrides.p2_lower");
        } else if (okey == "p2_upper") {
          ov.p2_upper = parse_double_field(oval, "projection_overrides.p2_upper");
        } else {
          fail("projection_overrides", "unknown key '" + okey + "'");
        }
      }
      cfg.overrides = ov;
    } else if (key == "s_grid") {
      if (!value.is_array()) fail(key, "expected an array of numbers");
      for (std::size_t i = 0; i < value.size(); ++i)
        cfg.s_grid.push_back(parse_double_field(value[i], "s_grid[" + std::to_string(i) + "]"));
    } else if (key == "k_max") {
      const int k = parse_int_entry(value, key);
      if (k < 2) fail(key, "must be at least 2");
      cfg.k_max = k;
    } else if (key == "deltas") {
      if (!value.is_array()) fail(key, "expected an array of rational strings");
      for (std::size_t i = 0; i < value.size(); ++i)
        cfg.deltas.push_back(
            parse_rational_field(value[i], "deltas[" + std::to_string(i) + "]"));
    } else if (key == "scenario") {
      if (!value.is_string()) fail(key, "expected a string");
      cfg.scenario = value.get<std::string>();
    } else if (key == "drop_params") {
      if (!value.is_object()) fail(key, "expected an object");
      DropParamsConfig dp;
      dp.a = parse_rational_field(require(value, "a", key), "drop_params.a");
      dp.b = parse_rational_field(require(value, "b", key), "drop_params.b");
      dp.c = parse_rational_field(require(value, "c", key), "drop_params.c");
      dp.n = parse_int_entry(require(value, "n", key), "drop_params.n");
      dp.eta_prime = parse_double_field(require(value, "eta_prime", key),
                                        "drop_params.eta_prime");
      cfg.drop_params = dp;
    } else if (key == "discont") {
      if (!value.is_object()) fail(key, "expected an object");
      DiscontConfig dc;
      for (const auto& [dkey, dval] : value.items()) {
        if (dkey == "a") {
          dc.a = parse_rational_field(dval, "discont.a");
        } else if (dkey == "eps") {
          if (!dval.is_array()) fail("discont.eps", "expected an array of rational strings");
          for (std::size_t i = 0; i < dval.size(); ++i)
            dc.eps.push_back(
                parse_rational_field(dval[i], "discont.eps[" + std::to_string(i) + "]"));
        } else {
          fail("discont", "unknown key '" + dkey + "'");
        }
      }
      cfg.discont = dc;
    } else {
      fail(key, "unknown top-level key");
    }
  }
  return cfg;
}

namespace {

ordered_json rational_triple(const std::array<Rational, 3>& xs) {
  ordered_json out = ordered_json::array();
  for (const auto& x : xs) out.push_back(to_string(x));
  return out;
}

}  // namespace

std::string serialize_config(const RunConfig& cfg) {
  ordered_json doc = ordered_json::object();
  if (!cfg.maps.empty()) {
    ordered_json maps = ordered_json::array();
    for (const auto& f : cfg.maps) {
      ordered_json m = ordered_json::object();
      m["perm"] = f.linear.perm;
      m["signs"] = f.linear.signs;
      m["scales"] = rational_triple(f.linear.scales);
      m["translation"] = rational_triple(f.translation);
      maps.push_back(std::move(m));
    }
    doc["maps"] = std::move(maps);
  }
  if (cfg.overrides) {
    ordered_json ov = ordered_json::object();
    if (cfg.overrides->p1) ov["p1"] = *cfg.overrides->p1;
    if (cfg.overrides->p2_lower) ov["p2_lower"] = *cfg.overrides->p2_lower;
    if (cfg.overrides->p2_upper) ov["p2_upper"] = *cfg.overrides->p2_upper;
    doc["projection_overrides"] = std::move(ov);
  }
  if (!cfg.s_grid.empty()) doc["s_grid"] = cfg.s_grid;
  if (cfg.k_max) doc["k_max"] = *cfg.k_max;
  if (!cfg.deltas.empty()) {
    ordered_json ds = ordered_json::array();
    for (const auto& d : cfg.deltas) ds.push_back(to_string(d));
    doc["deltas"] = std::move(ds);
  }
  if (!cfg.scenario.empty()) doc["scenario"] = cfg.scenario;
  if (cfg.drop_params) {
    ordered_json dp = ordered_json::object();
    dp["a"] = to_string(cfg.drop_params->a);
    dp["b"] = to_string(cfg.drop_params->b);
    dp["c"] = to_string(cfg.drop_params->c);
    dp["n"] = cfg.drop_params->n;
    dp["eta_prime"] = cfg.drop_params->eta_prime;
    doc["drop_params"] = std::move(dp);
  }
  if (cfg.discont) {
    ordered_json dc = ordered_json::object();
    dc["a"] = to_string(cfg.discont->a);
    if (!cfg.discont->eps.empty()) {
      ordered_json eps = ordered_json::array();
      for (const auto& e : cfg.discont->eps) eps.push_back(to_string(e));
      dc["eps"] = std::move(eps);
    }
    doc["discont"] = std::move(dc);
  }
  return doc.dump(2) + "\n";
}

std::string config_hash(const RunConfig& cfg) {
  const std::string canonical = serialize_config(cfg);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ordered_json report_envelope(const RunConfig& cfg) {
  ordered_json out = ordered_json::object();
  out["version"] = kLibraryVersion;
  out["config_hash"] = config_hash(cfg);
  return out;
}

ordered_json to_json(const ScenarioReport& rep) {
  ordered_json out = ordered_json::object();
  out["scenario"] = rep.scenario;
  ordered_json inputs = ordered_json::object();
  for (const auto& [k, v] : rep.inputs) inputs[k] = v;
  out["inputs"] = std::move(inputs);
  ordered_json derived = ordered_json::object();
  for (const auto& [k, v] : rep.derived) derived[k] = v;
  out["derived_quantities"] = std::move(derived);
  ordered_json checks = ordered_json::array();
  for (const auto& c : rep.checks) {
    ordered_json jc = ordered_json::object();
    jc["name"] = c.name;
    jc["status"] = to_string(c.status);
    jc["lhs"] = c.lhs;
    jc["rhs"] = c.rhs;
    checks.push_back(std::move(jc));
  }
  out["checks"] = std::move(checks);
  out["verdict"] = rep.verdict ? "PASS" : "FAIL";
  return out;
}

}  // namespace sponge

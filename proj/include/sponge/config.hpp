#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sponge/gpm.hpp"
#include "sponge/projections.hpp"
#include "sponge/scenarios.hpp"

namespace sponge {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Optional parameter block for the stacked-column scenario.
struct DropParamsConfig {
  Rational a, b, c;
  long n = 0;
  double eta_prime = 0.0;
};

// Optional parameter block for the planar discontinuity scenario.
struct DiscontConfig {
  Rational a = Rational(2, 5);
  std::vector<Rational> eps;
};

struct RunConfig {
  std::vector<AffineContraction> maps;
  std::optional<ProjectionOverrides> overrides;
  std::vector<double> s_grid;
  std::optional<int> k_max;
  std::vector<Rational> deltas;
  std::string scenario;
  std::optional<DropParamsConfig> drop_params;
  std::optional<DiscontConfig> discont;

  SpongeSystem build_system() const;
};

// Parses the JSON config document; throws ValidationError carrying a
// field path (or parser position) diagnostic.
RunConfig parse_config(const std::string& json_text);

// Canonical serialization: fixed key order, two-space indent; only keys
// present in the config are emitted.
std::string serialize_config(const RunConfig& config);

// FNV-1a hash of the canonical serialization, as a hex string, so
// whitespace-equivalent configs share a hash.
std::string config_hash(const RunConfig& config);

// Report envelope carrying the library version and config hash.
nlohmann::ordered_json report_envelope(const RunConfig& config);

nlohmann::ordered_json to_json(const ScenarioReport& rep);

}  // namespace sponge

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "specflow/cf_arith.hpp"
#include "specflow/hamlab.hpp"
#include "specflow/roof.hpp"

namespace specflow::config {

using json = nlohmann::json;

/// Experiment description. Schema:
///   alpha        "golden" | "sqrt2m1" | {"prefix": [..], "period": [..]}
///   roof         preset name | {"preset": name} |
///                {"symbols": [{"name", "eval"}], "alpha_action": {sym: expr},
///                 "xi": [..], "d": [..], "v1": expr}
///   hamiltonian  fixture name | {"alpha1", "alpha2", "P": [modes], "g": [modes],
///                 "vertices": [[x, y]], "x0"}
///   params       subcommand parameters; tolerances have no defaults
///   seed         unsigned 64-bit, required by stochastic subcommands
///   output       {"dir": path, "format": "json" | "csv" | "svg"}
struct ExperimentConfig {
  json alpha;
  json roof;
  json hamiltonian;
  json params = json::object();
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "json";
};

/// Throws Error(InvalidArgument) on malformed JSON or schema violations.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

cf::CFContext build_alpha(const json& alpha);
/// Preset name, or empty for a custom expansion.
std::string alpha_preset_name(const json& alpha);

RoofPC build_roof(const ExperimentConfig& cfg);
HamiltonianSystem build_hamiltonian(const json& spec);
/// Transversal abscissa: "x0" in the hamiltonian object, else 0.
double transversal_x0(const json& spec);

double require_double(const json& params, const std::string& key);
long require_long(const json& params, const std::string& key);
std::uint64_t require_seed(const ExperimentConfig& cfg);
double get_double(const json& params, const std::string& key, double fallback);
long get_long(const json& params, const std::string& key, long fallback);

}  // namespace specflow::config

#include "specflow/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "specflow/error.hpp"
#include "specflow/fixtures.hpp"

namespace specflow::config {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidArgument, "config: " + what); }

std::string expr_text(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  bad(where + " must be a string expression or an integer");
}

std::vector<long> long_list(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where + " must be an array of integers");
  std::vector<long> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) bad(where + " must be an array of integers");
    out.push_back(e.get<long>());
  }
  return out;
}

TrigPoly trig_list(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where + " must be an array of modes");
  std::vector<TrigTerm> terms;
  for (const auto& m : v) {
    if (!m.is_object() || !m.contains("kx") || !m.contains("ky")) bad(where + ": each mode needs kx and ky");
    if (!m["kx"].is_number_integer() || !m["ky"].is_number_integer()) bad(where + ": kx, ky must be integers");
    TrigTerm t;
    t.kx = m["kx"].get<int>();
    t.ky = m["ky"].get<int>();
    if (m.contains("cos")) {
      if (!m["cos"].is_number()) bad(where + ": cos must be a number");
      t.c = m["cos"].get<double>();
    }
    if (m.contains("sin")) {
      if (!m["sin"].is_number()) bad(where + ": sin must be a number");
      t.s = m["sin"].get<double>();
    }
    terms.push_back(t);
  }
  return TrigPoly(std::move(terms));
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) bad("top level must be an object");
  static const char* known[] = {"alpha", "roof", "hamiltonian", "params", "seed", "output"};
  for (const auto& [k, v] : root.items()) {
    bool ok = false;
    for (const char* n : known) ok = ok || k == n;
    if (!ok) bad("unknown key '" + k + "'");
  }
  ExperimentConfig cfg;
  cfg.alpha = root.value("alpha", json("golden"));
  if (!cfg.alpha.is_string() && !cfg.alpha.is_object()) bad("alpha must be a preset name or an object");
  if (root.contains("roof")) cfg.roof = root["roof"];
  if (root.contains("hamiltonian")) cfg.hamiltonian = root["hamiltonian"];
  if (root.contains("params")) {
    if (!root["params"].is_object()) bad("params must be an object");
    cfg.params = root["params"];
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned() && !(root["seed"].is_number_integer() && root["seed"].get<long long>() >= 0))
      bad("seed must be a nonnegative integer");
    cfg.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("output")) {
    const auto& o = root["output"];
    if (!o.is_object()) bad("output must be an object");
    if (o.contains("dir")) {
      if (!o["dir"].is_string()) bad("output.dir must be a string");
      cfg.out_dir = o["dir"].get<std::string>();
    }
    if (o.contains("format")) {
      if (!o["format"].is_string()) bad("output.format must be a string");
      cfg.format = o["format"].get<std::string>();
    }
  }
  if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "svg") bad("format must be json, csv or svg");
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string alpha_preset_name(const json& alpha) {
  if (alpha.is_string()) return alpha.get<std::string>();
  return "";
}

cf::CFContext build_alpha(const json& alpha) {
  if (alpha.is_string()) {
    const auto name = alpha.get<std::string>();
    if (name != "golden" && name != "sqrt2m1") bad("unknown alpha preset '" + name + "'");
    return cf::CFContext::preset(name);
  }
  if (!alpha.is_object()) bad("alpha must be a preset name or an object");
  std::vector<long> prefix = alpha.contains("prefix") ? long_list(alpha["prefix"], "alpha.prefix") : std::vector<long>{};
  std::vector<long> period = alpha.contains("period") ? long_list(alpha["period"], "alpha.period") : std::vector<long>{};
  for (long a : prefix)
    if (a < 1) bad("partial quotients must be positive");
  for (long a : period)
    if (a < 1) bad("partial quotients must be positive");
  if (prefix.empty() && period.empty()) bad("alpha needs digits");
  return cf::CFContext::periodic(prefix, period);
}

RoofPC build_roof(const ExperimentConfig& cfg) {
  const json& r = cfg.roof;
  if (r.is_null()) bad("this subcommand needs a roof");
  if (r.is_string() || (r.is_object() && r.contains("preset"))) {
    const json& name = r.is_string() ? r : r["preset"];
    if (!name.is_string()) bad("roof.preset must be a string");
    const std::string preset = alpha_preset_name(cfg.alpha);
    if (preset.empty()) bad("preset roofs need a preset alpha");
    return fixtures::roof(name.get<std::string>(), preset);
  }
  if (!r.is_object()) bad("roof must be a preset name or an object");
  for (const char* k : {"xi", "d", "v1"})
    if (!r.contains(k)) bad(std::string("roof needs '") + k + "'");
  std::vector<Basis::SymbolSpec> symbols;
  if (r.contains("symbols")) {
    if (!r["symbols"].is_array()) bad("roof.symbols must be an array");
    for (const auto& s : r["symbols"]) {
      if (!s.is_object() || !s.contains("name") || !s.contains("eval") || !s["name"].is_string() ||
          !s["eval"].is_string())
        bad("each symbol needs string 'name' and 'eval'");
      symbols.push_back({s["name"].get<std::string>(), s["eval"].get<std::string>()});
    }
  }
  std::map<std::string, std::string> action;
  if (r.contains("alpha_action")) {
    if (!r["alpha_action"].is_object()) bad("roof.alpha_action must be an object");
    for (const auto& [k, v] : r["alpha_action"].items()) action[k] = expr_text(v, "alpha_action." + k);
  }
  auto basis = Basis::create(build_alpha(cfg.alpha), symbols, action);
  auto list = [&](const char* key) {
    if (!r[key].is_array()) bad(std::string("roof.") + key + " must be an array");
    std::vector<SymReal> out;
    for (const auto& e : r[key]) out.push_back(SymReal::parse(basis, expr_text(e, std::string("roof.") + key)));
    return out;
  };
  return RoofPC::make(list("xi"), list("d"), SymReal::parse(basis, expr_text(r["v1"], "roof.v1")));
}

HamiltonianSystem build_hamiltonian(const json& spec) {
  if (spec.is_null()) bad("this subcommand needs a hamiltonian");
  if (spec.is_string()) return hamfix::by_name(spec.get<std::string>());
  if (!spec.is_object()) bad("hamiltonian must be a fixture name or an object");
  if (spec.contains("fixture")) {
    if (!spec["fixture"].is_string()) bad("hamiltonian.fixture must be a string");
    return hamfix::by_name(spec["fixture"].get<std::string>());
  }
  HamiltonianSystem sys;
  sys.name = "custom";
  for (const char* k : {"alpha1", "alpha2"})
    if (!spec.contains(k) || !spec[k].is_number()) bad(std::string("hamiltonian needs numeric '") + k + "'");
  sys.alpha1 = spec["alpha1"].get<double>();
  sys.alpha2 = spec["alpha2"].get<double>();
  if (spec.contains("P")) sys.p = trig_list(spec["P"], "hamiltonian.P");
  if (spec.contains("g")) sys.g = trig_list(spec["g"], "hamiltonian.g");
  if (spec.contains("vertices")) {
    if (!spec["vertices"].is_array()) bad("hamiltonian.vertices must be an array");
    for (const auto& v : spec["vertices"]) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        bad("each vertex must be [x, y]");
      sys.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    }
  }
  sys.validate();
  return sys;
}

double transversal_x0(const json& spec) {
  if (spec.is_object() && spec.contains("x0")) {
    if (!spec["x0"].is_number()) bad("hamiltonian.x0 must be a number");
    return spec["x0"].get<double>();
  }
  return 0.0;
}

double require_double(const json& params, const std::string& key) {
  if (!params.contains(key)) bad("params." + key + " is required");
  if (!params[key].is_number()) bad("params." + key + " must be a number");
  return params[key].get<double>();
}

long require_long(const json& params, const std::string& key) {
  if (!params.contains(key)) bad("params." + key + " is required");
  if (!params[key].is_number_integer()) bad("params." + key + " must be an integer");
  return params[key].get<long>();
}

std::uint64_t require_seed(const ExperimentConfig& cfg) {
  if (!cfg.seed) bad("this subcommand is stochastic and needs a seed");
  return *cfg.seed;
}

double get_double(const json& params, const std::string& key, double fallback) {
  return params.contains(key) ? require_double(params, key) : fallback;
}

long get_long(const json& params, const std::string& key, long fallback) {
  return params.contains(key) ? require_long(params, key) : fallback;
}

}  // namespace specflow::config

// dwave: run lattice blow-up experiments from a JSON config.
//
//   dwave run --config cfg.json --out results/
//   dwave sweep --config cfg.json --set d=2 --set max_steps=5000
//
// Exit status: 0 for any completed experiment (blow-up, budget or overflow),
// 2 for configuration errors, 3 for IO errors.

#include "dwave/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --set key=value: the value is parsed as JSON when possible, otherwise taken as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw dwave::ConfigError("--set: expected key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::parse_error&) {
    value = raw;
  }
  const auto dot = key.find('.');
  if (dot == std::string::npos) {
    doc[key] = value;
  } else {
    doc[key.substr(0, dot)][key.substr(dot + 1)] = value;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete blow-up experiments for u_tt = Laplacian(u) + |u|^p on Z^d"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<long> max_steps;
  bool rational = false;
  std::vector<std::string> overrides;

  const std::pair<const char*, const char*> subs[] = {
      {"run", "proposed scheme on the lattice"},
      {"naive", "central-difference scheme on the lattice"},
      {"uniform", "spatially uniform recurrence"},
      {"check", "randomized and grid checks of the scalar inequalities"},
      {"consistency", "observed consistency order of the proposed scheme"},
      {"sweep", "lattice runs over a (p, delta) grid"},
  };
  for (const auto& [name, help] : subs) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "RNG seed for randomized checks");
    sub->add_option("--max-steps", max_steps, "step budget");
    sub->add_flag("--rational", rational, "exact rational arithmetic");
    sub->add_option("--set", overrides, "override a config key (key=value)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  const std::string mode = app.get_subcommands().front()->get_name();

  try {
    nlohmann::json doc = config_path.empty() ? nlohmann::json::object() : nlohmann::json::parse(read_file(config_path));
    if (!doc.is_object()) throw dwave::ConfigError("config: expected a JSON object");
    if (doc.contains("mode") && doc["mode"] != mode)
      std::cerr << "note: config mode '" << doc["mode"].get<std::string>() << "' replaced by subcommand '" << mode << "'\n";
    doc["mode"] = mode;
    for (const auto& o : overrides) apply_override(doc, o);
    if (!out_dir.empty()) doc["output_dir"] = out_dir;
    if (seed) doc["seed"] = *seed;
    if (max_steps) doc["max_steps"] = *max_steps;
    if (rational) doc["arithmetic"] = "rational";

    const auto cfg = dwave::parse_config(doc.dump());
    const auto result = dwave::run_experiment(cfg);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';

    std::cout << "status: " << result.status;
    if (result.tau0) std::cout << " tau0=" << *result.tau0;
    if (result.point) std::cout << " at " << dwave::to_string(*result.point);
    std::cout << '\n';
    for (const auto& f : result.files) std::cout << "wrote " << cfg.output_dir << '/' << f << '\n';
    return 0;
  } catch (const dwave::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

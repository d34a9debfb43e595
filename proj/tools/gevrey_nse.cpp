#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gevrey/experiment.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gevrey::ConfigError("cannot open config " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw gevrey::ConfigError("config " + path + " is not valid JSON");
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gevrey-class Navier-Stokes experiments"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "run one scenario and write its record");

  std::string config_path, scenario, out_dir;
  std::vector<std::string> overrides;
  std::vector<std::string> emit{"csv"};
  std::uint64_t seed = 0;
  run->add_option("--config", config_path, "ExperimentConfig JSON file");
  run->add_option("--scenario", scenario, "small_data | radius_growth | gronwall | constant_sweep | band_limited | ode_bounds");
  run->add_option("--set", overrides, "override a config field, key=value (dotted keys for nested fields)");
  run->add_option("--out", out_dir, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "base seed for initial data and random draws");
  run->add_option("--emit", emit, "csv | jsonl | plotdata (repeatable)")
      ->check(CLI::IsMember({"csv", "jsonl", "plotdata"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  gevrey::ExperimentConfig cfg;
  try {
    nlohmann::json j = config_path.empty() ? nlohmann::json::object() : load_config(config_path);
    if (!scenario.empty()) j["scenario"] = scenario;
    for (const auto& o : overrides) gevrey::apply_override(j, o);
    if (*seed_opt) gevrey::apply_override(j, "initial_data.seed=" + std::to_string(seed));
    if (!out_dir.empty()) j["out_dir"] = out_dir;
    cfg = gevrey::config_from_json(j);
  } catch (const gevrey::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const gevrey::RunRecord rec = gevrey::run_scenario(cfg);
    const std::string dir = cfg.out_dir.empty() ? "gevrey-out/" + rec.config_hash() : cfg.out_dir;
    for (const auto& e : emit) {
      if (e == "csv") gevrey::write_csv(rec, dir);
      if (e == "jsonl") gevrey::write_jsonl(rec, dir);
      if (e == "plotdata") gevrey::write_plotdata(rec, dir);
    }
    std::cout << "scenario " << rec.scenario() << " config " << rec.config_hash() << " -> " << dir << '\n';
    for (const auto& v : rec.verdicts()) {
      std::cout << gevrey::to_string(v.status) << ' ' << v.invariant << ": " << v.detail;
      if (v.first_violation)
        std::cout << " [first violation " << v.first_violation->series << " t=" << v.first_violation->t
                  << " measured=" << v.first_violation->measured << " bound=" << v.first_violation->bound << ']';
      std::cout << '\n';
    }
    return rec.any_fail() ? kExitFail : 0;
  } catch (const gevrey::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}

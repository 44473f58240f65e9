// Scenario-driven front end: validate scenario files, run them to CSV and
// summary artifacts, sweep one parameter across values.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flexprice/flexprice.hpp"

namespace fs = std::filesystem;
using flexprice::json;

namespace {

json load_raw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  return json::parse(in);
}

std::string default_out_root() {
  if (const char* env = std::getenv("FLEXPRICE_OUT")) return env;
  return "out";
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json summary_json(const flexprice::RunResult& res) {
  const flexprice::RunMetrics& m = res.summary;
  json j;
  j["rmse_demand"] = m.rmse_demand;
  j["max_abs_e"] = m.max_abs_e;
  j["u_bound_violations"] = m.u_bound_violations;
  j["lyapunov_ascents"] = m.lyapunov_ascents;
  j["clamp_events"] = m.clamp_events;
  j["switch_events"] = m.switch_events;
  j["projection_events"] = m.projection_events;
  j["no_branch_events"] = m.no_branch_events;
  j["final_gains"] = {m.final_alpha, m.final_beta, m.final_zeta};
  j["steps"] = res.trajectory.rows.size();
  j["aborted"] = res.aborted;
  j["abort_reason"] = res.abort_reason;
  return j;
}

void write_text(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

// Runs one validated scenario and writes the reproducibility trio.
flexprice::RunResult run_to_dir(const flexprice::Scenario& sc,
                                const fs::path& dir) {
  fs::create_directories(dir);
  const flexprice::RunResult res = flexprice::run_scenario(sc);
  write_text(dir / "trajectory.csv", flexprice::to_csv(res.trajectory));
  write_text(dir / "summary.json", summary_json(res).dump(2) + "\n");
  write_text(dir / "effective_config.json",
             flexprice::effective_config(sc).dump(2) + "\n");
  return res;
}

std::string dotted_to_pointer(const std::string& dotted) {
  std::string out;
  out.reserve(dotted.size() + 1);
  out += '/';
  for (char c : dotted) out += (c == '.') ? '/' : c;
  return out;
}

int parse_or_report(const json& raw, flexprice::Scenario& sc) {
  std::vector<std::string> errs;
  auto parsed = flexprice::parse_scenario(raw, errs);
  if (!parsed) {
    for (const auto& e : errs) std::cerr << "error: " << e << "\n";
    return 1;
  }
  sc = *parsed;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"price-responsive demand flexibility simulator"};
  app.require_subcommand(1);

  std::string path;
  std::string out_root = default_out_root();
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool abort_on_error = false;

  auto* cmd_validate = app.add_subcommand(
      "validate", "check a scenario file and echo the effective config");
  cmd_validate->add_option("scenario", path, "scenario file")->required();

  auto* cmd_run =
      app.add_subcommand("run", "run a scenario, write CSV and summary");
  cmd_run->add_option("scenario", path, "scenario file")->required();
  cmd_run->add_option("--out", out_root, "output root directory");
  cmd_run->add_option("--seed", seed, "override sim.seed")
      ->each([&](const std::string&) { seed_set = true; });
  cmd_run->add_flag("--abort-on-error", abort_on_error,
                    "stop at the first controller error");

  std::string sweep_param;
  std::vector<double> sweep_values;
  auto* cmd_sweep = app.add_subcommand(
      "sweep", "run a scenario once per value of one parameter");
  cmd_sweep->add_option("scenario", path, "scenario file")->required();
  cmd_sweep->add_option("--param", sweep_param,
                        "dotted parameter path, e.g. sim.dt")
      ->required();
  cmd_sweep->add_option("--values", sweep_values, "numeric values")
      ->required()
      ->delimiter(',');
  cmd_sweep->add_option("--out", out_root, "output root directory");
  cmd_sweep->add_option("--seed", seed, "override sim.seed")
      ->each([&](const std::string&) { seed_set = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_validate->parsed()) {
      const json raw = load_raw(path);
      flexprice::Scenario sc;
      if (int rc = parse_or_report(raw, sc)) return rc;
      std::cout << flexprice::effective_config(sc).dump(2) << "\n";
      return 0;
    }

    if (cmd_run->parsed()) {
      json raw = load_raw(path);
      if (seed_set) raw["sim"]["seed"] = seed;
      if (abort_on_error) raw["sim"]["abort_on_error"] = true;
      flexprice::Scenario sc;
      if (int rc = parse_or_report(raw, sc)) return rc;
      const std::string name = sc.output_prefix.empty()
                                   ? fs::path(path).stem().string()
                                   : sc.output_prefix;
      const fs::path dir = fs::path(out_root) / name;
      const flexprice::RunResult res = run_to_dir(sc, dir);
      std::cout << summary_json(res).dump(2) << "\n";
      std::cerr << "wrote " << (dir / "trajectory.csv").string() << "\n";
      return res.aborted ? 2 : 0;
    }

    if (cmd_sweep->parsed()) {
      if (sweep_values.empty()) {
        std::cerr << "error: sweep requires at least one value\n";
        return 1;
      }
      json raw = load_raw(path);
      if (seed_set) raw["sim"]["seed"] = seed;
      const json::json_pointer ptr(dotted_to_pointer(sweep_param));
      const std::string stem = fs::path(path).stem().string();
      const fs::path root = fs::path(out_root) / (stem + "_sweep");
      std::string aggregate =
          "param,value,rmse_demand,max_abs_e,u_bound_violations,"
          "lyapunov_ascents,clamp_events,switch_events,projection_events,"
          "no_branch_events,aborted\n";
      for (double v : sweep_values) {
        json variant = raw;
        variant[ptr] = v;
        flexprice::Scenario sc;
        if (int rc = parse_or_report(variant, sc)) {
          std::cerr << "error: value " << g17(v) << " of " << sweep_param
                    << " produced an invalid scenario\n";
          return rc;
        }
        const fs::path dir = root / (sweep_param + "=" + g17(v));
        const flexprice::RunResult res = run_to_dir(sc, dir);
        const flexprice::RunMetrics& m = res.summary;
        aggregate += sweep_param + "," + g17(v) + "," + g17(m.rmse_demand) +
                     "," + g17(m.max_abs_e) + "," +
                     std::to_string(m.u_bound_violations) + "," +
                     std::to_string(m.lyapunov_ascents) + "," +
                     std::to_string(m.clamp_events) + "," +
                     std::to_string(m.switch_events) + "," +
                     std::to_string(m.projection_events) + "," +
                     std::to_string(m.no_branch_events) + "," +
                     (res.aborted ? "1" : "0") + "\n";
      }
      fs::create_directories(root);
      write_text(root / "aggregate.csv", aggregate);
      std::cout << aggregate;
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccnsim/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json report_to_json(const ccnsim::RunSpec& spec, const ccnsim::MetricsReport& r)
{
  json j;
  j["sweep_label"] = spec.sweep_label;
  j["strategy"] = spec.strategy;
  j["replication"] = spec.replication;
  j["seed"] = spec.seed;
  j["completed"] = r.completed;
  j["failed"] = r.failed;
  j["transfer_time_ms"] = r.transfer_time_ms;
  j["interests_sent"] = r.interests_sent;
  j["data_received"] = r.data_received;
  j["duplicate_data"] = r.duplicate_data;
  j["unsolicited_data"] = r.unsolicited_data;
  j["timeouts"] = r.timeouts;
  j["consumer_retx"] = r.consumer_retx;
  j["no_route_drops"] = r.no_route_drops;
  j["duplicate_nonce_drops"] = r.duplicate_nonce_drops;
  j["total_send_cost"] = r.total_send_cost;
  j["per_face_sends"] = r.per_face_sends;
  j["cache_hits"] = r.cache_hits;
  j["vrtt_mean_ms"] = r.vrtt_mean_ms;
  j["vrtt_p50_ms"] = r.vrtt_p50_ms;
  j["vrtt_p95_ms"] = r.vrtt_p95_ms;
  j["trace_hash"] = r.trace_hash;
  j["events_processed"] = r.events_processed;
  return j;
}

json load_config(const std::string& source)
{
  if (fs::exists(source)) {
    std::ifstream in(source);
    if (!in) {
      throw std::runtime_error("cannot read config file: " + source);
    }
    json j;
    in >> j;
    return j;
  }
  // Not a file: try a builtin preset name.
  return ccnsim::to_json(ccnsim::make_preset(source));
}

int cmd_run(const std::string& config_source, const std::vector<std::string>& overrides,
            std::optional<std::uint64_t> seed, const std::string& out_dir,
            const std::string& trace_mode, int jobs)
{
  json config;
  try {
    config = load_config(config_source);
    for (const std::string& kv : overrides) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw std::runtime_error("--set expects key=value, got: " + kv);
      }
      ccnsim::set_json_path(config, kv.substr(0, eq),
                            ccnsim::parse_override_value(kv.substr(eq + 1)));
    }
  }
  catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  ccnsim::TraceMode trace = ccnsim::TraceMode::Off;
  if (trace_mode == "summary") {
    trace = ccnsim::TraceMode::Summary;
  }
  else if (trace_mode == "full") {
    trace = ccnsim::TraceMode::Full;
  }
  else if (trace_mode != "off") {
    std::cerr << "config error: unknown trace mode '" << trace_mode
              << "' (off | summary | full)\n";
    return 1;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  {
    std::ofstream probe(fs::path(out_dir) / ".write_probe");
    if (!probe) {
      std::cerr << "config error: output directory not writable: " << out_dir << "\n";
      return 1;
    }
  }
  fs::remove(fs::path(out_dir) / ".write_probe", ec);

  ccnsim::ScenarioResult result;
  try {
    result = ccnsim::run_scenario_json(config, jobs, trace, seed);
  }
  catch (const ccnsim::ConfigException& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  {
    std::ofstream out(fs::path(out_dir) / "summary.csv", std::ios::binary);
    out << ccnsim::summary_to_csv(result.summary);
  }
  {
    std::ofstream out(fs::path(out_dir) / "effective_config.json");
    out << config.dump(2) << "\n";
  }
  if (trace != ccnsim::TraceMode::Off) {
    std::ofstream out(fs::path(out_dir) / "runs.jsonl");
    for (std::size_t i = 0; i < result.specs.size(); ++i) {
      out << report_to_json(result.specs[i], result.reports[i]).dump() << "\n";
    }
  }
  if (trace == ccnsim::TraceMode::Full) {
    for (std::size_t i = 0; i < result.specs.size(); ++i) {
      const auto& spec = result.specs[i];
      std::string name = "events_" + spec.sweep_label + "_" + spec.strategy + "_r" +
                         std::to_string(spec.replication) + ".log";
      std::ofstream out(fs::path(out_dir) / name);
      for (const std::string& line : result.traces[i]) {
        out << line << "\n";
      }
    }
  }

  bool all_complete = true;
  for (const auto& report : result.reports) {
    all_complete = all_complete && report.completed;
  }
  for (const auto& row : result.summary) {
    std::cout << row.sweep_label << " " << row.strategy
              << " transfer_time_ms=" << row.transfer_time_mean
              << " interests_sent=" << row.interests_sent_mean
              << (row.incomplete > 0 ? " [incomplete runs]" : "") << "\n";
  }
  return all_complete ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"ccnsim - deterministic simulator of CCN forwarding strategies on "
               "multihomed terminals"};
  app.require_subcommand(1);

  std::string config_source;
  std::vector<std::string> overrides;
  std::uint64_t seed_value = 0;
  std::string out_dir = "out";
  std::string trace_mode = "off";
  int jobs = 1;

  CLI::App* run = app.add_subcommand("run", "run a scenario config file or preset");
  run->add_option("config", config_source, "config file path or preset name")->required();
  run->add_option("--set", overrides, "override config values (dotted.path=value)");
  CLI::Option* seed_opt = run->add_option("--seed", seed_value, "override seed_base");
  run->add_option("--out", out_dir, "output directory (summary.csv, effective_config.json)");
  run->add_option("--trace", trace_mode, "off | summary | full-event-log (full)");
  run->add_option("--jobs", jobs, "parallel replication workers (never affects results)");

  CLI::App* presets = app.add_subcommand("presets", "inspect builtin scenario presets");
  CLI::App* presets_list = presets->add_subcommand("list", "list preset names");
  std::string preset_name;
  CLI::App* presets_show = presets->add_subcommand("show", "print a preset config as JSON");
  presets_show->add_option("name", preset_name, "preset name")->required();
  presets->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    std::optional<std::uint64_t> seed;
    if (seed_opt->count() > 0) {
      seed = seed_value;
    }
    return cmd_run(config_source, overrides, seed, out_dir, trace_mode, jobs);
  }
  if (presets_list->parsed()) {
    for (const std::string& name : ccnsim::preset_names()) {
      std::cout << name << "\n";
    }
    return 0;
  }
  if (presets_show->parsed()) {
    try {
      std::cout << ccnsim::to_json(ccnsim::make_preset(preset_name)).dump(2) << "\n";
    }
    catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    return 0;
  }
  return 0;
}

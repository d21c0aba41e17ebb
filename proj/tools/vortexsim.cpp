// vortexsim: run point-vortex scenarios and the cross-validation battery.
//
//   vortexsim run <config.json | bundled-name>... [--out-dir DIR] [--jobs N] [--seed S]
//   vortexsim verify [--suite quick|full] [config] [--seed S] [--tolerance X]
//   vortexsim list
//   vortexsim --dump-config <config>
//
// Exit status: 0 clean, 1 config error (or failed verification), 2 collision abort.
// VORTEX_LOG=quiet|error|warn|info|debug sets the stderr verbosity (default info).

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "vortex/vortex.hpp"

#ifndef VORTEX_SCENARIO_DIR
#define VORTEX_SCENARIO_DIR "scenarios"
#endif

namespace fs = std::filesystem;

namespace {

enum class Level { Quiet = 0, Error, Warn, Info, Debug };

Level log_level() {
  static const Level level = [] {
    const char* env = std::getenv("VORTEX_LOG");
    const std::string v = env ? env : "info";
    if (v == "quiet" || v == "off" || v == "0") return Level::Quiet;
    if (v == "error") return Level::Error;
    if (v == "warn" || v == "warning") return Level::Warn;
    if (v == "debug" || v == "trace") return Level::Debug;
    return Level::Info;
  }();
  return level;
}

std::mutex log_mutex;

template <class... Args>
void log(Level lv, const char* fmt, Args... args) {
  if (lv > log_level()) return;
  static const char* tags[] = {"", "error", "warn", "info", "debug"};
  std::lock_guard lock(log_mutex);
  std::fprintf(stderr, "[vortexsim %s] ", tags[static_cast<int>(lv)]);
  if constexpr (sizeof...(Args) == 0) std::fputs(fmt, stderr);
  else std::fprintf(stderr, fmt, args...);
  std::fputc('\n', stderr);
}

fs::path bundled_dir() {
  if (const char* env = std::getenv("VORTEX_SCENARIOS")) return env;
  return VORTEX_SCENARIO_DIR;
}

// A config argument is either a path or the name of a bundled scenario.
fs::path resolve_config(const std::string& arg) {
  if (fs::exists(arg)) return arg;
  const fs::path p = bundled_dir() / (arg + ".json");
  if (fs::exists(p)) return p;
  throw vortex::ConfigError("", "no such config file or bundled scenario: " + arg);
}

struct Outcome {
  int code = 0;
  std::string line;
};

Outcome run_one(const std::string& arg, const fs::path& out_dir, const std::optional<std::uint64_t>& seed) {
  try {
    vortex::ScenarioConfig cfg = vortex::load_config(resolve_config(arg));
    if (seed) cfg.seed = *seed;
    log(Level::Debug, "%s: %zu vortices, %ld steps", cfg.name.c_str(), cfg.state.size(), cfg.integrator.steps);
    const vortex::RunSummary s = vortex::run_scenario(cfg, out_dir);
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s: %s, %ld records to t=%.6g, energy drift %.3e, kelvin drift %.3e, rejections %ld -> %s",
                  cfg.name.c_str(), s.exit_code == 0 ? "ok" : "collision", s.records, s.final_time, s.energy_drift,
                  s.kelvin_drift, s.step_rejections, s.trajectory.string().c_str());
    if (s.exit_code != 0) log(Level::Error, "%s: %s", cfg.name.c_str(), s.message.c_str());
    return {s.exit_code, buf};
  } catch (const vortex::ConfigError& e) {
    log(Level::Error, "%s: %s", arg.c_str(), e.what());
    return {1, arg + ": " + e.what()};
  } catch (const vortex::VortexError& e) {
    log(Level::Error, "%s: %s", arg.c_str(), e.what());
    return {1, arg + ": " + e.what()};
  }
}

int combine(const std::vector<Outcome>& v) {
  int code = 0;
  for (const auto& o : v) {
    if (o.code == 1) return 1;
    if (o.code == 2) code = 2;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point-vortex dynamics on the sphere and the flat torus"};
  app.require_subcommand(0, 1);

  std::string dump_target;
  app.add_option("--dump-config", dump_target, "Print the normalized form of a config and exit");

  auto* run = app.add_subcommand("run", "Integrate scenarios, writing CSV trajectories and JSON-lines diagnostics");
  std::vector<std::string> configs;
  std::string out_dir = ".";
  unsigned jobs = 1;
  std::optional<std::uint64_t> run_seed;
  run->add_option("configs", configs, "Config files or bundled scenario names")->required();
  run->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  run->add_option("--jobs,-j", jobs, "Scenarios run concurrently")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--seed", run_seed, "Override the seed recorded in each config");

  auto* verify = app.add_subcommand("verify", "Cross-validation battery (or per-scenario residuals)");
  std::string suite = "quick";
  std::string verify_config;
  std::uint64_t verify_seed = vortex::VerifyOptions{}.seed;
  std::optional<double> tolerance;
  verify->add_option("--suite", suite, "Battery size")->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
  verify->add_option("config", verify_config, "Verify one scenario instead of the battery");
  verify->add_option("--seed", verify_seed, "Seed of the randomized checks")->capture_default_str();
  verify->add_option("--tolerance", tolerance, "Replace every tolerance with this value");

  auto* list = app.add_subcommand("list", "List bundled scenarios");

  CLI11_PARSE(app, argc, argv);

  if (!dump_target.empty()) {
    try {
      std::cout << vortex::dump_config(vortex::load_config(resolve_config(dump_target)));
      return 0;
    } catch (const vortex::VortexError& e) {
      log(Level::Error, "%s", e.what());
      return 1;
    }
  }

  if (*list) {
    std::vector<std::string> names;
    if (fs::is_directory(bundled_dir()))
      for (const auto& e : fs::directory_iterator(bundled_dir()))
        if (e.path().extension() == ".json") names.push_back(e.path().stem().string());
    std::sort(names.begin(), names.end());
    for (const auto& n : names) std::cout << n << '\n';
    return 0;
  }

  if (*run) {
    std::vector<Outcome> outcomes(configs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i; (i = next++) < configs.size();) outcomes[i] = run_one(configs[i], out_dir, run_seed);
    };
    std::vector<std::thread> pool;
    const unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(configs.size()));
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& o : outcomes)
      if (o.code != 1) log(Level::Info, "%s", o.line.c_str());
    return combine(outcomes);
  }

  if (*verify) {
    vortex::VerifyOptions opt;
    opt.suite = suite == "full" ? vortex::Suite::Full : vortex::Suite::Quick;
    opt.seed = verify_seed;
    opt.tolerance = tolerance;
    vortex::VerifyReport report;
    try {
      if (verify_config.empty()) {
        log(Level::Info, "running the %s suite (seed %llu)", suite.c_str(), static_cast<unsigned long long>(opt.seed));
        report = vortex::verify_suite(opt);
      } else {
        report = vortex::verify_scenario(vortex::load_config(resolve_config(verify_config)), opt);
      }
    } catch (const vortex::VortexError& e) {
      log(Level::Error, "%s", e.what());
      return 1;
    }
    vortex::print_report(report);
    return report.all_pass() ? 0 : 1;
  }

  std::cout << app.help();
  return 0;
}

// kinshock CLI: run a configured scenario on a kinetic model and emit CSV
// artifacts plus a JSON manifest.
//
// Exit codes: 0 all verdicts pass, 1 verdict failure, 2 usage/config error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kinshock/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kinetic shock-profile toolkit"};
  app.get_formatter()->column_width(28);

  std::string scenario;
  std::string config_path;
  std::string preset;
  std::string out_dir;
  long long seed = -1;
  int workers = 0;

  app.add_option("scenario", scenario,
                 "one of: check-hypotheses, chapman-enskog, reduce, "
                 "resolvent-probe, stable-manifold, center-taylor, profile, "
                 "sweep")
      ->required();
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--preset", preset,
                 "model preset shortcut when no config file is given "
                 "(demo-m0, demo-m1, boltz-like, sing-k)");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--seed", seed, "RNG seed (overrides config)");
  app.add_option("--workers", workers,
                 "sweep worker count (KINSHOCK_WORKERS overrides)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 2;
  }

  std::string document;
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "error: cannot open config file " << config_path << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    document = ss.str();
  } else if (!preset.empty()) {
    document = "{\"model\": {\"preset\": \"" + preset +
               "\"}, \"scenario\": \"" + scenario + "\"}";
  } else {
    std::cerr << "error: either --config or --preset is required\n";
    return 2;
  }

  kinshock::RunConfig cfg;
  try {
    cfg = kinshock::parse_config(document);
  } catch (const kinshock::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  cfg.scenario = scenario;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (workers >= 1) cfg.workers = workers;

  try {
    kinshock::parse_config(kinshock::serialize_config(cfg));  // revalidate
  } catch (const kinshock::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const auto manifest = kinshock::run(cfg);
  for (const auto& v : manifest.verdicts) {
    const char* tag = v.status == kinshock::Verdict::Status::Pass   ? "PASS"
                      : v.status == kinshock::Verdict::Status::Fail ? "FAIL"
                                                                    : "SKIP";
    std::cout << "[" << tag << "] " << v.name;
    if (v.value != 0.0) std::cout << " (" << v.value << ")";
    if (!v.detail.empty()) std::cout << " -- " << v.detail;
    std::cout << "\n";
  }
  std::cout << "artifacts: " << cfg.out_dir << " ("
            << manifest.files.size() << " files, "
            << manifest.wall_clock_seconds << " s)\n";
  return manifest.all_passed() ? 0 : 1;
}

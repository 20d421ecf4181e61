#ifndef KINSHOCK_HARNESS_HPP_
#define KINSHOCK_HARNESS_HPP_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kinshock/model.hpp"

namespace kinshock {

class ConfigError : public SolverError {
 public:
  explicit ConfigError(const std::string& what) : SolverError(what) {}
};

/// Model source: exactly one of preset / file / inline generator spec.
struct ModelSource {
  std::string preset;
  std::string file;
  bool has_inline = false;
  int inline_r = 0, inline_n = 0;
  SyntheticSpec inline_spec;
};

/// Validated scenario configuration with defaults filled.
struct RunConfig {
  ModelSource model;
  std::string scenario;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int workers = 1;
  int p = -1;  // characteristic index; -1 = auto (nearest zero)

  double hypothesis_tol = 1e-10;
  int taylor_order = 3;
  std::vector<double> eps_list{0.02, 0.04, 0.08, 0.16};
  int grid_nodes = 4001;
  double domain_widths = 10.0;
  double stable_h = 5e-3;
  double stable_X = 0.0;
  double nu_tilde_factor = 0.8;
  double center_h = 5e-3;
  double center_X = 0.0;
  int theta_count = 25;
  double omega_max = 100.0;
  int omega_count = 512;
  int random_g_count = 50;
};

/// Parse a JSON config document. Unknown keys are rejected; all violations
/// are reported together. Throws ConfigError.
RunConfig parse_config(const std::string& document);

/// Canonical serialization (stable key order); serialize(parse(doc)) is
/// idempotent.
std::string serialize_config(const RunConfig& config);

struct Verdict {
  std::string name;
  enum class Status { Pass, Fail, Skip } status = Status::Pass;
  double value = 0.0;
  std::string detail;
};

struct RunManifest {
  std::string config_echo;
  std::string version;
  double wall_clock_seconds = 0.0;
  std::vector<Verdict> verdicts;
  std::vector<std::pair<std::string, std::string>> files;  // path, digest

  bool all_passed() const;
  std::string to_json() const;
};

/// Execute the configured scenario, writing CSV/JSON artifacts into
/// config.out_dir (created if missing). Module errors become failed
/// verdicts, not crashes. Returns the manifest (also written to disk).
RunManifest run(const RunConfig& config);

/// Resolve the configured model source.
KineticModel resolve_model(const ModelSource& source);

/// Fan out a list of independent jobs over min(workers, jobs) threads; the
/// KINSHOCK_WORKERS environment variable overrides `workers`. Results are
/// merged in index order regardless of scheduling.
void parallel_for(int jobs, int workers, const std::function<void(int)>& fn);

}  // namespace kinshock

#endif  // KINSHOCK_HARNESS_HPP_

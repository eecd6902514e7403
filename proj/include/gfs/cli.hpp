#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace gfs::cli {

using json = nlohmann::json;

/// Configuration or usage problem; `kind` and `key` make it machine-readable.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string kind, std::string key, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)), key_(std::move(key)) {}
  const std::string& kind() const { return kind_; }
  const std::string& key() const { return key_; }

 private:
  std::string kind_;
  std::string key_;
};

/// Flat `key = value` text. `#` starts a comment; blank lines are ignored.
/// Every key read through the typed getters is recorded so that leftovers
/// can be reported as unknown.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config from_file(const std::filesystem::path& path);
  static Config from_json(const json& object);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// Keys present in the file but never read.
  std::set<std::string> unused_keys() const;
  const std::map<std::string, std::string>& values() const { return values_; }
  json to_json() const;

 private:
  const std::string& raw(const std::string& key) const;
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

struct RunOptions {
  /// Parent directory for run folders; empty selects output_dir from the
  /// config, then $GFS_OUTPUT_DIR, then ./gfs_runs.
  std::filesystem::path output_dir;
  /// Overrides the thread count; outputs do not depend on it.
  std::optional<unsigned> threads;
  /// Run folder name when the config has no `name` key.
  std::string default_name = "run";
};

inline constexpr const char* kOutputDirEnv = "GFS_OUTPUT_DIR";
const char* toolkit_version();

/// Names accepted for the `experiment` key.
const std::set<std::string>& experiments();

struct RunResult {
  std::filesystem::path run_dir;
  std::filesystem::path manifest_path;
  json manifest;
};

/// Validates the config, runs the experiment and writes its data files and
/// manifest.json into <output_dir>/<name>/.
RunResult run(const Config& config, const RunOptions& options);

/// Loads a config file, or the config echo of a manifest (.json).
Config load_config(const std::filesystem::path& path);

struct Tolerance {
  double abs = 0.0;
  double rel = 0.0;
  double se = 0.0;  ///< combined standard errors allowed (0 disables)
};

/// Parses "abs=1e-12,rel=1e-9,se=3"; omitted fields are zero.
Tolerance parse_tolerance(const std::string& spec);

/// Per-observable comparison report. Throws ConfigError when the two
/// manifests share no observable.
json compare(const json& manifest_a, const json& manifest_b, const Tolerance& tol);

/// {"error": {"kind", "key", "message"}}
json error_record(const std::string& kind, const std::string& key, const std::string& message);

}  // namespace gfs::cli

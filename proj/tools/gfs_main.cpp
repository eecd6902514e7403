#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "gfs/cli.hpp"

namespace {

using gfs::cli::json;

int fail(const std::string& kind, const std::string& key, const std::string& message) {
  std::cerr << gfs::cli::error_record(kind, key, message).dump() << '\n';
  return 2;
}

json read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw gfs::cli::ConfigError("io", "", "cannot read " + path.string());
  try {
    json m = json::parse(in);
    if (!m.contains("observables")) {
      throw gfs::cli::ConfigError("missing_key", "observables", path.string() + " has no observables");
    }
    return m;
  } catch (const json::exception& e) {
    throw gfs::cli::ConfigError("syntax", "", path.string() + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Green's-function and stochastic toolkit experiment runner"};
  app.set_version_flag("--version", gfs::cli::toolkit_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  unsigned threads = 0;
  auto* run = app.add_subcommand("run", "Run an experiment from a config file or a manifest");
  run->add_option("config", config_path, "key = value config, or manifest.json to re-run")->required();
  run->add_option("-o,--output-dir", output_dir,
                  std::string("Parent directory for run folders (default: config output_dir, then $") +
                      gfs::cli::kOutputDirEnv + ", then ./gfs_runs)");
  auto* threads_opt = run->add_option("-j,--threads", threads, "Worker threads (0 = all cores)");

  std::string manifest_a, manifest_b, tol_spec = "abs=0,rel=0";
  auto* cmp = app.add_subcommand("compare", "Compare the observables of two manifests");
  cmp->add_option("manifest_a", manifest_a)->required();
  cmp->add_option("manifest_b", manifest_b)->required();
  cmp->add_option("--tol", tol_spec, "Tolerances, e.g. abs=1e-12,rel=1e-9,se=3");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", "", e.what());
  }

  try {
    if (*run) {
      const std::filesystem::path path(config_path);
      const gfs::cli::Config cfg = gfs::cli::load_config(path);
      gfs::cli::RunOptions opts;
      opts.output_dir = output_dir;
      if (*threads_opt) opts.threads = threads;
      opts.default_name = path.extension() == ".json" ? path.parent_path().filename().string()
                                                      : path.stem().string();
      const auto result = gfs::cli::run(cfg, opts);
      std::cout << result.manifest_path.string() << '\n';
      return 0;
    }
    const json report = gfs::cli::compare(read_manifest(manifest_a), read_manifest(manifest_b),
                                          gfs::cli::parse_tolerance(tol_spec));
    std::cout << report.dump(2) << '\n';
    return report["all_pass"].get<bool>() ? 0 : 1;
  } catch (const gfs::cli::ConfigError& e) {
    return fail(e.kind(), e.key(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("io", "", e.what());
  } catch (const std::invalid_argument& e) {
    return fail("invalid_parameter", "", e.what());
  } catch (const std::domain_error& e) {
    return fail("invalid_parameter", "", e.what());
  } catch (const std::exception& e) {
    return fail("runtime", "", e.what());
  }
}

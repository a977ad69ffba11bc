#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmt/errors.hpp"
#include "mmt/spectral_core.hpp"

namespace mmt::runner {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalFailure = 2, kAssertionFailure = 3 };

// Config validation failure. `path` is the dotted key path, `line` the 1-based line in the
// config file where that key appears (0 when unknown).
class ConfigError : public Error {
 public:
  ConfigError(std::string path, std::size_t line, const std::string& what);
  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

struct Options {
  std::string command;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<double> assert_slope;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string inject_fault;  // selftest only; "dispersion-sign" flips the linear symbol
};

// Loaded config document plus the raw text for line lookups. A run manifest is accepted in place
// of a config: its config_echo is used.
struct ConfigDoc {
  nlohmann::json value;
  std::string text;
  std::string source;
  bool from_manifest = false;

  // Line of the key at a dotted path, best effort; 0 if not found.
  std::size_t line_of(const std::string& path) const;
  [[noreturn]] void fail(const std::string& path, const std::string& what) const;
};

ConfigDoc load_config(const std::string& path);
ConfigDoc parse_config(const std::string& text, const std::string& source);

// Fill defaults, apply flag overrides and validate. The result is the config_echo.
nlohmann::json resolve_simulate(const ConfigDoc& doc, const Options& opt);
nlohmann::json resolve_probe(const ConfigDoc& doc, const Options& opt);
nlohmann::json resolve_map(const ConfigDoc& doc, const Options& opt);
nlohmann::json resolve_bench(const ConfigDoc& doc, const Options& opt);

ModelParams params_from(const nlohmann::json& j);

// Initial data from a resolved "initial_data" object; always mean-free.
SpectralField make_initial_data(const nlohmann::json& spec, const GridSpec& grid);

std::string sha256_hex(const std::string& bytes);
// Writes to a sibling temporary file and renames it over the target.
void write_atomic(const std::filesystem::path& path, const std::string& bytes);
std::string utc_timestamp();

struct OutputFile {
  std::string path;  // relative to the run directory
  std::string sha256;
  std::size_t bytes;
};

struct RunManifest {
  std::string command;
  nlohmann::json config_echo;
  std::string artifact_version;
  std::string started;
  std::string finished;
  std::vector<OutputFile> outputs;
  std::string status;
  std::optional<double> failure_time;

  nlohmann::json to_json() const;
};

// Collects outputs of one run and writes manifest.json last.
class RunDir {
 public:
  RunDir(std::filesystem::path dir, std::string command, nlohmann::json config_echo);
  void write(const std::string& name, const std::string& bytes);
  void finish(const std::string& status, std::optional<double> failure_time = std::nullopt);
  const std::filesystem::path& dir() const { return dir_; }
  const RunManifest& manifest() const { return manifest_; }

 private:
  std::filesystem::path dir_;
  RunManifest manifest_;
};

const char* artifact_version();

int cmd_simulate(const nlohmann::json& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_probe(const nlohmann::json& cfg, const std::filesystem::path& out_dir, std::optional<double> assert_slope,
              std::ostream& log);
int cmd_map(const nlohmann::json& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_bench(const nlohmann::json& cfg, const std::filesystem::path& out_dir, std::ostream& log);

struct SuiteResult {
  std::string name;
  std::size_t passed = 0;
  std::size_t total = 0;
  std::vector<std::string> failures;
};

std::vector<SuiteResult> run_selftest(bool flip_dispersion_sign);
int cmd_selftest(bool flip_dispersion_sign, std::ostream& out);

// Full dispatch for a parsed command line; diagnostics go to err.
int run(const Options& opt, std::ostream& out, std::ostream& err);

}  // namespace mmt::runner

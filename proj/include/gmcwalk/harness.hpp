#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gmcwalk/common.hpp"

/// Experiment harness: key=value configuration with [sections], a registry
/// of seeded experiments that each emit machine-checkable verdicts, and
/// deterministic CSV / JSON persistence.
namespace gmcwalk::harness {

/// Parsed configuration. Sections map to experiment names; keys outside any
/// section land in the "" section.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::filesystem::path& path);
  /// The configuration shipped with the tool.
  static Config defaults();

  bool has_section(const std::string& section) const;
  const std::map<std::string, std::string>& section(const std::string& name) const;
  void set(const std::string& section, const std::string& key, const std::string& value);
  /// Canonical text (sorted sections and keys), the input of the config hash.
  std::string canonical() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a(const std::string& bytes);

/// Typed view of one experiment's section. Every accessor throws ConfigError
/// naming the key when it is missing or malformed.
class ExperimentConfig {
 public:
  ExperimentConfig(std::string name, std::uint64_t seed, std::map<std::string, std::string> values,
                   int threads = 1);

  const std::string& name() const { return name_; }
  std::uint64_t seed() const { return seed_; }
  int threads() const { return threads_; }
  const std::map<std::string, std::string>& values() const { return values_; }

  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::int64_t> integers(const std::string& key) const;
  std::string text(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

 private:
  const std::string& raw(const std::string& key) const;
  std::string name_;
  std::uint64_t seed_;
  std::map<std::string, std::string> values_;
  int threads_;
};

/// Where a number comes from.
enum class Provenance { formula, monte_carlo, numeric, published };
const char* to_string(Provenance p);

struct Quantity {
  std::string name;
  double value = 0.0;
  Provenance provenance = Provenance::numeric;
};

enum class Mode { pass_fail, report_only };

/// Outcome of one checked claim. Bands are stated explicitly: band_kind is
/// "se" (multiples of a standard error), "abs" (absolute tolerance), "trend"
/// (strict monotone decrease) or "none" for report-only rows.
struct Verdict {
  std::string claim;
  std::string description;
  Mode mode = Mode::pass_fail;
  bool passed = false;
  std::vector<Quantity> measured;
  std::vector<Quantity> expected;
  std::string band_kind = "none";
  double band = 0.0;
  std::string note;
};

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<Verdict> verdicts;
  std::vector<Table> tables;
  /// True when every pass/fail verdict passed.
  bool passed() const;
};

using Experiment = std::function<ExperimentResult(const ExperimentConfig&)>;

/// Registered experiments in run order.
const std::vector<std::pair<std::string, Experiment>>& registry();
std::optional<Experiment> find_experiment(const std::string& name);

ExperimentResult exp_green_convergence(const ExperimentConfig& config);
ExperimentResult exp_mean_identity(const ExperimentConfig& config);
ExperimentResult exp_second_moment(const ExperimentConfig& config);
ExperimentResult exp_fdd_convergence(const ExperimentConfig& config);
ExperimentResult exp_counterexample(const ExperimentConfig& config);
ExperimentResult exp_moment_scaling(const ExperimentConfig& config);
ExperimentResult exp_kernel_bounds(const ExperimentConfig& config);
ExperimentResult exp_composition(const ExperimentConfig& config);
ExperimentResult exp_revuz(const ExperimentConfig& config);
ExperimentResult exp_properties(const ExperimentConfig& config);

/// Parts of exp_second_moment, usable on their own.
ExperimentResult second_moment_double_sum(const ExperimentConfig& config);
ExperimentResult second_moment_ratio(const ExperimentConfig& config);

struct RunOptions {
  std::string experiment;  // registry name or "all"
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  std::optional<std::int64_t> replicas;
  std::optional<std::string> scales;
};

struct RunReport {
  std::vector<ExperimentResult> results;
  bool passed = true;
  std::uint64_t config_hash = 0;
};

/// Build the typed config of one experiment, applying CLI overrides.
ExperimentConfig experiment_config(const Config& config, const std::string& name,
                                   const RunOptions& options);

/// Execute, then write <out>/<experiment>/<table>.csv, <out>/summary.json and
/// <out>/manifest.json. Throws ConfigError for unknown experiments or
/// malformed configuration and Error when the output directory is unwritable.
RunReport run(const Config& config, const RunOptions& options);

void write_csv(const Table& table, const std::filesystem::path& path);
std::string summary_json(const std::vector<ExperimentResult>& results, std::uint64_t config_hash);

/// Deterministic parallel loop: body(i) for i in [0, count) spread over
/// `threads` workers. Results must be stored by index.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace gmcwalk::harness

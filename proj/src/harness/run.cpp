#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "gmcwalk/default_config.hpp"
#include "gmcwalk/harness.hpp"
#include "json.hpp"

namespace gmcwalk::harness {
namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

nlohmann::json quantities_json(const std::vector<Quantity>& qs) {
  auto out = nlohmann::json::array();
  for (const auto& q : qs) {
    out.push_back({{"name", q.name}, {"value", number_json(q.value)}, {"provenance", to_string(q.provenance)}});
  }
  return out;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::formula: return "formula";
    case Provenance::monte_carlo: return "monte_carlo";
    case Provenance::numeric: return "numeric";
    case Provenance::published: return "published";
  }
  return "unknown";
}

Config Config::defaults() { return parse(kDefaultConfig); }

bool ExperimentResult::passed() const {
  for (const auto& v : verdicts) {
    if (v.mode == Mode::pass_fail && !v.passed) return false;
  }
  return true;
}

const std::vector<std::pair<std::string, Experiment>>& registry() {
  static const std::vector<std::pair<std::string, Experiment>> experiments = {
      {"kernel_bounds", exp_kernel_bounds},
      {"green_convergence", exp_green_convergence},
      {"mean_identity", exp_mean_identity},
      {"second_moment", exp_second_moment},
      {"moment_scaling", exp_moment_scaling},
      {"composition", exp_composition},
      {"counterexample", exp_counterexample},
      {"revuz", exp_revuz},
      {"properties", exp_properties},
      {"fdd_convergence", exp_fdd_convergence},
  };
  return experiments;
}

std::optional<Experiment> find_experiment(const std::string& name) {
  for (const auto& [n, e] : registry()) {
    if (n == name || "exp_" + n == name) return e;
  }
  return std::nullopt;
}

ExperimentConfig experiment_config(const Config& config, const std::string& name,
                                   const RunOptions& options) {
  auto values = config.section(name);
  if (options.replicas) values["replicas"] = std::to_string(*options.replicas);
  if (options.scales) values["scales"] = *options.scales;
  int threads = 1;
  if (config.has_section("run")) {
    const auto& run = config.section("run");
    if (auto it = run.find("threads"); it != run.end()) threads = std::stoi(it->second);
  }
  return ExperimentConfig(name, options.seed, std::move(values), threads);
}

void write_csv(const Table& table, const std::filesystem::path& path) {
  std::string text;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    text += (i ? "," : "") + table.header[i];
  }
  text += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + format_number(row[i]);
    text += "\n";
  }
  write_text(path, text);
}

std::string summary_json(const std::vector<ExperimentResult>& results, std::uint64_t config_hash) {
  nlohmann::json root;
  root["config_hash"] = hex(config_hash);
  auto experiments = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    nlohmann::json e;
    e["experiment"] = r.name;
    e["seed"] = r.seed;
    e["passed"] = r.passed();
    all = all && r.passed();
    auto verdicts = nlohmann::json::array();
    for (const auto& v : r.verdicts) {
      verdicts.push_back({{"claim", v.claim},
                          {"description", v.description},
                          {"mode", v.mode == Mode::pass_fail ? "pass_fail" : "report_only"},
                          {"passed", v.passed},
                          {"measured", quantities_json(v.measured)},
                          {"expected", quantities_json(v.expected)},
                          {"band", {{"kind", v.band_kind}, {"width", number_json(v.band)}}},
                          {"note", v.note}});
    }
    e["verdicts"] = verdicts;
    experiments.push_back(e);
  }
  root["experiments"] = experiments;
  root["passed"] = all;
  return root.dump(2) + "\n";
}

RunReport run(const Config& config, const RunOptions& options) {
  std::vector<std::string> names;
  if (options.experiment == "all") {
    for (const auto& [n, e] : registry()) names.push_back(n);
  } else {
    if (!find_experiment(options.experiment)) {
      throw ConfigError("unknown experiment '" + options.experiment + "'");
    }
    names.push_back(options.experiment.rfind("exp_", 0) == 0 ? options.experiment.substr(4)
                                                             : options.experiment);
  }
  // Validate every section before spending time on any experiment.
  std::vector<ExperimentConfig> configs;
  for (const auto& n : names) configs.push_back(experiment_config(config, n, options));

  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) throw Error("output directory " + options.out_dir.string() + " is not writable: " + ec.message());

  RunReport report;
  report.config_hash = fnv1a(config.canonical());
  nlohmann::json files = nlohmann::json::array();
  for (const auto& c : configs) {
    ExperimentResult result = (*find_experiment(c.name()))(c);
    result.name = c.name();
    result.seed = c.seed();
    const auto dir = options.out_dir / c.name();
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
    for (const auto& table : result.tables) {
      const auto path = dir / (table.name + ".csv");
      write_csv(table, path);
    }
    report.passed = report.passed && result.passed();
    report.results.push_back(std::move(result));
  }
  const std::string summary = summary_json(report.results, report.config_hash);
  write_text(options.out_dir / "summary.json", summary);

  // Manifest binds the config hash to the hash of every output.
  for (const auto& r : report.results) {
    for (const auto& table : r.tables) {
      const auto rel = std::filesystem::path(r.name) / (table.name + ".csv");
      std::ifstream in(options.out_dir / rel, std::ios::binary);
      std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      files.push_back({{"path", rel.generic_string()}, {"fnv1a", hex(fnv1a(bytes))}});
    }
  }
  files.push_back({{"path", "summary.json"}, {"fnv1a", hex(fnv1a(summary))}});
  nlohmann::json manifest;
  manifest["config_hash"] = hex(report.config_hash);
  manifest["seed"] = options.seed;
  manifest["experiments"] = names;
  manifest["files"] = files;
  write_text(options.out_dir / "manifest.json", manifest.dump(2) + "\n");
  return report;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace gmcwalk::harness

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "gmcwalk/harness.hpp"

namespace {

void print_verdicts(const gmcwalk::harness::RunReport& report) {
  using gmcwalk::harness::Mode;
  for (const auto& r : report.results) {
    for (const auto& v : r.verdicts) {
      const char* status = v.mode == Mode::report_only ? "REPORT" : (v.passed ? "PASS" : "FAIL");
      std::cout << status << "  " << v.claim;
      for (const auto& q : v.measured) std::cout << "  " << q.name << "=" << q.value;
      std::cout << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gmcwalk: chaos time-changed random walks and Skorokhod metrics"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment or all of them");
  std::string experiment;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::int64_t replicas = 0;
  std::string scales;
  run->add_option("experiment", experiment, "experiment name or 'all'")->required();
  run->add_option("--config", config_path, "configuration file (defaults to the built-in one)");
  run->add_option("--seed", seed, "master seed")->required();
  auto* out_opt = run->add_option("--out", out_dir, "output directory")->envname("GMCWALK_OUT");
  auto* replicas_opt = run->add_option("--replicas", replicas, "override the replica count")->check(CLI::PositiveNumber);
  auto* scales_opt = run->add_option("--scales", scales, "override the scale list, e.g. 4,16,64");

  auto* list = app.add_subcommand("list", "list registered experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    for (const auto& [name, fn] : gmcwalk::harness::registry()) std::cout << name << "\n";
    return 0;
  }

  if (out_opt->count() == 0) {
    std::cerr << "error: --out is required (or set GMCWALK_OUT)\n";
    return 2;
  }
  try {
    const auto config = config_path.empty() ? gmcwalk::harness::Config::defaults()
                                            : gmcwalk::harness::Config::load(config_path);
    gmcwalk::harness::RunOptions options;
    options.experiment = experiment;
    options.seed = seed;
    options.out_dir = out_dir;
    if (replicas_opt->count()) options.replicas = replicas;
    if (scales_opt->count()) options.scales = scales;
    const auto report = gmcwalk::harness::run(config, options);
    print_verdicts(report);
    return report.passed ? 0 : 1;
  } catch (const gmcwalk::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

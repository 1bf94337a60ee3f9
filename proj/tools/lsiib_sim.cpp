// lsiib-sim --config <path> [--output <dir>] [--quiet]
//
// Exit codes: 0 success, 2 config error, 3 physics-precondition error,
// 4 internal numerical error.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "lsiib/lsiib.h"

namespace {

int report_failure(lsiib_status status) {
  if (status == LSIIB_ERR_CONFIG && lsiib_config_issue_count() > 0) {
    std::fprintf(stderr, "lsiib-sim: invalid config:\n");
    for (size_t i = 0; i < lsiib_config_issue_count(); ++i) std::fprintf(stderr, "  %s\n", lsiib_config_issue(i));
  } else {
    std::fprintf(stderr, "lsiib-sim: %s\n", lsiib_last_error());
  }
  return lsiib_status_exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Light-shift-imbalance-induced blockade simulator"};
  std::string config_path;
  std::string output_dir = ".";
  bool quiet = false;
  app.add_option("--config", config_path, "Experiment description (INI)")->required();
  app.add_option("--output", output_dir, "Directory for trajectory.csv / report.json / sweep.csv");
  app.add_flag("--quiet", quiet, "Suppress the summary line");
  app.set_version_flag("--version", std::string(lsiib_version()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  lsiib_config* config = nullptr;
  if (const auto status = lsiib_config_load(config_path.c_str(), &config); status != LSIIB_OK) {
    return report_failure(status);
  }
  lsiib_run* run = nullptr;
  const auto status = lsiib_run_experiment(config, output_dir.c_str(), &run);
  lsiib_config_destroy(config);
  if (status != LSIIB_OK) return report_failure(status);

  if (!quiet) std::printf("%s\n", lsiib_run_summary(run));
  lsiib_run_destroy(run);
  return 0;
}

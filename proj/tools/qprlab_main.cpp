// Seeded experiment runner: dispatches a named experiment over the library
// and persists a replayable result record.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "qprlab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qprlab: seeded experiments over the pseudorandom-state lab"};

  std::string experiment, config_path, out_path, format;
  std::uint64_t seed = 0;
  bool seed_given = false;

  app.add_option("--experiment", experiment,
                 "experiment name (phase-vs-haar, swap-advantage, bru-check, "
                 "stabilizer-moments, trivial-learner, packing, diagonalize, "
                 "pru-moments, charpoly-td)");
  app.add_option("--config", config_path, "JSON config file");
  auto* seed_opt = app.add_option("--seed", seed, "root seed (required)");
  app.add_option("--out", out_path, "output path (default: stdout)");
  app.add_option("--format", format, "json|csv (default: json)");

  CLI11_PARSE(app, argc, argv);
  seed_given = seed_opt->count() > 0;

  using qprlab::ExitCode;
  try {
    qprlab::ExperimentConfig cfg;
    if (!config_path.empty()) {
      try {
        cfg = qprlab::load_config_file(config_path);
      } catch (const qprlab::ValidationError&) {
        throw;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::io_failure);
      }
    }
    // Flags take precedence over the file.
    if (!experiment.empty()) cfg.experiment = experiment;
    if (seed_given) {
      cfg.seed = seed;
      cfg.seed_set = true;
    }
    if (!out_path.empty()) cfg.out_path = out_path;
    if (!format.empty()) cfg.format = format;

    qprlab::ResultRecord record = qprlab::run(cfg);
    try {
      qprlab::emit_to_path(record);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return static_cast<int>(ExitCode::io_failure);
    }
    if (record.bound_violation) {
      std::cerr << "bound violation detected by experiment '"
                << record.experiment << "'\n";
      return static_cast<int>(ExitCode::bound_violation);
    }
    return static_cast<int>(ExitCode::ok);
  } catch (const qprlab::ValidationError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return static_cast<int>(ExitCode::validation_failure);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

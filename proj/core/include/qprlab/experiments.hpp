#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "qprlab/errors.hpp"

namespace qprlab {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr int kConfigSchemaVersion = 1;

// Exit codes shared by the CLI and the library-level runner.
enum class ExitCode : int {
  ok = 0,
  validation_failure = 2,
  io_failure = 3,
  bound_violation = 4,
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::map<std::string, std::string> params;
  std::string out_path;          // empty: stdout
  std::string format = "json";   // json | csv
  int schema_version = kConfigSchemaVersion;

  // Typed access with defaults; throws ValidationError naming the field.
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
};

struct ResultRecord {
  std::string experiment;
  ExperimentConfig resolved_config;
  std::map<std::string, double> metrics;
  std::map<std::string, std::string> text_metrics;
  std::string version;
  std::string timestamp;
  bool bound_violation = false;
};

// Reads a JSON config file ({schema_version, experiment, seed, params{...},
// out, format}). Unknown top-level keys are rejected.
ExperimentConfig load_config_file(const std::string& path);

// Dispatches to the named experiment. Unknown experiment names and unknown
// or ill-typed parameters raise ValidationError.
ResultRecord run(const ExperimentConfig& config);

// JSON (nested) or CSV (flattened dotted keys), stable key order. The
// timestamp field is the only part not reproduced by identical configs.
void emit(const ResultRecord& record, const std::string& format,
          std::ostream& os);

// Writes to record.resolved_config.out_path (stdout when empty). Throws
// std::runtime_error on unwritable paths.
void emit_to_path(const ResultRecord& record);

}  // namespace qprlab

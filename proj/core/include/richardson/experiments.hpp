#ifndef RICHARDSON_EXPERIMENTS_HPP
#define RICHARDSON_EXPERIMENTS_HPP

#include <map>
#include <string>
#include <vector>

#include "richardson/config.hpp"

namespace richardson {

// One finished experiment: config echo, per-replica rows (already formatted,
// so identical runs produce identical bytes) and a JSON summary. Wall-clock
// time lives outside the summary so it never disturbs byte determinism of
// the data.
struct ResultRecord {
  std::string experiment;
  std::map<std::string, std::string> config_echo;  // every effective parameter
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string summary_json;  // serialized JSON object, sorted keys
  double wall_seconds = 0.0;
  int exit_code = 0;  // 3 = oracle mismatch; everything else throws instead
};

// "# schema_version=..." and "# key=value" header lines, a column header,
// then one line per row.
std::string csv_text(const ResultRecord& record);

// Full JSON document: schema version, config echo, summary, wall seconds.
std::string json_text(const ResultRecord& record);

// Writes <out_dir>/<experiment>.csv and .json, creating the directory.
void write_record(const ResultRecord& record, const std::string& out_dir);

// The named experiments. Each validates its config against an explicit key
// list, fills defaults (missing seed means seed 0 plus a warning on stderr),
// runs and aggregates.
ResultRecord cmd_time_constant(const Config& config);
ResultRecord cmd_gm(const Config& config);
ResultRecord cmd_shape(const Config& config);
ResultRecord cmd_ends(const Config& config);
ResultRecord cmd_coexistence(const Config& config);
ResultRecord cmd_config_irrelevance(const Config& config);
ResultRecord cmd_unbounded(const Config& config);
ResultRecord cmd_coupled_scan(const Config& config);
ResultRecord cmd_oracle_check(const Config& config);
ResultRecord cmd_weak_speed(const Config& config);
ResultRecord cmd_strong_fraction(const Config& config);
ResultRecord cmd_subadditivity(const Config& config);

// Dispatch by experiment name; unknown names raise InvalidInputError.
ResultRecord run_experiment(const std::string& name, const Config& config);
std::vector<std::string> experiment_names();

}  // namespace richardson

#endif

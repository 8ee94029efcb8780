// Command-line front end: one subcommand per experiment, parameters from a
// flat key = value config file with --key value overrides on top.
//
// Exit codes: 0 success, 1 usage or invalid input, 2 capacity exceeded,
// 3 oracle mismatch.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "richardson/errors.hpp"
#include "richardson/experiments.hpp"
#include "richardson/util.hpp"
#include "richardson/version.hpp"

namespace {

const char* experiment_blurb(const std::string& name) {
  if (name == "time_constant") return "estimate T(0, n*e1)/n across distances";
  if (name == "gm") return "increment and telescoping diagnostics on a slab";
  if (name == "shape") return "directional speeds, symmetry and convexity";
  if (name == "ends") return "geodesic-tree ends proxy across radii";
  if (name == "coexistence") return "P(both types on the shell) across radii";
  if (name == "config_irrelevance") return "coexistence proxy across initial pairs";
  if (name == "unbounded") return "level occupancy from unbounded starts";
  if (name == "coupled_scan") return "coexistence scan over a coupled lambda grid";
  if (name == "oracle_check") return "Monte Carlo engine vs exact capture probabilities";
  if (name == "weak_speed") return "conditional weak-type boundary speed ratio";
  if (name == "strong_fraction") return "strong-type share of the filled box";
  if (name == "subadditivity") return "exact triangle inequality spot checks";
  return "";
}

// Extra tokens after the recognized options become config overrides:
// "--key value" or "--key=value".
void apply_overrides(richardson::Config& config, const std::vector<std::string>& extras) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& token = extras[i];
    if (token.rfind("--", 0) != 0 || token.size() <= 2) {
      throw richardson::InvalidInputError("expected --key value, got '" + token + "'");
    }
    std::string key = token.substr(2);
    auto eq = key.find('=');
    if (eq != std::string::npos) {
      config.set(key.substr(0, eq), key.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extras.size()) {
      throw richardson::InvalidInputError("missing value for override --" + key);
    }
    config.set(key, extras[++i]);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-passage competition laboratory: simulation on boxes of Z^d "
               "plus exact small-graph computation"};
  app.set_version_flag("--version", richardson::kProjectVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = richardson::env_or("RICHARDSON_OUT_DIR", "out");
  for (const auto& name : richardson::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, experiment_blurb(name));
    sub->add_option("--config", config_path, "key = value parameter file");
    sub->add_option("--out", out_dir,
                    "output directory (default $RICHARDSON_OUT_DIR or ./out)");
    sub->allow_extras();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    richardson::Config config;
    if (!config_path.empty()) config = richardson::Config::parse_file(config_path);
    apply_overrides(config, sub->remaining());

    richardson::ResultRecord record = richardson::run_experiment(sub->get_name(), config);
    richardson::write_record(record, out_dir);
    std::printf("wrote %s/%s.csv and %s/%s.json (%zu rows, %.2f s)\n", out_dir.c_str(),
                record.experiment.c_str(), out_dir.c_str(), record.experiment.c_str(),
                record.rows.size(), record.wall_seconds);
    if (record.exit_code != 0) {
      std::fprintf(stderr, "oracle mismatch: see %s/%s.json\n", out_dir.c_str(),
                   record.experiment.c_str());
    }
    return record.exit_code;
  } catch (const richardson::CapacityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const richardson::InvalidInputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

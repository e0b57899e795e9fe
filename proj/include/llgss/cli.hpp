#pragma once

// Command-line front end. Settings come from defaults, then an optional JSON
// config file, then flags.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace llgss {

struct RunConfig {
  std::string subcommand;
  double c = 0.5;
  double alpha = 0.5;
  double tol = 1e-10;
  double x_max = 0.0;  ///< 0 selects it automatically
  double T = 0.0;
  std::string output;  ///< empty writes to stdout
  std::string format;  ///< csv | json | bin; empty takes the subcommand default
  std::uint64_t seed = 12345;
  double budget = 5e8;
  int id = 0;             ///< figure number
  double spacing = 0.01;  ///< row spacing of trace output
  std::vector<double> grid;
  std::string vary = "c";  ///< scan-angle: which parameter the grid holds
  double bump_center = 0.0;
  double bump_radius = 3.0;

  bool operator==(const RunConfig&) const = default;
};

void to_json(nlohmann::json& j, const RunConfig& cfg);
/// Throws std::invalid_argument on unknown keys.
void from_json(const nlohmann::json& j, RunConfig& cfg);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitVerification = 3;

/// Parses argv and runs the subcommand. Reports go to `out` unless an output
/// path is set; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace llgss

#pragma once
// Command-line front door. Five commands: simulate (direct evolution),
// density and stationary (closed forms), verify (cross-validation suite),
// sweep (closed forms over a coin-angle grid). Artifacts are CSV or JSON,
// numerics at 12 significant digits, LF endings, deterministic byte-for-byte
// under identical configs.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/types.hpp"

namespace qwalk {

struct SweepGrid {
    double beta_min = 0.0;
    double beta_max = 0.0;
    int beta_steps = 0;
    std::vector<std::string> presets;  // subset of {"bell", "nonloc"}
};

struct RunConfig {
    std::string command;
    double beta = pi / 4.0;
    Vector4c alpha;  // unit norm after parsing
    long t = 100;
    std::string output_path;  // empty or "-" means stdout
    std::string format = "csv";
    double quad_tolerance = 1e-9;
    long samples = 100;
    std::uint64_t seed = 1;
    int jobs = 0;  // 0 = hardware threads
    long window = 10;
    int grid_points = 201;
    std::optional<SweepGrid> sweep_grid;
};

// Exit codes shared by all commands.
inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failure = 1;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_io_error = 3;

// "0.5", "pi/4", "3*pi/8" -> radians. Throws std::invalid_argument.
double parse_beta_expression(const std::string& text);

// Four comma-separated complex literals "re", "imi" or "re+imi"/"re-imi".
// Throws std::invalid_argument on malformed input. Does not normalize.
Vector4c parse_alpha_components(const std::string& text);

// 12-significant-digit formatting used by every artifact emitter.
std::string format_significant(double value);

// Parsed-back CSV artifact, for round-trip checks and downstream reading.
struct CsvArtifact {
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};
CsvArtifact parse_csv_artifact(const std::string& text);

int cmd_simulate(const RunConfig& config);
int cmd_density(const RunConfig& config);
int cmd_stationary(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_sweep(const RunConfig& config);

// Parses argv, validates, dispatches. Returns one of the exit codes above.
int run_cli(int argc, const char* const* argv);

} // namespace qwalk

#pragma once

#include <iosfwd>
#include <string>

#include "warpcons/verifier.hpp"

namespace warpcons {
namespace cli {

// Exit codes shared by all commands: 0 success, 1 usage/config/size error,
// 2 property failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPropertyFailure = 2;

struct SimulateOptions {
  std::string config_path;
  std::string out_dir = ".";
};

struct CheckOptions {
  CheckSpace space;
  std::string out_dir = ".";
};

struct SweepOptions {
  std::string grid_path;
  std::string out_path = "sweep.csv";
};

// Runs one experiment file: writes the trace and verdict bundle into
// out_dir, prints a one-line summary per property.
int cmd_simulate(const SimulateOptions& opts, std::ostream& diag);

// Runs the exhaustive space: writes report.json, cases.csv and one
// replayable experiment file per witness into out_dir.
int cmd_check(const CheckOptions& opts, std::ostream& diag);

// Runs the honest (f = 0) grid and writes the phase-count table.
int cmd_sweep(const SweepOptions& opts, std::ostream& diag);

// Case cap from WARPCONS_CASE_CAP, or the default 10^7.
std::uint64_t case_cap_from_env();

}  // namespace cli
}  // namespace warpcons

#pragma once

#include <string>
#include <vector>

#include "warpcons/config.hpp"
#include "warpcons/engine.hpp"
#include "warpcons/verifier.hpp"

namespace warpcons {

struct OutputSpec {
  std::string trace_file = "trace.json";
  std::string verdicts_file = "verdicts.json";
};

struct Experiment {
  SystemConfig config;
  OutputSpec output;
};

// Parses an experiment file. Unknown keys are rejected; errors name the
// offending key. Throws ConfigParseError.
Experiment parse_experiment_json(const std::string& text);

// Canonical serialization: fixed key order, defaults filled in, so identical
// configurations always produce identical bytes.
std::string experiment_to_json(const SystemConfig& cfg);

std::string trace_to_json(const Trace& trace);
std::string verdicts_to_json(const ValidatedConfig& cfg,
                             const std::vector<Verdict>& verdicts);

std::string report_to_json(const CheckReport& report, const CheckSpace& space,
                           const std::vector<std::string>& witness_files);
std::string report_rows_to_csv(const CheckReport& report);

struct SweepRow {
  std::uint32_t n = 0, p = 0, r = 0;
  std::uint64_t last_decision_phase = 0;
  std::uint64_t phase_bound = 0;
  std::string theta_ratio;  // fixed 6-decimal string, integer arithmetic
};

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// phases * p^2 * r / n^2 rendered with six decimals, float-free.
std::string format_theta_ratio(std::uint64_t phases, std::uint32_t n,
                               std::uint32_t p, std::uint32_t r);

// Grid file for the sweep command: {"n": [...], "p": [...], "r": [...]}.
struct SweepGrid {
  std::vector<std::uint32_t> ns, ps, rs;
};
SweepGrid parse_sweep_grid_json(const std::string& text);

}  // namespace warpcons

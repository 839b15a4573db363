#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "warpcons/config.hpp"
#include "warpcons/engine.hpp"

namespace warpcons {

enum class Property : int { Agreement = 0, CommonValidity, StrongValidity, Termination };
enum class Outcome { Pass, Fail, NotApplicable };

const char* to_string(Property p);
const char* to_string(Outcome o);

struct Verdict {
  Property property = Property::Agreement;
  Outcome outcome = Outcome::Pass;
  std::string detail;
};

// Per-trace checks. Agreement and the validity checks quantify over correct
// processes only and throw IncompleteTraceError when one of them is missing
// a decision; check_termination never throws.
Verdict check_agreement(const ValidatedConfig& cfg, const Trace& trace);
Verdict check_common_validity(const ValidatedConfig& cfg, const Trace& trace);
Verdict check_strong_validity(const ValidatedConfig& cfg, const Trace& trace);
Verdict check_termination(const ValidatedConfig& cfg, const Trace& trace);

// All four, tolerant of incomplete traces: when a correct process never
// decided, Termination fails and the other properties are not applicable.
std::vector<Verdict> check_all(const ValidatedConfig& cfg, const Trace& trace);

// ---------------------------------------------------------------------------
// Exhaustive small-instance checking.
// ---------------------------------------------------------------------------

enum class FMode { BelowBound, AtBound, AboveBound };

const char* to_string(FMode m);

struct CheckSpace {
  std::vector<std::uint32_t> ns;
  std::vector<std::uint32_t> ps;
  std::vector<std::uint32_t> rs;
  std::vector<std::uint32_t> domain;
  FMode f_mode = FMode::BelowBound;
  bool expect_violation = false;
  std::uint64_t case_cap = 10'000'000;
  std::size_t witness_cap = 8;
  bool keep_case_rows = true;
};

struct PropertyCounts {
  std::uint64_t pass = 0;
  std::uint64_t fail = 0;
  std::uint64_t not_applicable = 0;
};

struct WitnessRecord {
  Property property = Property::Agreement;
  Trace trace;           // carries the replayable config
  std::string summary;
};

struct CaseRow {
  std::uint32_t n = 0, p = 0, r = 0, f = 0, vc_size = 0;
  std::string strategy;
  Property property = Property::Agreement;
  Outcome outcome = Outcome::Pass;
  std::optional<std::uint64_t> last_decision_phase;
};

struct CheckReport {
  std::uint64_t total_cases = 0;
  std::array<PropertyCounts, 4> counts{};  // indexed by Property
  std::vector<WitnessRecord> witnesses;
  std::uint64_t regime_failures = 0;  // failures with f within the bound
  std::vector<CaseRow> rows;
  // Wall-clock bookkeeping; deliberately kept out of serialized outputs so
  // that identical inputs reproduce byte-identical bundles.
  double elapsed_seconds = 0.0;
};

// Number of (config, strategy, arbitration) cases the space expands to.
std::uint64_t estimate_case_count(const CheckSpace& space);

// Runs every case of the space: every placement of f Byzantine processes,
// every correct-proposal assignment (quotiented by value relabeling in the
// below/at-bound modes, full in above-bound mode, where the smallest-value
// tie break makes verdicts label-sensitive), every Byzantine value
// assignment over {null} + domain, and every contention-winner resolution.
// Throws TooLargeError when the estimate exceeds space.case_cap.
CheckReport exhaustive_check(const CheckSpace& space);

// Searches the given configuration's strategy space and every contention
// resolution for a property failure; returns the first witness trace found.
std::optional<Trace> find_violation(const SystemConfig& base, std::uint64_t cap);

// Named scenarios used by the harness and the acceptance suite.

// n=6, p=1, f=2, correct proposals (1,1,2,2), all-faulty collusion on 0,
// adversarial arbitration: one past the resilience bound, decides 0.
SystemConfig tightness_scenario();

// n=20, p=2, r=5, one fully-Byzantine warp, |V_c| = 2. With abstention the
// faulty warp appends late and splits the correct readers' lists; without
// abstention the same strategy commits in round 1 and the run is clean.
SystemConfig model_gap_scenario(bool abstention);

// Deterministic enumeration of every contention-winner resolution for the
// base config (its arbitration policy is replaced by scripted winners).
// Calls on_run(validated, trace) once per resolution; returns the number of
// runs. The engine's arbitration log drives the exploration, so arbitrary
// (even history-dependent) contention patterns are covered exactly.
std::uint64_t for_each_arbitration(
    const SystemConfig& base,
    const std::function<void(const ValidatedConfig&, const Trace&)>& on_run);

}  // namespace warpcons

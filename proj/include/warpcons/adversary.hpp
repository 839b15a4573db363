#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "warpcons/config.hpp"
#include "warpcons/protocol.hpp"
#include "warpcons/stickycas.hpp"

namespace warpcons {

// What a Byzantine process may observe before acting: the shared list (read
// access) plus everything already public. Built-in strategies are oblivious;
// the hook exists for scripted experiments and tests.
struct AdversaryView {
  const StickyCasState& list;
  PhaseIndex phase = 0;
};

// A strategy compiled down to per-pid, access-indexed append plans. Every
// spec'd strategy kind reduces to "append value v at access k" entries; all
// other accesses are no-ops.
class CompiledAdversary {
 public:
  // Validates the strategy against the configuration (value constraints,
  // abstention rules) and resolves it to concrete plans.
  //
  // When abstention is disabled, AbstainThenAppend degrades to an append on
  // the first access (the round-1-commit regime is enforced), and Scripted
  // plans with appends after access 0 are rejected.
  static CompiledAdversary compile(const SystemConfig& cfg,
                                   const std::vector<std::uint32_t>& correct_values);

  Action action(ProcessId pid, std::uint32_t access) const;

 private:
  std::map<ProcessId, std::map<std::uint32_t, Value>> appends_;
};

// Convenience wrapper matching the one-shot query shape used by tests:
// compiles cfg's strategy and returns the action of `pid` at `access`.
Action byzantine_action(const ValidatedConfig& cfg, ProcessId pid,
                        std::uint32_t access, const AdversaryView& view);

// Enumerates every assignment of {null} + value_domain proposals to the
// Byzantine pids; with abstention enabled, each assignment is yielded both
// as immediate appends and as one-round-late appends. Throws TooLargeError
// when the assignment count exceeds `cap`.
void worst_case_strategy_space(const ValidatedConfig& cfg, std::uint64_t cap,
                               const std::function<void(const ByzantineStrategy&)>& yield);

std::uint64_t worst_case_strategy_count(const ValidatedConfig& cfg);

// Crash plan for the step-level conformance tests: pid -> number of shared
// steps completed before the process halts forever.
struct CrashPlan {
  std::map<ProcessId, std::uint32_t> halt_after_steps;
};

// At least one process must stay up (and a plan may not name unknown pids).
void validate_crash_plan(const CrashPlan& plan,
                         const std::vector<ProcessId>& all_pids);

}  // namespace warpcons

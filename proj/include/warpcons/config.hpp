#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "warpcons/value.hpp"

namespace warpcons {

// ---------------------------------------------------------------------------
// Byzantine strategy configuration (behavior lives in adversary.hpp).
// ---------------------------------------------------------------------------

// One scripted step: at the process's access number `access` either append
// `value` or do nothing for that phase.
struct ScriptedAction {
  std::uint32_t access = 0;
  bool append = false;
  Value value{};
};

// Behavior of a single Byzantine process inside a Mixed strategy.
struct PidStrategy {
  enum class Kind { NullProposer, FixedValue, AbstainThenAppend, Scripted };
  Kind kind = Kind::NullProposer;
  Value value{};
  std::uint32_t offset = 0;
  std::vector<ScriptedAction> script;
};

struct ByzantineStrategy {
  enum class Kind {
    NullProposer,       // every faulty process appends null on first access
    DistinctValues,     // per-pid unique value, appended on first access
    Collude,            // all faulty processes append the same value, not in V_c
    EchoCorrect,        // all faulty processes append a value from V_c
    Mixed,              // per-pid sub-strategy
    AbstainThenAppend,  // no-op until access `offset`, then append `value`
    Scripted            // explicit per-access action list per pid
  };

  Kind kind = Kind::NullProposer;
  Value value{};              // Collude / EchoCorrect (target) / AbstainThenAppend
  std::uint32_t offset = 0;   // AbstainThenAppend
  std::map<ProcessId, Value> assignment;            // DistinctValues
  std::map<ProcessId, PidStrategy> members;         // Mixed
  std::map<ProcessId, std::vector<ScriptedAction>> scripts;  // Scripted
};

// ---------------------------------------------------------------------------
// Append contention arbitration.
// ---------------------------------------------------------------------------

struct ContentionPolicy {
  enum class Kind {
    AdversarialByzantineWins,  // a faulty attempt wins if present (lowest faulty pid)
    LowestPid,
    SeededUniform,    // deterministic in (seed, phase, attempt set)
    ScriptedWinners,  // explicit winner pid per contended phase, in order
  };

  Kind kind = Kind::AdversarialByzantineWins;
  std::vector<ProcessId> winners;  // ScriptedWinners only
};

// ---------------------------------------------------------------------------
// System configuration.
// ---------------------------------------------------------------------------

// The full description of one experiment. Validated by validate_config().
struct SystemConfig {
  std::uint32_t n = 1;  // process count
  std::uint32_t p = 1;  // warp size (processes per phase)
  std::uint32_t r = 1;  // values readable per phase
  std::uint32_t f = 0;  // Byzantine process count

  std::vector<std::uint32_t> value_domain;        // finite ordered set
  std::map<ProcessId, std::uint32_t> proposals;   // correct pid -> value
  std::set<ProcessId> byzantine_ids;

  ByzantineStrategy adversary;
  ContentionPolicy arbitration;
  bool byzantine_may_abstain = false;
  std::uint64_t seed = 0;
};

// Derived quantities -- pure integer arithmetic.

constexpr std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return (a + b - 1) / b;
}

constexpr std::uint32_t warp_count_for(std::uint32_t n, std::uint32_t p) {
  return static_cast<std::uint32_t>(ceil_div(n, p));
}

constexpr WarpId warp_of(ProcessId pid, std::uint32_t p) { return pid / p; }

// Largest integer f with f < n / ((vc_size + 1) * p); 0 when none qualifies.
constexpr std::uint32_t resilience_limit(std::uint32_t n, std::uint32_t p,
                                         std::uint32_t vc_size) {
  return static_cast<std::uint32_t>(
      (static_cast<std::uint64_t>(n) - 1) /
      (static_cast<std::uint64_t>(vc_size + 1) * p));
}

// Phases needed to read `len` values in chunks of r under the RR schedule.
constexpr std::uint64_t read_phase_cost(std::uint32_t n, std::uint32_t p,
                                        std::uint32_t r, std::uint32_t len) {
  return ceil_div(n, p) * ceil_div(len, r);
}

// Exact 0-indexed phase at which the last warp's correct processes decide
// under the RR schedule: (W - 1) + W * ceil(W / r), W = ceil(n / p).
constexpr std::uint64_t decision_phase_bound(std::uint32_t n, std::uint32_t p,
                                             std::uint32_t r) {
  const std::uint64_t w = ceil_div(n, p);
  return (w - 1) + w * ceil_div(w, r);
}

// ---------------------------------------------------------------------------
// Validated configuration.
// ---------------------------------------------------------------------------

class ValidatedConfig {
 public:
  const SystemConfig& raw() const { return cfg_; }
  std::uint32_t n() const { return cfg_.n; }
  std::uint32_t p() const { return cfg_.p; }
  std::uint32_t r() const { return cfg_.r; }
  std::uint32_t f() const { return cfg_.f; }
  std::uint32_t warp_count() const { return warp_count_; }

  // V_c: sorted distinct values proposed by correct processes.
  const std::vector<std::uint32_t>& correct_values() const { return vc_; }
  std::uint32_t resilience_limit_here() const { return limit_; }
  bool within_resilience_bound() const { return cfg_.f <= limit_; }

  bool is_byzantine(ProcessId pid) const {
    return cfg_.byzantine_ids.count(pid) != 0;
  }
  Value proposal_of(ProcessId pid) const;  // correct pids only

  std::vector<ProcessId> warp_members(WarpId w) const;

 private:
  friend ValidatedConfig validate_config(SystemConfig cfg);
  explicit ValidatedConfig(SystemConfig cfg) : cfg_(std::move(cfg)) {}

  SystemConfig cfg_;
  std::uint32_t warp_count_ = 1;
  std::uint32_t limit_ = 0;
  std::vector<std::uint32_t> vc_;
};

// Checks all structural invariants and computes the derived quantities.
// Throws InvalidParameterError with the offending field named.
ValidatedConfig validate_config(SystemConfig cfg);

}  // namespace warpcons

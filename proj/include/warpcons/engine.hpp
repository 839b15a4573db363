#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "warpcons/adversary.hpp"
#include "warpcons/config.hpp"
#include "warpcons/protocol.hpp"
#include "warpcons/stickycas.hpp"

namespace warpcons {

struct ActionRecord {
  ProcessId pid = 0;
  Action::Kind kind = Action::Kind::Noop;
  std::uint32_t access = 0;
  Value value{};                              // append value
  std::optional<AppendResult> append_result;  // set for appends
  std::uint32_t read_from = 0;                // first slot index of the chunk
  std::vector<Value> read_values;             // chunk contents
  std::optional<Value> decided;               // decision taken this phase
};

struct PhaseRecord {
  PhaseIndex phase = 0;
  WarpId warp = 0;
  std::vector<ActionRecord> actions;
  std::size_t list_len_after = 0;
};

struct DecisionRecord {
  Value value{};
  PhaseIndex phase = 0;
};

struct Trace {
  SystemConfig config;
  std::vector<PhaseRecord> phases;
  std::vector<std::optional<DecisionRecord>> decisions;  // by pid
  std::vector<bool> halted_all_null;                     // by pid
  StickyCasState final_list{0};
};

// One arbitration decision among >= 2 simultaneous append attempts.
struct ArbitrationChoice {
  std::vector<ProcessId> attempts;  // ascending pid
  std::uint32_t chosen = 0;         // index into attempts
};

// RR warp dispatch: increasing warp-ID order, one warp per phase.
constexpr WarpId schedule_warp(PhaseIndex phase, std::uint32_t warp_count) {
  return static_cast<WarpId>(phase % warp_count);
}

// The deterministic phase loop: queries every scheduled process for its
// action, arbitrates append contention, applies the appends, then delivers
// read chunks, recording everything into the trace.
class Engine {
 public:
  explicit Engine(ValidatedConfig cfg);

  using ByzantineFn =
      std::function<Action(ProcessId, std::uint32_t access, const AdversaryView&)>;

  // Test hook: replaces the compiled strategy for all Byzantine pids.
  void set_byzantine_override(ByzantineFn fn) { byz_override_ = std::move(fn); }

  bool all_correct_done() const;

  // Runs exactly one phase and returns its record.
  const PhaseRecord& execute_phase();

  // Runs phases until every correct process decided (or halted on an
  // all-null list, reachable only outside the resilience regime). The trace
  // is finalized with decisions and the final list.
  Trace run();

  const std::vector<ArbitrationChoice>& arbitration_log() const {
    return arbitration_log_;
  }
  const ValidatedConfig& config() const { return cfg_; }

 private:
  ProcessId pick_winner(PhaseIndex phase, const std::vector<AppendAttempt>& attempts);

  ValidatedConfig cfg_;
  StickyCasState list_;
  std::vector<ProcessState> procs_;
  CompiledAdversary adversary_;
  std::optional<ByzantineFn> byz_override_;
  Trace trace_;
  PhaseIndex phase_ = 0;
  std::size_t scripted_consumed_ = 0;
  std::vector<ArbitrationChoice> arbitration_log_;
};

Trace run_to_completion(const ValidatedConfig& cfg);

}  // namespace warpcons

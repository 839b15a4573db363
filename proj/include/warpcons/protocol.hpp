#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "warpcons/value.hpp"

namespace warpcons {

// One phase's worth of work requested by a process.
struct Action {
  enum class Kind { Append, ReadChunk, Decide, Noop };
  Kind kind = Kind::Noop;
  Value value{};  // Append: proposal; Decide: decision
};

// Per-process automaton state. `read_target` is ceil(n/p), fixed at init.
struct ProcessState {
  ProcessId pid = 0;
  Value proposal{};
  std::uint32_t access_count = 0;
  std::vector<Value> read_cursor;  // values received so far, in slot order
  std::uint32_t read_target = 1;
  std::optional<PhaseIndex> phase_of_append;
  std::optional<std::pair<Value, PhaseIndex>> decision;
  bool halted_all_null = false;

  bool done() const { return decision.has_value() || halted_all_null; }
};

// Most frequent non-null value; ties broken toward the smallest payload.
// Throws AllNullError when no non-null entry exists.
Value mode(std::span<const Value> values);

// The correct-process step function: first access appends the proposal,
// later accesses read chunks until `read_target` values are held, then the
// process decides mode(read_cursor). Deterministic in the state alone.
Action protocol_step(const ProcessState& state);

}  // namespace warpcons

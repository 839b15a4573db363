#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "warpcons/value.hpp"

namespace warpcons {

// The idealized sticky append-only list: fixed capacity, null-initialized
// slots, and a committed-prefix counter. Committed slots are never modified;
// there is no overwrite, delete, or reset.
struct StickyCasState {
  std::vector<Value> slots;
  std::size_t appended = 0;

  explicit StickyCasState(std::size_t capacity)
      : slots(capacity, Value::null()) {}

  std::size_t capacity() const { return slots.size(); }

  friend bool operator==(const StickyCasState& a, const StickyCasState& b) {
    return a.appended == b.appended && a.slots == b.slots;
  }
};

enum class AppendResult { WriteSuccessful, WriteFailed, LimitReached };

const char* to_string(AppendResult r);

struct AppendAttempt {
  ProcessId pid = 0;
  Value val{};
};

struct PhaseAppendOutcome {
  StickyCasState state;
  // (pid, result) in the order the attempts were given.
  std::vector<std::pair<ProcessId, AppendResult>> results;
};

// Applies one phase's append attempts. At most one attempt commits: the
// designated winner. When the list is full every attempt gets LimitReached
// and the state is unchanged (the winner included). Empty attempts leave the
// state unchanged. Throws ArbitrationError if a nonempty attempt set has no
// winner amongst it, or InvalidParameterError on duplicate attempt pids.
PhaseAppendOutcome resolve_phase_appends(const StickyCasState& state,
                                         const std::vector<AppendAttempt>& attempts,
                                         std::optional<ProcessId> winner);

// First `len` slots verbatim; positions not yet committed read as null.
// Throws InvalidLengthError unless 1 <= len <= capacity.
std::vector<Value> read_prefix(const StickyCasState& state, std::size_t len);

}  // namespace warpcons

#include "warpcons/stickycas.hpp"

#include <set>
#include <string>

#include "warpcons/errors.hpp"

namespace warpcons {

const char* to_string(AppendResult r) {
  switch (r) {
    case AppendResult::WriteSuccessful: return "write-successful";
    case AppendResult::WriteFailed: return "write-failed";
    case AppendResult::LimitReached: return "limit-reached";
  }
  return "?";
}

PhaseAppendOutcome resolve_phase_appends(const StickyCasState& state,
                                         const std::vector<AppendAttempt>& attempts,
                                         std::optional<ProcessId> winner) {
  PhaseAppendOutcome out{state, {}};
  if (attempts.empty()) return out;

  std::set<ProcessId> seen;
  for (const auto& a : attempts) {
    if (!seen.insert(a.pid).second) {
      throw InvalidParameterError("resolve_phase_appends: duplicate attempt by pid " +
                                  std::to_string(a.pid));
    }
  }

  if (state.appended >= state.capacity()) {
    // Full list trumps arbitration: even the designated winner is refused.
    for (const auto& a : attempts) {
      out.results.emplace_back(a.pid, AppendResult::LimitReached);
    }
    return out;
  }

  if (!winner.has_value() || seen.count(*winner) == 0) {
    throw ArbitrationError("resolve_phase_appends: winner not among attempts");
  }

  for (const auto& a : attempts) {
    if (a.pid == *winner) {
      out.state.slots[out.state.appended] = a.val;
      out.results.emplace_back(a.pid, AppendResult::WriteSuccessful);
    } else {
      out.results.emplace_back(a.pid, AppendResult::WriteFailed);
    }
  }
  out.state.appended += 1;
  return out;
}

std::vector<Value> read_prefix(const StickyCasState& state, std::size_t len) {
  if (len < 1 || len > state.capacity()) {
    throw InvalidLengthError("read_prefix: len " + std::to_string(len) +
                             " outside [1, " + std::to_string(state.capacity()) +
                             "]");
  }
  return std::vector<Value>(state.slots.begin(),
                            state.slots.begin() + static_cast<std::ptrdiff_t>(len));
}

}  // namespace warpcons

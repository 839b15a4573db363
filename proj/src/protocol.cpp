#include "warpcons/protocol.hpp"

#include <map>

#include "warpcons/errors.hpp"

namespace warpcons {

Value mode(std::span<const Value> values) {
  std::map<std::uint32_t, std::size_t> freq;
  for (Value v : values) {
    if (!v.is_null()) ++freq[v.payload()];
  }
  if (freq.empty()) throw AllNullError("mode: no non-null value present");

  // Max frequency, smallest payload on ties; the map iterates ascending.
  std::uint32_t best = 0;
  std::size_t best_count = 0;
  for (const auto& [payload, count] : freq) {
    if (count > best_count) {
      best = payload;
      best_count = count;
    }
  }
  return Value::of(best);
}

Action protocol_step(const ProcessState& state) {
  if (state.access_count == 0) {
    return Action{Action::Kind::Append, state.proposal};
  }
  if (state.read_cursor.size() < state.read_target) {
    return Action{Action::Kind::ReadChunk, Value::null()};
  }
  return Action{Action::Kind::Decide,
                mode(std::span<const Value>(state.read_cursor))};
}

}  // namespace warpcons

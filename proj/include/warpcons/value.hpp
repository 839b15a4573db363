#pragma once

#include <cstdint>
#include <string>

namespace warpcons {

using ProcessId = std::uint32_t;
using WarpId = std::uint32_t;
using PhaseIndex = std::uint64_t;

/// A proposal value: a non-negative integer payload or the distinguished
/// null sentinel. Null compares unequal to every payload and never takes
/// part in mode counting.
class Value {
 public:
  constexpr Value() = default;  // null

  static constexpr Value null() { return Value{}; }
  static constexpr Value of(std::uint32_t payload) {
    return Value{static_cast<std::int64_t>(payload)};
  }

  constexpr bool is_null() const { return raw_ < 0; }

  // Only meaningful when !is_null().
  constexpr std::uint32_t payload() const {
    return static_cast<std::uint32_t>(raw_);
  }

  friend constexpr bool operator==(Value a, Value b) { return a.raw_ == b.raw_; }
  friend constexpr bool operator!=(Value a, Value b) { return a.raw_ != b.raw_; }

 private:
  explicit constexpr Value(std::int64_t raw) : raw_(raw) {}

  std::int64_t raw_ = -1;
};

inline std::string to_string(Value v) {
  return v.is_null() ? std::string("null") : std::to_string(v.payload());
}

}  // namespace warpcons

#pragma once

#include <stdexcept>

namespace warpcons {

// Configuration value out of range or inconsistent (p > n, f >= n, ...).
struct InvalidParameterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Prefix read length outside [1, capacity].
struct InvalidLengthError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Designated append winner is not among the attempts of the phase.
struct ArbitrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A step schedule violates a program's internal order or is incomplete.
struct ScheduleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An enumeration request exceeds the configured case cap.
struct TooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An action asks for more work than one phase permits.
struct BudgetViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A Byzantine strategy emitted an action outside its allowed action space.
struct IllegalActionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Engine safety net: the run exceeded 4x the phase bound.
struct NonTerminationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// mode() over a list with no non-null entry.
struct AllNullError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A property check was asked about a trace with missing decisions.
struct IncompleteTraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Experiment file could not be parsed or validated; message names the key.
struct ConfigParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace warpcons

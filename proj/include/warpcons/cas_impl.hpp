#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "warpcons/errors.hpp"
#include "warpcons/value.hpp"

namespace warpcons {

// ---------------------------------------------------------------------------
// Register bank. Slot indices are 1-based at this module's boundary; the 0-
// based conversion happens once, in read_impl(). Every mutation goes through
// a cas() call; there are no direct writes.
// ---------------------------------------------------------------------------

namespace detail {
struct BankRestore;
}

class AtomicRegisterBank {
 public:
  explicit AtomicRegisterBank(std::size_t n)
      : slots_(n, Value::null()) {}

  std::size_t capacity() const { return slots_.size(); }

  int read_counter() const { return counter_; }

  // pre: 1 <= k <= capacity()
  Value read_slot(std::size_t k) const { return slots_[k - 1]; }

  bool cas_counter(int expected, int desired) {
    if (counter_ != expected) return false;
    counter_ = desired;
    return true;
  }

  // pre: 1 <= k <= capacity()
  bool cas_slot(std::size_t k, Value expected, Value desired) {
    if (slots_[k - 1] != expected) return false;
    slots_[k - 1] = desired;
    return true;
  }

  friend bool operator==(const AtomicRegisterBank& a, const AtomicRegisterBank& b) {
    return a.counter_ == b.counter_ && a.slots_ == b.slots_;
  }

 private:
  friend struct detail::BankRestore;

  int counter_ = 1;  // next free 1-based position
  std::vector<Value> slots_;
};

namespace detail {
// Undo access for the interleaving enumerator only.
struct BankRestore {
  static void set_counter(AtomicRegisterBank& b, int v) { b.counter_ = v; }
  static void set_slot(AtomicRegisterBank& b, std::size_t k, Value v) {
    b.slots_[k - 1] = v;
  }
};
}  // namespace detail

// ---------------------------------------------------------------------------
// Append and read programs over the bank.
// ---------------------------------------------------------------------------

enum class CasStepKind { ReadCounter, ReadSlot, CasCounter, CasSlot, ReadCell };

enum class CasAppendOutcome { Success, Failed, LimitReached, Crashed, Incomplete };

// Alg.-faithful result strings.
const char* to_string(CasAppendOutcome o);

struct PendingAppend {
  ProcessId pid = 0;
  Value val{};
};

struct ReaderSpec {
  ProcessId pid = 0;
  std::size_t len = 1;
};

// Runtime state of one append. Shared steps run in the fixed order
// ReadCounter, ReadSlot, CasCounter, CasSlot; the limit check is local and
// atomic with ReadSlot, and routes straight to Done when k exceeds the
// capacity. A committed slot must never be replaced, so the slot CAS expects
// null: an appender that lost the race observes the CAS failure rather than
// displacing the committed value.
struct AppendProgram {
  enum class Pc { ReadCounter, ReadSlot, CasCounter, CasSlot, Done };

  ProcessId pid = 0;
  Value val{};
  Pc pc = Pc::ReadCounter;
  int k = 0;
  Value m{};
  CasAppendOutcome outcome = CasAppendOutcome::Incomplete;
  std::uint32_t steps = 0;  // shared steps executed

  bool done() const { return pc == Pc::Done; }
  CasStepKind next_step() const;  // pre: !done()
};

struct ReadProgramState {
  ProcessId pid = 0;
  std::size_t len = 0;
  std::size_t cursor = 0;       // cells read so far
  std::vector<Value> cells;

  bool done() const { return cursor >= len; }
};

// Executes one shared step of `prog` against `bank`; returns the step kind.
CasStepKind execute_append_step(AtomicRegisterBank& bank, AppendProgram& prog);

// Atomic-per-cell snapshot of the first `len` slots (0-based result).
std::vector<Value> read_impl(const AtomicRegisterBank& bank, std::size_t len);

// ---------------------------------------------------------------------------
// Explicit schedules.
// ---------------------------------------------------------------------------

struct StepSchedule {
  struct Entry {
    ProcessId pid = 0;
    CasStepKind step = CasStepKind::ReadCounter;
  };
  std::vector<Entry> entries;
  // pid -> shared steps completed before the process halts forever.
  std::map<ProcessId, std::uint32_t> crash_after;
};

struct InterleavedRunResult {
  AtomicRegisterBank bank;
  std::vector<CasAppendOutcome> outcomes;     // per appender, input order
  std::vector<int> k_observed;                // counter value each appender read
  std::vector<std::uint32_t> steps_taken;     // shared steps per appender
  std::optional<std::vector<Value>> reader_cells;
  std::uint32_t reader_steps = 0;
  bool reader_crashed = false;
};

// Replays `schedule` against a copy of `initial`. Throws ScheduleError when
// an entry names the wrong next step, steps a crashed or completed program,
// or leaves a non-crashed program unfinished.
InterleavedRunResult run_append_interleaved(const AtomicRegisterBank& initial,
                                            std::span<const PendingAppend> appenders,
                                            std::optional<ReaderSpec> reader,
                                            const StepSchedule& schedule);

// ---------------------------------------------------------------------------
// Exhaustive interleaving + crash-pattern enumeration.
// ---------------------------------------------------------------------------

struct InterleavingCase {
  const StepSchedule& schedule;
  std::span<const CasAppendOutcome> outcomes;      // per appender
  std::span<const int> k_observed;                 // per appender
  std::span<const std::uint32_t> steps_taken;      // per appender
  std::span<const std::uint32_t> slot_successes;   // index 1..capacity
  bool has_reader = false;
  bool reader_crashed = false;
  std::span<const Value> reader_cells;             // cells actually read
  const AtomicRegisterBank& bank;                  // final state of this leaf
};

namespace detail {

template <class Visitor>
class InterleavingEnumerator {
 public:
  InterleavingEnumerator(const AtomicRegisterBank& initial,
                         std::span<const PendingAppend> appenders,
                         std::optional<ReaderSpec> reader, int max_crashes,
                         Visitor& visit)
      : bank_(initial), reader_spec_(reader), max_crashes_(max_crashes),
        visit_(visit) {
    for (const auto& a : appenders) {
      programs_.push_back(AppendProgram{.pid = a.pid, .val = a.val});
    }
    if (reader_spec_) {
      reader_.pid = reader_spec_->pid;
      reader_.len = reader_spec_->len;
      reader_.cells.assign(reader_.len, Value::null());
    }
    const std::size_t total = programs_.size() + (reader_spec_ ? 1 : 0);
    crash_at_.assign(total, kNoCrash);
    outcome_view_.resize(programs_.size());
    k_view_.resize(programs_.size());
    steps_view_.resize(programs_.size());
    slot_successes_.assign(bank_.capacity() + 1, 0);
    schedule_.entries.reserve(4 * programs_.size() + reader_.len);
  }

  std::uint64_t run() {
    choose_crashes(0, 0);
    return count_;
  }

 private:
  static constexpr std::uint32_t kNoCrash = 0xffffffffu;

  std::size_t total_programs() const {
    return programs_.size() + (reader_spec_ ? 1 : 0);
  }

  std::uint32_t nominal_steps(std::size_t i) const {
    return i < programs_.size() ? 4u : static_cast<std::uint32_t>(reader_.len);
  }

  // Enumerate crash patterns: per program either no crash or a boundary in
  // [0, nominal_steps). At most max_crashes crash, and with more than one
  // program at least one stays up.
  void choose_crashes(std::size_t i, int crashed) {
    const std::size_t total = total_programs();
    if (i == total) {
      if (total > 1 && static_cast<std::size_t>(crashed) >= total) return;
      prepare_schedule_crashes();
      dfs();
      return;
    }
    choose_crashes(i + 1, crashed);  // no crash for program i
    if (crashed + 1 <= max_crashes_) {
      if (total > 1 && static_cast<std::size_t>(crashed + 1) >= total) return;
      for (std::uint32_t b = 0; b < nominal_steps(i); ++b) {
        crash_at_[i] = b;
        choose_crashes(i + 1, crashed + 1);
      }
      crash_at_[i] = kNoCrash;
    }
  }

  void prepare_schedule_crashes() {
    schedule_.crash_after.clear();
    for (std::size_t i = 0; i < total_programs(); ++i) {
      if (crash_at_[i] == kNoCrash) continue;
      const ProcessId pid =
          i < programs_.size() ? programs_[i].pid : reader_.pid;
      schedule_.crash_after[pid] = crash_at_[i];
    }
  }

  bool halted(std::size_t i) const {
    const std::uint32_t steps =
        i < programs_.size() ? programs_[i].steps
                             : static_cast<std::uint32_t>(reader_.cursor);
    return crash_at_[i] != kNoCrash && steps >= crash_at_[i];
  }

  bool program_done(std::size_t i) const {
    return i < programs_.size() ? programs_[i].done() : reader_.done();
  }

  void dfs() {
    bool any = false;
    for (std::size_t i = 0; i < total_programs(); ++i) {
      if (program_done(i) || halted(i)) continue;
      any = true;
      step_and_recurse(i);
    }
    if (!any) leaf();
  }

  void step_and_recurse(std::size_t i) {
    if (i < programs_.size()) {
      AppendProgram& prog = programs_[i];
      const AppendProgram snapshot = prog;
      const int old_counter = bank_.read_counter();
      const Value old_slot =
          (prog.pc == AppendProgram::Pc::CasSlot && prog.k >= 1 &&
           static_cast<std::size_t>(prog.k) <= bank_.capacity())
              ? bank_.read_slot(static_cast<std::size_t>(prog.k))
              : Value::null();
      const CasStepKind kind = execute_append_step(bank_, prog);
      const bool slot_won =
          kind == CasStepKind::CasSlot && prog.outcome == CasAppendOutcome::Success;
      if (slot_won) ++slot_successes_[static_cast<std::size_t>(prog.k)];
      schedule_.entries.push_back({prog.pid, kind});

      dfs();

      schedule_.entries.pop_back();
      if (slot_won) --slot_successes_[static_cast<std::size_t>(prog.k)];
      if (kind == CasStepKind::CasCounter) {
        detail::BankRestore::set_counter(bank_, old_counter);
      } else if (kind == CasStepKind::CasSlot) {
        detail::BankRestore::set_slot(
            bank_, static_cast<std::size_t>(snapshot.k), old_slot);
      }
      prog = snapshot;
    } else {
      reader_.cells[reader_.cursor] = bank_.read_slot(reader_.cursor + 1);
      ++reader_.cursor;
      schedule_.entries.push_back({reader_.pid, CasStepKind::ReadCell});

      dfs();

      schedule_.entries.pop_back();
      --reader_.cursor;
    }
  }

  // A designated crash must actually have fired; otherwise the same
  // execution is already produced by the pattern without that crash.
  bool pattern_realized() const {
    for (std::size_t i = 0; i < total_programs(); ++i) {
      if (crash_at_[i] == kNoCrash) continue;
      if (program_done(i)) return false;
    }
    return true;
  }

  void leaf() {
    if (!pattern_realized()) return;
    for (std::size_t i = 0; i < programs_.size(); ++i) {
      outcome_view_[i] = crash_at_[i] != kNoCrash ? CasAppendOutcome::Crashed
                                                  : programs_[i].outcome;
      k_view_[i] = programs_[i].k;
      steps_view_[i] = programs_[i].steps;
    }
    const bool reader_crashed =
        reader_spec_ && crash_at_[programs_.size()] != kNoCrash;
    InterleavingCase c{
        .schedule = schedule_,
        .outcomes = outcome_view_,
        .k_observed = k_view_,
        .steps_taken = steps_view_,
        .slot_successes = slot_successes_,
        .has_reader = reader_spec_.has_value(),
        .reader_crashed = reader_crashed,
        .reader_cells = std::span<const Value>(reader_.cells.data(), reader_.cursor),
        .bank = bank_,
    };
    ++count_;
    visit_(c);
  }

  AtomicRegisterBank bank_;
  std::vector<AppendProgram> programs_;
  std::optional<ReaderSpec> reader_spec_;
  ReadProgramState reader_;
  int max_crashes_ = 0;
  Visitor& visit_;

  std::vector<std::uint32_t> crash_at_;
  StepSchedule schedule_;
  std::vector<CasAppendOutcome> outcome_view_;
  std::vector<int> k_view_;
  std::vector<std::uint32_t> steps_view_;
  std::vector<std::uint32_t> slot_successes_;
  std::uint64_t count_ = 0;
};

}  // namespace detail

// Visits every total interleaving of the programs' shared steps (respecting
// each program's internal order) and every realizable crash augmentation
// with at most `max_crashes` crashes. With more than one program at least
// one always stays up. Returns the number of schedules visited. Throws
// TooLargeError for more than 3 append programs.
template <class Visitor>
std::uint64_t enumerate_interleavings(const AtomicRegisterBank& initial,
                                      std::span<const PendingAppend> appenders,
                                      std::optional<ReaderSpec> reader,
                                      int max_crashes, Visitor&& visit) {
  if (appenders.size() > 3) {
    throw TooLargeError("enumerate_interleavings: more than 3 append programs");
  }
  detail::InterleavingEnumerator<std::remove_reference_t<Visitor>> e(
      initial, appenders, reader, max_crashes, visit);
  return e.run();
}

}  // namespace warpcons

#include "warpcons/cas_impl.hpp"

#include <algorithm>
#include <string>

namespace warpcons {

const char* to_string(CasAppendOutcome o) {
  switch (o) {
    case CasAppendOutcome::Success: return "Append Success";
    case CasAppendOutcome::Failed: return "Append Failed";
    case CasAppendOutcome::LimitReached: return "Limit Reached";
    case CasAppendOutcome::Crashed: return "Crashed";
    case CasAppendOutcome::Incomplete: return "Incomplete";
  }
  return "?";
}

CasStepKind AppendProgram::next_step() const {
  switch (pc) {
    case Pc::ReadCounter: return CasStepKind::ReadCounter;
    case Pc::ReadSlot: return CasStepKind::ReadSlot;
    case Pc::CasCounter: return CasStepKind::CasCounter;
    case Pc::CasSlot: return CasStepKind::CasSlot;
    case Pc::Done: break;
  }
  throw ScheduleError("append program already complete");
}

CasStepKind execute_append_step(AtomicRegisterBank& bank, AppendProgram& prog) {
  const std::size_t n = bank.capacity();
  switch (prog.pc) {
    case AppendProgram::Pc::ReadCounter:
      prog.k = bank.read_counter();
      prog.pc = AppendProgram::Pc::ReadSlot;
      ++prog.steps;
      return CasStepKind::ReadCounter;

    case AppendProgram::Pc::ReadSlot:
      // Out-of-range positions read as null; the limit check is local and
      // rides with this shared step.
      prog.m = (prog.k >= 1 && static_cast<std::size_t>(prog.k) <= n)
                   ? bank.read_slot(static_cast<std::size_t>(prog.k))
                   : Value::null();
      ++prog.steps;
      if (static_cast<std::size_t>(prog.k) > n) {
        prog.outcome = CasAppendOutcome::LimitReached;
        prog.pc = AppendProgram::Pc::Done;
      } else {
        prog.pc = AppendProgram::Pc::CasCounter;
      }
      return CasStepKind::ReadSlot;

    case AppendProgram::Pc::CasCounter:
      bank.cas_counter(prog.k, prog.k + 1);
      prog.pc = AppendProgram::Pc::CasSlot;
      ++prog.steps;
      return CasStepKind::CasCounter;

    case AppendProgram::Pc::CasSlot: {
      const bool won = bank.cas_slot(static_cast<std::size_t>(prog.k),
                                     Value::null(), prog.val);
      prog.outcome = won ? CasAppendOutcome::Success : CasAppendOutcome::Failed;
      prog.pc = AppendProgram::Pc::Done;
      ++prog.steps;
      return CasStepKind::CasSlot;
    }

    case AppendProgram::Pc::Done:
      break;
  }
  throw ScheduleError("step on a completed append program");
}

std::vector<Value> read_impl(const AtomicRegisterBank& bank, std::size_t len) {
  if (len < 1 || len > bank.capacity()) {
    throw InvalidLengthError("read_impl: len " + std::to_string(len) +
                             " outside [1, " + std::to_string(bank.capacity()) +
                             "]");
  }
  std::vector<Value> out;
  out.reserve(len);
  for (std::size_t k = 1; k <= len; ++k) out.push_back(bank.read_slot(k));
  return out;
}

InterleavedRunResult run_append_interleaved(const AtomicRegisterBank& initial,
                                            std::span<const PendingAppend> appenders,
                                            std::optional<ReaderSpec> reader,
                                            const StepSchedule& schedule) {
  InterleavedRunResult result{initial, {}, {}, {}, std::nullopt, 0, false};

  std::vector<AppendProgram> programs;
  for (const auto& a : appenders) {
    programs.push_back(AppendProgram{.pid = a.pid, .val = a.val});
  }
  ReadProgramState rd;
  if (reader) {
    rd.pid = reader->pid;
    rd.len = reader->len;
    rd.cells.assign(rd.len, Value::null());
  }

  auto crash_limit = [&](ProcessId pid) -> std::uint32_t {
    auto it = schedule.crash_after.find(pid);
    return it == schedule.crash_after.end() ? 0xffffffffu : it->second;
  };

  for (const auto& entry : schedule.entries) {
    if (reader && entry.pid == rd.pid && entry.step == CasStepKind::ReadCell) {
      if (rd.done()) throw ScheduleError("reader stepped past its length");
      if (rd.cursor >= crash_limit(rd.pid)) {
        throw ScheduleError("schedule steps a crashed reader");
      }
      rd.cells[rd.cursor] = result.bank.read_slot(rd.cursor + 1);
      ++rd.cursor;
      continue;
    }
    auto prog = std::find_if(programs.begin(), programs.end(),
                             [&](const AppendProgram& p) { return p.pid == entry.pid; });
    if (prog == programs.end()) {
      throw ScheduleError("schedule names unknown pid " + std::to_string(entry.pid));
    }
    if (prog->done()) throw ScheduleError("schedule steps a completed program");
    if (prog->steps >= crash_limit(prog->pid)) {
      throw ScheduleError("schedule steps a crashed program");
    }
    if (prog->next_step() != entry.step) {
      throw ScheduleError("schedule violates program order for pid " +
                          std::to_string(entry.pid));
    }
    execute_append_step(result.bank, *prog);
  }

  for (auto& prog : programs) {
    const bool crashed = schedule.crash_after.count(prog.pid) != 0;
    if (crashed) {
      if (prog.steps != crash_limit(prog.pid) || prog.done()) {
        throw ScheduleError("crash point of pid " + std::to_string(prog.pid) +
                            " not realized by the schedule");
      }
      result.outcomes.push_back(CasAppendOutcome::Crashed);
    } else {
      if (!prog.done()) {
        throw ScheduleError("schedule leaves non-crashed pid " +
                            std::to_string(prog.pid) + " unfinished");
      }
      result.outcomes.push_back(prog.outcome);
    }
    result.k_observed.push_back(prog.k);
    result.steps_taken.push_back(prog.steps);
  }

  if (reader) {
    result.reader_crashed = schedule.crash_after.count(rd.pid) != 0;
    if (result.reader_crashed) {
      if (rd.cursor != crash_limit(rd.pid)) {
        throw ScheduleError("reader crash point not realized by the schedule");
      }
    } else if (!rd.done()) {
      throw ScheduleError("schedule leaves the reader unfinished");
    }
    result.reader_steps = static_cast<std::uint32_t>(rd.cursor);
    rd.cells.resize(rd.cursor);
    result.reader_cells = std::move(rd.cells);
  }
  return result;
}

}  // namespace warpcons

#include <vector>

#include "doctest.h"
#include "warpcons/cas_impl.hpp"
#include "warpcons/errors.hpp"

using namespace warpcons;

namespace {

// Lock-step schedule: every program runs each shared step before anyone
// advances; slot-CAS order within the round is given explicitly.
StepSchedule lockstep_schedule(const std::vector<ProcessId>& pids,
                               const std::vector<ProcessId>& cas_slot_order) {
  StepSchedule s;
  for (ProcessId pid : pids) s.entries.push_back({pid, CasStepKind::ReadCounter});
  for (ProcessId pid : pids) s.entries.push_back({pid, CasStepKind::ReadSlot});
  for (ProcessId pid : pids) s.entries.push_back({pid, CasStepKind::CasCounter});
  for (ProcessId pid : cas_slot_order) s.entries.push_back({pid, CasStepKind::CasSlot});
  return s;
}

// Cross-checks a leaf of the enumeration against the abstract object rules.
void check_conformance(const InterleavingCase& c, std::size_t n) {
  for (std::size_t k = 1; k <= n; ++k) {
    REQUIRE(c.slot_successes[k] <= 1);
  }
  REQUIRE(c.bank.read_counter() >= 1);
  REQUIRE(c.bank.read_counter() <= static_cast<int>(n) + 1);

  for (std::size_t i = 0; i < c.outcomes.size(); ++i) {
    switch (c.outcomes[i]) {
      case CasAppendOutcome::Success:
        REQUIRE(c.steps_taken[i] == 4);
        REQUIRE(c.k_observed[i] <= static_cast<int>(n));
        break;
      case CasAppendOutcome::Failed:
        REQUIRE(c.steps_taken[i] == 4);
        REQUIRE(c.k_observed[i] <= static_cast<int>(n));
        break;
      case CasAppendOutcome::LimitReached:
        REQUIRE(c.steps_taken[i] == 2);
        REQUIRE(c.k_observed[i] > static_cast<int>(n));
        break;
      case CasAppendOutcome::Crashed:
        REQUIRE(c.steps_taken[i] < 4);
        break;
      case CasAppendOutcome::Incomplete:
        FAIL("incomplete outcome at a leaf");
    }
  }

  // A committed slot implies the counter moved past it.
  for (std::size_t k = 1; k <= n; ++k) {
    if (!c.bank.read_slot(k).is_null()) {
      REQUIRE(c.bank.read_counter() > static_cast<int>(k));
    }
  }

  // Reader cells are per-cell atomic: anything non-null equals the final
  // committed value of that slot.
  for (std::size_t j = 0; j < c.reader_cells.size(); ++j) {
    if (!c.reader_cells[j].is_null()) {
      REQUIRE(c.reader_cells[j] == c.bank.read_slot(j + 1));
    }
  }
}

}  // namespace

TEST_SUITE("cas_impl") {

TEST_CASE("cas on the counter") {
  AtomicRegisterBank bank(2);
  CHECK(bank.cas_counter(1, 2));
  CHECK(bank.read_counter() == 2);
  CHECK_FALSE(bank.cas_counter(1, 2));
  CHECK(bank.read_counter() == 2);
}

TEST_CASE("cas of null over null succeeds and leaves the slot null") {
  AtomicRegisterBank bank(2);
  CHECK(bank.cas_slot(1, Value::null(), Value::null()));
  CHECK(bank.read_slot(1).is_null());
  // The slot is still free: a later non-null value can claim it.
  CHECK(bank.cas_slot(1, Value::null(), Value::of(9)));
  CHECK(bank.read_slot(1) == Value::of(9));
}

TEST_CASE("lock-step pair: one success, one failure, counter advances once") {
  AtomicRegisterBank bank(2);
  const std::vector<PendingAppend> programs{{0, Value::of(5)}, {1, Value::of(7)}};
  const auto result = run_append_interleaved(
      bank, programs, std::nullopt, lockstep_schedule({0, 1}, {0, 1}));
  CHECK(result.outcomes[0] == CasAppendOutcome::Success);
  CHECK(result.outcomes[1] == CasAppendOutcome::Failed);
  CHECK(result.bank.read_counter() == 2);
  CHECK(result.bank.read_slot(1) == Value::of(5));
  CHECK(result.bank.read_slot(2).is_null());
}

TEST_CASE("counter winner and slot winner can differ") {
  AtomicRegisterBank bank(2);
  const std::vector<PendingAppend> programs{{0, Value::of(5)}, {1, Value::of(7)}};
  const auto result = run_append_interleaved(
      bank, programs, std::nullopt, lockstep_schedule({0, 1}, {1, 0}));
  CHECK(result.outcomes[0] == CasAppendOutcome::Failed);
  CHECK(result.outcomes[1] == CasAppendOutcome::Success);
  CHECK(result.bank.read_slot(1) == Value::of(7));
  CHECK(result.bank.read_counter() == 2);
}

TEST_CASE("a stale slot read cannot displace a committed value") {
  AtomicRegisterBank bank(2);
  const std::vector<PendingAppend> programs{{1, Value::of(11)}, {2, Value::of(22)}};
  StepSchedule s;
  s.entries = {{1, CasStepKind::ReadCounter}, {2, CasStepKind::ReadCounter},
               {2, CasStepKind::ReadSlot},    {2, CasStepKind::CasCounter},
               {2, CasStepKind::CasSlot},     {1, CasStepKind::ReadSlot},
               {1, CasStepKind::CasCounter},  {1, CasStepKind::CasSlot}};
  const auto result = run_append_interleaved(bank, programs, std::nullopt, s);
  CHECK(result.outcomes[1] == CasAppendOutcome::Success);
  CHECK(result.outcomes[0] == CasAppendOutcome::Failed);
  CHECK(result.bank.read_slot(1) == Value::of(22));
  CHECK(result.bank.read_counter() == 2);
}

TEST_CASE("crash between the two cas steps leaves a permanent hole") {
  AtomicRegisterBank bank(3);
  const std::vector<PendingAppend> programs{{1, Value::of(7)}, {2, Value::of(8)}};
  StepSchedule s;
  s.entries = {{1, CasStepKind::ReadCounter}, {1, CasStepKind::ReadSlot},
               {1, CasStepKind::CasCounter},  // pid 1 halts here
               {2, CasStepKind::ReadCounter}, {2, CasStepKind::ReadSlot},
               {2, CasStepKind::CasCounter},  {2, CasStepKind::CasSlot}};
  s.crash_after[1] = 3;
  const auto result = run_append_interleaved(bank, programs, std::nullopt, s);
  CHECK(result.outcomes[0] == CasAppendOutcome::Crashed);
  CHECK(result.outcomes[1] == CasAppendOutcome::Success);
  CHECK(result.bank.read_counter() == 3);
  CHECK(result.bank.read_slot(1).is_null());   // the hole
  CHECK(result.bank.read_slot(2) == Value::of(8));
}

TEST_CASE("arriving at a full list reports limit reached without writing") {
  AtomicRegisterBank bank(1);
  REQUIRE(bank.cas_slot(1, Value::null(), Value::of(5)));
  REQUIRE(bank.cas_counter(1, 2));

  const std::vector<PendingAppend> programs{{3, Value::of(6)}};
  StepSchedule s;
  s.entries = {{3, CasStepKind::ReadCounter}, {3, CasStepKind::ReadSlot}};
  const auto result = run_append_interleaved(bank, programs, std::nullopt, s);
  CHECK(result.outcomes[0] == CasAppendOutcome::LimitReached);
  CHECK(result.steps_taken[0] == 2);
  CHECK(result.bank.read_counter() == 2);
  CHECK(result.bank.read_slot(1) == Value::of(5));
}

TEST_CASE("read_impl") {
  AtomicRegisterBank bank(3);
  REQUIRE(bank.cas_slot(1, Value::null(), Value::of(7)));
  CHECK(read_impl(bank, 1) == std::vector<Value>{Value::of(7)});
  CHECK(read_impl(AtomicRegisterBank(3), 3) ==
        std::vector<Value>{Value::null(), Value::null(), Value::null()});
  CHECK_THROWS_AS(read_impl(bank, 0), InvalidLengthError);
  CHECK_THROWS_AS(read_impl(bank, 4), InvalidLengthError);
}

TEST_CASE("schedule validation") {
  AtomicRegisterBank bank(2);
  const std::vector<PendingAppend> programs{{0, Value::of(5)}};
  StepSchedule out_of_order;
  out_of_order.entries = {{0, CasStepKind::CasSlot}};
  CHECK_THROWS_AS(
      run_append_interleaved(bank, programs, std::nullopt, out_of_order),
      ScheduleError);

  StepSchedule incomplete;
  incomplete.entries = {{0, CasStepKind::ReadCounter}};
  CHECK_THROWS_AS(
      run_append_interleaved(bank, programs, std::nullopt, incomplete),
      ScheduleError);
}

TEST_CASE("enumeration counts") {
  const AtomicRegisterBank bank(4);
  auto count = [&](std::vector<PendingAppend> programs, int crashes) {
    return enumerate_interleavings(bank, programs, std::nullopt, crashes,
                                   [](const InterleavingCase&) {});
  };
  CHECK(count({{0, Value::of(1)}}, 0) == 1);
  CHECK(count({{0, Value::of(1)}}, 1) == 5);  // 4 crash points + completion
  CHECK(count({{0, Value::of(1)}, {1, Value::of(2)}}, 0) == 70);  // C(8,4)
  CHECK(count({{0, Value::of(1)}, {1, Value::of(2)}, {2, Value::of(3)}}, 0) ==
        34650);  // 12! / (4!)^3
}

TEST_CASE("more than three append programs is refused") {
  const AtomicRegisterBank bank(8);
  const std::vector<PendingAppend> programs{
      {0, Value::of(1)}, {1, Value::of(2)}, {2, Value::of(3)}, {3, Value::of(4)}};
  CHECK_THROWS_AS(enumerate_interleavings(bank, programs, std::nullopt, 0,
                                          [](const InterleavingCase&) {}),
                  TooLargeError);
}

TEST_CASE("conformance over every interleaving of two appends and a reader") {
  const AtomicRegisterBank bank(2);
  const std::vector<PendingAppend> programs{{0, Value::of(5)}, {1, Value::of(7)}};
  std::uint64_t leaves = enumerate_interleavings(
      bank, programs, ReaderSpec{9, 2}, 2,
      [&](const InterleavingCase& c) { check_conformance(c, 2); });
  CHECK(leaves > 3150);  // crash-free interleavings alone: 10!/(4!4!2!)
}

TEST_CASE("crash-free appends with distinct values lose no slots") {
  const AtomicRegisterBank bank(3);
  const std::vector<PendingAppend> programs{{0, Value::of(5)}, {1, Value::of(7)}};
  enumerate_interleavings(
      bank, programs, std::nullopt, 0, [&](const InterleavingCase& c) {
        int committed = 0;
        for (std::size_t k = 1; k <= 3; ++k) {
          if (!c.bank.read_slot(k).is_null()) ++committed;
        }
        REQUIRE(committed == c.bank.read_counter() - 1);
      });
}

TEST_CASE("every enumerated schedule replays identically") {
  const AtomicRegisterBank bank(2);
  const std::vector<PendingAppend> programs{{0, Value::of(5)}, {1, Value::of(7)}};
  enumerate_interleavings(
      bank, programs, ReaderSpec{9, 2}, 1, [&](const InterleavingCase& c) {
        const auto replay =
            run_append_interleaved(bank, programs, ReaderSpec{9, 2}, c.schedule);
        REQUIRE(replay.bank == c.bank);
        for (std::size_t i = 0; i < programs.size(); ++i) {
          REQUIRE(replay.outcomes[i] == c.outcomes[i]);
          REQUIRE(replay.steps_taken[i] == c.steps_taken[i]);
        }
        REQUIRE(replay.reader_steps == c.reader_cells.size());
        for (std::size_t j = 0; j < c.reader_cells.size(); ++j) {
          REQUIRE((*replay.reader_cells)[j] == c.reader_cells[j]);
        }
      });
}

TEST_CASE("a read of a fresh commit implies earlier commits are visible") {
  // Slot 1 is committed before the appender starts; the appender commits
  // slot 2. A reader that sees the new value at slot 2 must also see the
  // value committed at slot 1.
  AtomicRegisterBank bank(3);
  REQUIRE(bank.cas_slot(1, Value::null(), Value::of(7)));
  REQUIRE(bank.cas_counter(1, 2));

  const std::vector<PendingAppend> programs{{0, Value::of(9)}};
  enumerate_interleavings(
      bank, programs, ReaderSpec{5, 2}, 0, [&](const InterleavingCase& c) {
        REQUIRE(c.reader_cells.size() == 2);
        if (c.reader_cells[1] == Value::of(9)) {
          REQUIRE(c.reader_cells[0] == Value::of(7));
        }
      });
}

}  // TEST_SUITE

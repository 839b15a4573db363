#include "warpcons/engine.hpp"

#include <algorithm>
#include <string>

#include "warpcons/errors.hpp"

namespace warpcons {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

Engine::Engine(ValidatedConfig cfg)
    : cfg_(std::move(cfg)),
      list_(cfg_.n()),
      adversary_(CompiledAdversary::compile(cfg_.raw(), cfg_.correct_values())) {
  const std::uint32_t target = cfg_.warp_count();
  for (ProcessId pid = 0; pid < cfg_.n(); ++pid) {
    ProcessState st;
    st.pid = pid;
    st.proposal = cfg_.is_byzantine(pid) ? Value::null() : cfg_.proposal_of(pid);
    st.read_target = target;
    procs_.push_back(std::move(st));
  }
  trace_.config = cfg_.raw();
  trace_.decisions.assign(cfg_.n(), std::nullopt);
  trace_.halted_all_null.assign(cfg_.n(), false);
}

bool Engine::all_correct_done() const {
  for (const auto& st : procs_) {
    if (cfg_.is_byzantine(st.pid)) continue;
    if (!st.done()) return false;
  }
  return true;
}

ProcessId Engine::pick_winner(PhaseIndex phase,
                              const std::vector<AppendAttempt>& attempts) {
  if (attempts.size() == 1) return attempts.front().pid;

  ArbitrationChoice choice;
  for (const auto& a : attempts) choice.attempts.push_back(a.pid);

  const ContentionPolicy& policy = cfg_.raw().arbitration;
  std::uint32_t idx = 0;
  switch (policy.kind) {
    case ContentionPolicy::Kind::LowestPid:
      idx = 0;
      break;
    case ContentionPolicy::Kind::AdversarialByzantineWins: {
      // Faulty attempt wins when present, ties to the lowest faulty pid;
      // otherwise the lowest pid.
      idx = 0;
      for (std::uint32_t i = 0; i < attempts.size(); ++i) {
        if (cfg_.is_byzantine(attempts[i].pid)) {
          idx = i;
          break;
        }
      }
      break;
    }
    case ContentionPolicy::Kind::SeededUniform:
      idx = static_cast<std::uint32_t>(
          splitmix64(cfg_.raw().seed ^ (phase + 1)) % attempts.size());
      break;
    case ContentionPolicy::Kind::ScriptedWinners: {
      idx = 0;
      if (scripted_consumed_ < policy.winners.size()) {
        const ProcessId want = policy.winners[scripted_consumed_];
        auto it = std::find(choice.attempts.begin(), choice.attempts.end(), want);
        if (it == choice.attempts.end()) {
          throw ArbitrationError("scripted winner " + std::to_string(want) +
                                 " did not attempt an append in phase " +
                                 std::to_string(phase));
        }
        idx = static_cast<std::uint32_t>(it - choice.attempts.begin());
      }
      ++scripted_consumed_;
      break;
    }
  }

  choice.chosen = idx;
  arbitration_log_.push_back(std::move(choice));
  return attempts[idx].pid;
}

const PhaseRecord& Engine::execute_phase() {
  PhaseRecord record;
  record.phase = phase_;
  record.warp = schedule_warp(phase_, cfg_.warp_count());

  std::vector<AppendAttempt> attempts;
  std::vector<ProcessId> acted;
  // Lock-step tracking over the warp's correct members.
  std::optional<std::pair<Action::Kind, std::uint32_t>> correct_shape;

  for (ProcessId pid : cfg_.warp_members(record.warp)) {
    ProcessState& st = procs_[pid];
    Action action;
    if (cfg_.is_byzantine(pid)) {
      if (byz_override_) {
        AdversaryView view{list_, phase_};
        action = (*byz_override_)(pid, st.access_count, view);
      } else {
        action = adversary_.action(pid, st.access_count);
      }
      if (action.kind != Action::Kind::Append &&
          action.kind != Action::Kind::Noop) {
        throw IllegalActionError("Byzantine pid " + std::to_string(pid) +
                                 " emitted an action outside {append, noop}");
      }
    } else {
      if (st.done()) continue;  // no pending work; not an access
      action = protocol_step(st);
      if (!correct_shape) {
        correct_shape = {action.kind, st.access_count};
      } else if (correct_shape->first != action.kind ||
                 correct_shape->second != st.access_count) {
        throw std::logic_error("lock-step violation: correct members of warp " +
                               std::to_string(record.warp) +
                               " diverged in phase " + std::to_string(phase_));
      }
    }

    ActionRecord ar;
    ar.pid = pid;
    ar.kind = action.kind;
    ar.access = st.access_count;
    switch (action.kind) {
      case Action::Kind::Append:
        ar.value = action.value;
        attempts.push_back(AppendAttempt{pid, action.value});
        st.phase_of_append = st.phase_of_append ? st.phase_of_append
                                                : std::optional<PhaseIndex>(phase_);
        break;
      case Action::Kind::ReadChunk:
      case Action::Kind::Decide:
      case Action::Kind::Noop:
        break;
    }
    record.actions.push_back(std::move(ar));
    acted.push_back(pid);
    st.access_count += 1;
  }

  // Appends resolve first; read chunks observe the post-append list.
  if (!attempts.empty()) {
    const ProcessId winner = pick_winner(phase_, attempts);
    PhaseAppendOutcome outcome = resolve_phase_appends(list_, attempts, winner);
    list_ = std::move(outcome.state);
    for (const auto& [pid, res] : outcome.results) {
      for (auto& ar : record.actions) {
        if (ar.pid == pid && ar.kind == Action::Kind::Append){
          ar.append_result = res;
        }
      }
    }
  }

  for (auto& ar : record.actions) {
    ProcessState& st = procs_[ar.pid];
    if (ar.kind == Action::Kind::ReadChunk) {
      const std::uint32_t have = static_cast<std::uint32_t>(st.read_cursor.size());
      const std::uint32_t chunk = std::min(cfg_.r(), st.read_target - have);
      ar.read_from = have;
      for (std::uint32_t i = 0; i < chunk; ++i) {
        const Value v = list_.slots[have + i];  // uncommitted slots read null
        st.read_cursor.push_back(v);
        ar.read_values.push_back(v);
      }
    }
    // A process decides in the phase where its read completes (or, for the
    // degenerate single-value case, the phase protocol_step said Decide).
    const bool cursor_full = st.read_cursor.size() >= st.read_target;
    if (!cfg_.is_byzantine(ar.pid) && !st.done() && cursor_full &&
        (ar.kind == Action::Kind::ReadChunk || ar.kind == Action::Kind::Decide)) {
      try {
        const Value d = mode(std::span<const Value>(st.read_cursor));
        st.decision = {d, phase_};
        ar.decided = d;
      } catch (const AllNullError&) {
        st.halted_all_null = true;
      }
    }
  }

  record.list_len_after = list_.appended;
  trace_.phases.push_back(std::move(record));
  phase_ += 1;
  return trace_.phases.back();
}

Trace Engine::run() {
  const std::uint64_t bound =
      decision_phase_bound(cfg_.n(), cfg_.p(), cfg_.r());
  const std::uint64_t hard_stop = 4 * (bound + 1);
  while (!all_correct_done()) {
    if (phase_ > hard_stop) {
      throw NonTerminationError("run exceeded " + std::to_string(hard_stop) +
                                " phases (bound " + std::to_string(bound) + ")");
    }
    execute_phase();
  }
  for (const auto& st : procs_) {
    if (st.decision) {
      trace_.decisions[st.pid] = DecisionRecord{st.decision->first, st.decision->second};
    }
    trace_.halted_all_null[st.pid] = st.halted_all_null;
  }
  trace_.final_list = list_;
  return trace_;
}

Trace run_to_completion(const ValidatedConfig& cfg) {
  Engine engine(cfg);
  return engine.run();
}

}  // namespace warpcons

#include "warpcons/adversary.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "warpcons/errors.hpp"

namespace warpcons {

namespace {

bool in_correct_values(const std::vector<std::uint32_t>& vc, Value v) {
  return !v.is_null() &&
         std::binary_search(vc.begin(), vc.end(), v.payload());
}

// Scripted entries become an access -> value plan; two actions for the same
// access would need more than one phase's budget.
std::map<std::uint32_t, Value> plan_from_script(
    ProcessId pid, const std::vector<ScriptedAction>& script, bool may_abstain) {
  std::map<std::uint32_t, Value> plan;
  std::set<std::uint32_t> seen;
  for (const auto& entry : script) {
    if (!seen.insert(entry.access).second) {
      throw BudgetViolationError("scripted strategy: pid " + std::to_string(pid) +
                                 " has two actions at access " +
                                 std::to_string(entry.access));
    }
    if (!entry.append) continue;
    if (!may_abstain && entry.access > 0) {
      throw InvalidParameterError(
          "scripted strategy: pid " + std::to_string(pid) +
          " appends after its first access, which requires byzantine_may_abstain");
    }
    plan[entry.access] = entry.value;
  }
  return plan;
}

std::map<std::uint32_t, Value> plan_from_pid_strategy(ProcessId pid,
                                                      const PidStrategy& s,
                                                      bool may_abstain) {
  switch (s.kind) {
    case PidStrategy::Kind::NullProposer:
      return {{0u, Value::null()}};
    case PidStrategy::Kind::FixedValue:
      return {{0u, s.value}};
    case PidStrategy::Kind::AbstainThenAppend:
      return {{may_abstain ? s.offset : 0u, s.value}};
    case PidStrategy::Kind::Scripted:
      return plan_from_script(pid, s.script, may_abstain);
  }
  return {};
}

}  // namespace

CompiledAdversary CompiledAdversary::compile(
    const SystemConfig& cfg, const std::vector<std::uint32_t>& correct_values) {
  CompiledAdversary out;
  if (cfg.byzantine_ids.empty()) return out;

  const ByzantineStrategy& s = cfg.adversary;
  const bool abstain_ok = cfg.byzantine_may_abstain;

  auto require_byzantine = [&](ProcessId pid, const char* where) {
    if (cfg.byzantine_ids.count(pid) == 0) {
      throw InvalidParameterError(std::string(where) + ": pid " +
                                  std::to_string(pid) + " is not Byzantine");
    }
  };

  switch (s.kind) {
    case ByzantineStrategy::Kind::NullProposer:
      for (ProcessId pid : cfg.byzantine_ids) {
        out.appends_[pid] = {{0u, Value::null()}};
      }
      break;

    case ByzantineStrategy::Kind::DistinctValues: {
      std::set<std::uint32_t> used;
      for (const auto& [pid, v] : s.assignment) {
        require_byzantine(pid, "strategy.assignment");
        if (!v.is_null() && !used.insert(v.payload()).second) {
          throw InvalidParameterError(
              "strategy.assignment: distinct-values repeats value " +
              to_string(v));
        }
        out.appends_[pid] = {{0u, v}};
      }
      for (ProcessId pid : cfg.byzantine_ids) {
        if (!s.assignment.count(pid)) {
          throw InvalidParameterError("strategy.assignment: missing pid " +
                                      std::to_string(pid));
        }
      }
      break;
    }

    case ByzantineStrategy::Kind::Collude:
      if (in_correct_values(correct_values, s.value)) {
        throw InvalidParameterError("strategy.value: collusion value " +
                                    to_string(s.value) +
                                    " is proposed by a correct process");
      }
      for (ProcessId pid : cfg.byzantine_ids) {
        out.appends_[pid] = {{0u, s.value}};
      }
      break;

    case ByzantineStrategy::Kind::EchoCorrect:
      if (!in_correct_values(correct_values, s.value)) {
        throw InvalidParameterError("strategy.target: echo target " +
                                    to_string(s.value) +
                                    " is not proposed by any correct process");
      }
      for (ProcessId pid : cfg.byzantine_ids) {
        out.appends_[pid] = {{0u, s.value}};
      }
      break;

    case ByzantineStrategy::Kind::Mixed:
      for (const auto& [pid, sub] : s.members) {
        require_byzantine(pid, "strategy.members");
        out.appends_[pid] = plan_from_pid_strategy(pid, sub, abstain_ok);
      }
      break;

    case ByzantineStrategy::Kind::AbstainThenAppend:
      for (ProcessId pid : cfg.byzantine_ids) {
        out.appends_[pid] = {{abstain_ok ? s.offset : 0u, s.value}};
      }
      break;

    case ByzantineStrategy::Kind::Scripted:
      for (const auto& [pid, script] : s.scripts) {
        require_byzantine(pid, "strategy.actions");
        out.appends_[pid] = plan_from_script(pid, script, abstain_ok);
      }
      break;
  }
  return out;
}

Action CompiledAdversary::action(ProcessId pid, std::uint32_t access) const {
  auto it = appends_.find(pid);
  if (it == appends_.end()) return Action{Action::Kind::Noop, Value::null()};
  auto at = it->second.find(access);
  if (at == it->second.end()) return Action{Action::Kind::Noop, Value::null()};
  return Action{Action::Kind::Append, at->second};
}

Action byzantine_action(const ValidatedConfig& cfg, ProcessId pid,
                        std::uint32_t access, const AdversaryView&) {
  if (!cfg.is_byzantine(pid)) {
    throw IllegalActionError("byzantine_action: pid " + std::to_string(pid) +
                             " is correct");
  }
  auto compiled = CompiledAdversary::compile(cfg.raw(), cfg.correct_values());
  return compiled.action(pid, access);
}

std::uint64_t worst_case_strategy_count(const ValidatedConfig& cfg) {
  const std::uint64_t options = cfg.raw().value_domain.size() + 1;  // + null
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < cfg.f(); ++i) count *= options;
  if (cfg.raw().byzantine_may_abstain && cfg.f() > 0) count *= 2;
  return count;
}

void worst_case_strategy_space(
    const ValidatedConfig& cfg, std::uint64_t cap,
    const std::function<void(const ByzantineStrategy&)>& yield) {
  if (worst_case_strategy_count(cfg) > cap) {
    throw TooLargeError("worst_case_strategy_space: " +
                        std::to_string(worst_case_strategy_count(cfg)) +
                        " strategies exceed cap " + std::to_string(cap));
  }

  std::vector<ProcessId> byz(cfg.raw().byzantine_ids.begin(),
                             cfg.raw().byzantine_ids.end());
  if (byz.empty()) {
    yield(ByzantineStrategy{});  // the single empty strategy
    return;
  }

  const auto& domain = cfg.raw().value_domain;
  const std::size_t options = domain.size() + 1;  // index 0 = null
  std::vector<std::size_t> pick(byz.size(), 0);

  auto emit = [&](bool late) {
    ByzantineStrategy s;
    s.kind = ByzantineStrategy::Kind::Mixed;
    for (std::size_t i = 0; i < byz.size(); ++i) {
      PidStrategy ps;
      const Value v =
          pick[i] == 0 ? Value::null() : Value::of(domain[pick[i] - 1]);
      if (late) {
        ps.kind = PidStrategy::Kind::AbstainThenAppend;
        ps.value = v;
        ps.offset = 1;
      } else if (v.is_null()) {
        ps.kind = PidStrategy::Kind::NullProposer;
      } else {
        ps.kind = PidStrategy::Kind::FixedValue;
        ps.value = v;
      }
      s.members[byz[i]] = ps;
    }
    yield(s);
  };

  for (;;) {
    emit(false);
    if (cfg.raw().byzantine_may_abstain) emit(true);
    std::size_t i = 0;
    while (i < pick.size()) {
      if (++pick[i] < options) break;
      pick[i] = 0;
      ++i;
    }
    if (i == pick.size()) break;
  }
}

void validate_crash_plan(const CrashPlan& plan,
                         const std::vector<ProcessId>& all_pids) {
  std::size_t crashed = 0;
  for (const auto& [pid, _] : plan.halt_after_steps) {
    if (std::find(all_pids.begin(), all_pids.end(), pid) == all_pids.end()) {
      throw InvalidParameterError("crash plan names unknown pid " +
                                  std::to_string(pid));
    }
    ++crashed;
  }
  if (!all_pids.empty() && crashed >= all_pids.size()) {
    throw InvalidParameterError("crash plan must leave at least one process up");
  }
}

}  // namespace warpcons

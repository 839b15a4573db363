#include "warpcons/verifier.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "warpcons/errors.hpp"

namespace warpcons {

const char* to_string(Property p) {
  switch (p) {
    case Property::Agreement: return "agreement";
    case Property::CommonValidity: return "common-validity";
    case Property::StrongValidity: return "strong-validity";
    case Property::Termination: return "termination";
  }
  return "?";
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::NotApplicable: return "not-applicable";
  }
  return "?";
}

const char* to_string(FMode m) {
  switch (m) {
    case FMode::BelowBound: return "below-bound";
    case FMode::AtBound: return "at-bound";
    case FMode::AboveBound: return "above-bound";
  }
  return "?";
}

namespace {

// Decisions of correct processes; throws when one is missing.
std::vector<std::pair<ProcessId, Value>> correct_decisions(
    const ValidatedConfig& cfg, const Trace& trace) {
  std::vector<std::pair<ProcessId, Value>> out;
  for (ProcessId pid = 0; pid < cfg.n(); ++pid) {
    if (cfg.is_byzantine(pid)) continue;
    if (!trace.decisions[pid].has_value()) {
      throw IncompleteTraceError("correct pid " + std::to_string(pid) +
                                 " has no decision");
    }
    out.emplace_back(pid, trace.decisions[pid]->value);
  }
  return out;
}

bool trace_complete(const ValidatedConfig& cfg, const Trace& trace) {
  for (ProcessId pid = 0; pid < cfg.n(); ++pid) {
    if (cfg.is_byzantine(pid)) continue;
    if (!trace.decisions[pid].has_value()) return false;
  }
  return true;
}

}  // namespace

Verdict check_agreement(const ValidatedConfig& cfg, const Trace& trace) {
  const auto decisions = correct_decisions(cfg, trace);
  Verdict v{Property::Agreement, Outcome::Pass, ""};
  for (const auto& [pid, value] : decisions) {
    if (value != decisions.front().second) {
      v.outcome = Outcome::Fail;
      v.detail = "pid " + std::to_string(decisions.front().first) + " decided " +
                 to_string(decisions.front().second) + ", pid " +
                 std::to_string(pid) + " decided " + to_string(value);
      return v;
    }
  }
  return v;
}

Verdict check_common_validity(const ValidatedConfig& cfg, const Trace& trace) {
  Verdict v{Property::CommonValidity, Outcome::NotApplicable, ""};
  if (cfg.correct_values().size() != 1) return v;
  const auto decisions = correct_decisions(cfg, trace);
  const Value expected = Value::of(cfg.correct_values().front());
  v.outcome = Outcome::Pass;
  for (const auto& [pid, value] : decisions) {
    if (value != expected) {
      v.outcome = Outcome::Fail;
      v.detail = "pid " + std::to_string(pid) + " decided " + to_string(value) +
                 " but every correct process proposed " + to_string(expected);
      return v;
    }
  }
  return v;
}

Verdict check_strong_validity(const ValidatedConfig& cfg, const Trace& trace) {
  const auto decisions = correct_decisions(cfg, trace);
  Verdict v{Property::StrongValidity, Outcome::Pass, ""};
  const auto& vc = cfg.correct_values();
  for (const auto& [pid, value] : decisions) {
    const bool ok = !value.is_null() &&
                    std::binary_search(vc.begin(), vc.end(), value.payload());
    if (!ok) {
      v.outcome = Outcome::Fail;
      v.detail = "pid " + std::to_string(pid) + " decided " + to_string(value) +
                 ", which no correct process proposed";
      return v;
    }
  }
  return v;
}

Verdict check_termination(const ValidatedConfig& cfg, const Trace& trace) {
  Verdict v{Property::Termination, Outcome::Pass, ""};
  const std::uint64_t w = cfg.warp_count();
  const std::uint64_t read_rounds = ceil_div(w, cfg.r());
  const std::uint64_t bound = decision_phase_bound(cfg.n(), cfg.p(), cfg.r());

  for (ProcessId pid = 0; pid < cfg.n(); ++pid) {
    if (cfg.is_byzantine(pid)) continue;
    if (!trace.decisions[pid].has_value()) {
      v.outcome = Outcome::Fail;
      v.detail = "correct pid " + std::to_string(pid) + " never decided";
      return v;
    }
    const PhaseIndex got = trace.decisions[pid]->phase;
    if (cfg.raw().byzantine_may_abstain) {
      if (got > bound) {
        v.outcome = Outcome::Fail;
        v.detail = "pid " + std::to_string(pid) + " decided at phase " +
                   std::to_string(got) + " beyond bound " + std::to_string(bound);
        return v;
      }
    } else {
      // Deterministic RR schedule: warp w's correct processes decide at
      // exactly w + W * ceil(W / r); the module-level bound is this value
      // for the last warp.
      const PhaseIndex expected = warp_of(pid, cfg.p()) + w * read_rounds;
      if (got != expected) {
        v.outcome = Outcome::Fail;
        v.detail = "pid " + std::to_string(pid) + " decided at phase " +
                   std::to_string(got) + ", expected exactly " +
                   std::to_string(expected);
        return v;
      }
    }
  }
  return v;
}

std::vector<Verdict> check_all(const ValidatedConfig& cfg, const Trace& trace) {
  std::vector<Verdict> out;
  if (trace_complete(cfg, trace)) {
    out.push_back(check_agreement(cfg, trace));
    out.push_back(check_common_validity(cfg, trace));
    out.push_back(check_strong_validity(cfg, trace));
    out.push_back(check_termination(cfg, trace));
  } else {
    out.push_back({Property::Agreement, Outcome::NotApplicable, "incomplete trace"});
    out.push_back({Property::CommonValidity, Outcome::NotApplicable, "incomplete trace"});
    out.push_back({Property::StrongValidity, Outcome::NotApplicable, "incomplete trace"});
    out.push_back(check_termination(cfg, trace));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Arbitration exploration.
// ---------------------------------------------------------------------------

std::uint64_t for_each_arbitration(
    const SystemConfig& base,
    const std::function<void(const ValidatedConfig&, const Trace&)>& on_run) {
  std::vector<ProcessId> winners;
  std::uint64_t runs = 0;
  for (;;) {
    SystemConfig cfg = base;
    cfg.arbitration.kind = ContentionPolicy::Kind::ScriptedWinners;
    cfg.arbitration.winners = winners;
    ValidatedConfig validated = validate_config(cfg);
    Engine engine(validated);
    Trace trace = engine.run();
    ++runs;
    on_run(validated, trace);

    // Odometer over the choice points this run actually hit.
    const auto& log = engine.arbitration_log();
    std::ptrdiff_t k = static_cast<std::ptrdiff_t>(log.size()) - 1;
    while (k >= 0 && log[k].chosen + 1 >= log[k].attempts.size()) --k;
    if (k < 0) return runs;
    winners.clear();
    for (std::ptrdiff_t i = 0; i < k; ++i) {
      winners.push_back(log[i].attempts[log[i].chosen]);
    }
    winners.push_back(log[k].attempts[log[k].chosen + 1]);
  }
}

// ---------------------------------------------------------------------------
// Space enumeration.
// ---------------------------------------------------------------------------

namespace {

struct SpaceConfig {
  std::uint32_t n, p, r, f;
  std::vector<ProcessId> byz;                 // ascending
  std::vector<std::uint32_t> proposal_values; // per correct pid, ascending pid
  std::uint32_t vc_size;
};

// Combinations of [0, n) taken f at a time, in lexicographic order.
template <class Fn>
void for_each_placement(std::uint32_t n, std::uint32_t f, Fn&& fn) {
  std::vector<ProcessId> idx(f);
  for (std::uint32_t i = 0; i < f; ++i) idx[i] = i;
  if (f == 0) {
    fn(idx);
    return;
  }
  if (f > n) return;
  for (;;) {
    fn(idx);
    std::int64_t i = static_cast<std::int64_t>(f) - 1;
    while (i >= 0 && idx[i] == n - f + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < f; ++j) {
      idx[j] = idx[j - 1] + 1;
    }
  }
}

// Proposal assignments for m correct processes over the domain. Canonical
// form quotients by value relabeling (restricted growth strings): sound here
// because within the resilience bound the mode's arg-max set is always a
// subset of V_c, so pass/fail verdicts are label-invariant. Above the bound
// ties can include the faulty value and the smallest-value tie break makes
// verdicts label-sensitive, so the full space is enumerated there.
template <class Fn>
void for_each_assignment(std::size_t m, std::size_t domain_size, bool canonical,
                         Fn&& fn) {
  std::vector<std::uint32_t> digits(m, 0);
  auto max_prefix = [&](std::size_t upto) {
    std::uint32_t hi = 0;
    for (std::size_t i = 0; i < upto; ++i) hi = std::max(hi, digits[i] + 1);
    return hi;
  };
  for (;;) {
    fn(digits);
    std::size_t i = m;
    for (;;) {
      if (i == 0) return;
      --i;
      const std::uint32_t cap = canonical
          ? std::min<std::uint32_t>(static_cast<std::uint32_t>(domain_size) - 1,
                                    max_prefix(i))
          : static_cast<std::uint32_t>(domain_size) - 1;
      if (digits[i] < cap) {
        ++digits[i];
        for (std::size_t j = i + 1; j < m; ++j) digits[j] = 0;
        break;
      }
    }
  }
}

template <class Fn>
void for_each_space_config(const CheckSpace& space, Fn&& fn) {
  const bool canonical = space.f_mode != FMode::AboveBound;
  for (std::uint32_t n : space.ns) {
    for (std::uint32_t p : space.ps) {
      if (p > n) continue;
      for (std::uint32_t r : space.rs) {
        if (r > n) continue;
        const std::uint32_t f_hi = space.f_mode == FMode::AboveBound
                                       ? resilience_limit(n, p, 1) + 1
                                       : resilience_limit(n, p, 1);
        for (std::uint32_t f = 0; f <= f_hi && f < n; ++f) {
          if (space.f_mode == FMode::AboveBound && f == 0) continue;
          for_each_placement(n, f, [&](const std::vector<ProcessId>& byz) {
            const std::size_t m = n - f;
            for_each_assignment(
                m, space.domain.size(), canonical,
                [&](const std::vector<std::uint32_t>& digits) {
                  std::uint32_t vc_size = 0;
                  {
                    std::set<std::uint32_t> distinct(digits.begin(), digits.end());
                    vc_size = static_cast<std::uint32_t>(distinct.size());
                  }
                  const std::uint32_t limit = resilience_limit(n, p, vc_size);
                  const bool want =
                      (space.f_mode == FMode::BelowBound && f <= limit) ||
                      (space.f_mode == FMode::AtBound && f == limit) ||
                      (space.f_mode == FMode::AboveBound && f == limit + 1);
                  if (!want) return;
                  SpaceConfig sc{n, p, r, f, byz, {}, vc_size};
                  sc.proposal_values.reserve(m);
                  for (std::uint32_t d : digits) {
                    sc.proposal_values.push_back(space.domain[d]);
                  }
                  fn(sc);
                });
          });
        }
      }
    }
  }
}

SystemConfig base_config_for(const SpaceConfig& sc,
                             const std::vector<std::uint32_t>& domain) {
  SystemConfig cfg;
  cfg.n = sc.n;
  cfg.p = sc.p;
  cfg.r = sc.r;
  cfg.f = sc.f;
  cfg.value_domain = domain;
  cfg.byzantine_ids.insert(sc.byz.begin(), sc.byz.end());
  std::size_t next_value = 0;
  for (ProcessId pid = 0; pid < sc.n; ++pid) {
    if (cfg.byzantine_ids.count(pid)) continue;
    cfg.proposals[pid] = sc.proposal_values[next_value++];
  }
  cfg.byzantine_may_abstain = false;
  cfg.seed = 0;
  return cfg;
}

// One run per element of the product of per-warp attempt arities: with
// abstention off every scheduled process attempts exactly once, in round 1.
std::uint64_t arbitration_leaves(std::uint32_t n, std::uint32_t p) {
  std::uint64_t leaves = 1;
  const std::uint32_t wc = warp_count_for(n, p);
  for (std::uint32_t w = 0; w < wc; ++w) {
    const std::uint32_t members =
        std::min<std::uint32_t>(p, n - w * p);
    leaves *= members;
  }
  return leaves;
}

std::string strategy_label(const ByzantineStrategy& s, std::uint32_t f) {
  if (f == 0) return "none";
  std::string out = "byz{";
  bool first = true;
  for (const auto& [pid, ps] : s.members) {
    if (!first) out += ",";
    first = false;
    out += std::to_string(pid) + ":";
    out += ps.kind == PidStrategy::Kind::NullProposer ? "null"
                                                      : to_string(ps.value);
    if (ps.kind == PidStrategy::Kind::AbstainThenAppend) out += "@late";
  }
  out += "}";
  return out;
}

}  // namespace

std::uint64_t estimate_case_count(const CheckSpace& space) {
  std::uint64_t total = 0;
  for_each_space_config(space, [&](const SpaceConfig& sc) {
    std::uint64_t strategies = 1;
    for (std::uint32_t i = 0; i < sc.f; ++i) {
      strategies *= space.domain.size() + 1;
    }
    total += strategies * arbitration_leaves(sc.n, sc.p);
  });
  return total;
}

CheckReport exhaustive_check(const CheckSpace& space) {
  const std::uint64_t estimate = estimate_case_count(space);
  if (estimate > space.case_cap) {
    throw TooLargeError("exhaustive_check: " + std::to_string(estimate) +
                        " cases exceed cap " + std::to_string(space.case_cap));
  }

  CheckReport report;
  std::array<std::size_t, 4> witnesses_by_property{};
  for_each_space_config(space, [&](const SpaceConfig& sc) {
    const SystemConfig base = base_config_for(sc, space.domain);
    const ValidatedConfig probe = validate_config(base);

    worst_case_strategy_space(probe, space.case_cap,
                              [&](const ByzantineStrategy& strat) {
      SystemConfig cfg = base;
      cfg.adversary = strat;
      const std::string label = strategy_label(strat, sc.f);

      for_each_arbitration(cfg, [&](const ValidatedConfig& validated,
                                    const Trace& trace) {
        report.total_cases += 1;
        std::optional<std::uint64_t> last_phase;
        for (ProcessId pid = 0; pid < validated.n(); ++pid) {
          if (validated.is_byzantine(pid)) continue;
          if (trace.decisions[pid]) {
            const std::uint64_t ph = trace.decisions[pid]->phase;
            last_phase = last_phase ? std::max(*last_phase, ph) : ph;
          }
        }

        for (const Verdict& v : check_all(validated, trace)) {
          auto& c = report.counts[static_cast<int>(v.property)];
          switch (v.outcome) {
            case Outcome::Pass: ++c.pass; break;
            case Outcome::Fail: ++c.fail; break;
            case Outcome::NotApplicable: ++c.not_applicable; break;
          }
          if (v.outcome == Outcome::Fail) {
            if (validated.within_resilience_bound() &&
                !validated.raw().byzantine_may_abstain) {
              ++report.regime_failures;
            }
            auto& captured = witnesses_by_property[static_cast<int>(v.property)];
            if (captured < space.witness_cap) {
              ++captured;
              report.witnesses.push_back(
                  WitnessRecord{v.property, trace, v.detail});
            }
          }
          if (space.keep_case_rows) {
            report.rows.push_back(CaseRow{sc.n, sc.p, sc.r, sc.f, sc.vc_size,
                                          label, v.property, v.outcome,
                                          last_phase});
          }
        }
      });
    });
  });
  return report;
}

std::optional<Trace> find_violation(const SystemConfig& base, std::uint64_t cap) {
  std::optional<Trace> found;
  auto inspect = [&](const ValidatedConfig& validated, const Trace& trace) {
    if (found) return;
    for (const Verdict& v : check_all(validated, trace)) {
      if (v.outcome == Outcome::Fail) {
        found = trace;
        return;
      }
    }
  };

  // The configured strategy first, then the whole assignment space.
  if (base.f > 0) {
    for_each_arbitration(base, inspect);
    if (found) return found;
  }
  const ValidatedConfig probe = validate_config(base);
  worst_case_strategy_space(probe, cap, [&](const ByzantineStrategy& strat) {
    if (found) return;
    SystemConfig cfg = base;
    cfg.adversary = strat;
    for_each_arbitration(cfg, inspect);
  });
  return found;
}

SystemConfig tightness_scenario() {
  SystemConfig cfg;
  cfg.n = 6;
  cfg.p = 1;
  cfg.r = 1;
  cfg.f = 2;
  cfg.value_domain = {0, 1, 2};
  cfg.proposals = {{0, 1}, {1, 1}, {2, 2}, {3, 2}};
  cfg.byzantine_ids = {4, 5};
  cfg.adversary.kind = ByzantineStrategy::Kind::Collude;
  cfg.adversary.value = Value::of(0);
  cfg.arbitration.kind = ContentionPolicy::Kind::AdversarialByzantineWins;
  return cfg;
}

SystemConfig model_gap_scenario(bool abstention) {
  SystemConfig cfg;
  cfg.n = 20;
  cfg.p = 2;
  cfg.r = 5;
  cfg.f = 2;
  cfg.value_domain = {0, 1, 2};
  // Warps 0..3 propose 1, warps 4 and 6..9 propose 2; warp 5 is faulty.
  for (ProcessId pid = 0; pid < 8; ++pid) cfg.proposals[pid] = 1;
  cfg.proposals[8] = 2;
  cfg.proposals[9] = 2;
  for (ProcessId pid = 12; pid < 20; ++pid) cfg.proposals[pid] = 2;
  cfg.byzantine_ids = {10, 11};
  // The faulty warp sits out round 1 and appends the tying value exactly
  // between the early and the late readers' final chunks.
  cfg.adversary.kind = ByzantineStrategy::Kind::AbstainThenAppend;
  cfg.adversary.value = Value::of(1);
  cfg.adversary.offset = 2;
  cfg.arbitration.kind = ContentionPolicy::Kind::LowestPid;
  cfg.byzantine_may_abstain = abstention;
  return cfg;
}

}  // namespace warpcons

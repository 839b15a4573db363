#include "warpcons/json_io.hpp"

#include <algorithm>
#include <charconv>
#include <initializer_list>
#include <string>

#include "json.hpp"
#include "warpcons/errors.hpp"

namespace warpcons {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ConfigParseError(where + ": " + what);
}

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      bad(where + "." + key, "unknown key");
    }
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(where + "." + key, "missing required key");
  return *it;
}

std::uint64_t parse_uint(const json& v, const std::string& where) {
  if (!v.is_number_unsigned()) bad(where, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

ProcessId parse_pid_key(const std::string& key, const std::string& where) {
  ProcessId pid = 0;
  const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), pid);
  if (ec != std::errc() || ptr != key.data() + key.size()) {
    bad(where + "." + key, "expected a decimal pid key");
  }
  return pid;
}

Value parse_value(const json& v, const std::string& where) {
  if (v.is_null()) return Value::null();
  return Value::of(static_cast<std::uint32_t>(parse_uint(v, where)));
}

ojson value_to_json(Value v) {
  if (v.is_null()) return nullptr;
  return v.payload();
}

// --- strategies ------------------------------------------------------------

PidStrategy parse_pid_strategy(const json& obj, const std::string& where);

std::vector<ScriptedAction> parse_script(const json& arr, const std::string& where) {
  if (!arr.is_array()) bad(where, "expected an array of actions");
  std::vector<ScriptedAction> script;
  std::size_t i = 0;
  for (const auto& entry : arr) {
    const std::string at = where + "[" + std::to_string(i++) + "]";
    expect_keys(entry, at, {"access", "op", "value"});
    ScriptedAction a;
    a.access = static_cast<std::uint32_t>(parse_uint(require(entry, at, "access"), at + ".access"));
    const std::string op = require(entry, at, "op").get<std::string>();
    if (op == "append") {
      a.append = true;
      a.value = entry.contains("value") ? parse_value(entry["value"], at + ".value")
                                        : Value::null();
    } else if (op == "noop") {
      a.append = false;
      if (entry.contains("value")) bad(at + ".value", "noop takes no value");
    } else {
      bad(at + ".op", "expected \"append\" or \"noop\"");
    }
    script.push_back(a);
  }
  return script;
}

PidStrategy parse_pid_strategy(const json& obj, const std::string& where) {
  expect_keys(obj, where, {"kind", "value", "offset", "actions"});
  PidStrategy s;
  const std::string kind = require(obj, where, "kind").get<std::string>();
  if (kind == "null-proposer") {
    s.kind = PidStrategy::Kind::NullProposer;
  } else if (kind == "fixed-value") {
    s.kind = PidStrategy::Kind::FixedValue;
    s.value = parse_value(require(obj, where, "value"), where + ".value");
  } else if (kind == "abstain-then-append") {
    s.kind = PidStrategy::Kind::AbstainThenAppend;
    s.value = parse_value(require(obj, where, "value"), where + ".value");
    s.offset = static_cast<std::uint32_t>(
        parse_uint(require(obj, where, "offset"), where + ".offset"));
  } else if (kind == "scripted") {
    s.kind = PidStrategy::Kind::Scripted;
    s.script = parse_script(require(obj, where, "actions"), where + ".actions");
  } else {
    bad(where + ".kind", "unknown member strategy \"" + kind + "\"");
  }
  return s;
}

ByzantineStrategy parse_strategy(const json& obj, const std::string& where) {
  expect_keys(obj, where,
              {"kind", "value", "target", "offset", "assignment", "members", "actions"});
  ByzantineStrategy s;
  const std::string kind = require(obj, where, "kind").get<std::string>();
  if (kind == "null-proposer") {
    s.kind = ByzantineStrategy::Kind::NullProposer;
  } else if (kind == "distinct-values") {
    s.kind = ByzantineStrategy::Kind::DistinctValues;
    const json& assignment = require(obj, where, "assignment");
    if (!assignment.is_object()) bad(where + ".assignment", "expected an object");
    for (const auto& [key, v] : assignment.items()) {
      s.assignment[parse_pid_key(key, where + ".assignment")] =
          parse_value(v, where + ".assignment." + key);
    }
  } else if (kind == "collude") {
    s.kind = ByzantineStrategy::Kind::Collude;
    s.value = parse_value(require(obj, where, "value"), where + ".value");
  } else if (kind == "echo-correct") {
    s.kind = ByzantineStrategy::Kind::EchoCorrect;
    s.value = parse_value(require(obj, where, "target"), where + ".target");
  } else if (kind == "mixed") {
    s.kind = ByzantineStrategy::Kind::Mixed;
    const json& members = require(obj, where, "members");
    if (!members.is_object()) bad(where + ".members", "expected an object");
    for (const auto& [key, v] : members.items()) {
      s.members[parse_pid_key(key, where + ".members")] =
          parse_pid_strategy(v, where + ".members." + key);
    }
  } else if (kind == "abstain-then-append") {
    s.kind = ByzantineStrategy::Kind::AbstainThenAppend;
    s.value = parse_value(require(obj, where, "value"), where + ".value");
    s.offset = static_cast<std::uint32_t>(
        parse_uint(require(obj, where, "offset"), where + ".offset"));
  } else if (kind == "scripted") {
    s.kind = ByzantineStrategy::Kind::Scripted;
    const json& actions = require(obj, where, "actions");
    if (!actions.is_object()) bad(where + ".actions", "expected an object");
    for (const auto& [key, v] : actions.items()) {
      s.scripts[parse_pid_key(key, where + ".actions")] =
          parse_script(v, where + ".actions." + key);
    }
  } else {
    bad(where + ".kind", "unknown strategy \"" + kind + "\"");
  }
  return s;
}

ojson pid_strategy_to_json(const PidStrategy& s) {
  ojson out;
  switch (s.kind) {
    case PidStrategy::Kind::NullProposer:
      out["kind"] = "null-proposer";
      break;
    case PidStrategy::Kind::FixedValue:
      out["kind"] = "fixed-value";
      out["value"] = value_to_json(s.value);
      break;
    case PidStrategy::Kind::AbstainThenAppend:
      out["kind"] = "abstain-then-append";
      out["value"] = value_to_json(s.value);
      out["offset"] = s.offset;
      break;
    case PidStrategy::Kind::Scripted: {
      out["kind"] = "scripted";
      ojson arr = ojson::array();
      for (const auto& a : s.script) {
        ojson e;
        e["access"] = a.access;
        e["op"] = a.append ? "append" : "noop";
        if (a.append) e["value"] = value_to_json(a.value);
        arr.push_back(e);
      }
      out["actions"] = arr;
      break;
    }
  }
  return out;
}

ojson strategy_to_json(const ByzantineStrategy& s) {
  ojson out;
  switch (s.kind) {
    case ByzantineStrategy::Kind::NullProposer:
      out["kind"] = "null-proposer";
      break;
    case ByzantineStrategy::Kind::DistinctValues: {
      out["kind"] = "distinct-values";
      ojson assignment;
      for (const auto& [pid, v] : s.assignment) {
        assignment[std::to_string(pid)] = value_to_json(v);
      }
      out["assignment"] = assignment;
      break;
    }
    case ByzantineStrategy::Kind::Collude:
      out["kind"] = "collude";
      out["value"] = value_to_json(s.value);
      break;
    case ByzantineStrategy::Kind::EchoCorrect:
      out["kind"] = "echo-correct";
      out["target"] = value_to_json(s.value);
      break;
    case ByzantineStrategy::Kind::Mixed: {
      out["kind"] = "mixed";
      ojson members;
      for (const auto& [pid, sub] : s.members) {
        members[std::to_string(pid)] = pid_strategy_to_json(sub);
      }
      out["members"] = members;
      break;
    }
    case ByzantineStrategy::Kind::AbstainThenAppend:
      out["kind"] = "abstain-then-append";
      out["value"] = value_to_json(s.value);
      out["offset"] = s.offset;
      break;
    case ByzantineStrategy::Kind::Scripted: {
      out["kind"] = "scripted";
      ojson actions;
      for (const auto& [pid, script] : s.scripts) {
        ojson arr = ojson::array();
        for (const auto& a : script) {
          ojson e;
          e["access"] = a.access;
          e["op"] = a.append ? "append" : "noop";
          if (a.append) e["value"] = value_to_json(a.value);
          arr.push_back(e);
        }
        actions[std::to_string(pid)] = arr;
      }
      out["actions"] = actions;
      break;
    }
  }
  return out;
}

// --- arbitration -----------------------------------------------------------

ContentionPolicy parse_arbitration(const json& obj, const std::string& where) {
  expect_keys(obj, where, {"policy", "winners"});
  ContentionPolicy policy;
  const std::string name = require(obj, where, "policy").get<std::string>();
  if (name == "adversarial-byzantine-wins") {
    policy.kind = ContentionPolicy::Kind::AdversarialByzantineWins;
  } else if (name == "lowest-pid") {
    policy.kind = ContentionPolicy::Kind::LowestPid;
  } else if (name == "seeded-uniform") {
    policy.kind = ContentionPolicy::Kind::SeededUniform;
  } else if (name == "scripted") {
    policy.kind = ContentionPolicy::Kind::ScriptedWinners;
    const json& winners = require(obj, where, "winners");
    if (!winners.is_array()) bad(where + ".winners", "expected an array");
    for (const auto& w : winners) {
      policy.winners.push_back(
          static_cast<ProcessId>(parse_uint(w, where + ".winners")));
    }
  } else {
    bad(where + ".policy", "unknown policy \"" + name + "\"");
  }
  return policy;
}

ojson arbitration_to_json(const ContentionPolicy& policy) {
  ojson out;
  switch (policy.kind) {
    case ContentionPolicy::Kind::AdversarialByzantineWins:
      out["policy"] = "adversarial-byzantine-wins";
      break;
    case ContentionPolicy::Kind::LowestPid:
      out["policy"] = "lowest-pid";
      break;
    case ContentionPolicy::Kind::SeededUniform:
      out["policy"] = "seeded-uniform";
      break;
    case ContentionPolicy::Kind::ScriptedWinners:
      out["policy"] = "scripted";
      out["winners"] = policy.winners;
      break;
  }
  return out;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace

Experiment parse_experiment_json(const std::string& text) {
  json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) throw ConfigParseError("input is not valid JSON");
  expect_keys(root, "config",
              {"system", "proposals", "byzantine", "arbitration", "seed", "output"});

  Experiment exp;
  SystemConfig& cfg = exp.config;

  const json& system = require(root, "config", "system");
  expect_keys(system, "system", {"n", "p", "r", "f", "value_domain"});
  cfg.n = static_cast<std::uint32_t>(parse_uint(require(system, "system", "n"), "system.n"));
  cfg.p = static_cast<std::uint32_t>(parse_uint(require(system, "system", "p"), "system.p"));
  cfg.r = static_cast<std::uint32_t>(parse_uint(require(system, "system", "r"), "system.r"));
  cfg.f = static_cast<std::uint32_t>(parse_uint(require(system, "system", "f"), "system.f"));
  const json& domain = require(system, "system", "value_domain");
  if (!domain.is_array()) bad("system.value_domain", "expected an array");
  for (const auto& v : domain) {
    cfg.value_domain.push_back(
        static_cast<std::uint32_t>(parse_uint(v, "system.value_domain")));
  }

  const json& proposals = require(root, "config", "proposals");
  if (!proposals.is_object()) bad("proposals", "expected an object");
  for (const auto& [key, v] : proposals.items()) {
    cfg.proposals[parse_pid_key(key, "proposals")] =
        static_cast<std::uint32_t>(parse_uint(v, "proposals." + key));
  }

  if (root.contains("byzantine")) {
    const json& byz = root["byzantine"];
    expect_keys(byz, "byzantine", {"ids", "strategy", "may_abstain"});
    const json& ids = require(byz, "byzantine", "ids");
    if (!ids.is_array()) bad("byzantine.ids", "expected an array");
    for (const auto& v : ids) {
      cfg.byzantine_ids.insert(
          static_cast<ProcessId>(parse_uint(v, "byzantine.ids")));
    }
    if (byz.contains("strategy")) {
      cfg.adversary = parse_strategy(byz["strategy"], "byzantine.strategy");
    } else if (!cfg.byzantine_ids.empty()) {
      bad("byzantine.strategy", "missing required key");
    }
    if (byz.contains("may_abstain")) {
      if (!byz["may_abstain"].is_boolean()) {
        bad("byzantine.may_abstain", "expected a boolean");
      }
      cfg.byzantine_may_abstain = byz["may_abstain"].get<bool>();
    }
  }

  if (root.contains("arbitration")) {
    cfg.arbitration = parse_arbitration(root["arbitration"], "arbitration");
  }
  if (root.contains("seed")) {
    cfg.seed = parse_uint(root["seed"], "seed");
  }
  if (root.contains("output")) {
    const json& output = root["output"];
    expect_keys(output, "output", {"trace", "verdicts"});
    if (output.contains("trace")) {
      exp.output.trace_file = output["trace"].get<std::string>();
    }
    if (output.contains("verdicts")) {
      exp.output.verdicts_file = output["verdicts"].get<std::string>();
    }
  }
  return exp;
}

std::string experiment_to_json(const SystemConfig& cfg) {
  ojson root;
  ojson system;
  system["n"] = cfg.n;
  system["p"] = cfg.p;
  system["r"] = cfg.r;
  system["f"] = cfg.f;
  system["value_domain"] = cfg.value_domain;
  root["system"] = system;

  ojson proposals;
  for (const auto& [pid, v] : cfg.proposals) {
    proposals[std::to_string(pid)] = v;
  }
  root["proposals"] = proposals;

  ojson byz;
  byz["ids"] = std::vector<ProcessId>(cfg.byzantine_ids.begin(),
                                      cfg.byzantine_ids.end());
  if (!cfg.byzantine_ids.empty()) {
    byz["strategy"] = strategy_to_json(cfg.adversary);
  }
  byz["may_abstain"] = cfg.byzantine_may_abstain;
  root["byzantine"] = byz;

  root["arbitration"] = arbitration_to_json(cfg.arbitration);
  root["seed"] = cfg.seed;
  return dump(root);
}

std::string trace_to_json(const Trace& trace) {
  ojson root;
  root["config"] = ojson::parse(experiment_to_json(trace.config));

  ojson phases = ojson::array();
  for (const auto& pr : trace.phases) {
    ojson p;
    p["phase"] = pr.phase;
    p["warp"] = pr.warp;
    p["list_len_after"] = pr.list_len_after;
    ojson actions = ojson::array();
    for (const auto& a : pr.actions) {
      ojson e;
      e["pid"] = a.pid;
      e["access"] = a.access;
      switch (a.kind) {
        case Action::Kind::Append:
          e["op"] = "append";
          e["value"] = value_to_json(a.value);
          if (a.append_result) e["result"] = to_string(*a.append_result);
          break;
        case Action::Kind::ReadChunk: {
          e["op"] = "read";
          e["from"] = a.read_from;
          ojson vals = ojson::array();
          for (Value v : a.read_values) vals.push_back(value_to_json(v));
          e["values"] = vals;
          break;
        }
        case Action::Kind::Decide:
          e["op"] = "decide";
          break;
        case Action::Kind::Noop:
          e["op"] = "noop";
          break;
      }
      if (a.decided) e["decided"] = value_to_json(*a.decided);
      actions.push_back(e);
    }
    p["actions"] = actions;
    phases.push_back(p);
  }
  root["phases"] = phases;

  ojson decisions;
  for (ProcessId pid = 0; pid < trace.decisions.size(); ++pid) {
    if (!trace.decisions[pid]) continue;
    ojson d;
    d["value"] = value_to_json(trace.decisions[pid]->value);
    d["phase"] = trace.decisions[pid]->phase;
    decisions[std::to_string(pid)] = d;
  }
  root["decisions"] = decisions;

  std::vector<ProcessId> halted;
  for (ProcessId pid = 0; pid < trace.halted_all_null.size(); ++pid) {
    if (trace.halted_all_null[pid]) halted.push_back(pid);
  }
  root["halted"] = halted;

  ojson slots = ojson::array();
  for (Value v : trace.final_list.slots) slots.push_back(value_to_json(v));
  root["final_list"] = slots;
  root["appended_count"] = trace.final_list.appended;
  return dump(root);
}

std::string verdicts_to_json(const ValidatedConfig& cfg,
                             const std::vector<Verdict>& verdicts) {
  ojson root;
  ojson derived;
  derived["warp_count"] = cfg.warp_count();
  derived["correct_values"] = cfg.correct_values();
  derived["resilience_limit"] = cfg.resilience_limit_here();
  derived["within_bound"] = cfg.within_resilience_bound();
  derived["decision_phase_bound"] = decision_phase_bound(cfg.n(), cfg.p(), cfg.r());
  root["derived"] = derived;

  ojson out;
  bool all_pass = true;
  for (const auto& v : verdicts) {
    ojson e;
    e["outcome"] = to_string(v.outcome);
    e["detail"] = v.detail;
    out[to_string(v.property)] = e;
    if (v.outcome == Outcome::Fail) all_pass = false;
  }
  root["verdicts"] = out;
  root["all_pass"] = all_pass;
  return dump(root);
}

std::string report_to_json(const CheckReport& report, const CheckSpace& space,
                           const std::vector<std::string>& witness_files) {
  ojson root;
  ojson sp;
  sp["n"] = space.ns;
  sp["p"] = space.ps;
  sp["r"] = space.rs;
  sp["domain"] = space.domain;
  sp["f_mode"] = to_string(space.f_mode);
  sp["expect_violation"] = space.expect_violation;
  sp["case_cap"] = space.case_cap;
  root["space"] = sp;
  root["total_cases"] = report.total_cases;

  ojson props;
  for (int i = 0; i < 4; ++i) {
    ojson c;
    c["pass"] = report.counts[i].pass;
    c["fail"] = report.counts[i].fail;
    c["not-applicable"] = report.counts[i].not_applicable;
    props[to_string(static_cast<Property>(i))] = c;
  }
  root["properties"] = props;
  root["regime_failures"] = report.regime_failures;

  ojson witnesses = ojson::array();
  for (std::size_t i = 0; i < report.witnesses.size(); ++i) {
    ojson w;
    w["property"] = to_string(report.witnesses[i].property);
    if (i < witness_files.size()) w["file"] = witness_files[i];
    w["summary"] = report.witnesses[i].summary;
    witnesses.push_back(w);
  }
  root["witnesses"] = witnesses;
  return dump(root);
}

std::string report_rows_to_csv(const CheckReport& report) {
  std::string out = "n,p,r,f,vc_size,strategy,property,outcome,last_decision_phase\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.n) + "," + std::to_string(row.p) + "," +
           std::to_string(row.r) + "," + std::to_string(row.f) + "," +
           std::to_string(row.vc_size) + "," + row.strategy + "," +
           to_string(row.property) + "," + to_string(row.outcome) + ",";
    if (row.last_decision_phase) out += std::to_string(*row.last_decision_phase);
    out += "\n";
  }
  return out;
}

std::string format_theta_ratio(std::uint64_t phases, std::uint32_t n,
                               std::uint32_t p, std::uint32_t r) {
  const std::uint64_t den = static_cast<std::uint64_t>(n) * n;
  const std::uint64_t num =
      phases * static_cast<std::uint64_t>(p) * p * r * 1000000ull;
  const std::uint64_t q = (num + den / 2) / den;
  std::string frac = std::to_string(q % 1000000ull);
  frac.insert(frac.begin(), 6 - frac.size(), '0');
  return std::to_string(q / 1000000ull) + "." + frac;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "n,p,r,last_decision_phase,phase_bound,theta_ratio\n";
  for (const auto& row : rows) {
    out += std::to_string(row.n) + "," + std::to_string(row.p) + "," +
           std::to_string(row.r) + "," + std::to_string(row.last_decision_phase) +
           "," + std::to_string(row.phase_bound) + "," + row.theta_ratio + "\n";
  }
  return out;
}

SweepGrid parse_sweep_grid_json(const std::string& text) {
  json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) throw ConfigParseError("grid is not valid JSON");
  expect_keys(root, "grid", {"n", "p", "r"});
  SweepGrid grid;
  auto read = [&](const char* key, std::vector<std::uint32_t>& out) {
    const json& arr = require(root, "grid", key);
    if (!arr.is_array() || arr.empty()) {
      bad(std::string("grid.") + key, "expected a nonempty array");
    }
    for (const auto& v : arr) {
      out.push_back(static_cast<std::uint32_t>(
          parse_uint(v, std::string("grid.") + key)));
    }
  };
  read("n", grid.ns);
  read("p", grid.ps);
  read("r", grid.rs);
  return grid;
}

}  // namespace warpcons

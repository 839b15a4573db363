#include "warpcons/config.hpp"

#include <algorithm>
#include <string>

#include "warpcons/errors.hpp"

namespace warpcons {

Value ValidatedConfig::proposal_of(ProcessId pid) const {
  auto it = cfg_.proposals.find(pid);
  if (it == cfg_.proposals.end()) return Value::null();
  return Value::of(it->second);
}

std::vector<ProcessId> ValidatedConfig::warp_members(WarpId w) const {
  std::vector<ProcessId> members;
  const ProcessId first = w * cfg_.p;
  const ProcessId last = std::min<ProcessId>(cfg_.n, first + cfg_.p);
  for (ProcessId pid = first; pid < last; ++pid) members.push_back(pid);
  return members;
}

ValidatedConfig validate_config(SystemConfig cfg) {
  if (cfg.n < 1) throw InvalidParameterError("system.n: must be >= 1");
  if (cfg.p < 1 || cfg.p > cfg.n) {
    throw InvalidParameterError("system.p: need 1 <= p <= n, got p=" +
                                std::to_string(cfg.p) + ", n=" +
                                std::to_string(cfg.n));
  }
  if (cfg.r < 1 || cfg.r > cfg.n) {
    throw InvalidParameterError("system.r: need 1 <= r <= n, got r=" +
                                std::to_string(cfg.r));
  }
  if (cfg.f >= cfg.n) {
    throw InvalidParameterError("system.f: need f < n, got f=" +
                                std::to_string(cfg.f) + ", n=" +
                                std::to_string(cfg.n));
  }
  if (cfg.value_domain.empty()) {
    throw InvalidParameterError("system.value_domain: must be nonempty");
  }
  std::sort(cfg.value_domain.begin(), cfg.value_domain.end());
  cfg.value_domain.erase(
      std::unique(cfg.value_domain.begin(), cfg.value_domain.end()),
      cfg.value_domain.end());

  if (cfg.byzantine_ids.size() != cfg.f) {
    throw InvalidParameterError(
        "byzantine.ids: expected exactly f=" + std::to_string(cfg.f) +
        " ids, got " + std::to_string(cfg.byzantine_ids.size()));
  }
  for (ProcessId pid : cfg.byzantine_ids) {
    if (pid >= cfg.n) {
      throw InvalidParameterError("byzantine.ids: pid " + std::to_string(pid) +
                                  " out of range [0, n)");
    }
  }

  ValidatedConfig out(std::move(cfg));
  const SystemConfig& c = out.cfg_;

  // Every correct pid needs a proposal from the domain; Byzantine pids
  // must not appear in the proposal map.
  for (ProcessId pid = 0; pid < c.n; ++pid) {
    const bool byz = c.byzantine_ids.count(pid) != 0;
    auto it = c.proposals.find(pid);
    if (byz) {
      if (it != c.proposals.end()) {
        throw InvalidParameterError("proposals: pid " + std::to_string(pid) +
                                    " is Byzantine and must not propose here");
      }
      continue;
    }
    if (it == c.proposals.end()) {
      throw InvalidParameterError("proposals: missing correct pid " +
                                  std::to_string(pid));
    }
    if (!std::binary_search(c.value_domain.begin(), c.value_domain.end(),
                            it->second)) {
      throw InvalidParameterError("proposals: value " +
                                  std::to_string(it->second) + " of pid " +
                                  std::to_string(pid) + " not in value_domain");
    }
  }
  for (const auto& [pid, _] : c.proposals) {
    if (pid >= c.n) {
      throw InvalidParameterError("proposals: pid " + std::to_string(pid) +
                                  " out of range [0, n)");
    }
  }

  out.warp_count_ = warp_count_for(c.n, c.p);
  for (const auto& [pid, v] : c.proposals) out.vc_.push_back(v);
  std::sort(out.vc_.begin(), out.vc_.end());
  out.vc_.erase(std::unique(out.vc_.begin(), out.vc_.end()), out.vc_.end());
  out.limit_ = out.vc_.empty()
                   ? 0
                   : resilience_limit(c.n, c.p,
                                      static_cast<std::uint32_t>(out.vc_.size()));
  return out;
}

}  // namespace warpcons

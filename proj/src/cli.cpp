#include "warpcons/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "warpcons/errors.hpp"
#include "warpcons/json_io.hpp"

namespace warpcons {
namespace cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigParseError("cannot write " + path.string());
  out << content;
}

}  // namespace

std::uint64_t case_cap_from_env() {
  if (const char* env = std::getenv("WARPCONS_CASE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 10'000'000ull;
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& diag) {
  Experiment exp;
  try {
    exp = parse_experiment_json(read_file(opts.config_path));
  } catch (const ConfigParseError& e) {
    diag << "config error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const ValidatedConfig cfg = validate_config(exp.config);
    const Trace trace = run_to_completion(cfg);
    const std::vector<Verdict> verdicts = check_all(cfg, trace);

    write_file(fs::path(opts.out_dir) / exp.output.trace_file, trace_to_json(trace));
    write_file(fs::path(opts.out_dir) / exp.output.verdicts_file,
               verdicts_to_json(cfg, verdicts));

    bool all_pass = true;
    for (const auto& v : verdicts) {
      diag << to_string(v.property) << ": " << to_string(v.outcome);
      if (!v.detail.empty()) diag << " (" << v.detail << ")";
      diag << "\n";
      if (v.outcome == Outcome::Fail) all_pass = false;
    }
    return all_pass ? kExitOk : kExitPropertyFailure;
  } catch (const InvalidParameterError& e) {
    diag << "config error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_check(const CheckOptions& opts, std::ostream& diag) {
  CheckReport report;
  try {
    report = exhaustive_check(opts.space);
  } catch (const TooLargeError& e) {
    diag << "space too large: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidParameterError& e) {
    diag << "config error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<std::string> witness_files;
  for (std::size_t i = 0; i < report.witnesses.size(); ++i) {
    const std::string name = "witness_" + std::to_string(i) + ".json";
    write_file(fs::path(opts.out_dir) / name,
               experiment_to_json(report.witnesses[i].trace.config));
    witness_files.push_back(name);
  }
  write_file(fs::path(opts.out_dir) / "report.json",
             report_to_json(report, opts.space, witness_files));
  write_file(fs::path(opts.out_dir) / "cases.csv", report_rows_to_csv(report));

  diag << "cases: " << report.total_cases << "\n";
  for (int i = 0; i < 4; ++i) {
    diag << to_string(static_cast<Property>(i)) << ": pass "
         << report.counts[i].pass << ", fail " << report.counts[i].fail
         << ", not-applicable " << report.counts[i].not_applicable << "\n";
  }

  const bool violation_found =
      report.counts[static_cast<int>(Property::StrongValidity)].fail > 0;

  if (report.regime_failures > 0) {
    diag << "FAIL: " << report.regime_failures
         << " property failures within the resilience bound\n";
    return kExitPropertyFailure;
  }
  if (opts.space.expect_violation && !violation_found) {
    diag << "FAIL: expected a strong-validity violation, none found\n";
    return kExitPropertyFailure;
  }
  if (opts.space.expect_violation) {
    diag << "expected violation found (" << report.witnesses.size()
         << " witnesses recorded)\n";
  }
  return kExitOk;
}

int cmd_sweep(const SweepOptions& opts, std::ostream& diag) {
  SweepGrid grid;
  try {
    grid = parse_sweep_grid_json(read_file(opts.grid_path));
  } catch (const ConfigParseError& e) {
    diag << "grid error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<SweepRow> rows;
  std::uint64_t micro_min = 0, micro_max = 0;  // ratio scaled by 1e6
  for (std::uint32_t n : grid.ns) {
    for (std::uint32_t p : grid.ps) {
      if (p > n) continue;
      for (std::uint32_t r : grid.rs) {
        if (r > n) continue;
        SystemConfig cfg;
        cfg.n = n;
        cfg.p = p;
        cfg.r = r;
        cfg.f = 0;
        cfg.value_domain = {0};
        for (ProcessId pid = 0; pid < n; ++pid) cfg.proposals[pid] = 0;
        cfg.arbitration.kind = ContentionPolicy::Kind::LowestPid;

        const ValidatedConfig validated = validate_config(cfg);
        const Trace trace = run_to_completion(validated);
        std::uint64_t last = 0;
        for (ProcessId pid = 0; pid < n; ++pid) {
          last = std::max<std::uint64_t>(last, trace.decisions[pid]->phase);
        }
        SweepRow row{n, p, r, last, decision_phase_bound(n, p, r),
                     format_theta_ratio(last, n, p, r)};
        const std::uint64_t den = static_cast<std::uint64_t>(n) * n;
        const std::uint64_t micros =
            (last * static_cast<std::uint64_t>(p) * p * r * 1000000ull + den / 2) / den;
        if (rows.empty() || micros < micro_min) micro_min = micros;
        if (rows.empty() || micros > micro_max) micro_max = micros;
        rows.push_back(std::move(row));
      }
    }
  }

  write_file(opts.out_path, sweep_to_csv(rows));
  auto as_decimal = [](std::uint64_t micros) {
    std::string frac = std::to_string(micros % 1000000ull);
    frac.insert(frac.begin(), 6 - frac.size(), '0');
    return std::to_string(micros / 1000000ull) + "." + frac;
  };
  diag << rows.size() << " rows, theta ratio within [" << as_decimal(micro_min)
       << ", " << as_decimal(micro_max) << "]\n";
  return kExitOk;
}

}  // namespace cli
}  // namespace warpcons

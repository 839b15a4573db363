#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "warpcons/cli.hpp"

namespace {

warpcons::FMode parse_f_mode(const std::string& s) {
  if (s == "below-bound") return warpcons::FMode::BelowBound;
  if (s == "at-bound") return warpcons::FMode::AtBound;
  if (s == "above-bound") return warpcons::FMode::AboveBound;
  throw CLI::ValidationError("--f-mode",
                             "expected below-bound, at-bound or above-bound");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator and verifier for warp-scheduled "
               "Byzantine consensus over a sticky append-only list"};
  app.require_subcommand(1);

  // simulate
  warpcons::cli::SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Run one experiment file");
  simulate->add_option("--config", sim.config_path, "Experiment JSON file")
      ->required();
  simulate->add_option("--out", sim.out_dir, "Output directory")
      ->default_val(".");

  // check
  warpcons::cli::CheckOptions chk;
  std::uint32_t n_max = 6;
  std::vector<std::uint32_t> p_set{1, 2, 3};
  std::vector<std::uint32_t> r_set{1, 2};
  std::vector<std::uint32_t> domain{0, 1, 2};
  std::string f_mode = "below-bound";
  CLI::App* check = app.add_subcommand(
      "check", "Exhaustively check every small instance of a space");
  check->add_option("--n-max", n_max, "Largest process count (n runs 2..n-max)")
      ->default_val(6);
  check->add_option("--p-set", p_set, "Warp sizes")->delimiter(',');
  check->add_option("--r-set", r_set, "Read widths")->delimiter(',');
  check->add_option("--domain", domain, "Value domain")->delimiter(',');
  check->add_option("--f-mode", f_mode,
                    "below-bound | at-bound | above-bound");
  check->add_flag("--expect-violation", chk.space.expect_violation,
                  "Exit nonzero unless a strong-validity witness is found");
  check->add_option("--out", chk.out_dir, "Output directory")->default_val(".");

  // sweep
  warpcons::cli::SweepOptions swp;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Measure decision phases over an honest (f=0) grid");
  sweep->add_option("--grid", swp.grid_path, "Grid JSON file")->required();
  sweep->add_option("--out", swp.out_path, "Output CSV path")
      ->default_val("sweep.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : warpcons::cli::kExitUsage;
  }

  if (simulate->parsed()) {
    return warpcons::cli::cmd_simulate(sim, std::cout);
  }
  if (check->parsed()) {
    for (std::uint32_t n = 2; n <= n_max; ++n) chk.space.ns.push_back(n);
    chk.space.ps = p_set;
    chk.space.rs = r_set;
    chk.space.domain = domain;
    try {
      chk.space.f_mode = parse_f_mode(f_mode);
    } catch (const CLI::ValidationError& e) {
      std::cout << e.what() << "\n";
      return warpcons::cli::kExitUsage;
    }
    chk.space.case_cap = warpcons::cli::case_cap_from_env();
    return warpcons::cli::cmd_check(chk, std::cout);
  }
  return warpcons::cli::cmd_sweep(swp, std::cout);
}

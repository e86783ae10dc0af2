#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "axisym/commands.hpp"
#include "axisym/parallel.hpp"

namespace {

axisym::Tolerances parse_tolerances(const std::vector<std::string>& items) {
  axisym::Tolerances out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw CLI::ValidationError("--tol", "expected NAME=VALUE, got '" + item + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item.substr(eq + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() - eq - 1)
      throw CLI::ValidationError("--tol", "bad value in '" + item + "'");
    out[item.substr(0, eq)] = v;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Axisymmetric vortex-particle simulator"};
  app.require_subcommand(1);
  int threads = 0;
  bool deterministic = false;
  app.add_option("--threads", threads, "Worker threads (default: AXISYM_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--deterministic", deterministic,
               "Fixed-order reductions (bit-reproducible across thread counts)");

  axisym::RunOptions run_opt;
  auto* run = app.add_subcommand("run", "Integrate a configured scenario");
  run->add_option("--config", run_opt.config, "JSON config")->required();
  run->add_option("--out", run_opt.out, "Output directory (overrides out_dir)");

  std::vector<std::string> tol_items;
  bool mutate = false;
  auto* vk = app.add_subcommand("verify-kernel", "Check the kernel against quadrature");
  vk->add_option("--tol", tol_items, "Override a tolerance, NAME=VALUE");
  vk->add_flag("--mutate-convention", mutate,
               "Evaluate with k in place of m (the suite must fail)");

  axisym::IdentityOptions id_opt;
  auto* vi = app.add_subcommand("verify-identities", "Evaluate every identity both ways");
  vi->add_option("--config", id_opt.config, "Seed from this config");
  vi->add_option("--snapshot", id_opt.snapshot, "Evaluate this snapshot");
  vi->add_option("--tol", tol_items, "Override a tolerance, NAME=VALUE");
  vi->add_flag("--refine", id_opt.refine, "Repeat at h/2 and require every residual to drop");

  axisym::FitOptions fit_opt;
  auto* fit = app.add_subcommand("fit", "Log-log slope of a series column");
  fit->add_option("--series", fit_opt.series, "series.csv")->required();
  fit->add_option("--column", fit_opt.column, "Column name")->capture_default_str();
  fit->add_option("--t-lo", fit_opt.t_lo, "Window start")->capture_default_str();
  fit->add_option("--t-hi", fit_opt.t_hi, "Window end")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    axisym::set_threads(axisym::resolve_threads(threads));
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (run->parsed()) {
      run_opt.deterministic = deterministic;
      return axisym::cmd_run(run_opt, std::cout, std::cerr);
    }
    if (vk->parsed()) {
      axisym::KernelSuiteOptions opt;
      opt.tol = parse_tolerances(tol_items);
      opt.mutate_convention = mutate;
      return axisym::cmd_verify_kernel(opt, std::cout);
    }
    if (vi->parsed()) {
      id_opt.tol = parse_tolerances(tol_items);
      id_opt.deterministic = deterministic;
      return axisym::cmd_verify_identities(id_opt, std::cout, std::cerr);
    }
    return axisym::cmd_fit(fit_opt, std::cout, std::cerr);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  }
}

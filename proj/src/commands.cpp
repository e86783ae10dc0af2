#include "axisym/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "axisym/config.hpp"
#include "axisym/dynamics.hpp"

namespace axisym {
namespace fs = std::filesystem;

const std::vector<double>& SeriesTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return columns[i];
  throw std::invalid_argument("series has no column '" + name + "'");
}

SeriesTable read_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  SeriesTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
  t.columns.resize(t.header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t i = 0;
    for (std::string cell; std::getline(ls, cell, ',') && i < t.columns.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      const bool ok = !cell.empty() && end == cell.c_str() + cell.size();
      t.columns[i].push_back(ok ? v : std::numeric_limits<double>::quiet_NaN());
    }
    for (; i < t.columns.size(); ++i)
      t.columns[i].push_back(std::numeric_limits<double>::quiet_NaN());
  }
  return t;
}

std::string series_path(const std::string& out_dir) {
  return (fs::path(out_dir) / "series.csv").string();
}

std::string snapshot_path(const std::string& out_dir, long step) {
  char name[32];
  std::snprintf(name, sizeof name, "snap_%07ld.txt", step);
  return (fs::path(out_dir) / "snapshots" / name).string();
}

std::string resolved_config_path(const std::string& out_dir) {
  return (fs::path(out_dir) / "resolved_config.json").string();
}

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  SimConfig cfg;
  try {
    cfg = load_config(opt.config);
  } catch (const ConfigErrors& e) {
    for (const auto& m : e.errors()) err << opt.config << ": " << m << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return 2;
  }
  if (!opt.out.empty()) cfg.out_dir = opt.out;
  if (opt.deterministic) {
    cfg.deterministic = true;
    cfg.diag.deterministic = true;
  }

  try {
    fs::create_directories(fs::path(cfg.out_dir) / "snapshots");
    {
      std::ofstream echo(resolved_config_path(cfg.out_dir));
      if (!echo) throw std::runtime_error("cannot write " + resolved_config_path(cfg.out_dir));
      echo << to_json(cfg).dump(2) << '\n';
    }
    std::ofstream series(series_path(cfg.out_dir));
    if (!series) throw std::runtime_error("cannot write " + series_path(cfg.out_dir));
    write_csv_header(series, cfg.diag);

    RunSinks sinks;
    sinks.on_record = [&](const DiagnosticsRecord& rec) {
      write_csv_row(series, rec);
      series.flush();
    };
    sinks.on_snapshot = [&](const ParticleSystem& sys, double time, long step) {
      save_snapshot(snapshot_path(cfg.out_dir, step), sys, time);
    };
    const RunResult res = run(cfg, sinks);
    if (!series) throw std::runtime_error("write failed on " + series_path(cfg.out_dir));
    out << "status " << res.status << "  steps " << res.steps << "  records " << res.records
        << "  N " << res.final_state.system.size() << '\n';
    if (res.status != "ok") {
      err << "run aborted: " << res.message << '\n';
      return 1;
    }
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return 2;
  }
  return 0;
}

int cmd_verify_kernel(const KernelSuiteOptions& opt, std::ostream& out) {
  const CheckReport rep = run_kernel_suite(opt);
  rep.print(out);
  out << (rep.pass() ? "kernel suite PASS" : "kernel suite FAIL") << '\n';
  return rep.pass() ? 0 : 1;
}

namespace {

constexpr double kRoundoffResidual = 1e-13;

void print_values(std::ostream& os, const IdentityValues& v) {
  const auto flags = os.flags();
  os << std::setprecision(10) << "m0 " << v.m0 << "  P2 " << v.P2 << "  Z " << v.Z << '\n'
     << "dP2 bulk " << v.dP2_bulk << "  axis " << v.dP2_axis << '\n'
     << "dZ  bulk " << v.dZ_bulk << "  axis " << v.dZ_axis << '\n'
     << "axis_r " << v.axis_r << "  axis_z " << v.axis_z << "  weighted_z " << v.weighted_z
     << "  weighted_r " << v.weighted_r << '\n';
  os.flags(flags);
}

}  // namespace

int cmd_verify_identities(const IdentityOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.config.empty() == opt.snapshot.empty()) {
    err << "verify-identities: give exactly one of --config or --snapshot\n";
    return 2;
  }
  if (opt.refine && opt.config.empty()) {
    err << "verify-identities: --refine needs --config\n";
    return 2;
  }
  try {
    SimConfig cfg;
    Snapshot snap;
    if (!opt.snapshot.empty()) {
      snap = load_snapshot(opt.snapshot);
    } else {
      cfg = load_config(opt.config);
      snap = seed_scenario(cfg);
    }
    const bool det = opt.deterministic || cfg.deterministic;
    const IdentityValues v = identity_values(snap.system, cfg.diag.quad, det);
    out << "N " << snap.system.size() << "  delta " << snap.system.delta << "  t "
        << snap.time << '\n';
    print_values(out, v);
    CheckReport rep = identity_report(v, opt.tol);

    if (opt.refine) {
      SimConfig fine = cfg;
      fine.h = 0.5 * cfg.h;
      fine.delta = 0.5 * (cfg.delta > 0.0 ? cfg.delta : 1.5 * cfg.h);
      const Snapshot fs_snap = seed_scenario(fine);
      const IdentityValues vf = identity_values(fs_snap.system, fine.diag.quad, det);
      out << "refined: N " << fs_snap.system.size() << "  delta " << fs_snap.system.delta
          << '\n';
      print_values(out, vf);
      const auto coarse = identity_residuals(v);
      const auto finer = identity_residuals(vf);
      for (const auto& [name, rc] : coarse) {
        const double rf = finer.at(name);
        // Residuals that are exact up to rounding cannot decrease further.
        const bool roundoff = std::max(rc, rf) <= kRoundoffResidual;
        CheckRow row{"refine_" + name, rc > 0.0 ? rf / rc : rf, 1.0, rf < rc || roundoff,
                     roundoff ? "both at rounding level" : "fine/coarse residual, must be < 1"};
        rep.rows.push_back(row);
      }
      if (!vf.converged) rep.add("refine_quad", 1.0, 0.0, "axis quadrature at h/2");
    }
    rep.print(out);
    if (!v.converged) err << "axis quadrature did not reach its error target\n";
    out << (rep.pass() ? "identity suite PASS" : "identity suite FAIL") << '\n';
    return rep.pass() ? 0 : 1;
  } catch (const ConfigErrors& e) {
    for (const auto& m : e.errors()) err << opt.config << ": " << m << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return 2;
  }
}

int cmd_fit(const FitOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const SeriesTable table = read_series(opt.series);
    const auto& t = table.column("t");
    const auto& q = table.column(opt.column);
    const PowerFit fit = fit_exponent(t, q, opt.t_lo, opt.t_hi);
    out << std::setprecision(6) << opt.column << " slope " << fit.slope << "  residual "
        << fit.residual << "  samples " << fit.samples << "  window [" << opt.t_lo << ", "
        << opt.t_hi << "]\n";
    if (opt.column == "P2") {
      // Log-log slope of t / log t over the same samples; needs t > 1.
      std::vector<double> lower(t.size(), std::numeric_limits<double>::quiet_NaN());
      for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] > 1.0) lower[i] = t[i] / std::log(t[i]);
      if (opt.t_lo > 1.0) {
        const PowerFit lo = fit_exponent(t, lower, opt.t_lo, opt.t_hi);
        out << "bracket: lower t/log t slope " << lo.slope << "  upper t^2 slope 2\n";
      } else {
        out << "bracket: upper t^2 slope 2 (lower t/log t needs t_lo > 1)\n";
      }
    }
    return 0;
  } catch (const std::exception& e) {
    err << "fit: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace axisym

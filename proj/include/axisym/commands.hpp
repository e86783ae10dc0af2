#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "axisym/verify.hpp"

namespace axisym {

struct RunOptions {
  std::string config;
  std::string out;  // overrides out_dir when set
  bool deterministic = false;
};

struct IdentityOptions {
  std::string config;
  std::string snapshot;
  Tolerances tol;
  bool deterministic = false;
  bool refine = false;  // also evaluate at h/2 and require every residual to drop
};

struct FitOptions {
  std::string series;
  std::string column = "P2";
  double t_lo = 2.0;
  double t_hi = 10.0;
};

/// Columns of a series file by header name; non-numeric cells become NaN.
struct SeriesTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  const std::vector<double>& column(const std::string& name) const;
};
SeriesTable read_series(const std::string& path);

/// Directory layout written by cmd_run.
std::string series_path(const std::string& out_dir);
std::string snapshot_path(const std::string& out_dir, long step);
std::string resolved_config_path(const std::string& out_dir);

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err);
int cmd_verify_kernel(const KernelSuiteOptions& opt, std::ostream& out);
int cmd_verify_identities(const IdentityOptions& opt, std::ostream& out, std::ostream& err);
int cmd_fit(const FitOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace axisym

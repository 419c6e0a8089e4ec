#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace parhyb {

// One row per completed iteration plus the initial row (n = 0).
struct TraceRow {
  int n = 0;
  double x_norm = 0.0;
  double step_residual = 0.0;
  double eps_n = 0.0;
  double t_vi_phase_s = 0.0;
  double t_fp_phase_s = 0.0;
  double t_ep_phase_s = 0.0;
  double t_proj_s = 0.0;
  std::size_t n_halfspaces = 0;
};

struct Trace {
  std::vector<TraceRow> rows;

  void write_csv(std::ostream& out) const;
  void write_csv_file(const std::string& path) const;
  static Trace read_csv(std::istream& in);
  static Trace read_csv_file(const std::string& path);

  // Bit-for-bit equality of the trajectory columns (n, x_norm,
  // step_residual, eps_n, n_halfspaces). Wall-clock columns are excluded:
  // they vary run to run even for identical trajectories.
  bool same_trajectory(const Trace& other) const;

  bool operator==(const Trace& other) const;
};

}  // namespace parhyb

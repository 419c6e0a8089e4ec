#include "parhyb/trace.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "parhyb/errors.hpp"

namespace parhyb {

namespace {

constexpr const char* kHeader =
    "n,x_norm,step_residual,eps_n,t_vi_phase_s,t_fp_phase_s,t_ep_phase_s,"
    "t_proj_s,n_halfspaces";

// 17 significant digits round-trip IEEE doubles exactly.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& field, int line) {
  try {
    std::size_t used = 0;
    double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw Error("trace csv: bad numeric field '" + field + "' on line " +
                std::to_string(line));
  }
}

bool bits_equal(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

}  // namespace

void Trace::write_csv(std::ostream& out) const {
  out << kHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << fmt(r.x_norm) << ',' << fmt(r.step_residual) << ','
        << fmt(r.eps_n) << ',' << fmt(r.t_vi_phase_s) << ','
        << fmt(r.t_fp_phase_s) << ',' << fmt(r.t_ep_phase_s) << ','
        << fmt(r.t_proj_s) << ',' << r.n_halfspaces << '\n';
  }
}

void Trace::write_csv_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("trace csv: cannot open '" + path + "' for writing");
  write_csv(out);
}

Trace Trace::read_csv(std::istream& in) {
  Trace trace;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != kHeader) throw Error("trace csv: unexpected header");
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9) {
      throw Error("trace csv: expected 9 fields on line " +
                  std::to_string(lineno));
    }
    TraceRow r;
    r.n = static_cast<int>(parse_double(fields[0], lineno));
    r.x_norm = parse_double(fields[1], lineno);
    r.step_residual = parse_double(fields[2], lineno);
    r.eps_n = parse_double(fields[3], lineno);
    r.t_vi_phase_s = parse_double(fields[4], lineno);
    r.t_fp_phase_s = parse_double(fields[5], lineno);
    r.t_ep_phase_s = parse_double(fields[6], lineno);
    r.t_proj_s = parse_double(fields[7], lineno);
    r.n_halfspaces = static_cast<std::size_t>(parse_double(fields[8], lineno));
    trace.rows.push_back(r);
  }
  return trace;
}

Trace Trace::read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("trace csv: cannot open '" + path + "'");
  return read_csv(in);
}

bool Trace::same_trajectory(const Trace& other) const {
  if (rows.size() != other.rows.size()) return false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& a = rows[i];
    const auto& b = other.rows[i];
    if (a.n != b.n || a.n_halfspaces != b.n_halfspaces) return false;
    if (!bits_equal(a.x_norm, b.x_norm)) return false;
    if (!bits_equal(a.step_residual, b.step_residual)) return false;
    if (!bits_equal(a.eps_n, b.eps_n)) return false;
  }
  return true;
}

bool Trace::operator==(const Trace& other) const {
  if (rows.size() != other.rows.size()) return false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& a = rows[i];
    const auto& b = other.rows[i];
    if (a.n != b.n || a.n_halfspaces != b.n_halfspaces) return false;
    if (!bits_equal(a.x_norm, b.x_norm) ||
        !bits_equal(a.step_residual, b.step_residual) ||
        !bits_equal(a.eps_n, b.eps_n) ||
        !bits_equal(a.t_vi_phase_s, b.t_vi_phase_s) ||
        !bits_equal(a.t_fp_phase_s, b.t_fp_phase_s) ||
        !bits_equal(a.t_ep_phase_s, b.t_ep_phase_s) ||
        !bits_equal(a.t_proj_s, b.t_proj_s)) {
      return false;
    }
  }
  return true;
}

}  // namespace parhyb

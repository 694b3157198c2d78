// io.hpp - CSV writers and readers for every artifact the tools emit.
//
// All numeric fields are written with 6 significant digits ("%.6g"), so
// a given dataset serializes byte-identically on every run.
#pragma once

#include <cstdio>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "nvpol/dynamics.hpp"
#include "nvpol/errors.hpp"
#include "nvpol/inference.hpp"
#include "nvpol/montecarlo.hpp"
#include "nvpol/optics.hpp"
#include "nvpol/spectra.hpp"

namespace nvpol::io {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

inline void check_write(const std::ofstream& out, const std::string& path) {
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace detail

inline void write_contrast_table(const std::string& path,
                                 std::span<const ContrastTableRow> rows) {
  auto out = detail::open_out(path);
  out << "gamma_inv_ns,contrast,alpha\n";
  for (const auto& r : rows)
    out << num(r.gamma_inv_ns) << ',' << num(r.contrast) << ',' << num(r.alpha) << '\n';
  detail::check_write(out, path);
}

inline void write_sweep(const std::string& path, std::span<const AngleIntensity> points) {
  auto out = detail::open_out(path);
  out << "angle_deg,intensity\n";
  for (const auto& p : points) out << num(p.angle_deg) << ',' << num(p.intensity) << '\n';
  detail::check_write(out, path);
}

inline void write_qwp_scan(const std::string& path, std::span<const QwpScanPoint> points) {
  auto out = detail::open_out(path);
  out << "qwp_deg,contrast\n";
  for (const auto& p : points) out << num(p.qwp_deg) << ',' << num(p.contrast) << '\n';
  detail::check_write(out, path);
}

inline void write_spectrum(const std::string& path, std::span<const SpectrumPoint> points) {
  auto out = detail::open_out(path);
  out << "freq_ghz,counts\n";
  for (const auto& p : points) out << num(p.freq_ghz) << ',' << num(p.counts) << '\n';
  detail::check_write(out, path);
}

/// Long-form accumulation: one row per (angle, frequency) cell.
inline void write_accumulation(const std::string& path, const Accumulation& acc) {
  auto out = detail::open_out(path);
  out << "angle_deg,freq_ghz,counts\n";
  for (std::size_t r = 0; r < acc.counts.size(); ++r)
    for (std::size_t j = 0; j < acc.freqs_ghz.size(); ++j)
      out << num(acc.angles_deg[r]) << ',' << num(acc.freqs_ghz[j]) << ','
          << num(acc.counts[r][j]) << '\n';
  detail::check_write(out, path);
}

inline void write_samples(const std::string& path,
                          std::span<const mc::TrajectorySample> samples) {
  auto out = detail::open_out(path);
  out << "emission_ns,branch,n_flips\n";
  for (const auto& s : samples)
    out << num(s.emission_ns) << ',' << branch_name(s.branch_at_emission) << ','
        << s.n_flips << '\n';
  detail::check_write(out, path);
}

inline void write_occupation(const std::string& path,
                             std::span<const mc::OccupationPoint> points) {
  auto out = detail::open_out(path);
  out << "t_ns,p_x_hat,sigma\n";
  for (const auto& p : points)
    out << num(p.t_ns) << ',' << num(p.p_x_hat) << ',' << num(p.sigma) << '\n';
  detail::check_write(out, path);
}

inline void write_report(const std::string& path, std::span<const BatchRow> rows) {
  auto out = detail::open_out(path);
  out << "id,contrast,contrast_sigma,gamma_inv_ns,ci_low_ns,ci_high_ns,flag\n";
  for (const auto& r : rows)
    out << r.id << ',' << num(r.contrast) << ',' << num(r.contrast_sigma) << ','
        << num(r.gamma_inv_ns) << ',' << num(r.ci_low_ns) << ',' << num(r.ci_high_ns) << ','
        << r.flag << '\n';
  detail::check_write(out, path);
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

inline double parse_field(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size())
    throw DataError(where + ": cannot parse '" + text + "' as a number");
  return v;
}

}  // namespace detail

/// Reads a polarizer sweep written by write_sweep. The exact header
/// "angle_deg,intensity" is required; parse failures report the path
/// and 1-based line number.
inline std::vector<AngleIntensity> read_sweep(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || detail::strip_cr(line) != "angle_deg,intensity")
    throw DataError(path + ":1: expected header 'angle_deg,intensity'");
  std::vector<AngleIntensity> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    const auto fields = detail::split(line, ',');
    const std::string where = path + ":" + std::to_string(line_no);
    if (fields.size() != 2) throw DataError(where + ": expected 2 fields");
    out.push_back({detail::parse_field(fields[0], where),
                   detail::parse_field(fields[1], where)});
  }
  return out;
}

}  // namespace nvpol::io

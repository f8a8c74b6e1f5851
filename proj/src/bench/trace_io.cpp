#include "fhbeam/bench/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace fhbeam::bench {

namespace {

std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::stringstream ss(s);
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

}  // namespace

void emit_trace(const IterationTrace& trace, const TraceMeta& meta,
                const std::string& path) {
  if (trace.records.empty()) {
    throw std::invalid_argument("emit_trace: refusing to write an empty trace");
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("emit_trace: cannot open '" + path + "'");
  out << "# scenario=" << meta.scenario << "\n";
  out << "# variant=" << meta.variant << "\n";
  out << "# seed=" << meta.seed << "\n";
  out << "# M=" << meta.tx_antennas << " N=" << meta.rx_antennas
      << " K=" << meta.users_per_cell << " d=" << meta.streams
      << " L=" << meta.num_cells << " T=" << meta.horizon << "\n";
  out << "outer_iter,inner_iter,cumulative_seconds,wsr_bits,inner_objective\n";
  for (const auto& r : trace.records) {
    out << r.outer_iter << ",";
    if (r.inner_iter >= 0) out << r.inner_iter;
    out << "," << format_double(r.cumulative_seconds, "%.6f") << ","
        << format_double(r.wsr_bits, "%.15g") << ",";
    if (r.inner_objective) out << format_double(*r.inner_objective, "%.15g");
    out << "\n";
  }
  out.flush();
  if (!out) throw std::runtime_error("emit_trace: write failed for '" + path + "'");
}

void validate_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("validate_trace_file: cannot open '" + path + "'");
  std::string line;
  bool header_seen = false;
  double prev_seconds = -1.0;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "outer_iter,inner_iter,cumulative_seconds,wsr_bits,inner_objective") {
        throw std::runtime_error("validate_trace_file: bad header in '" + path + "'");
      }
      header_seen = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 5) {
      throw std::runtime_error("validate_trace_file: bad row '" + line + "'");
    }
    const double s = std::stod(cols[2]);
    if (!(s >= prev_seconds)) {
      throw std::runtime_error(
          "validate_trace_file: cumulative_seconds decreased in '" + path + "'");
    }
    prev_seconds = s;
    ++rows;
  }
  if (!header_seen || rows == 0) {
    throw std::runtime_error("validate_trace_file: no data rows in '" + path + "'");
  }
}

std::string read_trace_without_timing(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream out;
  std::string line;
  bool in_data = false;
  while (std::getline(in, line)) {
    if (!in_data) {
      out << line << "\n";
      if (!line.empty() && line.front() != '#') in_data = true;  // header row
      continue;
    }
    auto cols = split(line, ',');
    if (cols.size() == 5) cols[2].clear();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      out << (i ? "," : "") << cols[i];
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace fhbeam::bench

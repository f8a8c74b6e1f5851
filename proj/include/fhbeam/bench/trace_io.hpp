#pragma once

#include <string>

#include "fhbeam/solver.hpp"

namespace fhbeam::bench {

struct TraceMeta {
  std::string scenario;
  std::string variant;  // solver display name from the config
  std::uint64_t seed = 0;
  int tx_antennas = 0;
  int rx_antennas = 0;
  int users_per_cell = 0;
  int streams = 0;
  int num_cells = 0;
  int horizon = 0;
};

/// Writes one CSV trace: a '#' metadata block, a header row, one data row per
/// record. Throws std::runtime_error (with the path) on I/O failure and
/// std::invalid_argument on an empty trace.
void emit_trace(const IterationTrace& trace, const TraceMeta& meta,
                const std::string& path);

/// Re-reads an emitted file and checks the schema plus the nondecreasing
/// cumulative_seconds contract. Throws on violation.
void validate_trace_file(const std::string& path);

/// Loads the CSV back with the cumulative_seconds column blanked, for
/// byte-level comparisons that must ignore timing.
std::string read_trace_without_timing(const std::string& path);

}  // namespace fhbeam::bench

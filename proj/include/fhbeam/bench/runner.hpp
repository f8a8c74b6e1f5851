#pragma once

#include <string>
#include <vector>

#include "fhbeam/bench/config.hpp"

namespace fhbeam::bench {

struct SummaryRow {
  std::string scenario;
  std::string variant;
  int tx_antennas = 0;
  std::string seed;  // seed number, "mean", and the error tag live here
  double final_wsr_bits = 0.0;
  double total_seconds = 0.0;
  double outer_iters = 0.0;
  bool error = false;
  std::string error_message;
};

struct ExperimentResult {
  std::vector<SummaryRow> rows;  // per-run rows followed by mean rows
  std::vector<std::string> trace_files;
  bool any_solver_error = false;
};

/// Runs the full (solver x seed [x sweep antenna]) matrix of the spec: one
/// channel realization per (seed, M) shared across solvers, one trace file
/// per run, and summary.csv with per-run rows plus mean-over-seeds rows.
/// Solver failures are recorded and the remaining cells still run.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const std::string& out_dir);

/// Runs the chebyshev brute-force oracle and the dense spectral-containment
/// oracle, printing one line per check; returns false on any violation.
bool run_oracles();

}  // namespace fhbeam::bench

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhbeam/solver.hpp"

namespace fhbeam::bench {

/// Raised for malformed or invalid experiment configs; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scenario {
  kConvergenceIters,
  kConvergenceTime,
  kInnerQpTrace,
  kAntennaSweep,
  kMulticellConvergenceIters,
  kMulticellConvergenceTime,
};

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

struct NamedSolver {
  std::string name;
  SolverConfig config;
};

struct ExperimentSpec {
  Scenario scenario = Scenario::kConvergenceIters;
  SystemConfig system;
  std::vector<NamedSolver> solvers;
  std::vector<std::uint64_t> seeds;
  std::vector<int> sweep_antennas;                // antenna_sweep only
  std::optional<double> time_budget_seconds;
  int trace_outer_iter = 1;                       // inner_qp_trace only

  /// Throws ConfigError on cross-field violations.
  void validate() const;
};

/// Parses the sectioned key=value format ([system] / [experiment] /
/// [solver.<name>]); unknown sections or keys, duplicates, and dimension
/// violations are ConfigErrors with the offending line quoted.
ExperimentSpec parse_config(const std::string& path);
ExperimentSpec parse_config_text(const std::string& text,
                                 const std::string& origin = "<string>");

/// Canonical lossless form: parse(serialize(spec)) reproduces spec exactly.
std::string serialize_config(const ExperimentSpec& spec);

}  // namespace fhbeam::bench

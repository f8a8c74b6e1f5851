#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fhbeam/chebyshev.hpp"
#include "fhbeam/fp.hpp"
#include "fhbeam/network.hpp"

namespace fhbeam {

enum class SolverVariant { kExactWmmse, kFiniteHorizon, kConstantGd };
enum class SpectralRefresh { kEveryOuter, kOnce };

std::string variant_name(SolverVariant v);
SolverVariant variant_from_name(const std::string& name);

struct SolverConfig {
  SolverVariant variant = SolverVariant::kFiniteHorizon;
  int horizon = 5;  // T
  int max_outer_iters = 200;
  double rel_tol = 1e-5;
  std::uint64_t seed = 1;
  SpectralRefresh spectral_refresh = SpectralRefresh::kEveryOuter;
  std::optional<double> time_budget_seconds;  // checked between outer iterations

  void validate() const;
};

struct TraceRecord {
  int outer_iter = 0;
  int inner_iter = -1;  // -1: outer-level record
  double cumulative_seconds = 0.0;
  double wsr_bits = 0.0;
  std::optional<double> inner_objective;
};

struct IterationTrace {
  std::vector<TraceRecord> records;
};

struct SolverResult {
  PrecoderSet precoders;  // power-normalized
  IterationTrace trace;
  int outer_iters = 0;
  double final_wsr_bits = 0.0;
  /// Exact variant only: max over users of ||D V - Q||_F at the last solve.
  double last_solve_residual = 0.0;
};

/// Observation hooks into the gradient variants' inner loop; used by the
/// inner-trace scenario and by tests. Never alters the trajectory.
struct InnerHooks {
  std::function<void(int outer, const PrecoderSet& v,
                     const std::vector<fp::QuadraticProgram>& qps,
                     const std::vector<StepSchedule>& schedules)>
      before_inner;
  std::function<void(int outer, int step, const PrecoderSet& v,
                     const std::vector<fp::QuadraticProgram>& qps)>
      after_inner_step;
};

/// Block-coordinate ascent with the exact per-user solve V = D^-1 Q (pays the
/// dense M x M cost on purpose).
SolverResult run_exact_wmmse(const ChannelSet& channels, const SolverConfig& config,
                             const std::optional<PrecoderSet>& init = {});

/// Finite-horizon variant: T gradient steps per user with the Chebyshev
/// schedule on the estimated spectral interval, warm-started, matrix-free.
SolverResult run_finite_horizon(const ChannelSet& channels, const SolverConfig& config,
                                const std::optional<PrecoderSet>& init = {},
                                const InnerHooks* hooks = nullptr);

/// Baseline: identical loop with the constant step size 2/(l1+lM).
SolverResult run_constant_gd(const ChannelSet& channels, const SolverConfig& config,
                             const std::optional<PrecoderSet>& init = {},
                             const InnerHooks* hooks = nullptr);

/// Dispatch on config.variant.
SolverResult run_solver(const ChannelSet& channels, const SolverConfig& config,
                        const std::optional<PrecoderSet>& init = {},
                        const InnerHooks* hooks = nullptr);

/// Exactly schedule.horizon gradient steps on one user's quadratic program.
CMat solve_qp_finite_horizon(const fp::QuadraticProgram& qp, const CMat& v0,
                             int user, const StepSchedule& schedule);

}  // namespace fhbeam

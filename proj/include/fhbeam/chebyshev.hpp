#pragma once

#include <vector>

#include "fhbeam/linalg.hpp"

namespace fhbeam {

enum class ScheduleKind { kChebyshev, kConstant };

/// A finite-horizon step-size schedule for gradient descent on a quadratic
/// whose spectrum lies in `interval`. `predicted_factor` is the contraction
/// factor of the distance bound that applies to this kind:
///   constant:   (1 - 2/(kappa+1))^T
///   chebyshev:  2 (1 - 2/(sqrt(kappa)+1))^T
struct StepSchedule {
  int horizon = 0;
  std::vector<double> etas;
  ScheduleKind kind = ScheduleKind::kChebyshev;
  linalg::SpectralInterval interval;
  double predicted_factor = 0.0;
};

/// Roots of cos(T arccos x): xi_t = cos((t + 1/2) pi / T), strictly
/// decreasing, exactly antisymmetric (xi_t = -xi_{T-1-t}; middle node of an
/// odd horizon is exactly zero).
std::vector<double> chebyshev_nodes(int horizon);

/// Optimal distinct step sizes: eta_t = 1 / (midpoint + halfwidth * xi_t).
StepSchedule chebyshev_schedule(int horizon, const linalg::SpectralInterval& interval);

/// Best identical step size: eta = 2 / (lambda_min + lambda_max) for every t.
StepSchedule constant_schedule(int horizon, const linalg::SpectralInterval& interval);

/// sup over lambda in the interval of |prod_t (1 - eta_t lambda)|, evaluated
/// on a dense grid plus the endpoints and the mapped Chebyshev extrema. The
/// factors are multiplied in sorted-eta order so the value is exactly
/// invariant under permutations of the schedule.
double minimax_value(const StepSchedule& schedule);

struct BruteForceResult {
  double value = 0.0;
  std::vector<double> etas;  // best tuple found, ascending
};

/// Exhaustive grid search over step-size tuples in [0, 2/lambda_min]^T.
/// Supported for horizon <= 3 only; the cost grows exponentially.
BruteForceResult brute_force_minimax(int horizon,
                                     const linalg::SpectralInterval& interval,
                                     int grid_resolution = 400);

}  // namespace fhbeam

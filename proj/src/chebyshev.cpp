#include "fhbeam/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fhbeam {

namespace {

void check_horizon(int horizon) {
  if (horizon < 1) {
    throw std::invalid_argument("horizon must be >= 1, got " +
                                std::to_string(horizon));
  }
}

double contraction_factor(ScheduleKind kind, double kappa, int horizon) {
  if (kind == ScheduleKind::kConstant) {
    return std::pow(1.0 - 2.0 / (kappa + 1.0), horizon);
  }
  return 2.0 * std::pow(1.0 - 2.0 / (std::sqrt(kappa) + 1.0), horizon);
}

// |prod_t (1 - eta_t * lambda)| with factors in ascending-eta order, so the
// result does not depend on the order the schedule stores them in.
double abs_product_at(const std::vector<double>& sorted_etas, double lambda) {
  double p = 1.0;
  for (const double eta : sorted_etas) {
    p *= 1.0 - eta * lambda;
  }
  return std::abs(p);
}

}  // namespace

std::vector<double> chebyshev_nodes(int horizon) {
  check_horizon(horizon);
  std::vector<double> xi(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon / 2; ++t) {
    xi[t] = std::cos((t + 0.5) * std::numbers::pi / horizon);
    xi[horizon - 1 - t] = -xi[t];
  }
  if (horizon % 2 == 1) {
    xi[horizon / 2] = 0.0;
  }
  return xi;
}

StepSchedule chebyshev_schedule(int horizon,
                                const linalg::SpectralInterval& interval) {
  check_horizon(horizon);
  const auto iv = linalg::make_interval(interval.lambda_min, interval.lambda_max);
  const double mid = 0.5 * (iv.lambda_max + iv.lambda_min);
  const double halfwidth = 0.5 * (iv.lambda_max - iv.lambda_min);
  StepSchedule s;
  s.horizon = horizon;
  s.kind = ScheduleKind::kChebyshev;
  s.interval = iv;
  s.etas.reserve(static_cast<std::size_t>(horizon));
  for (const double xi : chebyshev_nodes(horizon)) {
    s.etas.push_back(1.0 / (mid + halfwidth * xi));
  }
  s.predicted_factor = contraction_factor(s.kind, iv.kappa, horizon);
  return s;
}

StepSchedule constant_schedule(int horizon,
                               const linalg::SpectralInterval& interval) {
  check_horizon(horizon);
  const auto iv = linalg::make_interval(interval.lambda_min, interval.lambda_max);
  StepSchedule s;
  s.horizon = horizon;
  s.kind = ScheduleKind::kConstant;
  s.interval = iv;
  s.etas.assign(static_cast<std::size_t>(horizon),
                2.0 / (iv.lambda_min + iv.lambda_max));
  s.predicted_factor = contraction_factor(s.kind, iv.kappa, horizon);
  return s;
}

double minimax_value(const StepSchedule& schedule) {
  const auto& iv = schedule.interval;
  std::vector<double> etas = schedule.etas;
  std::sort(etas.begin(), etas.end());

  const double mid = 0.5 * (iv.lambda_max + iv.lambda_min);
  const double halfwidth = 0.5 * (iv.lambda_max - iv.lambda_min);

  double sup = std::max(abs_product_at(etas, iv.lambda_min),
                        abs_product_at(etas, iv.lambda_max));
  // Interior extrema of the degree-T Chebyshev polynomial, mapped through the
  // affine change of variables lambda = mid - halfwidth * x.
  for (int k = 1; k < schedule.horizon; ++k) {
    const double x = std::cos(k * std::numbers::pi / schedule.horizon);
    sup = std::max(sup, abs_product_at(etas, mid - halfwidth * x));
  }
  constexpr int kGridPoints = 10001;
  for (int i = 0; i < kGridPoints; ++i) {
    const double lambda =
        iv.lambda_min +
        (iv.lambda_max - iv.lambda_min) * static_cast<double>(i) / (kGridPoints - 1);
    sup = std::max(sup, abs_product_at(etas, lambda));
  }
  return sup;
}

BruteForceResult brute_force_minimax(int horizon,
                                     const linalg::SpectralInterval& interval,
                                     int grid_resolution) {
  check_horizon(horizon);
  if (horizon > 3) {
    throw std::invalid_argument(
        "brute_force_minimax: horizon > 3 is intractable");
  }
  if (grid_resolution < 2) {
    throw std::invalid_argument("brute_force_minimax: need >= 2 grid points");
  }
  const auto iv = linalg::make_interval(interval.lambda_min, interval.lambda_max);

  // Evaluation abscissae, discriminating points first so the pruned scan
  // rejects bad tuples early.
  std::vector<double> lambdas;
  lambdas.push_back(iv.lambda_min);
  lambdas.push_back(iv.lambda_max);
  const double mid = 0.5 * (iv.lambda_max + iv.lambda_min);
  const double halfwidth = 0.5 * (iv.lambda_max - iv.lambda_min);
  for (int k = 1; k < horizon; ++k) {
    lambdas.push_back(mid - halfwidth * std::cos(k * std::numbers::pi / horizon));
  }
  constexpr int kLambdaGrid = 257;
  for (int i = 1; i + 1 < kLambdaGrid; ++i) {
    lambdas.push_back(iv.lambda_min + (iv.lambda_max - iv.lambda_min) *
                                          static_cast<double>(i) /
                                          (kLambdaGrid - 1));
  }
  const int np = static_cast<int>(lambdas.size());

  std::vector<double> etas(static_cast<std::size_t>(grid_resolution));
  for (int i = 0; i < grid_resolution; ++i) {
    etas[i] = (2.0 / iv.lambda_min) * static_cast<double>(i) / (grid_resolution - 1);
  }

  // factor[i * np + p] = 1 - eta_i * lambda_p
  std::vector<double> factor(static_cast<std::size_t>(grid_resolution) * np);
  for (int i = 0; i < grid_resolution; ++i) {
    for (int p = 0; p < np; ++p) {
      factor[static_cast<std::size_t>(i) * np + p] = 1.0 - etas[i] * lambdas[p];
    }
  }

  double best = std::numeric_limits<double>::infinity();
  std::array<int, 3> best_idx{0, 0, 0};

  // The objective is symmetric in the tuple, so only ascending tuples are
  // scanned.
  auto scan = [&](int i, int j, int k) {
    const double* fi = factor.data() + static_cast<std::size_t>(i) * np;
    const double* fj = factor.data() + static_cast<std::size_t>(j) * np;
    const double* fk = factor.data() + static_cast<std::size_t>(k) * np;
    double m = 0.0;
    for (int p = 0; p < np; ++p) {
      double v = fi[p];
      if (horizon >= 2) v *= fj[p];
      if (horizon >= 3) v *= fk[p];
      v = std::abs(v);
      if (v > m) {
        m = v;
        if (m >= best) return;  // cannot improve
      }
    }
    best = m;
    best_idx = {i, j, k};
  };

  if (horizon == 1) {
    for (int i = 0; i < grid_resolution; ++i) scan(i, 0, 0);
  } else if (horizon == 2) {
    for (int i = 0; i < grid_resolution; ++i)
      for (int j = i; j < grid_resolution; ++j) scan(i, j, 0);
  } else {
    for (int i = 0; i < grid_resolution; ++i)
      for (int j = i; j < grid_resolution; ++j)
        for (int k = j; k < grid_resolution; ++k) scan(i, j, k);
  }

  BruteForceResult result;
  result.value = best;
  for (int t = 0; t < horizon; ++t) {
    result.etas.push_back(etas[static_cast<std::size_t>(best_idx[static_cast<std::size_t>(t)])]);
  }
  return result;
}

}  // namespace fhbeam

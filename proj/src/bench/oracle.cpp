#include <cmath>
#include <cstdio>
#include <iostream>

#include "fhbeam/bench/runner.hpp"
#include "fhbeam/chebyshev.hpp"
#include "fhbeam/fp.hpp"

namespace fhbeam::bench {

namespace {

// Slack covering the discreteness of the brute-force search: twice the grid
// cell diameter times a Lipschitz estimate of the minimax objective taken at
// the optimal schedule.
double brute_force_slack(const StepSchedule& schedule, int grid_resolution) {
  const auto& iv = schedule.interval;
  const double cell = (2.0 / iv.lambda_min) / (grid_resolution - 1);
  const double diameter = cell * std::sqrt(static_cast<double>(schedule.horizon));
  double lipschitz = 0.0;
  constexpr int kGrid = 2001;
  for (int i = 0; i < kGrid; ++i) {
    const double lambda =
        iv.lambda_min + (iv.lambda_max - iv.lambda_min) * i / (kGrid - 1);
    double sum = 0.0;
    for (std::size_t t = 0; t < schedule.etas.size(); ++t) {
      double prod = lambda;
      for (std::size_t s = 0; s < schedule.etas.size(); ++s) {
        if (s != t) prod *= std::abs(1.0 - schedule.etas[s] * lambda);
      }
      sum += prod;
    }
    lipschitz = std::max(lipschitz, sum);
  }
  return 2.0 * diameter * lipschitz;
}

bool chebyshev_oracle() {
  bool ok = true;
  const double pairs[][2] = {{1.0, 1.5}, {1.0, 3.0}, {0.5, 5.0}, {2.0, 20.0}};
  for (int horizon = 1; horizon <= 3; ++horizon) {
    for (const auto& p : pairs) {
      const auto interval = linalg::make_interval(p[0], p[1]);
      const auto schedule = chebyshev_schedule(horizon, interval);
      const double optimal = minimax_value(schedule);
      const auto brute = brute_force_minimax(horizon, interval);
      const double slack = brute_force_slack(schedule, 400);
      const bool pass = brute.value >= optimal - slack;
      std::printf("[%s] chebyshev oracle T=%d interval=[%g,%g]: brute=%.8f "
                  "optimal=%.8f slack=%.2e\n",
                  pass ? "ok" : "VIOLATION", horizon, p[0], p[1], brute.value,
                  optimal, slack);
      ok = ok && pass;
    }
  }
  // Closed form: T=2 on [1,3] has gamma=2, S(x)=2x^2-1, S(2)=7.
  const double closed =
      minimax_value(chebyshev_schedule(2, linalg::make_interval(1.0, 3.0)));
  const bool closed_ok = std::abs(closed - 1.0 / 7.0) < 1e-12;
  std::printf("[%s] chebyshev closed form T=2 [1,3]: %.15f vs 1/7\n",
              closed_ok ? "ok" : "VIOLATION", closed);
  return ok && closed_ok;
}

bool dense_containment_oracle() {
  bool ok = true;
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    SystemConfig sys;
    sys.num_cells = seed % 2 == 0 ? 3 : 1;
    sys.tx_antennas = 16 + static_cast<int>(seed % 3) * 16;  // 16, 32, 48
    sys.rx_antennas = 2;
    sys.streams = 2;
    sys.users_per_cell = 2 + static_cast<int>(seed % 2);
    sys.noise_power = 1.0;
    sys.power_budget = 10.0;
    sys.shadowing_sigma_db = 8.0;

    const ChannelSet channels = generate_channels(sys, seed);
    const PrecoderSet v = random_precoders(sys, seed + 1000);
    fp::AuxState aux;
    aux.gamma = fp::update_gamma(channels, v);
    aux.y = fp::update_y(channels, v, aux.gamma);
    const auto qps = fp::build_qps(channels, aux, true, seed);
    for (const auto& qp : qps) {
      if (qp.degenerate) continue;
      const CMat dense = linalg::dense_matrix(qp.d_op);
      Eigen::SelfAdjointEigenSolver<CMat> eig(dense);
      const double lo = eig.eigenvalues().minCoeff();
      const double hi = eig.eigenvalues().maxCoeff();
      const double tol = 1e-9 * std::max(1.0, hi);
      const bool pass = lo >= qp.spectral.lambda_min - tol &&
                        hi <= qp.spectral.lambda_max + tol;
      if (!pass) {
        std::printf("[VIOLATION] dense oracle seed=%llu cell=%d: spectrum "
                    "[%.6e, %.6e] not inside [%.6e, %.6e]\n",
                    static_cast<unsigned long long>(seed), qp.cell, lo, hi,
                    qp.spectral.lambda_min, qp.spectral.lambda_max);
        ok = false;
      }
      ++checked;
    }
  }
  if (ok) {
    std::printf("[ok] dense spectral containment on %d operators\n", checked);
  }
  return ok;
}

}  // namespace

bool run_oracles() {
  const bool cheb = chebyshev_oracle();
  const bool dense = dense_containment_oracle();
  return cheb && dense;
}

}  // namespace fhbeam::bench

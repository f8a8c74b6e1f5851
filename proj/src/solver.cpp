#include "fhbeam/solver.hpp"

#include <chrono>
#include <cmath>

namespace fhbeam {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  return x;
}

SolverResult run_internal(const ChannelSet& channels, const SolverConfig& cfg,
                          const std::optional<PrecoderSet>& init,
                          const InnerHooks* hooks) {
  cfg.validate();
  channels.config.validate();
  const auto& sys = channels.config;
  const bool exact = cfg.variant == SolverVariant::kExactWmmse;

  PrecoderSet v = init ? *init : random_precoders(sys, cfg.seed);
  for (int l = 0; l < sys.num_cells; ++l) {
    if (!(v.cell_power(l) > 0.0)) {
      throw std::invalid_argument("initial precoders of cell " +
                                  std::to_string(l) + " are all zero");
    }
  }

  SolverResult result;
  const auto t0 = Clock::now();
  double g_prev = objective_g(channels, v);
  result.trace.records.push_back({0, -1, seconds_since(t0), g_prev, {}});

  std::vector<StepSchedule> schedules(static_cast<std::size_t>(sys.num_cells));
  bool schedules_ready = false;
  int completed = 0;

  for (int outer = 1; outer <= cfg.max_outer_iters; ++outer) {
    if (cfg.time_budget_seconds && seconds_since(t0) >= *cfg.time_budget_seconds) {
      break;
    }

    fp::AuxState aux;
    aux.gamma = fp::update_gamma(channels, v);
    aux.y = fp::update_y(channels, v, aux.gamma);

    const bool want_spectrum =
        !exact && (cfg.spectral_refresh == SpectralRefresh::kEveryOuter ||
                   !schedules_ready);
    auto qps = fp::build_qps(channels, aux, want_spectrum,
                             mix_seed(cfg.seed, static_cast<std::uint64_t>(outer)));

    if (exact) {
      result.last_solve_residual = 0.0;
      for (int l = 0; l < sys.num_cells; ++l) {
        if (qps[static_cast<std::size_t>(l)].degenerate) continue;  // all Y of the cell vanished
        const CMat dense =
            linalg::dense_matrix(qps[static_cast<std::size_t>(l)].d_op, true);
        Eigen::LLT<CMat> llt(dense);
        if (llt.info() != Eigen::Success) {
          throw std::domain_error("exact update: dense D is not positive definite");
        }
        for (int k = 0; k < sys.users_per_cell; ++k) {
          const CMat& q = qps[static_cast<std::size_t>(l)].q[static_cast<std::size_t>(k)];
          const CMat sol = llt.solve(q);
          result.last_solve_residual = std::max(
              result.last_solve_residual, (dense * sol - q).norm());
          v.at(l, k) = sol;
        }
      }
    } else {
      if (want_spectrum) {
        for (int l = 0; l < sys.num_cells; ++l) {
          const auto& qp = qps[static_cast<std::size_t>(l)];
          if (qp.degenerate) continue;
          schedules[static_cast<std::size_t>(l)] =
              cfg.variant == SolverVariant::kFiniteHorizon
                  ? chebyshev_schedule(cfg.horizon, qp.spectral)
                  : constant_schedule(cfg.horizon, qp.spectral);
        }
        schedules_ready = true;
      }
      if (hooks && hooks->before_inner) {
        hooks->before_inner(outer, v, qps, schedules);
      }
      for (int t = 0; t < cfg.horizon; ++t) {
        for (int l = 0; l < sys.num_cells; ++l) {
          const auto& qp = qps[static_cast<std::size_t>(l)];
          if (qp.degenerate) continue;
          const double eta = schedules[static_cast<std::size_t>(l)].etas[static_cast<std::size_t>(t)];
          for (int k = 0; k < sys.users_per_cell; ++k) {
            v.at(l, k) -= eta * fp::gradient(qp, v.at(l, k), k);
          }
        }
        if (hooks && hooks->after_inner_step) {
          hooks->after_inner_step(outer, t, v, qps);
        }
      }
    }

    completed = outer;
    const double g_now = objective_g(channels, v);
    result.trace.records.push_back({outer, -1, seconds_since(t0), g_now, {}});
    const double denom = std::max(std::abs(g_now), 1e-12);
    if (std::abs(g_now - g_prev) / denom < cfg.rel_tol) {
      g_prev = g_now;
      break;
    }
    g_prev = g_now;
  }

  result.outer_iters = completed;
  result.final_wsr_bits = g_prev;
  result.precoders = power_normalize(v, sys);
  return result;
}

}  // namespace

std::string variant_name(SolverVariant v) {
  switch (v) {
    case SolverVariant::kExactWmmse: return "exact_wmmse";
    case SolverVariant::kFiniteHorizon: return "finite_horizon";
    case SolverVariant::kConstantGd: return "constant_gd";
  }
  return "unknown";
}

SolverVariant variant_from_name(const std::string& name) {
  if (name == "exact_wmmse") return SolverVariant::kExactWmmse;
  if (name == "finite_horizon") return SolverVariant::kFiniteHorizon;
  if (name == "constant_gd") return SolverVariant::kConstantGd;
  throw std::invalid_argument("unknown solver variant '" + name + "'");
}

void SolverConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("solver horizon must be >= 1");
  if (max_outer_iters < 1) {
    throw std::invalid_argument("max_outer_iters must be >= 1");
  }
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");
  if (time_budget_seconds && !(*time_budget_seconds > 0.0)) {
    throw std::invalid_argument("time budget must be > 0");
  }
}

SolverResult run_exact_wmmse(const ChannelSet& channels, const SolverConfig& config,
                             const std::optional<PrecoderSet>& init) {
  SolverConfig c = config;
  c.variant = SolverVariant::kExactWmmse;
  return run_internal(channels, c, init, nullptr);
}

SolverResult run_finite_horizon(const ChannelSet& channels, const SolverConfig& config,
                                const std::optional<PrecoderSet>& init,
                                const InnerHooks* hooks) {
  SolverConfig c = config;
  c.variant = SolverVariant::kFiniteHorizon;
  return run_internal(channels, c, init, hooks);
}

SolverResult run_constant_gd(const ChannelSet& channels, const SolverConfig& config,
                             const std::optional<PrecoderSet>& init,
                             const InnerHooks* hooks) {
  SolverConfig c = config;
  c.variant = SolverVariant::kConstantGd;
  return run_internal(channels, c, init, hooks);
}

SolverResult run_solver(const ChannelSet& channels, const SolverConfig& config,
                        const std::optional<PrecoderSet>& init,
                        const InnerHooks* hooks) {
  return run_internal(channels, config, init, hooks);
}

CMat solve_qp_finite_horizon(const fp::QuadraticProgram& qp, const CMat& v0,
                             int user, const StepSchedule& schedule) {
  CMat v = v0;
  for (int t = 0; t < schedule.horizon; ++t) {
    v -= schedule.etas[static_cast<std::size_t>(t)] * fp::gradient(qp, v, user);
  }
  return v;
}

}  // namespace fhbeam

#include "fhbeam/network.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fhbeam/rng.hpp"

namespace fhbeam {

namespace {

void check_indices(const SystemConfig& cfg, int cell, int user) {
  if (cell < 0 || cell >= cfg.num_cells || user < 0 || user >= cfg.users_per_cell) {
    throw std::out_of_range("user index (" + std::to_string(cell) + ", " +
                            std::to_string(user) + ") out of range");
  }
}

CMat fill_cgaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  CMat m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      m(r, c) = rng.cgaussian();
    }
  }
  return m;
}

// Interference-plus-noise matrix at user (cell, user); `noise` is the
// coefficient of the identity. Sums H_{lk,i} V_ij (V_ij)^H H_{lk,i}^H over
// every (i, j) except the served stream.
CMat interference_matrix(const ChannelSet& ch, const PrecoderSet& p, int cell,
                         int user, double noise) {
  const auto& cfg = ch.config;
  CMat f = noise * CMat::Identity(cfg.rx_antennas, cfg.rx_antennas);
  for (int i = 0; i < cfg.num_cells; ++i) {
    const CMat& g = ch.channel(cell, user, i);
    for (int j = 0; j < cfg.users_per_cell; ++j) {
      if (i == cell && j == user) continue;
      const CMat s = g * p.at(i, j);
      f.noalias() += s * s.adjoint();
    }
  }
  return f;
}

double rate_with_noise(const ChannelSet& ch, const PrecoderSet& p, int cell,
                       int user, double noise) {
  const auto& cfg = ch.config;
  const CMat f = interference_matrix(ch, p, cell, user, noise);
  const CMat s = ch.channel(cell, user, cell) * p.at(cell, user);
  CMat inner = CMat::Identity(cfg.streams, cfg.streams) +
               s.adjoint() * linalg::solve_hpd(f, s);
  inner = 0.5 * (inner + inner.adjoint()).eval();
  return std::max(0.0, linalg::logdet_hpd(inner));
}

double scaled_noise_coefficient(const ChannelSet& ch, const PrecoderSet& p,
                                int cell) {
  const double cell_power = p.cell_power(cell);
  if (!(cell_power > 0.0)) {
    throw std::domain_error("cell " + std::to_string(cell) +
                            " has all-zero precoders; scaled-noise objective "
                            "is undefined at V = 0");
  }
  return ch.config.noise_power / ch.config.power_budget * cell_power;
}

}  // namespace

double SystemConfig::weight(int cell, int user) const {
  check_indices(*this, cell, user);
  if (weights.empty()) return 1.0;
  return weights[static_cast<std::size_t>(cell * users_per_cell + user)];
}

void SystemConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (num_cells < 1) fail("cells must be >= 1");
  if (tx_antennas < 1) fail("tx_antennas must be >= 1");
  if (rx_antennas < 1) fail("rx_antennas must be >= 1");
  if (streams < 1) fail("streams must be >= 1");
  if (users_per_cell < 1) fail("users_per_cell must be >= 1");
  if (streams > rx_antennas) {
    fail("streams = " + std::to_string(streams) + " violates streams <= rx_antennas (= " +
         std::to_string(rx_antennas) + "): at most d <= N data streams per user");
  }
  if (tx_antennas < rx_antennas) fail("tx_antennas must be >= rx_antennas");
  if (!(noise_power > 0.0)) fail("noise power must be positive");
  if (!(power_budget > 0.0)) fail("power budget must be positive");
  if (!weights.empty() &&
      weights.size() != static_cast<std::size_t>(user_count())) {
    fail("weights must have one entry per (cell, user) or be empty");
  }
  for (double w : weights) {
    if (!(w > 0.0)) fail("weights must be strictly positive");
  }
  if (!(bs_spacing_m > 0.0) || !(cell_radius_m > 0.0)) {
    fail("geometry lengths must be positive");
  }
  if (shadowing_sigma_db < 0.0) fail("shadowing sigma must be >= 0");
}

double PrecoderSet::cell_power(int cell) const {
  double acc = 0.0;
  for (int k = 0; k < users_per_cell; ++k) {
    acc += at(cell, k).squaredNorm();
  }
  return acc;
}

double pathloss_db(double distance_m) {
  return 15.3 + 37.6 * std::log10(distance_m);
}

ChannelSet generate_channels(const SystemConfig& config, std::uint64_t seed) {
  config.validate();
  const int big_l = config.num_cells;
  const int big_k = config.users_per_cell;

  ChannelSet ch;
  ch.config = config;
  ch.h.resize(static_cast<std::size_t>(big_l * big_k * big_l));
  ch.bs_positions.resize(static_cast<std::size_t>(big_l));
  ch.user_positions.resize(static_cast<std::size_t>(big_l * big_k));

  // BSs on a regular polygon with side bs_spacing (one BS sits at the origin).
  if (big_l == 1) {
    ch.bs_positions[0] = Eigen::Vector2d::Zero();
  } else {
    const double circumradius =
        config.bs_spacing_m / (2.0 * std::sin(std::numbers::pi / big_l));
    for (int i = 0; i < big_l; ++i) {
      const double a = 2.0 * std::numbers::pi * i / big_l;
      ch.bs_positions[static_cast<std::size_t>(i)] =
          Eigen::Vector2d(circumradius * std::cos(a), circumradius * std::sin(a));
    }
  }
  const double disk_radius =
      big_l == 1 ? config.cell_radius_m : 0.5 * config.bs_spacing_m;

  Rng rng(seed);
  for (int l = 0; l < big_l; ++l) {
    for (int k = 0; k < big_k; ++k) {
      Eigen::Vector2d pos;
      double own_dist = 0.0;
      for (int attempt = 0; attempt < 1000; ++attempt) {
        const double r = disk_radius * std::sqrt(rng.uniform());
        const double a = 2.0 * std::numbers::pi * rng.uniform();
        pos = ch.bs_positions[static_cast<std::size_t>(l)] +
              Eigen::Vector2d(r * std::cos(a), r * std::sin(a));
        own_dist = (pos - ch.bs_positions[static_cast<std::size_t>(l)]).norm();
        if (own_dist >= kMinDistanceM) break;
      }
      if (own_dist < kMinDistanceM) {
        // Degenerate geometry (disk no larger than the floor): pin to the floor.
        pos = ch.bs_positions[static_cast<std::size_t>(l)] +
              Eigen::Vector2d(kMinDistanceM, 0.0);
      }
      ch.user_positions[static_cast<std::size_t>(l * big_k + k)] = pos;

      for (int i = 0; i < big_l; ++i) {
        const double dist =
            std::max(kMinDistanceM,
                     (pos - ch.bs_positions[static_cast<std::size_t>(i)]).norm());
        const double shadow_db = config.shadowing_sigma_db * rng.gaussian();
        const double loss_db = pathloss_db(dist) + shadow_db;
        const double amp = std::sqrt(std::pow(10.0, -loss_db / 10.0));
        ch.h[static_cast<std::size_t>((l * big_k + k) * big_l + i)] =
            amp * fill_cgaussian(rng, config.rx_antennas, config.tx_antennas);
      }
    }
  }
  return ch;
}

PrecoderSet random_precoders(const SystemConfig& config, std::uint64_t seed) {
  config.validate();
  PrecoderSet p;
  p.num_cells = config.num_cells;
  p.users_per_cell = config.users_per_cell;
  Rng rng(seed);
  p.v.reserve(static_cast<std::size_t>(config.user_count()));
  for (int l = 0; l < config.num_cells; ++l) {
    for (int k = 0; k < config.users_per_cell; ++k) {
      p.v.push_back(fill_cgaussian(rng, config.tx_antennas, config.streams));
    }
  }
  return power_normalize(p, config);
}

double rate(const ChannelSet& channels, const PrecoderSet& precoders, int cell,
            int user) {
  check_indices(channels.config, cell, user);
  return rate_with_noise(channels, precoders, cell, user,
                         channels.config.noise_power);
}

double wsr(const ChannelSet& channels, const PrecoderSet& precoders) {
  double acc = 0.0;
  for (int l = 0; l < channels.config.num_cells; ++l) {
    for (int k = 0; k < channels.config.users_per_cell; ++k) {
      acc += channels.config.weight(l, k) * rate(channels, precoders, l, k);
    }
  }
  return acc;
}

CMat scaled_noise_matrix(const ChannelSet& channels, const PrecoderSet& precoders,
                         int cell, int user) {
  check_indices(channels.config, cell, user);
  return interference_matrix(channels, precoders, cell, user,
                             scaled_noise_coefficient(channels, precoders, cell));
}

double objective_g(const ChannelSet& channels, const PrecoderSet& precoders) {
  double acc = 0.0;
  for (int l = 0; l < channels.config.num_cells; ++l) {
    const double noise = scaled_noise_coefficient(channels, precoders, l);
    for (int k = 0; k < channels.config.users_per_cell; ++k) {
      acc += channels.config.weight(l, k) *
             rate_with_noise(channels, precoders, l, k, noise);
    }
  }
  return acc;
}

PrecoderSet power_normalize(const PrecoderSet& precoders,
                            const SystemConfig& config) {
  PrecoderSet out = precoders;
  for (int l = 0; l < precoders.num_cells; ++l) {
    const double cell_power = precoders.cell_power(l);
    if (!(cell_power > 0.0)) {
      throw std::domain_error("power_normalize: cell " + std::to_string(l) +
                              " has all-zero precoders");
    }
    const double rho = std::sqrt(config.power_budget / cell_power);
    for (int k = 0; k < precoders.users_per_cell; ++k) {
      out.at(l, k) *= rho;
    }
  }
  return out;
}

}  // namespace fhbeam

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fhbeam/linalg.hpp"

namespace fhbeam {

/// Static description of the downlink network. Powers are linear watts; dBm
/// conversion happens at config-parse time, never inside the math.
struct SystemConfig {
  int num_cells = 1;       // L
  int tx_antennas = 64;    // M
  int rx_antennas = 2;     // N
  int streams = 2;         // d
  int users_per_cell = 3;  // K
  double noise_power = 1e-11;   // sigma^2, watts (-80 dBm)
  double power_budget = 0.1;    // P per cell, watts (20 dBm)
  std::vector<double> weights;  // per (cell, user); empty means all 1
  double bs_spacing_m = 800.0;
  double cell_radius_m = 400.0;
  double shadowing_sigma_db = 8.0;

  int user_count() const { return num_cells * users_per_cell; }
  double weight(int cell, int user) const;
  /// Throws std::invalid_argument on any violated invariant (d <= N, M >= N,
  /// positive powers/weights, ...).
  void validate() const;
};

/// All downlink channels of one realization. channel(l, k, i) is the N x M
/// matrix from BS i to user k of cell l. Immutable after generation.
struct ChannelSet {
  SystemConfig config;
  std::vector<CMat> h;  // ((l * K + k) * L + i)
  std::vector<Eigen::Vector2d> bs_positions;    // L
  std::vector<Eigen::Vector2d> user_positions;  // L * K

  const CMat& channel(int cell, int user, int bs) const {
    return h[static_cast<std::size_t>(
        (cell * config.users_per_cell + user) * config.num_cells + bs)];
  }
};

/// The optimization variable: one M x d precoder per (cell, user).
struct PrecoderSet {
  int num_cells = 1;
  int users_per_cell = 1;
  std::vector<CMat> v;  // (l * K + k)

  CMat& at(int cell, int user) {
    return v[static_cast<std::size_t>(cell * users_per_cell + user)];
  }
  const CMat& at(int cell, int user) const {
    return v[static_cast<std::size_t>(cell * users_per_cell + user)];
  }
  /// Sum of squared Frobenius norms over the cell's users.
  double cell_power(int cell) const;
};

/// Free-space reference path loss in dB at distance l meters (no shadowing).
double pathloss_db(double distance_m);

/// Minimum BS-user distance enforced during placement; the path-loss model
/// diverges at zero range.
inline constexpr double kMinDistanceM = 10.0;

/// Draws one network realization: BSs on a regular polygon with side
/// bs_spacing_m (a single cell sits at the origin), users uniform in a disk
/// around their BS (radius cell_radius_m for one cell, bs_spacing_m/2
/// otherwise), i.i.d. CN(0,1) fading scaled by distance path loss and
/// log-normal shadowing. Deterministic in (config, seed).
ChannelSet generate_channels(const SystemConfig& config, std::uint64_t seed);

/// I.i.d. CN(0,1) precoders normalized to the per-cell power budget.
PrecoderSet random_precoders(const SystemConfig& config, std::uint64_t seed);

/// Achievable rate of user (cell, user) in bits: log2 det(I + V^H H^H F^-1 H V)
/// with F the interference-plus-noise matrix at that user.
double rate(const ChannelSet& channels, const PrecoderSet& precoders, int cell,
            int user);

/// Weighted sum rate, bits.
double wsr(const ChannelSet& channels, const PrecoderSet& precoders);

/// The scaled-noise matrix F~: noise weighted by the serving cell's
/// actual-to-budget power ratio plus the full interference sum. Throws when
/// the serving cell's precoders are all zero.
CMat scaled_noise_matrix(const ChannelSet& channels, const PrecoderSet& precoders,
                         int cell, int user);

/// The scale-invariant unconstrained objective g(V): the WSR formula with F~
/// in place of F. Throws when any cell's precoders are all zero.
double objective_g(const ChannelSet& channels, const PrecoderSet& precoders);

/// Scales each cell's precoders so the per-cell power equals the budget
/// exactly; g is unchanged and wsr(result) == objective_g(input).
PrecoderSet power_normalize(const PrecoderSet& precoders, const SystemConfig& config);

}  // namespace fhbeam

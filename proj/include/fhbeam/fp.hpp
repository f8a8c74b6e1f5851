#pragma once

#include <atomic>
#include <memory>
#include <vector>

#include "fhbeam/linalg.hpp"
#include "fhbeam/network.hpp"

namespace fhbeam::fp {

/// Auxiliary variables of the reformulation: Gamma (d x d Hermitian PSD) and
/// Y (N x d), one pair per (cell, user), indexed like PrecoderSet.
struct AuxState {
  std::vector<CMat> gamma;
  std::vector<CMat> y;
};

/// Per-cell quadratic-program data. The operator applies
///   X -> sum_{i,j} w_ij H_{ij,l}^H (A_ij (H_ij,l X)) + shift X,
/// with A_ij = Y_ij (I + Gamma_ij) Y_ij^H precomputed once; the matrix is
/// never materialized here. The QuadraticProgram borrows the ChannelSet it
/// was built from, which must outlive it.
struct QuadraticProgram {
  int cell = 0;
  linalg::HermitianOperator d_op;
  std::vector<CMat> q;  // Q_{lk} for the serving cell's users, M x d
  linalg::SpectralInterval spectral;
  bool spectral_valid = false;
  /// True when the serving cell's identity coefficient is zero (all of its
  /// Y are zero); the operator is then only PSD and has no valid interval.
  bool degenerate = false;
  std::shared_ptr<std::atomic<long long>> apply_calls;
  std::shared_ptr<std::atomic<long long>> apply_flops;
};

/// Optimal Gamma given V: Gamma = (HV)^H F~^-1 (HV), re-Hermitianized.
std::vector<CMat> update_gamma(const ChannelSet& channels,
                               const PrecoderSet& precoders);

/// Optimal Y given (V, Gamma): Y = J^-1 H V with J = (HV)(HV)^H + F~.
std::vector<CMat> update_y(const ChannelSet& channels,
                           const PrecoderSet& precoders,
                           const std::vector<CMat>& gamma);

/// Surrogate after the Lagrangian dual transform, reported in bits.
double eval_fr(const ChannelSet& channels, const PrecoderSet& precoders,
               const std::vector<CMat>& gamma);

/// Surrogate after the quadratic transform, reported in bits.
double eval_fq(const ChannelSet& channels, const PrecoderSet& precoders,
               const std::vector<CMat>& gamma, const std::vector<CMat>& y);

/// Builds the quadratic programs of every cell, sharing the precomputed A
/// matrices. Cells whose own Y are all zero come back flagged degenerate.
/// Spectral intervals (analytic lower bound + inflated power-iteration upper
/// estimate) are filled when estimate_spectrum is set.
std::vector<QuadraticProgram> build_qps(const ChannelSet& channels,
                                        const AuxState& aux,
                                        bool estimate_spectrum = true,
                                        std::uint64_t spectral_seed = 0);

/// Single-cell convenience wrapper; throws if the cell is degenerate.
QuadraticProgram build_qp(const ChannelSet& channels, const AuxState& aux,
                          int cell, bool estimate_spectrum = true,
                          std::uint64_t spectral_seed = 0);

/// D V - Q_k, the gradient of the per-user quadratic objective.
CMat gradient(const QuadraticProgram& qp, const CMat& v, int user);

/// tr(1/2 V^H D V - Re{V^H Q_k}), the per-user quadratic objective.
double qp_objective(const QuadraticProgram& qp, const CMat& v, int user);

}  // namespace fhbeam::fp

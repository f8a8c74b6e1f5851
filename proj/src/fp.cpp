#include "fhbeam/fp.hpp"

#include <cmath>
#include <numbers>

namespace fhbeam::fp {

namespace {

CMat hermitianize(const CMat& a) { return 0.5 * (a + a.adjoint()); }

double real_inner(const CMat& a, const CMat& b) {
  return a.cwiseProduct(b.conjugate()).sum().real();
}

// ln |I + Gamma| - tr(Gamma), shared head of both surrogates (nats).
double log_terms_nats(const CMat& gamma) {
  const CMat eye = CMat::Identity(gamma.rows(), gamma.cols());
  return linalg::logdet_hpd(eye + gamma) * std::numbers::ln2 -
         gamma.trace().real();
}

}  // namespace

std::vector<CMat> update_gamma(const ChannelSet& channels,
                               const PrecoderSet& precoders) {
  const auto& cfg = channels.config;
  std::vector<CMat> gamma;
  gamma.reserve(static_cast<std::size_t>(cfg.user_count()));
  for (int l = 0; l < cfg.num_cells; ++l) {
    for (int k = 0; k < cfg.users_per_cell; ++k) {
      const CMat f = scaled_noise_matrix(channels, precoders, l, k);
      const CMat s = channels.channel(l, k, l) * precoders.at(l, k);
      gamma.push_back(hermitianize(s.adjoint() * linalg::solve_hpd(f, s)));
    }
  }
  return gamma;
}

std::vector<CMat> update_y(const ChannelSet& channels,
                           const PrecoderSet& precoders,
                           const std::vector<CMat>& gamma) {
  const auto& cfg = channels.config;
  (void)gamma;  // Y* does not depend on Gamma; kept in the signature for the
                // block-update reading of the algorithms.
  std::vector<CMat> y;
  y.reserve(static_cast<std::size_t>(cfg.user_count()));
  for (int l = 0; l < cfg.num_cells; ++l) {
    for (int k = 0; k < cfg.users_per_cell; ++k) {
      const CMat f = scaled_noise_matrix(channels, precoders, l, k);
      const CMat s = channels.channel(l, k, l) * precoders.at(l, k);
      const CMat j = f + s * s.adjoint();
      y.push_back(linalg::solve_hpd(hermitianize(j), s));
    }
  }
  return y;
}

double eval_fr(const ChannelSet& channels, const PrecoderSet& precoders,
               const std::vector<CMat>& gamma) {
  const auto& cfg = channels.config;
  double acc = 0.0;
  for (int l = 0; l < cfg.num_cells; ++l) {
    for (int k = 0; k < cfg.users_per_cell; ++k) {
      const std::size_t idx =
          static_cast<std::size_t>(l * cfg.users_per_cell + k);
      const CMat f = scaled_noise_matrix(channels, precoders, l, k);
      const CMat s = channels.channel(l, k, l) * precoders.at(l, k);
      const CMat j = hermitianize(f + s * s.adjoint());
      const CMat ratio = s.adjoint() * linalg::solve_hpd(j, s);
      const CMat eye = CMat::Identity(cfg.streams, cfg.streams);
      const double term =
          log_terms_nats(gamma[idx]) +
          ((eye + gamma[idx]) * ratio).trace().real();
      acc += cfg.weight(l, k) * term;
    }
  }
  return acc / std::numbers::ln2;
}

double eval_fq(const ChannelSet& channels, const PrecoderSet& precoders,
               const std::vector<CMat>& gamma, const std::vector<CMat>& y) {
  const auto& cfg = channels.config;
  double acc = 0.0;
  for (int l = 0; l < cfg.num_cells; ++l) {
    for (int k = 0; k < cfg.users_per_cell; ++k) {
      const std::size_t idx =
          static_cast<std::size_t>(l * cfg.users_per_cell + k);
      const CMat f = scaled_noise_matrix(channels, precoders, l, k);
      const CMat s = channels.channel(l, k, l) * precoders.at(l, k);
      const CMat j = hermitianize(f + s * s.adjoint());
      const CMat eye = CMat::Identity(cfg.streams, cfg.streams);
      const CMat iplus = eye + gamma[idx];
      const double cross = 2.0 * (s.adjoint() * y[idx] * iplus).trace().real();
      const double quad = (y[idx].adjoint() * j * y[idx] * iplus).trace().real();
      acc += cfg.weight(l, k) * (log_terms_nats(gamma[idx]) + cross - quad);
    }
  }
  return acc / std::numbers::ln2;
}

std::vector<QuadraticProgram> build_qps(const ChannelSet& channels,
                                        const AuxState& aux,
                                        bool estimate_spectrum,
                                        std::uint64_t spectral_seed) {
  const auto& cfg = channels.config;
  const int big_l = cfg.num_cells;
  const int big_k = cfg.users_per_cell;
  if (aux.gamma.size() != static_cast<std::size_t>(cfg.user_count()) ||
      aux.y.size() != static_cast<std::size_t>(cfg.user_count())) {
    throw std::invalid_argument("build_qps: auxiliary state has wrong shape");
  }

  // A_ij = w_ij Y_ij (I + Gamma_ij) Y_ij^H, shared by every cell's operator
  // and by all gradient steps of this outer iteration.
  auto a = std::make_shared<std::vector<CMat>>();
  a->reserve(static_cast<std::size_t>(cfg.user_count()));
  for (int i = 0; i < big_l; ++i) {
    for (int j = 0; j < big_k; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i * big_k + j);
      const CMat iplus =
          CMat::Identity(cfg.streams, cfg.streams) + aux.gamma[idx];
      a->push_back(cfg.weight(i, j) *
                   hermitianize(aux.y[idx] * iplus * aux.y[idx].adjoint()));
    }
  }

  std::vector<QuadraticProgram> qps;
  qps.reserve(static_cast<std::size_t>(big_l));
  for (int l = 0; l < big_l; ++l) {
    QuadraticProgram qp;
    qp.cell = l;
    double shift = 0.0;
    for (int j = 0; j < big_k; ++j) {
      const std::size_t idx = static_cast<std::size_t>(l * big_k + j);
      const CMat iplus =
          CMat::Identity(cfg.streams, cfg.streams) + aux.gamma[idx];
      shift += cfg.weight(l, j) * cfg.noise_power / cfg.power_budget *
               (aux.y[idx].adjoint() * aux.y[idx] * iplus).trace().real();
    }
    qp.degenerate = !(shift > 0.0);

    qp.apply_calls = std::make_shared<std::atomic<long long>>(0);
    qp.apply_flops = std::make_shared<std::atomic<long long>>(0);
    qp.d_op.dim = cfg.tx_antennas;
    qp.d_op.shift = shift;
    const ChannelSet* ch = &channels;
    qp.d_op.apply = [ch, a, l, shift, calls = qp.apply_calls,
                     flops = qp.apply_flops](const CMat& x) -> CMat {
      const auto& c = ch->config;
      const long long cols = x.cols();
      CMat out = shift * x;
      long long ops = c.tx_antennas * cols;
      for (int i = 0; i < c.num_cells; ++i) {
        for (int j = 0; j < c.users_per_cell; ++j) {
          const CMat& g = ch->channel(i, j, l);
          const CMat t1 = g * x;
          const CMat t2 = (*a)[static_cast<std::size_t>(i * c.users_per_cell + j)] * t1;
          out.noalias() += g.adjoint() * t2;
          ops += cols * (2LL * c.rx_antennas * c.tx_antennas +
                         1LL * c.rx_antennas * c.rx_antennas);
        }
      }
      calls->fetch_add(1, std::memory_order_relaxed);
      flops->fetch_add(ops, std::memory_order_relaxed);
      return out;
    };

    qp.q.reserve(static_cast<std::size_t>(big_k));
    for (int k = 0; k < big_k; ++k) {
      const std::size_t idx = static_cast<std::size_t>(l * big_k + k);
      const CMat iplus =
          CMat::Identity(cfg.streams, cfg.streams) + aux.gamma[idx];
      qp.q.push_back(cfg.weight(l, k) *
                     (channels.channel(l, k, l).adjoint() * aux.y[idx] * iplus));
    }

    if (estimate_spectrum && !qp.degenerate) {
      const double lo = linalg::min_eigenvalue_bound(qp.d_op);
      const double hi = linalg::kSpectralSafety *
                        linalg::max_eigenvalue(qp.d_op, 1e-4, 1000,
                                               spectral_seed ^
                                                   static_cast<std::uint64_t>(l));
      qp.spectral = linalg::make_interval(lo, std::max(lo, hi));
      qp.spectral_valid = true;
    }
    qps.push_back(std::move(qp));
  }
  return qps;
}

QuadraticProgram build_qp(const ChannelSet& channels, const AuxState& aux,
                          int cell, bool estimate_spectrum,
                          std::uint64_t spectral_seed) {
  if (cell < 0 || cell >= channels.config.num_cells) {
    throw std::out_of_range("build_qp: cell index out of range");
  }
  auto qps = build_qps(channels, aux, estimate_spectrum, spectral_seed);
  QuadraticProgram qp = std::move(qps[static_cast<std::size_t>(cell)]);
  if (qp.degenerate) {
    throw std::domain_error(
        "build_qp: all auxiliary Y of the cell are zero; the operator has no "
        "positive identity shift");
  }
  return qp;
}

CMat gradient(const QuadraticProgram& qp, const CMat& v, int user) {
  return qp.d_op.apply(v) - qp.q[static_cast<std::size_t>(user)];
}

double qp_objective(const QuadraticProgram& qp, const CMat& v, int user) {
  const CMat dv = qp.d_op.apply(v);
  return 0.5 * real_inner(dv, v) -
         real_inner(qp.q[static_cast<std::size_t>(user)], v);
}

}  // namespace fhbeam::fp

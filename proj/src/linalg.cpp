#include "fhbeam/linalg.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

#include "fhbeam/rng.hpp"

namespace fhbeam::linalg {

namespace {
std::atomic<long long> g_dense_assemblies{0};
}

SpectralInterval make_interval(double lambda_min, double lambda_max) {
  if (!(lambda_min > 0.0) || !(lambda_max >= lambda_min)) {
    throw std::invalid_argument(
        "make_interval: need 0 < lambda_min <= lambda_max, got [" +
        std::to_string(lambda_min) + ", " + std::to_string(lambda_max) + "]");
  }
  return {lambda_min, lambda_max, lambda_max / lambda_min};
}

double logdet_hpd(const CMat& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("logdet_hpd: matrix must be square");
  }
  Eigen::LLT<CMat> llt(a);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("logdet_hpd: matrix is not positive definite");
  }
  double acc = 0.0;
  const auto& packed = llt.matrixLLT();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double dii = packed(i, i).real();
    if (!(dii > 0.0)) {
      throw std::domain_error("logdet_hpd: nonpositive Cholesky pivot");
    }
    acc += std::log(dii);
  }
  return 2.0 * acc / std::numbers::ln2;
}

CMat solve_hpd(const CMat& a, const CMat& b) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("solve_hpd: matrix must be square");
  }
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("solve_hpd: dimension mismatch");
  }
  Eigen::LLT<CMat> llt(a);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("solve_hpd: matrix is not positive definite");
  }
  return llt.solve(b);
}

double max_eigenvalue(const HermitianOperator& op, double tol, int max_iters,
                      std::uint64_t seed) {
  if (op.dim <= 0 || !op.apply) {
    throw std::invalid_argument("max_eigenvalue: operator not initialized");
  }
  Rng rng(seed);
  CMat v(op.dim, 1);
  for (Eigen::Index i = 0; i < op.dim; ++i) {
    v(i, 0) = rng.cgaussian();
  }
  v /= v.norm();

  double rayleigh = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const CMat w = op.apply(v);
    const double r = (v.adjoint() * w)(0, 0).real();
    if (it > 0 && std::abs(r - rayleigh) <= tol * std::abs(r)) {
      return r;
    }
    rayleigh = r;
    const double n = w.norm();
    if (n == 0.0) {
      return 0.0;  // operator annihilates the iterate: spectrum reached 0
    }
    v = w / n;
  }
  throw PowerIterationError(
      "max_eigenvalue: no convergence within " + std::to_string(max_iters) +
          " iterations (best estimate " + std::to_string(rayleigh) + ")",
      rayleigh);
}

double min_eigenvalue_bound(const HermitianOperator& op) {
  if (!(op.shift > 0.0)) {
    throw std::domain_error(
        "min_eigenvalue_bound: shift is not positive (degenerate operator, "
        "all auxiliary Y zero)");
  }
  return op.shift;
}

CMat dense_matrix(const HermitianOperator& op, bool allow_large) {
  if (op.dim > kMaxDenseDim && !allow_large) {
    throw std::length_error(
        "dense_matrix: dim " + std::to_string(op.dim) + " exceeds " +
        std::to_string(kMaxDenseDim) + " (pass allow_large to override)");
  }
  g_dense_assemblies.fetch_add(1, std::memory_order_relaxed);
  return op.apply(CMat::Identity(op.dim, op.dim));
}

long long dense_assembly_count() {
  return g_dense_assemblies.load(std::memory_order_relaxed);
}

}  // namespace fhbeam::linalg

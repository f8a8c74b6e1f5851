#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace fhbeam {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;

namespace linalg {

/// A Hermitian positive definite operator exposed only through its action on
/// tall blocks (dim x c). `shift` is a known multiple of the identity
/// contained in the operator; when the remainder is a sum of PSD terms, it is
/// a valid analytic lower bound on the spectrum.
struct HermitianOperator {
  Eigen::Index dim = 0;
  std::function<CMat(const CMat&)> apply;
  double shift = 0.0;
};

struct SpectralInterval {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 1.0;
};

/// Validates 0 < lambda_min <= lambda_max and fills the condition number.
SpectralInterval make_interval(double lambda_min, double lambda_max);

/// Multiplicative inflation applied to power-iteration estimates so the
/// resulting interval keeps bracketing the spectrum.
inline constexpr double kSpectralSafety = 1.01;

class PowerIterationError : public std::runtime_error {
 public:
  PowerIterationError(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate) {}
  double best_estimate() const { return best_estimate_; }

 private:
  double best_estimate_ = 0.0;
};

/// log2 |A| for a Hermitian positive definite matrix. Throws std::domain_error
/// when the Cholesky factorization fails.
double logdet_hpd(const CMat& a);

/// Solves A X = B for Hermitian positive definite A.
CMat solve_hpd(const CMat& a, const CMat& b);

/// Largest-eigenvalue estimate by power iteration with a Rayleigh-quotient
/// convergence test; the start vector is deterministic in `seed`. Callers are
/// expected to inflate the result by kSpectralSafety before building a
/// bracketing interval. Throws PowerIterationError (carrying the best
/// estimate) when max_iters is exhausted.
double max_eigenvalue(const HermitianOperator& op, double tol = 1e-4,
                      int max_iters = 1000, std::uint64_t seed = 0);

/// Analytic lower spectral bound: returns op.shift. Throws when the shift is
/// not strictly positive (degenerate operator, all Y zero).
double min_eigenvalue_bound(const HermitianOperator& op);

/// Largest dimension dense_matrix materializes without an explicit override.
inline constexpr Eigen::Index kMaxDenseDim = 1024;

/// Materializes the operator as a dense matrix. This is the only dense path
/// in the library; it is reachable from the exact solver, oracles and tests,
/// never from the gradient pipeline. Every call bumps a process-wide counter
/// so tests can assert the gradient path stays matrix-free.
CMat dense_matrix(const HermitianOperator& op, bool allow_large = false);

/// Number of dense materializations performed so far in this process.
long long dense_assembly_count();

}  // namespace linalg
}  // namespace fhbeam

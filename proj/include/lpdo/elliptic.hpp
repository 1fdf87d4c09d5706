#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "lpdo/errors.hpp"
#include "lpdo/lattice.hpp"
#include "lpdo/quantize.hpp"
#include "lpdo/symbol.hpp"

namespace lpdo {

/// Thrown when an operation needs an elliptic symbol and the check fails.
class EllipticityRefusal : public PreconditionError {
 public:
  EllipticityRefusal(const std::string& what, EllipticityReport report)
      : PreconditionError(what), report_(std::move(report)) {}
  const EllipticityReport& report() const { return report_; }

 private:
  EllipticityReport report_;
};

struct ParametrixOptions {
  /// Estimate the order of every intermediate residual (costly for n > 1).
  bool track_orders = true;
  /// Residuals are judged with k-differences and x-derivatives off: they sit
  /// near machine precision, where differencing only adds noise.
  OrderOptions residual_order{0, 0, 1e-13, 4.0 * std::numeric_limits<double>::epsilon()};
};

struct Parametrix {
  Symbol tau;
  /// S with T_tau T_sigma = I + S.
  Symbol left_residual;
  /// R with T_sigma T_tau = I + R.
  Symbol right_residual;
  int steps = 1;
  double theta = 0.0;
  /// Largest Tikhonov shift used on each row (0 where no regularization).
  std::vector<double> delta;
  int regularized_points = 0;
  EllipticityReport ellipticity;
  /// Order estimate of max(R_j, S_j) for j = 1..steps, when tracked.
  std::vector<double> residual_orders;

  Matrix A;  // finite section of T_sigma
  Matrix B;  // finite section of T_tau
  Matrix R;
  Matrix S;
};

/// tau_0 = conj(sigma) / (|sigma|^2 + delta), refined by
/// B_{j+1} = B_j + B_0 (I - A B_j). Residuals use R_J = (-1)^{J+1} R_1^J.
Parametrix parametrix(const Symbol& sigma, double m, int steps, const LatticeWindow& window,
                      const TorusGrid& grid, const ParametrixOptions& options = {});

struct DecayReport {
  std::vector<int> shells;
  std::vector<DecayProfile> profiles;
  double floor = 0.0;
  bool schwartz_like = false;
};

/// Per-shell sup over interior (k, x) of (1+|k|)^p |rho(k,x)|, p = 0..P.
/// Values at or below the floor count as zero.
DecayReport residual_decay_report(const Symbol& rho, int P, double relative_floor = 1e-13,
                                  double absolute_floor = 4.0 * std::numeric_limits<double>::epsilon());

struct ADNReport {
  double m = 0.0;
  int N = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> ratios;
  double C1 = 0.0;
  double C2 = 0.0;
  double C1_doubled = 0.0;
  double C2_doubled = 0.0;
  bool stable = false;
};

/// (||T_sigma u|| + ||u||) / ||u||_{m,2} over random interior-supported u at
/// N and again at 2N; stable when both constants move by less than 25%.
ADNReport adn_verify(const Symbol& sigma, double m, const LatticeWindow& window,
                     const TorusGrid& grid, int samples, std::uint64_t seed);

struct SolveOptions {
  int max_iterations = 500;
  int stall_window = 20;
  /// Stall when the residual fails to drop below this fraction of its value
  /// stall_window iterations ago.
  double stall_factor = 0.9;
  int parametrix_steps = 1;
  std::uint64_t seed = 42;
};

struct SolveResult {
  LatticeSequence u;
  /// Relative to ||f||: rows inside the interior margin, and the rest.
  double residual_interior = 0.0;
  double residual_boundary = 0.0;
  int iterations = 0;
  bool fallback_used = false;
  std::uint64_t seed = 0;
  std::vector<double> history;
};

class SolveError : public ConvergenceError {
 public:
  SolveError(const std::string& what, LatticeSequence best, std::vector<double> history)
      : ConvergenceError(what), best_(std::move(best)), history_(std::move(history)) {}
  const LatticeSequence& best_iterate() const { return best_; }
  const std::vector<double>& history() const { return history_; }

 private:
  LatticeSequence best_;
  std::vector<double> history_;
};

/// Parametrix-preconditioned residual iteration for T_sigma u = f on f's
/// window; dense LU takes over when the iteration stalls.
SolveResult solve(const Symbol& sigma, double m, const LatticeSequence& f, const TorusGrid& grid,
                  double tol, const SolveOptions& options = {});

}  // namespace lpdo

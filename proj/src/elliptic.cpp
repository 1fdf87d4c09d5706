#include "lpdo/elliptic.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <map>

#include "lpdo/sobolev.hpp"
#include "lpdo/transform.hpp"

namespace lpdo {

namespace {

double euclid(std::span<const int> k) {
  double r2 = 0.0;
  for (int c : k) r2 += static_cast<double>(c) * c;
  return std::sqrt(r2);
}

double residual_order(const Matrix& residual, const LatticeWindow& window, const TorusGrid& grid,
                      const OrderOptions& options) {
  const Symbol rho = Symbol::from_matrix(window, grid, residual, std::nullopt, default_margin(window));
  return estimate_order(rho, window, grid, options).m_hat;
}

}  // namespace

Parametrix parametrix(const Symbol& sigma, double m, int steps, const LatticeWindow& window,
                      const TorusGrid& grid, const ParametrixOptions& options) {
  if (steps < 1) throw DomainError("parametrix needs at least one step");
  EllipticityReport ellipticity = check_ellipticity(sigma, m, window, grid);
  if (!ellipticity.elliptic) {
    throw EllipticityRefusal("symbol is not elliptic of order " + std::to_string(m) +
                                 " on this window",
                             ellipticity);
  }
  const double theta = ellipticity.C / 2.0;

  const Matrix samples = sigma.sample(window, grid);
  Matrix tau0(samples.rows(), samples.cols());
  std::vector<double> deltas(static_cast<std::size_t>(window.size()), 0.0);
  int regularized = 0;
  Point k(static_cast<std::size_t>(window.dim()));
  for (Index i = 0; i < window.size(); ++i) {
    window.point_into(i, k);
    const double floor = theta * std::pow(1.0 + euclid(k), m);
    for (Index j = 0; j < grid.size(); ++j) {
      const Complex s = samples(i, j);
      const double mag = std::abs(s);
      double delta = 0.0;
      if (mag < floor) {
        delta = floor * floor;
        ++regularized;
        deltas[i] = delta;
      }
      tau0(i, j) = std::conj(s) / (mag * mag + delta);
    }
  }

  Matrix A = assemble_matrix(sigma, window, grid).entries;
  const Matrix B0 = detail::samples_to_coefficients(window, grid, tau0);
  const Index size = window.size();
  const Matrix I = Matrix::Identity(size, size);
  const Matrix R1 = A * B0 - I;
  const Matrix S1 = B0 * A - I;

  Matrix B = B0;
  Matrix Rpow = R1;
  Matrix Spow = S1;
  std::vector<double> orders;
  for (int j = 1; j <= steps; ++j) {
    if (j > 1) {
      B += B0 * (I - A * B);
      Rpow = Rpow * R1;
      Spow = Spow * S1;
    }
    if (options.track_orders) {
      const double sign = j % 2 ? 1.0 : -1.0;
      orders.push_back(std::max(residual_order(sign * Rpow, window, grid, options.residual_order),
                                residual_order(sign * Spow, window, grid, options.residual_order)));
    }
  }
  const double sign = steps % 2 ? 1.0 : -1.0;
  Matrix R = sign * Rpow;
  Matrix S = sign * Spow;
  const int margin = default_margin(window);
  Symbol tau = Symbol::from_matrix(window, grid, B, -m, margin);
  Symbol left = Symbol::from_matrix(window, grid, S, std::nullopt, margin);
  Symbol right = Symbol::from_matrix(window, grid, R, std::nullopt, margin);
  return Parametrix{std::move(tau),     std::move(left),   std::move(right), steps,
                    theta,              std::move(deltas), regularized,      std::move(ellipticity),
                    std::move(orders),  std::move(A),      std::move(B),     std::move(R),
                    std::move(S)};
}

DecayReport residual_decay_report(const Symbol& rho, int P, double relative_floor,
                                  double absolute_floor) {
  if (rho.kind() != Symbol::Kind::Grid) throw DomainError("decay report needs a grid-backed symbol");
  if (P < 0) throw DomainError("decay report needs P >= 0");
  const GridData& g = rho.grid_data();
  const LatticeWindow& window = g.window;
  DecayReport report;
  const double scale = g.samples.size() ? g.samples.cwiseAbs().maxCoeff() : 0.0;
  report.floor = std::max(relative_floor * scale, absolute_floor);

  std::map<int, std::vector<double>> shells;
  Point k(static_cast<std::size_t>(window.dim()));
  for (Index i = 0; i < window.size(); ++i) {
    window.point_into(i, k);
    if (!rho.is_interior(k)) continue;
    const int j = dyadic_shell(k);
    auto& slot = shells[j];
    if (slot.empty()) slot.assign(static_cast<std::size_t>(P + 1), 0.0);
    double v = g.samples.row(i).cwiseAbs().maxCoeff();
    if (v <= report.floor) v = 0.0;
    const double r = 1.0 + euclid(k);
    for (int p = 0; p <= P; ++p) slot[p] = std::max(slot[p], v * std::pow(r, p));
  }
  for (const auto& [j, v] : shells) report.shells.push_back(j);
  report.schwartz_like = true;
  for (int p = 0; p <= P; ++p) {
    DecayProfile d;
    d.p = p;
    for (const auto& [j, v] : shells) d.shell_sups.push_back(v[p]);
    d.eventually_decreasing = eventually_decreasing(d.shell_sups);
    report.schwartz_like = report.schwartz_like && d.eventually_decreasing;
    report.profiles.push_back(std::move(d));
  }
  return report;
}

namespace {

std::vector<double> adn_ratios(const Symbol& sigma, double m, const LatticeWindow& window,
                               const TorusGrid& grid, int samples, std::uint64_t seed) {
  const Matrix A = assemble_matrix(sigma, window, grid).entries;
  std::vector<double> ratios;
  for (const auto& u : random_sequences(window, samples, seed, default_margin(window))) {
    const double graph = (A * u.values).norm() + u.norm();
    ratios.push_back(graph / sobolev_norm(m, u));
  }
  return ratios;
}

}  // namespace

ADNReport adn_verify(const Symbol& sigma, double m, const LatticeWindow& window,
                     const TorusGrid& grid, int samples, std::uint64_t seed) {
  if (m <= 0.0) throw DomainError("ADN check needs a positive order");
  if (samples < 1) throw DomainError("ADN check needs at least one sample");
  const EllipticityReport ell = check_ellipticity(sigma, m, window, grid);
  if (!ell.elliptic) throw EllipticityRefusal("symbol is not elliptic; ADN check refused", ell);
  ADNReport report;
  report.m = m;
  report.N = window.half_width();
  report.samples = samples;
  report.seed = seed;
  report.ratios = adn_ratios(sigma, m, window, grid, samples, seed);
  report.C1 = *std::min_element(report.ratios.begin(), report.ratios.end());
  report.C2 = *std::max_element(report.ratios.begin(), report.ratios.end());

  const LatticeWindow doubled(window.dim(), 2 * window.half_width());
  const auto again = adn_ratios(sigma, m, doubled, default_grid(doubled), samples, seed);
  report.C1_doubled = *std::min_element(again.begin(), again.end());
  report.C2_doubled = *std::max_element(again.begin(), again.end());
  report.stable = std::abs(report.C1_doubled - report.C1) < 0.25 * report.C1 &&
                  std::abs(report.C2_doubled - report.C2) < 0.25 * report.C2;
  return report;
}

SolveResult solve(const Symbol& sigma, double m, const LatticeSequence& f, const TorusGrid& grid,
                  double tol, const SolveOptions& options) {
  const LatticeWindow& window = f.window;
  const int margin = default_margin(window);
  Point k(static_cast<std::size_t>(window.dim()));
  std::vector<bool> interior(static_cast<std::size_t>(window.size()));
  for (Index i = 0; i < window.size(); ++i) {
    window.point_into(i, k);
    interior[i] = window.is_interior(k, margin);
    if (!interior[i] && f.values(i) != 0.0) {
      throw PreconditionError("right-hand side must vanish within " + std::to_string(margin) +
                              " layers of the window boundary");
    }
  }
  if (!(tol > 0.0)) throw DomainError("solver tolerance must be positive");

  SolveResult result{LatticeSequence::zeros(window), 0.0, 0.0, 0, false, 0, {}};
  result.seed = options.seed;
  const double fn = f.norm();
  auto finish = [&](const Vector& residual) {
    double in = 0.0;
    double out = 0.0;
    for (Index i = 0; i < window.size(); ++i) (interior[i] ? in : out) += std::norm(residual(i));
    result.residual_interior = fn > 0.0 ? std::sqrt(in) / fn : 0.0;
    result.residual_boundary = fn > 0.0 ? std::sqrt(out) / fn : 0.0;
  };
  if (fn == 0.0) {
    result.history.push_back(0.0);
    return result;
  }

  ParametrixOptions popts;
  popts.track_orders = false;
  const Parametrix P = parametrix(sigma, m, options.parametrix_steps, window, grid, popts);

  Vector u = Vector::Zero(window.size());
  Vector r = f.values;
  Vector best = u;
  double best_res = 1.0;
  result.history.push_back(1.0);
  bool converged = false;
  bool stalled = false;
  int it = 0;
  while (it < options.max_iterations) {
    ++it;
    u += P.B * r;
    r = f.values - P.A * u;
    const double res = r.norm() / fn;
    result.history.push_back(res);
    if (res < best_res) {
      best_res = res;
      best = u;
    }
    if (res <= tol) {
      converged = true;
      break;
    }
    if (!std::isfinite(res) ||
        (it >= options.stall_window &&
         res > options.stall_factor * result.history[it - options.stall_window])) {
      stalled = true;
      break;
    }
  }
  result.iterations = it;
  if (!converged && !stalled) {
    throw SolveError("residual iteration did not reach tolerance in " + std::to_string(it) +
                         " iterations",
                     LatticeSequence(window, best), result.history);
  }
  if (stalled) {
    result.fallback_used = true;
    u = P.A.partialPivLu().solve(f.values);
    r = f.values - P.A * u;
    const double res = r.norm() / fn;
    result.history.push_back(res);
    if (!(res <= tol)) {
      throw SolveError("dense fallback did not reach tolerance (relative residual " +
                           std::to_string(res) + ")",
                       LatticeSequence(window, best_res <= res ? best : u), result.history);
    }
  }
  result.u = LatticeSequence(window, u);
  finish(r);
  return result;
}

}  // namespace lpdo

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpdo/expr.hpp"
#include "lpdo/lattice.hpp"

namespace lpdo {

/// Named built-in family with numeric parameters.
///   bessel     {s}: (1+|k|^2)^{s/2}
///   multiplier {s, c, a, d, q, axis}: <k>^s (c + a e^{2 pi i q x_axis} <k>^{-d})
///   jump       {direction, axis}: step(k_axis) e^{2 pi i direction x_axis} + 1 - step(k_axis)
struct BuiltinSpec {
  std::string name;
  std::map<std::string, double> params;

  bool operator==(const BuiltinSpec&) const = default;
};

/// Samples of a symbol on window x grid, stored through the operator matrix
/// A(k,l) they quantize to: sigma(k,x) = sum_l A(k,l) e^{2 pi i (l-k).x}.
struct GridData {
  LatticeWindow window;
  TorusGrid grid;
  Matrix coefficients;
  Matrix samples;
  /// Rows with |k_j| > N - interior_margin are contaminated by truncation.
  int interior_margin = 0;
};

/// sigma(k,x) on Z^n x T^n. Cheap to copy; immutable after construction.
class Symbol {
 public:
  enum class Kind { Expr, Builtin, Grid };

  static Symbol from_expression(Expression e, std::optional<double> order = std::nullopt);
  static Symbol from_builtin(int n, BuiltinSpec spec, std::optional<double> order = std::nullopt);
  /// Grid symbol quantizing to the matrix A on window, sampled on grid.
  static Symbol from_matrix(const LatticeWindow& window, const TorusGrid& grid, Matrix A,
                            std::optional<double> order, int interior_margin);
  /// Grid symbol from pointwise samples; only the modes the window can carry
  /// are kept, so the samples are projected onto the row bands.
  static Symbol from_samples(const LatticeWindow& window, const TorusGrid& grid,
                             const Matrix& samples, std::optional<double> order,
                             int interior_margin);

  int dim() const;
  Kind kind() const;
  std::optional<double> declared_order() const;
  Symbol with_order(double order) const;

  const Expression& expression() const;
  const BuiltinSpec& builtin() const;
  const GridData& grid_data() const;

  bool depends_on_x() const;

  /// sigma(k,x); x is taken modulo 1. Grid symbols refuse k outside their window.
  Complex operator()(std::span<const int> k, std::span<const double> x) const;

  /// Values at every (window point, grid node); rows follow window order.
  Matrix sample(const LatticeWindow& window, const TorusGrid& grid) const;

  /// Interior test for grid symbols; analytic symbols have no margin.
  bool is_interior(std::span<const int> k) const;

 private:
  struct Impl;
  explicit Symbol(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

Symbol parse_symbol(std::string_view text, int n, std::optional<double> order = std::nullopt);
Symbol bessel_symbol(int n, double s);
Symbol multiplier_symbol(int n, double s, double c, double a, double d, double q, int axis = 1);
Symbol jump_symbol(int n, int direction, int axis = 1);

/// Dyadic shell index j with 2^j <= 1+|k| < 2^{j+1}, decided in integers.
int dyadic_shell(std::span<const int> k);

/// <k> = (1+|k|^2)^{1/2}.
double japanese_bracket(std::span<const int> k);

struct ShellFit {
  MultiIndex alpha;
  MultiIndex beta;
  /// Per-shell sup_x |D_x^(beta) Delta^alpha sigma|, after flooring.
  std::vector<double> shell_sups;
  std::vector<int> shells;
  /// -infinity when the differenced symbol vanishes on every fitted shell.
  double slope = 0.0;
  double residual = 0.0;
  bool vanishing = false;
};

struct OrderEstimate {
  /// -infinity when every entry vanishes.
  double m_hat = 0.0;
  std::vector<ShellFit> table;
};

struct OrderOptions {
  int alpha_max = 2;
  int beta_max = 2;
  /// Sups at or below max(relative_floor * max|sigma|, absolute_floor) are noise.
  /// For beta entries the floor is multiplied by the largest spectral factor.
  double relative_floor = 1e-13;
  double absolute_floor = 0.0;
};

/// Log-log regression of sup_x |D_x^(beta) Delta_k^alpha sigma| against <k>
/// across dyadic shells; m_hat = max over (alpha, beta) of slope + |alpha|.
OrderEstimate estimate_order(const Symbol& sigma, const LatticeWindow& window,
                             const TorusGrid& grid, const OrderOptions& options = {});

struct EllipticityReport {
  bool elliptic = false;
  double C = 0.0;
  double M_radius = 0.0;
  std::vector<double> min_ratio_profile;
  std::vector<int> shells;
};

/// Scans |sigma(k,x)| / (1+|k|)^m over the window, refining each row's
/// minimum between grid nodes.
EllipticityReport check_ellipticity(const Symbol& sigma, double m, const LatticeWindow& window,
                                    const TorusGrid& grid);

/// tau(x, xi) = conj(sigma(-xi, x)).
class ToroidalSymbol {
 public:
  explicit ToroidalSymbol(Symbol lattice) : lattice_(std::move(lattice)) {}

  Complex operator()(std::span<const double> x, std::span<const int> xi) const;
  const Symbol& lattice_symbol() const { return lattice_; }
  std::optional<double> declared_order() const { return lattice_.declared_order(); }

 private:
  Symbol lattice_;
};

ToroidalSymbol dual_toroidal_symbol(const Symbol& sigma);

struct DecayProfile {
  int p = 0;
  std::vector<double> shell_sups;
  bool eventually_decreasing = false;
};

/// True when the profile is non-increasing from its peak to the last shell and
/// the last value lies strictly below the peak (or everything is zero).
bool eventually_decreasing(const std::vector<double>& values);

struct S0Diagnostic {
  std::vector<int> shells;
  /// Entry |alpha|: per-shell sup of (1+|k|)^{|alpha|} |Delta^alpha sigma|.
  std::vector<DecayProfile> by_order;
  bool decays = false;
};

/// Decay of (1+|k|)^{|alpha|} Delta^alpha sigma for |alpha| = 0..alpha_max.
S0Diagnostic s0_diagnostic(const Symbol& sigma, const LatticeWindow& window,
                           const TorusGrid& grid, int alpha_max = 2);

}  // namespace lpdo

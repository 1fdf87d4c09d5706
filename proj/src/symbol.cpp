#include "lpdo/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "lpdo/errors.hpp"
#include "lpdo/transform.hpp"

namespace lpdo {

struct Symbol::Impl {
  int n = 0;
  Kind kind = Kind::Expr;
  std::optional<double> order;
  Expression expr;
  BuiltinSpec builtin;
  std::optional<GridData> grid;
  bool x_dependent = true;
};

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double param(const BuiltinSpec& spec, const std::string& key, double fallback) {
  const auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

double bracket_power(std::span<const int> k, double s) {
  double r2 = 1.0;
  for (int c : k) r2 += static_cast<double>(c) * c;
  return std::pow(r2, s / 2.0);
}

void validate_builtin(int n, const BuiltinSpec& spec) {
  std::vector<std::string> allowed;
  if (spec.name == "bessel") {
    allowed = {"s"};
  } else if (spec.name == "multiplier") {
    allowed = {"s", "c", "a", "d", "q", "axis"};
  } else if (spec.name == "jump") {
    allowed = {"direction", "axis"};
  } else {
    throw DomainError("unknown builtin symbol '" + spec.name + "'");
  }
  for (const auto& [key, value] : spec.params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw DomainError("builtin '" + spec.name + "' has no parameter '" + key + "'");
    }
    if (!std::isfinite(value)) throw DomainError("builtin parameter '" + key + "' is not finite");
  }
  const double axis = param(spec, "axis", 1.0);
  if (axis != std::round(axis) || axis < 1 || axis > n) {
    throw DomainError("builtin axis must be an integer in 1..n");
  }
  const double direction = param(spec, "direction", 1.0);
  if (direction != std::round(direction)) throw DomainError("jump direction must be an integer");
}

Complex eval_builtin(const BuiltinSpec& spec, std::span<const int> k, std::span<const double> x) {
  if (spec.name == "bessel") return bracket_power(k, param(spec, "s", 0.0));
  const auto axis = static_cast<std::size_t>(param(spec, "axis", 1.0)) - 1;
  if (spec.name == "multiplier") {
    const double s = param(spec, "s", 0.0);
    const double c = param(spec, "c", 1.0);
    const double a = param(spec, "a", 0.0);
    const double d = param(spec, "d", 2.0);
    const double q = param(spec, "q", 0.0);
    const double t = torus_coordinate(x[axis]);
    const Complex wave = a == 0.0 ? Complex(0.0) : a * std::polar(1.0, kTwoPi * q * t) * bracket_power(k, -d);
    return bracket_power(k, s) * (c + wave);
  }
  const double direction = param(spec, "direction", 1.0);
  if (k[axis] < 0) return 1.0;
  const double t = torus_coordinate(x[axis]);
  return std::polar(1.0, kTwoPi * direction * t);
}

bool builtin_depends_on_x(const BuiltinSpec& spec) {
  if (spec.name == "bessel") return false;
  if (spec.name == "multiplier") return param(spec, "a", 0.0) != 0.0 && param(spec, "q", 0.0) != 0.0;
  return param(spec, "direction", 1.0) != 0.0;
}

}  // namespace

Symbol Symbol::from_expression(Expression e, std::optional<double> order) {
  auto impl = std::make_shared<Impl>();
  impl->n = e.dim();
  impl->kind = Kind::Expr;
  impl->order = order;
  impl->x_dependent = e.depends_on_x();
  impl->expr = std::move(e);
  return Symbol(std::move(impl));
}

Symbol Symbol::from_builtin(int n, BuiltinSpec spec, std::optional<double> order) {
  if (n < 1) throw DomainError("symbol dimension must be positive");
  validate_builtin(n, spec);
  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->kind = Kind::Builtin;
  if (!order) {
    order = spec.name == "jump" ? 0.0 : param(spec, "s", 0.0);
  }
  impl->order = order;
  impl->x_dependent = builtin_depends_on_x(spec);
  impl->builtin = std::move(spec);
  return Symbol(std::move(impl));
}

Symbol Symbol::from_matrix(const LatticeWindow& window, const TorusGrid& grid, Matrix A,
                           std::optional<double> order, int interior_margin) {
  require_resolving(window, grid);
  if (A.rows() != window.size() || A.cols() != window.size()) {
    throw DomainError("operator matrix does not match its window");
  }
  if (!A.allFinite()) throw DomainError("operator matrix has non-finite entries");
  auto impl = std::make_shared<Impl>();
  impl->n = window.dim();
  impl->kind = Kind::Grid;
  impl->order = order;
  Matrix samples = detail::coefficients_to_samples(window, grid, A);
  impl->grid = GridData{window, grid, std::move(A), std::move(samples), std::max(0, interior_margin)};
  impl->x_dependent = true;
  return Symbol(std::move(impl));
}

Symbol Symbol::from_samples(const LatticeWindow& window, const TorusGrid& grid,
                            const Matrix& samples, std::optional<double> order,
                            int interior_margin) {
  require_resolving(window, grid);
  if (samples.rows() != window.size() || samples.cols() != grid.size()) {
    throw DomainError("sample array does not match window x grid");
  }
  if (!samples.allFinite()) throw DomainError("symbol samples must be finite");
  return from_matrix(window, grid, detail::samples_to_coefficients(window, grid, samples), order,
                     interior_margin);
}

int Symbol::dim() const { return impl_->n; }
Symbol::Kind Symbol::kind() const { return impl_->kind; }
std::optional<double> Symbol::declared_order() const { return impl_->order; }

Symbol Symbol::with_order(double order) const {
  auto copy = std::make_shared<Impl>(*impl_);
  copy->order = order;
  return Symbol(std::move(copy));
}

const Expression& Symbol::expression() const {
  if (impl_->kind != Kind::Expr) throw DomainError("symbol is not expression-backed");
  return impl_->expr;
}

const BuiltinSpec& Symbol::builtin() const {
  if (impl_->kind != Kind::Builtin) throw DomainError("symbol is not a builtin");
  return impl_->builtin;
}

const GridData& Symbol::grid_data() const {
  if (impl_->kind != Kind::Grid) throw DomainError("symbol is not grid-backed");
  return *impl_->grid;
}

bool Symbol::depends_on_x() const { return impl_->x_dependent; }

bool Symbol::is_interior(std::span<const int> k) const {
  if (impl_->kind != Kind::Grid) return true;
  return impl_->grid->window.is_interior(k, impl_->grid->interior_margin);
}

Complex Symbol::operator()(std::span<const int> k, std::span<const double> x) const {
  const int n = impl_->n;
  if (static_cast<int>(k.size()) != n || static_cast<int>(x.size()) != n) {
    throw DomainError("symbol of dimension " + std::to_string(n) +
                      " evaluated at a point of another dimension");
  }
  switch (impl_->kind) {
    case Kind::Expr: return impl_->expr.eval(k, x);
    case Kind::Builtin: return eval_builtin(impl_->builtin, k, x);
    case Kind::Grid: break;
  }
  const GridData& g = *impl_->grid;
  const Index row = g.window.index_of(k);
  if (row < 0) throw DomainError("grid symbol evaluated outside its lattice window");
  const int M = g.grid.points_per_axis();
  std::vector<double> t(static_cast<std::size_t>(n));
  bool on_node = true;
  Index node = 0;
  for (int a = 0; a < n; ++a) {
    t[a] = torus_coordinate(x[a]);
    const double scaled = t[a] * M;
    double digit = std::round(scaled);
    if (std::abs(scaled - digit) > 1e-9) on_node = false;
    if (digit >= M) digit = 0.0;
    node = node * M + static_cast<Index>(digit);
  }
  if (on_node) return g.samples(row, node);
  Complex sum = 0.0;
  Point l(static_cast<std::size_t>(n));
  for (Index col = 0; col < g.window.size(); ++col) {
    const Complex a = g.coefficients(row, col);
    if (a == 0.0) continue;
    g.window.point_into(col, l);
    double phase = 0.0;
    for (int j = 0; j < n; ++j) phase += (l[j] - k[j]) * t[j];
    sum += a * std::polar(1.0, kTwoPi * phase);
  }
  return sum;
}

Matrix Symbol::sample(const LatticeWindow& window, const TorusGrid& grid) const {
  if (window.dim() != impl_->n || grid.dim() != impl_->n) {
    throw DomainError("dimension mismatch between symbol and sampling domain");
  }
  if (impl_->kind == Kind::Grid) {
    const GridData& g = *impl_->grid;
    if (window.half_width() > g.window.half_width()) {
      throw DomainError("grid symbol sampled outside its lattice window");
    }
    const Matrix full =
        grid == g.grid ? g.samples : detail::coefficients_to_samples(g.window, grid, g.coefficients);
    if (window == g.window) return full;
    Matrix out(window.size(), grid.size());
    Point k(static_cast<std::size_t>(window.dim()));
    for (Index i = 0; i < window.size(); ++i) {
      window.point_into(i, k);
      out.row(i) = full.row(g.window.index_of(k));
    }
    return out;
  }
  Matrix out(window.size(), grid.size());
  const int n = impl_->n;
  Point k(static_cast<std::size_t>(n));
  std::vector<int> digits(static_cast<std::size_t>(n));
  std::vector<TorusPoint> nodes(static_cast<std::size_t>(grid.size()));
  for (Index j = 0; j < grid.size(); ++j) nodes[j] = grid.node(j);
  for (Index i = 0; i < window.size(); ++i) {
    window.point_into(i, k);
    if (!impl_->x_dependent) {
      out.row(i).setConstant((*this)(k, nodes[0]));
      continue;
    }
    for (Index j = 0; j < grid.size(); ++j) out(i, j) = (*this)(k, nodes[j]);
  }
  return out;
}

Symbol parse_symbol(std::string_view text, int n, std::optional<double> order) {
  return Symbol::from_expression(Expression::parse(text, n), order);
}

Symbol bessel_symbol(int n, double s) { return Symbol::from_builtin(n, {"bessel", {{"s", s}}}); }

Symbol multiplier_symbol(int n, double s, double c, double a, double d, double q, int axis) {
  return Symbol::from_builtin(
      n, {"multiplier", {{"s", s}, {"c", c}, {"a", a}, {"d", d}, {"q", q}, {"axis", axis}}});
}

Symbol jump_symbol(int n, int direction, int axis) {
  return Symbol::from_builtin(n, {"jump", {{"direction", direction}, {"axis", axis}}});
}

int dyadic_shell(std::span<const int> k) {
  long long r2 = 0;
  for (int c : k) r2 += static_cast<long long>(c) * c;
  int j = 0;
  // 2^{j+1} <= 1+|k|  <=>  (2^{j+1} - 1)^2 <= |k|^2
  while (true) {
    const long long edge = (1LL << (j + 1)) - 1;
    if (edge * edge > r2) return j;
    ++j;
  }
}

double japanese_bracket(std::span<const int> k) { return bracket_power(k, 1.0); }

namespace {

double euclid(std::span<const int> k) {
  double r2 = 0.0;
  for (int c : k) r2 += static_cast<double>(c) * c;
  return std::sqrt(r2);
}

std::vector<MultiIndex> multi_indices(int n, int max_order) {
  std::vector<MultiIndex> out;
  MultiIndex a(static_cast<std::size_t>(n), 0);
  while (true) {
    if (order(a) <= max_order) out.push_back(a);
    int j = n - 1;
    while (j >= 0 && a[j] == max_order) a[j--] = 0;
    if (j < 0) break;
    ++a[j];
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const MultiIndex& p, const MultiIndex& q) { return order(p) < order(q); });
  return out;
}

double binomial(int a, int b) {
  double r = 1.0;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

// Symbol rows on a base window, with the requested window's points that may
// be differenced up to some order.
struct Rows {
  LatticeWindow base;
  Matrix samples;
  bool grid_backed;
};

Rows base_rows(const Symbol& sigma, const LatticeWindow& window, const TorusGrid& grid,
               int extra) {
  if (sigma.kind() == Symbol::Kind::Grid) {
    const GridData& g = sigma.grid_data();
    if (window.half_width() > g.window.half_width()) {
      throw DomainError("grid symbol analysed outside its lattice window");
    }
    return {g.window, sigma.sample(g.window, grid), true};
  }
  LatticeWindow base(window.dim(), window.half_width() + extra);
  return {base, sigma.sample(base, grid), false};
}

// sup_x |Delta^alpha s(k, x)| for the window points where every shifted row is
// available and, for grid symbols, interior.
struct PointValues {
  std::vector<Point> points;
  std::vector<double> sups;
};

PointValues differenced_sups(const Symbol& sigma, const Rows& rows, const Matrix& data,
                             const LatticeWindow& window, const MultiIndex& alpha) {
  const int n = window.dim();
  PointValues out;
  const std::vector<MultiIndex> gammas = [&] {
    std::vector<MultiIndex> all;
    MultiIndex g(static_cast<std::size_t>(n), 0);
    while (true) {
      all.push_back(g);
      int j = n - 1;
      while (j >= 0 && g[j] == alpha[j]) g[j--] = 0;
      if (j < 0) break;
      ++g[j];
    }
    return all;
  }();
  std::vector<Index> where(gammas.size());
  std::vector<double> weights(gammas.size());
  Point k(static_cast<std::size_t>(n));
  Point shifted(static_cast<std::size_t>(n));
  Eigen::RowVectorXcd acc(data.cols());
  for (Index i = 0; i < window.size(); ++i) {
    window.point_into(i, k);
    bool ok = true;
    for (std::size_t g = 0; g < gammas.size() && ok; ++g) {
      double w = 1.0;
      for (int j = 0; j < n; ++j) {
        shifted[j] = k[j] + gammas[g][j];
        w *= binomial(alpha[j], gammas[g][j]);
      }
      if ((order(alpha) - order(gammas[g])) % 2 != 0) w = -w;
      where[g] = rows.base.index_of(shifted);
      weights[g] = w;
      if (where[g] < 0 || (rows.grid_backed && !sigma.is_interior(shifted))) ok = false;
    }
    if (!ok) continue;
    acc.setZero();
    for (std::size_t g = 0; g < gammas.size(); ++g) acc += weights[g] * data.row(where[g]);
    out.points.push_back(k);
    out.sups.push_back(acc.cwiseAbs().maxCoeff());
  }
  return out;
}

struct ShellSups {
  std::vector<int> shells;
  std::vector<double> sups;
  std::vector<Point> argmax;
};

ShellSups by_shell(const PointValues& values, const std::vector<double>& weights_by_point = {}) {
  std::map<int, std::pair<double, Point>> best;
  for (std::size_t i = 0; i < values.points.size(); ++i) {
    const int j = dyadic_shell(values.points[i]);
    const double v = values.sups[i] * (weights_by_point.empty() ? 1.0 : weights_by_point[i]);
    auto it = best.find(j);
    if (it == best.end() || v > it->second.first) best[j] = {v, values.points[i]};
  }
  ShellSups out;
  for (const auto& [j, entry] : best) {
    out.shells.push_back(j);
    out.sups.push_back(entry.first);
    out.argmax.push_back(entry.second);
  }
  return out;
}

// Spectral D_x^(beta) of every row: coefficient of e^{2 pi i xi.x} is scaled
// by prod_j prod_{m < beta_j} (xi_j - m).
Matrix x_derivative(const Symbol& sigma, const Rows& rows, const TorusGrid& grid,
                    const MultiIndex& beta) {
  const int n = grid.dim();
  auto factor = [&](std::span<const int> xi) {
    double f = 1.0;
    for (int j = 0; j < n; ++j) {
      for (int m = 0; m < beta[j]; ++m) f *= xi[j] - m;
    }
    return f;
  };
  if (rows.grid_backed) {
    const GridData& g = sigma.grid_data();
    Matrix scaled = g.coefficients;
    Point k(static_cast<std::size_t>(n));
    Point l(static_cast<std::size_t>(n));
    Point xi(static_cast<std::size_t>(n));
    for (Index r = 0; r < g.window.size(); ++r) {
      g.window.point_into(r, k);
      for (Index c = 0; c < g.window.size(); ++c) {
        g.window.point_into(c, l);
        for (int j = 0; j < n; ++j) xi[j] = l[j] - k[j];
        scaled(r, c) *= factor(xi);
      }
    }
    return detail::coefficients_to_samples(g.window, grid, scaled);
  }
  const int M = grid.points_per_axis();
  const int lo = -(M / 2);
  const detail::Phases phases(M);
  std::vector<Index> dims{rows.samples.rows()};
  std::vector<Matrix> forward{Matrix()};
  std::vector<Matrix> backward{Matrix()};
  for (int a = 0; a < n; ++a) {
    dims.push_back(M);
    forward.push_back(detail::mode_kernel(phases, lo, M, -1));
    backward.push_back(detail::mode_kernel(phases, lo, M, +1).transpose());
  }
  const Matrix transposed = rows.samples.transpose();
  Vector modes = detail::contract(Eigen::Map<const Vector>(transposed.data(), transposed.size()),
                                  dims, forward);
  const TorusGrid box(n, M);
  std::vector<int> digits(static_cast<std::size_t>(n));
  Point xi(static_cast<std::size_t>(n));
  for (Index j = 0; j < box.size(); ++j) {
    box.node_digits(j, digits);
    for (int a = 0; a < n; ++a) xi[a] = lo + digits[a];
    const double f = factor(xi) * grid.weight();
    for (Index r = 0; r < rows.samples.rows(); ++r) modes(r * box.size() + j) *= f;
  }
  const Vector back = detail::contract(modes, dims, backward);
  return Eigen::Map<const Matrix>(back.data(), grid.size(), rows.samples.rows()).transpose();
}

// Largest |prod_{m < beta_j} (xi_j - m)| over |xi_j| <= M: roundoff in the
// samples is amplified by this much.
double derivative_gain(int M, const MultiIndex& beta) {
  double gain = 1.0;
  for (int b : beta) {
    double best = 0.0;
    for (int xi = -M; xi <= M; ++xi) {
      double f = 1.0;
      for (int m = 0; m < b; ++m) f *= xi - m;
      best = std::max(best, std::abs(f));
    }
    gain *= best;
  }
  return gain;
}

void fit(ShellFit& entry, const ShellSups& s, double floor) {
  std::vector<std::size_t> use;
  for (std::size_t i = 0; i < s.shells.size(); ++i) {
    if (s.shells[i] >= 1) use.push_back(i);
  }
  if (use.size() >= 4 && s.shells[use.front()] == 1) use.erase(use.begin());
  std::vector<double> X;
  std::vector<double> Y;
  bool any_signal = false;
  for (std::size_t i : use) {
    entry.shells.push_back(s.shells[i]);
    if (s.sups[i] <= floor) {
      entry.shell_sups.push_back(0.0);
      X.push_back(s.shells[i] * std::numbers::ln2);
      Y.push_back(std::log(floor));
    } else {
      any_signal = true;
      entry.shell_sups.push_back(s.sups[i]);
      X.push_back(0.5 * std::log1p(std::pow(euclid(s.argmax[i]), 2)));
      Y.push_back(std::log(s.sups[i]));
    }
  }
  if (!any_signal || X.size() < 2) {
    entry.vanishing = true;
    entry.slope = -std::numeric_limits<double>::infinity();
    return;
  }
  const double n = static_cast<double>(X.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    mx += X[i];
    my += Y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
  }
  entry.slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double r = Y[i] - (my + entry.slope * (X[i] - mx));
    ss += r * r;
  }
  entry.residual = std::sqrt(ss / n);
}

}  // namespace

OrderEstimate estimate_order(const Symbol& sigma, const LatticeWindow& window,
                             const TorusGrid& grid, const OrderOptions& options) {
  require_resolving(window, grid);
  if (sigma.dim() != window.dim()) throw DomainError("symbol and window dimensions differ");
  const Rows rows = base_rows(sigma, window, grid, options.alpha_max);
  const double scale = rows.samples.size() ? rows.samples.cwiseAbs().maxCoeff() : 0.0;
  const double floor = std::max(options.relative_floor * scale, options.absolute_floor);

  OrderEstimate result;
  result.m_hat = -std::numeric_limits<double>::infinity();
  const auto alphas = multi_indices(window.dim(), options.alpha_max);
  const auto betas = multi_indices(window.dim(), options.beta_max);
  for (const MultiIndex& beta : betas) {
    const bool trivial = order(beta) == 0;
    Matrix derived;
    if (!trivial && sigma.depends_on_x()) derived = x_derivative(sigma, rows, grid, beta);
    for (const MultiIndex& alpha : alphas) {
      ShellFit entry;
      entry.alpha = alpha;
      entry.beta = beta;
      if (!trivial && !sigma.depends_on_x()) {
        entry.vanishing = true;
        entry.slope = -std::numeric_limits<double>::infinity();
        result.table.push_back(entry);
        continue;
      }
      const Matrix& data = trivial ? rows.samples : derived;
      const PointValues values = differenced_sups(sigma, rows, data, window, alpha);
      fit(entry, by_shell(values), floor * derivative_gain(grid.points_per_axis(), beta));
      if (!entry.vanishing) result.m_hat = std::max(result.m_hat, entry.slope + order(alpha));
      result.table.push_back(std::move(entry));
    }
  }
  return result;
}

namespace {

// Golden-section search on [a, b]; returns (argmin, min).
std::pair<double, double> golden_min(const std::function<double(double)>& f, double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > 1e-12) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace

EllipticityReport check_ellipticity(const Symbol& sigma, double m, const LatticeWindow& window,
                                    const TorusGrid& grid) {
  require_resolving(window, grid);
  if (sigma.dim() != window.dim()) throw DomainError("symbol and window dimensions differ");
  const int n = window.dim();
  const Matrix samples = sigma.sample(window, grid);
  std::vector<double> row_min(static_cast<std::size_t>(window.size()));
  std::vector<double> radius(static_cast<std::size_t>(window.size()));
  double scale = 0.0;
  Point k(static_cast<std::size_t>(n));
  const double h = 1.0 / grid.points_per_axis();
  for (Index i = 0; i < window.size(); ++i) {
    window.point_into(i, k);
    radius[i] = euclid(k);
    const double weight = std::pow(1.0 + radius[i], m);
    Index best = 0;
    const double low = samples.row(i).cwiseAbs().minCoeff(&best);
    scale = std::max(scale, samples.row(i).cwiseAbs().maxCoeff() / weight);
    double value = low;
    if (sigma.depends_on_x() && low > 0.0) {
      TorusPoint x = grid.node(best);
      for (int sweep = 0; sweep < 2; ++sweep) {
        for (int a = 0; a < n; ++a) {
          TorusPoint y = x;
          auto along = [&](double t) {
            y[a] = t;
            return std::abs(sigma(k, y));
          };
          const auto [where, found] = golden_min(along, x[a] - h, x[a] + h);
          if (found < value) {
            x[a] = where;
            value = found;
          }
        }
      }
    }
    row_min[i] = value / weight;
  }

  std::map<int, double> shell_min;
  for (Index i = 0; i < window.size(); ++i) {
    window.point_into(i, k);
    const int j = dyadic_shell(k);
    auto it = shell_min.find(j);
    if (it == shell_min.end() || row_min[i] < it->second) shell_min[j] = row_min[i];
  }
  EllipticityReport report;
  for (const auto& [j, v] : shell_min) {
    report.shells.push_back(j);
    report.min_ratio_profile.push_back(v);
  }
  const double peak =
      *std::max_element(report.min_ratio_profile.begin(), report.min_ratio_profile.end());
  const double tail = report.min_ratio_profile.back();
  if (tail <= 0.1 * peak || tail <= 1e-8 * scale) {
    report.elliptic = false;
    report.C = tail;
    return report;
  }
  double m_radius = -1.0;
  for (Index i = 0; i < window.size(); ++i) {
    if (row_min[i] < 0.1 * tail) m_radius = std::max(m_radius, radius[i]);
  }
  double C = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < window.size(); ++i) {
    if (radius[i] > m_radius) C = std::min(C, row_min[i]);
  }
  report.elliptic = true;
  report.C = C;
  report.M_radius = std::max(0.0, m_radius);
  return report;
}

Complex ToroidalSymbol::operator()(std::span<const double> x, std::span<const int> xi) const {
  Point minus(xi.begin(), xi.end());
  for (int& c : minus) c = -c;
  return std::conj(lattice_(minus, x));
}

ToroidalSymbol dual_toroidal_symbol(const Symbol& sigma) { return ToroidalSymbol(sigma); }

bool eventually_decreasing(const std::vector<double>& values) {
  if (values.empty()) return true;
  const auto peak_it = std::max_element(values.begin(), values.end());
  if (*peak_it == 0.0) return true;
  const std::size_t peak = static_cast<std::size_t>(peak_it - values.begin());
  if (peak + 1 == values.size()) return false;
  for (std::size_t i = peak + 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1]) return false;
  }
  return values.back() < *peak_it;
}

S0Diagnostic s0_diagnostic(const Symbol& sigma, const LatticeWindow& window,
                           const TorusGrid& grid, int alpha_max) {
  require_resolving(window, grid);
  const Rows rows = base_rows(sigma, window, grid, alpha_max);
  S0Diagnostic out;
  std::map<int, std::map<int, double>> profile;
  for (const MultiIndex& alpha : multi_indices(window.dim(), alpha_max)) {
    const PointValues values = differenced_sups(sigma, rows, rows.samples, window, alpha);
    std::vector<double> weights;
    for (const Point& k : values.points) weights.push_back(std::pow(1.0 + euclid(k), order(alpha)));
    const ShellSups s = by_shell(values, weights);
    for (std::size_t i = 0; i < s.shells.size(); ++i) {
      double& slot = profile[order(alpha)][s.shells[i]];
      slot = std::max(slot, s.sups[i]);
    }
  }
  out.decays = true;
  for (const auto& [p, shells] : profile) {
    DecayProfile d;
    d.p = p;
    if (out.shells.empty()) {
      for (const auto& [j, v] : shells) out.shells.push_back(j);
    }
    for (const auto& [j, v] : shells) d.shell_sups.push_back(v);
    d.eventually_decreasing = eventually_decreasing(d.shell_sups);
    out.decays = out.decays && d.eventually_decreasing;
    out.by_order.push_back(std::move(d));
  }
  return out;
}

}  // namespace lpdo

#include "lpdo/lattice.hpp"

#include <cstdlib>
#include <numeric>
#include <string>

#include "lpdo/errors.hpp"
#include "lpdo/transform.hpp"

namespace lpdo {

int order(const MultiIndex& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

LatticeWindow::LatticeWindow(int dim, int half_width) : dim_(dim), half_width_(half_width) {
  if (dim < 1) throw DomainError("lattice dimension must be positive");
  if (half_width < 1) throw DomainError("window half-width must be positive");
  size_ = 1;
  for (int j = 0; j < dim; ++j) size_ *= side();
}

Point LatticeWindow::point(Index i) const {
  Point k(static_cast<std::size_t>(dim_));
  point_into(i, k);
  return k;
}

void LatticeWindow::point_into(Index i, std::span<int> out) const {
  const int s = side();
  for (int j = dim_ - 1; j >= 0; --j) {
    out[static_cast<std::size_t>(j)] = static_cast<int>(i % s) - half_width_;
    i /= s;
  }
}

bool LatticeWindow::contains(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != dim_) return false;
  for (int c : k) {
    if (std::abs(c) > half_width_) return false;
  }
  return true;
}

Index LatticeWindow::index_of(std::span<const int> k) const {
  if (!contains(k)) return -1;
  Index i = 0;
  for (int c : k) i = i * side() + (c + half_width_);
  return i;
}

bool LatticeWindow::is_interior(std::span<const int> k, int margin) const {
  for (int c : k) {
    if (std::abs(c) > half_width_ - margin) return false;
  }
  return true;
}

TorusGrid::TorusGrid(int dim, int points_per_axis) : dim_(dim), points_(points_per_axis) {
  if (dim < 1) throw DomainError("torus dimension must be positive");
  if (points_per_axis < 1) throw DomainError("torus grid needs at least one point per axis");
  size_ = 1;
  for (int j = 0; j < dim; ++j) size_ *= points_;
  weight_ = 1.0 / static_cast<double>(size_);
}

TorusPoint TorusGrid::node(Index i) const {
  std::vector<int> digits(static_cast<std::size_t>(dim_));
  node_digits(i, digits);
  TorusPoint x(digits.size());
  for (std::size_t j = 0; j < digits.size(); ++j) {
    x[j] = static_cast<double>(digits[j]) / points_;
  }
  return x;
}

void TorusGrid::node_digits(Index i, std::span<int> out) const {
  for (int j = dim_ - 1; j >= 0; --j) {
    out[static_cast<std::size_t>(j)] = static_cast<int>(i % points_);
    i /= points_;
  }
}

TorusGrid default_grid(const LatticeWindow& window) {
  return TorusGrid(window.dim(), 2 * window.half_width() + 3);
}

void require_resolving(const LatticeWindow& window, const TorusGrid& grid) {
  if (window.dim() != grid.dim()) {
    throw DomainError("dimension mismatch: window has n=" + std::to_string(window.dim()) +
                      ", grid has n=" + std::to_string(grid.dim()));
  }
  if (grid.points_per_axis() < window.side()) {
    throw AliasingError("grid with M=" + std::to_string(grid.points_per_axis()) +
                        " cannot resolve window N=" + std::to_string(window.half_width()) +
                        " (need M >= " + std::to_string(window.side()) + ")");
  }
}

LatticeSequence::LatticeSequence(LatticeWindow w, Vector v) : window(w), values(std::move(v)) {
  if (values.size() != window.size()) {
    throw DomainError("sequence has " + std::to_string(values.size()) + " values for a window of " +
                      std::to_string(window.size()) + " points");
  }
}

LatticeSequence LatticeSequence::zeros(const LatticeWindow& window) {
  return LatticeSequence(window, Vector::Zero(window.size()));
}

LatticeSequence LatticeSequence::delta(const LatticeWindow& window, std::span<const int> k) {
  const Index i = window.index_of(k);
  if (i < 0) throw DomainError("delta point outside the window");
  LatticeSequence f = zeros(window);
  f.values(i) = 1.0;
  return f;
}

Complex LatticeSequence::at(std::span<const int> k) const {
  const Index i = window.index_of(k);
  return i < 0 ? Complex(0.0) : values(i);
}

TorusFunction::TorusFunction(TorusGrid g, Vector v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw DomainError("torus function size does not match grid");
  if (!values.allFinite()) throw DomainError("torus function has non-finite values");
}

TorusFunction forward_dft(const LatticeSequence& f, const TorusGrid& grid) {
  if (grid.dim() != f.window.dim()) throw DomainError("dimension mismatch in forward_dft");
  const detail::Phases phases(grid.points_per_axis());
  const std::vector<int> lo(static_cast<std::size_t>(grid.dim()), -f.window.half_width());
  return TorusFunction(grid, detail::modes_to_grid(f.values, phases, lo, f.window.side(), -1));
}

LatticeSequence inverse_dft(const TorusFunction& F, const LatticeWindow& window) {
  require_resolving(window, F.grid);
  const detail::Phases phases(F.grid.points_per_axis());
  const std::vector<int> lo(static_cast<std::size_t>(window.dim()), -window.half_width());
  Vector values = detail::grid_to_modes(F.values, phases, lo, window.side(), +1);
  values *= F.grid.weight();
  return LatticeSequence(window, std::move(values));
}

double torus_coordinate(double t) {
  const volatile double shifted = (t - std::floor(t)) + 1.0;
  const double r = shifted - 1.0;
  return r >= 1.0 ? 0.0 : r;
}

Complex torus_quadrature(const TorusFunction& F) {
  Complex sum = 0.0;
  for (Index i = 0; i < F.values.size(); ++i) sum += F.values(i);
  return sum * F.grid.weight();
}

bool Differenced::reliable(std::span<const int> k) const {
  const int N = sequence.window.half_width();
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (k[j] < -N + lower_margin[j] || k[j] > N - upper_margin[j]) return false;
  }
  return true;
}

namespace {

Differenced difference(const LatticeSequence& f, const MultiIndex& alpha, bool forward) {
  const LatticeWindow& w = f.window;
  const int n = w.dim();
  if (static_cast<int>(alpha.size()) != n) throw DomainError("multi-index dimension mismatch");
  for (int a : alpha) {
    if (a < 0) throw DomainError("multi-index entries must be nonnegative");
  }
  const int N = w.half_width();
  Vector current = f.values;
  Point k(static_cast<std::size_t>(n));
  Index stride = w.size();
  for (int j = 0; j < n; ++j) {
    stride /= w.side();
    for (int step = 0; step < alpha[static_cast<std::size_t>(j)]; ++step) {
      Vector next(current.size());
      for (Index i = 0; i < current.size(); ++i) {
        w.point_into(i, k);
        const int c = k[static_cast<std::size_t>(j)];
        if (forward) {
          const Complex ahead = c < N ? current(i + stride) : Complex(0.0);
          next(i) = ahead - current(i);
        } else {
          const Complex behind = c > -N ? current(i - stride) : Complex(0.0);
          next(i) = current(i) - behind;
        }
      }
      current.swap(next);
    }
  }
  std::vector<int> none(static_cast<std::size_t>(n), 0);
  std::vector<int> margins(alpha.begin(), alpha.end());
  return forward ? Differenced{LatticeSequence(w, std::move(current)), none, margins}
                 : Differenced{LatticeSequence(w, std::move(current)), margins, none};
}

}  // namespace

Differenced forward_difference(const LatticeSequence& f, const MultiIndex& alpha) {
  return difference(f, alpha, true);
}

Differenced backward_difference(const LatticeSequence& f, const MultiIndex& alpha) {
  return difference(f, alpha, false);
}

}  // namespace lpdo

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lpdo {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// A point k of the lattice Z^n.
using Point = std::vector<int>;
/// A point x of the torus T^n = R^n / Z^n, one coordinate per axis.
using TorusPoint = std::vector<double>;
/// Multi-index alpha in N_0^n.
using MultiIndex = std::vector<int>;

int order(const MultiIndex& alpha);

/// The cube {k in Z^n : |k_j| <= N} with points in lexicographic order
/// (first coordinate slowest).
class LatticeWindow {
 public:
  LatticeWindow(int dim, int half_width);

  int dim() const { return dim_; }
  int half_width() const { return half_width_; }
  int side() const { return 2 * half_width_ + 1; }
  Index size() const { return size_; }

  Point point(Index i) const;
  void point_into(Index i, std::span<int> out) const;
  bool contains(std::span<const int> k) const;
  /// Position of k in lexicographic order, or -1 when k lies outside.
  Index index_of(std::span<const int> k) const;

  /// True when every coordinate satisfies |k_j| <= N - margin.
  bool is_interior(std::span<const int> k, int margin) const;

  bool operator==(const LatticeWindow& other) const = default;

 private:
  int dim_;
  int half_width_;
  Index size_;
};

/// Uniform grid x = j / M, j in {0, ..., M-1}^n, with quadrature weight M^{-n}.
class TorusGrid {
 public:
  TorusGrid(int dim, int points_per_axis);

  int dim() const { return dim_; }
  int points_per_axis() const { return points_; }
  Index size() const { return size_; }
  double weight() const { return weight_; }

  TorusPoint node(Index i) const;
  /// Integer coordinates j of node i.
  void node_digits(Index i, std::span<int> out) const;

  bool operator==(const TorusGrid& other) const = default;

 private:
  int dim_;
  int points_;
  Index size_;
  double weight_;
};

/// M = 2N + 3: odd, and large enough that every quadrature of data supported
/// in the window is exact.
TorusGrid default_grid(const LatticeWindow& window);

/// Throws AliasingError unless grid.M >= 2N + 1 and dimensions agree.
void require_resolving(const LatticeWindow& window, const TorusGrid& grid);

/// Truncation of f: Z^n -> C to a window; implicitly zero outside it.
struct LatticeSequence {
  LatticeWindow window;
  Vector values;

  LatticeSequence(LatticeWindow w, Vector v);

  static LatticeSequence zeros(const LatticeWindow& window);
  static LatticeSequence delta(const LatticeWindow& window, std::span<const int> k);

  /// f(k), zero outside the window.
  Complex at(std::span<const int> k) const;
  double norm() const { return values.norm(); }
};

/// Samples of a function on T^n at the nodes of a grid.
struct TorusFunction {
  TorusGrid grid;
  Vector values;

  TorusFunction(TorusGrid g, Vector v);
};

/// f^(x) = sum_k e^{-2 pi i k.x} f(k), evaluated at the grid nodes.
TorusFunction forward_dft(const LatticeSequence& f, const TorusGrid& grid);

/// f(k) = M^{-n} sum_x e^{2 pi i k.x} F(x) for every window point.
LatticeSequence inverse_dft(const TorusFunction& F, const LatticeWindow& window);

/// M^{-n} sum_x F(x).
Complex torus_quadrature(const TorusFunction& F);

/// Representative of t mod 1 in [0,1). t and t+1 land on the same double.
double torus_coordinate(double t);

/// Result of a difference operator on a truncated sequence. Points within the
/// per-axis margins read zero-extended data and are flagged as unreliable.
struct Differenced {
  LatticeSequence sequence;
  std::vector<int> lower_margin;
  std::vector<int> upper_margin;

  bool reliable(std::span<const int> k) const;
};

/// Delta^alpha f with Delta_{k_j} f(k) = f(k + e_j) - f(k).
Differenced forward_difference(const LatticeSequence& f, const MultiIndex& alpha);

/// Backward differences with f(k) - f(k - e_j).
Differenced backward_difference(const LatticeSequence& f, const MultiIndex& alpha);

}  // namespace lpdo

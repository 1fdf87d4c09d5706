#pragma once

#include <span>
#include <vector>

#include "lpdo/lattice.hpp"

// Separable trigonometric sums on M^n grids. Data on a grid or on a box of
// modes is stored row-major (first axis slowest), matching LatticeWindow.
namespace lpdo::detail {

/// Table of e^{2 pi i r / M}; arguments are reduced modulo M exactly.
class Phases {
 public:
  explicit Phases(int modulus);

  int modulus() const { return static_cast<int>(table_.size()); }
  Complex operator()(long long r) const {
    const long long M = modulus();
    long long q = r % M;
    if (q < 0) q += M;
    return table_[static_cast<std::size_t>(q)];
  }

 private:
  std::vector<Complex> table_;
};

/// K(o, j) = e^{sign 2 pi i (lo + o) j / M}, count x M.
Matrix mode_kernel(const Phases& phases, int lo, int count, int sign);

/// Applies kernels[a] (out_a x dims[a]) along every axis a of `data`.
Vector contract(const Vector& data, std::span<const Index> dims,
                std::span<const Matrix> kernels);

/// c(m) = sum_j e^{sign 2 pi i m.j / M} g(j) for m in the box lo + [0, count)^n.
Vector grid_to_modes(const Vector& g, const Phases& phases, std::span<const int> lo,
                     int count, int sign);

/// g(j) = sum_m e^{sign 2 pi i m.j / M} c(m) over the box lo + [0, count)^n.
Vector modes_to_grid(const Vector& c, const Phases& phases, std::span<const int> lo,
                     int count, int sign);

}  // namespace lpdo::detail

namespace lpdo::detail {

/// e^{sign 2 pi i k.x} for every (window point, node), node index fastest.
Vector phase_table(const LatticeWindow& window, const TorusGrid& grid, const Phases& phases,
                   int sign);

/// Row-wise quadrature A(k,l) = M^{-n} sum_x e^{2 pi i (k-l).x} s(k,x), where
/// samples holds one row per window point and one column per grid node.
Matrix samples_to_coefficients(const LatticeWindow& window, const TorusGrid& grid,
                               const Matrix& samples);

/// Inverse of the above: s(k,x) = sum_l A(k,l) e^{2 pi i (l-k).x}.
Matrix coefficients_to_samples(const LatticeWindow& window, const TorusGrid& grid,
                               const Matrix& coefficients);

}  // namespace lpdo::detail

#include "lpdo/transform.hpp"

#include <cmath>
#include <numbers>

namespace lpdo::detail {

Phases::Phases(int modulus) : table_(static_cast<std::size_t>(modulus)) {
  for (int r = 0; r < modulus; ++r) {
    table_[static_cast<std::size_t>(r)] =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / modulus);
  }
}

Matrix mode_kernel(const Phases& phases, int lo, int count, int sign) {
  const int M = phases.modulus();
  Matrix K(count, M);
  for (int o = 0; o < count; ++o) {
    const long long m = lo + o;
    for (int j = 0; j < M; ++j) K(o, j) = phases(sign * m * j);
  }
  return K;
}

Vector contract(const Vector& data, std::span<const Index> dims,
                std::span<const Matrix> kernels) {
  std::vector<Index> shape(dims.begin(), dims.end());
  Vector current = data;
  for (std::size_t a = 0; a < shape.size(); ++a) {
    const Matrix& K = kernels[a];
    if (K.size() == 0) continue;  // identity along this axis
    Index prefix = 1;
    Index suffix = 1;
    for (std::size_t b = 0; b < a; ++b) prefix *= shape[b];
    for (std::size_t b = a + 1; b < shape.size(); ++b) suffix *= shape[b];
    const Index in = shape[a];
    const Index out = K.rows();
    Vector next(prefix * out * suffix);
    for (Index p = 0; p < prefix; ++p) {
      Eigen::Map<const Matrix> src(current.data() + p * in * suffix, suffix, in);
      Eigen::Map<Matrix> dst(next.data() + p * out * suffix, suffix, out);
      dst.noalias() = src * K.transpose();
    }
    shape[a] = out;
    current.swap(next);
  }
  return current;
}

Vector grid_to_modes(const Vector& g, const Phases& phases, std::span<const int> lo,
                     int count, int sign) {
  const std::size_t n = lo.size();
  std::vector<Index> dims(n, phases.modulus());
  std::vector<Matrix> kernels;
  kernels.reserve(n);
  for (std::size_t a = 0; a < n; ++a) kernels.push_back(mode_kernel(phases, lo[a], count, sign));
  return contract(g, dims, kernels);
}

Vector modes_to_grid(const Vector& c, const Phases& phases, std::span<const int> lo,
                     int count, int sign) {
  const std::size_t n = lo.size();
  std::vector<Index> dims(n, count);
  std::vector<Matrix> kernels;
  kernels.reserve(n);
  for (std::size_t a = 0; a < n; ++a) {
    kernels.push_back(mode_kernel(phases, lo[a], count, sign).transpose());
  }
  return contract(c, dims, kernels);
}

Vector phase_table(const LatticeWindow& window, const TorusGrid& grid, const Phases& phases,
                   int sign) {
  const int n = window.dim();
  std::vector<int> digits(static_cast<std::size_t>(grid.size() * n));
  for (Index j = 0; j < grid.size(); ++j) {
    grid.node_digits(j, std::span<int>(digits.data() + j * n, static_cast<std::size_t>(n)));
  }
  Vector table(grid.size() * window.size());
  Point k(static_cast<std::size_t>(n));
  for (Index i = 0; i < window.size(); ++i) {
    window.point_into(i, k);
    for (Index j = 0; j < grid.size(); ++j) {
      long long dot = 0;
      for (int a = 0; a < n; ++a) dot += static_cast<long long>(k[a]) * digits[j * n + a];
      table(i * grid.size() + j) = phases(sign * dot);
    }
  }
  return table;
}

Matrix samples_to_coefficients(const LatticeWindow& window, const TorusGrid& grid,
                               const Matrix& samples) {
  require_resolving(window, grid);
  const Phases phases(grid.points_per_axis());
  const Matrix transposed = samples.transpose();
  Vector data = Eigen::Map<const Vector>(transposed.data(), transposed.size());
  data.array() *= phase_table(window, grid, phases, +1).array();

  const int n = window.dim();
  std::vector<Index> dims{window.size()};
  std::vector<Matrix> kernels{Matrix()};
  for (int a = 0; a < n; ++a) {
    dims.push_back(grid.points_per_axis());
    kernels.push_back(mode_kernel(phases, -window.half_width(), window.side(), -1));
  }
  const Vector out = contract(data, dims, kernels);
  return Eigen::Map<const Matrix>(out.data(), window.size(), window.size()).transpose() *
         grid.weight();
}

Matrix coefficients_to_samples(const LatticeWindow& window, const TorusGrid& grid,
                               const Matrix& coefficients) {
  require_resolving(window, grid);
  const Phases phases(grid.points_per_axis());
  const Matrix transposed = coefficients.transpose();
  const Vector data = Eigen::Map<const Vector>(transposed.data(), transposed.size());

  const int n = window.dim();
  std::vector<Index> dims{window.size()};
  std::vector<Matrix> kernels{Matrix()};
  for (int a = 0; a < n; ++a) {
    dims.push_back(window.side());
    kernels.push_back(mode_kernel(phases, -window.half_width(), window.side(), +1).transpose());
  }
  Vector out = contract(data, dims, kernels);
  out.array() *= phase_table(window, grid, phases, -1).array();
  return Eigen::Map<const Matrix>(out.data(), grid.size(), window.size()).transpose();
}

}  // namespace lpdo::detail

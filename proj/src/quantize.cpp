#include "lpdo/quantize.hpp"

#include <Eigen/SVD>

#include "lpdo/errors.hpp"
#include "lpdo/transform.hpp"

namespace lpdo {

namespace {

void require_dims(const Symbol& sigma, const LatticeWindow& window, const TorusGrid& grid) {
  if (sigma.dim() != window.dim()) {
    throw DomainError("symbol has n=" + std::to_string(sigma.dim()) + " but window has n=" +
                      std::to_string(window.dim()));
  }
  require_resolving(window, grid);
}

}  // namespace

int default_margin(const LatticeWindow& window) { return window.half_width() / 4; }

LatticeSequence apply(const Symbol& sigma, const LatticeSequence& f, const TorusGrid& grid) {
  require_dims(sigma, f.window, grid);
  const TorusFunction F = forward_dft(f, grid);
  const detail::Phases phases(grid.points_per_axis());
  const Vector phase = detail::phase_table(f.window, grid, phases, +1);
  const Matrix samples = sigma.sample(f.window, grid);
  Vector out(f.window.size());
  for (Index i = 0; i < f.window.size(); ++i) {
    Complex sum = 0.0;
    for (Index j = 0; j < grid.size(); ++j) {
      sum += phase(i * grid.size() + j) * samples(i, j) * F.values(j);
    }
    out(i) = sum * grid.weight();
  }
  return LatticeSequence(f.window, std::move(out));
}

OperatorMatrix assemble_matrix(const Symbol& sigma, const LatticeWindow& window,
                               const TorusGrid& grid) {
  require_dims(sigma, window, grid);
  if (sigma.kind() == Symbol::Kind::Grid && sigma.grid_data().window == window) {
    return {window, grid, sigma.grid_data().coefficients};
  }
  return {window, grid, detail::samples_to_coefficients(window, grid, sigma.sample(window, grid))};
}

Symbol extract_symbol(const OperatorMatrix& A, std::optional<double> order,
                      std::optional<int> interior_margin) {
  return Symbol::from_matrix(A.window, A.grid, A.entries, order,
                             interior_margin.value_or(default_margin(A.window)));
}

Symbol compose(const Symbol& sigma, const Symbol& tau, const LatticeWindow& window,
               const TorusGrid& grid) {
  if (sigma.dim() != tau.dim()) throw DomainError("composed symbols differ in dimension");
  const Matrix A = assemble_matrix(sigma, window, grid).entries;
  const Matrix B = assemble_matrix(tau, window, grid).entries;
  std::optional<double> order;
  if (sigma.declared_order() && tau.declared_order()) {
    order = *sigma.declared_order() + *tau.declared_order();
  }
  return extract_symbol({window, grid, A * B}, order);
}

Symbol adjoint_symbol(const Symbol& sigma, const LatticeWindow& window, const TorusGrid& grid) {
  const Matrix A = assemble_matrix(sigma, window, grid).entries;
  return extract_symbol({window, grid, A.adjoint()}, sigma.declared_order());
}

Matrix toroidal_matrix(const ToroidalSymbol& tau, const LatticeWindow& window,
                       const TorusGrid& grid) {
  require_dims(tau.lattice_symbol(), window, grid);
  // Row xi holds tau(., xi) on the grid; the row-wise quadrature then gives
  // M^{-n} sum_x e^{2 pi i (xi - eta).x} tau(x, xi) at (xi, eta).
  Matrix rows(window.size(), grid.size());
  std::vector<TorusPoint> nodes(static_cast<std::size_t>(grid.size()));
  for (Index j = 0; j < grid.size(); ++j) nodes[j] = grid.node(j);
  Point xi(static_cast<std::size_t>(window.dim()));
  for (Index i = 0; i < window.size(); ++i) {
    window.point_into(i, xi);
    for (Index j = 0; j < grid.size(); ++j) rows(i, j) = tau(nodes[j], xi);
  }
  return detail::samples_to_coefficients(window, grid, rows).transpose();
}

Matrix lattice_from_toroidal(const Matrix& toroidal, const LatticeWindow& window) {
  if (toroidal.rows() != window.size() || toroidal.cols() != window.size()) {
    throw DomainError("toroidal matrix does not match its window");
  }
  // Lexicographic order maps k -> -k to index -> size-1-index.
  return toroidal.adjoint().reverse();
}

double operator_norm(const Symbol& sigma, const LatticeWindow& window, const TorusGrid& grid) {
  const Matrix A = assemble_matrix(sigma, window, grid).entries;
  Eigen::BDCSVD<Matrix> svd(A);
  return svd.singularValues()(0);
}

}  // namespace lpdo

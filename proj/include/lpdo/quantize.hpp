#pragma once

#include <optional>

#include "lpdo/lattice.hpp"
#include "lpdo/symbol.hpp"

namespace lpdo {

/// Finite section of T_sigma: entries(k,l) = M^{-n} sum_x e^{2 pi i (k-l).x} sigma(k,x).
struct OperatorMatrix {
  LatticeWindow window;
  TorusGrid grid;
  Matrix entries;
};

/// Rows within N/4 layers of the window boundary are flagged by default.
int default_margin(const LatticeWindow& window);

/// (T_sigma f)(k) = M^{-n} sum_x e^{2 pi i k.x} sigma(k,x) f^(x) on f's window.
LatticeSequence apply(const Symbol& sigma, const LatticeSequence& f, const TorusGrid& grid);

OperatorMatrix assemble_matrix(const Symbol& sigma, const LatticeWindow& window,
                               const TorusGrid& grid);

/// Grid symbol whose assembly on A's window and grid reproduces A.
Symbol extract_symbol(const OperatorMatrix& A, std::optional<double> order = std::nullopt,
                      std::optional<int> interior_margin = std::nullopt);

/// Symbol of the finite-section product T_sigma T_tau.
Symbol compose(const Symbol& sigma, const Symbol& tau, const LatticeWindow& window,
               const TorusGrid& grid);

/// Symbol of the conjugate transpose of the finite section of T_sigma.
Symbol adjoint_symbol(const Symbol& sigma, const LatticeWindow& window, const TorusGrid& grid);

/// T_tau(eta, xi) = M^{-n} sum_x e^{2 pi i x.(xi - eta)} tau(x, xi), eta, xi in the window.
Matrix toroidal_matrix(const ToroidalSymbol& tau, const LatticeWindow& window,
                       const TorusGrid& grid);

/// Lattice matrix recovered from the toroidal one: R T_tau^H R with R: k -> -k.
Matrix lattice_from_toroidal(const Matrix& toroidal, const LatticeWindow& window);

/// Largest singular value of the finite section.
double operator_norm(const Symbol& sigma, const LatticeWindow& window, const TorusGrid& grid);

}  // namespace lpdo

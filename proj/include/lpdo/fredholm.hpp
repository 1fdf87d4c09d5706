#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lpdo/elliptic.hpp"
#include "lpdo/symbol.hpp"

namespace lpdo {

struct IndexSettings {
  /// Neumann steps of the parametrix behind the trace formula.
  int steps = 3;
  /// Singular values below rank_tol * largest count as zero.
  double rank_tol = 1e-8;
  double required_gap = 100.0;
  /// Extra layers on the long side of the rectangular sections.
  int row_margin = 4;
  double trace_tail_limit = 0.05;
  /// Singular values of the Atkinson defects above this are counted.
  double atkinson_threshold = 0.1;
};

struct SectionSpectrum {
  int dim_ker = 0;
  int dim_coker = 0;
  /// Smallest nonzero over largest zero singular value (or over the rank
  /// threshold when nothing is zero); the smaller of the two sections.
  double gap = 0.0;
  std::vector<double> ker_values;
  std::vector<double> coker_values;
};

/// Kernel from the tall section A[W+, W], cokernel from A[W, W+]^H, with W+
/// the window widened by row_margin layers.
SectionSpectrum section_spectrum(const Symbol& sigma, int N, const IndexSettings& settings);

struct TraceIndex {
  double raw = 0.0;
  std::optional<int> index;
  bool tail_certified = false;
  double tail_bound = 0.0;
  DecayReport decay;
};

/// sum over interior k of the x-mean of (tau_1 - tau_2)(k, .), with
/// T_1 = I - T_tau T_sigma and T_2 = I - T_sigma T_tau.
TraceIndex trace_index(const Symbol& sigma, const LatticeWindow& window, const TorusGrid& grid,
                       const IndexSettings& settings = {});

struct IndexReport {
  std::vector<int> windows;
  std::vector<int> dim_ker;
  std::vector<int> dim_coker;
  std::vector<double> gap_evidence;
  std::optional<int> svd_index;
  bool elliptic = true;
  double trace_index_raw = 0.0;
  std::optional<int> trace_index;
  bool tail_certified = false;
  double tail_bound = 0.0;
  bool agreement = false;
};

/// Kernel/cokernel counts across windows; stable when the last two windows
/// agree and both show the required spectral gap.
IndexReport svd_index(const Symbol& sigma, const std::vector<int>& windows,
                      const IndexSettings& settings = {});

/// svd_index plus the trace formula on the largest window. Non-elliptic
/// symbols get null verdicts.
IndexReport compute_index(const Symbol& sigma, const std::vector<int>& windows,
                          const IndexSettings& settings = {});

struct AtkinsonReport {
  std::vector<int> windows;
  /// Singular values above the threshold of K1 = T_tau T_sigma - I and
  /// K2 = T_sigma T_tau - I.
  std::vector<int> count_k1;
  std::vector<int> count_k2;
  std::vector<double> norm_k1;
  std::vector<double> norm_k2;
  bool bounded = false;
};

AtkinsonReport atkinson_check(const Symbol& sigma, const std::vector<int>& windows,
                              const IndexSettings& settings = {});

struct ProbeReport {
  bool elliptic = false;
  EllipticityReport ellipticity;
  std::optional<AtkinsonReport> atkinson;
  /// Singular values below 0.1 of the square sections (non-elliptic branch).
  std::vector<int> near_kernel_counts;
  std::vector<int> windows;
  /// Elliptic and compact defects, or non-elliptic and growing near-kernel.
  bool consistent = false;
};

ProbeReport fredholm_ellipticity_probe(const Symbol& sigma, const std::vector<int>& windows,
                                       const IndexSettings& settings = {});

/// Grid used for a window of half-width N: 2N+3 points per axis, or the
/// symbol's own grid when it is finer.
TorusGrid grid_for(const Symbol& sigma, const LatticeWindow& window);

}  // namespace lpdo

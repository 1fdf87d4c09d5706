#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpdo/lattice.hpp"
#include "lpdo/symbol.hpp"

namespace lpdo {

/// (J_s f)(k) = (1+|k|^2)^{s/2} f(k).
LatticeSequence bessel_apply(double s, const LatticeSequence& f);

/// ||u||_{s,2} = ||<k>^s u||_2, so that H^{t,2} embeds in H^{s,2} for s <= t.
double sobolev_norm(double s, const LatticeSequence& u);

struct EmbeddingReport {
  double s = 0.0;
  double t = 0.0;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  bool holds = true;
};

/// ||u||_{s,2} / ||u||_{t,2} per sample; requires s <= t.
EmbeddingReport embedding_check(double s, double t, const std::vector<LatticeSequence>& samples);

struct SpectrumReport {
  std::string description;
  std::vector<int> windows;
  std::vector<std::vector<double>> singular_values;
  double fit_exponent = 0.0;
  double threshold = 0.1;
  /// Number of singular values below threshold, per window.
  std::vector<int> small_counts;
};

/// Singular values of the inclusion H^{t,2} -> H^{s,2}, s < t: the diagonal
/// multiplier <k>^{s-t}. The fitted exponent should approach (s-t)/n.
SpectrumReport inclusion_spectrum(double s, double t, int n, const std::vector<int>& windows);

/// Singular values of the multiplier <k>^{-eps} on l^2, eps > 0.
SpectrumReport smoothing_spectrum(double eps, int n, const std::vector<int>& windows,
                                  double threshold = 0.1);

/// Least-squares slope of log sigma_j against log j over j in [max(2, J/16), J/2].
double fit_decay_exponent(const std::vector<double>& sorted_values);

/// Complex Gaussian g(k) <k>^{-p}, p uniform in [0,2], supported on
/// |k_j| <= N - margin. Deterministic in seed.
std::vector<LatticeSequence> random_sequences(const LatticeWindow& window, int count,
                                              std::uint64_t seed, int margin);

struct BoundednessReport {
  double s = 0.0;
  double m = 0.0;
  std::vector<double> ratios;
  double max_ratio = 0.0;
};

/// ||T_sigma u||_{s-m,2} / ||u||_{s,2} over random interior-supported u.
BoundednessReport sobolev_boundedness(const Symbol& sigma, double m, double s,
                                      const LatticeWindow& window, const TorusGrid& grid,
                                      int samples, std::uint64_t seed);

}  // namespace lpdo

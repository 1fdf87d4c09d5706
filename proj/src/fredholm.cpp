#include "lpdo/fredholm.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "lpdo/quantize.hpp"

namespace lpdo {

namespace {

std::vector<double> singular_values(const Matrix& A) {
  Eigen::BDCSVD<Matrix> svd(A);
  const RealVector& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

struct Nullity {
  int count = 0;
  double gap = 0.0;
};

Nullity nullity(const std::vector<double>& values, double rank_tol) {
  Nullity out;
  if (values.empty() || values.front() == 0.0) return out;
  const double threshold = rank_tol * values.front();
  double largest_zero = 0.0;
  double smallest_nonzero = values.front();
  for (double v : values) {
    if (v < threshold) {
      ++out.count;
      largest_zero = std::max(largest_zero, v);
    } else {
      smallest_nonzero = std::min(smallest_nonzero, v);
    }
  }
  out.gap = smallest_nonzero / (out.count > 0 ? std::max(largest_zero, 1e-300) : threshold);
  return out;
}

void check_window(const Symbol& sigma, int N) {
  if (sigma.kind() != Symbol::Kind::Grid) return;
  const GridData& g = sigma.grid_data();
  if (N > g.window.half_width() - g.interior_margin) {
    throw DomainError("window N=" + std::to_string(N) +
                      " reaches the truncation margin of the grid symbol");
  }
}

}  // namespace

TorusGrid grid_for(const Symbol& sigma, const LatticeWindow& window) {
  int M = 2 * window.half_width() + 3;
  if (sigma.kind() == Symbol::Kind::Grid) M = std::max(M, sigma.grid_data().grid.points_per_axis());
  return TorusGrid(window.dim(), M);
}

SectionSpectrum section_spectrum(const Symbol& sigma, int N, const IndexSettings& settings) {
  const int n = sigma.dim();
  const LatticeWindow inner(n, N);
  const LatticeWindow outer(n, N + settings.row_margin);
  check_window(sigma, outer.half_width());
  const Matrix A = assemble_matrix(sigma, outer, grid_for(sigma, outer)).entries;

  std::vector<Index> cols;
  for (Index i = 0; i < inner.size(); ++i) cols.push_back(outer.index_of(inner.point(i)));
  Matrix tall(outer.size(), inner.size());
  Matrix wide_h(outer.size(), inner.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    tall.col(static_cast<Index>(c)) = A.col(cols[c]);
    wide_h.col(static_cast<Index>(c)) = A.row(cols[c]).adjoint();
  }
  SectionSpectrum out;
  out.ker_values = singular_values(tall);
  out.coker_values = singular_values(wide_h);
  const Nullity ker = nullity(out.ker_values, settings.rank_tol);
  const Nullity coker = nullity(out.coker_values, settings.rank_tol);
  out.dim_ker = ker.count;
  out.dim_coker = coker.count;
  out.gap = std::min(ker.gap, coker.gap);
  return out;
}

IndexReport svd_index(const Symbol& sigma, const std::vector<int>& windows,
                      const IndexSettings& settings) {
  IndexReport report;
  for (int N : windows) {
    const SectionSpectrum s = section_spectrum(sigma, N, settings);
    report.windows.push_back(N);
    report.dim_ker.push_back(s.dim_ker);
    report.dim_coker.push_back(s.dim_coker);
    report.gap_evidence.push_back(s.gap);
  }
  const std::size_t w = report.windows.size();
  if (w >= 2) {
    const int last = report.dim_ker[w - 1] - report.dim_coker[w - 1];
    const int prev = report.dim_ker[w - 2] - report.dim_coker[w - 2];
    const bool gaps = report.gap_evidence[w - 1] >= settings.required_gap &&
                      report.gap_evidence[w - 2] >= settings.required_gap;
    if (last == prev && gaps) report.svd_index = last;
  }
  return report;
}

TraceIndex trace_index(const Symbol& sigma, const LatticeWindow& window, const TorusGrid& grid,
                       const IndexSettings& settings) {
  ParametrixOptions options;
  options.track_orders = false;
  const Parametrix P = parametrix(sigma, 0.0, settings.steps, window, grid, options);
  const Matrix difference = P.R - P.S;  // (I - T_tau T_sigma) - (I - T_sigma T_tau)
  const int margin = default_margin(window);

  TraceIndex out;
  Point k(static_cast<std::size_t>(window.dim()));
  for (Index i = 0; i < window.size(); ++i) {
    window.point_into(i, k);
    if (window.is_interior(k, margin)) out.raw += difference(i, i).real();
  }

  const int n = window.dim();
  const int p = n + 1;
  const Symbol rho = Symbol::from_matrix(window, grid, difference, std::nullopt, margin);
  out.decay = residual_decay_report(rho, p);
  const double radius = window.half_width() - margin;
  const double last = out.decay.profiles[static_cast<std::size_t>(p)].shell_sups.back();
  const double C = std::max(last, out.decay.floor * std::pow(1.0 + radius, p));
  // Lattice points with max-norm r: (2r+1)^n - (2r-1)^n, each bounded by C (1+r)^{-p}.
  const int cutoff = static_cast<int>(radius) + 100000;
  double tail = 0.0;
  for (int r = static_cast<int>(radius) + 1; r <= cutoff; ++r) {
    const double shell = std::pow(2.0 * r + 1.0, n) - std::pow(2.0 * r - 1.0, n);
    tail += shell * std::pow(1.0 + r, -p);
  }
  tail += n * std::pow(2.0, n) / (1.0 + cutoff);
  out.tail_bound = C * tail;
  out.tail_certified = out.decay.schwartz_like && out.tail_bound < settings.trace_tail_limit;
  const double nearest = std::round(out.raw);
  if (out.tail_certified && std::abs(out.raw - nearest) < 0.25) out.index = static_cast<int>(nearest);
  return out;
}

IndexReport compute_index(const Symbol& sigma, const std::vector<int>& windows,
                          const IndexSettings& settings) {
  if (windows.empty()) throw DomainError("index computation needs at least one window");
  IndexReport report = svd_index(sigma, windows, settings);
  const LatticeWindow largest(sigma.dim(), *std::max_element(windows.begin(), windows.end()));
  const TorusGrid grid = grid_for(sigma, largest);
  report.elliptic = check_ellipticity(sigma, 0.0, largest, grid).elliptic;
  if (!report.elliptic) {
    report.svd_index.reset();
    return report;
  }
  const TraceIndex t = trace_index(sigma, largest, grid, settings);
  report.trace_index_raw = t.raw;
  report.trace_index = t.index;
  report.tail_certified = t.tail_certified;
  report.tail_bound = t.tail_bound;
  report.agreement = report.svd_index && report.trace_index && *report.svd_index == *report.trace_index;
  return report;
}

AtkinsonReport atkinson_check(const Symbol& sigma, const std::vector<int>& windows,
                              const IndexSettings& settings) {
  AtkinsonReport report;
  ParametrixOptions options;
  options.track_orders = false;
  for (int N : windows) {
    check_window(sigma, N);
    const LatticeWindow window(sigma.dim(), N);
    const Parametrix P = parametrix(sigma, 0.0, settings.steps, window, grid_for(sigma, window), options);
    const auto k1 = singular_values(P.S);
    const auto k2 = singular_values(P.R);
    auto above = [&](const std::vector<double>& v) {
      return static_cast<int>(std::count_if(v.begin(), v.end(),
                                            [&](double s) { return s > settings.atkinson_threshold; }));
    };
    report.windows.push_back(N);
    report.count_k1.push_back(above(k1));
    report.count_k2.push_back(above(k2));
    report.norm_k1.push_back(k1.empty() ? 0.0 : k1.front());
    report.norm_k2.push_back(k2.empty() ? 0.0 : k2.front());
  }
  report.bounded = true;
  for (std::size_t i = 1; i < report.windows.size(); ++i) {
    if (report.count_k1[i] > report.count_k1[i - 1] || report.count_k2[i] > report.count_k2[i - 1]) {
      report.bounded = false;
    }
  }
  return report;
}

ProbeReport fredholm_ellipticity_probe(const Symbol& sigma, const std::vector<int>& windows,
                                       const IndexSettings& settings) {
  if (windows.empty()) throw DomainError("probe needs at least one window");
  ProbeReport report;
  report.windows = windows;
  const LatticeWindow largest(sigma.dim(), *std::max_element(windows.begin(), windows.end()));
  report.ellipticity = check_ellipticity(sigma, 0.0, largest, grid_for(sigma, largest));
  report.elliptic = report.ellipticity.elliptic;
  if (report.elliptic) {
    report.atkinson = atkinson_check(sigma, windows, settings);
    report.consistent = report.atkinson->bounded;
    return report;
  }
  for (int N : windows) {
    check_window(sigma, N);
    const LatticeWindow window(sigma.dim(), N);
    const auto values = singular_values(assemble_matrix(sigma, window, grid_for(sigma, window)).entries);
    report.near_kernel_counts.push_back(
        static_cast<int>(std::count_if(values.begin(), values.end(), [](double s) { return s < 0.1; })));
  }
  report.consistent = true;
  for (std::size_t i = 1; i < report.near_kernel_counts.size(); ++i) {
    if (report.near_kernel_counts[i] <= report.near_kernel_counts[i - 1]) report.consistent = false;
  }
  return report;
}

}  // namespace lpdo

#include "lpdo/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "lpdo/errors.hpp"
#include "lpdo/quantize.hpp"

namespace lpdo {

namespace {

RealVector bracket_powers(const LatticeWindow& window, double s) {
  RealVector w(window.size());
  Point k(static_cast<std::size_t>(window.dim()));
  for (Index i = 0; i < window.size(); ++i) {
    window.point_into(i, k);
    double r2 = 1.0;
    for (int c : k) r2 += static_cast<double>(c) * c;
    w(i) = std::pow(r2, s / 2.0);
  }
  return w;
}

SpectrumReport multiplier_spectrum(double exponent, int n, const std::vector<int>& windows,
                                   double threshold, std::string description) {
  SpectrumReport report;
  report.description = std::move(description);
  report.threshold = threshold;
  for (int N : windows) {
    const LatticeWindow w(n, N);
    const RealVector values = bracket_powers(w, exponent);
    std::vector<double> sorted(values.data(), values.data() + values.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    report.windows.push_back(N);
    report.small_counts.push_back(
        static_cast<int>(std::count_if(sorted.begin(), sorted.end(), [&](double v) { return v < threshold; })));
    report.singular_values.push_back(std::move(sorted));
  }
  report.fit_exponent =
      report.singular_values.empty() ? 0.0 : fit_decay_exponent(report.singular_values.back());
  return report;
}

}  // namespace

LatticeSequence bessel_apply(double s, const LatticeSequence& f) {
  return LatticeSequence(f.window, f.values.cwiseProduct(bracket_powers(f.window, s).cast<Complex>()));
}

double sobolev_norm(double s, const LatticeSequence& u) { return bessel_apply(s, u).norm(); }

EmbeddingReport embedding_check(double s, double t, const std::vector<LatticeSequence>& samples) {
  if (s > t) throw DomainError("embedding H^t into H^s needs s <= t");
  EmbeddingReport report;
  report.s = s;
  report.t = t;
  for (const auto& u : samples) {
    const double top = sobolev_norm(t, u);
    if (top == 0.0) continue;
    const double r = sobolev_norm(s, u) / top;
    report.ratios.push_back(r);
    report.max_ratio = std::max(report.max_ratio, r);
  }
  report.holds = report.max_ratio <= 1.0 + 1e-12;
  return report;
}

double fit_decay_exponent(const std::vector<double>& values) {
  const int J = static_cast<int>(values.size());
  const int lo = std::max(2, J / 16);
  const int hi = J / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int j = lo; j <= hi; ++j) {
    const double v = values[static_cast<std::size_t>(j - 1)];
    if (v <= 0.0) continue;
    const double x = std::log(static_cast<double>(j));
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return 0.0;
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

SpectrumReport inclusion_spectrum(double s, double t, int n, const std::vector<int>& windows) {
  if (s >= t) throw DomainError("inclusion spectrum needs s < t");
  return multiplier_spectrum(s - t, n, windows, 0.1,
                             "inclusion H^{" + std::to_string(t) + ",2} -> H^{" + std::to_string(s) + ",2}");
}

SpectrumReport smoothing_spectrum(double eps, int n, const std::vector<int>& windows,
                                  double threshold) {
  if (eps <= 0.0) throw DomainError("smoothing order must be positive");
  return multiplier_spectrum(-eps, n, windows, threshold, "J_{-" + std::to_string(eps) + "} on l2");
}

std::vector<LatticeSequence> random_sequences(const LatticeWindow& window, int count,
                                              std::uint64_t seed, int margin) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> power(0.0, 2.0);
  std::vector<LatticeSequence> out;
  Point k(static_cast<std::size_t>(window.dim()));
  for (int c = 0; c < count; ++c) {
    const double p = power(rng);
    LatticeSequence u = LatticeSequence::zeros(window);
    for (Index i = 0; i < window.size(); ++i) {
      window.point_into(i, k);
      const double re = gauss(rng);
      const double im = gauss(rng);
      if (!window.is_interior(k, margin)) continue;
      double r2 = 1.0;
      for (int v : k) r2 += static_cast<double>(v) * v;
      u.values(i) = Complex(re, im) * std::pow(r2, -p / 2.0);
    }
    out.push_back(std::move(u));
  }
  return out;
}

BoundednessReport sobolev_boundedness(const Symbol& sigma, double m, double s,
                                      const LatticeWindow& window, const TorusGrid& grid,
                                      int samples, std::uint64_t seed) {
  BoundednessReport report;
  report.s = s;
  report.m = m;
  const Matrix A = assemble_matrix(sigma, window, grid).entries;
  for (const auto& u : random_sequences(window, samples, seed, default_margin(window))) {
    const LatticeSequence Tu(window, A * u.values);
    const double r = sobolev_norm(s - m, Tu) / sobolev_norm(s, u);
    report.ratios.push_back(r);
    report.max_ratio = std::max(report.max_ratio, r);
  }
  return report;
}

}  // namespace lpdo

#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "lpdo/lpdo.hpp"

namespace testing {

inline lpdo::LatticeSequence random_sequence(const lpdo::LatticeWindow& w, std::mt19937_64& rng,
                                             int margin = 0) {
  std::normal_distribution<double> g;
  lpdo::LatticeSequence f = lpdo::LatticeSequence::zeros(w);
  for (lpdo::Index i = 0; i < w.size(); ++i) {
    if (w.is_interior(w.point(i), margin)) f.values(i) = lpdo::Complex(g(rng), g(rng));
  }
  return f;
}

// sum_k e^{-2 pi i k.x} f(k), one term at a time.
inline lpdo::Complex direct_ft(const lpdo::LatticeSequence& f, const lpdo::TorusPoint& x) {
  lpdo::Complex sum = 0.0;
  for (lpdo::Index i = 0; i < f.window.size(); ++i) {
    const auto k = f.window.point(i);
    double dot = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) dot += k[j] * x[j];
    sum += std::polar(1.0, -2.0 * std::numbers::pi * dot) * f.values(i);
  }
  return sum;
}

inline double rel(const lpdo::Vector& a, const lpdo::Vector& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

}  // namespace testing

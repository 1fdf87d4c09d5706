// Acceptance criteria 1-11: one PASS/FAIL line each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "lpdo/lpdo.hpp"

using namespace lpdo;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Line {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAILED]");
  }
  void at_most(const std::string& what, double observed, double tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.3g<=%.3g", what.c_str(), observed, tol);
    require(observed <= tol, buf);
  }
  void at_least(const std::string& what, double observed, double tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.3g>=%.3g", what.c_str(), observed, tol);
    require(observed >= tol, buf);
  }
};

LatticeSequence random_sequence(const LatticeWindow& w, std::mt19937_64& rng, int margin = 0) {
  std::normal_distribution<double> g;
  LatticeSequence f = LatticeSequence::zeros(w);
  for (Index i = 0; i < w.size(); ++i) {
    const double re = g(rng);
    const double im = g(rng);
    if (w.is_interior(w.point(i), margin)) f.values(i) = Complex(re, im);
  }
  return f;
}

Point shifted(Point k, const MultiIndex& b, int sign = 1) {
  for (std::size_t j = 0; j < k.size(); ++j) k[j] += sign * b[j];
  return k;
}

double choose(const MultiIndex& a, const MultiIndex& b) {
  double r = 1.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (int i = 1; i <= b[j]; ++i) r = r * (a[j] - b[j] + i) / i;
  }
  return r;
}

std::vector<MultiIndex> indices_upto(int n, int top) {
  std::vector<MultiIndex> out;
  for (int a = 0; a <= top; ++a) {
    if (n == 1) {
      out.push_back({a});
    } else {
      for (int b = 0; a + b <= top; ++b) out.push_back({a, b});
    }
  }
  return out;
}

std::vector<MultiIndex> indices_below(const MultiIndex& alpha) {
  std::vector<MultiIndex> out;
  for (const MultiIndex& b : indices_upto(static_cast<int>(alpha.size()), 6)) {
    bool ok = true;
    for (std::size_t j = 0; j < alpha.size(); ++j) ok = ok && b[j] <= alpha[j];
    if (ok) out.push_back(b);
  }
  return out;
}

// Iterated first differences, straight from the definition.
Complex forward_oracle(const LatticeSequence& f, const Point& k, const MultiIndex& alpha) {
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] == 0) continue;
    MultiIndex lower = alpha;
    --lower[j];
    Point next = k;
    ++next[j];
    return forward_oracle(f, next, lower) - forward_oracle(f, k, lower);
  }
  return f.at(k);
}

Complex backward_oracle(const LatticeSequence& f, const Point& k, const MultiIndex& alpha) {
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] == 0) continue;
    MultiIndex lower = alpha;
    --lower[j];
    Point prev = k;
    --prev[j];
    return backward_oracle(f, k, lower) - backward_oracle(f, prev, lower);
  }
  return f.at(k);
}

Symbol load(const std::string& name) {
  std::ifstream in(std::string(LPDO_SYMBOLS) + "/" + name);
  return symbol_from_json(Json::parse(in));
}

int shell(const std::string& cmd, std::string& out) {
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = ::pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Line ac1() {
  Line line;
  std::mt19937_64 rng(101);
  double plancherel = 0.0;
  double inversion = 0.0;
  double transform = 0.0;
  int count = 0;
  for (int n : {1, 2}) {
    for (int N : {8, 16}) {
      const LatticeWindow w(n, N);
      const TorusGrid g(n, 2 * N + 3);
      for (int trial = 0; trial < 25; ++trial, ++count) {
        const LatticeSequence f = random_sequence(w, rng);
        const TorusFunction F = forward_dft(f, g);
        const double energy = f.values.squaredNorm();
        const double quad = F.values.squaredNorm() / static_cast<double>(g.size());
        plancherel = std::max(plancherel, std::abs(quad - energy) / energy);
        inversion = std::max(inversion, (inverse_dft(F, w).values - f.values).norm() / f.values.norm());
        if (trial == 0) {
          for (Index j = 0; j < g.size(); j += 7) {
            const TorusPoint x = g.node(j);
            Complex direct = 0.0;
            for (Index i = 0; i < w.size(); ++i) {
              const Point k = w.point(i);
              double dot = 0.0;
              for (int a = 0; a < n; ++a) dot += k[a] * x[a];
              direct += std::polar(1.0, -kTwoPi * dot) * f.values(i);
            }
            transform = std::max(transform, std::abs(direct - F.values(j)) / f.values.norm());
          }
        }
      }
    }
  }
  line.require(count == 100, "sequences=" + std::to_string(count));
  line.at_most("plancherel", plancherel, 1e-10);
  line.at_most("inversion", inversion, 1e-12);
  line.at_most("direct_dft", transform, 1e-12);
  return line;
}

Line ac2() {
  Line line;
  std::mt19937_64 rng(202);
  double closed = 0.0;
  double leibniz = 0.0;
  double parts = 0.0;
  int pairs = 0;
  for (int n : {1, 2}) {
    const LatticeWindow w(n, n == 1 ? 12 : 6);
    const int margin = 3;
    for (int trial = 0; trial < 25; ++trial, ++pairs) {
      const LatticeSequence f = random_sequence(w, rng);
      const LatticeSequence g = random_sequence(w, rng);
      const LatticeSequence fc = random_sequence(w, rng, margin);
      const LatticeSequence gc = random_sequence(w, rng, margin);
      const LatticeSequence fg(w, f.values.cwiseProduct(g.values));
      for (const MultiIndex& alpha : indices_upto(n, 3)) {
        const LatticeSequence lib_f = forward_difference(f, alpha).sequence;
        const LatticeSequence lib_fg = forward_difference(fg, alpha).sequence;
        for (Index i = 0; i < w.size(); ++i) {
          const Point k = w.point(i);
          if (!w.is_interior(k, margin)) continue;
          // (i) closed form
          Complex sum = 0.0;
          for (const MultiIndex& b : indices_below(alpha)) {
            const double sign = (order(alpha) - order(b)) % 2 ? -1.0 : 1.0;
            sum += sign * choose(alpha, b) * f.at(shifted(k, b));
          }
          closed = std::max(closed, std::abs(lib_f.values(i) - sum) / std::max(1.0, std::abs(sum)));
          closed = std::max(closed, std::abs(lib_f.values(i) - forward_oracle(f, k, alpha)) / std::max(1.0, std::abs(sum)));
          // (ii) product rule, backward factor evaluated at k + alpha
          Complex rhs = 0.0;
          for (const MultiIndex& b : indices_below(alpha)) {
            MultiIndex rest = alpha;
            for (std::size_t j = 0; j < rest.size(); ++j) rest[j] -= b[j];
            rhs += choose(alpha, b) * forward_oracle(f, k, b) * backward_oracle(g, shifted(k, alpha), rest);
          }
          leibniz = std::max(leibniz, std::abs(lib_fg.values(i) - rhs) / std::max(1.0, std::abs(rhs)));
        }
        // (iii) summation by parts for interior-supported pairs
        Complex lhs = 0.0;
        Complex rhs = 0.0;
        for (Index i = 0; i < w.size(); ++i) {
          const Point k = w.point(i);
          lhs += fc.values(i) * forward_oracle(gc, k, alpha);
          rhs += backward_oracle(fc, k, alpha) * gc.values(i);
        }
        if (order(alpha) % 2) rhs = -rhs;
        const Complex lib = fc.values.cwiseProduct(forward_difference(gc, alpha).sequence.values).sum();
        parts = std::max({parts, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)),
                          std::abs(lib - lhs) / std::max(1.0, std::abs(lhs))});
      }
    }
  }
  line.require(pairs == 50, "pairs=" + std::to_string(pairs));
  line.at_most("formula_i", closed, 1e-12);
  line.at_most("formula_ii", leibniz, 1e-12);
  line.at_most("formula_iii", parts, 1e-12);
  return line;
}

Line ac3() {
  Line line;
  const LatticeWindow w(1, 16);
  const TorusGrid g = default_grid(w);
  const Matrix I = assemble_matrix(parse_symbol("1", 1), w, g).entries;
  line.at_most("unit_identity", (I - Matrix::Identity(w.size(), w.size())).cwiseAbs().maxCoeff(), 1e-12);
  double diag = 0.0;
  for (const char* text : {"(1+k1^2)^(3/4)", "k1^2 - 2*i*k1 + 1", "step(k1) + 3*abs(k1)"}) {
    const Symbol s = parse_symbol(text, 1);
    const Matrix A = assemble_matrix(s, w, g).entries;
    const double scale = A.cwiseAbs().maxCoeff();
    for (Index r = 0; r < w.size(); ++r) {
      for (Index c = 0; c < w.size(); ++c) {
        const Complex want = r == c ? s(w.point(r), TorusPoint{0.0}) : Complex(0.0);
        diag = std::max(diag, std::abs(A(r, c) - want) / scale);
      }
    }
  }
  line.at_most("x_independent_diagonal", diag, 1e-12);
  std::mt19937_64 rng(303);
  const LatticeWindow w2(2, 6);
  double group = 0.0;
  double isometry = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const LatticeSequence u = random_sequence(w2, rng);
    for (double s : {-2.0, -0.5, 1.0, 3.0}) {
      for (double t : {-1.5, 0.5, 2.0}) {
        const Vector lhs = bessel_apply(s, bessel_apply(t, u)).values;
        const Vector rhs = bessel_apply(s + t, u).values;
        group = std::max(group, (lhs - rhs).norm() / rhs.norm());
        const double a = sobolev_norm(s, bessel_apply(t, u));
        const double b = sobolev_norm(s + t, u);
        isometry = std::max(isometry, std::abs(a - b) / b);
      }
    }
  }
  line.at_most("J_sJ_t", group, 1e-12);
  line.at_most("isometry", isometry, 1e-12);
  return line;
}

Line ac4() {
  Line line;
  const LatticeWindow w(1, 16);
  const TorusGrid g = default_grid(w);
  const Symbol rho = parse_symbol("1 + cos(twopi*x1)*(1+k1^2)^(-1/2)", 1, 0.0);
  const Symbol sigma = parse_symbol("2+exp(i*twopi*x1)/(1+k1^2)", 1, 0.0);
  const Symbol tau = jump_symbol(1, 1);
  const Symbol st = compose(sigma, tau, w, g);
  const Matrix C = assemble_matrix(st, w, g).entries;
  double columns = 0.0;
  for (Index c = 0; c < w.size(); ++c) {
    const LatticeSequence col = apply(sigma, apply(tau, LatticeSequence::delta(w, w.point(c)), g), g);
    for (Index r = 0; r < w.size(); ++r) {
      if (st.is_interior(w.point(r))) columns = std::max(columns, std::abs(C(r, c) - col.values(r)));
    }
  }
  line.at_most("matrix_product_columns", columns, 1e-10);
  const Symbol bb = compose(bessel_symbol(1, 1.5), bessel_symbol(1, 0.5), w, g);
  double bessel = 0.0;
  for (int k = -12; k <= 12; ++k) {
    for (double x : {0.0, 0.37}) {
      bessel = std::max(bessel, std::abs(bb(Point{k}, TorusPoint{x}) - (1.0 + k * k)) / (1.0 + k * k));
    }
  }
  line.at_most("bessel_composition", bessel, 1e-12);
  const Matrix L = compose(compose(rho, sigma, w, g), tau, w, g).sample(w, g);
  const Matrix R = compose(rho, compose(sigma, tau, w, g), w, g).sample(w, g);
  double assoc = 0.0;
  for (Index r = 0; r < w.size(); ++r) {
    if (w.is_interior(w.point(r), default_margin(w))) assoc = std::max(assoc, (L.row(r) - R.row(r)).cwiseAbs().maxCoeff());
  }
  line.at_most("associativity", assoc, 1e-8);
  return line;
}

Line ac5() {
  Line line;
  const LatticeWindow w(1, 32);
  const TorusGrid g = default_grid(w);
  double exact = 0.0;
  for (const auto& [s, m] : std::vector<std::pair<Symbol, double>>{
           {bessel_symbol(1, 2.0), 2.0}, {bessel_symbol(1, -1.0), -1.0}, {parse_symbol("2", 1), 0.0},
           {parse_symbol("3 + cos(k1)", 1), 0.0}}) {
    ParametrixOptions o;
    o.track_orders = false;
    const Parametrix P = parametrix(s, m, 1, w, g, o);
    exact = std::max({exact, P.R.cwiseAbs().maxCoeff(), P.S.cwiseAbs().maxCoeff()});
  }
  line.at_most("multiplier_residual", exact, 1e-12);
  const Parametrix P = parametrix(parse_symbol("2+exp(i*twopi*x1)/(1+k1^2)", 1), 0.0, 3, w, g);
  double drop = 1e300;
  for (std::size_t j = 1; j < P.residual_orders.size(); ++j) drop = std::min(drop, P.residual_orders[j - 1] - P.residual_orders[j]);
  line.at_least("order_drop", drop, 0.8);
  bool decreasing = true;
  for (int J = 1; J <= 3; ++J) {
    const Parametrix Q = parametrix(parse_symbol("2+exp(i*twopi*x1)/(1+k1^2)", 1), 0.0, J, w, g);
    decreasing = decreasing && residual_decay_report(Q.left_residual, 3).schwartz_like &&
                 residual_decay_report(Q.right_residual, 3).schwartz_like;
  }
  line.require(decreasing, "decay_p<=3_shellwise");
  return line;
}

Line ac6() {
  Line line;
  const LatticeWindow w(1, 32);
  const TorusGrid g = default_grid(w);
  const ADNReport b = adn_verify(bessel_symbol(1, 2.0), 2.0, w, g, 100, 42);
  double lo = 1e300;
  double hi = 0.0;
  for (double r : b.ratios) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  line.require(lo > 1.0 && hi <= 2.0, "bessel_ratios_in_(1,2]: min=" + std::to_string(lo) + " max=" + std::to_string(hi));
  const ADNReport p = adn_verify(multiplier_symbol(1, 2.0, 2.0, 1.0, 2.0, 1.0), 2.0, w, g, 100, 42);
  line.require(p.C1 > 0.0, "perturbed_C1=" + std::to_string(p.C1));
  line.at_most("C1_change", std::abs(p.C1_doubled / p.C1 - 1.0), 0.25);
  line.at_most("C2_change", std::abs(p.C2_doubled / p.C2 - 1.0), 0.25);
  return line;
}

Line ac7() {
  Line line;
  double norm_growth = 0.0;
  for (const Symbol& s : {parse_symbol("2+exp(i*twopi*x1)/(1+k1^2)", 1), jump_symbol(1, 1), jump_symbol(1, -1),
                          parse_symbol("cos(twopi*x1) + sin(twopi*x1)*(1+k1^2)^(-1/2)", 1)}) {
    double prev = 0.0;
    for (int N : {8, 16, 32}) {
      const LatticeWindow w(1, N);
      const double v = operator_norm(s, w, default_grid(w));
      if (prev > 0.0) norm_growth = std::max(norm_growth, v / prev);
      prev = v;
    }
  }
  line.at_most("l2_norm_growth", norm_growth, 1.5);
  double ratio_growth = 0.0;
  for (const auto& [s, m] : std::vector<std::pair<Symbol, double>>{
           {bessel_symbol(1, 2.0), 2.0}, {parse_symbol("(1+k1^2)^(1/2)*(2+cos(twopi*x1))", 1), 1.0},
           {parse_symbol("2+exp(i*twopi*x1)/(1+k1^2)", 1), 0.0}}) {
    for (double sob : {-1.0, 1.0, 2.0}) {
      double prev = 0.0;
      for (int N : {8, 16, 32}) {
        const LatticeWindow w(1, N);
        const double v = sobolev_boundedness(s, m, sob, w, default_grid(w), 30, 42).max_ratio;
        if (prev > 0.0) ratio_growth = std::max(ratio_growth, v / prev);
        prev = v;
      }
    }
  }
  line.at_most("sobolev_ratio_growth", ratio_growth, 1.5);
  return line;
}

Line ac8() {
  Line line;
  for (const auto& [s, t] : std::vector<std::pair<double, double>>{{0.0, 1.0}, {0.0, 2.0}, {-1.0, 0.5}}) {
    const double want = s - t;
    const double got = inclusion_spectrum(s, t, 1, {256}).fit_exponent;
    char name[64];
    std::snprintf(name, sizeof name, "exponent_rel_err(s=%g,t=%g)", s, t);
    line.at_most(name, std::abs(got - want) / std::abs(want), 0.2);
  }
  const SpectrumReport r = smoothing_spectrum(1.0, 1, {16, 32, 64});
  const bool increasing = r.small_counts[0] < r.small_counts[1] && r.small_counts[1] < r.small_counts[2];
  line.require(increasing, "small_counts=" + std::to_string(r.small_counts[0]) + "," + std::to_string(r.small_counts[1]) +
                               "," + std::to_string(r.small_counts[2]));
  return line;
}

Line ac9() {
  Line line;
  for (const auto& [file, want] : std::vector<std::pair<std::string, int>>{
           {"constant.json", 0}, {"jump_plus.json", 1}, {"jump_minus.json", -1}}) {
    const Symbol s = load(file);
    const IndexReport r = compute_index(s, {16, 32, 64});
    const double gap = *std::min_element(r.gap_evidence.begin(), r.gap_evidence.end());
    line.require(r.svd_index == want, file + " svd=" + (r.svd_index ? std::to_string(*r.svd_index) : "null"));
    line.at_least(file + " gap", gap, 100.0);
    for (int N : {32, 64}) {
      const LatticeWindow w(1, N);
      const TraceIndex t = trace_index(s, w, grid_for(s, w));
      line.at_most(file + " |trace-" + std::to_string(want) + "|@N" + std::to_string(N), std::abs(t.raw - want), 0.25);
    }
  }
  return line;
}

Line ac10() {
  Line line;
  for (const char* file : {"constant.json", "jump_plus.json", "jump_minus.json", "perturbed.json"}) {
    const ProbeReport p = fredholm_ellipticity_probe(load(file), {16, 32, 64});
    line.require(p.elliptic && p.atkinson && p.atkinson->bounded, std::string(file) + " atkinson_bounded");
  }
  const ProbeReport d = fredholm_ellipticity_probe(load("decaying.json"), {16, 32, 64});
  const auto& c = d.near_kernel_counts;
  line.require(!d.elliptic && c.size() == 3 && c[0] < c[1] && c[1] < c[2],
               "decaying near_kernel=" + (c.size() == 3 ? std::to_string(c[0]) + "," + std::to_string(c[1]) + "," +
                                                              std::to_string(c[2])
                                                        : std::string("?")));
  return line;
}

Line ac11() {
  Line line;
  const std::string cmd = std::string(LPDO_CLI) + " verify --no-timestamp --seed 42 2>/dev/null";
  std::string a;
  std::string b;
  const int code = shell(cmd, a);
  shell(cmd, b);
  line.require(code == 0, "verify_exit=" + std::to_string(code));
  line.require(!a.empty() && a == b, "byte_identical");
  std::string other;
  shell(std::string(LPDO_CLI) + " verify --no-timestamp --seed 43 2>/dev/null", other);
  line.require(other != a, "seed_changes_report");
  return line;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Line()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "exact Fourier identities", 5.0, ac1},
      {2, "difference calculus", 5.0, ac2},
      {3, "multiplier exactness", 0.0, ac3},
      {4, "composition oracle", 0.0, ac4},
      {5, "parametrix", 60.0, ac5},
      {6, "ADN constants", 0.0, ac6},
      {7, "boundedness surrogates", 0.0, ac7},
      {8, "compactness surrogates", 0.0, ac8},
      {9, "index agreement", 120.0, ac9},
      {10, "ellipticity and Fredholm probe", 0.0, ac10},
      {11, "CLI determinism", 0.0, ac11},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Line line;
    try {
      line = c.run();
    } catch (const std::exception& e) {
      line.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "runtime=%.2fs<%.0fs", seconds, c.limit_seconds);
      line.require(seconds < c.limit_seconds, buf);
    }
    failures += !line.pass;
    std::printf("AC%-2d %s  %s (%.2fs): %s\n", c.id, line.pass ? "PASS" : "FAIL", c.name, seconds, line.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

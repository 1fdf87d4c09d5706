#include "lpdo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "lpdo/lpdo.hpp"

namespace lpdo {

namespace {

class Suite {
 public:
  explicit Suite(std::string name) : name_(std::move(name)) {}

  // observed <= tolerance
  void at_most(const std::string& property, double observed, double tolerance) {
    add(property, observed, tolerance, "<=", observed <= tolerance);
  }
  void at_least(const std::string& property, double observed, double tolerance) {
    add(property, observed, tolerance, ">=", observed >= tolerance);
  }
  void holds(const std::string& property, bool ok, double observed = 0.0) {
    add(property, observed, nullptr, "holds", ok);
  }

  Json report() const { return {{"suite", name_}, {"pass", pass_}, {"properties", properties_}}; }

 private:
  void add(const std::string& property, double observed, Json tolerance, const char* relation, bool ok) {
    properties_.push_back({{"name", property},
                           {"pass", ok},
                           {"observed", std::isfinite(observed) ? Json(observed) : Json(nullptr)},
                           {"relation", relation},
                           {"tolerance", std::move(tolerance)}});
    pass_ = pass_ && ok;
  }

  std::string name_;
  Json properties_ = Json::array();
  bool pass_ = true;
};

LatticeSequence gaussian(const LatticeWindow& w, std::mt19937_64& rng, int margin = 0) {
  std::normal_distribution<double> g;
  LatticeSequence f = LatticeSequence::zeros(w);
  Point k(static_cast<std::size_t>(w.dim()));
  for (Index i = 0; i < w.size(); ++i) {
    w.point_into(i, k);
    const double re = g(rng);
    const double im = g(rng);
    if (w.is_interior(k, margin)) f.values(i) = Complex(re, im);
  }
  return f;
}

double relative(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

double binom(int a, int b) {
  double r = 1.0;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

std::vector<MultiIndex> up_to(int n, int max_order) {
  std::vector<MultiIndex> out;
  MultiIndex a(static_cast<std::size_t>(n), 0);
  while (true) {
    if (order(a) <= max_order) out.push_back(a);
    int j = n - 1;
    while (j >= 0 && a[j] == max_order) a[j--] = 0;
    if (j < 0) break;
    ++a[j];
  }
  return out;
}

// All beta <= alpha.
std::vector<MultiIndex> below(const MultiIndex& alpha) {
  std::vector<MultiIndex> out;
  MultiIndex b(alpha.size(), 0);
  while (true) {
    out.push_back(b);
    int j = static_cast<int>(alpha.size()) - 1;
    while (j >= 0 && b[j] == alpha[j]) b[j--] = 0;
    if (j < 0) break;
    ++b[j];
  }
  return out;
}

double binom(const MultiIndex& a, const MultiIndex& b) {
  double r = 1.0;
  for (std::size_t j = 0; j < a.size(); ++j) r *= binom(a[j], b[j]);
  return r;
}

Point plus(const Point& k, const MultiIndex& b) {
  Point s = k;
  for (std::size_t j = 0; j < k.size(); ++j) s[j] += b[j];
  return s;
}

Json lattice_core(const VerifyConfig& config) {
  Suite suite("lattice-core");
  std::mt19937_64 rng(config.seed);
  double plancherel = 0.0;
  double roundtrip = 0.0;
  for (int n : {1, 2}) {
    for (int N : {8, 16}) {
      const LatticeWindow w(n, N);
      const TorusGrid g = default_grid(w);
      for (int trial = 0; trial < 25; ++trial) {
        const LatticeSequence f = gaussian(w, rng);
        const TorusFunction F = forward_dft(f, g);
        const double energy = f.values.squaredNorm();
        const double quad = torus_quadrature(TorusFunction(g, F.values.cwiseAbs2().cast<Complex>())).real();
        plancherel = std::max(plancherel, std::abs(quad - energy) / energy);
        roundtrip = std::max(roundtrip, relative(inverse_dft(F, w).values, f.values));
      }
    }
  }
  suite.at_most("plancherel_relative_error", plancherel, 1e-10);
  suite.at_most("inversion_roundtrip_relative_error", roundtrip, 1e-12);

  double closed = 0.0;
  double leibniz = 0.0;
  double parts = 0.0;
  for (int n : {1, 2}) {
    const LatticeWindow w(n, n == 1 ? 12 : 7);
    const std::vector<MultiIndex> alphas = up_to(n, 3);
    for (int trial = 0; trial < 25; ++trial) {
      const LatticeSequence f = gaussian(w, rng);
      const LatticeSequence g = gaussian(w, rng);
      const LatticeSequence fg(w, f.values.cwiseProduct(g.values));
      const LatticeSequence fc = gaussian(w, rng, 3);
      const LatticeSequence gc = gaussian(w, rng, 3);
      std::map<MultiIndex, LatticeSequence> df;
      std::map<MultiIndex, LatticeSequence> bg;
      for (const MultiIndex& a : alphas) {
        df.emplace(a, forward_difference(f, a).sequence);
        bg.emplace(a, backward_difference(g, a).sequence);
      }
      for (const MultiIndex& alpha : alphas) {
        const Differenced d = forward_difference(f, alpha);
        const LatticeSequence dfg = forward_difference(fg, alpha).sequence;
        const std::vector<MultiIndex> betas = below(alpha);
        for (Index i = 0; i < w.size(); ++i) {
          const Point k = w.point(i);
          if (d.reliable(k)) {
            Complex want = 0.0;
            for (const MultiIndex& b : betas) {
              const double sign = (order(alpha) - order(b)) % 2 ? -1.0 : 1.0;
              want += sign * binom(alpha, b) * f.at(plus(k, b));
            }
            closed = std::max(closed, std::abs(d.sequence.values(i) - want) / std::max(1.0, std::abs(want)));
          }
          if (w.is_interior(k, 3)) {
            Complex rhs = 0.0;
            for (const MultiIndex& b : betas) {
              MultiIndex rest = alpha;
              for (std::size_t j = 0; j < rest.size(); ++j) rest[j] -= b[j];
              rhs += binom(alpha, b) * df.at(b).at(k) * bg.at(rest).at(plus(k, alpha));
            }
            leibniz = std::max(leibniz, std::abs(dfg.values(i) - rhs) / std::max(1.0, std::abs(rhs)));
          }
        }
        const Complex lhs = fc.values.cwiseProduct(forward_difference(gc, alpha).sequence.values).sum();
        Complex rhs = backward_difference(fc, alpha).sequence.values.cwiseProduct(gc.values).sum();
        if (order(alpha) % 2) rhs = -rhs;
        parts = std::max(parts, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      }
    }
  }
  suite.at_most("closed_form_vs_iterated_differences", closed, 1e-13);
  suite.at_most("leibniz_rule_interior", leibniz, 1e-12);
  suite.at_most("summation_by_parts", parts, 1e-12);
  return suite.report();
}

Json symbol_model(const VerifyConfig& config) {
  Suite suite("symbol-model");
  const std::vector<std::string> texts{"1",
                                       "exp(i*twopi*x1)",
                                       "(1+k1^2+k2^2)^(1/2)",
                                       "-k1 + 2.5e-3*k2^-2",
                                       "step(k1)*exp(i*twopi*x1)+(1-step(k1))",
                                       "sqrt(abs(sin(twopi*x2)))/cos(k1*x1)"};
  int failures = 0;
  for (const auto& t : texts) {
    const Expression e = Expression::parse(t, 2);
    if (!(Expression::parse(e.to_string(), 2) == e)) ++failures;
  }
  suite.at_most("parser_roundtrip_failures", failures, 0);

  const LatticeWindow w2(2, 4);
  const TorusGrid g2(2, 11);
  double periodic = 0.0;
  for (const auto& t : texts) {
    const Symbol s = parse_symbol(t, 2);
    for (Index i = 0; i < w2.size(); ++i) {
      const Point k = w2.point(i);
      for (Index j = 0; j < g2.size(); ++j) {
        TorusPoint x = g2.node(j);
        const Complex a = s(k, x);
        for (double& c : x) c += 1.0;
        const Complex b = s(k, x);
        if (std::isfinite(std::abs(a))) periodic = std::max(periodic, std::abs(a - b));
      }
    }
  }
  suite.at_most("periodicity_on_grid_nodes", periodic, 0.0);

  double bessel_match = 0.0;
  const Symbol parsed = parse_symbol("(1+k1^2+k2^2)^(1/2)", 2);
  const Symbol builtin = bessel_symbol(2, 1.0);
  for (Index i = 0; i < w2.size(); ++i) {
    const Point k = w2.point(i);
    const TorusPoint x{0.3, 0.7};
    bessel_match = std::max(bessel_match, std::abs(parsed(k, x) - builtin(k, x)));
  }
  suite.at_most("bessel_expression_matches_builtin", bessel_match, 1e-14);

  double order_error = 0.0;
  for (double s : {-2.0, 1.0, 3.0}) {
    const LatticeWindow w(1, 64);
    order_error = std::max(order_error, std::abs(estimate_order(bessel_symbol(1, s), w, default_grid(w)).m_hat - s));
  }
  {
    const LatticeWindow w(2, 16);
    order_error = std::max(order_error, std::abs(estimate_order(bessel_symbol(2, 2.0), w, default_grid(w)).m_hat - 2.0));
  }
  suite.at_most("bessel_order_estimate_error", order_error, 0.1);

  double worst = std::numeric_limits<double>::infinity();
  double radius = 0.0;
  for (double s : {-3.0, -1.0, 0.0, 2.0, 4.0}) {
    const LatticeWindow w(1, 32);
    const EllipticityReport r = check_ellipticity(bessel_symbol(1, s), s, w, default_grid(w));
    worst = std::min(worst, r.elliptic ? r.C * std::pow(2.0, std::abs(s) / 2.0) : 0.0);
    radius = std::max(radius, r.M_radius);
  }
  suite.at_least("bessel_ellipticity_constant_scaled", worst, 1.0);
  suite.at_most("bessel_ellipticity_radius", radius, 0.0);

  {
    const LatticeWindow w(1, 32);
    const bool nonelliptic = !check_ellipticity(parse_symbol("sin(twopi*x1)", 1), 0.0, w, default_grid(w)).elliptic;
    suite.holds("vanishing_symbol_not_elliptic", nonelliptic);
    const S0Diagnostic d = s0_diagnostic(parse_symbol("exp(i*twopi*x1)/(1+k1^2)", 1), w, default_grid(w), 2);
    suite.holds("s0_diagnostic_decays", d.decays);
  }
  (void)config;
  return suite.report();
}

Json quantize_suite(const VerifyConfig& config) {
  Suite suite("quantize");
  std::mt19937_64 rng(config.seed);
  const LatticeWindow w(1, 16);
  const TorusGrid g = default_grid(w);
  const int margin = default_margin(w);
  const Symbol sigma = parse_symbol("2+exp(i*twopi*x1)/(1+k1^2)", 1, 0.0);
  const Symbol rho = parse_symbol("cos(twopi*x1)*(1+k1^2)^(-1/2) + 1", 1, 0.0);
  const Symbol tau = jump_symbol(1, 1);

  const LatticeSequence f = gaussian(w, rng);
  const LatticeSequence h = gaussian(w, rng);
  const Matrix one = assemble_matrix(parse_symbol("1", 1), w, g).entries;
  suite.at_most("unit_symbol_gives_identity", (one - Matrix::Identity(w.size(), w.size())).cwiseAbs().maxCoeff(), 1e-12);
  double off_diagonal = 0.0;
  for (const Symbol& s : {bessel_symbol(1, 2.0), parse_symbol("k1^3 - 2*i*k1", 1), parse_symbol("step(k1)+2", 1)}) {
    Matrix B = assemble_matrix(s, w, g).entries;
    const double scale = B.cwiseAbs().maxCoeff();
    B.diagonal().setZero();
    off_diagonal = std::max(off_diagonal, B.cwiseAbs().maxCoeff() / scale);
  }
  suite.at_most("x_independent_symbols_diagonal", off_diagonal, 1e-12);


  const Complex a(0.3, -1.2);
  const Complex b(-2.0, 0.5);
  const LatticeSequence combo(w, a * f.values + b * h.values);
  suite.at_most("apply_linearity", relative(apply(sigma, combo, g).values,
                                            a * apply(sigma, f, g).values + b * apply(sigma, h, g).values),
                1e-12);
  const Matrix A = assemble_matrix(sigma, w, g).entries;
  suite.at_most("matrix_apply_consistency", relative(A * f.values, apply(sigma, f, g).values), 1e-12);

  const Matrix back = assemble_matrix(extract_symbol({w, g, A}), w, g).entries;
  suite.at_most("extraction_roundtrip", (back - A).cwiseAbs().maxCoeff(), 1e-10);

  const LatticeWindow big(1, 24);
  const TorusGrid bg = default_grid(big);
  const Matrix product = assemble_matrix(sigma, big, bg).entries * assemble_matrix(rho, big, bg).entries;
  const Symbol composed = compose(sigma, rho, big, bg);
  const Matrix C = assemble_matrix(composed, big, bg).entries;
  double columns = 0.0;
  for (Index i = 0; i < big.size(); ++i) {
    if (composed.is_interior(big.point(i))) {
      columns = std::max(columns, (C.row(i) - product.row(i)).cwiseAbs().maxCoeff());
    }
  }
  suite.at_most("composition_matches_matrix_product", columns, 1e-10);
  const Matrix bessel_product = assemble_matrix(compose(bessel_symbol(1, 1.5), bessel_symbol(1, -0.5), big, bg), big, bg).entries;
  const Matrix bessel_direct = assemble_matrix(bessel_symbol(1, 1.0), big, bg).entries;
  suite.at_most("bessel_composition_exact", (bessel_product - bessel_direct).cwiseAbs().maxCoeff(), 1e-12);

  const Symbol left = compose(compose(rho, sigma, big, bg), tau, big, bg);
  const Symbol right = compose(rho, compose(sigma, tau, big, bg), big, bg);
  double assoc = 0.0;
  const Matrix L = left.sample(big, bg);
  const Matrix R = right.sample(big, bg);
  for (Index i = 0; i < big.size(); ++i) {
    if (left.is_interior(big.point(i))) assoc = std::max(assoc, (L.row(i) - R.row(i)).cwiseAbs().maxCoeff());
  }
  suite.at_most("composition_associativity_interior", assoc, 1e-8);

  const ToroidalSymbol dual = dual_toroidal_symbol(sigma);
  const Matrix D = lattice_from_toroidal(toroidal_matrix(dual, w, g), w);
  double duality = 0.0;
  for (Index i = 0; i < w.size(); ++i) {
    if (w.is_interior(w.point(i), margin)) duality = std::max(duality, (D.row(i) - A.row(i)).cwiseAbs().maxCoeff());
  }
  suite.at_most("lattice_toroidal_duality", duality, 1e-8);

  const Symbol adj = adjoint_symbol(sigma, w, g);
  const LatticeSequence phi = gaussian(w, rng, margin);
  const LatticeSequence psi = gaussian(w, rng, margin);
  const Complex lhs = psi.values.dot(apply(sigma, phi, g).values);
  const Complex rhs = apply(adj, psi, g).values.dot(phi.values);
  suite.at_most("adjoint_inner_product", std::abs(lhs - rhs) / std::abs(lhs), 1e-10);

  double growth = 0.0;
  for (const Symbol& s : {sigma, rho, tau}) {
    std::vector<double> norms;
    for (int N : {8, 16, 32}) {
      const LatticeWindow v(1, N);
      norms.push_back(operator_norm(s, v, default_grid(v)));
    }
    for (std::size_t i = 1; i < norms.size(); ++i) growth = std::max(growth, norms[i] / norms[i - 1]);
  }
  suite.at_most("l2_norm_growth_across_windows", growth, 1.5);
  return suite.report();
}

Json sobolev_suite(const VerifyConfig& config) {
  Suite suite("sobolev");
  std::mt19937_64 rng(config.seed);
  const LatticeWindow w(2, 8);
  const LatticeSequence u = gaussian(w, rng);
  double group = 0.0;
  double isometry = 0.0;
  for (double s : {-1.5, 0.0, 2.0}) {
    for (double t : {-2.0, 0.5, 3.0}) {
      group = std::max(group, relative(bessel_apply(s, bessel_apply(t, u)).values, bessel_apply(s + t, u).values));
      isometry = std::max(isometry, std::abs(sobolev_norm(s + t, bessel_apply(-t, u)) - sobolev_norm(s, u)) /
                                        sobolev_norm(s, u));
    }
  }
  suite.at_most("bessel_group_law", group, 1e-12);
  suite.at_most("bessel_isometry", isometry, 1e-12);

  const LatticeWindow w1(1, 32);
  const auto samples = random_sequences(w1, 50, config.seed, default_margin(w1));
  suite.at_most("embedding_ratio_s0_t2", embedding_check(0.0, 2.0, samples).max_ratio, 1.0);

  double growth = 0.0;
  const std::vector<std::pair<Symbol, double>> tests{
      {bessel_symbol(1, 2.0), 2.0}, {multiplier_symbol(1, 2.0, 2.0, 1.0, 2.0, 1.0), 2.0}, {jump_symbol(1, 1), 0.0}};
  for (const auto& [sym, m] : tests) {
    std::vector<double> ratios;
    for (int N : {8, 16, 32}) {
      const LatticeWindow v(1, N);
      ratios.push_back(sobolev_boundedness(sym, m, 1.0, v, default_grid(v), 30, config.seed).max_ratio);
    }
    for (std::size_t i = 1; i < ratios.size(); ++i) growth = std::max(growth, ratios[i] / ratios[i - 1]);
  }
  suite.at_most("sobolev_ratio_growth_across_windows", growth, 1.5);

  const SpectrumReport inc = inclusion_spectrum(0.0, 1.0, 1, {256});
  suite.at_most("inclusion_exponent_relative_error", std::abs(inc.fit_exponent - (-1.0)), 0.2);
  const SpectrumReport sm = smoothing_spectrum(1.0, 1, {16, 32, 64});
  bool increasing = true;
  for (std::size_t i = 1; i < sm.small_counts.size(); ++i) increasing = increasing && sm.small_counts[i] > sm.small_counts[i - 1];
  suite.holds("smoothing_small_counts_increase", increasing, sm.small_counts.back());
  return suite.report();
}

Json elliptic_suite(const VerifyConfig& config) {
  Suite suite("elliptic");
  const LatticeWindow w(1, 32);
  const TorusGrid g = default_grid(w);
  double exact = 0.0;
  for (const auto& [sym, m] : std::vector<std::pair<Symbol, double>>{{bessel_symbol(1, 2.0), 2.0},
                                                                       {parse_symbol("2", 1), 0.0},
                                                                       {bessel_symbol(1, -1.0), -1.0}}) {
    ParametrixOptions o;
    o.track_orders = false;
    const Parametrix P = parametrix(sym, m, 1, w, g, o);
    exact = std::max({exact, P.R.cwiseAbs().maxCoeff(), P.S.cwiseAbs().maxCoeff()});
  }
  suite.at_most("multiplier_parametrix_residual", exact, 1e-12);

  const Symbol perturbed = parse_symbol("2+exp(i*twopi*x1)/(1+k1^2)", 1, 0.0);
  const Parametrix P = parametrix(perturbed, 0.0, 3, w, g);
  double drop = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < P.residual_orders.size(); ++j) {
    drop = std::min(drop, P.residual_orders[j - 1] - P.residual_orders[j]);
  }
  suite.at_least("residual_order_drop_per_step", drop, 0.8);
  suite.at_most("residual_order_after_steps", P.residual_orders.back(), -3.0 + 0.5);
  suite.holds("residual_decay_shellwise",
              residual_decay_report(P.left_residual, 3).schwartz_like &&
                  residual_decay_report(P.right_residual, 3).schwartz_like);

  const ADNReport bessel = adn_verify(bessel_symbol(1, 2.0), 2.0, w, g, 100, config.seed);
  suite.holds("adn_bessel_ratios_in_(1,2]", bessel.C1 > 1.0 && bessel.C2 <= 2.0, bessel.C2);
  const Symbol family = multiplier_symbol(1, 2.0, 2.0, 1.0, 2.0, 1.0);
  const ADNReport adn = adn_verify(family, 2.0, w, g, 100, config.seed);
  suite.holds("adn_perturbed_constants_stable", adn.C1 > 0.0 && adn.stable, adn.C1);

  std::mt19937_64 rng(config.seed);
  const LatticeSequence f = gaussian(w, rng, default_margin(w));
  SolveOptions so;
  so.seed = config.seed;
  const SolveResult sol = solve(perturbed, 0.0, f, g, 1e-8, so);
  suite.at_most("solve_interior_residual", sol.residual_interior, 1e-8);
  const Vector direct = assemble_matrix(perturbed, w, g).entries.partialPivLu().solve(f.values);
  suite.at_most("solve_matches_dense", relative(sol.u.values, direct), 1e-6);
  return suite.report();
}

Json fredholm_suite(const VerifyConfig& config) {
  Suite suite("fredholm");
  const std::vector<std::pair<std::string, std::pair<Symbol, int>>> shipped{
      {"constant", {parse_symbol("2", 1, 0.0), 0}},
      {"jump_plus", {jump_symbol(1, 1), 1}},
      {"jump_minus", {jump_symbol(1, -1), -1}}};
  const int largest = *std::max_element(config.index_windows.begin(), config.index_windows.end());
  for (const auto& [name, entry] : shipped) {
    const auto& [sym, expected] = entry;
    const IndexReport r = compute_index(sym, config.index_windows);
    suite.holds("svd_index_" + name, r.svd_index && *r.svd_index == expected,
                r.svd_index ? *r.svd_index : std::numeric_limits<double>::quiet_NaN());
    suite.at_most("trace_index_error_" + name, std::abs(r.trace_index_raw - expected), 0.25);
    suite.holds("agreement_" + name, r.agreement);
    const double gap = *std::min_element(r.gap_evidence.begin(), r.gap_evidence.end());
    suite.at_least("spectral_gap_" + name, gap, 100.0);
  }

  // Cokernel of the section equals the kernel of the assembled adjoint symbol.
  bool adjoint_ok = true;
  IndexSettings settings;
  for (const auto& [name, entry] : shipped) {
    const Symbol& sym = entry.first;
    for (int N : config.index_windows) {
      const LatticeWindow outer(1, N + settings.row_margin);
      const Symbol adj = adjoint_symbol(sym, outer, grid_for(sym, outer));
      const Symbol adj_wide = Symbol::from_matrix(outer, grid_for(sym, outer), adj.grid_data().coefficients, 0.0, 0);
      adjoint_ok = adjoint_ok && section_spectrum(adj_wide, N, settings).dim_ker == section_spectrum(sym, N, settings).dim_coker;
    }
  }
  suite.holds("adjoint_cokernel_consistency", adjoint_ok);

  const int composed_half = (largest + settings.row_margin) * 4 / 3 + 2;
  const LatticeWindow cw(1, composed_half);
  const TorusGrid cg = default_grid(cw);
  const Symbol plus_plus = compose(jump_symbol(1, 1), jump_symbol(1, 1), cw, cg);
  const Symbol plus_minus = compose(jump_symbol(1, 1), jump_symbol(1, -1), cw, cg);
  const auto pp = svd_index(plus_plus, config.index_windows).svd_index;
  const auto pm = svd_index(plus_minus, config.index_windows).svd_index;
  suite.holds("index_additivity_under_composition", pp && *pp == 2 && pm && *pm == 0);

  bool compact = true;
  for (const Symbol& sym : {parse_symbol("2+exp(i*twopi*x1)/(1+k1^2)", 1, 0.0), jump_symbol(1, 1), jump_symbol(1, -1)}) {
    compact = compact && atkinson_check(sym, config.index_windows).bounded;
  }
  suite.holds("atkinson_defects_bounded", compact);

  const ProbeReport probe = fredholm_ellipticity_probe(bessel_symbol(1, -1.0).with_order(0.0), {16, 32, 64});
  suite.holds("decaying_symbol_near_kernel_grows", !probe.elliptic && probe.consistent);
  return suite.report();
}

const std::map<std::string, std::function<Json(const VerifyConfig&)>>& registry() {
  static const std::map<std::string, std::function<Json(const VerifyConfig&)>> r{
      {"lattice-core", lattice_core}, {"symbol-model", symbol_model}, {"quantize", quantize_suite},
      {"sobolev", sobolev_suite},     {"elliptic", elliptic_suite},   {"fredholm", fredholm_suite}};
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lattice-core", "symbol-model", "quantize",
                                              "sobolev",      "elliptic",     "fredholm"};
  return names;
}

Json run_verify(const std::string& suite, const VerifyConfig& config) {
  if (suite == "all") {
    Json suites = Json::array();
    bool pass = true;
    for (const auto& name : suite_names()) {
      Json r = registry().at(name)(config);
      pass = pass && r.at("pass").get<bool>();
      suites.push_back(std::move(r));
    }
    return {{"suite", "all"}, {"pass", pass}, {"suites", std::move(suites)}};
  }
  const auto it = registry().find(suite);
  if (it == registry().end()) throw UnknownSuite("unknown verification suite '" + suite + "'");
  return it->second(config);
}

}  // namespace lpdo

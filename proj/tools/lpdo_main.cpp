// lpdo: command-line front end for the lattice operator library.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lpdo/lpdo.hpp"

namespace {

using lpdo::Json;

class UsageError : public lpdo::Error {
 public:
  using Error::Error;
};
class IoError : public lpdo::Error {
 public:
  using Error::Error;
};

struct Options {
  int n = 1;
  int N = 16;
  int M = 0;
  std::uint64_t seed = 42;
  std::string out;
  std::string json;
  bool no_timestamp = false;
  CLI::Option* n_opt = nullptr;
  CLI::Option* N_opt = nullptr;
  CLI::Option* M_opt = nullptr;

  std::string symbol;
  std::string expr;
  std::string symbol2;
  std::string expr2;
  std::optional<double> order;
  std::string input;
  std::string plot;
  std::vector<int> windows;
  double s = 0.0;
  double t = 1.0;
  double eps = 1.0;
  int steps = 3;
  int p = 3;
  double tol = 1e-8;
  std::string kind = "inclusion";
  std::string suite = "all";
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

Json read_json(const std::string& path) {
  std::ifstream in = open_in(path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw lpdo::ParseError(path + ": " + e.what());
  }
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

class Run {
 public:
  Run(std::string command, const Options& o) : command_(std::move(command)), o_(o) {
    config_["n"] = o.n;
    config_["N"] = o.N;
    config_["seed"] = o.seed;
  }

  const Options& opt() const { return o_; }
  Json& config() { return config_; }

  /// Fixes n and N; M defaults to 2N+3 and must resolve the window.
  void resolve(int n, int N, std::optional<int> native_M = std::nullopt) {
    if (o_.n_opt->count() > 0 && n != o_.n) {
      throw lpdo::DomainError("--n " + std::to_string(o_.n) + " disagrees with the input dimension " + std::to_string(n));
    }
    n_ = n;
    N_ = N;
    M_ = o_.M_opt->count() > 0 ? o_.M : std::max(2 * N + 3, native_M.value_or(0));
    config_["n"] = n_;
    config_["N"] = N_;
    config_["M"] = M_;
    lpdo::require_resolving(window(), grid());
  }
  int N_or(int fallback) const { return o_.N_opt->count() > 0 ? o_.N : fallback; }

  lpdo::LatticeWindow window() const { return lpdo::LatticeWindow(n_, N_); }
  lpdo::TorusGrid grid() const { return lpdo::TorusGrid(n_, M_); }

  lpdo::Symbol symbol(const std::string& file, const std::string& expr, const char* key) {
    if (!file.empty() && !expr.empty()) throw UsageError(std::string("give either a symbol file or an expression for ") + key);
    if (!file.empty()) {
      config_[key] = file;
      lpdo::Symbol s = lpdo::symbol_from_json(read_json(file));
      return o_.order ? s.with_order(*o_.order) : s;
    }
    if (!expr.empty()) {
      config_[key] = expr;
      return lpdo::parse_symbol(expr, o_.n, o_.order);
    }
    throw UsageError(std::string("missing ") + key + " (--symbol FILE or --expr TEXT)");
  }

  /// Window for a symbol: a grid symbol fixes its own N unless overridden.
  void resolve_for(const lpdo::Symbol& s) {
    int N = o_.N;
    std::optional<int> native;
    if (s.kind() == lpdo::Symbol::Kind::Grid) {
      const auto& g = s.grid_data();
      native = g.grid.points_per_axis();
      N = N_or(g.window.half_width() - g.interior_margin);
    }
    resolve(s.dim(), N, native);
  }

  lpdo::LatticeSequence sequence(const std::string& path) {
    if (path.empty()) throw UsageError("missing --input");
    config_["input"] = path;
    std::ifstream in = open_in(path);
    lpdo::LatticeSequence f = lpdo::read_sequence_csv(in);
    if (o_.N_opt->count() == 0 || o_.N == f.window.half_width()) return f;
    const lpdo::LatticeWindow w(f.window.dim(), o_.N);
    lpdo::LatticeSequence g = lpdo::LatticeSequence::zeros(w);
    for (lpdo::Index i = 0; i < f.window.size(); ++i) {
      if (f.values(i) == lpdo::Complex(0.0)) continue;
      const lpdo::Index j = w.index_of(f.window.point(i));
      if (j < 0) throw lpdo::DomainError("sequence has nonzero values outside the window N=" + std::to_string(o_.N));
      g.values(j) = f.values(i);
    }
    return g;
  }

  void write_sequence(const lpdo::LatticeSequence& f, Json& result) {
    if (o_.out.empty()) {
      Json values = Json::array();
      for (lpdo::Index i = 0; i < f.values.size(); ++i) values.push_back({f.values(i).real(), f.values(i).imag()});
      result["values"] = std::move(values);
      return;
    }
    config_["out"] = o_.out;
    std::ofstream out = open_out(o_.out);
    lpdo::write_sequence_csv(out, f);
  }

  void write_symbol(const lpdo::Symbol& s, Json& result) {
    if (o_.out.empty()) {
      result["symbol"] = lpdo::symbol_to_json(s);
      return;
    }
    config_["out"] = o_.out;
    open_out(o_.out) << lpdo::symbol_to_json(s).dump(2) << '\n';
  }

  /// Plot-ready CSV with columns series,x,y.
  void write_plot(const std::vector<std::tuple<std::string, double, double>>& rows) {
    if (o_.plot.empty()) return;
    config_["plot"] = o_.plot;
    std::ofstream out = open_out(o_.plot);
    out << "series,x,y\n";
    char buf[64];
    for (const auto& [series, x, y] : rows) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", x, y);
      out << series << ',' << buf << '\n';
    }
  }

  int finish(Json result, int code = 0) {
    Json report;
    report["command"] = command_;
    if (!o_.json.empty()) config_["json"] = o_.json;
    report["config"] = config_;
    report["result"] = std::move(result);
    if (!o_.no_timestamp) {
      const auto now = std::chrono::system_clock::now();
      const std::time_t t = std::chrono::system_clock::to_time_t(now);
      char buf[32];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
      report["timestamp"] = buf;
      report["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    const std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (!o_.json.empty()) open_out(o_.json) << text;
    return code;
  }

 private:
  std::string command_;
  const Options& o_;
  Json config_;
  int n_ = 0;
  int N_ = 0;
  int M_ = 0;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Json sequence_values(const lpdo::TorusFunction& F) {
  Json values = Json::array();
  for (lpdo::Index i = 0; i < F.values.size(); ++i) values.push_back({F.values(i).real(), F.values(i).imag()});
  return values;
}

std::vector<int> windows_or(const Options& o, std::vector<int> fallback) {
  return o.windows.empty() ? fallback : o.windows;
}

int cmd_ft(const Options& o) {
  Run run("ft", o);
  lpdo::LatticeSequence f = run.sequence(o.input);
  run.resolve(f.window.dim(), f.window.half_width());
  const lpdo::TorusFunction F = lpdo::forward_dft(f, run.grid());
  Json result{{"l2_norm", f.norm()},
              {"quadrature_energy",
               lpdo::torus_quadrature(lpdo::TorusFunction(F.grid, F.values.cwiseAbs2().cast<lpdo::Complex>())).real()}};
  if (o.out.empty()) {
    result["values"] = sequence_values(F);
  } else {
    run.config()["out"] = o.out;
    std::ofstream out = open_out(o.out);
    lpdo::write_torus_csv(out, F);
  }
  return run.finish(std::move(result));
}

int cmd_invft(const Options& o) {
  Run run("invft", o);
  if (o.input.empty()) throw UsageError("missing --input");
  run.config()["input"] = o.input;
  std::ifstream in = open_in(o.input);
  const lpdo::TorusFunction F = lpdo::read_torus_csv(in);
  if (o.M_opt->count() > 0 && o.M != F.grid.points_per_axis()) {
    throw lpdo::DomainError("--M disagrees with the " + std::to_string(F.grid.points_per_axis()) + " nodes per axis in the file");
  }
  run.resolve(F.grid.dim(), o.N, F.grid.points_per_axis());
  const lpdo::LatticeSequence f = lpdo::inverse_dft(F, run.window());
  Json result{{"l2_norm", f.norm()}};
  run.write_sequence(f, result);
  return run.finish(std::move(result));
}

int cmd_apply(const Options& o) {
  Run run("apply", o);
  const lpdo::Symbol sigma = run.symbol(o.symbol, o.expr, "symbol");
  lpdo::LatticeSequence f = run.sequence(o.input);
  if (f.window.dim() != sigma.dim()) {
    throw lpdo::DomainError("sequence has n=" + std::to_string(f.window.dim()) + " but the symbol has n=" + std::to_string(sigma.dim()));
  }
  run.resolve(sigma.dim(), f.window.half_width(), lpdo::grid_for(sigma, f.window).points_per_axis());
  const lpdo::LatticeSequence g = lpdo::apply(sigma, f, run.grid());
  Json result{{"norm_in", f.norm()}, {"norm_out", g.norm()}};
  run.write_sequence(g, result);
  return run.finish(std::move(result));
}

int cmd_assemble(const Options& o) {
  Run run("assemble", o);
  const lpdo::Symbol sigma = run.symbol(o.symbol, o.expr, "symbol");
  run.resolve_for(sigma);
  const lpdo::OperatorMatrix A = lpdo::assemble_matrix(sigma, run.window(), run.grid());
  Json result{{"rows", A.entries.rows()},
              {"cols", A.entries.cols()},
              {"frobenius_norm", A.entries.norm()},
              {"max_abs_entry", A.entries.cwiseAbs().maxCoeff()}};
  if (o.out.empty()) {
    result["matrix"] = lpdo::matrix_to_json(A);
  } else {
    run.config()["out"] = o.out;
    std::ofstream out = open_out(o.out);
    if (has_suffix(o.out, ".bin")) {
      lpdo::write_matrix_binary(out, A);
    } else {
      out << lpdo::matrix_to_json(A).dump() << '\n';
    }
  }
  return run.finish(std::move(result));
}

int cmd_compose(const Options& o) {
  Run run("compose", o);
  const lpdo::Symbol sigma = run.symbol(o.symbol, o.expr, "symbol");
  const lpdo::Symbol tau = run.symbol(o.symbol2, o.expr2, "symbol2");
  if (sigma.dim() != tau.dim()) throw lpdo::DomainError("symbols have different dimensions");
  run.resolve(sigma.dim(), o.N);
  const lpdo::Symbol c = lpdo::compose(sigma, tau, run.window(), run.grid());
  Json result{{"order", c.declared_order() ? Json(*c.declared_order()) : Json(nullptr)},
              {"interior_margin", c.grid_data().interior_margin}};
  run.write_symbol(c, result);
  return run.finish(std::move(result));
}

int cmd_adjoint(const Options& o) {
  Run run("adjoint", o);
  const lpdo::Symbol sigma = run.symbol(o.symbol, o.expr, "symbol");
  run.resolve_for(sigma);
  const lpdo::Symbol a = lpdo::adjoint_symbol(sigma, run.window(), run.grid());
  Json result{{"interior_margin", a.grid_data().interior_margin}};
  run.write_symbol(a, result);
  return run.finish(std::move(result));
}

int cmd_norm(const Options& o) {
  Run run("norm", o);
  const lpdo::LatticeSequence u = run.sequence(o.input);
  run.resolve(u.window.dim(), u.window.half_width());
  run.config()["s"] = o.s;
  return run.finish({{"s", o.s}, {"norm", lpdo::sobolev_norm(o.s, u)}});
}

double order_of(const lpdo::Symbol& sigma, const Run& run, Json& result) {
  if (sigma.declared_order()) return *sigma.declared_order();
  const lpdo::OrderEstimate e = lpdo::estimate_order(sigma, run.window(), run.grid());
  result["order_estimate"] = lpdo::to_json(e);
  return e.m_hat;
}

int cmd_classify(const Options& o) {
  Run run("classify", o);
  const lpdo::Symbol sigma = run.symbol(o.symbol, o.expr, "symbol");
  run.resolve_for(sigma);
  Json result;
  const lpdo::OrderEstimate e = lpdo::estimate_order(sigma, run.window(), run.grid());
  result["order_estimate"] = lpdo::to_json(e);
  const double m = sigma.declared_order().value_or(e.m_hat);
  result["order_used"] = m;
  result["ellipticity"] = lpdo::to_json(lpdo::check_ellipticity(sigma, m, run.window(), run.grid()));
  return run.finish(std::move(result));
}

int cmd_parametrix(const Options& o) {
  Run run("parametrix", o);
  const lpdo::Symbol sigma = run.symbol(o.symbol, o.expr, "symbol");
  run.resolve_for(sigma);
  run.config()["steps"] = o.steps;
  run.config()["p"] = o.p;
  Json result;
  const double m = order_of(sigma, run, result);
  const lpdo::Parametrix P = lpdo::parametrix(sigma, m, o.steps, run.window(), run.grid());
  result["order_used"] = m;
  result["theta"] = P.theta;
  result["regularized_points"] = P.regularized_points;
  result["residual_orders"] = P.residual_orders;
  result["ellipticity"] = lpdo::to_json(P.ellipticity);
  const lpdo::DecayReport left = lpdo::residual_decay_report(P.left_residual, o.p);
  const lpdo::DecayReport right = lpdo::residual_decay_report(P.right_residual, o.p);
  result["left_residual_decay"] = lpdo::to_json(left);
  result["right_residual_decay"] = lpdo::to_json(right);
  std::vector<std::tuple<std::string, double, double>> rows;
  for (const auto& [name, report] : {std::pair{"left", &left}, std::pair{"right", &right}}) {
    for (std::size_t q = 0; q < report->profiles.size(); ++q) {
      for (std::size_t j = 0; j < report->profiles[q].shell_sups.size(); ++j) {
        rows.emplace_back(std::string(name) + "_p" + std::to_string(report->profiles[q].p), report->shells[j],
                          report->profiles[q].shell_sups[j]);
      }
    }
  }
  run.write_plot(rows);
  return run.finish(std::move(result));
}

int cmd_solve(const Options& o) {
  Run run("solve", o);
  const lpdo::Symbol sigma = run.symbol(o.symbol, o.expr, "symbol");
  const lpdo::LatticeSequence f = run.sequence(o.input);
  if (f.window.dim() != sigma.dim()) throw lpdo::DomainError("sequence and symbol dimensions differ");
  run.resolve(sigma.dim(), f.window.half_width(), lpdo::grid_for(sigma, f.window).points_per_axis());
  run.config()["tol"] = o.tol;
  run.config()["steps"] = o.steps;
  Json result;
  const double m = order_of(sigma, run, result);
  lpdo::SolveOptions so;
  so.seed = o.seed;
  so.parametrix_steps = o.steps;
  const lpdo::SolveResult r = lpdo::solve(sigma, m, f, run.grid(), o.tol, so);
  result["solve"] = lpdo::to_json(r);
  run.write_sequence(r.u, result);
  return run.finish(std::move(result));
}

int cmd_spectrum(const Options& o) {
  Run run("spectrum", o);
  const std::vector<int> windows = windows_or(o, {16, 32, 64});
  run.config()["kind"] = o.kind;
  run.config()["windows"] = windows;
  run.config().erase("N");
  lpdo::SpectrumReport r;
  if (o.kind == "inclusion") {
    run.config()["s"] = o.s;
    run.config()["t"] = o.t;
    r = lpdo::inclusion_spectrum(o.s, o.t, o.n, windows);
  } else if (o.kind == "smoothing") {
    run.config()["eps"] = o.eps;
    r = lpdo::smoothing_spectrum(o.eps, o.n, windows);
  } else {
    throw UsageError("unknown spectrum kind '" + o.kind + "' (inclusion or smoothing)");
  }
  std::vector<std::tuple<std::string, double, double>> rows;
  for (std::size_t w = 0; w < r.windows.size(); ++w) {
    for (std::size_t i = 0; i < r.singular_values[w].size(); ++i) {
      rows.emplace_back("N" + std::to_string(r.windows[w]), static_cast<double>(i + 1), r.singular_values[w][i]);
    }
  }
  run.write_plot(rows);
  return run.finish(lpdo::to_json(r));
}

int cmd_index(const Options& o) {
  Run run("index", o);
  const lpdo::Symbol sigma = run.symbol(o.symbol, o.expr, "symbol");
  const std::vector<int> windows = windows_or(o, {16, 32, 64});
  run.config().erase("N");
  run.config()["n"] = sigma.dim();
  run.config()["windows"] = windows;
  if (sigma.declared_order() && *sigma.declared_order() != 0.0) {
    throw lpdo::PreconditionError("index requires an order-0 symbol");
  }
  const lpdo::IndexReport r = lpdo::compute_index(sigma, windows);
  Json result = lpdo::to_json(r);
  if (!r.elliptic) result["probe"] = lpdo::to_json(lpdo::fredholm_ellipticity_probe(sigma, windows));
  return run.finish(std::move(result));
}

int cmd_verify(const Options& o) {
  Run run("verify", o);
  run.config().erase("n");
  run.config().erase("N");
  lpdo::VerifyConfig vc;
  vc.seed = o.seed;
  if (!o.windows.empty()) vc.index_windows = o.windows;
  run.config()["suite"] = o.suite;
  run.config()["windows"] = vc.index_windows;
  Json result = lpdo::run_verify(o.suite, vc);
  const bool pass = result.at("pass").get<bool>();
  return run.finish(std::move(result), pass ? 0 : 1);
}

void error_json(const std::string& type, const std::string& message, int code) {
  std::cerr << Json{{"error", {{"type", type}, {"message", message}, {"exit_code", code}}}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice pseudo-differential operator toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  o.n_opt = app.add_option("--n", o.n, "lattice dimension")->check(CLI::Range(1, 3));
  o.N_opt = app.add_option("--N", o.N, "window half-width")->check(CLI::Range(1, 4096));
  o.M_opt = app.add_option("--M", o.M, "grid points per axis (default 2N+3)")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--out", o.out, "primary output file");
  app.add_option("--json", o.json, "also write the report here");
  app.add_flag("--no-timestamp", o.no_timestamp, "omit timestamp and timing from the report");

  auto symbol_opts = [&](CLI::App* sub) {
    sub->add_option("--symbol", o.symbol, "symbol JSON file");
    sub->add_option("--expr", o.expr, "symbol expression");
    sub->add_option("--order", o.order, "declared order");
  };

  std::vector<std::pair<CLI::App*, int (*)(const Options&)>> commands;
  auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.emplace_back(sub, fn);
    return sub;
  };

  add("ft", "forward transform of a sequence CSV", cmd_ft)->add_option("--input", o.input, "sequence CSV");
  add("invft", "inverse transform of a torus CSV", cmd_invft)->add_option("--input", o.input, "torus CSV");
  {
    CLI::App* sub = add("apply", "apply an operator to a sequence", cmd_apply);
    symbol_opts(sub);
    sub->add_option("--input", o.input, "sequence CSV");
  }
  symbol_opts(add("assemble", "finite-section matrix (.bin for binary output)", cmd_assemble));
  {
    CLI::App* sub = add("compose", "symbol of the composition", cmd_compose);
    symbol_opts(sub);
    sub->add_option("--symbol2", o.symbol2, "right factor symbol file");
    sub->add_option("--expr2", o.expr2, "right factor expression");
  }
  symbol_opts(add("adjoint", "symbol of the adjoint", cmd_adjoint));
  {
    CLI::App* sub = add("norm", "Sobolev norm of a sequence", cmd_norm);
    sub->add_option("--input", o.input, "sequence CSV");
    sub->add_option("--s", o.s, "smoothness index");
  }
  symbol_opts(add("classify", "order estimate and ellipticity", cmd_classify));
  {
    CLI::App* sub = add("parametrix", "parametrix and residual decay", cmd_parametrix);
    symbol_opts(sub);
    sub->add_option("--steps", o.steps, "Neumann steps")->check(CLI::Range(0, 20));
    sub->add_option("--p", o.p, "largest difference order in the decay report")->check(CLI::Range(0, 8));
    sub->add_option("--plot", o.plot, "decay profiles CSV");
  }
  {
    CLI::App* sub = add("solve", "parametrix-preconditioned solve", cmd_solve);
    symbol_opts(sub);
    sub->add_option("--input", o.input, "right-hand side CSV");
    sub->add_option("--tol", o.tol, "interior residual tolerance");
    sub->add_option("--steps", o.steps, "parametrix steps")->check(CLI::Range(0, 20));
  }
  {
    CLI::App* sub = add("spectrum", "inclusion or smoothing singular values", cmd_spectrum);
    sub->add_option("--kind", o.kind, "inclusion or smoothing");
    sub->add_option("--s", o.s, "source index");
    sub->add_option("--t", o.t, "target index");
    sub->add_option("--eps", o.eps, "smoothing order");
    sub->add_option("--windows", o.windows, "window half-widths");
    sub->add_option("--plot", o.plot, "singular values CSV");
  }
  {
    CLI::App* sub = add("index", "Fredholm index of an order-0 symbol", cmd_index);
    symbol_opts(sub);
    sub->add_option("--windows", o.windows, "window half-widths");
  }
  {
    CLI::App* sub = add("verify", "run property suites", cmd_verify);
    sub->add_option("--suite", o.suite, "suite name or all");
    sub->add_option("--windows", o.windows, "index windows");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_json("UsageError", e.what(), 2);
    return 2;
  }

  try {
    for (const auto& [sub, fn] : commands) {
      if (sub->parsed()) return fn(o);
    }
  } catch (const lpdo::SolveError& e) {
    error_json("SolveError", e.what(), 3);
    return 3;
  } catch (const lpdo::ConvergenceError& e) {
    error_json("ConvergenceError", e.what(), 3);
    return 3;
  } catch (const lpdo::AliasingError& e) {
    error_json("AliasingError", e.what(), 3);
    return 3;
  } catch (const lpdo::DomainError& e) {
    error_json("DomainError", e.what(), 3);
    return 3;
  } catch (const lpdo::PreconditionError& e) {
    error_json("PreconditionError", e.what(), 3);
    return 3;
  } catch (const lpdo::ParseError& e) {
    error_json("ParseError", e.what(), 2);
    return 2;
  } catch (const lpdo::UnknownSuite& e) {
    error_json("UnknownSuite", e.what(), 2);
    return 2;
  } catch (const UsageError& e) {
    error_json("UsageError", e.what(), 2);
    return 2;
  } catch (const IoError& e) {
    error_json("IoError", e.what(), 2);
    return 2;
  } catch (const std::exception& e) {
    error_json("InternalError", e.what(), 3);
    return 3;
  }
  return 2;
}

#include "lpdo/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "lpdo/errors.hpp"

namespace lpdo {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, ',')) {
    const auto a = field.find_first_not_of(" \t\r");
    const auto b = field.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T number(const std::string& text, int line) {
  T value{};
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw ParseError("line " + std::to_string(line) + ": malformed number '" + text + "'");
  }
  return value;
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("expected a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json optional_number(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json window_json(const LatticeWindow& w) { return {{"n", w.dim()}, {"N", w.half_width()}}; }
Json grid_json(const TorusGrid& g) { return {{"n", g.dim()}, {"M", g.points_per_axis()}}; }

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw ParseError("truncated matrix header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& out, double d) {
  const auto bits = std::bit_cast<std::uint64_t>(d);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw ParseError("truncated matrix entries");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

LatticeSequence read_sequence_csv(std::istream& in, std::optional<LatticeWindow> window) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty sequence file");
  const auto header = split(line);
  const int n = static_cast<int>(header.size()) - 2;
  if (n < 1 || header[n] != "re" || header[n + 1] != "im") {
    throw ParseError("sequence header must be k1,...,kn,re,im");
  }
  for (int j = 0; j < n; ++j) {
    if (header[j] != "k" + std::to_string(j + 1)) throw ParseError("sequence header must be k1,...,kn,re,im");
  }
  std::vector<std::pair<Point, Complex>> rows;
  int N = 0;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split(line);
    if (static_cast<int>(fields.size()) != n + 2) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(n + 2) + " fields");
    }
    Point k(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      k[j] = number<int>(fields[j], lineno);
      N = std::max(N, std::abs(k[j]));
    }
    rows.emplace_back(k, Complex(number<double>(fields[n], lineno), number<double>(fields[n + 1], lineno)));
  }
  if (window && window->dim() != n) {
    throw DomainError("sequence file has n=" + std::to_string(n) + " but the run uses n=" +
                      std::to_string(window->dim()));
  }
  const LatticeWindow w = window.value_or(LatticeWindow(n, std::max(N, 1)));
  LatticeSequence f = LatticeSequence::zeros(w);
  for (const auto& [k, v] : rows) {
    const Index i = w.index_of(k);
    if (i < 0) throw DomainError("sequence point outside the window N=" + std::to_string(w.half_width()));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw ParseError("non-finite sequence value");
    f.values(i) = v;
  }
  return f;
}

void write_sequence_csv(std::ostream& out, const LatticeSequence& f) {
  const int n = f.window.dim();
  for (int j = 0; j < n; ++j) out << 'k' << (j + 1) << ',';
  out << "re,im\n";
  Point k(static_cast<std::size_t>(n));
  for (Index i = 0; i < f.window.size(); ++i) {
    f.window.point_into(i, k);
    for (int c : k) out << c << ',';
    out << g17(f.values(i).real()) << ',' << g17(f.values(i).imag()) << '\n';
  }
}

TorusFunction read_torus_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty torus file");
  const auto header = split(line);
  const int n = static_cast<int>(header.size()) - 2;
  bool ok = n >= 1 && header[n] == "re" && header[n + 1] == "im";
  for (int j = 0; ok && j < n; ++j) ok = header[j] == "j" + std::to_string(j + 1);
  if (!ok) throw ParseError("torus header must be j1,...,jn,re,im");
  std::vector<std::pair<std::vector<int>, Complex>> rows;
  int M = 0;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split(line);
    if (static_cast<int>(fields.size()) != n + 2) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(n + 2) + " fields");
    }
    std::vector<int> digits(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      digits[j] = number<int>(fields[j], lineno);
      if (digits[j] < 0) throw ParseError("line " + std::to_string(lineno) + ": negative node digit");
      M = std::max(M, digits[j] + 1);
    }
    rows.emplace_back(std::move(digits), Complex(number<double>(fields[n], lineno), number<double>(fields[n + 1], lineno)));
  }
  const TorusGrid grid(n, std::max(M, 1));
  if (static_cast<Index>(rows.size()) != grid.size()) {
    throw ParseError("torus file lists " + std::to_string(rows.size()) + " nodes, expected " + std::to_string(grid.size()));
  }
  Vector values = Vector::Zero(grid.size());
  std::vector<bool> seen(static_cast<std::size_t>(grid.size()), false);
  for (const auto& [digits, v] : rows) {
    Index i = 0;
    for (int d : digits) i = i * M + d;
    if (seen[static_cast<std::size_t>(i)]) throw ParseError("torus node listed twice");
    seen[static_cast<std::size_t>(i)] = true;
    values(i) = v;
  }
  return TorusFunction(grid, std::move(values));
}

void write_torus_csv(std::ostream& out, const TorusFunction& F) {
  const int n = F.grid.dim();
  for (int j = 0; j < n; ++j) out << 'j' << (j + 1) << ',';
  out << "re,im\n";
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (Index i = 0; i < F.grid.size(); ++i) {
    F.grid.node_digits(i, digits);
    for (int d : digits) out << d << ',';
    out << g17(F.values(i).real()) << ',' << g17(F.values(i).imag()) << '\n';
  }
}

Json symbol_to_json(const Symbol& sigma) {
  Json j;
  j["n"] = sigma.dim();
  j["order"] = optional_number(sigma.declared_order());
  switch (sigma.kind()) {
    case Symbol::Kind::Expr:
      j["kind"] = "expr";
      j["expr"] = sigma.expression().to_string();
      break;
    case Symbol::Kind::Builtin: {
      j["kind"] = "builtin";
      Json params = Json::object();
      for (const auto& [key, value] : sigma.builtin().params) params[key] = value;
      j["builtin"] = {{"name", sigma.builtin().name}, {"params", params}};
      break;
    }
    case Symbol::Kind::Grid: {
      const GridData& g = sigma.grid_data();
      Json values = Json::array();
      for (Index i = 0; i < g.samples.rows(); ++i) {
        for (Index c = 0; c < g.samples.cols(); ++c) values.push_back(complex_json(g.samples(i, c)));
      }
      j["kind"] = "grid";
      j["grid"] = {{"window", window_json(g.window)},
                   {"grid", grid_json(g.grid)},
                   {"interior_margin", g.interior_margin},
                   {"values", std::move(values)}};
      break;
    }
  }
  return j;
}

Symbol symbol_from_json(const Json& j) {
  return guarded([&] {
    const int n = j.at("n").get<int>();
    std::optional<double> order;
    if (j.contains("order") && !j.at("order").is_null()) order = j.at("order").get<double>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "expr") return parse_symbol(j.at("expr").get<std::string>(), n, order);
    if (kind == "builtin") {
      const Json& b = j.at("builtin");
      BuiltinSpec spec{b.at("name").get<std::string>(), {}};
      if (b.contains("params")) {
        for (const auto& [key, value] : b.at("params").items()) spec.params[key] = value.get<double>();
      }
      try {
        return Symbol::from_builtin(n, spec, order);
      } catch (const DomainError& e) {
        throw ParseError(e.what());
      }
    }
    if (kind == "grid") {
      const Json& g = j.at("grid");
      const LatticeWindow w(g.at("window").at("n").get<int>(), g.at("window").at("N").get<int>());
      const TorusGrid grid(g.at("grid").at("n").get<int>(), g.at("grid").at("M").get<int>());
      if (w.dim() != n || grid.dim() != n) throw ParseError("grid symbol dimensions disagree");
      const Json& values = g.at("values");
      if (values.size() != static_cast<std::size_t>(w.size() * grid.size())) {
        throw ParseError("grid symbol has the wrong number of values");
      }
      Matrix samples(w.size(), grid.size());
      std::size_t at = 0;
      for (Index i = 0; i < w.size(); ++i) {
        for (Index c = 0; c < grid.size(); ++c) samples(i, c) = complex_from(values[at++]);
      }
      const int margin = g.contains("interior_margin") ? g.at("interior_margin").get<int>() : w.half_width() / 4;
      return Symbol::from_samples(w, grid, samples, order, margin);
    }
    throw ParseError("unknown symbol kind '" + kind + "'");
  });
}

Json matrix_to_json(const OperatorMatrix& A) {
  Json entries = Json::array();
  for (Index r = 0; r < A.entries.rows(); ++r) {
    for (Index c = 0; c < A.entries.cols(); ++c) entries.push_back(complex_json(A.entries(r, c)));
  }
  return {{"window", window_json(A.window)}, {"grid", grid_json(A.grid)}, {"entries", std::move(entries)}};
}

OperatorMatrix matrix_from_json(const Json& j) {
  return guarded([&] {
    const LatticeWindow w(j.at("window").at("n").get<int>(), j.at("window").at("N").get<int>());
    const TorusGrid g(j.at("grid").at("n").get<int>(), j.at("grid").at("M").get<int>());
    const Json& entries = j.at("entries");
    if (entries.size() != static_cast<std::size_t>(w.size() * w.size())) {
      throw ParseError("matrix has the wrong number of entries");
    }
    Matrix A(w.size(), w.size());
    std::size_t at = 0;
    for (Index r = 0; r < w.size(); ++r) {
      for (Index c = 0; c < w.size(); ++c) A(r, c) = complex_from(entries[at++]);
    }
    return OperatorMatrix{w, g, std::move(A)};
  });
}

void write_matrix_binary(std::ostream& out, const OperatorMatrix& A) {
  out.write("OPMATRX1", 8);
  put_u32(out, static_cast<std::uint32_t>(A.window.dim()));
  put_u32(out, static_cast<std::uint32_t>(A.window.half_width()));
  put_u32(out, static_cast<std::uint32_t>(A.grid.points_per_axis()));
  for (Index r = 0; r < A.entries.rows(); ++r) {
    for (Index c = 0; c < A.entries.cols(); ++c) {
      put_f64(out, A.entries(r, c).real());
      put_f64(out, A.entries(r, c).imag());
    }
  }
}

OperatorMatrix read_matrix_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, "OPMATRX1", 8) != 0) {
    throw ParseError("not an operator matrix file");
  }
  const auto n = static_cast<std::int32_t>(get_u32(in));
  const auto N = static_cast<std::int32_t>(get_u32(in));
  const auto M = static_cast<std::int32_t>(get_u32(in));
  const LatticeWindow w(n, N);
  const TorusGrid g(n, M);
  Matrix A(w.size(), w.size());
  for (Index r = 0; r < w.size(); ++r) {
    for (Index c = 0; c < w.size(); ++c) {
      const double re = get_f64(in);
      A(r, c) = Complex(re, get_f64(in));
    }
  }
  return {w, g, std::move(A)};
}

Json to_json(const EllipticityReport& r) {
  return {{"elliptic", r.elliptic},
          {"C", r.C},
          {"M_radius", r.M_radius},
          {"shells", r.shells},
          {"min_ratio_profile", r.min_ratio_profile}};
}

Json to_json(const OrderEstimate& r) {
  Json table = Json::array();
  for (const ShellFit& f : r.table) {
    Json sups = Json::array();
    for (double v : f.shell_sups) sups.push_back(v);
    table.push_back({{"alpha", f.alpha},
                     {"beta", f.beta},
                     {"slope", finite_or_null(f.slope)},
                     {"residual", f.residual},
                     {"vanishing", f.vanishing},
                     {"shells", f.shells},
                     {"shell_sups", sups}});
  }
  return {{"m_hat", finite_or_null(r.m_hat)}, {"table", std::move(table)}};
}

Json to_json(const SpectrumReport& r) {
  return {{"description", r.description},
          {"windows", r.windows},
          {"singular_values", r.singular_values},
          {"fit_exponent", r.fit_exponent},
          {"threshold", r.threshold},
          {"small_counts", r.small_counts}};
}

Json to_json(const DecayReport& r) {
  Json profiles = Json::array();
  for (const auto& p : r.profiles) {
    profiles.push_back({{"p", p.p}, {"shell_sups", p.shell_sups}, {"eventually_decreasing", p.eventually_decreasing}});
  }
  return {{"shells", r.shells}, {"floor", r.floor}, {"profiles", std::move(profiles)}, {"schwartz_like", r.schwartz_like}};
}

Json to_json(const ADNReport& r) {
  return {{"m", r.m},           {"N", r.N},
          {"samples", r.samples}, {"seed", r.seed},
          {"C1", r.C1},         {"C2", r.C2},
          {"C1_doubled", r.C1_doubled}, {"C2_doubled", r.C2_doubled},
          {"stable", r.stable}, {"ratios", r.ratios}};
}

Json to_json(const SolveResult& r) {
  return {{"residual_interior", r.residual_interior},
          {"residual_boundary", r.residual_boundary},
          {"iterations", r.iterations},
          {"seed", r.seed},
          {"fallback_used", r.fallback_used},
          {"history", r.history}};
}

Json to_json(const IndexReport& r) {
  return {{"windows", r.windows},
          {"dim_ker", r.dim_ker},
          {"dim_coker", r.dim_coker},
          {"svd_index", r.svd_index ? Json(*r.svd_index) : Json(nullptr)},
          {"trace_index_raw", r.trace_index_raw},
          {"trace_index", r.trace_index ? Json(*r.trace_index) : Json(nullptr)},
          {"agreement", r.agreement},
          {"gap_evidence", r.gap_evidence},
          {"elliptic", r.elliptic},
          {"tail_certified", r.tail_certified},
          {"tail_bound", r.tail_bound}};
}

Json to_json(const AtkinsonReport& r) {
  return {{"windows", r.windows},   {"count_k1", r.count_k1}, {"count_k2", r.count_k2},
          {"norm_k1", r.norm_k1},   {"norm_k2", r.norm_k2},   {"bounded", r.bounded}};
}

Json to_json(const ProbeReport& r) {
  return {{"windows", r.windows},
          {"elliptic", r.elliptic},
          {"ellipticity", to_json(r.ellipticity)},
          {"atkinson", r.atkinson ? to_json(*r.atkinson) : Json(nullptr)},
          {"near_kernel_counts", r.near_kernel_counts},
          {"consistent", r.consistent}};
}

Json to_json(const EmbeddingReport& r) {
  return {{"s", r.s}, {"t", r.t}, {"max_ratio", r.max_ratio}, {"holds", r.holds}, {"ratios", r.ratios}};
}

Json to_json(const BoundednessReport& r) {
  return {{"s", r.s}, {"m", r.m}, {"max_ratio", r.max_ratio}, {"ratios", r.ratios}};
}

Json to_json(const S0Diagnostic& r) {
  Json orders = Json::array();
  for (const auto& p : r.by_order) {
    orders.push_back({{"order", p.p}, {"shell_sups", p.shell_sups}, {"eventually_decreasing", p.eventually_decreasing}});
  }
  return {{"shells", r.shells}, {"by_order", std::move(orders)}, {"decays", r.decays}};
}

}  // namespace lpdo

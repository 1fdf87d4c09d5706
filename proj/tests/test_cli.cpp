#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "support.hpp"

using namespace lpdo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("lpdo_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome run(const std::string& args) {
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = std::string(LPDO_CLI) + " " + args + " 2>" + err.string();
  Outcome o;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) o.out.append(buf, got);
  const int status = ::pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.err = slurp(err);
  return o;
}

std::string symbol_file(const char* name) { return std::string(LPDO_SYMBOLS) + "/" + name; }

fs::path write_sequence(const std::string& name, const LatticeSequence& f) {
  const fs::path p = scratch() / name;
  std::ofstream out(p);
  write_sequence_csv(out, f);
  return p;
}

LatticeSequence read_sequence(const fs::path& p) {
  std::ifstream in(p);
  return read_sequence_csv(in);
}

}  // namespace

TEST_CASE("apply with the unit symbol returns the input") {
  std::mt19937_64 rng(1);
  const LatticeSequence f = testing::random_sequence(LatticeWindow(1, 8), rng);
  const fs::path in = write_sequence("f.csv", f);
  const fs::path out = scratch() / "g.csv";
  const Outcome o = run("apply --expr 1 --input " + in.string() + " --out " + out.string());
  REQUIRE(o.code == 0);
  CHECK(testing::rel(read_sequence(out).values, f.values) < 1e-14);
  const Json report = Json::parse(o.out);
  CHECK(report["config"]["seed"] == 42);
  CHECK(report["config"]["M"] == 19);
  CHECK(report["result"]["norm_in"].get<double>() == doctest::Approx(f.norm()));
  CHECK(report.contains("timestamp"));
}

TEST_CASE("apply with the shift symbol moves a delta") {
  const fs::path in = write_sequence("d.csv", LatticeSequence::delta(LatticeWindow(1, 4), Point{0}));
  const fs::path out = scratch() / "shifted.csv";
  const Outcome o = run("apply --expr 'exp(i*twopi*x1)' --input " + in.string() + " --out " + out.string());
  REQUIRE(o.code == 0);
  const LatticeSequence g = read_sequence(out);
  CHECK(std::abs(g.at(Point{-1}) - 1.0) < 1e-14);
  CHECK(std::abs(g.at(Point{0})) < 1e-14);
}

TEST_CASE("apply matches the library bit for bit") {
  std::mt19937_64 rng(2);
  const LatticeWindow w(1, 12);
  const LatticeSequence f = testing::random_sequence(w, rng);
  const fs::path in = write_sequence("r.csv", f);
  const fs::path out = scratch() / "r_out.csv";
  REQUIRE(run("apply --symbol " + symbol_file("bessel2.json") + " --input " + in.string() + " --out " + out.string()).code == 0);
  const LatticeSequence lib = apply(bessel_symbol(1, 2.0), read_sequence(in), default_grid(w));
  CHECK(read_sequence(out).values == lib.values);
}

TEST_CASE("index on the shipped symbols") {
  const Json c = Json::parse(run("index --symbol " + symbol_file("constant.json") + " --no-timestamp").out);
  CHECK(c["result"]["svd_index"] == 0);
  CHECK(c["result"]["trace_index"] == 0);
  CHECK(c["result"]["agreement"] == true);
  const Json p = Json::parse(run("index --symbol " + symbol_file("jump_plus.json") + " --windows 16 32").out);
  CHECK(p["result"]["svd_index"] == 1);
  CHECK(p["config"]["windows"] == Json::array({16, 32}));
  const Json m = Json::parse(run("index --symbol " + symbol_file("jump_minus.json") + " --windows 16 32").out);
  CHECK(m["result"]["svd_index"] == -1);
  const Outcome d = run("index --symbol " + symbol_file("decaying.json"));
  CHECK(d.code == 0);
  const Json dj = Json::parse(d.out);
  CHECK(dj["result"]["svd_index"].is_null());
  CHECK(dj["result"]["trace_index"].is_null());
  CHECK(dj["result"]["probe"]["elliptic"] == false);
  CHECK(dj["result"]["probe"]["consistent"] == true);
}

TEST_CASE("verify exit codes") {
  CHECK(run("verify --suite lattice-core").code == 0);
  const Outcome f = run("verify --suite fredholm --windows 16 32 --no-timestamp");
  CHECK(f.code == 0);
  CHECK(Json::parse(f.out)["result"]["pass"] == true);
  const Outcome u = run("verify --suite nonsense");
  CHECK(u.code == 2);
  CHECK(u.out.empty());
  CHECK(Json::parse(u.err)["error"]["type"] == "UnknownSuite");
}

TEST_CASE("error exit codes") {
  const Outcome parse = run("classify --expr '1+*2'");
  CHECK(parse.code == 2);
  CHECK(Json::parse(parse.err)["error"]["type"] == "ParseError");
  CHECK(run("classify --symbol /nonexistent/file.json").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("classify --expr 1 --N notanumber").code == 2);
  const Outcome alias = run("classify --expr 1 --N 8 --M 10");
  CHECK(alias.code == 3);
  CHECK(Json::parse(alias.err)["error"]["type"] == "AliasingError");
  CHECK(run("parametrix --expr 'sin(twopi*x1)' --order 0").code == 3);
  const fs::path in = write_sequence("two.csv", LatticeSequence::delta(LatticeWindow(2, 2), Point{0, 0}));
  CHECK(run("apply --expr 1 --input " + in.string()).code == 3);
  CHECK(run("index --expr k1 --order 1").code == 3);
}

TEST_CASE("reports are byte identical without timestamps") {
  const std::string a = run("verify --no-timestamp --seed 5").out;
  const std::string b = run("verify --no-timestamp --seed 5").out;
  CHECK(a == b);
  CHECK(Json::parse(a)["config"]["seed"] == 5);
  CHECK_FALSE(Json::parse(a).contains("timestamp"));
  const fs::path copy = scratch() / "report.json";
  const Outcome c = run("--no-timestamp --seed 5 --json " + copy.string() + " verify");
  CHECK(c.code == 0);
  CHECK(slurp(copy) == c.out);
}

TEST_CASE("transform, matrix and symbol commands") {
  std::mt19937_64 rng(3);
  const LatticeSequence f = testing::random_sequence(LatticeWindow(1, 6), rng);
  const fs::path in = write_sequence("ft_in.csv", f);
  const fs::path F = scratch() / "F.csv";
  const fs::path back = scratch() / "back.csv";
  REQUIRE(run("ft --input " + in.string() + " --out " + F.string()).code == 0);
  REQUIRE(run("invft --N 6 --input " + F.string() + " --out " + back.string()).code == 0);
  CHECK(testing::rel(read_sequence(back).values, f.values) < 1e-13);

  const fs::path bin = scratch() / "A.bin";
  REQUIRE(run("assemble --expr 'k1^2' --N 4 --out " + bin.string()).code == 0);
  std::ifstream mb(bin, std::ios::binary);
  const OperatorMatrix A = read_matrix_binary(mb);
  CHECK(A.entries(0, 0).real() == doctest::Approx(16.0));

  const fs::path composed = scratch() / "pp.json";
  REQUIRE(run("compose --symbol " + symbol_file("jump_plus.json") + " --symbol2 " + symbol_file("jump_plus.json") +
              " --N 50 --out " + composed.string()).code == 0);
  CHECK(Json::parse(run("index --windows 16 32 --symbol " + composed.string()).out)["result"]["svd_index"] == 2);
  const fs::path adj = scratch() / "adj.json";
  REQUIRE(run("adjoint --symbol " + symbol_file("jump_plus.json") + " --N 50 --out " + adj.string()).code == 0);
  CHECK(Json::parse(run("index --windows 16 32 --symbol " + adj.string()).out)["result"]["svd_index"] == -1);

  const Json norm = Json::parse(run("norm --s 1 --input " + in.string()).out);
  CHECK(norm["result"]["norm"].get<double>() == doctest::Approx(sobolev_norm(1.0, f)));
  const Json cls = Json::parse(run("classify --symbol " + symbol_file("bessel2.json") + " --N 32").out);
  CHECK(cls["result"]["ellipticity"]["elliptic"] == true);
  CHECK(std::abs(cls["result"]["order_estimate"]["m_hat"].get<double>() - 2.0) < 0.1);
}

TEST_CASE("parametrix, solve and spectrum commands") {
  const fs::path plot = scratch() / "decay.csv";
  const Json p = Json::parse(run("parametrix --symbol " + symbol_file("perturbed.json") + " --N 32 --steps 3 --plot " +
                                 plot.string()).out);
  CHECK(p["result"]["residual_orders"].size() == 3);
  CHECK(p["result"]["left_residual_decay"]["schwartz_like"] == true);
  CHECK(slurp(plot).rfind("series,x,y\n", 0) == 0);

  std::mt19937_64 rng(4);
  const LatticeWindow w(1, 32);
  const fs::path rhs = write_sequence("rhs.csv", testing::random_sequence(w, rng, default_margin(w)));
  const fs::path u = scratch() / "u.csv";
  const Outcome s = run("solve --symbol " + symbol_file("perturbed.json") + " --input " + rhs.string() + " --out " +
                        u.string() + " --seed 9");
  REQUIRE(s.code == 0);
  const Json sj = Json::parse(s.out);
  CHECK(sj["result"]["solve"]["residual_interior"].get<double>() <= 1e-8);
  CHECK(sj["result"]["solve"]["seed"] == 9);
  CHECK(read_sequence(u).window.half_width() == 32);

  const fs::path sp = scratch() / "spectrum.csv";
  const Json spec = Json::parse(run("spectrum --kind smoothing --eps 1 --windows 16 32 64 --plot " + sp.string()).out);
  CHECK(spec["result"]["small_counts"].size() == 3);
  CHECK(slurp(sp).find("N64,1,1") != std::string::npos);
  CHECK(run("spectrum --kind nope").code == 2);
}

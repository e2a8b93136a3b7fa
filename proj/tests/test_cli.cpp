#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "gibc/cli.hpp"
#include "gibc/errors.hpp"
#include "gibc/io.hpp"

using namespace gibc;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / ("gibc_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) { return io::read_file(p.string()); }

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("float formatting") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(-0.0) == "0");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(-2.5e-300) == "-2.5e-300");
  CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "inf");
  for (double x : {std::numbers::pi, 1.0 / 3.0, -7.25e17, 6.02214076e23})
    CHECK(std::strtod(io::format_double(x).c_str(), nullptr) == x);
}

TEST_CASE("csv and json emitters") {
  io::CsvTable t{{"a", "b"}, {}};
  CHECK(t.str() == "a,b\n");
  t.add({"1", "m=0,k=2"});
  t.add({"say \"x\"", "2"});
  CHECK(t.str() == "a,b\n1,\"m=0,k=2\"\n\"say \"\"x\"\"\",2\n");

  io::json j{{"x", 0.1}, {"list", {1.5, 2.0}}, {"name", "q"}};
  const std::string s = io::dump_json(j);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(io::json::parse(s)["list"][1].get<double>() == 2.0);
  CHECK(s.back() == '\n');

  linalg::ComplexMatrix m(2, 2);
  m(0, 0) = {1.0, -2.0};
  m(1, 0) = 0.5;
  m(1, 1) = {0.0, 0.1};
  auto back = io::matrix_from_json(io::json::parse(io::dump_json(io::matrix_json(m))));
  CHECK((back - m).max_abs() == 0.0);
  CHECK_THROWS_AS(io::matrix_from_json(io::json::parse("[[1, 2], [3]]")), InvalidInput);
  CHECK_THROWS_AS(io::matrix_from_json(io::json::parse("[]")), InvalidInput);

  SpectrumReport empty;
  CHECK(io::spectrum_csv(empty).str() == "re_lambda,im_lambda,residual,mode_tag,multiplicity\n");
}

TEST_CASE("atomic writes") {
  const auto p = scratch() / "atomic.txt";
  io::write_atomic(p.string(), "one\n");
  io::write_atomic(p.string(), "two\n");
  CHECK(slurp(p) == "two\n");
  for (const auto& e : fs::directory_iterator(scratch()))
    CHECK(e.path().filename().string().find(".tmp.") == std::string::npos);
  CHECK_THROWS_AS(io::write_atomic((scratch() / "missing" / "x.csv").string(), "x"), IoFailure);
}

TEST_CASE("spec parsers") {
  CHECK(cli::parse_complex("0.5") == linalg::cplx{0.5, 0.0});
  CHECK(cli::parse_complex("0.5,-1") == linalg::cplx{0.5, -1.0});
  CHECK(cli::parse_complex("const:2,3") == linalg::cplx{2.0, 3.0});
  CHECK_THROWS_AS(cli::parse_complex("abc"), InvalidInput);
  CHECK_THROWS_AS(cli::parse_complex("1,2,3"), InvalidInput);
  CHECK(cli::parse_schedule("16,32,64") == std::vector<std::size_t>{16, 32, 64});
  CHECK_THROWS_AS(cli::parse_schedule("32,16"), InvalidInput);
  CHECK_THROWS_AS(cli::parse_schedule("8,8"), InvalidInput);
  CHECK_THROWS_AS(cli::parse_schedule("4.5"), InvalidInput);

  auto p = cli::parse_circle_zeta("power:a=0.3,c=2");
  CHECK(p.kind == sobolev::CoeffKind::power_singular);
  CHECK(p.a == 0.3);
  CHECK(p.strength == linalg::cplx{2.0, 0.0});
  CHECK_THROWS_AS(cli::parse_circle_zeta("power:a=1.0"), InvalidInput);
  CHECK_THROWS_AS(cli::parse_circle_zeta("power:b=0.3"), InvalidInput);
  CHECK(cli::parse_circle_zeta("1,0.5").value == linalg::cplx{1.0, 0.5});

  const auto f = scratch() / "samples.txt";
  {
    std::ofstream o(f);
    o << "# four samples\n1 0\n2, 0.5\n3\n4 0\n";
  }
  auto s = cli::parse_circle_zeta("file:" + f.string());
  CHECK(s.kind == sobolev::CoeffKind::sampled);
  CHECK(s.samples.size() == 4);
  CHECK(s.samples[1] == linalg::cplx{2.0, 0.5});
  CHECK_THROWS_AS(cli::parse_circle_zeta("file:" + (scratch() / "nope").string()), InvalidInput);

  const auto mesh = fem::square_mesh(2);
  const auto lf = scratch() / "labels.txt";
  {
    std::ofstream o(lf);
    o << "0 1\n1 0 0.5\n2 0\n3 0\n";
  }
  auto z = cli::parse_mesh_zeta("file:" + lf.string(), mesh, {"3=2,1"});
  CHECK(z.constant.at(1) == linalg::cplx{0.0, 0.5});
  CHECK(z.constant.at(3) == linalg::cplx{2.0, 1.0});
  CHECK_THROWS_AS(cli::parse_mesh_zeta("power:a=0.5", mesh), InvalidInput);
  {
    std::ofstream o(lf);
    o << "0 1\n";
  }
  CHECK_THROWS_AS(cli::parse_mesh_zeta("file:" + lf.string(), mesh), InvalidInput);
}

TEST_CASE("usage errors exit 3") {
  CHECK(run({}).code == cli::kExitInvalid);
  auto r = run({"fem", "--bogus"});
  CHECK(r.code == cli::kExitInvalid);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(run({"frobnicate"}).code == cli::kExitInvalid);
  CHECK(run({"gate", "--zeta", "power:a=1.5"}).code == cli::kExitInvalid);
  CHECK(run({"gate", "--zeta", "1", "--sections", "32,16"}).code == cli::kExitInvalid);
  CHECK(run({"gate", "--zeta", "1", "--tol", "-1"}).code == cli::kExitInvalid);
  CHECK(run({"green-check", "--fixture", "nonsense-3"}).code == cli::kExitInvalid);
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("green-check") {
  auto r = run({"green-check", "--fixture", "transport-64", "--trials", "100", "--tol", "1e-8"});
  CHECK(r.code == 0);
  CHECK(r.out.find("max defect") != std::string::npos);
  // --tol is honoured: nothing passes a zero-width tolerance.
  CHECK(run({"green-check", "--fixture", "transport-64", "--trials", "5", "--tol", "1e-300"}).code ==
        cli::kExitInvariant);
}

TEST_CASE("gate writes a csv table and a json verdict") {
  const auto out = scratch() / "gate.csv";
  auto r = run({"gate", "--zeta", "power:a=0.5", "--s", "0.5", "--sections", "16,32,64,128", "--out",
                out.string()});
  REQUIRE(r.code == 0);
  auto side = io::json::parse(slurp(scratch() / "gate.json"));
  CHECK(side["verdict"] == "compact");
  CHECK(side["tail_indicator"].size() == 4);
  CHECK(side.contains("accretivity_defect"));
  CHECK(count_lines(slurp(out)) == 1 + 33 + 65 + 129 + 257);

  const auto il = scratch() / "ilambda.json";
  CHECK(run({"gate", "--operator", "ilambda", "--sections", "8,16,32", "--out", il.string()}).code == 0);
  CHECK(io::json::parse(slurp(il))["verdict"] == "non-compact");
}

TEST_CASE("string output") {
  const auto out = scratch() / "string.csv";
  REQUIRE(run({"string", "--zeta", "0.5", "--modes", "10", "--out", out.string()}).code == 0);
  const auto text = slurp(out);
  CHECK(text.rfind("re_lambda,im_lambda,residual,mode_tag,multiplicity\n", 0) == 0);
  CHECK(count_lines(text) == 11);
  CHECK(text.find("\r") == std::string::npos);

  const auto crit = scratch() / "critical.csv";
  REQUIRE(run({"string", "--zeta", "1", "--out", crit.string()}).code == 0);
  CHECK(slurp(crit) == "re_lambda,im_lambda,residual,mode_tag,multiplicity\n");
  CHECK(io::json::parse(slurp(scratch() / "critical.json"))["critical_damping"] == true);

  CHECK(run({"string", "--zeta", "-0.5"}).code == cli::kExitInvariant);
  CHECK(run({"string", "--zeta", "-0.5", "--allow-nonaccretive"}).code == 0);
}

TEST_CASE("fem guards and outputs") {
  auto r = run({"fem", "--shape", "square", "--n", "8", "--zeta", "-1.0", "--nev", "10"});
  CHECK(r.code == cli::kExitInvariant);
  CHECK(r.err.find("allow-nonaccretive") != std::string::npos);
  CHECK(run({"fem", "--shape", "square", "--n", "8", "--zeta", "-1.0", "--nev", "10",
             "--allow-nonaccretive"})
            .code == 0);

  const auto out = scratch() / "fem.csv";
  REQUIRE(run({"fem", "--n", "6", "--zeta", "1", "--nev", "8", "--out", out.string()}).code == 0);
  CHECK(count_lines(slurp(out)) == 9);
  auto side = io::json::parse(slurp(scratch() / "fem.json"));
  CHECK(side["max_imag"].get<double>() <= 1e-8);
  CHECK(side["max_residual"].get<double>() <= 1e-8);

  // Damping on one edge through an override.
  CHECK(run({"fem", "--n", "6", "--zeta", "0", "--edge", "2=1", "--nev", "6"}).code == 0);
  CHECK(run({"fem", "--n", "4", "--zeta", "1", "--out", (scratch() / "no" / "x.csv").string()}).code ==
        cli::kExitFailure);
}

TEST_CASE("march and converge") {
  const auto out = scratch() / "march.csv";
  REQUIRE(run({"march", "--n", "6", "--zeta", "1", "--dt", "1e-2", "--steps", "50", "--out", out.string()}).code == 0);
  CHECK(count_lines(slurp(out)) == 52);
  CHECK(run({"march", "--n", "4", "--zeta", "0", "--dt", "0"}).code == cli::kExitInvalid);

  const auto cv = scratch() / "conv.json";
  REQUIRE(run({"converge", "--shape", "square", "--levels", "4,8", "--zeta", "0", "--out", cv.string()}).code == 0);
  auto j = io::json::parse(slurp(cv));
  CHECK(j["levels"].size() == 2);
  CHECK(run({"converge", "--shape", "square", "--levels", "4,8", "--zeta", "1"}).code == cli::kExitInvalid);
}

TEST_CASE("extension subcommands") {
  CHECK(run({"extension", "cayley", "--random", "16", "--count", "50"}).code == 0);
  CHECK(run({"extension", "cayley", "--z", "-1"}).code == cli::kExitInvalid);
  const auto kf = scratch() / "k.json";
  {
    std::ofstream o(kf);
    o << "[[[0.2, 0.1], 0], [0, -0.5]]\n";
  }
  CHECK(run({"extension", "mdiss", "--fixture", "sturm-24", "--k", kf.string()}).code == 0);
  CHECK(run({"extension", "mdiss", "--fixture", "transport-32", "--k", kf.string()}).code == cli::kExitInvalid);
  auto r = run({"extension", "rank", "--fixture", "transport-64", "--k1", "0.2", "--k2", "0.5,0.4", "--at", "1,2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("rank(R2-R1) = 1") != std::string::npos);
  CHECK(run({"extension"}).code == cli::kExitInvalid);
}

TEST_CASE("identical invocations give identical files") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"gate", "--zeta", "power:a=0.3", "--sections", "8,16,32"},
           {"disk", "--zeta", "0.5", "--m-max", "2", "--box", "0,10,-3,0"},
           {"fem", "--n", "5", "--zeta", "0.4,0.3", "--nev", "6"},
           {"march", "--n", "5", "--zeta", "1", "--steps", "40"}}) {
    std::vector<std::string> texts;
    for (int k = 0; k < 2; ++k) {
      auto a = args;
      const auto p = scratch() / ("det" + std::to_string(k) + ".csv");
      a.insert(a.end(), {"--out", p.string()});
      if (k == 1) ::setenv("WORKBENCH_THREADS", "1", 1);
      REQUIRE(run(a).code == 0);
      ::unsetenv("WORKBENCH_THREADS");
      texts.push_back(slurp(p) + slurp(fs::path(p).replace_extension(".json")));
    }
    CHECK(texts[0] == texts[1]);
  }
}

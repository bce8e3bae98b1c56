#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "opmatch/cli.h"
#include "opmatch/dataio.h"

using namespace opmatch;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "opmatch");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = opmatch::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "opmatch_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string str(const fs::path& p) { return p.string(); }

io::ResultRecord result_at(const fs::path& p) { return io::result_from_json(io::read_file(str(p))); }

}  // namespace

TEST_CASE("generate is reproducible") {
  const fs::path a = scratch("gen_a"), b = scratch("gen_b");
  const std::vector<std::string> common{"--case", "subset", "--r", "60", "--beta", "0.6", "--pbion", "0.7",
                                        "--fmin", "1", "--fmax", "100"};
  auto args = [&](const fs::path& dir) {
    std::vector<std::string> v{"--seed", "1", "generate"};
    v.insert(v.end(), common.begin(), common.end());
    v.push_back("--out");
    v.push_back(str(dir));
    return v;
  };
  REQUIRE(invoke(args(a)).code == 0);
  REQUIRE(invoke(args(b)).code == 0);
  for (const char* f : {"P.csv", "Q.csv", "truth.csv"}) {
    CHECK(io::read_file(str(a / f)) == io::read_file(str(b / f)));
  }
  CHECK(io::load_dataset(str(a / "P.csv")).size() == 60);

  const fs::path c = scratch("gen_c");
  CHECK(invoke({"--seed", "2", "generate", "--case", "intersect", "--r", "100", "--out", str(c)}).code == 0);
  CHECK(fs::exists(c / "truth.csv"));

  CHECK(invoke({"generate", "--case", "subset", "--beta", "1.5", "--out", str(c)}).code == 2);
  CHECK(invoke({"generate", "--case", "subset", "--r", "50", "--extent", "5", "--out", str(c)}).code == 2);
  CHECK(invoke({"generate", "--case", "nope", "--out", str(c)}).code == 2);
}

TEST_CASE("attack, eval and exit codes") {
  const fs::path d = scratch("attack");
  REQUIRE(invoke({"--seed", "3", "generate", "--case", "subset", "--r", "6", "--out", str(d)}).code == 0);
  const std::string P = str(d / "P.csv"), Q = str(d / "Q.csv"), T = str(d / "truth.csv");

  Run ex = invoke({"attack", "--p", P, "--q", Q, "--truth", T, "--algo", "exact", "--weight", "kappa-diff",
                "--out", str(d / "exact.json")});
  REQUIRE(ex.code == 0);
  const io::ResultRecord er = result_at(d / "exact.json");
  REQUIRE(er.proof_of_optimality);
  CHECK(*er.proof_of_optimality);
  REQUIRE(er.metrics);
  CHECK(er.metrics->normalized_objective == Rational(1));
  CHECK(er.q_points.size() == io::load_dataset(Q).size());

  // Same inputs twice: identical documents apart from the runtime field.
  REQUIRE(invoke({"attack", "--p", P, "--q", Q, "--algo", "monotone-mix", "--index", "kd-tree", "--out",
               str(d / "kd.json")}).code == 0);
  REQUIRE(invoke({"attack", "--p", P, "--q", Q, "--algo", "monotone-mix", "--index", "naive", "--out",
               str(d / "naive.json")}).code == 0);
  CHECK(result_at(d / "kd.json").objective == result_at(d / "naive.json").objective);
  REQUIRE(invoke({"--seed", "9", "attack", "--p", P, "--q", Q, "--algo", "minconflict-sampled", "--k", "4",
               "--out", str(d / "s1.json")}).code == 0);
  REQUIRE(invoke({"--seed", "9", "attack", "--p", P, "--q", Q, "--algo", "minconflict-sampled", "--k", "4",
               "--out", str(d / "s2.json")}).code == 0);
  io::ResultRecord s1 = result_at(d / "s1.json"), s2 = result_at(d / "s2.json");
  s1.runtime_seconds = s2.runtime_seconds = 0;
  CHECK(io::result_to_json(s1) == io::result_to_json(s2));

  for (const char* algo : {"oned", "minconflict", "monotone-inc", "monotone-dec"}) {
    CHECK(invoke({"attack", "--p", P, "--q", Q, "--algo", algo, "--out", str(d / "x.json")}).code == 0);
  }
  CHECK(invoke({"attack", "--p", P, "--q", Q, "--algo", "minconflict-scaled", "--weight", "min", "--eps", "0.5",
             "--out", str(d / "x.json")}).code == 0);

  // eval: an assignment equal to the truth scores 1.
  io::ResultRecord perfect = er;
  const Dataset Qd = io::load_dataset(Q);
  const Truth truth = io::load_truth(T, Qd);
  perfect.assignment = Assignment(truth.begin(), truth.end());
  io::write_file(str(d / "perfect.json"), io::result_to_json(perfect));
  Run e = invoke({"eval", "--result", str(d / "perfect.json"), "--p", P, "--q", Q, "--truth", T});
  REQUIRE(e.code == 0);
  CHECK(e.out.find("\"point_recovery\": {\n    \"exact\": \"1\"") != std::string::npos);
  CHECK(e.out.find("\"record_recovery\": {\n    \"exact\": \"1\"") != std::string::npos);

  CHECK(invoke({"attack", "--p", P, "--q", Q, "--algo", "minconflict-scaled", "--weight", "unit"}).code == 2);
  CHECK(invoke({"attack", "--p", P, "--q", Q, "--algo", "minconflict-sampled"}).code == 2);
  CHECK(invoke({"attack", "--p", P, "--q", Q, "--algo", "bogus"}).code == 2);
  CHECK(invoke({"attack", "--p", P, "--q", Q, "--weight", "heavy"}).code == 2);
  CHECK(invoke({"attack", "--p", str(d / "missing.csv"), "--q", Q}).code == 2);
  CHECK(invoke({"attack", "--p", P, "--q", Q, "--algo", "exact", "--max-points", "1"}).code == 3);
  CHECK(invoke({"attack", "--p", P}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("oned on a permutation-block instance recovers nothing") {
  const fs::path d = scratch("blocks");
  REQUIRE(invoke({"generate", "--case", "blocks", "--block-size", "3", "--block-index", "4", "--out", str(d)}).code ==
          0);
  const std::string P = str(d / "P.csv"), Q = str(d / "Q.csv"), T = str(d / "truth.csv");
  REQUIRE(invoke({"attack", "--p", P, "--q", Q, "--truth", T, "--algo", "oned", "--out", str(d / "r.json")}).code == 0);
  CHECK(result_at(d / "r.json").metrics->point_recovery == 0);
  REQUIRE(invoke({"attack", "--p", P, "--q", Q, "--truth", T, "--algo", "exact", "--out", str(d / "e.json")}).code ==
          0);
  CHECK(result_at(d / "e.json").metrics->point_recovery == 1);
}

TEST_CASE("bench and oracle-check") {
  const fs::path d = scratch("bench");
  Run b = invoke({"bench", "--sizes", "30,10,20", "--seeds", "2", "--algos", "monotone-mix,oned", "--out",
               str(d / "bench.csv")});
  REQUIRE(b.code == 0);
  std::istringstream in(io::read_file(str(d / "bench.csv")));
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("size,seed,algorithm", 0) == 0);
  std::size_t rows = 0, last = 0;
  while (std::getline(in, line)) {
    const std::size_t size = std::stoul(line.substr(0, line.find(',')));
    CHECK(size >= last);
    last = size;
    ++rows;
  }
  CHECK(rows == 12);

  Run o = invoke({"--seed", "5", "oracle-check", "--size-cap", "5", "--trials", "20"});
  CHECK(o.code == 0);
  CHECK(o.out.find("FAIL") == std::string::npos);
  CHECK(o.out.find("pass exact") != std::string::npos);
}

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "util.hpp"

using coref::test::data_path;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::string temp_path(const std::string& suffix) {
  std::random_device rd;
  return (std::filesystem::temp_directory_path() / ("coref_test_" + std::to_string(rd()) + suffix)).string();
}

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = coref::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("minimize") {
    Result r = run({"minimize", data_path("fig2.coalg")});
    CHECK(r.code == 0);
    CHECK(r.out == "{c1}\n{c2}\n{c3}\n{s1}\n{t1}\n{t2}\n");
    CHECK(r.err.empty());

    Result naive = run({"minimize", "--algorithm", "naive", data_path("fig2.coalg")});
    CHECK(naive.out == r.out);

    Result q = run({"minimize", data_path("sym2.coalg"), "--output", "quotient"});
    CHECK(q.code == 0);
    CHECK(q.out == "functor D(X)\nstate B0 = {B0: 1}\n");

    Result stats = run({"minimize", data_path("fig2.coalg"), "--output", "stats", "--audit"});
    CHECK(stats.code == 0);
    CHECK(stats.out.find("max_splitter_entries: ") != std::string::npos);
  }

  TEST_CASE("minimize to a file") {
    std::string path = temp_path(".txt");
    Result r = run({"minimize", data_path("chain3.coalg"), "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "{x}\n{y,z}\n");
    std::filesystem::remove(path);
  }

  TEST_CASE("input errors") {
    std::string path = temp_path(".coalg");
    {
      std::ofstream f(path);
      f << "functor P(X\nstate a = {}\n";
    }
    Result bad = run({"minimize", path});
    CHECK(bad.code == 1);
    CHECK(bad.out.empty());
    CHECK(bad.err.find(":1:12: ") != std::string::npos);
    std::filesystem::remove(path);

    CHECK(run({"minimize", "/nonexistent/file"}).code == 1);
    CHECK(run({"minimize", data_path("fig2.coalg"), "--algorithm", "fast"}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"--help"}).code == 0);
  }

  TEST_CASE("compare") {
    Result r = run({"compare", data_path("fig2.coalg"), data_path("pfpf.coalg"), data_path("segala.coalg")});
    CHECK(r.code == 0);
    CHECK(r.out.find("MISMATCH") == std::string::npos);
  }

  TEST_CASE("gen") {
    std::vector<std::string> args{"gen", "--functor", "P({a,b} x X)", "--states", "100", "--density", "3", "--seed", "7"};
    Result a = run(args);
    Result b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(coref::parse_coalgebra(a.out).root_count() == 100);

    CHECK(run({"gen", "--states", "0"}).code == 1);
    CHECK(run({"gen", "--functor", "P(X"}).code == 1);
    CHECK(run({"gen", "--density", "-2"}).code == 1);
  }

  TEST_CASE("bench") {
    Result one = run({"bench", data_path("fig2.coalg")});
    CHECK(one.code == 0);
    CHECK(one.out.rfind("input,n,m,states,seconds,max_counter,bound,ok\n", 0) == 0);
    CHECK(std::count(one.out.begin(), one.out.end(), '\n') == 2);

    Result ladder = run({"bench", "--ladder", "4:6", "--density", "2", "--seed", "3"});
    CHECK(ladder.code == 0);
    CHECK(std::count(ladder.out.begin(), ladder.out.end(), '\n') == 4);

    Result broken = run({"bench", data_path("fig2.coalg"), "--max-counter-bound", "0"});
    CHECK(broken.code == 2);
    CHECK(broken.err.find("exceeds bound") != std::string::npos);

    CHECK(run({"bench", "--ladder", "9:3"}).code == 1);
  }
}

#include "coref/generator.hpp"
#include "coref/oracle.hpp"
#include "coref/refiner.hpp"
#include "doctest.h"
#include "util.hpp"

using namespace coref;
using coref::test::blocks;
using coref::test::load;

namespace {

StateId inner(const Encoding& enc, const char* root) { return enc.out_edges(*enc.find(root))[0].target; }

BlockId block_with(const Refiner& r, std::initializer_list<StateId> states) {
  BlockId b = r.partition().block_of(*states.begin());
  for (StateId x : states) REQUIRE(r.partition().block_of(x) == b);
  REQUIRE(r.partition().size(b) == states.size());
  return b;
}

}  // namespace

TEST_SUITE("refiner") {
  TEST_CASE("initial partition groups by sort and type") {
    Encoding enc = load("fig2.coalg");
    Refiner r(enc);
    CHECK(blocks(enc, r.root_partition()) == "{c1,c2}\n{c3}\n{s1}\n{t1,t2}\n");
    CHECK(r.partition().block_count() == 6);
    r.audit();
  }

  TEST_CASE("figure system: manual splitters") {
    Encoding enc = load("fig2.coalg");
    auto id = [&](const char* name) { return *enc.find(name); };
    StateId it1 = inner(enc, "t1"), it2 = inner(enc, "t2"), is1 = inner(enc, "s1");
    StateId ic1 = inner(enc, "c1"), ic2 = inner(enc, "c2"), ic3 = inner(enc, "c3");
    Refiner r(enc);
    r.set_audit_each_step(true);

    r.split(r.choose_splitter(block_with(r, {is1, ic3})));
    r.split(r.choose_splitter(block_with(r, {id("s1")})));
    CHECK(r.partition().block_of(ic1) != r.partition().block_of(ic2));
    r.split(r.choose_splitter(block_with(r, {id("c3")})));
    CHECK(r.partition().block_of(it1) == r.partition().block_of(it2));
    CHECK(r.partition().block_of(it1) != r.partition().block_of(ic2));
    r.split(r.choose_splitter(block_with(r, {ic1})));
    CHECK(blocks(enc, r.root_partition()) == "{c1}\n{c2}\n{c3}\n{s1}\n{t1,t2}\n");
    r.split(r.choose_splitter(block_with(r, {ic2})));
    r.split(r.choose_splitter(block_with(r, {it1, it2})));
    r.split(r.choose_splitter(block_with(r, {id("t1"), id("t2")})));

    SplitterChoice c1 = r.choose_splitter(block_with(r, {id("c1")}));
    CHECK(c1.compound_size == 2);
    r.split(c1);
    CHECK(r.partition().block_of(it1) != r.partition().block_of(it2));
    CHECK(r.partition().block_of(id("t1")) == r.partition().block_of(id("t2")));

    r.split(r.choose_splitter(r.partition().block_of(it2)));
    CHECK(r.partition().block_of(id("t1")) != r.partition().block_of(id("t2")));

    r.run();
    CHECK(blocks(enc, r.root_partition()) == "{c1}\n{c2}\n{c3}\n{s1}\n{t1}\n{t2}\n");
  }

  TEST_CASE("choose_splitter rejects bad choices") {
    Encoding enc = load("fig2.coalg");
    Refiner r(enc);
    BlockId big = r.partition().block_of(inner(enc, "t1"));
    CHECK(r.partition().size(big) == 4);
    CHECK_NOTHROW(r.choose_splitter(big));
    CHECK_THROWS_AS(r.choose_splitter(big), std::invalid_argument);
    CHECK_THROWS_AS(r.choose_splitter(999), std::invalid_argument);

    Encoding two = parse_coalgebra("functor P(X)\nstate a = {b}\nstate b = {}\nstate c = {b}\n");
    Refiner q(two);
    CHECK_THROWS_AS(q.choose_splitter(q.partition().block_of(0)), std::invalid_argument);
  }

  TEST_CASE("select takes the smaller of the first two members") {
    Encoding enc = parse_coalgebra("functor P(X)\nstate a = {b}\nstate b = {}\nstate c = {b}\nstate d = {a}\n");
    Refiner r(enc);
    auto choice = r.select_splitter();
    REQUIRE(choice);
    CHECK(r.partition().size(choice->subblock) == 1);
    CHECK(r.partition().elements(choice->subblock)[0] == 1);
    CHECK(choice->compound_size == 4);
  }

  TEST_CASE("splitter without predecessors changes nothing") {
    Encoding enc = parse_coalgebra("functor P(X)\nstate a = {a}\nstate b = {a}\nstate c = {}\n");
    Refiner r(enc);
    // c has no predecessors and is the smaller block
    auto choice = r.select_splitter();
    REQUIRE(choice);
    CHECK(r.partition().elements(choice->subblock)[0] == 2);
    std::size_t before = r.partition().block_count();
    r.split(*choice);
    CHECK(r.partition().block_count() == before);
    r.audit();
  }

  TEST_CASE("two of three predecessors leave together") {
    Encoding enc = parse_coalgebra("functor P(X)\nstate a = {s}\nstate b = {s}\nstate c = {c}\nstate s = {}\n");
    Refiner r(enc);
    CHECK(r.partition().block_count() == 2);
    REQUIRE(r.step());
    CHECK(r.partition().block_count() == 3);
    CHECK(r.partition().block_of(0) == r.partition().block_of(1));
    CHECK(r.partition().block_of(0) != r.partition().block_of(2));
    r.audit();
  }

  TEST_CASE("corpus") {
    struct Case {
      const char* file;
      const char* expected;
    };
    for (const Case& c : {
             Case{"fig2.coalg", "{c1}\n{c2}\n{c3}\n{s1}\n{t1}\n{t2}\n"},
             Case{"chain3.coalg", "{x}\n{y,z}\n"},
             Case{"sym2.coalg", "{u,v}\n"},
             Case{"dfa.coalg", "{q0,q2}\n{q1}\n"},
             Case{"segala.coalg", "{p,q,u}\n{r}\n{s}\n{t,t2}\n"},
             Case{"lumping.coalg", "{x1,x2}\n{y}\n{z1,z2,z3}\n"},
             Case{"bag.coalg", "{p,p2}\n{q,q2}\n{r,r2}\n"},
         }) {
      CAPTURE(c.file);
      Encoding enc = load(c.file);
      Refiner r(enc);
      r.set_audit_each_step(true);
      r.run();
      CHECK(blocks(enc, r.root_partition()) == c.expected);
      CHECK(r.max_splitter_entries() <= r.splitter_bound());
    }
  }

  TEST_CASE("nested powerset example") {
    Encoding enc = load("pfpf.coalg");
    Refiner r(enc);
    r.set_audit_each_step(true);
    r.run();
    Partition p = r.root_partition();
    std::vector<std::uint32_t> block(enc.root_count());
    for (std::uint32_t i = 0; i < p.size(); ++i) {
      for (StateId x : p[i]) block[x] = i;
    }
    CHECK(block[*enc.find("a1")] != block[*enc.find("b1")]);
    CHECK(same_partition(p, naive_refine(enc).partition));
    CHECK(blocks(enc, p) == "{a1}\n{a2,a7,b2,b6}\n{a3,b5}\n{a4,a6,b4,b7}\n{a5,b3}\n{b1}\n");
  }

  TEST_CASE("invariants hold on random systems") {
    for (const char* functor : {"P({a,b} x X)", "D(X)", "R(X)", "B(X)", "{acc,rej} x X^2", "P({a} x D(X))",
                                "{0,1} x P(P(X))", "X + X x X", "B(X) x R({u,v} x X)"}) {
      for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        CAPTURE(functor);
        CAPTURE(seed);
        GeneratorOptions g{.functor = functor, .states = 4 + seed * 3, .density = 1.5, .seed = seed,
                           .twins = seed % 2 == 0};
        Encoding enc = parse_coalgebra(generate_coalgebra(g));
        Refiner r(enc);
        r.set_audit_each_step(true);
        std::size_t blocks_before = r.partition().block_count();
        while (r.step()) {
          CHECK(r.partition().block_count() >= blocks_before);
          blocks_before = r.partition().block_count();
        }
        CHECK(same_partition(r.root_partition(), naive_refine(enc).partition));
        CHECK(r.max_splitter_entries() <= r.splitter_bound());
      }
    }
  }

  TEST_CASE("empty system") {
    Encoding enc = parse_coalgebra("functor P(X)\n");
    Refiner r(enc);
    CHECK_FALSE(r.step());
    CHECK(r.root_partition().empty());
    CHECK(refine(enc).empty());
  }

  TEST_CASE("stats") {
    Encoding enc = load("fig2.coalg");
    Refiner r(enc);
    r.run();
    std::string s = r.stats();
    for (const char* key : {"states: 12\n", "roots: 6\n", "edges: 13\n", "iterations: ", "max_splitter_entries: ",
                            "splitter_bound: 3\n", "histogram: ", "seconds: "}) {
      CHECK(s.find(key) != std::string::npos);
    }
    CHECK(r.iterations() > 0);
  }
}

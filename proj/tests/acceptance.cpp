// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "coref/axioms.hpp"
#include "coref/encoding.hpp"
#include "coref/generator.hpp"
#include "coref/oracle.hpp"
#include "coref/refiner.hpp"

using namespace coref;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string read(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Largest splitter counter relative to its bound, over every refiner run of criteria 1-3.
struct CounterLog {
  std::size_t runs = 0;
  std::size_t violations = 0;
  std::uint32_t worst_counter = 0;
  std::string first_violation;

  void record(const Refiner& r, const std::string& what) {
    ++runs;
    worst_counter = std::max(worst_counter, r.max_splitter_entries());
    if (r.max_splitter_entries() > r.splitter_bound()) {
      if (violations++ == 0) {
        first_violation = what + ": counter " + std::to_string(r.max_splitter_entries()) + " > bound " +
                          std::to_string(r.splitter_bound());
      }
    }
  }
};

CounterLog counters;
std::vector<std::pair<std::string, std::string>> determinism_inputs;

std::uint32_t block_index(const Partition& p, StateId x) {
  for (std::uint32_t i = 0; i < p.size(); ++i) {
    if (std::find(p[i].begin(), p[i].end(), x) != p[i].end()) return i;
  }
  return ~0u;
}

Outcome golden_example() {
  Outcome o;
  const std::string text = read(fs::path(COREF_TEST_DATA) / "fig2.coalg");
  determinism_inputs.emplace_back("fig2.coalg", text);
  Encoding enc = parse_coalgebra(text);
  auto id = [&](const char* n) { return *enc.find(n); };
  auto inner = [&](const char* n) { return enc.out_edges(id(n))[0].target; };

  Refiner r(enc);
  std::string initial = format_partition(enc, r.root_partition());
  if (initial != "{c1,c2}\n{c3}\n{s1}\n{t1,t2}\n") {
    o.pass = false;
    o.detail += "initial partition " + initial + "; ";
  }

  // the instrumented run: drive the splitters by hand up to the {c1} in {c1,c2} step
  r.set_audit_each_step(true);
  auto block = [&](std::initializer_list<StateId> states) { return r.partition().block_of(*states.begin()); };
  for (auto states : std::vector<std::vector<StateId>>{{inner("s1"), inner("c3")},
                                                       {id("s1")},
                                                       {id("c3")},
                                                       {inner("c1")},
                                                       {inner("c2")},
                                                       {inner("t1"), inner("t2")},
                                                       {id("t1"), id("t2")}}) {
    r.split(r.choose_splitter(r.partition().block_of(states[0])));
  }
  SplitterChoice c1 = r.choose_splitter(block({id("c1")}));
  auto members = r.partition().elements(c1.subblock);
  bool splitter_ok = members.size() == 1 && members[0] == id("c1") && c1.compound_size == 2;
  r.split(c1);
  bool successors_split = r.partition().block_of(inner("t1")) != r.partition().block_of(inner("t2"));
  r.split(r.choose_splitter(r.partition().block_of(inner("t2"))));
  bool t_split = r.partition().block_of(id("t1")) != r.partition().block_of(id("t2"));
  if (!splitter_ok || !successors_split || !t_split) {
    o.pass = false;
    o.detail += "S={c1} in C={c1,c2} did not separate t1 from t2; ";
  }
  r.run();
  counters.record(r, "fig2 manual");

  // timed end-to-end run; best of five to keep scheduler noise out
  double best = 1e9;
  Partition final_partition;
  for (int i = 0; i < 5; ++i) {
    auto start = Clock::now();
    Encoding e = parse_coalgebra(text);
    Refiner fresh(e);
    fresh.run();
    final_partition = fresh.root_partition();
    best = std::min(best, since(start));
    counters.record(fresh, "fig2");
  }
  std::string singletons = "{c1}\n{c2}\n{c3}\n{s1}\n{t1}\n{t2}\n";
  if (format_partition(enc, final_partition) != singletons ||
      format_partition(enc, naive_refine(enc).partition) != singletons) {
    o.pass = false;
    o.detail += "final partition not six singletons; ";
  }
  if (best >= 1e-3) {
    o.pass = false;
    o.detail += "took " + std::to_string(best * 1e3) + " ms; ";
  }
  o.detail += "initial {c1,c2},{c3},{s1},{t1,t2}; S={c1} in {c1,c2} separates the successor sets of t1 and t2, "
              "whose follow-up split separates t1 from t2; six singletons in " +
              std::to_string(best * 1e6) + " us";
  return o;
}

Outcome nested_powerset() {
  Outcome o;
  const std::string text = read(fs::path(COREF_TEST_DATA) / "pfpf.coalg");
  determinism_inputs.emplace_back("pfpf.coalg", text);
  Encoding enc = parse_coalgebra(text);
  Refiner r(enc);
  r.run();
  counters.record(r, "pfpf");
  Partition fast = r.root_partition();
  Partition slow = naive_refine(enc).partition;
  StateId a1 = *enc.find("a1"), b1 = *enc.find("b1");
  bool apart = block_index(fast, a1) != block_index(fast, b1);
  bool oracle_apart = block_index(slow, a1) != block_index(slow, b1);
  o.pass = apart && oracle_apart && same_partition(fast, slow);
  o.detail = std::string("a1/b1 ") + (apart ? "separated" : "merged") + " by the refiner, " +
             (oracle_apart ? "separated" : "merged") + " by the oracle, partitions " +
             (same_partition(fast, slow) ? "equal" : "differ") + " (" + std::to_string(fast.size()) + " blocks)";
  return o;
}

Outcome oracle_fuzz() {
  Outcome o;
  auto start = Clock::now();
  std::size_t total = 0;
  std::size_t failures = 0;
  std::size_t merged = 0;
  std::string first;
  const std::vector<std::pair<const char*, double>> families{
      {"P({a,b} x X)", 1.5}, {"D(X)", 1.5},     {"R(X)", 1.5},           {"B(X)", 1.5},
      {"{acc,rej} x X^2", 0}, {"P({a} x D(X))", 1.2}, {"{0,1} x P(P(X))", 1.2}};
  for (const auto& [functor, density] : families) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      GeneratorOptions g{.functor = functor,
                         .states = 1 + (seed * 37) % 64,
                         .density = density,
                         .weight_range = 3,
                         .seed = seed,
                         .twins = seed % 2 == 0};
      std::string text = generate_coalgebra(g);
      determinism_inputs.emplace_back(std::string(functor) + " seed " + std::to_string(seed), text);
      Encoding enc = parse_coalgebra(text);
      Refiner r(enc);
      r.run();
      counters.record(r, std::string(functor) + " seed " + std::to_string(seed));
      Partition fast = r.root_partition();
      Partition slow = naive_refine(enc).partition;
      ++total;
      if (fast.size() < enc.root_count()) ++merged;
      if (!same_partition(fast, slow)) {
        if (failures++ == 0) first = std::string(functor) + " seed " + std::to_string(seed);
      }
    }
  }
  double seconds = since(start);
  o.pass = failures == 0 && seconds < 60;
  o.detail = std::to_string(total - failures) + "/" + std::to_string(total) + " instances agree (" +
             std::to_string(merged) + " with merged states) in " + std::to_string(seconds) + " s";
  if (failures) o.detail += "; first mismatch: " + first;
  return o;
}

Outcome interface_axioms() {
  Outcome o;
  auto start = Clock::now();
  std::uint64_t checks = 0;
  for (auto kind : {InterfaceKind::powerset, InterfaceKind::bag, InterfaceKind::group, InterfaceKind::distribution,
                    InterfaceKind::polynomial}) {
    AxiomReport r = check_interface_axioms(kind, {.carrier = 8, .samples = 10000});
    checks += r.checks;
    if (!r.passed) {
      o.pass = false;
      o.detail += std::string(to_string(kind)) + ": " + r.counterexample + "; ";
    } else {
      o.detail += std::string(to_string(kind)) + " " + std::to_string(r.terms) + " terms, ";
    }
  }
  AxiomReport mutant = check_interface_axioms(InterfaceKind::group, {.carrier = 3, .samples = 100,
                                                                      .swap_update_weights = true});
  if (mutant.passed) {
    o.pass = false;
    o.detail += "mutated update not detected; ";
  }
  o.detail += std::to_string(checks) + " equation checks at carrier <= 8 in " + std::to_string(since(start)) + " s";
  return o;
}

struct Ladder {
  std::vector<std::size_t> n;
  std::vector<std::size_t> m;
  std::vector<double> seconds;
};

Ladder run_ladder() {
  Ladder l;
  for (unsigned e = 10; e <= 17; ++e) {
    GeneratorOptions g{.functor = "P({a,b} x X)", .states = std::size_t{1} << e, .density = 5, .seed = e};
    Encoding enc = parse_coalgebra(generate_coalgebra(g));
    auto start = Clock::now();
    Refiner r(enc);
    r.run();
    double t = since(start);
    counters.record(r, "ladder 2^" + std::to_string(e));
    l.n.push_back(enc.root_count());
    l.m.push_back(enc.edge_count());
    l.seconds.push_back(t);
  }
  return l;
}

Outcome performance(const Ladder& l) {
  Outcome o;
  double ratio_sum = 0;
  for (std::size_t i = 1; i < l.seconds.size(); ++i) ratio_sum += l.seconds[i] / l.seconds[i - 1];
  double mean_ratio = ratio_sum / static_cast<double>(l.seconds.size() - 1);
  double largest = l.seconds.back();
  o.pass = largest < 10 && mean_ratio <= 3.0;
  std::ostringstream ss;
  ss.precision(3);
  ss << "n=2^17 (m=" << l.m.back() << ") refined in " << largest << " s; mean doubling ratio " << mean_ratio
     << "; times";
  for (double t : l.seconds) ss << " " << t;
  o.detail = ss.str();
  return o;
}

Outcome splitter_bound() {
  Outcome o;
  GeneratorOptions g{.functor = "P({a,b} x X)", .states = 100000, .density = 5, .seed = 2024};
  Encoding enc = parse_coalgebra(generate_coalgebra(g));
  Refiner r(enc);
  r.run();
  counters.record(r, "random LTS n=100000");
  o.pass = counters.violations == 0;
  o.detail = std::to_string(counters.runs) + " runs, " + std::to_string(counters.violations) +
             " violations, largest counter " + std::to_string(counters.worst_counter) +
             " (bound for n=100000: " + std::to_string(r.splitter_bound()) + ", observed " +
             std::to_string(r.max_splitter_entries()) + ")";
  if (counters.violations) o.detail += "; " + counters.first_violation;
  return o;
}

// Myhill-Nerode table filling over explicit transition tables.
std::vector<std::uint32_t> table_filling(const std::vector<bool>& accept, const std::vector<std::vector<int>>& delta) {
  const std::size_t n = accept.size();
  std::vector<std::vector<char>> distinct(n, std::vector<char>(n, 0));
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) distinct[p][q] = accept[p] != accept[q];
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (distinct[p][q]) continue;
        for (std::size_t a = 0; a < delta[p].size(); ++a) {
          if (distinct[delta[p][a]][delta[q][a]]) {
            distinct[p][q] = distinct[q][p] = 1;
            changed = true;
            break;
          }
        }
      }
    }
  }
  std::vector<std::uint32_t> cls(n, ~0u);
  std::uint32_t next = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (cls[p] != ~0u) continue;
    for (std::size_t q = p; q < n; ++q) {
      if (!distinct[p][q]) cls[q] = next;
    }
    ++next;
  }
  return cls;
}

Outcome dfa_minimization() {
  Outcome o;
  std::mt19937_64 rng(4242);
  std::size_t agree = 0;
  std::size_t nontrivial = 0;
  std::string first;
  for (int i = 0; i < 100; ++i) {
    std::size_t n = 1 + rng() % 40;
    std::size_t k = 1 + rng() % 4;
    std::vector<bool> accept(n);
    std::vector<std::vector<int>> delta(n, std::vector<int>(k));
    for (std::size_t p = 0; p < n; ++p) {
      accept[p] = rng() % 3 == 0;
      for (auto& t : delta[p]) t = static_cast<int>(rng() % n);
    }
    std::string text = "functor {acc,rej} x X^" + std::to_string(k) + "\n";
    for (std::size_t p = 0; p < n; ++p) {
      text += "state q" + std::to_string(p) + " = (" + (accept[p] ? "acc" : "rej") + ", [";
      for (std::size_t a = 0; a < k; ++a) text += (a ? ", q" : "q") + std::to_string(delta[p][a]);
      text += "])\n";
    }
    Encoding enc = parse_coalgebra(text);
    Partition fast = refine(enc);
    auto cls = table_filling(accept, delta);
    std::map<std::uint32_t, std::vector<StateId>> grouped;
    for (StateId p = 0; p < n; ++p) grouped[cls[p]].push_back(p);
    Partition expected;
    for (auto& [c, members] : grouped) expected.push_back(members);
    if (expected.size() < n) ++nontrivial;
    if (same_partition(fast, expected)) {
      ++agree;
    } else if (first.empty()) {
      first = "DFA #" + std::to_string(i);
    }
  }
  o.pass = agree == 100;
  o.detail = std::to_string(agree) + "/100 random DFAs match table filling (" + std::to_string(nontrivial) +
             " not already minimal)";
  if (!first.empty()) o.detail += "; first mismatch: " + first;
  return o;
}

Outcome markov_lumping() {
  Outcome o;
  std::size_t agree = 0;
  std::size_t lumped = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GeneratorOptions g{.functor = "R(X)",
                       .states = 2 + (seed * 13) % 49,
                       .density = 2,
                       .weight_range = 2,
                       .seed = 1000 + seed,
                       .twins = seed % 2 == 0};
    Encoding enc = parse_coalgebra(generate_coalgebra(g));
    Partition fast = refine(enc);
    if (fast.size() < enc.root_count()) ++lumped;
    if (same_partition(fast, naive_refine(enc).partition)) ++agree;
  }
  o.pass = agree == 100;
  o.detail = std::to_string(agree) + "/100 rational-weighted systems agree with the oracle (" +
             std::to_string(lumped) + " with lumped states)";
  return o;
}

Outcome determinism() {
  Outcome o;
  fs::path dir = fs::temp_directory_path() / ("coref_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  std::size_t identical = 0;
  std::string first;
  for (std::size_t i = 0; i < determinism_inputs.size(); ++i) {
    fs::path input = dir / ("input" + std::to_string(i) + ".coalg");
    std::ofstream(input, std::ios::binary) << determinism_inputs[i].second;
    std::vector<std::string> outputs;
    for (int run = 0; run < 3; ++run) {
      fs::path out = dir / ("out" + std::to_string(run) + ".txt");
      std::ostringstream sink, err;
      cli::run({"minimize", input.string(), "--out", out.string()}, sink, err);
      outputs.push_back(read(out));
    }
    if (!outputs[0].empty() && outputs[0] == outputs[1] && outputs[1] == outputs[2]) {
      ++identical;
    } else if (first.empty()) {
      first = determinism_inputs[i].first;
    }
  }
  fs::remove_all(dir);
  o.pass = identical == determinism_inputs.size();
  o.detail = std::to_string(identical) + "/" + std::to_string(determinism_inputs.size()) +
             " inputs give byte-identical partition files over 3 runs";
  if (!first.empty()) o.detail += "; first difference: " + first;
  return o;
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  std::map<int, std::pair<std::string, Outcome>> results;
  results[1] = {"golden worked example", guarded(golden_example)};
  results[2] = {"composite-functor counterexample", guarded(nested_powerset)};
  results[3] = {"oracle equivalence fuzzing", guarded(oracle_fuzz)};
  results[4] = {"interface axioms", guarded(interface_axioms)};
  Ladder ladder;
  results[8] = {"performance scaling", guarded([&] {
                  ladder = run_ladder();
                  return performance(ladder);
                })};
  results[5] = {"splitter-entry bound", guarded(splitter_bound)};
  results[6] = {"DFA minimization", guarded(dfa_minimization)};
  results[7] = {"Markov lumping", guarded(markov_lumping)};
  results[9] = {"determinism", guarded(determinism)};

  int failed = 0;
  for (const auto& [n, entry] : results) {
    const auto& [title, outcome] = entry;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " " << n << " " << title << ": " << outcome.detail << "\n";
    failed += outcome.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "coref/encoding.hpp"
#include "coref/errors.hpp"
#include "coref/generator.hpp"
#include "coref/oracle.hpp"
#include "coref/refiner.hpp"

namespace coref::cli {

namespace {

struct Config {
  std::vector<std::string> inputs;
  std::string algorithm = "refiner";
  std::string output = "partition";
  std::string out_path;
  GeneratorOptions gen;
  std::string ladder;
  bool audit = false;
  std::optional<std::uint32_t> max_counter_bound;
};

// Failure with a message and an exit code, raised inside subcommands.
struct Failure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{input_error, path + ": cannot open file"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Encoding load(const std::string& path) {
  std::string text = read_file(path);
  try {
    return parse_coalgebra(text);
  } catch (const ParseError& e) {
    throw Failure{input_error, path + ":" + e.what()};
  }
}

void emit(const Config& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out_path, std::ios::binary);
  if (!file) throw Failure{input_error, cfg.out_path + ": cannot write file"};
  file << text;
}

int cmd_minimize(const Config& cfg, std::ostream& out) {
  Encoding enc = load(cfg.inputs.at(0));
  Partition p;
  std::string stats;
  if (cfg.algorithm == "naive") {
    auto start = std::chrono::steady_clock::now();
    OracleResult r = naive_refine(enc);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    p = std::move(r.partition);
    stats = "algorithm: naive\nroots: " + std::to_string(enc.root_count()) + "\nrounds: " + std::to_string(r.rounds) +
            "\nroot_blocks: " + std::to_string(p.size()) + "\nseconds: " + std::to_string(seconds) + "\n";
  } else {
    Refiner r(enc);
    r.set_audit_each_step(cfg.audit);
    r.run();
    p = r.root_partition();
    stats = "algorithm: refiner\n" + r.stats();
  }
  if (cfg.output == "quotient") {
    emit(cfg, quotient_coalgebra(enc, p), out);
  } else if (cfg.output == "stats") {
    emit(cfg, stats, out);
  } else {
    emit(cfg, format_partition(enc, p), out);
  }
  return ok;
}

std::optional<std::pair<StateId, StateId>> first_difference(std::size_t n, const Partition& a, const Partition& b) {
  std::vector<std::uint32_t> ba(n), bb(n);
  for (std::uint32_t i = 0; i < a.size(); ++i) {
    for (StateId x : a[i]) ba[x] = i;
  }
  for (std::uint32_t i = 0; i < b.size(); ++i) {
    for (StateId x : b[i]) bb[x] = i;
  }
  for (StateId x = 0; x < n; ++x) {
    for (StateId y = x + 1; y < n; ++y) {
      if ((ba[x] == ba[y]) != (bb[x] == bb[y])) return std::pair{x, y};
    }
  }
  return std::nullopt;
}

int cmd_compare(const Config& cfg, std::ostream& out, std::ostream& err) {
  int code = ok;
  for (const auto& path : cfg.inputs) {
    Encoding enc = load(path);
    Partition fast = refine(enc);
    Partition slow = naive_refine(enc).partition;
    if (same_partition(fast, slow)) {
      out << path << ": ok (" << fast.size() << " blocks)\n";
      continue;
    }
    code = invariant_violation;
    auto diff = first_difference(enc.root_count(), fast, slow);
    out << path << ": MISMATCH";
    if (diff) {
      bool together = false;
      for (const auto& block : fast) {
        together |= std::binary_search(block.begin(), block.end(), diff->first) &&
                    std::binary_search(block.begin(), block.end(), diff->second);
      }
      out << " " << enc.name(diff->first) << " and " << enc.name(diff->second) << " are "
          << (together ? "merged by the refiner but separated by the oracle"
                       : "separated by the refiner but merged by the oracle");
    }
    out << "\n";
    err << path << ": partitions differ\n";
  }
  return code;
}

int cmd_gen(const Config& cfg, std::ostream& out) {
  try {
    emit(cfg, generate_coalgebra(cfg.gen), out);
  } catch (const std::invalid_argument& e) {
    throw Failure{input_error, e.what()};
  } catch (const ParseError& e) {
    throw Failure{input_error, std::string("--functor: ") + e.what()};
  }
  return ok;
}

struct BenchRun {
  std::string label;
  std::string text;
};

int cmd_bench(const Config& cfg, std::ostream& out, std::ostream& err) {
  std::vector<BenchRun> runs;
  for (const auto& path : cfg.inputs) runs.push_back({path, read_file(path)});
  if (cfg.inputs.empty()) {
    std::vector<std::size_t> sizes;
    if (cfg.ladder.empty()) {
      sizes.push_back(cfg.gen.states);
    } else {
      unsigned from = 0;
      unsigned to = 0;
      char colon = 0;
      std::istringstream ls(cfg.ladder);
      if (!(ls >> from >> colon >> to) || colon != ':' || from > to || to > 30) {
        throw Failure{input_error, "--ladder expects FROM:TO exponents, e.g. 10:17"};
      }
      for (unsigned e = from; e <= to; ++e) sizes.push_back(std::size_t{1} << e);
    }
    for (std::size_t n : sizes) {
      GeneratorOptions g = cfg.gen;
      g.states = n;
      try {
        runs.push_back({"gen:" + std::to_string(n), generate_coalgebra(g)});
      } catch (const std::invalid_argument& e) {
        throw Failure{input_error, e.what()};
      } catch (const ParseError& e) {
        throw Failure{input_error, std::string("--functor: ") + e.what()};
      }
    }
  }

  int code = ok;
  out << "input,n,m,states,seconds,max_counter,bound,ok\n";
  for (const auto& run : runs) {
    Encoding enc = [&] {
      try {
        return parse_coalgebra(run.text);
      } catch (const ParseError& e) {
        throw Failure{input_error, run.label + ":" + e.what()};
      }
    }();
    Refiner r(enc);
    r.run();
    std::uint32_t bound = cfg.max_counter_bound.value_or(r.splitter_bound());
    bool within = r.max_splitter_entries() <= bound;
    if (!within) {
      code = invariant_violation;
      err << run.label << ": splitter counter " << r.max_splitter_entries() << " exceeds bound " << bound << "\n";
    }
    out << run.label << "," << enc.root_count() << "," << enc.edge_count() << "," << enc.state_count() << ","
        << r.seconds() << "," << r.max_splitter_entries() << "," << bound << "," << (within ? 1 : 0) << "\n";
  }
  return code;
}

void add_generator_flags(CLI::App* sub, Config& cfg) {
  sub->add_option("--functor", cfg.gen.functor, "System type, e.g. \"P({a,b} x X)\"");
  sub->add_option("--states", cfg.gen.states, "Number of states");
  sub->add_option("--density", cfg.gen.density, "Mean size of sets, bags, and weight maps");
  sub->add_option("--weight-range", cfg.gen.weight_range, "Weights are drawn from 1..RANGE");
  sub->add_option("--seed", cfg.gen.seed, "Random seed");
  sub->add_flag("--twins", cfg.gen.twins, "Add an equivalent copy of every state");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Behavioural equivalence by coalgebraic partition refinement", "coref"};
  app.require_subcommand(1);

  auto* minimize = app.add_subcommand("minimize", "Compute the partition or quotient of a coalgebra file");
  minimize->add_option("input", cfg.inputs, "Coalgebra file")->required()->expected(1);
  minimize->add_option("--algorithm", cfg.algorithm)->check(CLI::IsMember({"refiner", "naive"}));
  minimize->add_option("--output", cfg.output)->check(CLI::IsMember({"partition", "quotient", "stats"}));
  minimize->add_option("--out", cfg.out_path, "Write the result here instead of stdout");
  minimize->add_flag("--audit", cfg.audit, "Check all refiner invariants after every step");

  auto* compare = app.add_subcommand("compare", "Check the refiner against the naive oracle");
  compare->add_option("inputs", cfg.inputs, "Coalgebra files")->required();

  auto* gen = app.add_subcommand("gen", "Write a random coalgebra file");
  add_generator_flags(gen, cfg);
  gen->add_option("--out", cfg.out_path, "Write the file here instead of stdout");

  auto* bench = app.add_subcommand("bench", "Time the refiner and check the splitter counter bound");
  bench->add_option("inputs", cfg.inputs, "Coalgebra files; random systems are generated when omitted");
  add_generator_flags(bench, cfg);
  bench->add_option("--ladder", cfg.ladder, "Generate 2^FROM..2^TO states, e.g. 10:17");
  bench->add_option("--max-counter-bound", cfg.max_counter_bound)->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : input_error;
  }

  try {
    if (*minimize) return cmd_minimize(cfg, out);
    if (*compare) return cmd_compare(cfg, out, err);
    if (*gen) return cmd_gen(cfg, out);
    if (*bench) return cmd_bench(cfg, out, err);
  } catch (const Failure& f) {
    err << "coref: " << f.message << "\n";
    return f.code;
  } catch (const ParseError& e) {
    err << "coref: " << e.what() << "\n";
    return input_error;
  } catch (const InvariantError& e) {
    err << "coref: internal invariant violated: " << e.what() << "\n";
    return invariant_violation;
  } catch (const InterfaceMisuse& e) {
    err << "coref: internal invariant violated: " << e.what() << "\n";
    return invariant_violation;
  }
  return input_error;
}

}  // namespace coref::cli

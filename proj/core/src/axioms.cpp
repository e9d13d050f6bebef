#include "coref/axioms.hpp"

#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coref/interfaces.hpp"

namespace coref {

namespace {

using Mask = std::uint32_t;

bool has(Mask set, unsigned y) { return (set >> y) & 1u; }

/// A term over {0..k-1} as the list of (argument, label) pairs it flattens to.
struct Term {
  std::vector<std::pair<unsigned, Label>> entries;
  TypeValue type;
  std::string text;
};

std::vector<Label> labels_in(const Term& t, Mask set) {
  std::vector<Label> out;
  for (const auto& [y, l] : t.entries) {
    if (has(set, y)) out.push_back(l);
  }
  return out;
}

class Evaluator {
 public:
  explicit Evaluator(InterfaceKind kind) : kind_(kind) {}

  Weight weight(const Term& t, Mask c) const {
    switch (kind_) {
      case InterfaceKind::powerset: {
        CountPair w;
        for (const auto& [y, l] : t.entries) ++(has(c, y) ? w.inside : w.outside);
        return w;
      }
      case InterfaceKind::bag: {
        CountPair w;
        for (const auto& [y, l] : t.entries) (has(c, y) ? w.inside : w.outside) += std::get<std::uint64_t>(l);
        return w;
      }
      case InterfaceKind::group:
      case InterfaceKind::distribution: {
        RationalPair w{Rational(0), Rational(0)};
        for (const auto& [y, l] : t.entries) (has(c, y) ? w.inside : w.outside) += std::get<Rational>(l);
        return w;
      }
      case InterfaceKind::polynomial: {
        const auto& sym = std::get<Symbol>(t.type);
        PolyWeight w{sym.id, sym.arity, 0};
        for (const auto& [y, l] : t.entries) {
          if (has(c, y)) w.inside |= std::uint64_t{1} << (std::get<std::uint64_t>(l) - 1);
        }
        return w;
      }
    }
    return CountPair{};
  }

  ThreeValue three(const Term& t, Mask s, Mask c) const {
    switch (kind_) {
      case InterfaceKind::powerset: {
        PowersetThree v;
        for (const auto& [y, l] : t.entries) {
          if (has(s, y)) {
            v.subblock = true;
          } else if (has(c, y)) {
            v.rest = true;
          } else {
            v.outside = true;
          }
        }
        return v;
      }
      case InterfaceKind::bag: {
        CountTriple v;
        for (const auto& [y, l] : t.entries) {
          auto k = std::get<std::uint64_t>(l);
          (has(s, y) ? v.subblock : has(c, y) ? v.rest : v.outside) += k;
        }
        return v;
      }
      case InterfaceKind::group:
      case InterfaceKind::distribution: {
        RationalTriple v{Rational(0), Rational(0), Rational(0)};
        for (const auto& [y, l] : t.entries) {
          const auto& q = std::get<Rational>(l);
          (has(s, y) ? v.subblock : has(c, y) ? v.rest : v.outside) += q;
        }
        return v;
      }
      case InterfaceKind::polynomial: {
        const auto& sym = std::get<Symbol>(t.type);
        PolyThree v{sym.id, sym.arity, 0, 0};
        for (const auto& [y, l] : t.entries) {
          std::uint64_t bit = std::uint64_t{1} << (std::get<std::uint64_t>(l) - 1);
          if (has(c, y)) v.in_block |= bit;
          if (has(s, y)) v.in_subblock |= bit;
        }
        return v;
      }
    }
    return PowersetThree{};
  }

  /// H chi_C (t) compared with H(=1) applied to a three-valued result.
  bool matches_chi(const Term& t, Mask c, const ThreeValue& v) const {
    switch (kind_) {
      case InterfaceKind::powerset: {
        const auto& p = std::get<PowersetThree>(v);
        bool meets_outside = false;
        bool meets_c = false;
        for (const auto& [y, l] : t.entries) (has(c, y) ? meets_c : meets_outside) = true;
        return (p.outside || p.subblock) == meets_outside && p.rest == meets_c;
      }
      case InterfaceKind::bag: {
        const auto& p = std::get<CountTriple>(v);
        auto w = std::get<CountPair>(weight(t, c));
        return p.outside + p.subblock == w.outside && p.rest == w.inside;
      }
      case InterfaceKind::group:
      case InterfaceKind::distribution: {
        const auto& p = std::get<RationalTriple>(v);
        auto w = std::get<RationalPair>(weight(t, c));
        return p.outside + p.subblock == w.outside && p.rest == w.inside;
      }
      case InterfaceKind::polynomial: {
        const auto& p = std::get<PolyThree>(v);
        auto w = std::get<PolyWeight>(weight(t, c));
        return p.symbol == w.symbol && (p.in_block & ~p.in_subblock) == w.inside;
      }
    }
    return false;
  }

 private:
  InterfaceKind kind_;
};

class Checker {
 public:
  Checker(InterfaceKind kind, const AxiomOptions& options) : kind_(kind), options_(options), eval_(kind) {}

  /// Checks all chains S <= C <= Y, or `limit` random ones when there are more.
  bool check(const Term& t, unsigned k, std::mt19937_64& rng, std::uint64_t limit) {
    ++report.terms;
    const Mask all = (Mask{1} << k) - 1;
    Weight expected = eval_.weight(t, all);
    Weight got = init(kind_, t.type, labels_in(t, all));
    ++report.checks;
    if (!(got == expected)) {
      return fail("init(" + t.text + ") = " + to_string(got) + ", expected " + to_string(expected));
    }

    std::uint64_t chains = 1;
    for (unsigned i = 0; i < k; ++i) chains *= 3;
    if (chains <= limit) {
      for (Mask c = 0; c <= all; ++c) {
        for (Mask s = c;; s = (s - 1) & c) {
          if (!check_chain(t, s, c)) return false;
          if (s == 0) break;
        }
      }
    } else {
      std::uniform_int_distribution<int> pick(0, 2);
      for (std::uint64_t i = 0; i < limit; ++i) {
        Mask s = 0;
        Mask c = 0;
        for (unsigned y = 0; y < k; ++y) {
          int where = pick(rng);
          if (where >= 1) c |= Mask{1} << y;
          if (where == 2) s |= Mask{1} << y;
        }
        if (!check_chain(t, s, c)) return false;
      }
    }
    return true;
  }

  AxiomReport report;

 private:
  bool check_chain(const Term& t, Mask s, Mask c) {
    ++report.checks;
    Weight wc = eval_.weight(t, c);
    UpdateResult r = update(kind_, labels_in(t, s), wc);
    if (options_.swap_update_weights) std::swap(r.subblock, r.rest);
    Weight ws = eval_.weight(t, s);
    ThreeValue v = eval_.three(t, s, c);
    Weight wrest = eval_.weight(t, c & ~s);
    if (!(r.subblock == ws) || !(r.three == v) || !(r.rest == wrest)) {
      return fail("update on " + t.text + " with S=" + mask_text(s) + ", C=" + mask_text(c) + " gave (" +
                  to_string(r.subblock) + ", " + to_string(r.three) + ", " + to_string(r.rest) + "), expected (" +
                  to_string(ws) + ", " + to_string(v) + ", " + to_string(wrest) + ")");
    }
    UpdateResult empty = update(kind_, {}, wc);
    if (!eval_.matches_chi(t, c, empty.three)) {
      return fail("update with no labels on " + t.text + " with C=" + mask_text(c) + " gave " +
                  to_string(empty.three) + ", which does not match chi_C");
    }
    return true;
  }

  bool fail(std::string message) {
    report.passed = false;
    report.counterexample = std::move(message);
    return false;
  }

  static std::string mask_text(Mask m) {
    std::string s = "{";
    for (unsigned y = 0; y < 32; ++y) {
      if (has(m, y)) s += (s.size() > 1 ? "," : "") + std::to_string(y);
    }
    return s + "}";
  }

  InterfaceKind kind_;
  const AxiomOptions& options_;
  Evaluator eval_;
};

std::string rational_text(const std::vector<std::pair<unsigned, Label>>& entries) {
  std::string s = "{";
  for (const auto& [y, l] : entries) {
    if (s.size() > 1) s += ", ";
    s += std::to_string(y) + ": ";
    if (const auto* q = std::get_if<Rational>(&l)) {
      s += to_string(*q);
    } else {
      s += std::to_string(std::get<std::uint64_t>(l));
    }
  }
  return s + "}";
}

constexpr std::uint64_t exhaustive_chains = ~std::uint64_t{0};
constexpr std::uint64_t sampled_chains = 243;

void powerset_terms(Checker& checker, unsigned k, std::mt19937_64& rng) {
  for (Mask set = 0; set < (Mask{1} << k); ++set) {
    Term t;
    t.text = "{";
    for (unsigned y = 0; y < k; ++y) {
      if (!has(set, y)) continue;
      t.entries.emplace_back(y, Unit{});
      t.text += (t.text.size() > 1 ? "," : "") + std::to_string(y);
    }
    t.text += "}";
    t.type = set != 0;
    if (!checker.check(t, k, rng, exhaustive_chains)) return;
  }
}

void polynomial_terms(Checker& checker, unsigned k, unsigned max_arity, std::mt19937_64& rng) {
  for (unsigned arity = 0; arity <= max_arity; ++arity) {
    std::uint64_t count = 1;
    for (unsigned i = 0; i < arity; ++i) count *= k;
    if (arity > 0 && k == 0) continue;
    for (std::uint64_t code = 0; code < count; ++code) {
      Term t;
      t.type = Symbol{arity, arity};
      t.text = "s" + std::to_string(arity) + "(";
      std::uint64_t rest = code;
      for (unsigned i = 0; i < arity; ++i) {
        unsigned y = static_cast<unsigned>(rest % k);
        rest /= k;
        t.entries.emplace_back(y, Label{std::uint64_t{i + 1}});
        t.text += (i ? "," : "") + std::to_string(y);
      }
      t.text += ")";
      if (!checker.check(t, k, rng, exhaustive_chains)) return;
    }
  }
}

Term weighted_term(InterfaceKind kind, unsigned k, const AxiomOptions& o, std::mt19937_64& rng) {
  Term t;
  std::uniform_int_distribution<int> coin(0, 3);
  switch (kind) {
    case InterfaceKind::bag: {
      std::uniform_int_distribution<std::int64_t> mult(0, std::max<std::int64_t>(o.weight_max, 1));
      std::uint64_t total = 0;
      for (unsigned y = 0; y < k; ++y) {
        auto m = static_cast<std::uint64_t>(mult(rng));
        if (m == 0) continue;
        t.entries.emplace_back(y, Label{m});
        total += m;
      }
      t.type = total;
      break;
    }
    case InterfaceKind::group: {
      std::uniform_int_distribution<std::int64_t> num(o.weight_min, o.weight_max);
      std::uniform_int_distribution<long> den(1, 3);
      Rational total = 0;
      for (unsigned y = 0; y < k; ++y) {
        Rational q(static_cast<long>(num(rng)), coin(rng) == 0 ? den(rng) : 1L);
        q.canonicalize();
        if (q == 0) continue;
        total += q;
        t.entries.emplace_back(y, Label{q});
      }
      t.type = total;
      break;
    }
    case InterfaceKind::distribution: {
      std::uniform_int_distribution<long> num(0, 4);
      std::vector<long> raw(k);
      long sum = 0;
      for (unsigned y = 0; y < k; ++y) sum += raw[y] = num(rng);
      if (k > 0 && sum == 0) {
        raw[std::uniform_int_distribution<unsigned>(0, k - 1)(rng)] = 1;
        sum = 1;
      }
      for (unsigned y = 0; y < k; ++y) {
        if (raw[y] == 0) continue;
        Rational q(raw[y], sum);
        q.canonicalize();
        t.entries.emplace_back(y, Label{q});
      }
      t.type = Unit{};
      break;
    }
    default:
      throw std::logic_error("not a weighted interface");
  }
  t.text = rational_text(t.entries);
  return t;
}

}  // namespace

AxiomReport check_interface_axioms(InterfaceKind kind, const AxiomOptions& options) {
  if (options.carrier > 8) throw std::invalid_argument("carrier size above 8");
  Checker checker(kind, options);
  std::mt19937_64 rng(options.seed);
  switch (kind) {
    case InterfaceKind::powerset:
      for (unsigned k = 0; k <= options.carrier && checker.report.passed; ++k) powerset_terms(checker, k, rng);
      break;
    case InterfaceKind::polynomial:
      for (unsigned k = 0; k <= options.carrier && checker.report.passed; ++k) {
        polynomial_terms(checker, k, options.max_arity, rng);
      }
      break;
    default: {
      // distributions need a nonempty carrier
      unsigned lowest = kind == InterfaceKind::distribution ? 1 : 0;
      unsigned sizes = options.carrier - lowest + 1;
      if (options.carrier < lowest) break;
      for (std::uint64_t i = 0; i < options.samples && checker.report.passed; ++i) {
        unsigned k = lowest + static_cast<unsigned>(i % sizes);
        Term t = weighted_term(kind, k, options, rng);
        checker.check(t, k, rng, sampled_chains);
      }
      break;
    }
  }
  return checker.report;
}

}  // namespace coref

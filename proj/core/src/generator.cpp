#include "coref/generator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "coref/functor.hpp"
#include "coref/rational.hpp"

namespace coref {

namespace {

class TermWriter {
 public:
  using Leaf = std::function<std::size_t(std::size_t)>;

  TermWriter(const GeneratorOptions& o, std::size_t pool, std::mt19937_64& rng, Leaf leaf)
      : options_(o), pool_(pool), rng_(rng), leaf_(std::move(leaf)) {}

  std::string term(const FunctorExpr& f) {
    switch (f.kind) {
      case FunctorKind::variable:
        return name(leaf_(pick(pool_)));
      case FunctorKind::constant:
        return f.constants[pick(f.constants.size())];
      case FunctorKind::product:
        return "(" + term(f.children[0]) + ", " + term(f.children[1]) + ")";
      case FunctorKind::coproduct:
        return pick(2) == 0 ? "inl " + term(f.children[0]) : "inr " + term(f.children[1]);
      case FunctorKind::exponent: {
        std::string s = "[";
        for (unsigned i = 0; i < f.exponent; ++i) s += (i ? ", " : "") + term(f.children[0]);
        return s + "]";
      }
      case FunctorKind::powerset:
        return "{" + join(elements(f.children[0], size(0), true), ", ") + "}";
      case FunctorKind::bag:
        return "[" + join(elements(f.children[0], size(0), true), ", ") + "]";
      case FunctorKind::group:
      case FunctorKind::distribution:
        return weights(f);
    }
    return {};
  }

  static std::string name(std::size_t i) { return "s" + std::to_string(i); }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::size_t size(std::size_t at_least) {
    auto trials = static_cast<int>(std::lround(2 * options_.density));
    std::size_t k = trials > 0 ? std::binomial_distribution<int>(trials, 0.5)(rng_) : 0;
    return std::max(k, at_least);
  }

  // Successors for sets and maps. Under a weight map a bare X must not repeat.
  std::vector<std::string> elements(const FunctorExpr& f, std::size_t k, bool repeat) {
    std::vector<std::string> out;
    if (f.kind == FunctorKind::variable && !repeat) {
      std::vector<std::size_t> ids(pool_);
      std::iota(ids.begin(), ids.end(), std::size_t{0});
      k = std::min(k, pool_);
      for (std::size_t i = 0; i < k; ++i) std::swap(ids[i], ids[i + pick(pool_ - i)]);
      for (std::size_t i = 0; i < k; ++i) out.push_back(name(leaf_(ids[i])));
      return out;
    }
    for (std::size_t i = 0; i < k; ++i) out.push_back(term(f));
    return out;
  }

  std::string weights(const FunctorExpr& f) {
    const bool distribution = f.kind == FunctorKind::distribution;
    auto keys = elements(f.children[0], size(distribution ? 1 : 0), false);
    const std::int64_t range = options_.weight_range;
    std::vector<Rational> w;
    if (distribution) {
      std::vector<long> raw;
      long sum = 0;
      for (std::size_t i = 0; i < keys.size(); ++i) {
        raw.push_back(static_cast<long>(1 + pick(static_cast<std::size_t>(range))));
        sum += raw.back();
      }
      for (long r : raw) {
        Rational q(r, sum);
        q.canonicalize();
        w.push_back(q);
      }
    } else {
      for (std::size_t i = 0; i < keys.size(); ++i) {
        auto magnitude = static_cast<long>(1 + pick(static_cast<std::size_t>(range)));
        Rational q(pick(2) == 0 ? magnitude : -magnitude, pick(4) == 0 ? 2L : 1L);
        q.canonicalize();
        w.push_back(q);
      }
    }
    std::string s = "{";
    for (std::size_t i = 0; i < keys.size(); ++i) {
      s += (i ? ", " : "") + keys[i] + ": " + to_string(w[i]);
    }
    return s + "}";
  }

  static std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? sep : "") + items[i];
    return s;
  }

  const GeneratorOptions& options_;
  std::size_t pool_;
  std::mt19937_64& rng_;
  Leaf leaf_;
};

}  // namespace

std::string generate_coalgebra(const GeneratorOptions& options) {
  if (options.states == 0) throw std::invalid_argument("--states must be positive");
  if (!(options.density >= 0) || !std::isfinite(options.density)) {
    throw std::invalid_argument("--density must be a non-negative number");
  }
  if (options.weight_range < 1) throw std::invalid_argument("--weight-range must be positive");
  FunctorExpr functor = parse_functor(options.functor);

  const std::size_t n = options.states;
  const std::size_t originals = options.twins ? (n + 1) / 2 : n;
  std::mt19937_64 master(options.seed);
  std::vector<std::uint64_t> seeds(originals);
  for (auto& s : seeds) s = master();

  std::string out = "functor " + to_string(functor) + "\n";
  auto identity = [](std::size_t j) { return j; };
  for (std::size_t i = 0; i < originals; ++i) {
    std::mt19937_64 rng(seeds[i]);
    TermWriter w(options, originals, rng, identity);
    out += "state " + TermWriter::name(i) + " = " + w.term(functor) + "\n";
  }
  for (std::size_t i = originals; i < n; ++i) {
    std::mt19937_64 rng(seeds[i - originals]);
    auto swap = [&](std::size_t j) {
      std::size_t copy = originals + j;
      return copy < n && (master() & 1) ? copy : j;
    };
    TermWriter w(options, originals, rng, swap);
    out += "state " + TermWriter::name(i) + " = " + w.term(functor) + "\n";
  }
  return out;
}

}  // namespace coref

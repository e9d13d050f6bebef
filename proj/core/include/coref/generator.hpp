#pragma once

#include <cstdint>
#include <string>

namespace coref {

struct GeneratorOptions {
  std::string functor = "P({a,b} x X)";
  std::size_t states = 16;
  /// Mean size of every set, bag, and weight map.
  double density = 2.0;
  /// Weights and multiplicities are drawn from 1..weight_range (signed for R).
  std::int64_t weight_range = 3;
  std::uint64_t seed = 1;
  /// The second half of the states copies the first half with each successor j replaced
  /// at random by j or its copy, so every copy is equivalent to its original.
  bool twins = false;
};

/// Random coalgebra file text; the same options always give the same text.
/// Throws std::invalid_argument on bad parameters and ParseError on a bad functor.
std::string generate_coalgebra(const GeneratorOptions& options);

}  // namespace coref

#pragma once

#include <cstdint>
#include <string>

#include "coref/functor.hpp"

namespace coref {

struct AxiomOptions {
  /// Largest carrier checked; every size from 0 up to this one is covered.
  unsigned carrier = 3;
  /// Terms drawn per run for the weighted interfaces (bag, group, distribution).
  std::uint64_t samples = 10000;
  /// Integer range for group weights and bag multiplicities (bags use 0..weight_max).
  std::int64_t weight_min = -2;
  std::int64_t weight_max = 2;
  std::uint64_t seed = 1;
  /// Largest arity of the test signature for the polynomial interface.
  unsigned max_arity = 3;
  /// Mutation: exchange the first and last result of update before checking.
  bool swap_update_weights = false;
};

struct AxiomReport {
  bool passed = true;
  std::uint64_t terms = 0;
  std::uint64_t checks = 0;
  /// First failing equation, empty on success.
  std::string counterexample;
};

/// Checks, against a brute-force evaluator working on explicit terms over {0..k-1}:
///   init(H!(t), labels(t)) = w(Y, t)
///   update(fil_S(t), w(C, t)) = (w(S, t), H chi_S^C (t), w(C\S, t))
///   H(=1)(second component of update(empty, w(C, t))) = H chi_C (t)
/// for all S <= C <= Y. Powerset and polynomial terms are enumerated exhaustively, the
/// weighted ones are sampled. Carrier sizes above 8 are rejected.
AxiomReport check_interface_axioms(InterfaceKind kind, const AxiomOptions& options = {});

}  // namespace coref

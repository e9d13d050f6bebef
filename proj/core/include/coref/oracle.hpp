#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "coref/encoding.hpp"

namespace coref {

/// Canonical text of H(kappa)(xi(x)) for a root state x, where kappa is `assignment` (one
/// block id per root state). Inner-sort sub-terms are expanded in place: sets are sorted
/// and deduplicated, weighted maps are summed per distinct argument with zeros dropped.
std::string signature(const Encoding& enc, StateId x, std::span<const std::uint32_t> assignment);

struct OracleResult {
  Partition partition;
  std::size_t rounds = 0;
};

/// Naive final-chain refinement of the root states: start from the grouping by type, then
/// regroup by signature until the number of blocks is stable.
OracleResult naive_refine(const Encoding& enc);

}  // namespace coref

#pragma once

#include <cstdint>

namespace coref {

using StateId = std::uint32_t;
using EdgeId = std::uint32_t;
using BlockId = std::uint32_t;
using CompoundId = std::uint32_t;

}  // namespace coref

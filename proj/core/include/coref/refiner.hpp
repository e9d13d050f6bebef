#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coref/encoding.hpp"
#include "coref/interfaces.hpp"
#include "coref/partition.hpp"

namespace coref {

/// Subblock S, chosen inside compound block C with 2|S| <= |C|.
struct SplitterChoice {
  BlockId subblock = 0;
  CompoundId compound = 0;
  std::size_t compound_size = 0;
};

/// Partition refinement over an Encoding. States of all sorts are refined together; the
/// result restricted to the root sort is behavioural equivalence.
///
/// Usage: construct, then either run() or drive select_splitter()/split() by hand.
class Refiner {
 public:
  explicit Refiner(const Encoding& enc);

  /// Takes the front compound block C of the worklist and splits it into S and C\S in the
  /// compound structure. nullopt once every compound block is a single subblock.
  std::optional<SplitterChoice> select_splitter();

  /// Like select_splitter() but with a caller-chosen S. Throws std::invalid_argument unless
  /// S lies in a compound block C with 2|S| <= |C|.
  SplitterChoice choose_splitter(BlockId s);

  /// Refines the subblocks by the splitter. The choice must come from select_splitter()
  /// or choose_splitter() and be used exactly once.
  void split(const SplitterChoice& choice);

  /// One select + split; false when there is nothing left to do.
  bool step();

  /// Runs to the fixpoint.
  void run();

  /// Audit all invariants after every split (slow; meant for small inputs).
  void set_audit_each_step(bool on) { audit_each_step_ = on; }

  /// Recomputes every weight cell and kernel condition from the encoding and checks the
  /// partition structures. Throws InvariantError.
  void audit() const;

  const Encoding& encoding() const { return enc_; }
  const RefinablePartition& partition() const { return p_; }
  const CompoundStructure& compounds() const { return q_; }

  /// Partition of the root states.
  Partition root_partition() const;

  /// Number of times each state was in a splitter.
  std::span<const std::uint32_t> splitter_entries() const { return entries_; }
  std::uint32_t max_splitter_entries() const;
  /// floor(log2(number of states)), 0 for fewer than two states.
  std::uint32_t splitter_bound() const;

  std::size_t iterations() const { return iterations_; }
  double seconds() const { return seconds_; }

  /// Key-value lines: states, roots, edges, iterations, blocks, root_blocks,
  /// max_splitter_entries, splitter_bound, histogram, seconds.
  std::string stats() const;

 private:
  using CellId = std::uint32_t;
  static constexpr EdgeId none = ~EdgeId{0};

  struct Mark {
    StateId state;
    CellId cell;
  };

  template <class I>
  std::string empty_three(CellId cell) const;
  template <class I>
  std::string apply_update(StateId x, CellId cell);
  template <class W>
  std::vector<W>& cells();
  template <class W>
  const std::vector<W>& cells() const;

  std::string empty_three(StateId x, CellId cell) const;
  std::string apply_update(StateId x, CellId cell);
  void refine_block(BlockId b, const std::string& v_empty);

  const Encoding& enc_;
  RefinablePartition p_;
  CompoundStructure q_;

  std::vector<CountPair> count_cells_;
  std::vector<RationalPair> rational_cells_;
  std::vector<PolyWeight> poly_cells_;
  std::vector<CellId> last_w_;

  std::vector<EdgeId> to_sub_head_;
  std::vector<EdgeId> to_sub_next_;
  std::vector<std::vector<Mark>> marks_;
  std::vector<BlockId> touched_;
  std::vector<std::string> touched_empty_;
  std::vector<Label> labels_;

  std::vector<std::uint32_t> entries_;
  std::size_t iterations_ = 0;
  double seconds_ = 0;
  bool audit_each_step_ = false;
};

/// Root-state partition computed by the refiner.
Partition refine(const Encoding& enc);

}  // namespace coref

#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "coref/types.hpp"

namespace coref {

/// Partition of {0..n-1} into blocks. Every block is a contiguous range of one element
/// array, so moving an element between blocks is a swap plus two index updates.
/// Block ids are never reused.
class RefinablePartition {
 public:
  RefinablePartition() = default;

  /// One block per distinct assignment value, numbered in ascending value order.
  /// Inside a block, elements appear in ascending order.
  RefinablePartition(std::size_t universe, std::span<const std::uint32_t> assignment);

  std::size_t universe_size() const { return block_of_.size(); }
  std::size_t block_count() const { return blocks_.size(); }

  BlockId block_of(StateId x) const { return block_of_[x]; }
  std::size_t size(BlockId b) const { return blocks_[b].end - blocks_[b].begin; }
  std::span<const StateId> elements(BlockId b) const {
    return {elements_.data() + blocks_[b].begin, elements_.data() + blocks_[b].end};
  }

  /// Moves `selected` (a nonempty proper subset of block `b`, no duplicates) into a fresh
  /// block and returns its id. O(|selected|). Throws std::logic_error on a bad selection.
  BlockId split_block(BlockId b, std::span<const StateId> selected);

  /// Full consistency check; throws InvariantError.
  void audit() const;

 private:
  struct Range {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
  };

  std::vector<StateId> elements_;
  std::vector<std::uint32_t> position_;
  std::vector<BlockId> block_of_;
  std::vector<Range> blocks_;
};

/// The coarser partition: compound blocks, each a set of partition blocks, with a FIFO
/// worklist of the compound blocks that hold two or more of them.
class CompoundStructure {
 public:
  CompoundStructure() = default;

  /// A single compound block covering every block of `p`.
  explicit CompoundStructure(const RefinablePartition& p);

  std::size_t compound_count() const { return compounds_.size(); }
  CompoundId compound_of(BlockId b) const { return compound_of_[b]; }
  std::span<const BlockId> members(CompoundId c) const { return compounds_[c].members; }
  std::size_t count(CompoundId c) const { return compounds_[c].count; }
  bool is_compound(CompoundId c) const { return compounds_[c].members.size() >= 2; }

  /// `fresh` was split off `sibling` and joins its compound block.
  void add_block(BlockId fresh, BlockId sibling);

  /// Moves block `s` (of `size` elements) out of its compound block into a new one.
  /// Returns the new compound id. Re-enqueues the old compound block if still compound.
  CompoundId separate(BlockId s, std::size_t size);

  /// Pops the front compound block of the worklist; nullopt when none is left.
  std::optional<CompoundId> next_compound();

  bool has_work() const;

  /// Checks membership, counts, and worklist contents against `p`; throws InvariantError.
  void audit(const RefinablePartition& p) const;

 private:
  struct Compound {
    std::vector<BlockId> members;
    std::size_t count = 0;
    bool queued = false;
  };

  void enqueue(CompoundId c);

  std::vector<Compound> compounds_;
  std::vector<CompoundId> compound_of_;
  std::vector<std::uint32_t> member_index_;
  std::deque<CompoundId> worklist_;
};

}  // namespace coref

#include "coref/partition.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "coref/errors.hpp"

namespace coref {

RefinablePartition::RefinablePartition(std::size_t universe, std::span<const std::uint32_t> assignment) {
  if (assignment.size() != universe) throw std::invalid_argument("assignment must cover the universe");
  std::map<std::uint32_t, BlockId> ids;
  for (std::uint32_t v : assignment) ids.emplace(v, 0);
  BlockId next = 0;
  for (auto& [value, id] : ids) id = next++;

  std::vector<std::uint32_t> counts(ids.size() + 1, 0);
  block_of_.resize(universe);
  for (std::size_t x = 0; x < universe; ++x) {
    block_of_[x] = ids[assignment[x]];
    ++counts[block_of_[x] + 1];
  }
  for (std::size_t b = 1; b < counts.size(); ++b) counts[b] += counts[b - 1];
  blocks_.resize(ids.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) blocks_[b] = {counts[b], counts[b]};
  elements_.resize(universe);
  position_.resize(universe);
  for (std::size_t x = 0; x < universe; ++x) {
    Range& r = blocks_[block_of_[x]];
    elements_[r.end] = static_cast<StateId>(x);
    position_[x] = r.end++;
  }
}

BlockId RefinablePartition::split_block(BlockId b, std::span<const StateId> selected) {
  if (b >= blocks_.size()) throw std::logic_error("split_block: no such block");
  if (selected.empty()) throw std::logic_error("split_block: empty selection");
  if (selected.size() >= size(b)) throw std::logic_error("split_block: selection must be a proper subset");
  for (StateId x : selected) {
    if (x >= block_of_.size() || block_of_[x] != b) throw std::logic_error("split_block: element not in block");
  }
  Range& r = blocks_[b];
  std::uint32_t boundary = r.end;
  for (StateId x : selected) {
    std::uint32_t p = position_[x];
    if (p >= boundary) throw std::logic_error("split_block: duplicate element in selection");
    --boundary;
    StateId other = elements_[boundary];
    elements_[boundary] = x;
    elements_[p] = other;
    position_[x] = boundary;
    position_[other] = p;
  }
  auto fresh = static_cast<BlockId>(blocks_.size());
  blocks_.push_back({boundary, r.end});
  blocks_[b].end = boundary;
  for (std::uint32_t i = boundary; i < blocks_[fresh].end; ++i) block_of_[elements_[i]] = fresh;
  return fresh;
}

void RefinablePartition::audit() const {
  std::uint32_t covered = 0;
  std::vector<Range> sorted(blocks_.begin(), blocks_.end());
  std::sort(sorted.begin(), sorted.end(), [](const Range& a, const Range& b) { return a.begin < b.begin; });
  for (const Range& r : sorted) {
    if (r.begin != covered || r.end <= r.begin) throw InvariantError("partition blocks are not a tiling");
    covered = r.end;
  }
  if (covered != elements_.size()) throw InvariantError("partition blocks do not cover the universe");
  for (BlockId b = 0; b < blocks_.size(); ++b) {
    for (std::uint32_t i = blocks_[b].begin; i < blocks_[b].end; ++i) {
      StateId x = elements_[i];
      if (position_[x] != i || block_of_[x] != b) {
        throw InvariantError("element " + std::to_string(x) + " has stale block or position");
      }
    }
  }
}

CompoundStructure::CompoundStructure(const RefinablePartition& p) {
  compound_of_.assign(p.block_count(), 0);
  member_index_.resize(p.block_count());
  if (p.block_count() == 0) return;
  Compound all;
  for (BlockId b = 0; b < p.block_count(); ++b) {
    member_index_[b] = static_cast<std::uint32_t>(all.members.size());
    all.members.push_back(b);
    all.count += p.size(b);
  }
  compounds_.push_back(std::move(all));
  if (is_compound(0)) enqueue(0);
}

void CompoundStructure::enqueue(CompoundId c) {
  if (compounds_[c].queued) return;
  compounds_[c].queued = true;
  worklist_.push_back(c);
}

void CompoundStructure::add_block(BlockId fresh, BlockId sibling) {
  if (fresh >= compound_of_.size()) {
    compound_of_.resize(fresh + 1, 0);
    member_index_.resize(fresh + 1, 0);
  }
  CompoundId c = compound_of_[sibling];
  compound_of_[fresh] = c;
  member_index_[fresh] = static_cast<std::uint32_t>(compounds_[c].members.size());
  compounds_[c].members.push_back(fresh);
  if (is_compound(c)) enqueue(c);
}

CompoundId CompoundStructure::separate(BlockId s, std::size_t size) {
  CompoundId old = compound_of_[s];
  Compound& c = compounds_[old];
  std::uint32_t i = member_index_[s];
  BlockId last = c.members.back();
  c.members[i] = last;
  member_index_[last] = i;
  c.members.pop_back();
  c.count -= size;

  auto fresh = static_cast<CompoundId>(compounds_.size());
  Compound single;
  single.members.push_back(s);
  single.count = size;
  compounds_.push_back(std::move(single));
  compound_of_[s] = fresh;
  member_index_[s] = 0;
  if (is_compound(old)) {
    enqueue(old);
  } else if (compounds_[old].queued) {
    // only reachable when a caller separates a block it picked itself
    worklist_.erase(std::find(worklist_.begin(), worklist_.end(), old));
    compounds_[old].queued = false;
  }
  return fresh;
}

std::optional<CompoundId> CompoundStructure::next_compound() {
  while (!worklist_.empty()) {
    CompoundId c = worklist_.front();
    worklist_.pop_front();
    compounds_[c].queued = false;
    if (is_compound(c)) return c;
  }
  return std::nullopt;
}

bool CompoundStructure::has_work() const {
  return std::any_of(worklist_.begin(), worklist_.end(), [&](CompoundId c) { return is_compound(c); });
}

void CompoundStructure::audit(const RefinablePartition& p) const {
  if (compound_of_.size() != p.block_count()) throw InvariantError("compound map does not cover all blocks");
  std::vector<std::size_t> seen(compounds_.size(), 0);
  for (BlockId b = 0; b < p.block_count(); ++b) {
    CompoundId c = compound_of_[b];
    const auto& m = compounds_[c].members;
    if (member_index_[b] >= m.size() || m[member_index_[b]] != b) {
      throw InvariantError("block " + std::to_string(b) + " missing from its compound block");
    }
    seen[c] += p.size(b);
  }
  for (CompoundId c = 0; c < compounds_.size(); ++c) {
    if (seen[c] != compounds_[c].count) throw InvariantError("compound block count mismatch");
    if (compounds_[c].members.empty()) throw InvariantError("empty compound block");
    bool queued = std::find(worklist_.begin(), worklist_.end(), c) != worklist_.end();
    if (queued != compounds_[c].queued) throw InvariantError("worklist flag out of sync");
    if (is_compound(c) != queued) throw InvariantError("worklist does not match the compound blocks");
  }
}

}  // namespace coref

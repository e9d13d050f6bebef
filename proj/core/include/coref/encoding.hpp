#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "coref/functor.hpp"
#include "coref/interfaces.hpp"
#include "coref/types.hpp"

namespace coref {

struct Edge {
  StateId source = 0;
  StateId target = 0;
  Label label;
};

/// Graph presentation of a coalgebra over the disjoint union of all sorts of a SortPlan.
/// Root states (sort 0, the ones named in the input) have ids 0..root_count()-1;
/// intermediate states of inner sorts follow. Edges are grouped by source and, within a
/// source, kept in term order. Immutable once built.
class Encoding {
 public:
  const SortPlan& plan() const { return plan_; }

  std::size_t state_count() const { return sort_of_.size(); }
  std::size_t root_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  SortId sort_of(StateId x) const { return sort_of_[x]; }
  InterfaceKind interface_of(StateId x) const { return plan_.sorts[sort_of_[x]].kind; }
  const TypeValue& type(StateId x) const { return types_[x]; }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  EdgeId out_begin(StateId x) const { return out_offsets_[x]; }
  EdgeId out_end(StateId x) const { return out_offsets_[x + 1]; }
  std::span<const Edge> out_edges(StateId x) const {
    return {edges_.data() + out_offsets_[x], edges_.data() + out_offsets_[x + 1]};
  }
  std::span<const EdgeId> pred(StateId y) const {
    return {pred_.data() + pred_offsets_[y], pred_.data() + pred_offsets_[y + 1]};
  }

  const std::string& name(StateId root) const { return names_[root]; }
  std::optional<StateId> find(std::string_view name) const;

  /// Printable shape of an interned operation symbol; '?' marks argument places.
  const std::string& symbol_shape(SortId sort, std::uint32_t symbol) const { return shapes_[sort][symbol]; }
  std::size_t symbol_count(SortId sort) const { return shapes_[sort].size(); }

 private:
  friend class EncodingBuilder;

  SortPlan plan_;
  std::vector<SortId> sort_of_;
  std::vector<TypeValue> types_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, StateId> index_;
  std::vector<Edge> edges_;
  std::vector<EdgeId> out_offsets_;
  std::vector<EdgeId> pred_offsets_;
  std::vector<EdgeId> pred_;
  std::vector<std::vector<std::string>> shapes_;
};

/// Incremental construction of an Encoding. Roots must all be added before any
/// intermediate state.
class EncodingBuilder {
 public:
  explicit EncodingBuilder(SortPlan plan);

  StateId add_root(std::string name);
  StateId add_state(SortId sort);
  void set_type(StateId x, TypeValue type);
  void add_edge(StateId source, StateId target, Label label);
  Symbol intern_symbol(SortId sort, const std::string& shape, std::uint32_t arity);

  std::size_t state_count() const { return enc_.sort_of_.size(); }
  std::optional<StateId> find(std::string_view name) const { return enc_.find(name); }

  /// Sorts edges by source and builds the predecessor lists.
  Encoding finish() &&;

 private:
  Encoding enc_;
  std::vector<std::unordered_map<std::string, std::uint32_t>> symbol_ids_;
  std::vector<std::uint32_t> symbol_arity_;
  bool intermediates_started_ = false;
};

/// Reads a coalgebra file: `#` comments, a `functor <expr>` line, then one
/// `state <name> = <term>` line per root state. Throws ParseError with line/column.
Encoding parse_coalgebra(std::string_view text);

/// As above, but the file's functor must equal `plan.functor`.
Encoding parse_coalgebra(std::string_view text, const SortPlan& plan);

/// Root-state partition: each block sorted ascending, blocks ordered by least element.
using Partition = std::vector<std::vector<StateId>>;

Partition normalize(Partition p);

/// Set-of-sets equality.
bool same_partition(const Partition& a, const Partition& b);

/// One block per line, `{name,name,...}`, names sorted lexicographically, blocks sorted by
/// their least name.
std::string format_partition(const Encoding& enc, const Partition& p);

/// Coalgebra file of the quotient: one state `B<i>` per block (blocks numbered by least
/// state id), with the term of the block's first state and successors replaced by block
/// names. Weights of merged successors are summed; sets are deduplicated; entries are
/// ordered by their printed form.
std::string quotient_coalgebra(const Encoding& enc, const Partition& roots);

/// Text of a root state's term, with successor root states printed by `rename`.
std::string render_term(const Encoding& enc, StateId x, const std::vector<std::string>& rename);

}  // namespace coref

#include "coref/refiner.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <stdexcept>

#include "coref/errors.hpp"
#include "coref/grouping.hpp"

namespace coref {

namespace {

void append_u32(std::string& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

// Sort and type of a state; polynomial states also carry those of their inner-sort
// arguments, which are fixed one-step observations as well.
std::string initial_key(const Encoding& enc, StateId x) {
  std::string key;
  append_u32(key, enc.sort_of(x));
  append_type(key, enc.type(x));
  if (enc.interface_of(x) == InterfaceKind::polynomial) {
    for (const Edge& e : enc.out_edges(x)) {
      if (enc.sort_of(e.target) == 0) continue;
      append_u32(key, enc.sort_of(e.target));
      append_type(key, enc.type(e.target));
    }
  }
  return key;
}

std::vector<std::uint32_t> initial_assignment(const Encoding& enc) {
  const std::size_t n = enc.state_count();
  std::vector<std::string> keys(n);
  for (StateId x = 0; x < n; ++x) keys[x] = initial_key(enc, x);
  std::vector<StateId> order(n);
  std::iota(order.begin(), order.end(), StateId{0});
  std::stable_sort(order.begin(), order.end(), [&](StateId a, StateId b) { return keys[a] < keys[b]; });
  std::vector<std::uint32_t> assignment(n);
  std::uint32_t id = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && keys[order[i]] != keys[order[i - 1]]) ++id;
    assignment[order[i]] = id;
  }
  return assignment;
}

// w(C, xi(x)) computed straight from the edges, for audits.
Weight brute_weight(const Encoding& enc, StateId x, const std::vector<char>& in_c) {
  auto out = enc.out_edges(x);
  switch (enc.interface_of(x)) {
    case InterfaceKind::powerset: {
      CountPair w;
      for (const Edge& e : out) ++(in_c[e.target] ? w.inside : w.outside);
      return w;
    }
    case InterfaceKind::bag: {
      CountPair w;
      for (const Edge& e : out) (in_c[e.target] ? w.inside : w.outside) += std::get<std::uint64_t>(e.label);
      return w;
    }
    case InterfaceKind::group:
    case InterfaceKind::distribution: {
      RationalPair w{Rational(0), Rational(0)};
      for (const Edge& e : out) (in_c[e.target] ? w.inside : w.outside) += std::get<Rational>(e.label);
      return w;
    }
    case InterfaceKind::polynomial: {
      const auto& sym = std::get<Symbol>(enc.type(x));
      PolyWeight w{sym.id, sym.arity, 0};
      for (const Edge& e : out) {
        if (in_c[e.target]) w.inside |= std::uint64_t{1} << (std::get<std::uint64_t>(e.label) - 1);
      }
      return w;
    }
  }
  return CountPair{};
}

}  // namespace

template <class W>
std::vector<W>& Refiner::cells() {
  if constexpr (std::is_same_v<W, CountPair>) {
    return count_cells_;
  } else if constexpr (std::is_same_v<W, RationalPair>) {
    return rational_cells_;
  } else {
    return poly_cells_;
  }
}

template <class W>
const std::vector<W>& Refiner::cells() const {
  return const_cast<Refiner*>(this)->cells<W>();
}

Refiner::Refiner(const Encoding& enc) : enc_(enc) {
  const std::size_t n = enc.state_count();
  const std::size_t m = enc.edge_count();

  last_w_.resize(m);
  for (StateId x = 0; x < n; ++x) {
    labels_.clear();
    for (const Edge& e : enc.out_edges(x)) labels_.push_back(e.label);
    CellId cell = 0;
    auto push = [&](auto w) {
      auto& store = cells<decltype(w)>();
      cell = static_cast<CellId>(store.size());
      store.push_back(std::move(w));
    };
    switch (enc.interface_of(x)) {
      case InterfaceKind::powerset:
        push(PowersetInterface::init(enc.type(x), labels_));
        break;
      case InterfaceKind::bag:
        push(BagInterface::init(enc.type(x), labels_));
        break;
      case InterfaceKind::group:
        push(GroupInterface::init(enc.type(x), labels_));
        break;
      case InterfaceKind::distribution:
        push(DistributionInterface::init(enc.type(x), labels_));
        break;
      case InterfaceKind::polynomial:
        push(PolynomialInterface::init(enc.type(x), labels_));
        break;
    }
    for (EdgeId e = enc.out_begin(x); e < enc.out_end(x); ++e) last_w_[e] = cell;
  }

  auto assignment = initial_assignment(enc);
  p_ = RefinablePartition(n, assignment);
  q_ = CompoundStructure(p_);

  to_sub_head_.assign(n, none);
  to_sub_next_.assign(m, none);
  marks_.resize(p_.block_count());
  entries_.assign(n, 0);
}

std::optional<SplitterChoice> Refiner::select_splitter() {
  auto c = q_.next_compound();
  if (!c) return std::nullopt;
  auto members = q_.members(*c);
  BlockId s = members[0];
  if (p_.size(members[1]) < p_.size(s)) s = members[1];
  SplitterChoice choice{s, *c, q_.count(*c)};
  q_.separate(s, p_.size(s));
  return choice;
}

SplitterChoice Refiner::choose_splitter(BlockId s) {
  if (s >= p_.block_count()) throw std::invalid_argument("no such block");
  CompoundId c = q_.compound_of(s);
  if (!q_.is_compound(c)) throw std::invalid_argument("block is alone in its compound block");
  if (2 * p_.size(s) > q_.count(c)) throw std::invalid_argument("splitter larger than half its compound block");
  SplitterChoice choice{s, c, q_.count(c)};
  q_.separate(s, p_.size(s));
  return choice;
}

template <class I>
std::string Refiner::empty_three(CellId cell) const {
  auto r = I::update(std::span<const Label>{}, cells<typename I::weight_type>()[cell]);
  std::string out;
  append_h3(out, r.three);
  return out;
}

std::string Refiner::empty_three(StateId x, CellId cell) const {
  switch (enc_.interface_of(x)) {
    case InterfaceKind::powerset:
      return empty_three<PowersetInterface>(cell);
    case InterfaceKind::bag:
      return empty_three<BagInterface>(cell);
    case InterfaceKind::group:
      return empty_three<GroupInterface>(cell);
    case InterfaceKind::distribution:
      return empty_three<DistributionInterface>(cell);
    case InterfaceKind::polynomial:
      return empty_three<PolynomialInterface>(cell);
  }
  return {};
}

template <class I>
std::string Refiner::apply_update(StateId x, CellId cell) {
  labels_.clear();
  for (EdgeId e = to_sub_head_[x]; e != none; e = to_sub_next_[e]) labels_.push_back(enc_.edge(e).label);
  auto& store = cells<typename I::weight_type>();
  auto r = I::update(labels_, store[cell]);
  store[cell] = std::move(r.rest);
  auto fresh = static_cast<CellId>(store.size());
  store.push_back(std::move(r.subblock));
  for (EdgeId e = to_sub_head_[x]; e != none;) {
    EdgeId next = to_sub_next_[e];
    last_w_[e] = fresh;
    to_sub_next_[e] = none;
    e = next;
  }
  to_sub_head_[x] = none;
  std::string out;
  append_h3(out, r.three);
  return out;
}

std::string Refiner::apply_update(StateId x, CellId cell) {
  if (to_sub_head_[x] == none) throw InvariantError("marked state without edges into the splitter");
  switch (enc_.interface_of(x)) {
    case InterfaceKind::powerset:
      return apply_update<PowersetInterface>(x, cell);
    case InterfaceKind::bag:
      return apply_update<BagInterface>(x, cell);
    case InterfaceKind::group:
      return apply_update<GroupInterface>(x, cell);
    case InterfaceKind::distribution:
      return apply_update<DistributionInterface>(x, cell);
    case InterfaceKind::polynomial:
      return apply_update<PolynomialInterface>(x, cell);
  }
  return {};
}

void Refiner::split(const SplitterChoice& choice) {
  for (StateId y : p_.elements(choice.subblock)) {
    ++entries_[y];
    for (EdgeId e : enc_.pred(y)) {
      StateId x = enc_.edge(e).source;
      BlockId b = p_.block_of(x);
      if (marks_[b].empty()) {
        touched_.push_back(b);
        touched_empty_.push_back(empty_three(x, last_w_[e]));
      }
      if (to_sub_head_[x] == none) marks_[b].push_back({x, last_w_[e]});
      to_sub_next_[e] = to_sub_head_[x];
      to_sub_head_[x] = e;
    }
  }

  for (std::size_t i = 0; i < touched_.size(); ++i) refine_block(touched_[i], touched_empty_[i]);
  touched_.clear();
  touched_empty_.clear();
  ++iterations_;
  if (audit_each_step_) audit();
}

void Refiner::refine_block(BlockId b, const std::string& v_empty) {
  std::vector<std::pair<StateId, std::string>> leaving;
  for (const Mark& mark : marks_[b]) {
    std::string v = apply_update(mark.state, mark.cell);
    if (v != v_empty) leaving.emplace_back(mark.state, std::move(v));
  }
  marks_[b].clear();
  if (leaving.empty()) return;

  auto groups = group_by_value(leaving);
  std::size_t keep = groups.size();
  if (leaving.size() == p_.size(b)) {
    keep = 0;
    for (std::size_t g = 1; g < groups.size(); ++g) {
      if (groups[g].size() > groups[keep].size()) keep = g;
    }
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (g == keep) continue;
    BlockId fresh = p_.split_block(b, groups[g]);
    q_.add_block(fresh, b);
    marks_.emplace_back();
  }
}

bool Refiner::step() {
  auto choice = select_splitter();
  if (!choice) return false;
  split(*choice);
  return true;
}

void Refiner::run() {
  auto start = std::chrono::steady_clock::now();
  while (step()) {
  }
  seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Partition Refiner::root_partition() const {
  std::map<BlockId, std::vector<StateId>> blocks;
  for (StateId x = 0; x < enc_.root_count(); ++x) blocks[p_.block_of(x)].push_back(x);
  Partition out;
  for (auto& [b, members] : blocks) out.push_back(std::move(members));
  return normalize(std::move(out));
}

std::uint32_t Refiner::max_splitter_entries() const {
  return entries_.empty() ? 0 : *std::max_element(entries_.begin(), entries_.end());
}

std::uint32_t Refiner::splitter_bound() const {
  std::size_t n = enc_.state_count();
  return n < 2 ? 0 : static_cast<std::uint32_t>(std::bit_width(n) - 1);
}

std::string Refiner::stats() const {
  std::map<std::uint32_t, std::size_t> histogram;
  for (std::uint32_t c : entries_) ++histogram[c];
  std::string h;
  for (auto [count, states] : histogram) {
    if (!h.empty()) h += ' ';
    h += std::to_string(count) + ":" + std::to_string(states);
  }
  std::string out;
  out += "states: " + std::to_string(enc_.state_count()) + "\n";
  out += "roots: " + std::to_string(enc_.root_count()) + "\n";
  out += "edges: " + std::to_string(enc_.edge_count()) + "\n";
  out += "iterations: " + std::to_string(iterations_) + "\n";
  out += "blocks: " + std::to_string(p_.block_count()) + "\n";
  out += "root_blocks: " + std::to_string(root_partition().size()) + "\n";
  out += "max_splitter_entries: " + std::to_string(max_splitter_entries()) + "\n";
  out += "splitter_bound: " + std::to_string(splitter_bound()) + "\n";
  out += "histogram: " + h + "\n";
  out += "seconds: " + std::to_string(seconds_) + "\n";
  return out;
}

void Refiner::audit() const {
  p_.audit();
  q_.audit(p_);
  const std::size_t n = enc_.state_count();

  // I1
  for (StateId x = 0; x < n; ++x) {
    if (to_sub_head_[x] != none) throw InvariantError("toSub not empty between splits");
  }

  // I2: cells are shared exactly by edges with one source and targets in one compound block
  std::map<std::pair<StateId, CompoundId>, CellId> cell_of;
  std::map<std::pair<InterfaceKind, CellId>, std::pair<StateId, CompoundId>> owner;
  for (EdgeId e = 0; e < enc_.edge_count(); ++e) {
    const Edge& edge = enc_.edge(e);
    CompoundId c = q_.compound_of(p_.block_of(edge.target));
    InterfaceKind kind = enc_.interface_of(edge.source);
    if (kind == InterfaceKind::bag) kind = InterfaceKind::powerset;
    if (kind == InterfaceKind::distribution) kind = InterfaceKind::group;
    auto [it, fresh] = cell_of.emplace(std::pair{edge.source, c}, last_w_[e]);
    if (!fresh && it->second != last_w_[e]) throw InvariantError("edges into one compound block use different cells");
    auto [jt, fresh2] = owner.emplace(std::pair{kind, last_w_[e]}, std::pair{edge.source, c});
    if (!fresh2 && jt->second != std::pair{edge.source, c}) {
      throw InvariantError("cell shared across sources or compound blocks");
    }
  }

  // I3 and I4, one compound block at a time
  std::vector<char> in_c(n, 0);
  for (CompoundId c = 0; c < q_.compound_count(); ++c) {
    std::fill(in_c.begin(), in_c.end(), 0);
    for (BlockId b : q_.members(c)) {
      for (StateId y : p_.elements(b)) in_c[y] = 1;
    }
    for (EdgeId e = 0; e < enc_.edge_count(); ++e) {
      const Edge& edge = enc_.edge(e);
      if (!in_c[edge.target]) continue;
      Weight expected = brute_weight(enc_, edge.source, in_c);
      CellId cell = last_w_[e];
      bool ok = std::visit(
          [&](const auto& w) {
            using W = std::decay_t<decltype(w)>;
            return cells<W>()[cell] == w;
          },
          expected);
      if (!ok) {
        throw InvariantError("stale weight cell on edge " + std::to_string(e) + ": expected " + to_string(expected));
      }
    }
    for (BlockId b = 0; b < p_.block_count(); ++b) {
      std::string first;
      bool have = false;
      for (StateId x : p_.elements(b)) {
        Weight w = brute_weight(enc_, x, in_c);
        std::string v = encode_h3(update(enc_.interface_of(x), {}, w).three);
        if (!have) {
          first = std::move(v);
          have = true;
        } else if (v != first) {
          throw InvariantError("block " + std::to_string(b) + " is not stable for compound block " + std::to_string(c));
        }
      }
    }
  }
}

Partition refine(const Encoding& enc) {
  Refiner r(enc);
  r.run();
  return r.root_partition();
}

}  // namespace coref

#include "coref/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace coref {

namespace {

std::string type_text(const TypeValue& t) {
  struct {
    std::string operator()(Unit) const { return "u"; }
    std::string operator()(bool b) const { return b ? "t" : "f"; }
    std::string operator()(std::uint64_t k) const { return "n" + std::to_string(k); }
    std::string operator()(const Rational& q) const { return "q" + to_string(q); }
    std::string operator()(const Symbol& s) const { return "s" + std::to_string(s.id); }
  } visitor;
  return std::visit(visitor, t);
}

class Signer {
 public:
  Signer(const Encoding& enc, std::span<const std::uint32_t> assignment) : enc_(enc), assignment_(assignment) {}

  std::string term(StateId x) const {
    auto out = enc_.out_edges(x);
    std::string s = std::to_string(enc_.sort_of(x));
    switch (enc_.interface_of(x)) {
      case InterfaceKind::powerset: {
        std::set<std::string> items;
        for (const Edge& e : out) items.insert(child(e.target));
        s += "P{";
        for (const auto& item : items) s += item + ";";
        return s + "}";
      }
      case InterfaceKind::bag: {
        std::map<std::string, std::uint64_t> items;
        for (const Edge& e : out) items[child(e.target)] += std::get<std::uint64_t>(e.label);
        s += "B{";
        for (const auto& [item, k] : items) s += item + "*" + std::to_string(k) + ";";
        return s + "}";
      }
      case InterfaceKind::group:
      case InterfaceKind::distribution: {
        std::map<std::string, Rational> items;
        for (const Edge& e : out) items[child(e.target)] += std::get<Rational>(e.label);
        s += "R{";
        for (const auto& [item, w] : items) {
          if (w != 0) s += item + "*" + to_string(w) + ";";
        }
        return s + "}";
      }
      case InterfaceKind::polynomial: {
        s += type_text(enc_.type(x)) + "(";
        std::vector<const Edge*> args;
        for (const Edge& e : out) args.push_back(&e);
        std::sort(args.begin(), args.end(), [](const Edge* a, const Edge* b) {
          return std::get<std::uint64_t>(a->label) < std::get<std::uint64_t>(b->label);
        });
        for (const Edge* e : args) s += child(e->target) + ";";
        return s + ")";
      }
    }
    return s;
  }

 private:
  std::string child(StateId y) const {
    return enc_.sort_of(y) == 0 ? "#" + std::to_string(assignment_[y]) : term(y);
  }

  const Encoding& enc_;
  std::span<const std::uint32_t> assignment_;
};

std::size_t regroup(const std::vector<std::string>& keys, std::vector<std::uint32_t>& assignment) {
  std::map<std::string, std::uint32_t> ids;
  for (const auto& k : keys) ids.emplace(k, 0);
  std::uint32_t next = 0;
  for (auto& [k, id] : ids) id = next++;
  for (std::size_t x = 0; x < keys.size(); ++x) assignment[x] = ids[keys[x]];
  return ids.size();
}

}  // namespace

std::string signature(const Encoding& enc, StateId x, std::span<const std::uint32_t> assignment) {
  return Signer(enc, assignment).term(x);
}

OracleResult naive_refine(const Encoding& enc) {
  const std::size_t n = enc.root_count();
  std::vector<std::uint32_t> assignment(n, 0);
  std::vector<std::string> keys(n);
  for (StateId x = 0; x < n; ++x) keys[x] = type_text(enc.type(x));
  std::size_t blocks = regroup(keys, assignment);

  OracleResult result;
  while (true) {
    for (StateId x = 0; x < n; ++x) keys[x] = signature(enc, x, assignment);
    ++result.rounds;
    std::size_t next = regroup(keys, assignment);
    if (next == blocks) break;
    blocks = next;
  }

  std::map<std::uint32_t, std::vector<StateId>> grouped;
  for (StateId x = 0; x < n; ++x) grouped[assignment[x]].push_back(x);
  for (auto& [id, members] : grouped) result.partition.push_back(std::move(members));
  result.partition = normalize(std::move(result.partition));
  return result;
}

}  // namespace coref

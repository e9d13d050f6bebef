#include "coref/encoding.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <utility>

#include "coref/errors.hpp"

namespace coref {

std::optional<StateId> Encoding::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EncodingBuilder::EncodingBuilder(SortPlan plan) {
  enc_.plan_ = std::move(plan);
  enc_.shapes_.resize(enc_.plan_.sorts.size());
  symbol_ids_.resize(enc_.plan_.sorts.size());
}

StateId EncodingBuilder::add_root(std::string name) {
  if (intermediates_started_) throw std::logic_error("roots must precede intermediate states");
  auto id = static_cast<StateId>(enc_.sort_of_.size());
  if (!enc_.index_.emplace(name, id).second) throw ParseError("duplicate state '" + name + "'");
  enc_.names_.push_back(std::move(name));
  enc_.sort_of_.push_back(0);
  enc_.types_.emplace_back(Unit{});
  return id;
}

StateId EncodingBuilder::add_state(SortId sort) {
  intermediates_started_ = true;
  auto id = static_cast<StateId>(enc_.sort_of_.size());
  enc_.sort_of_.push_back(sort);
  enc_.types_.emplace_back(Unit{});
  return id;
}

void EncodingBuilder::set_type(StateId x, TypeValue type) { enc_.types_[x] = std::move(type); }

void EncodingBuilder::add_edge(StateId source, StateId target, Label label) {
  enc_.edges_.push_back({source, target, std::move(label)});
}

Symbol EncodingBuilder::intern_symbol(SortId sort, const std::string& shape, std::uint32_t arity) {
  auto [it, inserted] = symbol_ids_[sort].emplace(shape, static_cast<std::uint32_t>(enc_.shapes_[sort].size()));
  if (inserted) enc_.shapes_[sort].push_back(shape);
  return {it->second, arity};
}

Encoding EncodingBuilder::finish() && {
  Encoding& e = enc_;
  const std::size_t n = e.sort_of_.size();
  const std::size_t m = e.edges_.size();

  e.out_offsets_.assign(n + 1, 0);
  for (const Edge& edge : e.edges_) ++e.out_offsets_[edge.source + 1];
  for (std::size_t x = 0; x < n; ++x) e.out_offsets_[x + 1] += e.out_offsets_[x];
  std::vector<Edge> sorted(m);
  std::vector<EdgeId> fill(e.out_offsets_.begin(), e.out_offsets_.end() - 1);
  for (Edge& edge : e.edges_) sorted[fill[edge.source]++] = std::move(edge);
  e.edges_ = std::move(sorted);

  e.pred_offsets_.assign(n + 1, 0);
  for (const Edge& edge : e.edges_) ++e.pred_offsets_[edge.target + 1];
  for (std::size_t y = 0; y < n; ++y) e.pred_offsets_[y + 1] += e.pred_offsets_[y];
  e.pred_.resize(m);
  std::vector<EdgeId> at(e.pred_offsets_.begin(), e.pred_offsets_.end() - 1);
  for (EdgeId id = 0; id < m; ++id) e.pred_[at[e.edges_[id].target]++] = id;
  return std::move(enc_);
}

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_identifier(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), is_word_char);
}

class Cursor {
 public:
  Cursor(std::string_view line, std::size_t lineno, std::size_t pos = 0) : line_(line), lineno_(lineno), pos_(pos) {}

  [[noreturn]] void fail(const std::string& message, std::size_t at) const {
    throw ParseError(message, lineno_, at + 1);
  }
  [[noreturn]] void fail(const std::string& message) const { fail(message, pos_); }

  void skip_ws() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= line_.size();
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < line_.size() && line_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) {
      fail(pos_ < line_.size() ? std::string("expected '") + c + "' but found '" + line_[pos_] + "'"
                               : std::string("expected '") + c + "' at end of line");
    }
    ++pos_;
  }
  std::string_view word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < line_.size() && is_word_char(line_[pos_])) ++pos_;
    if (start == pos_) fail(pos_ < line_.size() ? "unexpected '" + std::string(1, line_[pos_]) + "'" : "unexpected end of line");
    return line_.substr(start, pos_ - start);
  }
  std::string_view number() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < line_.size() && line_[pos_] == '-') ++pos_;
    while (pos_ < line_.size() && (std::isdigit(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '/')) ++pos_;
    return line_.substr(start, pos_ - start);
  }
  std::size_t pos() {
    skip_ws();
    return pos_;
  }

 private:
  std::string_view line_;
  std::size_t lineno_;
  std::size_t pos_;
};

class TermParser {
 public:
  TermParser(EncodingBuilder& builder, const SortPlan& plan, std::size_t roots)
      : builder_(builder), plan_(plan), stamp_(roots, 0), slot_(roots, 0) {}

  void parse_root(StateId x, Cursor& c) {
    term(x, 0, c);
    if (!c.at_end()) c.fail("trailing input after term");
  }

 private:
  StateId child(SortId target, Cursor& c) {
    if (target == 0) {
      std::size_t at = c.pos();
      std::string_view name = c.word();
      auto id = builder_.find(name);
      if (!id) c.fail("unknown state '" + std::string(name) + "'", at);
      return *id;
    }
    StateId x = builder_.add_state(target);
    term(x, target, c);
    return x;
  }

  void term(StateId x, SortId s, Cursor& c) {
    const Sort& sort = plan_.sorts[s];
    switch (sort.kind) {
      case InterfaceKind::powerset:
        powerset(x, sort.element_sort, c);
        break;
      case InterfaceKind::bag:
        bag(x, sort.element_sort, c);
        break;
      case InterfaceKind::group:
      case InterfaceKind::distribution:
        weights(x, sort, c);
        break;
      case InterfaceKind::polynomial: {
        std::string shape;
        std::vector<StateId> args;
        region(sort.region, shape, args, c);
        builder_.set_type(x, builder_.intern_symbol(s, shape, static_cast<std::uint32_t>(args.size())));
        for (std::size_t i = 0; i < args.size(); ++i) builder_.add_edge(x, args[i], Label{std::uint64_t{i + 1}});
        break;
      }
    }
  }

  void next_generation() { ++generation_; }
  bool seen(StateId root) const { return stamp_[root] == generation_; }
  void see(StateId root, std::uint32_t slot) {
    stamp_[root] = generation_;
    slot_[root] = slot;
  }

  void powerset(StateId x, SortId element, Cursor& c) {
    c.expect('{');
    std::vector<StateId> members;
    if (!c.peek('}')) {
      next_generation();
      do {
        StateId y = child(element, c);
        if (element == 0) {
          if (seen(y)) continue;
          see(y, 0);
        }
        members.push_back(y);
      } while (c.peek(',') && (c.expect(','), true));
    }
    c.expect('}');
    for (StateId y : members) builder_.add_edge(x, y, Label{Unit{}});
    builder_.set_type(x, !members.empty());
  }

  void bag(StateId x, SortId element, Cursor& c) {
    c.expect('[');
    std::vector<std::pair<StateId, std::uint64_t>> members;
    if (!c.peek(']')) {
      next_generation();
      do {
        StateId y = child(element, c);
        if (element == 0 && seen(y)) {
          ++members[slot_[y]].second;
          continue;
        }
        if (element == 0) see(y, static_cast<std::uint32_t>(members.size()));
        members.emplace_back(y, 1);
      } while (c.peek(',') && (c.expect(','), true));
    }
    c.expect(']');
    std::uint64_t total = 0;
    for (auto& [y, k] : members) {
      builder_.add_edge(x, y, Label{k});
      total += k;
    }
    builder_.set_type(x, total);
  }

  void weights(StateId x, const Sort& sort, Cursor& c) {
    const bool distribution = sort.kind == InterfaceKind::distribution;
    std::size_t start = c.pos();
    c.expect('{');
    std::vector<std::pair<StateId, Rational>> entries;
    if (!c.peek('}')) {
      next_generation();
      do {
        std::size_t key_at = c.pos();
        StateId y = child(sort.element_sort, c);
        if (sort.element_sort == 0) {
          if (seen(y)) c.fail("duplicate key '" + builder_name(y) + "' in weight map", key_at);
          see(y, 0);
        }
        c.expect(':');
        std::size_t at = c.pos();
        std::string_view token = c.number();
        Rational w;
        try {
          w = parse_rational(token);
        } catch (const ParseError& e) {
          c.fail(e.message(), at);
        }
        if (w == 0) c.fail("zero weight in weight map", at);
        if (distribution && w < 0) c.fail("negative probability", at);
        entries.emplace_back(y, std::move(w));
      } while (c.peek(',') && (c.expect(','), true));
    }
    c.expect('}');
    Rational total = 0;
    for (auto& [y, w] : entries) {
      total += w;
      builder_.add_edge(x, y, Label{w});
    }
    if (distribution) {
      if (total != 1) c.fail("distribution weights sum to " + to_string(total) + ", not 1", start);
      builder_.set_type(x, Unit{});
    } else {
      builder_.set_type(x, total);
    }
  }

  void region(const PolyNode& node, std::string& shape, std::vector<StateId>& args, Cursor& c) {
    switch (node.kind) {
      case PolyNode::Kind::hole:
        shape += '?';
        args.push_back(child(node.target, c));
        break;
      case PolyNode::Kind::constant: {
        std::size_t at = c.pos();
        std::string_view w = c.word();
        if (std::find(node.constants.begin(), node.constants.end(), w) == node.constants.end()) {
          std::string expected;
          for (const auto& k : node.constants) expected += (expected.empty() ? "" : ",") + k;
          c.fail("expected one of {" + expected + "} but found '" + std::string(w) + "'", at);
        }
        shape += w;
        break;
      }
      case PolyNode::Kind::product:
        c.expect('(');
        shape += '(';
        region(node.children[0], shape, args, c);
        c.expect(',');
        shape += ", ";
        region(node.children[1], shape, args, c);
        c.expect(')');
        shape += ')';
        break;
      case PolyNode::Kind::coproduct: {
        std::size_t at = c.pos();
        std::string_view w = c.word();
        if (w == "inl") {
          shape += "inl ";
          region(node.children[0], shape, args, c);
        } else if (w == "inr") {
          shape += "inr ";
          region(node.children[1], shape, args, c);
        } else {
          c.fail("expected 'inl' or 'inr'", at);
        }
        break;
      }
      case PolyNode::Kind::exponent:
        c.expect('[');
        shape += '[';
        for (unsigned i = 0; i < node.exponent; ++i) {
          if (i > 0) {
            c.expect(',');
            shape += ", ";
          }
          region(node.children[0], shape, args, c);
        }
        c.expect(']');
        shape += ']';
        break;
    }
  }

  std::string builder_name(StateId root) const { return "#" + std::to_string(root); }

  EncodingBuilder& builder_;
  const SortPlan& plan_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> slot_;
  std::uint32_t generation_ = 0;
};

struct StateLine {
  std::size_t lineno;
  std::string_view line;
  std::size_t term_pos;
};

Encoding parse_impl(std::string_view text, const SortPlan* expected) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t lineno = 0;
  for (std::size_t start = 0; start <= text.size();) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    bool blank = std::all_of(line.begin(), line.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
    if (!blank) lines.emplace_back(lineno, line);
    start = end + 1;
  }
  if (lines.empty()) throw ParseError("missing 'functor' line", 1, 1);

  auto [flineno, fline] = lines.front();
  Cursor fc(fline, flineno);
  std::size_t kw_at = fc.pos();
  if (fc.word() != "functor") fc.fail("expected 'functor' line", kw_at);
  std::size_t expr_at = fc.pos();
  FunctorExpr functor = parse_functor(fline.substr(expr_at), flineno, expr_at + 1);
  SortPlan plan;
  if (expected) {
    if (!(expected->functor == functor)) {
      fc.fail("functor '" + to_string(functor) + "' does not match '" + to_string(expected->functor) + "'", expr_at);
    }
    plan = *expected;
  } else {
    try {
      plan = plan_sorts(functor);
    } catch (const ParseError& e) {
      throw ParseError(e.message(), flineno, expr_at + 1);
    }
  }

  EncodingBuilder builder(plan);
  std::vector<StateLine> states;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto [n, line] = lines[i];
    Cursor c(line, n);
    std::size_t at = c.pos();
    if (c.word() != "state") c.fail("expected 'state <name> = <term>'", at);
    std::size_t name_at = c.pos();
    std::string_view name = c.word();
    if (!is_identifier(name)) c.fail("invalid state name '" + std::string(name) + "'", name_at);
    if (builder.find(name)) c.fail("duplicate state '" + std::string(name) + "'", name_at);
    builder.add_root(std::string(name));
    c.expect('=');
    states.push_back({n, line, c.pos()});
  }

  TermParser terms(builder, plan, states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    Cursor c(states[i].line, states[i].lineno, states[i].term_pos);
    terms.parse_root(static_cast<StateId>(i), c);
  }
  return std::move(builder).finish();
}

class Renderer {
 public:
  Renderer(const Encoding& enc, const std::vector<std::string>& rename) : enc_(enc), rename_(rename) {}

  std::string term(StateId x) const {
    const Sort& sort = enc_.plan().sorts[enc_.sort_of(x)];
    auto out = enc_.out_edges(x);
    switch (sort.kind) {
      case InterfaceKind::powerset: {
        std::vector<std::string> items;
        for (const Edge& e : out) items.push_back(child(e.target));
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        return "{" + join(items, ",") + "}";
      }
      case InterfaceKind::bag: {
        std::map<std::string, std::uint64_t> counts;
        for (const Edge& e : out) counts[child(e.target)] += std::get<std::uint64_t>(e.label);
        std::vector<std::string> items;
        for (const auto& [item, k] : counts) items.insert(items.end(), k, item);
        return "[" + join(items, ",") + "]";
      }
      case InterfaceKind::group:
      case InterfaceKind::distribution: {
        std::map<std::string, Rational> sums;
        for (const Edge& e : out) sums[child(e.target)] += std::get<Rational>(e.label);
        std::vector<std::string> items;
        for (const auto& [item, w] : sums) {
          if (w != 0) items.push_back(item + ": " + to_string(w));
        }
        return "{" + join(items, ", ") + "}";
      }
      case InterfaceKind::polynomial: {
        const auto& sym = std::get<Symbol>(enc_.type(x));
        const std::string& shape = enc_.symbol_shape(enc_.sort_of(x), sym.id);
        std::string result;
        std::size_t arg = 0;
        for (char ch : shape) {
          if (ch == '?') {
            result += child(out[arg++].target);
          } else {
            result += ch;
          }
        }
        return result;
      }
    }
    return {};
  }

 private:
  std::string child(StateId y) const { return enc_.sort_of(y) == 0 ? rename_[y] : term(y); }

  static std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) s += sep;
      s += items[i];
    }
    return s;
  }

  const Encoding& enc_;
  const std::vector<std::string>& rename_;
};

}  // namespace

Encoding parse_coalgebra(std::string_view text) { return parse_impl(text, nullptr); }

Encoding parse_coalgebra(std::string_view text, const SortPlan& plan) { return parse_impl(text, &plan); }

Partition normalize(Partition p) {
  for (auto& block : p) std::sort(block.begin(), block.end());
  p.erase(std::remove_if(p.begin(), p.end(), [](const auto& b) { return b.empty(); }), p.end());
  std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return p;
}

bool same_partition(const Partition& a, const Partition& b) { return normalize(a) == normalize(b); }

std::string format_partition(const Encoding& enc, const Partition& p) {
  std::vector<std::vector<std::string>> blocks;
  for (const auto& block : p) {
    std::vector<std::string> names;
    for (StateId x : block) names.push_back(enc.name(x));
    std::sort(names.begin(), names.end());
    if (!names.empty()) blocks.push_back(std::move(names));
  }
  std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::string out;
  for (const auto& names : blocks) {
    out += '{';
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i) out += ',';
      out += names[i];
    }
    out += "}\n";
  }
  return out;
}

std::string render_term(const Encoding& enc, StateId x, const std::vector<std::string>& rename) {
  return Renderer(enc, rename).term(x);
}

std::string quotient_coalgebra(const Encoding& enc, const Partition& roots) {
  Partition blocks = normalize(roots);
  std::vector<std::string> rename(enc.root_count());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (StateId x : blocks[i]) rename[x] = "B" + std::to_string(i);
  }
  for (StateId x = 0; x < enc.root_count(); ++x) {
    if (rename[x].empty()) throw std::invalid_argument("partition does not cover state '" + enc.name(x) + "'");
  }
  Renderer r(enc, rename);
  std::string out = "functor " + to_string(enc.plan().functor) + "\n";
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    out += "state B" + std::to_string(i) + " = " + r.term(blocks[i].front()) + "\n";
  }
  return out;
}

}  // namespace coref

#include "coref/functor.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "coref/errors.hpp"

namespace coref {

namespace {

bool is_id_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class FunctorParser {
 public:
  FunctorParser(std::string_view text, std::size_t line, std::size_t first_column)
      : text_(text), line_(line), first_column_(first_column) {}

  FunctorExpr parse() {
    FunctorExpr f = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, first_column_ + pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) {
      fail(pos_ < text_.size() ? "expected '" + std::string(1, c) + "' but found '" + text_[pos_] + "'"
                               : "expected '" + std::string(1, c) + "' at end of input");
    }
    ++pos_;
  }

  FunctorExpr parse_sum() {
    FunctorExpr lhs = parse_product();
    while (peek('+')) {
      ++pos_;
      FunctorExpr node;
      node.kind = FunctorKind::coproduct;
      node.children.push_back(std::move(lhs));
      node.children.push_back(parse_product());
      lhs = std::move(node);
    }
    return lhs;
  }

  FunctorExpr parse_product() {
    FunctorExpr lhs = parse_power();
    while (peek('x')) {
      ++pos_;
      FunctorExpr node;
      node.kind = FunctorKind::product;
      node.children.push_back(std::move(lhs));
      node.children.push_back(parse_power());
      lhs = std::move(node);
    }
    return lhs;
  }

  FunctorExpr parse_power() {
    FunctorExpr base = parse_atom();
    while (peek('^')) {
      ++pos_;
      skip_ws();
      std::size_t start = pos_;
      unsigned long long k = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        k = k * 10 + static_cast<unsigned>(text_[pos_] - '0');
        if (k > std::numeric_limits<unsigned>::max()) fail("exponent too large");
        ++pos_;
      }
      if (start == pos_) fail("expected natural number after '^'");
      if (k == 0) {
        pos_ = start;
        fail("exponent must be at least 1");
      }
      FunctorExpr node;
      node.kind = FunctorKind::exponent;
      node.exponent = static_cast<unsigned>(k);
      node.children.push_back(std::move(base));
      base = std::move(node);
    }
    return base;
  }

  FunctorExpr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of functor expression");
    char c = text_[pos_];
    switch (c) {
      case 'X': {
        ++pos_;
        return FunctorExpr{};
      }
      case 'P':
      case 'B':
      case 'R':
      case 'D': {
        ++pos_;
        expect('(');
        FunctorExpr node;
        node.kind = c == 'P'   ? FunctorKind::powerset
                    : c == 'B' ? FunctorKind::bag
                    : c == 'R' ? FunctorKind::group
                               : FunctorKind::distribution;
        node.children.push_back(parse_sum());
        expect(')');
        return node;
      }
      case '(': {
        ++pos_;
        FunctorExpr inner = parse_sum();
        expect(')');
        return inner;
      }
      case '{':
        return parse_constant();
      default:
        fail("unexpected '" + std::string(1, c) + "'");
    }
  }

  FunctorExpr parse_constant() {
    std::size_t open = pos_;
    expect('{');
    FunctorExpr node;
    node.kind = FunctorKind::constant;
    if (peek('}')) {
      pos_ = open;
      fail("constant set must not be empty");
    }
    std::set<std::string> seen;
    while (true) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_id_char(text_[pos_])) ++pos_;
      if (start == pos_) fail("expected identifier in constant set");
      std::string id(text_.substr(start, pos_ - start));
      if (!seen.insert(id).second) {
        pos_ = start;
        fail("duplicate constant '" + id + "'");
      }
      node.constants.push_back(std::move(id));
      if (peek(',')) {
        ++pos_;
        continue;
      }
      expect('}');
      break;
    }
    return node;
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t first_column_;
  std::size_t pos_ = 0;
};

int precedence(const FunctorExpr& f) {
  switch (f.kind) {
    case FunctorKind::coproduct:
      return 1;
    case FunctorKind::product:
      return 2;
    case FunctorKind::exponent:
      return 3;
    default:
      return 4;
  }
}

void print(const FunctorExpr& f, int context, std::string& out) {
  bool parens = precedence(f) < context;
  if (parens) out += '(';
  switch (f.kind) {
    case FunctorKind::variable:
      out += 'X';
      break;
    case FunctorKind::powerset:
    case FunctorKind::bag:
    case FunctorKind::group:
    case FunctorKind::distribution:
      out += f.kind == FunctorKind::powerset ? "P("
             : f.kind == FunctorKind::bag    ? "B("
             : f.kind == FunctorKind::group  ? "R("
                                             : "D(";
      print(f.children[0], 0, out);
      out += ')';
      break;
    case FunctorKind::product:
      print(f.children[0], 2, out);
      out += " x ";
      print(f.children[1], 3, out);
      break;
    case FunctorKind::coproduct:
      print(f.children[0], 1, out);
      out += " + ";
      print(f.children[1], 2, out);
      break;
    case FunctorKind::constant:
      out += '{';
      for (std::size_t i = 0; i < f.constants.size(); ++i) {
        if (i) out += ',';
        out += f.constants[i];
      }
      out += '}';
      break;
    case FunctorKind::exponent:
      print(f.children[0], 3, out);
      out += '^';
      out += std::to_string(f.exponent);
      break;
  }
  if (parens) out += ')';
}

bool is_branching(FunctorKind k) {
  return k == FunctorKind::powerset || k == FunctorKind::bag || k == FunctorKind::group ||
         k == FunctorKind::distribution;
}

InterfaceKind interface_of(FunctorKind k) {
  switch (k) {
    case FunctorKind::powerset:
      return InterfaceKind::powerset;
    case FunctorKind::bag:
      return InterfaceKind::bag;
    case FunctorKind::group:
      return InterfaceKind::group;
    case FunctorKind::distribution:
      return InterfaceKind::distribution;
    default:
      return InterfaceKind::polynomial;
  }
}

class Planner {
 public:
  SortPlan run(const FunctorExpr& functor) {
    plan_.functor = functor;
    if (is_branching(functor.kind)) {
      branching_sort(functor);
    } else {
      polynomial_sort(functor);
    }
    for (Sort& s : plan_.sorts) {
      std::sort(s.successors.begin(), s.successors.end());
      s.successors.erase(std::unique(s.successors.begin(), s.successors.end()), s.successors.end());
    }
    return std::move(plan_);
  }

 private:
  SortId fresh(InterfaceKind kind) {
    Sort s;
    s.kind = kind;
    plan_.sorts.push_back(std::move(s));
    return static_cast<SortId>(plan_.sorts.size() - 1);
  }

  SortId branching_sort(const FunctorExpr& node) {
    SortId id = fresh(interface_of(node.kind));
    const FunctorExpr& child = node.children[0];
    SortId element = 0;
    if (child.kind == FunctorKind::variable) {
      element = 0;
    } else if (is_branching(child.kind)) {
      element = branching_sort(child);
    } else {
      element = polynomial_sort(child);
    }
    plan_.sorts[id].element_sort = element;
    plan_.sorts[id].successors.push_back(element);
    return id;
  }

  SortId polynomial_sort(const FunctorExpr& region) {
    SortId id = fresh(InterfaceKind::polynomial);
    std::vector<SortId> successors;
    PolyNode root = lower(region, successors);
    unsigned long long arity = arity_bound(root);
    if (arity > max_polynomial_arity) {
      throw ParseError("polynomial region '" + to_string(region) + "' admits arity " + std::to_string(arity) +
                       " (at most " + std::to_string(max_polynomial_arity) + " supported)");
    }
    plan_.sorts[id].region = std::move(root);
    plan_.sorts[id].max_arity = static_cast<unsigned>(arity);
    plan_.sorts[id].successors = std::move(successors);
    return id;
  }

  PolyNode lower(const FunctorExpr& f, std::vector<SortId>& successors) {
    PolyNode node;
    switch (f.kind) {
      case FunctorKind::variable:
        node.kind = PolyNode::Kind::hole;
        node.target = 0;
        successors.push_back(0);
        break;
      case FunctorKind::powerset:
      case FunctorKind::bag:
      case FunctorKind::group:
      case FunctorKind::distribution:
        node.kind = PolyNode::Kind::hole;
        node.target = branching_sort(f);
        successors.push_back(node.target);
        break;
      case FunctorKind::product:
      case FunctorKind::coproduct:
        node.kind = f.kind == FunctorKind::product ? PolyNode::Kind::product : PolyNode::Kind::coproduct;
        node.children.push_back(lower(f.children[0], successors));
        node.children.push_back(lower(f.children[1], successors));
        break;
      case FunctorKind::constant:
        node.kind = PolyNode::Kind::constant;
        node.constants = f.constants;
        break;
      case FunctorKind::exponent:
        node.kind = PolyNode::Kind::exponent;
        node.exponent = f.exponent;
        node.children.push_back(lower(f.children[0], successors));
        break;
    }
    return node;
  }

  static unsigned long long arity_bound(const PolyNode& n) {
    switch (n.kind) {
      case PolyNode::Kind::hole:
        return 1;
      case PolyNode::Kind::constant:
        return 0;
      case PolyNode::Kind::product:
        return arity_bound(n.children[0]) + arity_bound(n.children[1]);
      case PolyNode::Kind::coproduct:
        return std::max(arity_bound(n.children[0]), arity_bound(n.children[1]));
      case PolyNode::Kind::exponent: {
        unsigned long long inner = arity_bound(n.children[0]);
        // saturate; anything above the supported bound is rejected anyway
        return inner == 0 ? 0 : std::min<unsigned long long>(inner * n.exponent, 1ULL << 32);
      }
    }
    return 0;
  }

  SortPlan plan_;
};

}  // namespace

FunctorExpr parse_functor(std::string_view text, std::size_t line, std::size_t first_column) {
  return FunctorParser(text, line, first_column).parse();
}

std::string to_string(const FunctorExpr& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

std::string_view to_string(InterfaceKind kind) {
  switch (kind) {
    case InterfaceKind::powerset:
      return "powerset";
    case InterfaceKind::bag:
      return "bag";
    case InterfaceKind::group:
      return "group";
    case InterfaceKind::distribution:
      return "distribution";
    case InterfaceKind::polynomial:
      return "polynomial";
  }
  return "?";
}

SortPlan plan_sorts(const FunctorExpr& functor) { return Planner().run(functor); }

}  // namespace coref

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace coref {

enum class FunctorKind : std::uint8_t {
  variable,      // X
  powerset,      // P(F)
  bag,           // B(F)
  group,         // R(F), rational-valued
  distribution,  // D(F)
  product,       // F x F
  coproduct,     // F + F
  constant,      // {a,b,...}
  exponent,      // F^k
};

/// Syntax tree of a system type.
struct FunctorExpr {
  FunctorKind kind = FunctorKind::variable;
  std::vector<FunctorExpr> children;
  std::vector<std::string> constants;
  unsigned exponent = 0;

  friend bool operator==(const FunctorExpr&, const FunctorExpr&) = default;
};

/// Grammar:
///   F ::= 'X' | 'P(' F ')' | 'B(' F ')' | 'R(' F ')' | 'D(' F ')'
///       | F 'x' F | F '+' F | '{' id (',' id)* '}' | F '^' nat | '(' F ')'
/// `^` binds tighter than `x`, which binds tighter than `+`; binary operators associate
/// to the left. Errors carry positions relative to (`line`, `first_column`).
FunctorExpr parse_functor(std::string_view text, std::size_t line = 1, std::size_t first_column = 1);

/// Canonical printing with minimal parentheses; parse_functor(to_string(f)) == f.
std::string to_string(const FunctorExpr& f);

enum class InterfaceKind : std::uint8_t { powerset, bag, group, distribution, polynomial };

std::string_view to_string(InterfaceKind kind);

using SortId = std::uint32_t;

/// A node of a maximal polynomial region. Holes are the places where a successor state
/// sits: either the variable X (sort 0) or a nested P/B/R/D node, which owns its own sort.
struct PolyNode {
  enum class Kind : std::uint8_t { hole, product, coproduct, constant, exponent };

  Kind kind = Kind::hole;
  std::vector<PolyNode> children;
  std::vector<std::string> constants;
  unsigned exponent = 0;
  SortId target = 0;  // holes only
};

struct Sort {
  InterfaceKind kind = InterfaceKind::polynomial;
  /// P/B/R/D sorts: the sort of the elements.
  SortId element_sort = 0;
  /// Polynomial sorts: the region and its largest operation-symbol arity.
  PolyNode region;
  unsigned max_arity = 0;
  /// Sorts that successors of states of this sort live in (deduplicated, ascending).
  std::vector<SortId> successors;
};

/// Multi-sorted decomposition of a composite functor. Sort 0 is the user-visible sort.
struct SortPlan {
  FunctorExpr functor;
  std::vector<Sort> sorts;
};

/// Largest operation-symbol arity supported by the polynomial interface.
inline constexpr unsigned max_polynomial_arity = 64;

/// Cuts the expression at every P/B/R/D node and every maximal polynomial region.
/// Throws ParseError if a polynomial region admits arities above max_polynomial_arity.
SortPlan plan_sorts(const FunctorExpr& functor);

}  // namespace coref

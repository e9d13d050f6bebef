#pragma once

// Refinement interfaces: for each base functor, a label alphabet, a weight type, and the
// init/update pair that lets the refiner compute how a state's successor structure is
// distributed over a subblock S inside a compound block C, looking only at edges into S.
//
// Three-valued results use the convention 0 = outside C, 1 = in C\S, 2 = in S.

#include <cassert>
#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include "coref/errors.hpp"
#include "coref/functor.hpp"
#include "coref/rational.hpp"

namespace coref {

struct Unit {
  friend bool operator==(Unit, Unit) = default;
};

/// Edge label: unit (powerset), natural number (bag multiplicity or polynomial argument
/// position, 1-based), or nonzero rational (group / distribution weight).
using Label = std::variant<Unit, std::uint64_t, Rational>;

/// Interned operation symbol of a polynomial sort.
struct Symbol {
  std::uint32_t id = 0;
  std::uint32_t arity = 0;
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Canonical H1 value: distribution -> Unit, powerset -> bool (nonempty?), bag -> total
/// multiplicity, group -> total weight, polynomial -> operation symbol.
using TypeValue = std::variant<Unit, bool, std::uint64_t, Rational, Symbol>;

/// (edge count outside C, edge count into C); powerset and bag.
struct CountPair {
  std::uint64_t outside = 0;
  std::uint64_t inside = 0;
  friend bool operator==(const CountPair&, const CountPair&) = default;
};

/// (weight outside C, weight inside C); group and distribution.
struct RationalPair {
  Rational outside;
  Rational inside;
  friend bool operator==(const RationalPair& a, const RationalPair& b) {
    return a.outside == b.outside && a.inside == b.inside;
  }
};

/// sigma(b_1..b_n) with b_i in {0,1}; bit i-1 of `inside` is b_i.
struct PolyWeight {
  std::uint32_t symbol = 0;
  std::uint32_t arity = 0;
  std::uint64_t inside = 0;
  friend bool operator==(const PolyWeight&, const PolyWeight&) = default;
};

using Weight = std::variant<CountPair, RationalPair, PolyWeight>;

/// Does the successor structure meet (outside C, C\S, S)?
struct PowersetThree {
  bool outside = false;
  bool rest = false;
  bool subblock = false;
  friend bool operator==(const PowersetThree&, const PowersetThree&) = default;
};

struct CountTriple {
  std::uint64_t outside = 0;
  std::uint64_t rest = 0;
  std::uint64_t subblock = 0;
  friend bool operator==(const CountTriple&, const CountTriple&) = default;
};

struct RationalTriple {
  Rational outside;
  Rational rest;
  Rational subblock;
  friend bool operator==(const RationalTriple& a, const RationalTriple& b) {
    return a.outside == b.outside && a.rest == b.rest && a.subblock == b.subblock;
  }
};

/// sigma(v_1..v_n): v_i = 0 if bit i-1 of `in_block` is clear, 2 if it is set in
/// `in_subblock`, 1 otherwise. `in_subblock` is a subset of `in_block`.
struct PolyThree {
  std::uint32_t symbol = 0;
  std::uint32_t arity = 0;
  std::uint64_t in_block = 0;
  std::uint64_t in_subblock = 0;
  friend bool operator==(const PolyThree&, const PolyThree&) = default;
};

using ThreeValue = std::variant<PowersetThree, CountTriple, RationalTriple, PolyThree>;

/// Result of update: (w(S), H chi_S^C, w(C\S)).
template <class W, class V>
struct Updated {
  W subblock;
  V three;
  W rest;
  friend bool operator==(const Updated& a, const Updated& b) {
    return a.subblock == b.subblock && a.three == b.three && a.rest == b.rest;
  }
};

namespace detail {

template <class T>
const T& expect_label(const Label& label, std::string_view iface) {
  if (const T* v = std::get_if<T>(&label)) return *v;
  throw InterfaceMisuse("label of the wrong kind passed to the " + std::string(iface) + " interface");
}

template <class T>
const T& expect_type(const TypeValue& type, std::string_view iface) {
  if (const T* v = std::get_if<T>(&type)) return *v;
  throw InterfaceMisuse("type value of the wrong kind passed to the " + std::string(iface) + " interface");
}

inline std::uint64_t low_bits(std::uint32_t n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

}  // namespace detail

/// Finite powerset. Weights count edges, since knowing only whether C is hit cannot tell
/// whether C\S is hit once S is split off.
struct PowersetInterface {
  using weight_type = CountPair;
  using three_type = PowersetThree;
  static constexpr InterfaceKind kind = InterfaceKind::powerset;

  static CountPair init(const TypeValue& type, std::span<const Label> labels) {
    detail::expect_type<bool>(type, "powerset");
    for (const Label& l : labels) detail::expect_label<Unit>(l, "powerset");
    return {0, labels.size()};
  }

  static Updated<CountPair, PowersetThree> update(std::span<const Label> labels, const CountPair& w) {
    for (const Label& l : labels) detail::expect_label<Unit>(l, "powerset");
    std::uint64_t n = labels.size();
    if (n > w.inside) throw InvariantError("powerset update: more edges into S than into C");
    std::uint64_t rest = w.inside - n;
    return {{w.outside + rest, n}, {w.outside > 0, rest > 0, n > 0}, {w.outside + n, rest}};
  }
};

/// Bags, i.e. the monoid-valued functor for the natural numbers.
struct BagInterface {
  using weight_type = CountPair;
  using three_type = CountTriple;
  static constexpr InterfaceKind kind = InterfaceKind::bag;

  static std::uint64_t sum(std::span<const Label> labels) {
    std::uint64_t s = 0;
    for (const Label& l : labels) s += detail::expect_label<std::uint64_t>(l, "bag");
    return s;
  }

  static CountPair init(const TypeValue& type, std::span<const Label> labels) {
    detail::expect_type<std::uint64_t>(type, "bag");
    return {0, sum(labels)};
  }

  static Updated<CountPair, CountTriple> update(std::span<const Label> labels, const CountPair& w) {
    std::uint64_t s = sum(labels);
    if (s > w.inside) {
      // the middle component would leave N; unreachable from a valid encoding
      assert(false && "bag update: weight into S exceeds weight into C");
      return {{0, 0}, {0, 0, 0}, {0, 0}};
    }
    CountTriple t{w.outside, w.inside - s, s};
    return {{t.outside + t.rest, t.subblock}, t, {t.outside + t.subblock, t.rest}};
  }
};

/// Rational-valued functor (an abelian group under addition).
struct GroupInterface {
  using weight_type = RationalPair;
  using three_type = RationalTriple;
  static constexpr InterfaceKind kind = InterfaceKind::group;

  static Rational sum(std::span<const Label> labels, std::string_view iface = "group") {
    Rational s = 0;
    for (const Label& l : labels) s += detail::expect_label<Rational>(l, iface);
    return s;
  }

  static RationalPair init(const TypeValue& type, std::span<const Label> labels) {
    detail::expect_type<Rational>(type, "group");
    return {Rational(0), sum(labels)};
  }

  static Updated<RationalPair, RationalTriple> update(std::span<const Label> labels, const RationalPair& w) {
    Rational s = sum(labels);
    RationalTriple t{w.outside, w.inside - s, s};
    RationalPair in_s{t.outside + t.rest, t.subblock};
    RationalPair rest{t.outside + t.subblock, t.rest};
    return {std::move(in_s), std::move(t), std::move(rest)};
  }
};

/// Finitely supported probability distributions.
struct DistributionInterface {
  using weight_type = RationalPair;
  using three_type = RationalTriple;
  static constexpr InterfaceKind kind = InterfaceKind::distribution;

  static RationalPair init(const TypeValue& type, std::span<const Label> labels) {
    detail::expect_type<Unit>(type, "distribution");
    for (const Label& l : labels) detail::expect_label<Rational>(l, "distribution");
    return {Rational(0), Rational(1)};
  }

  static Updated<RationalPair, RationalTriple> update(std::span<const Label> labels, const RationalPair& w) {
    Rational s = GroupInterface::sum(labels, "distribution");
    RationalTriple t{w.outside, w.inside - s, s};
    if (sgn(t.outside) < 0 || sgn(t.rest) < 0 || sgn(t.subblock) < 0 || t.outside + t.rest + t.subblock != 1) {
      throw InvariantError("distribution update left the three-point simplex");
    }
    RationalPair in_s{t.outside + t.rest, t.subblock};
    RationalPair rest{t.outside + t.subblock, t.rest};
    return {std::move(in_s), std::move(t), std::move(rest)};
  }
};

/// Polynomial functor of bounded arity; labels are argument positions.
struct PolynomialInterface {
  using weight_type = PolyWeight;
  using three_type = PolyThree;
  static constexpr InterfaceKind kind = InterfaceKind::polynomial;

  static PolyWeight init(const TypeValue& type, std::span<const Label> labels) {
    const Symbol& sym = detail::expect_type<Symbol>(type, "polynomial");
    for (const Label& l : labels) position_bit(l, sym.arity);
    return {sym.id, sym.arity, detail::low_bits(sym.arity)};
  }

  static Updated<PolyWeight, PolyThree> update(std::span<const Label> labels, const PolyWeight& w) {
    std::uint64_t in_s = 0;
    for (const Label& l : labels) in_s |= position_bit(l, w.arity);
    if ((in_s & ~w.inside) != 0) throw InvariantError("polynomial update: argument in S but not in C");
    return {{w.symbol, w.arity, in_s}, {w.symbol, w.arity, w.inside, in_s}, {w.symbol, w.arity, w.inside & ~in_s}};
  }

 private:
  static std::uint64_t position_bit(const Label& l, std::uint32_t arity) {
    std::uint64_t pos = detail::expect_label<std::uint64_t>(l, "polynomial");
    if (pos == 0 || pos > arity) throw InterfaceMisuse("polynomial label outside 1..arity");
    return std::uint64_t{1} << (pos - 1);
  }
};

/// Which Label alternative an interface expects.
bool label_fits(InterfaceKind kind, const Label& label);

// Kind-dispatched entry points over the variant types.

Weight init(InterfaceKind kind, const TypeValue& type, std::span<const Label> labels);

struct UpdateResult {
  Weight subblock;
  ThreeValue three;
  Weight rest;
};

UpdateResult update(InterfaceKind kind, std::span<const Label> labels, const Weight& w);

// Canonical byte encodings. Equal values have equal encodings; within one interface the
// encoding is injective, so byte order is a total order on values.

void append_h3(std::string& out, const PowersetThree& v);
void append_h3(std::string& out, const CountTriple& v);
void append_h3(std::string& out, const RationalTriple& v);
void append_h3(std::string& out, const PolyThree& v);
std::string encode_h3(const ThreeValue& v);

void append_type(std::string& out, const TypeValue& t);
std::string encode_type(const TypeValue& t);

std::string to_string(const ThreeValue& v);
std::string to_string(const Weight& w);

}  // namespace coref

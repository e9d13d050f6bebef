#include "coref/interfaces.hpp"

namespace coref {

namespace {

void append_u64(std::string& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

void append_u32(std::string& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

template <class Iface>
UpdateResult typed_update(std::span<const Label> labels, const Weight& w) {
  using W = typename Iface::weight_type;
  const W* typed = std::get_if<W>(&w);
  if (!typed) {
    throw InterfaceMisuse("weight of the wrong kind passed to the " + std::string(to_string(Iface::kind)) +
                          " interface");
  }
  auto r = Iface::update(labels, *typed);
  return {std::move(r.subblock), std::move(r.three), std::move(r.rest)};
}

std::string digits(const PolyThree& v) {
  std::string s;
  for (std::uint32_t i = 0; i < v.arity; ++i) {
    std::uint64_t bit = std::uint64_t{1} << i;
    s += (v.in_subblock & bit) ? '2' : (v.in_block & bit) ? '1' : '0';
  }
  return s;
}

}  // namespace

bool label_fits(InterfaceKind kind, const Label& label) {
  switch (kind) {
    case InterfaceKind::powerset:
      return std::holds_alternative<Unit>(label);
    case InterfaceKind::bag:
    case InterfaceKind::polynomial:
      return std::holds_alternative<std::uint64_t>(label);
    case InterfaceKind::group:
    case InterfaceKind::distribution:
      return std::holds_alternative<Rational>(label);
  }
  return false;
}

Weight init(InterfaceKind kind, const TypeValue& type, std::span<const Label> labels) {
  switch (kind) {
    case InterfaceKind::powerset:
      return PowersetInterface::init(type, labels);
    case InterfaceKind::bag:
      return BagInterface::init(type, labels);
    case InterfaceKind::group:
      return GroupInterface::init(type, labels);
    case InterfaceKind::distribution:
      return DistributionInterface::init(type, labels);
    case InterfaceKind::polynomial:
      return PolynomialInterface::init(type, labels);
  }
  throw InterfaceMisuse("unknown interface");
}

UpdateResult update(InterfaceKind kind, std::span<const Label> labels, const Weight& w) {
  switch (kind) {
    case InterfaceKind::powerset:
      return typed_update<PowersetInterface>(labels, w);
    case InterfaceKind::bag:
      return typed_update<BagInterface>(labels, w);
    case InterfaceKind::group:
      return typed_update<GroupInterface>(labels, w);
    case InterfaceKind::distribution:
      return typed_update<DistributionInterface>(labels, w);
    case InterfaceKind::polynomial:
      return typed_update<PolynomialInterface>(labels, w);
  }
  throw InterfaceMisuse("unknown interface");
}

void append_h3(std::string& out, const PowersetThree& v) {
  out.push_back(static_cast<char>((v.outside ? 4 : 0) | (v.rest ? 2 : 0) | (v.subblock ? 1 : 0)));
}

void append_h3(std::string& out, const CountTriple& v) {
  append_u64(out, v.outside);
  append_u64(out, v.rest);
  append_u64(out, v.subblock);
}

void append_h3(std::string& out, const RationalTriple& v) {
  append_bytes(out, v.outside);
  append_bytes(out, v.rest);
  append_bytes(out, v.subblock);
}

void append_h3(std::string& out, const PolyThree& v) {
  append_u32(out, v.symbol);
  for (std::uint32_t i = 0; i < v.arity; ++i) {
    std::uint64_t bit = std::uint64_t{1} << i;
    out.push_back((v.in_subblock & bit) ? 2 : (v.in_block & bit) ? 1 : 0);
  }
}

std::string encode_h3(const ThreeValue& v) {
  std::string out;
  std::visit([&](const auto& x) { append_h3(out, x); }, v);
  return out;
}

void append_type(std::string& out, const TypeValue& t) {
  out.push_back(static_cast<char>(t.index()));
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          out.push_back(x ? 1 : 0);
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          append_u64(out, x);
        } else if constexpr (std::is_same_v<T, Rational>) {
          append_bytes(out, x);
        } else if constexpr (std::is_same_v<T, Symbol>) {
          append_u32(out, x.id);
        }
      },
      t);
}

std::string encode_type(const TypeValue& t) {
  std::string out;
  append_type(out, t);
  return out;
}

std::string to_string(const ThreeValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PowersetThree>) {
          return std::string("(") + (x.outside ? "1" : "0") + "," + (x.rest ? "1" : "0") + "," +
                 (x.subblock ? "1" : "0") + ")";
        } else if constexpr (std::is_same_v<T, CountTriple>) {
          return "(" + std::to_string(x.outside) + "," + std::to_string(x.rest) + "," + std::to_string(x.subblock) +
                 ")";
        } else if constexpr (std::is_same_v<T, RationalTriple>) {
          return "(" + to_string(x.outside) + "," + to_string(x.rest) + "," + to_string(x.subblock) + ")";
        } else {
          return "s" + std::to_string(x.symbol) + "(" + digits(x) + ")";
        }
      },
      v);
}

std::string to_string(const Weight& w) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CountPair>) {
          return "(" + std::to_string(x.outside) + "," + std::to_string(x.inside) + ")";
        } else if constexpr (std::is_same_v<T, RationalPair>) {
          return "(" + to_string(x.outside) + "," + to_string(x.inside) + ")";
        } else {
          std::string s = "s" + std::to_string(x.symbol) + "(";
          for (std::uint32_t i = 0; i < x.arity; ++i) s += (x.inside >> i) & 1 ? '1' : '0';
          return s + ")";
        }
      },
      w);
}

}  // namespace coref

#include "coref/rational.hpp"

#include <cctype>
#include <cstdint>
#include <vector>

#include "coref/errors.hpp"

namespace coref {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

void append_magnitude(std::string& out, const mpz_class& z) {
  std::size_t count = 0;
  std::vector<unsigned char> buf((mpz_sizeinbase(z.get_mpz_t(), 2) + 7) / 8 + 1);
  mpz_export(buf.data(), &count, 1, 1, 1, 0, z.get_mpz_t());
  // length prefix keeps the encoding self-delimiting
  std::uint32_t len = static_cast<std::uint32_t>(count);
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((len >> shift) & 0xff));
  out.append(reinterpret_cast<const char*>(buf.data()), count);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  std::string_view num = body;
  std::string_view den = "1";
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    num = body.substr(0, slash);
    den = body.substr(slash + 1);
  }
  if (!all_digits(num) || !all_digits(den)) {
    throw ParseError("malformed rational '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational r(negative ? mpz_class(-n) : n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_str();
}

void append_bytes(std::string& out, const Rational& value) {
  int sign = sgn(value);
  out.push_back(static_cast<char>(sign + 1));
  append_magnitude(out, abs(value.get_num()));
  append_magnitude(out, value.get_den());
}

}  // namespace coref

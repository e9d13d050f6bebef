#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace coref {

/// Exact weights. Always kept in canonical form (reduced, positive denominator).
using Rational = mpq_class;

/// Parses `[-]?digits(/digits)?`. Throws ParseError (without position) on bad syntax
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// `p` when the denominator is 1, `p/q` otherwise.
std::string to_string(const Rational& value);

/// Appends an injective, self-delimiting byte encoding of `value` to `out`.
void append_bytes(std::string& out, const Rational& value);

}  // namespace coref

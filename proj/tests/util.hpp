#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "coref/encoding.hpp"

namespace coref::test {

inline std::string data_file(const std::string& name) {
  std::ifstream in(std::string(COREF_TEST_DATA) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& name) { return std::string(COREF_TEST_DATA) + "/" + name; }

inline Encoding load(const std::string& name) { return parse_coalgebra(data_file(name)); }

/// Partition of the named root states, given as text like "{a,b}\n{c}\n".
inline std::string blocks(const Encoding& enc, const Partition& p) { return format_partition(enc, p); }

}  // namespace coref::test

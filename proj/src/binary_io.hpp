#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "hgr/error.hpp"

namespace hgr::detail {

inline void write_le_double(std::ostream& out, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  char bytes[8];
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  }
  out.write(bytes, 8);
}

inline double read_le_double(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) {
    throw Error(Errc::FormatError, "truncated binary payload");
  }
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  }
  double x;
  std::memcpy(&x, &bits, sizeof x);
  return x;
}

}  // namespace hgr::detail

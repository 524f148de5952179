#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace eps0 {

// Arbitrary-precision naturals back every numeric code in the project.
// Formula codes nest quadratically, so fixed-width integers are not an option.
using BigNat = boost::multiprecision::cpp_int;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct LimitError : Error {
  explicit LimitError(const std::string& what) : Error(what) {}
};

inline BigNat isqrt(const BigNat& n) { return boost::multiprecision::sqrt(n); }

// Square pairing p(a,b) = (a+b)^2 + a.  Injective on N x N, not surjective,
// and (unlike the Cantor polynomial) writable as a {0,1,+,*} term, which is
// what lets coded bounds appear inside object-language formulas.
inline BigNat pack_pair(const BigNat& a, const BigNat& b) {
  BigNat s = a + b;
  return s * s + a;
}

inline std::optional<std::pair<BigNat, BigNat>> unpack_pair(const BigNat& n) {
  BigNat s = isqrt(n);
  BigNat a = n - s * s;
  if (a > s) return std::nullopt;  // n is not of the form (a+b)^2 + a
  return std::make_pair(a, s - a);
}

// List coding: nil = 0, cons(h, t) = p(h, t) + 1.
inline BigNat pack_cons(const BigNat& head, const BigNat& tail) {
  return pack_pair(head, tail) + 1;
}

inline std::optional<std::pair<BigNat, BigNat>> unpack_cons(const BigNat& n) {
  if (n == 0) return std::nullopt;
  return unpack_pair(n - 1);
}

inline std::uint64_t to_u64(const BigNat& n, const char* what) {
  if (n > BigNat(UINT64_MAX)) throw LimitError(std::string(what) + ": value too large");
  return n.convert_to<std::uint64_t>();
}

}  // namespace eps0

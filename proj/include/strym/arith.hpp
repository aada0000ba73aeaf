#pragma once

#include <limits>

// Integer semantics shared by the IR evaluator and the reference oracle:
// two's-complement wrap-around add/sub/mul, division and modulo truncated
// toward zero, division by zero signalled via DivByZero.
namespace strym::arith {

struct DivByZero {};

inline long long add(long long a, long long b) {
  return static_cast<long long>(static_cast<unsigned long long>(a) +
                                static_cast<unsigned long long>(b));
}
inline long long sub(long long a, long long b) {
  return static_cast<long long>(static_cast<unsigned long long>(a) -
                                static_cast<unsigned long long>(b));
}
inline long long mul(long long a, long long b) {
  return static_cast<long long>(static_cast<unsigned long long>(a) *
                                static_cast<unsigned long long>(b));
}
inline long long div_trunc(long long a, long long b) {
  if (b == 0) throw DivByZero{};
  if (a == std::numeric_limits<long long>::min() && b == -1) return a;
  return a / b;
}
inline long long mod_trunc(long long a, long long b) {
  if (b == 0) throw DivByZero{};
  if (a == std::numeric_limits<long long>::min() && b == -1) return 0;
  return a % b;
}
inline long long min2(long long a, long long b) { return a < b ? a : b; }

}  // namespace strym::arith

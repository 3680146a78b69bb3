#pragma once

#include <string>

namespace zcurv {

enum class Parity { even = 0, odd = 1 };

inline Parity operator+(Parity a, Parity b) {
  return (static_cast<int>(a) ^ static_cast<int>(b)) ? Parity::odd : Parity::even;
}

inline int bit(Parity p) { return static_cast<int>(p); }

/// (-1)^(p q) as +1 or -1.
inline int koszul_sign(Parity p, Parity q) { return (bit(p) & bit(q)) ? -1 : 1; }

inline std::string to_string(Parity p) { return p == Parity::odd ? "odd" : "even"; }

}  // namespace zcurv

#pragma once

#include <string>

#include "parity.hpp"

namespace zcurv {

/// Directions a covariant derivative can differentiate along: the even
/// partials and the odd superderivations D+ = d/dxi + xi d/dx,
/// D- = d/deta + eta d/dy.
enum class Direction { x, y, plus, minus };

inline Parity parity(Direction d) {
  return d == Direction::plus || d == Direction::minus ? Parity::odd : Parity::even;
}

inline std::string to_string(Direction d) {
  switch (d) {
    case Direction::x: return "d_x";
    case Direction::y: return "d_y";
    case Direction::plus: return "D+";
    case Direction::minus: return "D-";
  }
  return "?";
}

}  // namespace zcurv

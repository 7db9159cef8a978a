#pragma once

namespace qsl {

/// Physical constants used when reporting bounds. Natural units by default.
struct Units {
  double hbar = 1.0;
  double k_b = 1.0;
};

}  // namespace qsl

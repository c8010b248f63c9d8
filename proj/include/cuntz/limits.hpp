#pragma once

#include <cstddef>

namespace cuntz {

/// Declared input limits. Exceeding any of them raises ResourceLimitError.
struct Limits {
  std::size_t max_rank = 4;              // free rank d of the group
  std::size_t max_weights = 8;           // n
  long long max_coordinate = 64;         // |free coordinate| of a weight
  long long max_exponent = 64;           // lcm of the torsion orders
  std::size_t max_search_states = 2'000'000;
  std::size_t max_finite_order = 4096;   // explicit closures, enumerations, K-theory matrices
  std::size_t max_brute_force_order = 16;
  std::size_t max_dot_nodes = 1024;
};

}  // namespace cuntz

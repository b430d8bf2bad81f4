#pragma once

#include <cstdint>

namespace frslab {

// Resource caps shared across the library. Every cap is overridable per call
// site (and from the CLI); the defaults keep desk-scale grids interactive.
struct Limits {
  std::uint64_t enumeration_cap = 10'000'000;  // elements/points listed eagerly
  std::uint64_t naive_cap = 10'000'000;        // |R|^c bound for brute force
  std::uint64_t live_node_cap = 4'000'000;     // lifted-engine working set
  int threads = 0;                             // 0 = OpenMP default
};

}  // namespace frslab

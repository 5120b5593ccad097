#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "rwc/word.hpp"

namespace rwc {

// Single seeded stream behind every random decision of a run. Bounded
// draws use rejection sampling so results do not depend on a library's
// distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool coin() { return below(2) == 1; }

  // Uniform element of a sorted set; set must be non-empty.
  NodeId pick(const std::set<NodeId>& s) {
    auto it = s.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(below(s.size())));
    return *it;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace rwc

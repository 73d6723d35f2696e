#pragma once

#include <cstdint>

namespace hrrxml {

struct RngSeed {
  std::uint64_t value = 0;

  friend constexpr bool operator==(RngSeed, RngSeed) = default;
};

// Stafford "mix13" finalizer as used by SplitMix64.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent child seed for (stream, index). O(1), so any member of a seeded
// family can be regenerated without touching its siblings.
constexpr RngSeed derive_seed(RngSeed base, std::uint64_t stream,
                              std::uint64_t index = 0) noexcept {
  return RngSeed{splitmix64(splitmix64(base.value ^ splitmix64(stream)) + index)};
}

}  // namespace hrrxml

#ifndef SKEWMIX_RANDOM_HPP
#define SKEWMIX_RANDOM_HPP

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <cstdint>
#include <utility>
#include <vector>

namespace skewmix {

// MT19937-64 is fully specified by the standard, and the Boost.Random
// distributions built on it are implemented identically on every platform,
// so seeded draws are bit-reproducible.
using Rng = boost::random::mt19937_64;

/// SplitMix64 finalizer; maps (seed, stream) to a decorrelated child seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(derive_seed(seed, stream));
}

/// Fisher-Yates with a Boost distribution; std::shuffle is not portable
/// across standard libraries.
template <class T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t k = items.size(); k > 1; --k) {
    boost::random::uniform_int_distribution<std::size_t> pick(0, k - 1);
    std::swap(items[k - 1], items[pick(rng)]);
  }
}

}  // namespace skewmix

#endif  // SKEWMIX_RANDOM_HPP

#pragma once

#include <cmath>
#include <cstdint>

namespace swh {

/// Stateless 64-bit mix (splitmix64 finalizer). Good avalanche; used to build
/// the counter-based generators below.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Hash of a (seed, stream, counter) triple to a 64-bit word. Counter-based:
/// any (stream, counter) cell can be evaluated independently, so results do
/// not depend on evaluation order or parallel schedule.
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
  return mix64(counter + mix64(stream + mix64(seed)));
}

/// Counter-based generator bound to one (seed, stream) pair. Draws consume
/// consecutive counter values; normal() caches the second Box-Muller variate.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream,
             std::uint64_t counter_base = 0)
      : seed_(seed), stream_(stream), counter_(counter_base) {}

  /// Uniform on (0,1).
  double uniform() {
    std::uint64_t h = counter_hash(seed_, stream_, counter_++);
    return (static_cast<double>(h >> 11) + 0.5) * 0x1p-53;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double rho = std::sqrt(-2.0 * std::log(u1));
    double ang = 6.283185307179586476925286766559 * u2;
    spare_ = rho * std::sin(ang);
    have_spare_ = true;
    return rho * std::cos(ang);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace swh

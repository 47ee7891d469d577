#pragma once

#include <cstdint>
#include <random>

namespace hmsim {

/// splitmix64 mixer. Used for PC hashing, set sampling and payload tokens
/// so those are stateless functions of their inputs.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Stream randomness. Thin wrapper over std::mt19937_64 so every draw in the
/// simulator is attributable to one seeded stream and runs replay bit-exact.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    /// True with probability per_mille/1000.
    bool chance_per_mille(std::uint32_t per_mille) {
        return next() % 1000 < per_mille;
    }

    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace hmsim

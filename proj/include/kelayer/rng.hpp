#ifndef KELAYER_RNG_HPP
#define KELAYER_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace kelayer {

/// One step of the splitmix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable seed derivation: the result depends only on `base` and the keys,
/// never on how many other streams were derived before.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = mix64(0x6b656c6179657273ULL);
    for (std::uint64_t k : keys) h = mix64(h ^ k);
    return base ^ h;
}

/// Key for a real-valued parameter (average degree): quantized to 1e-6 so
/// that 2.7 parsed from text and 2.2 + 5 * 0.1 map to the same stream.
inline std::uint64_t real_key(double x) noexcept {
    return static_cast<std::uint64_t>(std::llround(x * 1e6));
}

/// Seeded random stream. Single owner: copying is disabled so two consumers
/// can never silently replay the same draws.
///
/// Draws are built from raw mt19937_64 output rather than the standard
/// distributions, whose algorithms are implementation-defined; equal seeds
/// give equal sequences on every platform.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    RngStream(const RngStream&) = delete;
    RngStream& operator=(const RngStream&) = delete;
    RngStream(RngStream&&) = default;
    RngStream& operator=(RngStream&&) = default;

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). `bound` must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // Rejection sampling on the top of the range removes modulo bias.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace kelayer

#endif  // KELAYER_RNG_HPP

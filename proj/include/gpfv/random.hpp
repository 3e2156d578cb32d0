#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gpfv {

/// SplitMix64 finalizer. Used for every seed and substream key derivation.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// FNV-1a hash of a stream label ("events", "init", ...).
std::uint64_t label_hash(std::string_view label) noexcept;

/// Key for (master seed, replicate index, stream label).
///
/// key = mix64(mix64(master) ^ mix64(replicate + 0x9e3779b97f4a7c15) ^ label_hash(label))
///
/// Replicate statistics depend only on this key, never on which worker ran them.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate, std::string_view label) noexcept;

/// Key of the i-th substream under a parent key.
std::uint64_t substream_key(std::uint64_t parent, std::uint64_t index) noexcept;

/// Map 64 random bits to the open interval (0, 1).
inline double bits_to_unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Sequential generator: std::mt19937_64 seeded from a derived key.
class Rng {
public:
    explicit Rng(std::uint64_t key) : engine_(mix64(key)) {}

    std::uint64_t bits() { return engine_(); }
    double uniform() { return bits_to_unit(engine_()); }
    double exponential(double rate);
    /// Uniform integer in [0, n), n > 0.
    std::size_t below(std::size_t n);

private:
    std::mt19937_64 engine_;
};

/// Counter-based stream of uniforms attached to one Poisson event.
///
/// Index 0 is the forward parent draw; index i >= 1 is the lookdown mark of level i.
class Substream {
public:
    explicit Substream(std::uint64_t key) noexcept : key_(key) {}

    double uniform(std::uint64_t index) const noexcept;
    std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
};

inline constexpr std::uint64_t kParentDrawIndex = 0;

}  // namespace gpfv

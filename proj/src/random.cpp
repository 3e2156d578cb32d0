#include "gpfv/random.hpp"

#include <cmath>

namespace gpfv {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t label_hash(std::string_view label) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate, std::string_view label) noexcept {
    return mix64(mix64(master) ^ mix64(replicate + kGolden) ^ label_hash(label));
}

std::uint64_t substream_key(std::uint64_t parent, std::uint64_t index) noexcept {
    return mix64(parent ^ mix64(index));
}

double Rng::exponential(double rate) {
    return -std::log(uniform()) / rate;
}

std::size_t Rng::below(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
}

double Substream::uniform(std::uint64_t index) const noexcept {
    return bits_to_unit(mix64(key_ + (index + 1) * kGolden));
}

}  // namespace gpfv

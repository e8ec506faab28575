#include "rislab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace rislab {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// 64-bit finalizer (murmur3 variant); bijective, so distinct counters map to
// distinct outputs within a stream.
std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xFF51AFD7ED558CCDULL;
    x ^= x >> 33;
    x *= 0xC4CEB9FE1A85EC53ULL;
    x ^= x >> 33;
    return x;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : key_(mix64(mix64(seed + kGolden) ^ mix64(stream_id + 0x632BE59BD9B4E019ULL))),
      seed_(seed),
      stream_id_(stream_id) {}

RngStream::RngStream(std::uint64_t key, std::uint64_t seed, std::uint64_t stream_id)
    : key_(key), seed_(seed), stream_id_(stream_id) {}

RngStream RngStream::split(std::uint64_t label) const {
    std::uint64_t child_key = mix64(key_ ^ mix64(label + 0xD6E8FEB86659FD93ULL));
    return RngStream(child_key, seed_, label);
}

RngStream RngStream::split(std::string_view label) const { return split(fnv1a(label)); }

std::uint64_t RngStream::next_u64() {
    ++counter_;
    return mix64(key_ + kGolden * counter_);
}

double RngStream::uniform() {
    // 53 mantissa bits -> [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RngStream::gaussian() {
    double u1 = 1.0 - uniform(); // (0, 1], keeps log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::array<double, 3> RngStream::unit_vector3() {
    double z = uniform(-1.0, 1.0);
    double phi = uniform(0.0, 2.0 * M_PI);
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("uniform_index: n must be positive");
    }
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

} // namespace rislab

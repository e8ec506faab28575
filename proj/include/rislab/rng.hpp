#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace rislab {

// Counter-based pseudo-random stream. A stream is fully determined by
// (seed, stream_id): the n-th draw is a mix of the key and the counter, so
// copies replay the same sequence and split() children never touch the
// parent's state. Not cryptographic.
class RngStream {
  public:
    RngStream() : RngStream(0, 0) {}
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    // Child stream derived from (key, label); the parent is not advanced.
    // Splitting twice with the same label yields identical children.
    [[nodiscard]] RngStream split(std::uint64_t label) const;
    [[nodiscard]] RngStream split(std::string_view label) const;

    std::uint64_t next_u64();

    // Uniform on [0, 1).
    double uniform();
    double uniform(double lo, double hi);

    // Standard normal via Box-Muller; each call consumes two uniforms.
    double gaussian();

    // Uniform on the unit sphere.
    std::array<double, 3> unit_vector3();

    // Uniform integer in [0, n); n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

  private:
    RngStream(std::uint64_t key, std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
};

} // namespace rislab

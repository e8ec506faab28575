#pragma once

#include <cstddef>
#include <vector>

#include "rislab/channel.hpp"
#include "rislab/env.hpp"
#include "rislab/rng.hpp"

namespace rislab {

struct AoConfig {
    std::size_t max_sweeps = 50;
    std::size_t phase_grid_points = 64;
    double rate_tolerance_bits = 1e-4; // stop when a sweep gains less
};

struct AoResult {
    RisPhases theta;
    TransmitCovariance q;
    double rate_bits = 0.0;
    std::vector<double> sweep_rates; // non-decreasing by construction
};

// Alternating optimization: water-fill Q for the current theta, then improve
// each RIS phase over a uniform grid (current phase kept as a candidate so a
// sweep can never lose rate), until the sweep gain drops below tolerance.
AoResult ao_optimize(const ChannelPair& pair, const EnvConfig& env, const AoConfig& cfg,
                     RngStream rng);

struct RandomPhaseResult {
    double mean_rate = 0.0;
    double best_rate = 0.0;
    RisPhases best_theta;
};

// Uniform-random unit-modulus theta per trial, Q by water-filling.
RandomPhaseResult random_phase_baseline(const ChannelPair& pair, const EnvConfig& env,
                                        std::size_t trials, RngStream rng);

// Scheme-2 state: locations replaced by the composite-channel encoding,
// (vec(Re Q, Im Q), Re theta, Im theta, R, vec(Re H, Im H)),
// length 2M^2 + 2N + 1 + 2KM.
RealVector make_csi_state(const ChannelPair& pair, const RisPhases& theta,
                          const TransmitCovariance& q, double rate);

std::size_t csi_state_dim(std::size_t m, std::size_t k, std::size_t n);

} // namespace rislab

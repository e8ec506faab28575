#include "rislab/ris_env.hpp"

#include <stdexcept>

namespace rislab {

RisDdpgEnv::RisDdpgEnv(Setup setup) : setup_(std::move(setup)) {
    if (!setup_.reward_oracle) {
        throw std::invalid_argument("RisDdpgEnv: reward oracle is required");
    }
    if (setup_.m == 0 || setup_.k == 0 || setup_.n == 0) {
        throw std::invalid_argument("RisDdpgEnv: array dims must be positive");
    }
}

std::size_t RisDdpgEnv::state_dim() const {
    return setup_.state_kind == StateKind::Location ? rislab::state_dim(setup_.m, setup_.n)
                                                    : csi_state_dim(setup_.m, setup_.k, setup_.n);
}

std::size_t RisDdpgEnv::action_dim() const { return rislab::action_dim(setup_.m, setup_.n); }

RealVector RisDdpgEnv::encode(const EnvState& s) const {
    if (setup_.state_kind == StateKind::Csi) {
        return make_csi_state(setup_.true_pair, s.theta, s.q, s.rate_bits);
    }
    return encode_state(s, setup_.encoding);
}

RealVector RisDdpgEnv::reset(RngStream& rng) {
    EnvAction a0;
    a0.raw.resize(action_dim());
    for (double& v : a0.raw) {
        v = rng.uniform(-1.0, 1.0);
    }
    auto [q0, theta0] = project_action(a0, setup_.m, setup_.env.power_budget_w);
    const CMatrix h0 = setup_.reward_oracle(theta0);
    state_.q = std::move(q0);
    state_.theta = std::move(theta0);
    state_.rate_bits = achievable_rate(h0, state_.q, setup_.env.noise_power_w);
    state_.loc_bs = setup_.loc_bs;
    state_.loc_ris = setup_.loc_ris;
    state_.loc_ue = setup_.loc_ue;
    return encode(state_);
}

std::pair<RealVector, double> RisDdpgEnv::step(const RealVector& action) {
    auto [next, reward] = env_step(state_, {action}, setup_.reward_oracle, setup_.env);
    state_ = std::move(next);
    return {encode(state_), reward};
}

double RisDdpgEnv::true_rate(const RealVector& action) {
    auto [q, theta] = project_action({action}, setup_.m, setup_.env.power_budget_w);
    const CMatrix h = composite_channel(setup_.true_pair, theta.as_column());
    return achievable_rate(h, q, setup_.env.noise_power_w);
}

ChannelOracle RisDdpgEnv::true_channel_oracle(const ChannelPair& pair) {
    return [pair](const RisPhases& theta) {
        return composite_channel(pair, theta.as_column());
    };
}

ChannelOracle RisDdpgEnv::ien_oracle(const IenModel& model, const IenLocations& locs) {
    return [&model, locs](const RisPhases& theta) {
        return ien_predict(model, locs, theta).h_hat;
    };
}

} // namespace rislab

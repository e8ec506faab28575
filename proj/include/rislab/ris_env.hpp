#pragma once

#include <optional>

#include "rislab/baselines.hpp"
#include "rislab/channel.hpp"
#include "rislab/ddpg.hpp"
#include "rislab/env.hpp"
#include "rislab/ien.hpp"

namespace rislab {

// RIS beamforming environment behind the DdpgEnv surface. The reward
// channel is pluggable: the true composite channel (scheme 3 / evaluation)
// or the trained IEN (proposed algorithm). The state is either the
// location-aware encoding or the scheme-2 CSI encoding.
class RisDdpgEnv : public DdpgEnv {
  public:
    enum class StateKind { Location, Csi };

    struct Setup {
        ChannelPair true_pair;    // ground truth for this session
        EnvConfig env;
        std::size_t m = 0, k = 0, n = 0;
        Vec3 loc_bs, loc_ris, loc_ue; // locations as the agent sees them
        ChannelOracle reward_oracle;
        bool track_true_rate = true;  // evaluate actions on the true channel
        StateKind state_kind = StateKind::Location;
        StateEncoding encoding;
    };

    explicit RisDdpgEnv(Setup setup);

    std::size_t state_dim() const override;
    std::size_t action_dim() const override;
    RealVector reset(RngStream& rng) override;
    std::pair<RealVector, double> step(const RealVector& action) override;
    bool has_true_rate() const override { return setup_.track_true_rate; }
    double true_rate(const RealVector& action) override;

    const EnvState& current_state() const { return state_; }

    // Composite-channel oracle over the fixed true pair.
    static ChannelOracle true_channel_oracle(const ChannelPair& pair);
    // Oracle that queries an IEN model at fixed locations.
    static ChannelOracle ien_oracle(const IenModel& model, const IenLocations& locs);

  private:
    RealVector encode(const EnvState& s) const;

    Setup setup_;
    EnvState state_;
};

} // namespace rislab

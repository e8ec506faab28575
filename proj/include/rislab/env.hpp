#pragma once

#include <functional>
#include <utility>

#include "rislab/channel.hpp"
#include "rislab/cmatrix.hpp"
#include "rislab/rng.hpp"

namespace rislab {

struct EnvConfig {
    double power_budget_w = 0.1;     // p
    double noise_power_w = 1e-11;    // sigma^2
};

// Unit-modulus RIS reflection coefficients.
struct RisPhases {
    std::vector<Complex> theta;

    std::size_t size() const { return theta.size(); }
    CMatrix as_column() const;
};

// Hermitian PSD transmit covariance with trace <= power budget.
struct TransmitCovariance {
    CMatrix q;
};

struct EnvState {
    TransmitCovariance q;
    RisPhases theta;
    double rate_bits = 0.0;
    Vec3 loc_bs, loc_ris, loc_ue;
};

// Raw network output, length 2M^2 + 2N, before projection.
struct EnvAction {
    RealVector raw;
};

double dbm_to_watts(double dbm);

// R = log2 det(I_K + H Q H^H / sigma^2), the figure of merit everywhere.
double achievable_rate(const CMatrix& h_bar, const TransmitCovariance& q, double sigma2);

// Maps a raw action onto the feasible set: theta pairs are normalized to
// unit modulus ((0,0) maps to 1), and the Q block A becomes
// (p / tr(AA^H)) AA^H, PSD with trace exactly p. Total function.
std::pair<TransmitCovariance, RisPhases> project_action(const EnvAction& action, std::size_t m,
                                                        double power_budget);

// Inverse-direction helper: a raw action whose projection returns (q, theta)
// unchanged (uses the Hermitian square root of q, whose Gram matrix already
// carries trace = p).
EnvAction encode_feasible_action(const TransmitCovariance& q, const RisPhases& theta);

// Capacity-optimal covariance for a fixed channel: water-filling over the
// eigenmodes of H^H H / sigma^2. Throws for an all-zero channel.
TransmitCovariance waterfill(const CMatrix& h_bar, double power_budget, double sigma2);

// Channel the environment answers with for a given theta; either the true
// composite channel or a learned surrogate.
using ChannelOracle = std::function<CMatrix(const RisPhases&)>;

// Projects the action, queries the oracle under the new theta, and returns
// the successor state with reward = achievable rate.
std::pair<EnvState, double> env_step(const EnvState& state, const EnvAction& action,
                                     const ChannelOracle& oracle, const EnvConfig& cfg);

struct UeArea {
    Vec3 center;
    double radius = 0.0;
};

// Biased position u + r*omega with omega uniform on the sphere and
// r = eta_target * ||area center||, the one-parameter calibration of the
// normalized location-error ratio.
Vec3 perturb_location(const Vec3& u, double eta_target, const UeArea& area, RngStream& rng);

struct StateEncoding {
    bool normalize_locations = false; // min-max map of coordinates to [-1, 1]
    Vec3 box_lo, box_hi;
};

// (vec(Re Q, Im Q), Re theta, Im theta, R, loc_BS, loc_RIS, loc_UE),
// length 2M^2 + 2N + 10.
RealVector encode_state(const EnvState& state, const StateEncoding& enc = {});

std::size_t state_dim(std::size_t m, std::size_t n);
std::size_t action_dim(std::size_t m, std::size_t n);

} // namespace rislab

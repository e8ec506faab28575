#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rislab/mlp.hpp"
#include "rislab/rng.hpp"

namespace rislab {

struct DdpgConfig {
    std::size_t state_dim = 0;
    std::size_t action_dim = 0;
    std::size_t hidden1 = 500;
    std::size_t hidden2 = 300;
    double lambda_q = 1e-3;     // critic learning rate
    double lambda_mu = 1e-3;    // actor learning rate
    double rho_mu = 1e-3;       // target actor blend rate
    double rho_q = 1e-3;        // target critic blend rate
    double tau_discount = 0.99;
    std::size_t batch_v = 16;
    std::size_t buffer_capacity = 10000;
    std::size_t episodes_j = 1000;
    std::size_t steps_t = 100;
    double noise_std_initial = 0.1;
    double noise_decay = 0.999;
};

struct Experience {
    RealVector s;
    RealVector a;
    double r = 0.0;
    RealVector s_next;
};

// Fixed-capacity ring; oldest experience is overwritten first once full.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Experience e);
    std::size_t size() const { return std::min(count_, capacity_); }
    std::size_t capacity() const { return capacity_; }
    const Experience& at(std::size_t i) const { return storage_[i]; }
    const Experience& sample(RngStream& rng) const;

  private:
    std::size_t capacity_;
    std::size_t count_ = 0; // total insertions
    std::vector<Experience> storage_;
};

// Actor mu(s) with tanh output (actions live in [-1,1]); critic Q(s,a) with
// linear output; targets start as exact copies.
struct AgentNets {
    Mlp actor;
    Mlp critic;
    Mlp target_actor;
    Mlp target_critic;
};

AgentNets make_agent_nets(const DdpgConfig& cfg, RngStream rng);

// mu(s) plus i.i.d. Gaussian noise per component, clamped to [-1, 1].
RealVector select_action(const AgentNets& nets, const RealVector& s, double noise_std,
                         RngStream& rng);

// y_v = r_v + tau * Q'(s_next, mu'(s_next)); no terminal masking, episodes
// are fixed-length.
RealVector critic_target_values(const AgentNets& nets,
                                const std::vector<const Experience*>& batch, double tau);

// One SGD step on the batch-mean squared Bellman error; returns the loss
// evaluated before the step.
double critic_update(AgentNets& nets, const std::vector<const Experience*>& batch,
                     const RealVector& y, double lambda_q);

// Deterministic policy gradient step: ascend batch-mean Q'(s, mu(s)) through
// the target critic's action slot.
void actor_update(AgentNets& nets, const std::vector<const Experience*>& batch,
                  double lambda_mu);

// target <- rho * source + (1 - rho) * target, element-wise.
void soft_update(const Mlp& source, Mlp& target, double rho);

// Environment surface the training loop drives. reset draws a random
// feasible starting point; step consumes the raw action vector.
class DdpgEnv {
  public:
    virtual ~DdpgEnv() = default;
    virtual std::size_t state_dim() const = 0;
    virtual std::size_t action_dim() const = 0;
    virtual RealVector reset(RngStream& rng) = 0;
    virtual std::pair<RealVector, double> step(const RealVector& action) = 0;
    // Ground-truth rate of an action, when an evaluator exists; used only
    // for best-action tracking, never for training.
    virtual bool has_true_rate() const { return false; }
    virtual double true_rate(const RealVector& /*action*/) { return 0.0; }
};

struct StepReward {
    std::size_t episode = 0;
    std::size_t step = 0;
    double reward = 0.0;
};

struct TrainResult {
    std::vector<StepReward> rewards;
    RealVector best_action;     // raw action achieving best_rate
    double best_rate = 0.0;     // by true rate when available, else by reward
    bool best_is_true_rate = false;
    // The action the agent itself ranks highest (by its reward signal, which
    // for a surrogate environment is the surrogate's belief). Scoring this
    // on the true channel exposes surrogate mismatch.
    RealVector best_by_reward_action;
    double best_reward = 0.0;
};

TrainResult train(AgentNets& nets, DdpgEnv& env, const DdpgConfig& cfg, RngStream rng);

// Reference floor: uniform-random actions in [-1,1]^A, no learning.
TrainResult run_random_agent(DdpgEnv& env, const DdpgConfig& cfg, RngStream rng);

// Checkpoint: all four networks plus the config fields that shape them.
void save_agent(const AgentNets& nets, const DdpgConfig& cfg, std::ostream& out);
AgentNets load_agent(std::istream& in, DdpgConfig& cfg_out);
void save_agent_file(const AgentNets& nets, const DdpgConfig& cfg, const std::string& path);
AgentNets load_agent_file(const std::string& path, DdpgConfig& cfg_out);

} // namespace rislab

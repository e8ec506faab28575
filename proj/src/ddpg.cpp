#include "rislab/ddpg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace rislab {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
        throw std::invalid_argument("ReplayBuffer: capacity must be positive");
    }
    storage_.reserve(capacity);
}

void ReplayBuffer::push(Experience e) {
    if (storage_.size() < capacity_) {
        storage_.push_back(std::move(e));
    } else {
        storage_[count_ % capacity_] = std::move(e);
    }
    ++count_;
}

const Experience& ReplayBuffer::sample(RngStream& rng) const {
    if (storage_.empty()) {
        throw std::logic_error("ReplayBuffer: sample from empty buffer");
    }
    return storage_[rng.uniform_index(storage_.size())];
}

AgentNets make_agent_nets(const DdpgConfig& cfg, RngStream rng) {
    if (cfg.state_dim == 0 || cfg.action_dim == 0) {
        throw std::invalid_argument("make_agent_nets: state/action dims must be positive");
    }
    AgentNets nets;
    nets.actor = init_mlp({cfg.state_dim, cfg.hidden1, cfg.hidden2, cfg.action_dim},
                          {Activation::Tanh, Activation::Tanh, Activation::Tanh},
                          rng.split("actor"));
    nets.critic = init_mlp({cfg.state_dim + cfg.action_dim, cfg.hidden1, cfg.hidden2, 1},
                           {Activation::Tanh, Activation::Tanh, Activation::Linear},
                           rng.split("critic"));
    nets.target_actor = nets.actor;
    nets.target_critic = nets.critic;
    return nets;
}

namespace {

RealVector concat(const RealVector& s, const RealVector& a) {
    RealVector x;
    x.reserve(s.size() + a.size());
    x.insert(x.end(), s.begin(), s.end());
    x.insert(x.end(), a.begin(), a.end());
    return x;
}

} // namespace

RealVector select_action(const AgentNets& nets, const RealVector& s, double noise_std,
                         RngStream& rng) {
    RealVector a = forward(nets.actor, s);
    if (noise_std > 0.0) {
        for (double& v : a) {
            v += noise_std * rng.gaussian();
        }
    }
    for (double& v : a) {
        v = std::clamp(v, -1.0, 1.0);
    }
    return a;
}

RealVector critic_target_values(const AgentNets& nets,
                                const std::vector<const Experience*>& batch, double tau) {
    if (batch.empty()) {
        throw std::invalid_argument("critic_target_values: empty batch");
    }
    RealVector y(batch.size());
    for (std::size_t v = 0; v < batch.size(); ++v) {
        const Experience& e = *batch[v];
        const RealVector a_next = forward(nets.target_actor, e.s_next);
        const RealVector q_next = forward(nets.target_critic, concat(e.s_next, a_next));
        y[v] = e.r + tau * q_next[0];
    }
    return y;
}

double critic_update(AgentNets& nets, const std::vector<const Experience*>& batch,
                     const RealVector& y, double lambda_q) {
    if (batch.empty() || batch.size() != y.size()) {
        throw std::invalid_argument("critic_update: batch and targets misaligned");
    }
    const double inv_v = 1.0 / static_cast<double>(batch.size());
    MlpGrads acc = MlpGrads::zeros_like(nets.critic);
    ForwardTape tape;
    BackwardResult work;
    double loss = 0.0;
    for (std::size_t v = 0; v < batch.size(); ++v) {
        const Experience& e = *batch[v];
        const RealVector q = forward(nets.critic, concat(e.s, e.a), &tape);
        const double err = q[0] - y[v];
        loss += err * err;
        // d/dq of (1/V) sum (y - q)^2
        backward_into(nets.critic, tape, {2.0 * err * inv_v}, work);
        acc.accumulate(work.grads);
    }
    sgd_step(nets.critic, acc, {lambda_q});
    return loss * inv_v;
}

void actor_update(AgentNets& nets, const std::vector<const Experience*>& batch,
                  double lambda_mu) {
    if (batch.empty()) {
        throw std::invalid_argument("actor_update: empty batch");
    }
    const double inv_v = 1.0 / static_cast<double>(batch.size());
    const std::size_t sdim = nets.actor.input_dim();
    MlpGrads acc = MlpGrads::zeros_like(nets.actor);
    ForwardTape actor_tape, critic_tape;
    BackwardResult critic_back, actor_back;
    for (const Experience* e : batch) {
        const RealVector a = forward(nets.actor, e->s, &actor_tape);
        forward(nets.target_critic, concat(e->s, a), &critic_tape);
        // Ascend Q': gradient of -Q' w.r.t. the action slot of the critic
        // input, pushed back through the actor.
        backward_into(nets.target_critic, critic_tape, {-inv_v}, critic_back);
        const RealVector action_grad(critic_back.input_grad.begin() +
                                         static_cast<std::ptrdiff_t>(sdim),
                                     critic_back.input_grad.end());
        backward_into(nets.actor, actor_tape, action_grad, actor_back);
        acc.accumulate(actor_back.grads);
    }
    sgd_step(nets.actor, acc, {lambda_mu});
}

void soft_update(const Mlp& source, Mlp& target, double rho) {
    if (source.layers.size() != target.layers.size()) {
        throw std::invalid_argument("soft_update: layer count mismatch");
    }
    for (std::size_t k = 0; k < source.layers.size(); ++k) {
        const DenseLayer& s = source.layers[k];
        DenseLayer& t = target.layers[k];
        if (s.weights.size() != t.weights.size() || s.biases.size() != t.biases.size()) {
            throw std::invalid_argument("soft_update: shape mismatch at layer " +
                                        std::to_string(k));
        }
        for (std::size_t i = 0; i < s.weights.size(); ++i) {
            t.weights[i] = rho * s.weights[i] + (1.0 - rho) * t.weights[i];
        }
        for (std::size_t i = 0; i < s.biases.size(); ++i) {
            t.biases[i] = rho * s.biases[i] + (1.0 - rho) * t.biases[i];
        }
    }
}

TrainResult train(AgentNets& nets, DdpgEnv& env, const DdpgConfig& cfg, RngStream rng) {
    if (cfg.buffer_capacity < cfg.batch_v) {
        throw std::invalid_argument("train: buffer capacity below batch size");
    }
    ReplayBuffer buffer(cfg.buffer_capacity);
    RngStream reset_rng = rng.split("episode-reset");
    RngStream noise_rng = rng.split("action-noise");
    RngStream sample_rng = rng.split("replay-sample");

    TrainResult result;
    result.rewards.reserve(cfg.episodes_j * cfg.steps_t);
    result.best_rate = -1.0;
    result.best_reward = -1.0;
    result.best_is_true_rate = env.has_true_rate();

    double noise_std = cfg.noise_std_initial;
    for (std::size_t j = 0; j < cfg.episodes_j; ++j) {
        RealVector s = env.reset(reset_rng);
        for (std::size_t t = 0; t < cfg.steps_t; ++t) {
            const RealVector a = select_action(nets, s, noise_std, noise_rng);
            auto [s_next, r] = env.step(a);
            buffer.push({s, a, r, s_next});
            result.rewards.push_back({j + 1, t + 1, r});

            const double score = env.has_true_rate() ? env.true_rate(a) : r;
            if (score > result.best_rate) {
                result.best_rate = score;
                result.best_action = a;
            }
            if (r > result.best_reward) {
                result.best_reward = r;
                result.best_by_reward_action = a;
            }

            if (buffer.size() >= cfg.batch_v) {
                std::vector<const Experience*> batch(cfg.batch_v);
                for (auto& slot : batch) {
                    slot = &buffer.sample(sample_rng);
                }
                const RealVector y = critic_target_values(nets, batch, cfg.tau_discount);
                critic_update(nets, batch, y, cfg.lambda_q);
                actor_update(nets, batch, cfg.lambda_mu);
                soft_update(nets.actor, nets.target_actor, cfg.rho_mu);
                soft_update(nets.critic, nets.target_critic, cfg.rho_q);
            }
            s = std::move(s_next);
        }
        noise_std *= cfg.noise_decay;
    }
    return result;
}

TrainResult run_random_agent(DdpgEnv& env, const DdpgConfig& cfg, RngStream rng) {
    RngStream reset_rng = rng.split("episode-reset");
    RngStream action_rng = rng.split("random-actions");

    TrainResult result;
    result.rewards.reserve(cfg.episodes_j * cfg.steps_t);
    result.best_rate = -1.0;
    result.best_reward = -1.0;
    result.best_is_true_rate = env.has_true_rate();
    for (std::size_t j = 0; j < cfg.episodes_j; ++j) {
        env.reset(reset_rng);
        for (std::size_t t = 0; t < cfg.steps_t; ++t) {
            RealVector a(env.action_dim());
            for (double& v : a) {
                v = action_rng.uniform(-1.0, 1.0);
            }
            auto [s_next, r] = env.step(a);
            (void)s_next;
            result.rewards.push_back({j + 1, t + 1, r});
            const double score = env.has_true_rate() ? env.true_rate(a) : r;
            if (score > result.best_rate) {
                result.best_rate = score;
                result.best_action = a;
            }
            if (r > result.best_reward) {
                result.best_reward = r;
                result.best_by_reward_action = a;
            }
        }
    }
    return result;
}

void save_agent(const AgentNets& nets, const DdpgConfig& cfg, std::ostream& out) {
    out << "ddpg-agent 1\n";
    out << "dims " << cfg.state_dim << " " << cfg.action_dim << " " << cfg.hidden1 << " "
        << cfg.hidden2 << "\n";
    save_mlp(nets.actor, out);
    save_mlp(nets.critic, out);
    save_mlp(nets.target_actor, out);
    save_mlp(nets.target_critic, out);
}

AgentNets load_agent(std::istream& in, DdpgConfig& cfg_out) {
    std::string tag;
    int version = 0;
    if (!(in >> tag >> version) || tag != "ddpg-agent" || version != 1) {
        throw std::runtime_error("agent checkpoint: bad header");
    }
    if (!(in >> tag >> cfg_out.state_dim >> cfg_out.action_dim >> cfg_out.hidden1 >>
          cfg_out.hidden2) ||
        tag != "dims") {
        throw std::runtime_error("agent checkpoint: missing dims");
    }
    AgentNets nets;
    nets.actor = load_mlp(in);
    nets.critic = load_mlp(in);
    nets.target_actor = load_mlp(in);
    nets.target_critic = load_mlp(in);
    return nets;
}

void save_agent_file(const AgentNets& nets, const DdpgConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    save_agent(nets, cfg, out);
}

AgentNets load_agent_file(const std::string& path, DdpgConfig& cfg_out) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path);
    }
    return load_agent(in, cfg_out);
}

} // namespace rislab

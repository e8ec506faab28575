#include "rislab/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace rislab {

namespace {

RisPhases random_phases(std::size_t n, RngStream& rng) {
    RisPhases phases;
    phases.theta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        phases.theta[i] = Complex(std::cos(phi), std::sin(phi));
    }
    return phases;
}

} // namespace

AoResult ao_optimize(const ChannelPair& pair, const EnvConfig& env, const AoConfig& cfg,
                     RngStream rng) {
    if (cfg.phase_grid_points < 2) {
        throw std::invalid_argument("ao_optimize: need at least 2 grid points");
    }
    const std::size_t n = pair.g.rows();
    const std::size_t k = pair.h_r.rows();
    const std::size_t m = pair.g.cols();

    // Rank-1 pieces: H(theta) = sum_n theta_n * R_n with R_n = h_r[:,n] g[n,:].
    std::vector<CMatrix> rank1(n, CMatrix(k, m));
    for (std::size_t e = 0; e < n; ++e) {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                rank1[e](i, j) = pair.h_r(i, e) * pair.g(e, j);
            }
        }
    }

    AoResult res;
    res.theta = random_phases(n, rng);

    // Incumbent channel is carried incrementally; candidate moves are only
    // accepted on a strict rate improvement, so the recorded trace is
    // non-decreasing by construction.
    CMatrix h(k, m);
    for (std::size_t e = 0; e < n; ++e) {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                h(i, j) += res.theta.theta[e] * rank1[e](i, j);
            }
        }
    }

    double rate = -1.0;
    double prev_rate = -1.0;
    for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
        // Covariance step: optimal Q for the incumbent channel.
        const TransmitCovariance q_new = waterfill(h, env.power_budget_w, env.noise_power_w);
        const double r_new = achievable_rate(h, q_new, env.noise_power_w);
        if (sweep == 0 || r_new > rate) {
            res.q = q_new;
            rate = r_new;
        }

        // Phase steps: per element, the best of the grid and the incumbent.
        for (std::size_t e = 0; e < n; ++e) {
            CMatrix h_rest = h;
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = 0; j < m; ++j) {
                    h_rest(i, j) -= res.theta.theta[e] * rank1[e](i, j);
                }
            }
            bool improved = false;
            Complex best_t = res.theta.theta[e];
            CMatrix best_h = h;
            for (std::size_t gidx = 0; gidx < cfg.phase_grid_points; ++gidx) {
                const double phi = 2.0 * M_PI * static_cast<double>(gidx) /
                                   static_cast<double>(cfg.phase_grid_points);
                const Complex t(std::cos(phi), std::sin(phi));
                CMatrix h_cand = h_rest;
                for (std::size_t i = 0; i < k; ++i) {
                    for (std::size_t j = 0; j < m; ++j) {
                        h_cand(i, j) += t * rank1[e](i, j);
                    }
                }
                const double cand = achievable_rate(h_cand, res.q, env.noise_power_w);
                if (cand > rate) {
                    rate = cand;
                    best_t = t;
                    best_h = std::move(h_cand);
                    improved = true;
                }
            }
            if (improved) {
                res.theta.theta[e] = best_t;
                h = std::move(best_h);
            }
        }

        res.sweep_rates.push_back(rate);
        res.rate_bits = rate;
        if (prev_rate >= 0.0 && rate - prev_rate < cfg.rate_tolerance_bits) {
            break;
        }
        prev_rate = rate;
    }

    // Covariance refresh for the final phases.
    const TransmitCovariance q_final = waterfill(h, env.power_budget_w, env.noise_power_w);
    const double r_final = achievable_rate(h, q_final, env.noise_power_w);
    if (r_final > rate) {
        res.q = q_final;
        res.rate_bits = r_final;
        if (!res.sweep_rates.empty()) {
            res.sweep_rates.back() = r_final;
        }
    }
    return res;
}

RandomPhaseResult random_phase_baseline(const ChannelPair& pair, const EnvConfig& env,
                                        std::size_t trials, RngStream rng) {
    if (trials == 0) {
        throw std::invalid_argument("random_phase_baseline: trials must be positive");
    }
    const std::size_t n = pair.g.rows();
    RandomPhaseResult res;
    res.best_rate = -1.0;
    double acc = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const RisPhases phases = random_phases(n, rng);
        const CMatrix h = composite_channel(pair, phases.as_column());
        const TransmitCovariance q = waterfill(h, env.power_budget_w, env.noise_power_w);
        const double rate = achievable_rate(h, q, env.noise_power_w);
        acc += rate;
        if (rate > res.best_rate) {
            res.best_rate = rate;
            res.best_theta = phases;
        }
    }
    res.mean_rate = acc / static_cast<double>(trials);
    return res;
}

RealVector make_csi_state(const ChannelPair& pair, const RisPhases& theta,
                          const TransmitCovariance& q, double rate) {
    RealVector out = complex_to_realvec(q.q);
    const CMatrix h_bar = composite_channel(pair, theta.as_column());
    out.reserve(out.size() + 2 * theta.size() + 1 + 2 * h_bar.size());
    for (const Complex& t : theta.theta) {
        out.push_back(t.real());
    }
    for (const Complex& t : theta.theta) {
        out.push_back(t.imag());
    }
    out.push_back(rate);
    const RealVector h_enc = complex_to_realvec(h_bar);
    out.insert(out.end(), h_enc.begin(), h_enc.end());
    return out;
}

std::size_t csi_state_dim(std::size_t m, std::size_t k, std::size_t n) {
    return 2 * m * m + 2 * n + 1 + 2 * k * m;
}

} // namespace rislab

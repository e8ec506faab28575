#include "rislab/metrics.hpp"

#include <stdexcept>

namespace rislab {

std::vector<double> metric_average_reward(const std::vector<double>& rewards) {
    if (rewards.empty()) {
        throw std::invalid_argument("metric_average_reward: empty reward list");
    }
    std::vector<double> out(rewards.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < rewards.size(); ++i) {
        acc += rewards[i];
        out[i] = acc / static_cast<double>(i + 1);
    }
    return out;
}

double metric_avg_achievable_rate(double rate_bits, double t_interact_slots,
                                  double t_coherence_slots) {
    if (!(t_coherence_slots > 0.0)) {
        throw std::invalid_argument("metric_avg_achievable_rate: coherence time must be positive");
    }
    const double frac = (t_coherence_slots - t_interact_slots) / t_coherence_slots;
    return (frac > 0.0 ? frac : 0.0) * rate_bits;
}

} // namespace rislab

#pragma once

#include <vector>

namespace rislab {

// Running mean r_a(t) = (sum_{i<=t} r_i) / t, prefix-wise.
std::vector<double> metric_average_reward(const std::vector<double>& rewards);

// R_a = max(0, (T_c - T)/T_c) * R.
double metric_avg_achievable_rate(double rate_bits, double t_interact_slots,
                                  double t_coherence_slots);

} // namespace rislab

#pragma once

#include <string>

#include "rislab/scenario.hpp"

namespace rislab {

// Shared building blocks behind the CLI subcommands; also used directly by
// the test suites.

// True channel realization for a UE position. The path-phase stream is keyed
// by the scenario seed only, so the location-to-channel map is one fixed
// function per scenario, shared with the IEN dataset labels.
ChannelPair scenario_true_channels(const ScenarioConfig& cfg, const Vec3& ue);

// Geometry with the RIS-UE path count forced to `paths` (1 = LoS only),
// reusing configured scatterers first and deriving extras deterministically.
ScenarioGeometry geometry_with_paths(const ScenarioConfig& cfg, std::size_t paths);

// Seeded UE draw from the movement disc for a DRL session.
Vec3 scenario_draw_ue(const ScenarioConfig& cfg);

struct TrainedIen {
    IenModel model;
    std::vector<double> mse_trace;
};

// Dataset generation + Algorithm-1 training with scenario-derived
// normalization box and label scale.
TrainedIen train_ien_for_scenario(const ScenarioConfig& cfg);
TrainedIen train_ien_on_dataset(const ScenarioConfig& cfg,
                                const std::vector<IenSample>& dataset);

struct DrlOutcome {
    TrainResult result;
    DdpgConfig resolved; // dims filled in
    std::vector<double> avg_rewards;
    double best_true_rate = 0.0;
    // True-channel rate of the action the agent itself ranked best (by its
    // reward signal): the deployment figure when no genie evaluator exists.
    double chosen_true_rate = 0.0;
};

// Oracle is "ien", "true", or "csi". For "ien" a trained model must be
// supplied. eta biases the locations the agent (and IEN) see; rewards from
// the "true"/"csi" oracles always come from the actual channel.
DrlOutcome train_drl_session(const ScenarioConfig& cfg, const std::string& oracle,
                             const IenModel* ien, AgentNets* nets_out = nullptr);

// Random-action reference on the same environment construction as `oracle`.
DrlOutcome random_agent_session(const ScenarioConfig& cfg, const std::string& oracle,
                                const IenModel* ien);

// Noise-free rollout of the trained policy from a fresh seeded reset;
// returns the mean true-channel rate of the greedy actions. This is the
// figure-of-merit for location-error comparisons, where a max over visited
// exploratory actions would wash the effect out.
double evaluate_policy(const ScenarioConfig& cfg, const std::string& oracle,
                       const IenModel* ien, const AgentNets& nets, std::size_t steps = 20);

// CLI subcommand bodies. All emit CSVs stamped with seed and config hash.
void run_gen_dataset(const ScenarioConfig& cfg, const std::string& out_csv);
void run_train_ien(const ScenarioConfig& cfg, const std::string& dataset_csv,
                   const std::string& checkpoint_out, const std::string& mse_csv);
void run_train_drl(const ScenarioConfig& cfg, const std::string& oracle,
                   const std::string& ien_checkpoint, const std::string& agent_out,
                   const std::string& reward_csv);
void run_baseline_ao(const ScenarioConfig& cfg, const std::string& out_csv);
void run_baseline_random(const ScenarioConfig& cfg, std::size_t trials,
                         const std::string& out_csv);
void run_sweep(const ScenarioConfig& cfg, const std::string& axis, const std::string& out_dir,
               int jobs);

} // namespace rislab

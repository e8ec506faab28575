#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rislab/baselines.hpp"
#include "rislab/channel.hpp"
#include "rislab/ddpg.hpp"
#include "rislab/env.hpp"
#include "rislab/ien.hpp"

namespace rislab {

struct IenTrainSection {
    std::size_t epochs = 100;
    std::size_t batch = 16;
    double learning_rate = 1e-3;
};

struct SweepSection {
    std::vector<std::pair<std::size_t, std::size_t>> ris_elements = {{4, 4}, {6, 6}, {8, 8}};
    std::vector<std::size_t> paths = {1, 2, 3, 4};
    std::vector<double> eta = {0.0, 0.05, 0.1};
    std::vector<double> coherence = {500, 1000, 2000, 4000, 8000};
};

// Full experiment description. Defaults follow the reference simulation
// setup; see configs/default.json for the on-disk mirror.
struct ScenarioConfig {
    std::uint64_t seed = 1;

    ScenarioGeometry geometry; // geometry.ue is the movement-disc center
    UeArea ue_area;            // center + radius of the UE movement disc
    ArrayConfig arrays;
    PathLossConfig path_loss;

    double power_dbm = 20.0;
    double noise_dbm = -80.0;
    bool normalize_state_locations = false;

    IenDatasetConfig ien_dataset;
    IenTrainSection ien_train;
    DdpgConfig ddpg; // state/action dims derived from arrays at run time

    AoConfig ao;
    std::size_t random_trials = 1000;

    double eta = 0.0;                  // location-error level
    double coherence_time_tc = 2000.0; // slots
    double interaction_slots_t = 500.0;

    SweepSection sweep;

    EnvConfig env_config() const;
};

ScenarioConfig default_scenario();

ScenarioConfig scenario_from_json(const std::string& json_text);
std::string scenario_to_json(const ScenarioConfig& cfg); // canonical (sorted keys)

ScenarioConfig load_scenario_file(const std::string& path);
void save_scenario_file(const ScenarioConfig& cfg, const std::string& path);

// Applies "dotted.path=json-value" to the serialized form and re-parses,
// so overrides go through the same validation as files.
ScenarioConfig apply_override(const ScenarioConfig& cfg, const std::string& dotted_key,
                              const std::string& json_value);

// FNV-1a of the canonical serialization; stamped into every CSV header.
std::uint64_t config_hash(const ScenarioConfig& cfg);
std::string config_hash_hex(const ScenarioConfig& cfg);

// Field-level checks (positive dims, rate bounds, ...); throws
// std::invalid_argument naming the offending field.
void validate(const ScenarioConfig& cfg);

// Coordinate bounding box over every device and scatterer plus the UE disc,
// used for IEN input normalization and optional state-location scaling.
std::pair<Vec3, Vec3> scenario_bounding_box(const ScenarioConfig& cfg);

} // namespace rislab

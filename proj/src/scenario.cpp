#include "rislab/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rislab {

using nlohmann::json;

EnvConfig ScenarioConfig::env_config() const {
    return {dbm_to_watts(power_dbm), dbm_to_watts(noise_dbm)};
}

ScenarioConfig default_scenario() {
    ScenarioConfig cfg;
    cfg.seed = 1;
    cfg.geometry.bs = {20.0, 0.0, 10.0};
    cfg.geometry.ris = {0.0, 30.0, 20.0};
    cfg.geometry.ue = {10.0, 50.0, 0.0};
    cfg.geometry.scatterers_bs_ris = {};
    cfg.geometry.scatterers_ris_ue = {{5.0, 40.0, 10.0}, {5.0, 45.0, 5.0}};
    cfg.ue_area = {{10.0, 50.0, 0.0}, 5.0};
    cfg.arrays = {4, 4, 7, 7};
    cfg.path_loss = {-20.0, 2.0, 2.8};
    cfg.power_dbm = 20.0;
    cfg.noise_dbm = -80.0;
    cfg.ien_dataset = {1000, 10, 0.0, 0.0, 0};
    cfg.ien_train = {100, 16, 1e-3};
    cfg.ddpg = {};
    cfg.ddpg.hidden1 = 500;
    cfg.ddpg.hidden2 = 300;
    cfg.ddpg.lambda_q = 1e-3;
    cfg.ddpg.lambda_mu = 1e-3;
    cfg.ddpg.rho_mu = 1e-3;
    cfg.ddpg.rho_q = 1e-3;
    cfg.ddpg.tau_discount = 0.99;
    cfg.ddpg.batch_v = 16;
    cfg.ddpg.buffer_capacity = 10000;
    cfg.ddpg.episodes_j = 1000;
    cfg.ddpg.steps_t = 100;
    cfg.ddpg.noise_std_initial = 0.1;
    cfg.ddpg.noise_decay = 0.999;
    cfg.ao = {50, 64, 1e-4};
    cfg.random_trials = 1000;
    cfg.eta = 0.0;
    cfg.coherence_time_tc = 2000.0;
    cfg.interaction_slots_t = 500.0;
    return cfg;
}

namespace {

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3) {
        throw std::invalid_argument("config field '" + field + "' must be a 3-element array");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <typename T>
void read_field(const json& j, const char* key, T& dest, const std::string& scope) {
    auto it = j.find(key);
    if (it == j.end()) {
        return;
    }
    try {
        dest = it->get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument("config field '" + scope + key + "' has the wrong type");
    }
}

} // namespace

std::string scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    json geom;
    geom["bs"] = vec3_to_json(cfg.geometry.bs);
    geom["ris"] = vec3_to_json(cfg.geometry.ris);
    geom["ue_center"] = vec3_to_json(cfg.ue_area.center);
    geom["ue_radius"] = cfg.ue_area.radius;
    geom["scatterers_bs_ris"] = json::array();
    for (const Vec3& s : cfg.geometry.scatterers_bs_ris) {
        geom["scatterers_bs_ris"].push_back(vec3_to_json(s));
    }
    geom["scatterers_ris_ue"] = json::array();
    for (const Vec3& s : cfg.geometry.scatterers_ris_ue) {
        geom["scatterers_ris_ue"].push_back(vec3_to_json(s));
    }
    j["geometry"] = geom;
    j["arrays"] = {{"m_bs", cfg.arrays.m_bs},
                   {"k_ue", cfg.arrays.k_ue},
                   {"n_x", cfg.arrays.n_x},
                   {"n_y", cfg.arrays.n_y}};
    j["path_loss"] = {{"c0_db", cfg.path_loss.c0_db},
                      {"alpha_bs_ris", cfg.path_loss.alpha_bs_ris},
                      {"alpha_ris_ue", cfg.path_loss.alpha_ris_ue}};
    j["env"] = {{"power_dbm", cfg.power_dbm},
                {"noise_dbm", cfg.noise_dbm},
                {"normalize_state_locations", cfg.normalize_state_locations}};
    j["ien"] = {{"u_locations", cfg.ien_dataset.u_locations},
                {"f_thetas_per_location", cfg.ien_dataset.f_thetas_per_location},
                {"label_noise_std", cfg.ien_dataset.label_noise_std},
                {"epochs", cfg.ien_train.epochs},
                {"batch", cfg.ien_train.batch},
                {"learning_rate", cfg.ien_train.learning_rate}};
    j["ddpg"] = {{"hidden1", cfg.ddpg.hidden1},
                 {"hidden2", cfg.ddpg.hidden2},
                 {"lambda_q", cfg.ddpg.lambda_q},
                 {"lambda_mu", cfg.ddpg.lambda_mu},
                 {"rho_mu", cfg.ddpg.rho_mu},
                 {"rho_q", cfg.ddpg.rho_q},
                 {"tau_discount", cfg.ddpg.tau_discount},
                 {"batch_v", cfg.ddpg.batch_v},
                 {"buffer_capacity", cfg.ddpg.buffer_capacity},
                 {"episodes_j", cfg.ddpg.episodes_j},
                 {"steps_t", cfg.ddpg.steps_t},
                 {"noise_std_initial", cfg.ddpg.noise_std_initial},
                 {"noise_decay", cfg.ddpg.noise_decay}};
    j["ao"] = {{"max_sweeps", cfg.ao.max_sweeps},
               {"phase_grid_points", cfg.ao.phase_grid_points},
               {"rate_tolerance_bits", cfg.ao.rate_tolerance_bits}};
    j["random_trials"] = cfg.random_trials;
    j["eta"] = cfg.eta;
    j["coherence_time_tc"] = cfg.coherence_time_tc;
    j["interaction_slots_t"] = cfg.interaction_slots_t;
    json sweep;
    sweep["ris_elements"] = json::array();
    for (const auto& [nx, ny] : cfg.sweep.ris_elements) {
        sweep["ris_elements"].push_back(json::array({nx, ny}));
    }
    sweep["paths"] = cfg.sweep.paths;
    sweep["eta"] = cfg.sweep.eta;
    sweep["coherence"] = cfg.sweep.coherence;
    j["sweep"] = sweep;
    return j.dump(2) + "\n";
}

ScenarioConfig scenario_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    ScenarioConfig cfg = default_scenario();
    read_field(j, "seed", cfg.seed, "");
    if (j.contains("geometry")) {
        const json& g = j["geometry"];
        if (g.contains("bs")) {
            cfg.geometry.bs = vec3_from_json(g["bs"], "geometry.bs");
        }
        if (g.contains("ris")) {
            cfg.geometry.ris = vec3_from_json(g["ris"], "geometry.ris");
        }
        if (g.contains("ue_center")) {
            cfg.ue_area.center = vec3_from_json(g["ue_center"], "geometry.ue_center");
            cfg.geometry.ue = cfg.ue_area.center;
        }
        read_field(g, "ue_radius", cfg.ue_area.radius, "geometry.");
        if (g.contains("scatterers_bs_ris")) {
            cfg.geometry.scatterers_bs_ris.clear();
            for (const json& s : g["scatterers_bs_ris"]) {
                cfg.geometry.scatterers_bs_ris.push_back(
                    vec3_from_json(s, "geometry.scatterers_bs_ris[]"));
            }
        }
        if (g.contains("scatterers_ris_ue")) {
            cfg.geometry.scatterers_ris_ue.clear();
            for (const json& s : g["scatterers_ris_ue"]) {
                cfg.geometry.scatterers_ris_ue.push_back(
                    vec3_from_json(s, "geometry.scatterers_ris_ue[]"));
            }
        }
    }
    if (j.contains("arrays")) {
        const json& a = j["arrays"];
        read_field(a, "m_bs", cfg.arrays.m_bs, "arrays.");
        read_field(a, "k_ue", cfg.arrays.k_ue, "arrays.");
        read_field(a, "n_x", cfg.arrays.n_x, "arrays.");
        read_field(a, "n_y", cfg.arrays.n_y, "arrays.");
    }
    if (j.contains("path_loss")) {
        const json& p = j["path_loss"];
        read_field(p, "c0_db", cfg.path_loss.c0_db, "path_loss.");
        read_field(p, "alpha_bs_ris", cfg.path_loss.alpha_bs_ris, "path_loss.");
        read_field(p, "alpha_ris_ue", cfg.path_loss.alpha_ris_ue, "path_loss.");
    }
    if (j.contains("env")) {
        const json& e = j["env"];
        read_field(e, "power_dbm", cfg.power_dbm, "env.");
        read_field(e, "noise_dbm", cfg.noise_dbm, "env.");
        read_field(e, "normalize_state_locations", cfg.normalize_state_locations, "env.");
    }
    if (j.contains("ien")) {
        const json& i = j["ien"];
        read_field(i, "u_locations", cfg.ien_dataset.u_locations, "ien.");
        read_field(i, "f_thetas_per_location", cfg.ien_dataset.f_thetas_per_location, "ien.");
        read_field(i, "label_noise_std", cfg.ien_dataset.label_noise_std, "ien.");
        read_field(i, "epochs", cfg.ien_train.epochs, "ien.");
        read_field(i, "batch", cfg.ien_train.batch, "ien.");
        read_field(i, "learning_rate", cfg.ien_train.learning_rate, "ien.");
    }
    if (j.contains("ddpg")) {
        const json& d = j["ddpg"];
        read_field(d, "hidden1", cfg.ddpg.hidden1, "ddpg.");
        read_field(d, "hidden2", cfg.ddpg.hidden2, "ddpg.");
        read_field(d, "lambda_q", cfg.ddpg.lambda_q, "ddpg.");
        read_field(d, "lambda_mu", cfg.ddpg.lambda_mu, "ddpg.");
        read_field(d, "rho_mu", cfg.ddpg.rho_mu, "ddpg.");
        read_field(d, "rho_q", cfg.ddpg.rho_q, "ddpg.");
        read_field(d, "tau_discount", cfg.ddpg.tau_discount, "ddpg.");
        read_field(d, "batch_v", cfg.ddpg.batch_v, "ddpg.");
        read_field(d, "buffer_capacity", cfg.ddpg.buffer_capacity, "ddpg.");
        read_field(d, "episodes_j", cfg.ddpg.episodes_j, "ddpg.");
        read_field(d, "steps_t", cfg.ddpg.steps_t, "ddpg.");
        read_field(d, "noise_std_initial", cfg.ddpg.noise_std_initial, "ddpg.");
        read_field(d, "noise_decay", cfg.ddpg.noise_decay, "ddpg.");
    }
    if (j.contains("ao")) {
        const json& a = j["ao"];
        read_field(a, "max_sweeps", cfg.ao.max_sweeps, "ao.");
        read_field(a, "phase_grid_points", cfg.ao.phase_grid_points, "ao.");
        read_field(a, "rate_tolerance_bits", cfg.ao.rate_tolerance_bits, "ao.");
    }
    read_field(j, "random_trials", cfg.random_trials, "");
    read_field(j, "eta", cfg.eta, "");
    read_field(j, "coherence_time_tc", cfg.coherence_time_tc, "");
    read_field(j, "interaction_slots_t", cfg.interaction_slots_t, "");
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        if (s.contains("ris_elements")) {
            cfg.sweep.ris_elements.clear();
            for (const json& e : s["ris_elements"]) {
                if (!e.is_array() || e.size() != 2) {
                    throw std::invalid_argument(
                        "config field 'sweep.ris_elements[]' must be [n_x, n_y] pairs");
                }
                cfg.sweep.ris_elements.emplace_back(e[0].get<std::size_t>(),
                                                    e[1].get<std::size_t>());
            }
        }
        read_field(s, "paths", cfg.sweep.paths, "sweep.");
        read_field(s, "eta", cfg.sweep.eta, "sweep.");
        read_field(s, "coherence", cfg.sweep.coherence, "sweep.");
    }
    validate(cfg);
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

void save_scenario_file(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out << scenario_to_json(cfg);
}

ScenarioConfig apply_override(const ScenarioConfig& cfg, const std::string& dotted_key,
                              const std::string& json_value) {
    json j = json::parse(scenario_to_json(cfg));
    json value;
    try {
        value = json::parse(json_value);
    } catch (const json::exception&) {
        // Bare words become strings; numbers already parsed above.
        value = json_value;
    }
    json* node = &j;
    std::stringstream ss(dotted_key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) {
        parts.push_back(part);
    }
    if (parts.empty()) {
        throw std::invalid_argument("override key is empty");
    }
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->contains(parts[i])) {
            throw std::invalid_argument("unknown config section '" + parts[i] + "' in override '" +
                                        dotted_key + "'");
        }
        node = &(*node)[parts[i]];
    }
    if (!node->contains(parts.back())) {
        throw std::invalid_argument("unknown config field '" + dotted_key + "'");
    }
    (*node)[parts.back()] = value;
    return scenario_from_json(j.dump());
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
    // nlohmann objects keep sorted keys, so dump() is canonical.
    const std::string text = json::parse(scenario_to_json(cfg)).dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string config_hash_hex(const ScenarioConfig& cfg) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    return buf;
}

void validate(const ScenarioConfig& cfg) {
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument("invalid config: " + field + " " + why);
    };
    if (cfg.arrays.m_bs == 0) fail("arrays.m_bs", "must be >= 1");
    if (cfg.arrays.k_ue == 0) fail("arrays.k_ue", "must be >= 1");
    if (cfg.arrays.n_x == 0) fail("arrays.n_x", "must be >= 1");
    if (cfg.arrays.n_y == 0) fail("arrays.n_y", "must be >= 1");
    if (!(cfg.path_loss.alpha_bs_ris > 0.0)) fail("path_loss.alpha_bs_ris", "must be > 0");
    if (!(cfg.path_loss.alpha_ris_ue > 0.0)) fail("path_loss.alpha_ris_ue", "must be > 0");
    if (!(cfg.ue_area.radius >= 0.0)) fail("geometry.ue_radius", "must be >= 0");
    if (cfg.ien_dataset.u_locations == 0) fail("ien.u_locations", "must be >= 1");
    if (cfg.ien_dataset.f_thetas_per_location == 0)
        fail("ien.f_thetas_per_location", "must be >= 1");
    if (cfg.ien_dataset.label_noise_std < 0.0) fail("ien.label_noise_std", "must be >= 0");
    if (!(cfg.ien_train.learning_rate > 0.0)) fail("ien.learning_rate", "must be > 0");
    if (cfg.ien_train.batch == 0) fail("ien.batch", "must be >= 1");
    if (!(cfg.ddpg.tau_discount > 0.0) || cfg.ddpg.tau_discount > 1.0)
        fail("ddpg.tau_discount", "must be in (0, 1]");
    for (auto [name, v] : {std::pair<const char*, double>{"ddpg.lambda_q", cfg.ddpg.lambda_q},
                           {"ddpg.lambda_mu", cfg.ddpg.lambda_mu},
                           {"ddpg.rho_mu", cfg.ddpg.rho_mu},
                           {"ddpg.rho_q", cfg.ddpg.rho_q}}) {
        if (!(v > 0.0) || v > 1.0) fail(name, "must be in (0, 1]");
    }
    if (cfg.ddpg.batch_v == 0) fail("ddpg.batch_v", "must be >= 1");
    if (cfg.ddpg.buffer_capacity < cfg.ddpg.batch_v)
        fail("ddpg.buffer_capacity", "must be >= ddpg.batch_v");
    if (cfg.ddpg.hidden1 == 0 || cfg.ddpg.hidden2 == 0) fail("ddpg.hidden", "must be >= 1");
    if (cfg.ao.phase_grid_points < 2) fail("ao.phase_grid_points", "must be >= 2");
    if (cfg.ao.rate_tolerance_bits < 0.0) fail("ao.rate_tolerance_bits", "must be >= 0");
    if (cfg.eta < 0.0) fail("eta", "must be >= 0");
    if (!(cfg.coherence_time_tc > 0.0)) fail("coherence_time_tc", "must be > 0");
    if (cfg.interaction_slots_t < 0.0) fail("interaction_slots_t", "must be >= 0");
    if (cfg.random_trials == 0) fail("random_trials", "must be >= 1");
    const Vec3 d1 = cfg.geometry.bs - cfg.geometry.ris;
    if (!(norm(d1) > 0.0)) fail("geometry.ris", "must differ from geometry.bs");
}

std::pair<Vec3, Vec3> scenario_bounding_box(const ScenarioConfig& cfg) {
    Vec3 lo = cfg.geometry.bs;
    Vec3 hi = cfg.geometry.bs;
    auto grow = [&](const Vec3& v) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        lo.z = std::min(lo.z, v.z);
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
        hi.z = std::max(hi.z, v.z);
    };
    grow(cfg.geometry.ris);
    const double r = cfg.ue_area.radius;
    grow(cfg.ue_area.center + Vec3{r, r, 0.0});
    grow(cfg.ue_area.center - Vec3{r, r, 0.0});
    for (const Vec3& s : cfg.geometry.scatterers_bs_ris) {
        grow(s);
    }
    for (const Vec3& s : cfg.geometry.scatterers_ris_ue) {
        grow(s);
    }
    // Widen degenerate axes so min-max scaling stays well-defined.
    auto pad = [](double& l, double& h) {
        if (!(h > l)) {
            l -= 0.5;
            h += 0.5;
        }
    };
    pad(lo.x, hi.x);
    pad(lo.y, hi.y);
    pad(lo.z, hi.z);
    return {lo, hi};
}

} // namespace rislab

#include "rislab/runner.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "rislab/csvio.hpp"
#include "rislab/metrics.hpp"
#include "rislab/ris_env.hpp"

namespace rislab {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    return out;
}

void stamp(CsvWriter& csv, const ScenarioConfig& cfg) {
    csv.comment("seed", static_cast<std::uint64_t>(cfg.seed));
    csv.comment("config_hash", config_hash_hex(cfg));
}

Vec3 draw_disc_point(const UeArea& area, RngStream& rng) {
    const double r = area.radius * std::sqrt(rng.uniform());
    const double ang = rng.uniform(0.0, 2.0 * M_PI);
    return {area.center.x + r * std::cos(ang), area.center.y + r * std::sin(ang),
            area.center.z};
}

// Run f(0..count-1) with at most `jobs` threads; results land in order.
template <typename F>
void run_jobs(std::size_t count, int jobs, F&& f) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            f(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            f(i);
        }
    };
    std::vector<std::future<void>> pool;
    const std::size_t width = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    pool.reserve(width);
    for (std::size_t t = 0; t < width; ++t) {
        pool.push_back(std::async(std::launch::async, worker));
    }
    for (auto& fut : pool) {
        fut.get();
    }
}

} // namespace

ChannelPair scenario_true_channels(const ScenarioConfig& cfg, const Vec3& ue) {
    ScenarioGeometry geom = cfg.geometry;
    geom.ue = ue;
    const RngStream phases = RngStream(cfg.seed).split("path-phases");
    return synthesize_channels(geom, cfg.arrays, cfg.path_loss, phases);
}

ScenarioGeometry geometry_with_paths(const ScenarioConfig& cfg, std::size_t paths) {
    if (paths == 0) {
        throw std::invalid_argument("geometry_with_paths: need at least the LoS path");
    }
    ScenarioGeometry geom = cfg.geometry;
    const std::size_t want = paths - 1; // scatterer count
    if (geom.scatterers_ris_ue.size() > want) {
        geom.scatterers_ris_ue.resize(want);
        return geom;
    }
    RngStream rng = RngStream(cfg.seed).split("extra-scatterers");
    while (geom.scatterers_ris_ue.size() < want) {
        // A point roughly between the RIS and the UE area, jittered.
        const double t = rng.uniform(0.25, 0.75);
        Vec3 p = geom.ris + t * (cfg.ue_area.center - geom.ris);
        p.x += rng.uniform(-5.0, 5.0);
        p.y += rng.uniform(-5.0, 5.0);
        p.z = std::max(0.5, p.z + rng.uniform(-5.0, 5.0));
        geom.scatterers_ris_ue.push_back(p);
    }
    return geom;
}

Vec3 scenario_draw_ue(const ScenarioConfig& cfg) {
    RngStream rng = RngStream(cfg.seed).split("drl-ue-location");
    return draw_disc_point(cfg.ue_area, rng);
}

TrainedIen train_ien_on_dataset(const ScenarioConfig& cfg,
                                const std::vector<IenSample>& dataset) {
    const auto [lo, hi] = scenario_bounding_box(cfg);
    IenModel model = make_ien_model(cfg.arrays.m_bs, cfg.arrays.k_ue,
                                    cfg.arrays.ris_elements(), lo, hi,
                                    dataset_label_scale(dataset),
                                    RngStream(cfg.seed).split("ien-init"));
    IenTrainConfig tc;
    tc.epochs = cfg.ien_train.epochs;
    tc.batch = cfg.ien_train.batch;
    tc.sgd.learning_rate = cfg.ien_train.learning_rate;
    tc.shuffle_seed = cfg.seed;
    IenTrainResult res = train_ien(model, dataset, tc);
    return {std::move(model), std::move(res.mse_trace)};
}

TrainedIen train_ien_for_scenario(const ScenarioConfig& cfg) {
    IenDatasetConfig dc = cfg.ien_dataset;
    dc.rng_seed = cfg.seed;
    dc.location_error_eta = cfg.eta; // historic positions carry the same error level
    const std::vector<IenSample> dataset =
        generate_ien_dataset(cfg.geometry, cfg.ue_area, cfg.arrays, cfg.path_loss, dc);
    return train_ien_on_dataset(cfg, dataset);
}

namespace {

struct SessionEnv {
    std::unique_ptr<RisDdpgEnv> env;
    Vec3 ue_true, ue_seen;
};

SessionEnv make_session_env(const ScenarioConfig& cfg, const std::string& oracle,
                            const IenModel* ien) {
    SessionEnv out;
    out.ue_true = scenario_draw_ue(cfg);
    RngStream perturb_rng = RngStream(cfg.seed).split("ue-perturb");
    out.ue_seen = perturb_location(out.ue_true, cfg.eta, cfg.ue_area, perturb_rng);

    RisDdpgEnv::Setup setup;
    setup.true_pair = scenario_true_channels(cfg, out.ue_true);
    setup.env = cfg.env_config();
    setup.m = cfg.arrays.m_bs;
    setup.k = cfg.arrays.k_ue;
    setup.n = cfg.arrays.ris_elements();
    setup.loc_bs = cfg.geometry.bs;
    setup.loc_ris = cfg.geometry.ris;
    setup.loc_ue = out.ue_seen;
    setup.track_true_rate = true;
    if (cfg.normalize_state_locations) {
        const auto [lo, hi] = scenario_bounding_box(cfg);
        setup.encoding = {true, lo, hi};
    }

    if (oracle == "ien") {
        if (ien == nullptr) {
            throw std::invalid_argument("oracle 'ien' requires a trained IEN checkpoint");
        }
        setup.reward_oracle =
            RisDdpgEnv::ien_oracle(*ien, {cfg.geometry.bs, cfg.geometry.ris, out.ue_seen});
        setup.state_kind = RisDdpgEnv::StateKind::Location;
    } else if (oracle == "true") {
        setup.reward_oracle = RisDdpgEnv::true_channel_oracle(setup.true_pair);
        setup.state_kind = RisDdpgEnv::StateKind::Location;
    } else if (oracle == "csi") {
        setup.reward_oracle = RisDdpgEnv::true_channel_oracle(setup.true_pair);
        setup.state_kind = RisDdpgEnv::StateKind::Csi;
    } else {
        throw std::invalid_argument("unknown oracle '" + oracle +
                                    "' (expected ien, true, or csi)");
    }
    out.env = std::make_unique<RisDdpgEnv>(std::move(setup));
    return out;
}

std::vector<double> flat_rewards(const TrainResult& r) {
    std::vector<double> v;
    v.reserve(r.rewards.size());
    for (const StepReward& s : r.rewards) {
        v.push_back(s.reward);
    }
    return v;
}

} // namespace

DrlOutcome train_drl_session(const ScenarioConfig& cfg, const std::string& oracle,
                             const IenModel* ien, AgentNets* nets_out) {
    SessionEnv session = make_session_env(cfg, oracle, ien);
    DrlOutcome out;
    out.resolved = cfg.ddpg;
    out.resolved.state_dim = session.env->state_dim();
    out.resolved.action_dim = session.env->action_dim();
    AgentNets nets = make_agent_nets(out.resolved, RngStream(cfg.seed).split("agent-init"));
    out.result = train(nets, *session.env, out.resolved, RngStream(cfg.seed).split("drl-train"));
    out.avg_rewards = metric_average_reward(flat_rewards(out.result));
    out.best_true_rate = out.result.best_rate;
    out.chosen_true_rate = out.result.best_by_reward_action.empty()
                               ? 0.0
                               : session.env->true_rate(out.result.best_by_reward_action);
    if (nets_out) {
        *nets_out = std::move(nets);
    }
    return out;
}

DrlOutcome random_agent_session(const ScenarioConfig& cfg, const std::string& oracle,
                                const IenModel* ien) {
    SessionEnv session = make_session_env(cfg, oracle, ien);
    DrlOutcome out;
    out.resolved = cfg.ddpg;
    out.resolved.state_dim = session.env->state_dim();
    out.resolved.action_dim = session.env->action_dim();
    out.result =
        run_random_agent(*session.env, out.resolved, RngStream(cfg.seed).split("drl-train"));
    out.avg_rewards = metric_average_reward(flat_rewards(out.result));
    out.best_true_rate = out.result.best_rate;
    out.chosen_true_rate = out.result.best_by_reward_action.empty()
                               ? 0.0
                               : session.env->true_rate(out.result.best_by_reward_action);
    return out;
}

double evaluate_policy(const ScenarioConfig& cfg, const std::string& oracle,
                       const IenModel* ien, const AgentNets& nets, std::size_t steps) {
    SessionEnv session = make_session_env(cfg, oracle, ien);
    RngStream rng = RngStream(cfg.seed).split("policy-eval");
    RealVector s = session.env->reset(rng);
    double acc = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        const RealVector a = select_action(nets, s, 0.0, rng);
        acc += session.env->true_rate(a);
        s = session.env->step(a).first;
    }
    return acc / static_cast<double>(std::max<std::size_t>(1, steps));
}

void run_gen_dataset(const ScenarioConfig& cfg, const std::string& out_csv) {
    IenDatasetConfig dc = cfg.ien_dataset;
    dc.rng_seed = cfg.seed;
    dc.location_error_eta = cfg.eta;
    const std::vector<IenSample> dataset =
        generate_ien_dataset(cfg.geometry, cfg.ue_area, cfg.arrays, cfg.path_loss, dc);
    std::ofstream out = open_out(out_csv);
    out << "# seed=" << cfg.seed << "\n";
    out << "# config_hash=" << config_hash_hex(cfg) << "\n";
    write_ien_dataset(out, dataset);
}

void run_train_ien(const ScenarioConfig& cfg, const std::string& dataset_csv,
                   const std::string& checkpoint_out, const std::string& mse_csv) {
    TrainedIen trained;
    if (dataset_csv.empty()) {
        trained = train_ien_for_scenario(cfg);
    } else {
        std::ifstream in(dataset_csv);
        if (!in) {
            throw std::runtime_error("cannot open dataset: " + dataset_csv);
        }
        std::string line;
        // Skip comment stamps before the dataset header.
        while (in.peek() == '#') {
            std::getline(in, line);
        }
        const std::vector<IenSample> dataset =
            read_ien_dataset(in, cfg.arrays.m_bs, cfg.arrays.k_ue, cfg.arrays.ris_elements());
        trained = train_ien_on_dataset(cfg, dataset);
    }
    if (!checkpoint_out.empty()) {
        save_ien_file(trained.model, checkpoint_out);
    }
    if (!mse_csv.empty()) {
        std::ofstream out = open_out(mse_csv);
        CsvWriter csv(out, {"epoch", "mse"});
        stamp(csv, cfg);
        for (std::size_t e = 0; e < trained.mse_trace.size(); ++e) {
            csv.field(e + 1).field(trained.mse_trace[e]);
            csv.end_row();
        }
    }
}

void run_train_drl(const ScenarioConfig& cfg, const std::string& oracle,
                   const std::string& ien_checkpoint, const std::string& agent_out,
                   const std::string& reward_csv) {
    IenModel ien;
    const IenModel* ien_ptr = nullptr;
    if (oracle == "ien") {
        if (ien_checkpoint.empty()) {
            throw std::invalid_argument("oracle 'ien' requires --ien-checkpoint");
        }
        ien = load_ien_file(ien_checkpoint);
        if (ien.m != cfg.arrays.m_bs || ien.k != cfg.arrays.k_ue ||
            ien.n != cfg.arrays.ris_elements()) {
            throw std::invalid_argument(
                "IEN checkpoint dims (M=" + std::to_string(ien.m) + ", K=" +
                std::to_string(ien.k) + ", N=" + std::to_string(ien.n) +
                ") do not match the configured arrays");
        }
        ien_ptr = &ien;
    }
    AgentNets nets;
    const DrlOutcome outcome = train_drl_session(cfg, oracle, ien_ptr, &nets);
    if (!agent_out.empty()) {
        save_agent_file(nets, outcome.resolved, agent_out);
    }
    if (!reward_csv.empty()) {
        std::ofstream out = open_out(reward_csv);
        CsvWriter csv(out, {"episode", "step", "reward", "avg_reward"});
        stamp(csv, cfg);
        csv.comment("oracle", oracle);
        csv.comment("best_true_rate", outcome.best_true_rate);
        for (std::size_t i = 0; i < outcome.result.rewards.size(); ++i) {
            const StepReward& s = outcome.result.rewards[i];
            csv.field(s.episode).field(s.step).field(s.reward).field(outcome.avg_rewards[i]);
            csv.end_row();
        }
    }
}

void run_baseline_ao(const ScenarioConfig& cfg, const std::string& out_csv) {
    const Vec3 ue = scenario_draw_ue(cfg);
    const ChannelPair pair = scenario_true_channels(cfg, ue);
    const AoResult res =
        ao_optimize(pair, cfg.env_config(), cfg.ao, RngStream(cfg.seed).split("ao"));
    std::ofstream out = open_out(out_csv);
    CsvWriter csv(out, {"scheme", "n", "seed", "rate", "sweeps_or_steps"});
    stamp(csv, cfg);
    csv.field(std::string("ao"))
        .field(cfg.arrays.ris_elements())
        .field(cfg.seed)
        .field(res.rate_bits)
        .field(res.sweep_rates.size());
    csv.end_row();
}

void run_baseline_random(const ScenarioConfig& cfg, std::size_t trials,
                         const std::string& out_csv) {
    const Vec3 ue = scenario_draw_ue(cfg);
    const ChannelPair pair = scenario_true_channels(cfg, ue);
    const RandomPhaseResult res = random_phase_baseline(pair, cfg.env_config(), trials,
                                                        RngStream(cfg.seed).split("random"));
    std::ofstream out = open_out(out_csv);
    CsvWriter csv(out, {"scheme", "n", "seed", "rate", "sweeps_or_steps"});
    stamp(csv, cfg);
    csv.field(std::string("random-mean"))
        .field(cfg.arrays.ris_elements())
        .field(cfg.seed)
        .field(res.mean_rate)
        .field(trials);
    csv.end_row();
    csv.field(std::string("random-best"))
        .field(cfg.arrays.ris_elements())
        .field(cfg.seed)
        .field(res.best_rate)
        .field(trials);
    csv.end_row();
}

namespace {

ScenarioConfig with_elements(ScenarioConfig cfg, std::size_t nx, std::size_t ny) {
    cfg.arrays.n_x = nx;
    cfg.arrays.n_y = ny;
    return cfg;
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty()) {
        return name;
    }
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void sweep_ris_elements(const ScenarioConfig& cfg, const std::string& out_dir, int jobs) {
    struct Row {
        std::string scheme;
        std::size_t n;
        double eta;
        double rate;      // best action found, scored on the true channel
        double eval_rate; // greedy policy rollout (== rate for non-DRL schemes)
    };
    struct Job {
        std::string scheme;
        std::size_t nx, ny;
        double eta;
    };
    std::vector<Job> plan;
    for (const auto& [nx, ny] : cfg.sweep.ris_elements) {
        plan.push_back({"ao", nx, ny, 0.0});
        plan.push_back({"random", nx, ny, 0.0});
        plan.push_back({"scheme2-csi", nx, ny, 0.0});
        plan.push_back({"scheme3-true", nx, ny, 0.0});
        for (double eta : cfg.sweep.eta) {
            plan.push_back({"proposed", nx, ny, eta});
        }
    }
    std::vector<Row> rows(plan.size());
    run_jobs(plan.size(), jobs, [&](std::size_t i) {
        const Job& job = plan[i];
        ScenarioConfig c = with_elements(cfg, job.nx, job.ny);
        c.eta = job.eta;
        double rate = 0.0;
        double eval_rate = 0.0;
        if (job.scheme == "ao") {
            const ChannelPair pair = scenario_true_channels(c, scenario_draw_ue(c));
            rate = ao_optimize(pair, c.env_config(), c.ao, RngStream(c.seed).split("ao"))
                       .rate_bits;
            eval_rate = rate;
        } else if (job.scheme == "random") {
            const ChannelPair pair = scenario_true_channels(c, scenario_draw_ue(c));
            rate = random_phase_baseline(pair, c.env_config(), c.random_trials,
                                         RngStream(c.seed).split("random"))
                       .best_rate;
            eval_rate = rate;
        } else if (job.scheme == "scheme2-csi") {
            AgentNets nets;
            rate = train_drl_session(c, "csi", nullptr, &nets).best_true_rate;
            eval_rate = evaluate_policy(c, "csi", nullptr, nets);
        } else if (job.scheme == "scheme3-true") {
            AgentNets nets;
            rate = train_drl_session(c, "true", nullptr, &nets).best_true_rate;
            eval_rate = evaluate_policy(c, "true", nullptr, nets);
        } else { // proposed
            const TrainedIen ien = train_ien_for_scenario(c);
            AgentNets nets;
            rate = train_drl_session(c, "ien", &ien.model, &nets).best_true_rate;
            eval_rate = evaluate_policy(c, "ien", &ien.model, nets);
        }
        rows[i] = {job.scheme, job.nx * job.ny, job.eta, rate, eval_rate};
    });
    std::ofstream out = open_out(join_path(out_dir, "rate_vs_elements.csv"));
    CsvWriter csv(out, {"scheme", "n", "eta", "seed", "rate", "eval_rate"});
    stamp(csv, cfg);
    for (const Row& r : rows) {
        csv.field(r.scheme).field(r.n).field(r.eta).field(cfg.seed).field(r.rate);
        csv.field(r.eval_rate);
        csv.end_row();
    }
}

void sweep_paths(const ScenarioConfig& cfg, const std::string& out_dir, int jobs) {
    struct Job {
        std::size_t nx, ny, paths;
    };
    std::vector<Job> plan;
    for (const auto& [nx, ny] : cfg.sweep.ris_elements) {
        for (std::size_t p : cfg.sweep.paths) {
            plan.push_back({nx, ny, p});
        }
    }
    std::vector<double> final_mse(plan.size());
    run_jobs(plan.size(), jobs, [&](std::size_t i) {
        ScenarioConfig c = with_elements(cfg, plan[i].nx, plan[i].ny);
        c.geometry = geometry_with_paths(c, plan[i].paths);
        const TrainedIen trained = train_ien_for_scenario(c);
        final_mse[i] = trained.mse_trace.empty() ? 0.0 : trained.mse_trace.back();
    });
    std::ofstream out = open_out(join_path(out_dir, "mse_vs_paths.csv"));
    CsvWriter csv(out, {"n", "l_d", "seed", "final_mse"});
    stamp(csv, cfg);
    for (std::size_t i = 0; i < plan.size(); ++i) {
        csv.field(plan[i].nx * plan[i].ny)
            .field(plan[i].paths)
            .field(cfg.seed)
            .field(final_mse[i]);
        csv.end_row();
    }
}

void sweep_eta(const ScenarioConfig& cfg, const std::string& out_dir, int jobs) {
    std::vector<double> rates(cfg.sweep.eta.size());
    std::vector<double> eval_rates(cfg.sweep.eta.size());
    run_jobs(cfg.sweep.eta.size(), jobs, [&](std::size_t i) {
        ScenarioConfig c = cfg;
        c.eta = cfg.sweep.eta[i];
        // The historic training positions carry the same error level, so
        // each eta point trains its own surrogate.
        const TrainedIen ien = train_ien_for_scenario(c);
        AgentNets nets;
        rates[i] = train_drl_session(c, "ien", &ien.model, &nets).best_true_rate;
        eval_rates[i] = evaluate_policy(c, "ien", &ien.model, nets);
    });
    std::ofstream out = open_out(join_path(out_dir, "rate_vs_eta.csv"));
    CsvWriter csv(out, {"eta", "seed", "rate", "eval_rate"});
    stamp(csv, cfg);
    for (std::size_t i = 0; i < rates.size(); ++i) {
        csv.field(cfg.sweep.eta[i]).field(cfg.seed).field(rates[i]).field(eval_rates[i]);
        csv.end_row();
    }
}

void sweep_coherence(const ScenarioConfig& cfg, const std::string& out_dir, int jobs) {
    (void)jobs; // two trainings, then arithmetic
    const TrainedIen ien = train_ien_for_scenario(cfg);
    const double rate_proposed = train_drl_session(cfg, "ien", &ien.model).best_true_rate;
    const double rate_scheme3 = train_drl_session(cfg, "true", nullptr).best_true_rate;

    std::ofstream out = open_out(join_path(out_dir, "avg_rate_vs_coherence.csv"));
    CsvWriter csv(out, {"scheme", "t_c", "t_interaction", "rate", "avg_rate"});
    stamp(csv, cfg);
    for (double tc : cfg.sweep.coherence) {
        // Proposed: interaction happens against the IEN, T = 0.
        csv.field(std::string("proposed"))
            .field(tc)
            .field(0.0)
            .field(rate_proposed)
            .field(metric_avg_achievable_rate(rate_proposed, 0.0, tc));
        csv.end_row();
        csv.field(std::string("scheme3-true"))
            .field(tc)
            .field(cfg.interaction_slots_t)
            .field(rate_scheme3)
            .field(metric_avg_achievable_rate(rate_scheme3, cfg.interaction_slots_t, tc));
        csv.end_row();
    }
}

} // namespace

void run_sweep(const ScenarioConfig& cfg, const std::string& axis, const std::string& out_dir,
               int jobs) {
    if (axis == "ris-elements") {
        sweep_ris_elements(cfg, out_dir, jobs);
    } else if (axis == "paths") {
        sweep_paths(cfg, out_dir, jobs);
    } else if (axis == "eta") {
        sweep_eta(cfg, out_dir, jobs);
    } else if (axis == "coherence") {
        sweep_coherence(cfg, out_dir, jobs);
    } else {
        throw std::invalid_argument("unknown sweep axis '" + axis +
                                    "' (expected ris-elements, paths, eta, or coherence)");
    }
}

} // namespace rislab

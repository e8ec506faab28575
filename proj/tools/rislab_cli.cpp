// rislab command-line front end.
//
// Subcommands map 1:1 onto the shared-library C API:
//   gen-dataset      IEN training set CSV
//   train-ien        Algorithm-1 training, emits MSE trace + checkpoint
//   train-drl        DDPG training against the ien/true/csi oracle
//   baseline-ao      alternating-optimization baseline
//   baseline-random  random-phase reference
//   sweep            figure-style sweeps (ris-elements, paths, eta, coherence)
//
// The config is JSON (see configs/default.json); --set key=value overrides
// fields by dotted path. RISLAB_CONFIG provides a default config path.
// Exit codes: 0 ok, 1 usage/config error, 2 runtime error.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rislab.h"

namespace {

struct ConfigHandle {
    rislab_config* cfg = nullptr;
    ~ConfigHandle() { rislab_config_free(cfg); }
};

int report(rislab_status status) {
    if (status == RISLAB_OK) {
        return 0;
    }
    std::cerr << "error: " << rislab_status_message(status);
    const char* detail = rislab_last_error();
    if (detail && *detail) {
        std::cerr << ": " << detail;
    }
    std::cerr << "\n";
    return status == RISLAB_ERR_INVALID_ARGUMENT || status == RISLAB_ERR_PARSE ? 1 : 2;
}

// Loads the config (file, env default, or built-in defaults) and applies
// --set overrides. Returns nonzero exit code on failure.
int load_config(const std::string& path, const std::vector<std::string>& overrides,
                ConfigHandle& handle) {
    std::string effective = path;
    if (effective.empty()) {
        if (const char* env = std::getenv("RISLAB_CONFIG")) {
            effective = env;
        }
    }
    rislab_status status = effective.empty()
                               ? rislab_config_default(&handle.cfg)
                               : rislab_config_load(effective.c_str(), &handle.cfg);
    if (status != RISLAB_OK) {
        return report(status);
    }
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: --set expects key=value, got '" << ov << "'\n";
            return 1;
        }
        status = rislab_config_set(handle.cfg, ov.substr(0, eq).c_str(),
                                   ov.substr(eq + 1).c_str());
        if (status != RISLAB_OK) {
            return report(status);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-aided mmWave MIMO beamforming laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("-c,--config", config_path, "Config JSON path (default: $RISLAB_CONFIG)");
    app.add_option("--set", overrides, "Override a config field: dotted.path=json-value");

    auto* gen = app.add_subcommand("gen-dataset", "Generate the IEN training set");
    std::string gen_out = "ien_dataset.csv";
    gen->add_option("-o,--out", gen_out, "Output CSV path");

    auto* tien = app.add_subcommand("train-ien", "Train the imitation environment network");
    std::string tien_dataset, tien_ckpt = "ien_checkpoint.txt", tien_mse = "ien_mse.csv";
    tien->add_option("--dataset", tien_dataset, "Dataset CSV (omit to generate from config)");
    tien->add_option("--out", tien_ckpt, "Checkpoint output path");
    tien->add_option("--mse-out", tien_mse, "MSE trace CSV path");

    auto* tdrl = app.add_subcommand("train-drl", "Train the DDPG agent");
    std::string tdrl_oracle = "ien";
    std::string tdrl_ien, tdrl_agent = "agent_checkpoint.txt", tdrl_rewards = "reward_log.csv";
    tdrl->add_option("--oracle", tdrl_oracle, "Environment oracle: ien | true | csi")
        ->check(CLI::IsMember({"ien", "true", "csi"}));
    tdrl->add_option("--ien-checkpoint", tdrl_ien, "Trained IEN checkpoint (oracle=ien)");
    tdrl->add_option("--out", tdrl_agent, "Agent checkpoint output path");
    tdrl->add_option("--reward-log", tdrl_rewards, "Reward log CSV path");

    auto* bao = app.add_subcommand("baseline-ao", "Alternating-optimization baseline");
    std::string bao_out = "baseline_ao.csv";
    bao->add_option("-o,--out", bao_out, "Output CSV path");

    auto* brand = app.add_subcommand("baseline-random", "Random-phase reference");
    std::string brand_out = "baseline_random.csv";
    unsigned long brand_trials = 0;
    brand->add_option("-o,--out", brand_out, "Output CSV path");
    brand->add_option("--trials", brand_trials, "Trial count (0: config random_trials)");

    auto* sweep = app.add_subcommand("sweep", "Run a figure-style sweep");
    std::string sweep_axis, sweep_dir = ".";
    int sweep_jobs = 1;
    sweep->add_option("--axis", sweep_axis, "ris-elements | paths | eta | coherence")
        ->required()
        ->check(CLI::IsMember({"ris-elements", "paths", "eta", "coherence"}));
    sweep->add_option("-o,--out-dir", sweep_dir, "Output directory");
    sweep->add_option("--jobs", sweep_jobs, "Max parallel jobs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1; // usage error
    }

    ConfigHandle handle;
    if (int rc = load_config(config_path, overrides, handle); rc != 0) {
        return rc;
    }

    if (gen->parsed()) {
        return report(rislab_gen_dataset(handle.cfg, gen_out.c_str()));
    }
    if (tien->parsed()) {
        return report(rislab_train_ien(handle.cfg,
                                       tien_dataset.empty() ? nullptr : tien_dataset.c_str(),
                                       tien_ckpt.c_str(), tien_mse.c_str()));
    }
    if (tdrl->parsed()) {
        return report(rislab_train_drl(handle.cfg, tdrl_oracle.c_str(),
                                       tdrl_ien.empty() ? nullptr : tdrl_ien.c_str(),
                                       tdrl_agent.c_str(), tdrl_rewards.c_str()));
    }
    if (bao->parsed()) {
        return report(rislab_baseline_ao(handle.cfg, bao_out.c_str()));
    }
    if (brand->parsed()) {
        return report(rislab_baseline_random(handle.cfg, brand_trials, brand_out.c_str()));
    }
    if (sweep->parsed()) {
        return report(rislab_sweep(handle.cfg, sweep_axis.c_str(), sweep_dir.c_str(),
                                   sweep_jobs));
    }
    return 1;
}

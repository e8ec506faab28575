#include "rislab.h"

#include <cstdio>
#include <cstring>
#include <new>
#include <string>

#include "rislab/runner.hpp"

using rislab::ScenarioConfig;

struct rislab_config {
    ScenarioConfig cfg;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

rislab_status fail(rislab_status code, const std::string& msg) {
    set_error(msg);
    return code;
}

// Invalid-argument exceptions from the core carry field-level messages;
// everything else maps onto the coarse status buckets.
template <typename Fn>
rislab_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return RISLAB_OK;
    } catch (const std::invalid_argument& e) {
        return fail(RISLAB_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(RISLAB_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        const std::string what = e.what();
        if (what.find("cannot open") != std::string::npos) {
            return fail(RISLAB_ERR_IO, what);
        }
        if (what.find("checkpoint") != std::string::npos ||
            what.find("dataset") != std::string::npos ||
            what.find("csv") != std::string::npos) {
            return fail(RISLAB_ERR_PARSE, what);
        }
        if (what.find("positive definite") != std::string::npos ||
            what.find("Hermitian") != std::string::npos) {
            return fail(RISLAB_ERR_NUMERIC, what);
        }
        return fail(RISLAB_ERR_INTERNAL, what);
    } catch (...) {
        return fail(RISLAB_ERR_INTERNAL, "unknown error");
    }
}

rislab_status require(bool ok, const char* msg) {
    return ok ? RISLAB_OK : fail(RISLAB_ERR_INVALID_ARGUMENT, msg);
}

} // namespace

extern "C" {

const char* rislab_version(void) { return "0.1.0"; }

const char* rislab_status_message(rislab_status status) {
    switch (status) {
    case RISLAB_OK:
        return "ok";
    case RISLAB_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case RISLAB_ERR_PARSE:
        return "parse error";
    case RISLAB_ERR_IO:
        return "i/o error";
    case RISLAB_ERR_NUMERIC:
        return "numeric error";
    case RISLAB_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

const char* rislab_last_error(void) { return g_last_error.c_str(); }

rislab_status rislab_config_default(rislab_config** out) {
    if (rislab_status s = require(out != nullptr, "out pointer is null"); s != RISLAB_OK) {
        return s;
    }
    return guarded([&] { *out = new rislab_config{rislab::default_scenario()}; });
}

rislab_status rislab_config_load(const char* path, rislab_config** out) {
    if (rislab_status s = require(path && out, "path/out must be non-null"); s != RISLAB_OK) {
        return s;
    }
    return guarded([&] { *out = new rislab_config{rislab::load_scenario_file(path)}; });
}

rislab_status rislab_config_loads(const char* json_text, rislab_config** out) {
    if (rislab_status s = require(json_text && out, "json/out must be non-null");
        s != RISLAB_OK) {
        return s;
    }
    return guarded([&] { *out = new rislab_config{rislab::scenario_from_json(json_text)}; });
}

rislab_status rislab_config_save(const rislab_config* cfg, const char* path) {
    if (rislab_status s = require(cfg && path, "config/path must be non-null");
        s != RISLAB_OK) {
        return s;
    }
    return guarded([&] { rislab::save_scenario_file(cfg->cfg, path); });
}

rislab_status rislab_config_set(rislab_config* cfg, const char* dotted_key,
                                const char* json_value) {
    if (rislab_status s = require(cfg && dotted_key && json_value, "arguments must be non-null");
        s != RISLAB_OK) {
        return s;
    }
    return guarded([&] { cfg->cfg = rislab::apply_override(cfg->cfg, dotted_key, json_value); });
}

rislab_status rislab_config_hash(const rislab_config* cfg, char* buf, size_t buflen) {
    if (rislab_status s = require(cfg && buf, "config/buf must be non-null"); s != RISLAB_OK) {
        return s;
    }
    return guarded([&] {
        const std::string hex = rislab::config_hash_hex(cfg->cfg);
        if (buflen <= hex.size()) {
            throw std::invalid_argument("hash buffer too small (need " +
                                        std::to_string(hex.size() + 1) + " bytes)");
        }
        std::memcpy(buf, hex.c_str(), hex.size() + 1);
    });
}

void rislab_config_free(rislab_config* cfg) { delete cfg; }

rislab_status rislab_gen_dataset(const rislab_config* cfg, const char* out_csv) {
    if (rislab_status s = require(cfg && out_csv, "config/out_csv must be non-null");
        s != RISLAB_OK) {
        return s;
    }
    return guarded([&] { rislab::run_gen_dataset(cfg->cfg, out_csv); });
}

rislab_status rislab_train_ien(const rislab_config* cfg, const char* dataset_csv,
                               const char* checkpoint_out, const char* mse_csv_out) {
    if (rislab_status s = require(cfg != nullptr, "config must be non-null"); s != RISLAB_OK) {
        return s;
    }
    return guarded([&] {
        rislab::run_train_ien(cfg->cfg, dataset_csv ? dataset_csv : "",
                              checkpoint_out ? checkpoint_out : "",
                              mse_csv_out ? mse_csv_out : "");
    });
}

rislab_status rislab_train_drl(const rislab_config* cfg, const char* oracle,
                               const char* ien_checkpoint, const char* agent_out,
                               const char* reward_csv_out) {
    if (rislab_status s = require(cfg && oracle, "config/oracle must be non-null");
        s != RISLAB_OK) {
        return s;
    }
    return guarded([&] {
        rislab::run_train_drl(cfg->cfg, oracle, ien_checkpoint ? ien_checkpoint : "",
                              agent_out ? agent_out : "", reward_csv_out ? reward_csv_out : "");
    });
}

rislab_status rislab_baseline_ao(const rislab_config* cfg, const char* out_csv) {
    if (rislab_status s = require(cfg && out_csv, "config/out_csv must be non-null");
        s != RISLAB_OK) {
        return s;
    }
    return guarded([&] { rislab::run_baseline_ao(cfg->cfg, out_csv); });
}

rislab_status rislab_baseline_random(const rislab_config* cfg, unsigned long trials,
                                     const char* out_csv) {
    if (rislab_status s = require(cfg && out_csv, "config/out_csv must be non-null");
        s != RISLAB_OK) {
        return s;
    }
    return guarded([&] {
        rislab::run_baseline_random(cfg->cfg, trials == 0 ? cfg->cfg.random_trials : trials,
                                    out_csv);
    });
}

rislab_status rislab_sweep(const rislab_config* cfg, const char* axis, const char* out_dir,
                           int jobs) {
    if (rislab_status s = require(cfg && axis && out_dir, "config/axis/out_dir must be non-null");
        s != RISLAB_OK) {
        return s;
    }
    return guarded([&] { rislab::run_sweep(cfg->cfg, axis, out_dir, jobs); });
}

} // extern "C"

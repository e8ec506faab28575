/*
 * rislab C API: RIS-aided mmWave MIMO beamforming laboratory.
 *
 * The C++ core sits behind this flat interface: opaque handles, integer
 * status codes, and a thread-local detail message. Handles must be released
 * with their matching *_free call. All functions are safe to call from
 * multiple threads as long as a given handle is used from one thread at a
 * time.
 */
#ifndef RISLAB_H
#define RISLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rislab_status {
    RISLAB_OK = 0,
    RISLAB_ERR_INVALID_ARGUMENT = 1, /* bad parameter or config field */
    RISLAB_ERR_PARSE = 2,            /* malformed config/checkpoint */
    RISLAB_ERR_IO = 3,               /* file open/read/write failure */
    RISLAB_ERR_NUMERIC = 4,          /* numerical failure (e.g. non-PD matrix) */
    RISLAB_ERR_INTERNAL = 5
} rislab_status;

typedef struct rislab_config rislab_config;

const char* rislab_version(void);

/* Static description of a status code. */
const char* rislab_status_message(rislab_status status);

/* Detail for the most recent failure on this thread; empty string if none. */
const char* rislab_last_error(void);

/* -------- configuration -------- */

rislab_status rislab_config_default(rislab_config** out);
rislab_status rislab_config_load(const char* path, rislab_config** out);
rislab_status rislab_config_loads(const char* json_text, rislab_config** out);
rislab_status rislab_config_save(const rislab_config* cfg, const char* path);

/* Replace one field addressed by a dotted path, e.g.
 * rislab_config_set(cfg, "ddpg.episodes_j", "200"). The value is JSON. */
rislab_status rislab_config_set(rislab_config* cfg, const char* dotted_key,
                                const char* json_value);

/* Hex hash of the canonical serialized config (as stamped into CSVs). */
rislab_status rislab_config_hash(const rislab_config* cfg, char* buf, size_t buflen);

void rislab_config_free(rislab_config* cfg);

/* -------- pipeline operations --------
 * Every operation is a pure function of (config, arguments); outputs are
 * CSV/checkpoint files at the given paths. NULL or "" output paths skip
 * that artifact where noted.
 */

/* IEN training set (CSV). */
rislab_status rislab_gen_dataset(const rislab_config* cfg, const char* out_csv);

/* Train the imitation environment network. dataset_csv NULL: generate from
 * the config. checkpoint_out / mse_csv_out optional. */
rislab_status rislab_train_ien(const rislab_config* cfg, const char* dataset_csv,
                               const char* checkpoint_out, const char* mse_csv_out);

/* Train the DDPG agent. oracle is "ien", "true", or "csi"; ien_checkpoint is
 * required for "ien". agent_out / reward_csv_out optional. */
rislab_status rislab_train_drl(const rislab_config* cfg, const char* oracle,
                               const char* ien_checkpoint, const char* agent_out,
                               const char* reward_csv_out);

/* Alternating-optimization baseline (scheme 1). */
rislab_status rislab_baseline_ao(const rislab_config* cfg, const char* out_csv);

/* Random-phase reference; trials == 0 uses the config's random_trials. */
rislab_status rislab_baseline_random(const rislab_config* cfg, unsigned long trials,
                                     const char* out_csv);

/* Figure-style sweeps; axis is "ris-elements", "paths", "eta", or
 * "coherence". Writes one CSV into out_dir. jobs bounds worker threads. */
rislab_status rislab_sweep(const rislab_config* cfg, const char* axis, const char* out_dir,
                           int jobs);

#ifdef __cplusplus
}
#endif

#endif /* RISLAB_H */

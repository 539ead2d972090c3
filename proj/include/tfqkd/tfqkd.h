/* SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the time-frequency QKD library. Every call returns a status
 * code; on failure tfqkd_last_error() holds a message for the calling thread.
 * Objects are opaque and released with their matching _destroy function.
 */
#ifndef TFQKD_H
#define TFQKD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TFQKD_BUILDING)
#    define TFQKD_API __declspec(dllexport)
#  else
#    define TFQKD_API __declspec(dllimport)
#  endif
#else
#  define TFQKD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tfqkd_status {
    TFQKD_OK = 0,
    TFQKD_ERR_INVALID_ARGUMENT = 1,
    TFQKD_ERR_DOMAIN = 2,
    TFQKD_ERR_GRID_TOO_SMALL = 3,
    TFQKD_ERR_GRID_MISMATCH = 4,
    TFQKD_ERR_NUMERICAL = 5,
    TFQKD_ERR_EMPTY_BASIS = 6,
    TFQKD_ERR_CONFIG = 7,
    TFQKD_ERR_IO = 8,
    TFQKD_ERR_INTERNAL = 99
} tfqkd_status;

typedef enum tfqkd_basis { TFQKD_BASIS_FREQUENCY = 0, TFQKD_BASIS_TIME = 1 } tfqkd_basis;

typedef enum tfqkd_command {
    TFQKD_CMD_ANALYZE = 0,
    TFQKD_CMD_SWEEP = 1,
    TFQKD_CMD_MONTECARLO = 2,
    TFQKD_CMD_FEASIBILITY = 3,
    TFQKD_CMD_REPRODUCE_FIG2B = 4
} tfqkd_command;

typedef enum tfqkd_format { TFQKD_FORMAT_CSV = 0, TFQKD_FORMAT_JSON = 1, TFQKD_FORMAT_BOTH = 2 } tfqkd_format;

typedef struct tfqkd_channel {
    double epsilon; /* pair-emission probability per run */
    double eta_d;   /* detector efficiency */
    double length;  /* per-leg length */
    double l_att;   /* attenuation length */
    double dark;    /* dark-count probability per detector per run */
    int m;          /* detectors per side */
} tfqkd_channel;

typedef struct tfqkd_error_probability {
    double p;
    int degenerate;
} tfqkd_error_probability;

typedef struct tfqkd_kernel_result {
    double numerical;
    double analytic;
    double validity_ratio;
    int resolution_warning;
} tfqkd_kernel_result;

typedef struct tfqkd_lens {
    double mod_depth;
    double mod_frequency;
    double gvd;
    double phi_ddot;
    double aperture;
    double delta_t;
} tfqkd_lens;

typedef struct tfqkd_source tfqkd_source;
typedef struct tfqkd_distribution tfqkd_distribution;
typedef struct tfqkd_config tfqkd_config;
typedef struct tfqkd_document tfqkd_document;

TFQKD_API const char* tfqkd_version(void);
/* Message for the last failed call on this thread; "" if none. */
TFQKD_API const char* tfqkd_last_error(void);

/* Closed-form quantities. */
TFQKD_API void tfqkd_channel_default(tfqkd_channel* out);
TFQKD_API tfqkd_status tfqkd_transmission(const tfqkd_channel* channel, double* out);
TFQKD_API tfqkd_status tfqkd_error_probability_closed(const tfqkd_channel* channel, tfqkd_error_probability* out);
TFQKD_API tfqkd_status tfqkd_click_probabilities(const tfqkd_channel* channel, double* p_correct,
                                                 double* p_incorrect);
TFQKD_API tfqkd_status tfqkd_binning_deficit(double beta_plus, double beta_minus, double* out);
TFQKD_API tfqkd_status tfqkd_entropic_bound(double delta_omega, double delta_t, double* out);
TFQKD_API tfqkd_status tfqkd_simplified_key_rate(int m, double p, double beta_plus, double beta_minus, double* out);
TFQKD_API tfqkd_status tfqkd_design_time_lens(int m, double beta_plus, double beta_minus, tfqkd_lens* out);
TFQKD_API tfqkd_status tfqkd_kernel_singular_value(double delta_omega, double phi_ddot, tfqkd_kernel_result* out);

/* Gaussian two-photon source on its default grid. */
TFQKD_API tfqkd_status tfqkd_source_create_gaussian(double delta_plus, double delta_minus, tfqkd_source** out);
/* Source matched to M channels with coverage factors beta_plus, beta_minus. */
TFQKD_API tfqkd_status tfqkd_source_create_matched(int m, double beta_plus, double beta_minus, tfqkd_source** out);
TFQKD_API tfqkd_status tfqkd_source_schmidt_number(const tfqkd_source* source, double* out);
TFQKD_API tfqkd_status tfqkd_source_grid_size(const tfqkd_source* source, size_t* out);
TFQKD_API void tfqkd_source_destroy(tfqkd_source* source);

/* Binned M x M outcome distribution of a source under the designed
 * measurement (rows Bob, columns Alice). */
TFQKD_API tfqkd_status tfqkd_distribution_create(const tfqkd_source* source, int m, double beta_plus,
                                                 double beta_minus, tfqkd_basis basis, tfqkd_distribution** out);
/* Uniform-error model with error probability p. */
TFQKD_API tfqkd_status tfqkd_distribution_create_error_model(int m, double p, tfqkd_basis basis,
                                                             tfqkd_distribution** out);
TFQKD_API tfqkd_status tfqkd_distribution_size(const tfqkd_distribution* dist, int* m);
TFQKD_API tfqkd_status tfqkd_distribution_get(const tfqkd_distribution* dist, int b, int a, double* out);
TFQKD_API tfqkd_status tfqkd_distribution_entropies(const tfqkd_distribution* dist, double* h_b,
                                                    double* h_b_given_a);
TFQKD_API void tfqkd_distribution_destroy(tfqkd_distribution* dist);

/* Run configuration. */
TFQKD_API tfqkd_status tfqkd_config_create_default(tfqkd_config** out);
TFQKD_API tfqkd_status tfqkd_config_parse(const char* json_text, tfqkd_config** out);
TFQKD_API tfqkd_status tfqkd_config_load(const char* path, tfqkd_config** out);
/* Serialized JSON; release with tfqkd_string_free. */
TFQKD_API tfqkd_status tfqkd_config_serialize(const tfqkd_config* config, char** out);
TFQKD_API tfqkd_status tfqkd_config_set_seed(tfqkd_config* config, uint64_t seed);
TFQKD_API tfqkd_status tfqkd_config_set_rounds(tfqkd_config* config, uint64_t rounds);
TFQKD_API tfqkd_status tfqkd_config_set_threads(tfqkd_config* config, unsigned threads);
TFQKD_API tfqkd_status tfqkd_config_set_format(tfqkd_config* config, tfqkd_format format);
TFQKD_API tfqkd_status tfqkd_config_set_output_directory(tfqkd_config* config, const char* directory);
/* Output directory from the config; valid until the config changes. */
TFQKD_API const char* tfqkd_config_output_directory(const tfqkd_config* config);
TFQKD_API void tfqkd_config_destroy(tfqkd_config* config);
TFQKD_API void tfqkd_string_free(char* s);

/* Commands produce documents: a list of named output files. */
TFQKD_API tfqkd_status tfqkd_run(const tfqkd_config* config, tfqkd_command command, tfqkd_document** out);
TFQKD_API size_t tfqkd_document_count(const tfqkd_document* doc);
TFQKD_API const char* tfqkd_document_name(const tfqkd_document* doc, size_t index);
TFQKD_API tfqkd_status tfqkd_document_content(const tfqkd_document* doc, size_t index, const char** data,
                                              size_t* size);
TFQKD_API tfqkd_status tfqkd_document_write(const tfqkd_document* doc, const char* directory);
TFQKD_API void tfqkd_document_destroy(tfqkd_document* doc);

#ifdef __cplusplus
}
#endif

#endif

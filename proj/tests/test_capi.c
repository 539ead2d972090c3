/* Exercises the C interface from plain C. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "tfqkd/tfqkd.h"

static int failures = 0;

#define EXPECT(cond)                                                        \
    do {                                                                    \
        if (!(cond)) {                                                      \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                     \
        }                                                                   \
    } while (0)

#define EXPECT_OK(call) EXPECT((call) == TFQKD_OK)

static int near(double a, double b, double rel) { return fabs(a - b) <= rel * fabs(b); }

static void closed_forms(void)
{
    tfqkd_channel ch;
    double eta, pc, pi, c, b, k;
    tfqkd_error_probability e;
    tfqkd_lens lens;
    tfqkd_kernel_result ker;

    tfqkd_channel_default(&ch);
    EXPECT(ch.m == 16);
    EXPECT_OK(tfqkd_transmission(&ch, &eta));
    EXPECT(near(eta, 0.25 * exp(-1.0), 1e-12));
    EXPECT_OK(tfqkd_error_probability_closed(&ch, &e));
    EXPECT(!e.degenerate);
    EXPECT(near(e.p, 2.96e-4, 0.01));
    EXPECT_OK(tfqkd_click_probabilities(&ch, &pc, &pi));
    EXPECT(pc > 0 && pi > 0 && pi < pc);

    EXPECT_OK(tfqkd_binning_deficit(0.75, 0.2, &c));
    EXPECT(near(c, 0.0855, 0.01));
    EXPECT_OK(tfqkd_design_time_lens(16, 0.75, 0.2, &lens));
    EXPECT(near(lens.mod_depth, 60, 1e-12));
    EXPECT(near(lens.aperture, 5, 1e-12));
    EXPECT(near(lens.gvd * lens.phi_ddot, 1, 1e-12));
    EXPECT_OK(tfqkd_entropic_bound(1.0, lens.delta_t, &b));
    EXPECT(near(b, 4 - c, 1e-9));
    EXPECT_OK(tfqkd_simplified_key_rate(16, e.p, 0.75, 0.2, &k));
    EXPECT(near(k, 3.9044, 1e-4));
    EXPECT_OK(tfqkd_kernel_singular_value(1.0, lens.phi_ddot, &ker));
    EXPECT(near(ker.numerical, ker.analytic, 0.05));
    EXPECT(!ker.resolution_warning);
}

static void errors(void)
{
    tfqkd_channel ch;
    double out;
    tfqkd_distribution* d = NULL;

    tfqkd_channel_default(&ch);
    ch.eta_d = 2.0;
    EXPECT(tfqkd_transmission(&ch, &out) == TFQKD_ERR_INVALID_ARGUMENT);
    EXPECT(strlen(tfqkd_last_error()) > 0);
    EXPECT(tfqkd_transmission(NULL, &out) == TFQKD_ERR_INVALID_ARGUMENT);
    EXPECT(tfqkd_binning_deficit(-0.2, 0.75, &out) != TFQKD_OK);
    EXPECT(tfqkd_distribution_create_error_model(4, 0.9, TFQKD_BASIS_TIME, &d) == TFQKD_ERR_DOMAIN);
    EXPECT(d == NULL);
    EXPECT_OK(tfqkd_binning_deficit(0.75, 0.2, &out));
    EXPECT(strcmp(tfqkd_last_error(), "") == 0);
}

static void sources(void)
{
    tfqkd_source* s = NULL;
    tfqkd_distribution* d = NULL;
    double k, hb, hba, sum = 0, v;
    size_t n;
    int m, a, b;

    EXPECT_OK(tfqkd_source_create_gaussian(5.2, 1.0, &s));
    EXPECT_OK(tfqkd_source_schmidt_number(s, &k));
    EXPECT(near(k, (5.2 * 5.2 + 1) / (2 * 5.2), 0.01));
    EXPECT_OK(tfqkd_source_grid_size(s, &n));
    EXPECT(n >= 128);
    tfqkd_source_destroy(s);

    EXPECT_OK(tfqkd_source_create_matched(8, 0.75, 0.2, &s));
    EXPECT_OK(tfqkd_distribution_create(s, 8, 0.75, 0.2, TFQKD_BASIS_FREQUENCY, &d));
    EXPECT_OK(tfqkd_distribution_size(d, &m));
    EXPECT(m == 8);
    for (b = 0; b < m; ++b)
        for (a = 0; a < m; ++a) {
            EXPECT_OK(tfqkd_distribution_get(d, b, a, &v));
            sum += v;
        }
    EXPECT(near(sum, 1.0, 1e-9));
    EXPECT(tfqkd_distribution_get(d, 8, 0, &v) == TFQKD_ERR_INVALID_ARGUMENT);
    EXPECT_OK(tfqkd_distribution_entropies(d, &hb, &hba));
    EXPECT(hb > 2.5 && hb <= 3.0);
    EXPECT(hba >= 0 && hba < hb);
    tfqkd_distribution_destroy(d);
    tfqkd_source_destroy(s);
    tfqkd_source_destroy(NULL);
}

static void commands(void)
{
    tfqkd_config* cfg = NULL;
    tfqkd_config* back = NULL;
    tfqkd_document* doc = NULL;
    tfqkd_document* again = NULL;
    char* text = NULL;
    const char* data;
    size_t size, size2, i;
    const char* data2;

    EXPECT(tfqkd_config_parse("{\"channel\": {\"darkness\": 1}}", &cfg) == TFQKD_ERR_CONFIG);
    EXPECT(strstr(tfqkd_last_error(), "config.channel.darkness") != NULL);
    EXPECT(tfqkd_config_load("/nonexistent.json", &cfg) == TFQKD_ERR_IO);

    EXPECT_OK(tfqkd_config_parse("{\"protocol\": {\"m\": 8}}", &cfg));
    EXPECT_OK(tfqkd_config_set_rounds(cfg, 20000));
    EXPECT_OK(tfqkd_config_set_seed(cfg, 9));
    EXPECT_OK(tfqkd_config_set_format(cfg, TFQKD_FORMAT_JSON));
    EXPECT_OK(tfqkd_config_set_output_directory(cfg, "somewhere"));
    EXPECT(strcmp(tfqkd_config_output_directory(cfg), "somewhere") == 0);
    EXPECT(tfqkd_config_set_rounds(cfg, 0) == TFQKD_ERR_CONFIG);
    EXPECT(tfqkd_config_set_threads(cfg, 0) == TFQKD_ERR_CONFIG);

    EXPECT_OK(tfqkd_config_serialize(cfg, &text));
    EXPECT(strstr(text, "\"rounds\": 20000") != NULL);
    EXPECT_OK(tfqkd_config_parse(text, &back));
    tfqkd_string_free(text);
    tfqkd_config_destroy(back);

    EXPECT_OK(tfqkd_run(cfg, TFQKD_CMD_MONTECARLO, &doc));
    EXPECT(tfqkd_document_count(doc) == 1);
    EXPECT(strcmp(tfqkd_document_name(doc, 0), "montecarlo.json") == 0);
    EXPECT(tfqkd_document_name(doc, 5) == NULL);
    EXPECT_OK(tfqkd_document_content(doc, 0, &data, &size));
    EXPECT(size > 100 && strstr(data, "\"ledger\"") != NULL);
    EXPECT(tfqkd_document_content(doc, 3, &data, &size) == TFQKD_ERR_INVALID_ARGUMENT);

    EXPECT_OK(tfqkd_config_set_threads(cfg, 4));
    EXPECT_OK(tfqkd_run(cfg, TFQKD_CMD_MONTECARLO, &again));
    EXPECT_OK(tfqkd_document_content(again, 0, &data2, &size2));
    EXPECT(size == size2 && memcmp(data, data2, size) == 0);
    tfqkd_document_destroy(again);
    tfqkd_document_destroy(doc);

    EXPECT_OK(tfqkd_config_set_format(cfg, TFQKD_FORMAT_BOTH));
    for (i = 0; i <= TFQKD_CMD_REPRODUCE_FIG2B; ++i) {
        if (i == TFQKD_CMD_SWEEP) continue;
        EXPECT_OK(tfqkd_run(cfg, (tfqkd_command)i, &doc));
        EXPECT(tfqkd_document_count(doc) == 2);
        tfqkd_document_destroy(doc);
    }
    EXPECT(tfqkd_run(cfg, (tfqkd_command)17, &doc) == TFQKD_ERR_INVALID_ARGUMENT);
    EXPECT(tfqkd_run(NULL, TFQKD_CMD_ANALYZE, &doc) == TFQKD_ERR_INVALID_ARGUMENT);
    EXPECT(tfqkd_document_count(NULL) == 0);
    tfqkd_config_destroy(cfg);
}

int main(void)
{
    EXPECT(strlen(tfqkd_version()) > 0);
    closed_forms();
    errors();
    sources();
    commands();
    if (failures) {
        fprintf(stderr, "%d failure(s)\n", failures);
        return 1;
    }
    printf("C API checks passed\n");
    return 0;
}

// SPDX-License-Identifier: Apache-2.0
#include "tfqkd/tfqkd.h"

#include <cstring>
#include <new>
#include <string>
#include <utility>

#include "tfqkd/commands.hpp"
#include "tfqkd/error.hpp"
#include "tfqkd/security.hpp"

struct tfqkd_source {
    tfqkd::JointSpectralAmplitude jsa;
};

struct tfqkd_distribution {
    tfqkd::OutcomeDistribution dist;
};

struct tfqkd_config {
    tfqkd::RunConfig config;
};

struct tfqkd_document {
    tfqkd::Document files;
};

namespace {

thread_local std::string last_error;

tfqkd_status status_of(tfqkd::ErrorCode code)
{
    return static_cast<tfqkd_status>(static_cast<int>(code));
}

template <typename F>
tfqkd_status guarded(F&& body)
{
    try {
        last_error.clear();
        body();
        return TFQKD_OK;
    } catch (const tfqkd::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return TFQKD_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return TFQKD_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return TFQKD_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what)
{
    tfqkd::require(p != nullptr, tfqkd::ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

tfqkd::ChannelModel to_model(const tfqkd_channel* c)
{
    need(c, "channel");
    tfqkd::ChannelModel m;
    m.epsilon = c->epsilon;
    m.eta_d = c->eta_d;
    m.length = c->length;
    m.l_att = c->l_att;
    m.dark = c->dark;
    m.m = c->m;
    m.validate();
    return m;
}

tfqkd::Basis to_basis(tfqkd_basis b)
{
    tfqkd::require(b == TFQKD_BASIS_FREQUENCY || b == TFQKD_BASIS_TIME, tfqkd::ErrorCode::InvalidArgument,
                   "unknown basis");
    return b == TFQKD_BASIS_FREQUENCY ? tfqkd::Basis::Frequency : tfqkd::Basis::Time;
}

}  // namespace

extern "C" {

const char* tfqkd_version(void) { return "1.0.0"; }

const char* tfqkd_last_error(void) { return last_error.c_str(); }

void tfqkd_channel_default(tfqkd_channel* out)
{
    if (!out) return;
    const tfqkd::ChannelModel m;
    *out = {m.epsilon, m.eta_d, m.length, m.l_att, m.dark, m.m};
}

tfqkd_status tfqkd_transmission(const tfqkd_channel* channel, double* out)
{
    return guarded([&] {
        need(out, "out");
        *out = tfqkd::transmission(to_model(channel));
    });
}

tfqkd_status tfqkd_error_probability_closed(const tfqkd_channel* channel, tfqkd_error_probability* out)
{
    return guarded([&] {
        need(out, "out");
        const auto e = tfqkd::error_probability(to_model(channel));
        *out = {e.p, e.degenerate ? 1 : 0};
    });
}

tfqkd_status tfqkd_click_probabilities(const tfqkd_channel* channel, double* p_correct, double* p_incorrect)
{
    return guarded([&] {
        need(p_correct, "p_correct");
        need(p_incorrect, "p_incorrect");
        const auto c = tfqkd::pcorrect_pincorrect(to_model(channel));
        *p_correct = c.p_correct;
        *p_incorrect = c.p_incorrect;
    });
}

tfqkd_status tfqkd_binning_deficit(double beta_plus, double beta_minus, double* out)
{
    return guarded([&] {
        need(out, "out");
        *out = tfqkd::binning_deficit(beta_plus, beta_minus);
    });
}

tfqkd_status tfqkd_entropic_bound(double delta_omega, double delta_t, double* out)
{
    return guarded([&] {
        need(out, "out");
        *out = tfqkd::entropic_bound(delta_omega, delta_t);
    });
}

tfqkd_status tfqkd_simplified_key_rate(int m, double p, double beta_plus, double beta_minus, double* out)
{
    return guarded([&] {
        need(out, "out");
        *out = tfqkd::simplified_key_rate(m, p, beta_plus, beta_minus);
    });
}

tfqkd_status tfqkd_design_time_lens(int m, double beta_plus, double beta_minus, tfqkd_lens* out)
{
    return guarded([&] {
        need(out, "out");
        const tfqkd::BinningScheme binning(m, beta_plus, beta_minus);
        const auto lens = tfqkd::design_time_lens(binning);
        *out = {lens.mod_depth(), lens.mod_frequency(), lens.gvd(), lens.phi_ddot(), lens.aperture(),
                lens.delta_t(binning.delta_omega())};
    });
}

tfqkd_status tfqkd_kernel_singular_value(double delta_omega, double phi_ddot, tfqkd_kernel_result* out)
{
    return guarded([&] {
        need(out, "out");
        const auto k = tfqkd::overlap_kernel_largest_singular_value(delta_omega, phi_ddot);
        *out = {k.numerical, k.analytic, k.validity_ratio, k.resolution_warning ? 1 : 0};
    });
}

tfqkd_status tfqkd_source_create_gaussian(double delta_plus, double delta_minus, tfqkd_source** out)
{
    return guarded([&] {
        need(out, "out");
        *out = new tfqkd_source{tfqkd::make_gaussian_jsa(delta_plus, delta_minus)};
    });
}

tfqkd_status tfqkd_source_create_matched(int m, double beta_plus, double beta_minus, tfqkd_source** out)
{
    return guarded([&] {
        need(out, "out");
        *out = new tfqkd_source{tfqkd::design_binning(m, beta_plus, beta_minus).second};
    });
}

tfqkd_status tfqkd_source_schmidt_number(const tfqkd_source* source, double* out)
{
    return guarded([&] {
        need(source, "source");
        need(out, "out");
        *out = tfqkd::schmidt_decompose(source->jsa).schmidt_number;
    });
}

tfqkd_status tfqkd_source_grid_size(const tfqkd_source* source, size_t* out)
{
    return guarded([&] {
        need(source, "source");
        need(out, "out");
        *out = source->jsa.grid().size();
    });
}

void tfqkd_source_destroy(tfqkd_source* source) { delete source; }

tfqkd_status tfqkd_distribution_create(const tfqkd_source* source, int m, double beta_plus, double beta_minus,
                                       tfqkd_basis basis, tfqkd_distribution** out)
{
    return guarded([&] {
        need(source, "source");
        need(out, "out");
        const tfqkd::BinningScheme binning(m, beta_plus, beta_minus);
        const auto lens = tfqkd::design_time_lens(binning);
        *out = new tfqkd_distribution{
            tfqkd::joint_outcome_distribution(source->jsa, binning, lens, to_basis(basis))};
    });
}

tfqkd_status tfqkd_distribution_create_error_model(int m, double p, tfqkd_basis basis, tfqkd_distribution** out)
{
    return guarded([&] {
        need(out, "out");
        *out = new tfqkd_distribution{tfqkd::error_model_distribution(m, p, to_basis(basis))};
    });
}

tfqkd_status tfqkd_distribution_size(const tfqkd_distribution* dist, int* m)
{
    return guarded([&] {
        need(dist, "distribution");
        need(m, "m");
        *m = dist->dist.m();
    });
}

tfqkd_status tfqkd_distribution_get(const tfqkd_distribution* dist, int b, int a, double* out)
{
    return guarded([&] {
        need(dist, "distribution");
        need(out, "out");
        const int m = dist->dist.m();
        tfqkd::require(a >= 0 && a < m && b >= 0 && b < m, tfqkd::ErrorCode::InvalidArgument,
                       "outcome index out of range");
        *out = dist->dist(b, a);
    });
}

tfqkd_status tfqkd_distribution_entropies(const tfqkd_distribution* dist, double* h_b, double* h_b_given_a)
{
    return guarded([&] {
        need(dist, "distribution");
        need(h_b, "h_b");
        need(h_b_given_a, "h_b_given_a");
        const auto r = tfqkd::entropy_report(dist->dist);
        *h_b = r.h_b;
        *h_b_given_a = r.h_b_given_a;
    });
}

void tfqkd_distribution_destroy(tfqkd_distribution* dist) { delete dist; }

tfqkd_status tfqkd_config_create_default(tfqkd_config** out)
{
    return guarded([&] {
        need(out, "out");
        *out = new tfqkd_config{};
    });
}

tfqkd_status tfqkd_config_parse(const char* json_text, tfqkd_config** out)
{
    return guarded([&] {
        need(json_text, "json_text");
        need(out, "out");
        *out = new tfqkd_config{tfqkd::parse_config(json_text)};
    });
}

tfqkd_status tfqkd_config_load(const char* path, tfqkd_config** out)
{
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new tfqkd_config{tfqkd::load_config(path)};
    });
}

tfqkd_status tfqkd_config_serialize(const tfqkd_config* config, char** out)
{
    return guarded([&] {
        need(config, "config");
        need(out, "out");
        const std::string s = tfqkd::serialize_config(config->config);
        char* buf = new char[s.size() + 1];
        std::memcpy(buf, s.c_str(), s.size() + 1);
        *out = buf;
    });
}

tfqkd_status tfqkd_config_set_seed(tfqkd_config* config, uint64_t seed)
{
    return guarded([&] {
        need(config, "config");
        config->config.simulation.seed = seed;
    });
}

tfqkd_status tfqkd_config_set_rounds(tfqkd_config* config, uint64_t rounds)
{
    return guarded([&] {
        need(config, "config");
        tfqkd::require(rounds >= 1, tfqkd::ErrorCode::Config, "simulation.rounds: must be at least 1");
        config->config.simulation.rounds = rounds;
    });
}

tfqkd_status tfqkd_config_set_threads(tfqkd_config* config, unsigned threads)
{
    return guarded([&] {
        need(config, "config");
        tfqkd::require(threads >= 1 && threads <= 1024, tfqkd::ErrorCode::Config,
                       "simulation.threads: must lie in [1, 1024]");
        config->config.simulation.threads = threads;
    });
}

tfqkd_status tfqkd_config_set_format(tfqkd_config* config, tfqkd_format format)
{
    return guarded([&] {
        need(config, "config");
        switch (format) {
        case TFQKD_FORMAT_CSV: config->config.output.format = tfqkd::OutputFormat::Csv; break;
        case TFQKD_FORMAT_JSON: config->config.output.format = tfqkd::OutputFormat::Json; break;
        case TFQKD_FORMAT_BOTH: config->config.output.format = tfqkd::OutputFormat::Both; break;
        default: tfqkd::fail(tfqkd::ErrorCode::Config, "output.format: unknown format");
        }
    });
}

tfqkd_status tfqkd_config_set_output_directory(tfqkd_config* config, const char* directory)
{
    return guarded([&] {
        need(config, "config");
        need(directory, "directory");
        tfqkd::require(*directory != '\0', tfqkd::ErrorCode::Config, "output.directory: must not be empty");
        config->config.output.directory = directory;
    });
}

const char* tfqkd_config_output_directory(const tfqkd_config* config)
{
    return config ? config->config.output.directory.c_str() : "";
}

void tfqkd_config_destroy(tfqkd_config* config) { delete config; }

void tfqkd_string_free(char* s) { delete[] s; }

tfqkd_status tfqkd_run(const tfqkd_config* config, tfqkd_command command, tfqkd_document** out)
{
    return guarded([&] {
        need(config, "config");
        need(out, "out");
        const auto& c = config->config;
        tfqkd::Document doc;
        switch (command) {
        case TFQKD_CMD_ANALYZE: doc = tfqkd::cmd_analyze(c); break;
        case TFQKD_CMD_SWEEP: doc = tfqkd::cmd_sweep(c); break;
        case TFQKD_CMD_MONTECARLO: doc = tfqkd::cmd_montecarlo(c); break;
        case TFQKD_CMD_FEASIBILITY: doc = tfqkd::cmd_feasibility(c); break;
        case TFQKD_CMD_REPRODUCE_FIG2B: doc = tfqkd::cmd_reproduce_fig2b(c.output); break;
        default: tfqkd::fail(tfqkd::ErrorCode::InvalidArgument, "unknown command");
        }
        *out = new tfqkd_document{std::move(doc)};
    });
}

size_t tfqkd_document_count(const tfqkd_document* doc) { return doc ? doc->files.size() : 0; }

const char* tfqkd_document_name(const tfqkd_document* doc, size_t index)
{
    if (!doc || index >= doc->files.size()) return nullptr;
    return doc->files[index].name.c_str();
}

tfqkd_status tfqkd_document_content(const tfqkd_document* doc, size_t index, const char** data, size_t* size)
{
    return guarded([&] {
        need(doc, "document");
        need(data, "data");
        need(size, "size");
        tfqkd::require(index < doc->files.size(), tfqkd::ErrorCode::InvalidArgument, "document index out of range");
        *data = doc->files[index].content.data();
        *size = doc->files[index].content.size();
    });
}

tfqkd_status tfqkd_document_write(const tfqkd_document* doc, const char* directory)
{
    return guarded([&] {
        need(doc, "document");
        need(directory, "directory");
        tfqkd::write_document(doc->files, directory);
    });
}

void tfqkd_document_destroy(tfqkd_document* doc) { delete doc; }

}  // extern "C"

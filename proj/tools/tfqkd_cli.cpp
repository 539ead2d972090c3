// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end over the C interface.
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tfqkd/tfqkd.h"

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> rounds;
    std::optional<unsigned> threads;
};

int report(tfqkd_status status)
{
    std::fprintf(stderr, "error (%d): %s\n", static_cast<int>(status), tfqkd_last_error());
    return 1;
}

int run(const Options& opt, tfqkd_command command)
{
    tfqkd_config* config = nullptr;
    tfqkd_status s = opt.config_path.empty() ? tfqkd_config_create_default(&config)
                                              : tfqkd_config_load(opt.config_path.c_str(), &config);
    if (s != TFQKD_OK) return report(s);

    static const std::map<std::string, tfqkd_format> formats = {
        {"csv", TFQKD_FORMAT_CSV}, {"json", TFQKD_FORMAT_JSON}, {"both", TFQKD_FORMAT_BOTH}};
    if (s == TFQKD_OK && opt.seed) s = tfqkd_config_set_seed(config, *opt.seed);
    if (s == TFQKD_OK && opt.rounds) s = tfqkd_config_set_rounds(config, *opt.rounds);
    if (s == TFQKD_OK && opt.threads) s = tfqkd_config_set_threads(config, *opt.threads);
    if (s == TFQKD_OK && !opt.format.empty()) s = tfqkd_config_set_format(config, formats.at(opt.format));
    if (s == TFQKD_OK && !opt.out_dir.empty()) s = tfqkd_config_set_output_directory(config, opt.out_dir.c_str());

    tfqkd_document* doc = nullptr;
    if (s == TFQKD_OK) s = tfqkd_run(config, command, &doc);
    if (s == TFQKD_OK) s = tfqkd_document_write(doc, tfqkd_config_output_directory(config));
    if (s == TFQKD_OK) {
        const std::string dir = tfqkd_config_output_directory(config);
        for (std::size_t i = 0; i < tfqkd_document_count(doc); ++i)
            std::printf("%s/%s\n", dir.c_str(), tfqkd_document_name(doc, i));
    }
    tfqkd_document_destroy(doc);
    tfqkd_config_destroy(config);
    return s == TFQKD_OK ? 0 : report(s);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Time-frequency QKD key-rate analysis and simulation"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", tfqkd_version());

    Options opt;
    app.add_option("--config", opt.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", opt.out_dir, "output directory (overrides output.directory)");
    app.add_option("--format", opt.format, "output format (overrides output.format)")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    app.add_option("--seed", opt.seed, "Monte Carlo seed");
    app.add_option("--rounds", opt.rounds, "Monte Carlo rounds")->check(CLI::PositiveNumber);
    app.add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1u, 1024u));

    const std::pair<const char*, tfqkd_command> commands[] = {
        {"analyze", TFQKD_CMD_ANALYZE},
        {"sweep", TFQKD_CMD_SWEEP},
        {"montecarlo", TFQKD_CMD_MONTECARLO},
        {"feasibility", TFQKD_CMD_FEASIBILITY},
        {"reproduce-fig2b", TFQKD_CMD_REPRODUCE_FIG2B},
    };
    const char* help[] = {
        "single operating point report",
        "key-rate table over one swept parameter",
        "round-by-round simulation against the closed-form error model",
        "hardware requirements in SI units",
        "key size against alphabet size at the reference channel",
    };
    std::optional<tfqkd_command> chosen;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        auto* sub = app.add_subcommand(commands[i].first, help[i]);
        sub->callback([&, i] { chosen = commands[i].second; });
    }

    CLI11_PARSE(app, argc, argv);
    return chosen ? run(opt, *chosen) : 1;
}

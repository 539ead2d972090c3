// SPDX-License-Identifier: Apache-2.0
//
// Command layer shared by the C API and the command-line tool. Each command
// returns its output files in memory; nothing touches the filesystem until
// write_document is called.
#pragma once

#include <string>
#include <vector>

#include "tfqkd/config.hpp"

namespace tfqkd {

struct OutputFile {
    std::string name;
    std::string content;
};

using Document = std::vector<OutputFile>;

/// Designed lens, entropic bound, error probability, key-rate bounds and
/// hardware verdicts for one operating point. analyze.json / analyze.csv.
Document cmd_analyze(const RunConfig& config);

/// One analyze row per point of the sweep range. sweep.csv / sweep.json.
Document cmd_sweep(const RunConfig& config);

/// Monte Carlo ledger, empirical distributions and comparison with the
/// closed-form error model. montecarlo.json / montecarlo_counts.csv.
Document cmd_montecarlo(const RunConfig& config);

/// SI hardware requirements. feasibility.json / feasibility.csv.
Document cmd_feasibility(const RunConfig& config);

/// Closed-form key size against alphabet size for I_M = 1..16 at the
/// reference channel (epsilon 0.1, eta_d 0.25, d 1e-6, L = L_att). Only the
/// output block is read from `output`. fig2b.csv / fig2b.json.
Document cmd_reproduce_fig2b(const OutputBlock& output = {});

/// Creates `directory` if needed and writes every file. Throws Io.
void write_document(const Document& document, const std::string& directory);

}  // namespace tfqkd

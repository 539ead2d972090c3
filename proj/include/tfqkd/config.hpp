// SPDX-License-Identifier: Apache-2.0
//
// Run configuration: nested JSON blocks with defaults for every field.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tfqkd/feasibility.hpp"
#include "tfqkd/montecarlo.hpp"
#include "tfqkd/noise.hpp"

namespace tfqkd {

struct ProtocolBlock {
    int m = 16;
    double beta_plus = 0.75;
    double beta_minus = 0.2;

    bool operator==(const ProtocolBlock&) const = default;
};

struct ChannelBlock {
    double epsilon = 0.1;
    double eta_d = 0.25;
    double dark = 1e-6;
    double length = 1.0;
    double l_att = 1.0;
    std::optional<double> error_probability_override;
    std::optional<double> time_error_probability_override;

    bool operator==(const ChannelBlock&) const = default;
};

enum class Spacing { Linear, Log };

struct SweepBlock {
    std::string parameter = "protocol.log2_m";
    double start = 1.0;
    double stop = 14.0;
    double step = 1.0;  ///< linear spacing
    int points = 0;     ///< log spacing
    Spacing spacing = Spacing::Linear;

    bool operator==(const SweepBlock&) const = default;
};

enum class OutputFormat { Csv, Json, Both };

struct OutputBlock {
    std::string directory = "out";
    OutputFormat format = OutputFormat::Both;

    bool wants_csv() const noexcept { return format != OutputFormat::Json; }
    bool wants_json() const noexcept { return format != OutputFormat::Csv; }
    bool operator==(const OutputBlock&) const = default;
};

/// Convention selection for reports: one reading or both side by side.
enum class ConventionChoice { Both, Angular, Ordinary };

struct HardwareBlock {
    HardwareSpec spec;
    ConventionChoice convention = ConventionChoice::Both;
};

bool operator==(const HardwareBlock& a, const HardwareBlock& b);

struct RunConfig {
    ProtocolBlock protocol;
    ChannelBlock channel;
    SimulationConfig simulation;
    SweepBlock sweep;
    OutputBlock output;
    HardwareBlock hardware;

    /// Throws Config with the offending field path.
    void validate() const;
    ChannelModel channel_model() const;
};

bool operator==(const RunConfig& a, const RunConfig& b);

/// Parses JSON text. Missing fields take defaults; unknown keys, wrong types
/// and invalid values raise Config naming the field path.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::string& path);
/// Full document with every field written out.
std::string serialize_config(const RunConfig& config);

/// Scalar fields accepted as sweep targets.
const std::vector<std::string>& sweepable_parameters();
/// Returns a copy with one scalar field set; protocol.log2_m sets m = 2^value.
RunConfig with_parameter(const RunConfig& config, const std::string& parameter, double value);
/// Points of the sweep range in order; empty if stop < start or points = 0.
std::vector<double> sweep_values(const SweepBlock& sweep);

}  // namespace tfqkd

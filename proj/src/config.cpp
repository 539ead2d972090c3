// SPDX-License-Identifier: Apache-2.0
#include "tfqkd/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "tfqkd/error.hpp"

namespace tfqkd {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what)
{
    fail(ErrorCode::Config, path + ": " + what);
}

template <typename E>
struct EnumName {
    E value;
    const char* name;
};

constexpr EnumName<MultiClickPolicy> policy_names[] = {{MultiClickPolicy::Discard, "discard"},
                                                       {MultiClickPolicy::RandomAssign, "random-assign"}};
constexpr EnumName<CorrelationModel> model_names[] = {{CorrelationModel::IdealDelta, "ideal-delta"},
                                                      {CorrelationModel::SampledJsa, "sampled-jsa"}};
constexpr EnumName<Spacing> spacing_names[] = {{Spacing::Linear, "linear"}, {Spacing::Log, "log"}};
constexpr EnumName<OutputFormat> format_names[] = {
    {OutputFormat::Csv, "csv"}, {OutputFormat::Json, "json"}, {OutputFormat::Both, "both"}};
constexpr EnumName<ConventionChoice> convention_names[] = {{ConventionChoice::Both, "both"},
                                                           {ConventionChoice::Angular, "angular"},
                                                           {ConventionChoice::Ordinary, "ordinary"}};
constexpr EnumName<SpectrometerResolution::Unit> unit_names[] = {{SpectrometerResolution::Unit::Meters, "m"},
                                                                 {SpectrometerResolution::Unit::Hertz, "Hz"}};

template <typename E, std::size_t N>
const char* name_of(const EnumName<E> (&table)[N], E value)
{
    for (const auto& e : table)
        if (e.value == value) return e.name;
    return "?";
}

// Visits the members of one JSON object, rejecting keys without a handler.
class Block {
public:
    Block(const json& node, std::string path) : node_(node), path_(std::move(path))
    {
        if (!node_.is_object()) config_error(path_, "expected an object");
    }

    void field(const std::string& key, const std::function<void(const json&, const std::string&)>& handler)
    {
        known_.push_back(key);
        if (const auto it = node_.find(key); it != node_.end()) handler(*it, path_ + "." + key);
    }

    void finish() const
    {
        for (const auto& [key, value] : node_.items())
            if (std::find(known_.begin(), known_.end(), key) == known_.end())
                config_error(path_ + "." + key, "unknown key");
    }

private:
    const json& node_;
    std::string path_;
    std::vector<std::string> known_;
};

double as_number(const json& v, const std::string& path)
{
    if (!v.is_number()) config_error(path, "expected a number");
    return v.get<double>();
}

std::optional<double> as_optional_number(const json& v, const std::string& path)
{
    if (v.is_null()) return std::nullopt;
    return as_number(v, path);
}

std::int64_t as_integer(const json& v, const std::string& path)
{
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
    }
    config_error(path, "expected an integer");
}

std::uint64_t as_unsigned(const json& v, const std::string& path)
{
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    const auto i = as_integer(v, path);
    if (i < 0) config_error(path, "expected a nonnegative integer");
    return static_cast<std::uint64_t>(i);
}

std::string as_string(const json& v, const std::string& path)
{
    if (!v.is_string()) config_error(path, "expected a string");
    return v.get<std::string>();
}

template <typename E, std::size_t N>
E as_enum(const json& v, const std::string& path, const EnumName<E> (&table)[N])
{
    const std::string s = as_string(v, path);
    for (const auto& e : table)
        if (s == e.name) return e.value;
    std::string allowed;
    for (const auto& e : table) allowed += (allowed.empty() ? "" : ", ") + std::string(e.name);
    config_error(path, "unknown value '" + s + "' (expected one of " + allowed + ")");
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void check(bool ok, const std::string& path, const std::string& what)
{
    if (!ok) config_error(path, what);
}

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

bool operator==(const HardwareBlock& a, const HardwareBlock& b)
{
    const auto& x = a.spec;
    const auto& y = b.spec;
    return a.convention == b.convention && x.center_wavelength == y.center_wavelength &&
           x.spectrometer_resolution.value == y.spectrometer_resolution.value &&
           x.spectrometer_resolution.unit == y.spectrometer_resolution.unit &&
           x.modulator_max_frequency == y.modulator_max_frequency &&
           x.modulator_max_depth == y.modulator_max_depth && x.fiber_gvd == y.fiber_gvd;
}

bool operator==(const RunConfig& a, const RunConfig& b)
{
    const auto& s = a.simulation;
    const auto& t = b.simulation;
    return a.protocol == b.protocol && a.channel == b.channel && s.rounds == t.rounds && s.seed == t.seed &&
           s.basis_prob == t.basis_prob && s.multi_click_policy == t.multi_click_policy &&
           s.correlation_model == t.correlation_model && s.threads == t.threads && a.sweep == b.sweep &&
           a.output == b.output && a.hardware == b.hardware;
}

ChannelModel RunConfig::channel_model() const
{
    ChannelModel c;
    c.epsilon = channel.epsilon;
    c.eta_d = channel.eta_d;
    c.length = channel.length;
    c.l_att = channel.l_att;
    c.dark = channel.dark;
    c.m = protocol.m;
    return c;
}

void RunConfig::validate() const
{
    check(protocol.m >= 2, "protocol.m", "must be at least 2");
    check(protocol.m <= (1 << 16), "protocol.m", "must be at most 65536");
    check(protocol.beta_plus > 0.0 && protocol.beta_plus <= 1.0, "protocol.beta_plus", "must lie in (0, 1]");
    check(protocol.beta_minus > 0.0 && protocol.beta_minus < protocol.beta_plus, "protocol.beta_minus",
          "must lie in (0, beta_plus)");

    check(in_unit_interval(channel.epsilon), "channel.epsilon", "must lie in [0, 1]");
    check(in_unit_interval(channel.eta_d), "channel.eta_d", "must lie in [0, 1]");
    check(in_unit_interval(channel.dark), "channel.dark", "must lie in [0, 1]");
    check(channel.length >= 0.0 && std::isfinite(channel.length), "channel.length", "must be >= 0");
    check(channel.l_att >= 0.0 && std::isfinite(channel.l_att), "channel.l_att", "must be >= 0");
    if (channel.error_probability_override)
        check(in_unit_interval(*channel.error_probability_override), "channel.error_probability_override",
              "must lie in [0, 1]");
    if (channel.time_error_probability_override)
        check(in_unit_interval(*channel.time_error_probability_override),
              "channel.time_error_probability_override", "must lie in [0, 1]");

    check(simulation.rounds >= 1, "simulation.rounds", "must be at least 1");
    check(simulation.basis_prob > 0.0 && simulation.basis_prob < 1.0, "simulation.basis_prob",
          "must lie in (0, 1)");
    check(simulation.threads >= 1 && simulation.threads <= 1024, "simulation.threads", "must lie in [1, 1024]");

    const auto& names = sweepable_parameters();
    check(std::find(names.begin(), names.end(), sweep.parameter) != names.end(), "sweep.parameter",
          "'" + sweep.parameter + "' is not a scalar sweep target");
    check(std::isfinite(sweep.start), "sweep.start", "must be finite");
    check(std::isfinite(sweep.stop), "sweep.stop", "must be finite");
    if (sweep.spacing == Spacing::Linear) {
        check(sweep.step > 0.0 && std::isfinite(sweep.step), "sweep.step", "must be positive");
    } else {
        check(sweep.points >= 0, "sweep.points", "must be >= 0");
        check(sweep.start > 0.0 && sweep.stop > 0.0, "sweep.start", "log spacing needs positive endpoints");
    }

    check(!output.directory.empty(), "output.directory", "must not be empty");

    const auto& hw = hardware.spec;
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    check(positive(hw.center_wavelength), "hardware.center_wavelength", "must be positive");
    check(positive(hw.spectrometer_resolution.value), "hardware.spectrometer_resolution.value",
          "must be positive");
    check(positive(hw.modulator_max_frequency), "hardware.modulator_max_frequency", "must be positive");
    check(positive(hw.modulator_max_depth), "hardware.modulator_max_depth", "must be positive");
    check(positive(hw.fiber_gvd), "hardware.fiber_gvd", "must be positive");
}

RunConfig parse_config(std::string_view json_text)
{
    json root;
    try {
        root = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        fail(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
    }

    RunConfig c;
    Block top(root, "config");
    top.field("protocol", [&](const json& v, const std::string& p) {
        Block b(v, p);
        b.field("m", [&](const json& x, const std::string& q) {
            const auto m = as_integer(x, q);
            check(m >= 2 && m <= (1 << 16), q, "must lie in [2, 65536]");
            c.protocol.m = static_cast<int>(m);
        });
        b.field("beta_plus", [&](const json& x, const std::string& q) { c.protocol.beta_plus = as_number(x, q); });
        b.field("beta_minus", [&](const json& x, const std::string& q) { c.protocol.beta_minus = as_number(x, q); });
        b.finish();
    });
    top.field("channel", [&](const json& v, const std::string& p) {
        Block b(v, p);
        b.field("epsilon", [&](const json& x, const std::string& q) { c.channel.epsilon = as_number(x, q); });
        b.field("eta_d", [&](const json& x, const std::string& q) { c.channel.eta_d = as_number(x, q); });
        b.field("dark", [&](const json& x, const std::string& q) { c.channel.dark = as_number(x, q); });
        b.field("length", [&](const json& x, const std::string& q) { c.channel.length = as_number(x, q); });
        b.field("l_att", [&](const json& x, const std::string& q) { c.channel.l_att = as_number(x, q); });
        b.field("error_probability_override", [&](const json& x, const std::string& q) {
            c.channel.error_probability_override = as_optional_number(x, q);
        });
        b.field("time_error_probability_override", [&](const json& x, const std::string& q) {
            c.channel.time_error_probability_override = as_optional_number(x, q);
        });
        b.finish();
    });
    top.field("simulation", [&](const json& v, const std::string& p) {
        Block b(v, p);
        b.field("rounds", [&](const json& x, const std::string& q) { c.simulation.rounds = as_unsigned(x, q); });
        b.field("seed", [&](const json& x, const std::string& q) { c.simulation.seed = as_unsigned(x, q); });
        b.field("basis_prob", [&](const json& x, const std::string& q) { c.simulation.basis_prob = as_number(x, q); });
        b.field("multi_click_policy", [&](const json& x, const std::string& q) {
            c.simulation.multi_click_policy = as_enum(x, q, policy_names);
        });
        b.field("correlation_model", [&](const json& x, const std::string& q) {
            c.simulation.correlation_model = as_enum(x, q, model_names);
        });
        b.field("threads", [&](const json& x, const std::string& q) {
            const auto t = as_unsigned(x, q);
            check(t >= 1 && t <= 1024, q, "must lie in [1, 1024]");
            c.simulation.threads = static_cast<unsigned>(t);
        });
        b.finish();
    });
    top.field("sweep", [&](const json& v, const std::string& p) {
        Block b(v, p);
        b.field("parameter", [&](const json& x, const std::string& q) { c.sweep.parameter = as_string(x, q); });
        b.field("start", [&](const json& x, const std::string& q) { c.sweep.start = as_number(x, q); });
        b.field("stop", [&](const json& x, const std::string& q) { c.sweep.stop = as_number(x, q); });
        b.field("step", [&](const json& x, const std::string& q) { c.sweep.step = as_number(x, q); });
        b.field("points", [&](const json& x, const std::string& q) {
            const auto n = as_integer(x, q);
            check(n >= 0 && n <= 1'000'000, q, "must lie in [0, 1000000]");
            c.sweep.points = static_cast<int>(n);
        });
        b.field("spacing", [&](const json& x, const std::string& q) { c.sweep.spacing = as_enum(x, q, spacing_names); });
        b.finish();
    });
    top.field("output", [&](const json& v, const std::string& p) {
        Block b(v, p);
        b.field("directory", [&](const json& x, const std::string& q) { c.output.directory = as_string(x, q); });
        b.field("format", [&](const json& x, const std::string& q) { c.output.format = as_enum(x, q, format_names); });
        b.finish();
    });
    top.field("hardware", [&](const json& v, const std::string& p) {
        Block b(v, p);
        auto& hw = c.hardware.spec;
        b.field("center_wavelength", [&](const json& x, const std::string& q) { hw.center_wavelength = as_number(x, q); });
        b.field("spectrometer_resolution", [&](const json& x, const std::string& q) {
            Block r(x, q);
            r.field("value", [&](const json& y, const std::string& s) { hw.spectrometer_resolution.value = as_number(y, s); });
            r.field("unit", [&](const json& y, const std::string& s) {
                hw.spectrometer_resolution.unit = as_enum(y, s, unit_names);
            });
            r.finish();
        });
        b.field("modulator_max_frequency", [&](const json& x, const std::string& q) {
            hw.modulator_max_frequency = as_number(x, q);
        });
        b.field("modulator_max_depth", [&](const json& x, const std::string& q) { hw.modulator_max_depth = as_number(x, q); });
        b.field("fiber_gvd", [&](const json& x, const std::string& q) { hw.fiber_gvd = as_number(x, q); });
        b.field("convention", [&](const json& x, const std::string& q) {
            c.hardware.convention = as_enum(x, q, convention_names);
        });
        b.finish();
    });
    top.finish();
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string serialize_config(const RunConfig& c)
{
    const auto& hw = c.hardware.spec;
    json root = {
        {"protocol", {{"m", c.protocol.m}, {"beta_plus", c.protocol.beta_plus}, {"beta_minus", c.protocol.beta_minus}}},
        {"channel",
         {{"epsilon", c.channel.epsilon},
          {"eta_d", c.channel.eta_d},
          {"dark", c.channel.dark},
          {"length", c.channel.length},
          {"l_att", c.channel.l_att},
          {"error_probability_override", optional_json(c.channel.error_probability_override)},
          {"time_error_probability_override", optional_json(c.channel.time_error_probability_override)}}},
        {"simulation",
         {{"rounds", c.simulation.rounds},
          {"seed", c.simulation.seed},
          {"basis_prob", c.simulation.basis_prob},
          {"multi_click_policy", name_of(policy_names, c.simulation.multi_click_policy)},
          {"correlation_model", name_of(model_names, c.simulation.correlation_model)},
          {"threads", c.simulation.threads}}},
        {"sweep",
         {{"parameter", c.sweep.parameter},
          {"start", c.sweep.start},
          {"stop", c.sweep.stop},
          {"step", c.sweep.step},
          {"points", c.sweep.points},
          {"spacing", name_of(spacing_names, c.sweep.spacing)}}},
        {"output", {{"directory", c.output.directory}, {"format", name_of(format_names, c.output.format)}}},
        {"hardware",
         {{"center_wavelength", hw.center_wavelength},
          {"spectrometer_resolution",
           {{"value", hw.spectrometer_resolution.value}, {"unit", name_of(unit_names, hw.spectrometer_resolution.unit)}}},
          {"modulator_max_frequency", hw.modulator_max_frequency},
          {"modulator_max_depth", hw.modulator_max_depth},
          {"fiber_gvd", hw.fiber_gvd},
          {"convention", name_of(convention_names, c.hardware.convention)}}},
    };
    return root.dump(2) + "\n";
}

const std::vector<std::string>& sweepable_parameters()
{
    static const std::vector<std::string> names = {
        "protocol.m",        "protocol.log2_m",  "protocol.beta_plus",
        "protocol.beta_minus", "channel.epsilon", "channel.eta_d",
        "channel.dark",      "channel.length",   "channel.l_att",
        "channel.error_probability_override", "channel.time_error_probability_override",
    };
    return names;
}

RunConfig with_parameter(const RunConfig& config, const std::string& parameter, double value)
{
    RunConfig c = config;
    auto integer = [&](double x) {
        if (x != std::round(x)) config_error("sweep.parameter", parameter + " needs integer values");
        return static_cast<int>(std::round(x));
    };
    if (parameter == "protocol.m") {
        c.protocol.m = integer(value);
    } else if (parameter == "protocol.log2_m") {
        const int bits = integer(value);
        check(bits >= 1 && bits <= 16, "sweep.parameter", "protocol.log2_m must lie in [1, 16]");
        c.protocol.m = 1 << bits;
    } else if (parameter == "protocol.beta_plus") {
        c.protocol.beta_plus = value;
    } else if (parameter == "protocol.beta_minus") {
        c.protocol.beta_minus = value;
    } else if (parameter == "channel.epsilon") {
        c.channel.epsilon = value;
    } else if (parameter == "channel.eta_d") {
        c.channel.eta_d = value;
    } else if (parameter == "channel.dark") {
        c.channel.dark = value;
    } else if (parameter == "channel.length") {
        c.channel.length = value;
    } else if (parameter == "channel.l_att") {
        c.channel.l_att = value;
    } else if (parameter == "channel.error_probability_override") {
        c.channel.error_probability_override = value;
    } else if (parameter == "channel.time_error_probability_override") {
        c.channel.time_error_probability_override = value;
    } else {
        config_error("sweep.parameter", "'" + parameter + "' is not a scalar sweep target");
    }
    c.validate();
    return c;
}

std::vector<double> sweep_values(const SweepBlock& sweep)
{
    std::vector<double> values;
    if (sweep.stop < sweep.start) return values;
    if (sweep.spacing == Spacing::Linear) {
        const auto n = static_cast<long long>(std::floor((sweep.stop - sweep.start) / sweep.step + 1e-9)) + 1;
        check(n <= 1'000'000, "sweep", "more than 1000000 points");
        for (long long i = 0; i < n; ++i) values.push_back(sweep.start + static_cast<double>(i) * sweep.step);
    } else {
        if (sweep.points == 1) return {sweep.start};
        const double ratio = std::log(sweep.stop / sweep.start);
        for (int i = 0; i < sweep.points; ++i)
            values.push_back(sweep.start * std::exp(ratio * i / (sweep.points - 1)));
    }
    return values;
}

}  // namespace tfqkd

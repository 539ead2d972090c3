// SPDX-License-Identifier: Apache-2.0
#include "tfqkd/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <thread>
#include <variant>

#include <json.hpp>

#include "tfqkd/error.hpp"

namespace tfqkd {

using ojson = nlohmann::ordered_json;

namespace {

// ---- tabular records -------------------------------------------------------

using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

struct Field {
    std::string name;
    std::string unit;  // empty for text and flags
    Cell value;

    std::string header() const { return unit.empty() ? name : name + "[" + unit + "]"; }
};

using Record = std::vector<Field>;

std::string format_double(double x)
{
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string csv_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return "";
            else if constexpr (std::is_same_v<T, double>)
                return format_double(v);
            else if constexpr (std::is_same_v<T, std::int64_t>)
                return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
            else
                return csv_escape(v);
        },
        c);
}

ojson json_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> ojson {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return nullptr;
            else if constexpr (std::is_same_v<T, double>)
                return std::isfinite(v) ? ojson(v) : ojson(nullptr);
            else
                return v;
        },
        c);
}

std::string to_csv(const std::vector<std::string>& header, const std::vector<Record>& rows)
{
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + csv_escape(header[i]);
    out += "\r\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i].value);
        out += "\r\n";
    }
    return out;
}

std::vector<std::string> headers(const Record& r)
{
    std::vector<std::string> h;
    for (const auto& f : r) h.push_back(f.header());
    return h;
}

ojson units_of(const Record& r)
{
    ojson u = ojson::object();
    for (const auto& f : r)
        if (!f.unit.empty()) u[f.name] = f.unit;
    return u;
}

ojson values_of(const Record& r)
{
    ojson v = ojson::object();
    for (const auto& f : r) v[f.name] = json_cell(f.value);
    return v;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

void emit(Document& doc, const OutputBlock& out, const std::string& stem, const std::vector<std::string>& header,
          const std::vector<Record>& rows, const ojson& json_doc)
{
    if (out.wants_csv()) doc.push_back({stem + ".csv", to_csv(header, rows)});
    if (out.wants_json()) doc.push_back({stem + ".json", dump(json_doc)});
}

// ---- shared computations ---------------------------------------------------

std::vector<FrequencyConvention> conventions(ConventionChoice choice)
{
    switch (choice) {
    case ConventionChoice::Angular: return {FrequencyConvention::Angular};
    case ConventionChoice::Ordinary: return {FrequencyConvention::Ordinary};
    case ConventionChoice::Both: break;
    }
    return {FrequencyConvention::Angular, FrequencyConvention::Ordinary};
}

Record feasibility_fields(const FeasibilityReport& r, bool prefixed)
{
    const std::string p = prefixed ? std::string(to_string(r.convention)) + "_" : "";
    Record rec;
    if (!prefixed) rec.push_back({"convention", "", std::string(to_string(r.convention))});
    rec.push_back({p + "delta_omega", "1/s", r.delta_omega});
    rec.push_back({p + "required_depth", "rad", r.required_depth});
    rec.push_back({p + "required_frequency", "Hz", r.required_frequency});
    rec.push_back({p + "phi_ddot", "1/s^2", r.phi_ddot});
    rec.push_back({p + "required_gvd_total", "s^2", r.required_gvd_total});
    rec.push_back({p + "fiber_length", "m", r.fiber_length});
    rec.push_back({p + "aperture", "s", r.aperture});
    rec.push_back({p + "depth_verdict", "", std::string(to_string(r.depth_verdict))});
    rec.push_back({p + "frequency_verdict", "", std::string(to_string(r.frequency_verdict))});
    return rec;
}

EntropyReport error_entropies(int m, double p, Basis basis, const char* field)
{
    try {
        return error_model_entropies(m, p, basis);
    } catch (const Error& e) {
        fail(e.code(), std::string(field) + ": " + e.what());
    }
}

Record analyze_record(const RunConfig& config)
{
    config.validate();
    const auto& pr = config.protocol;
    const BinningScheme binning(pr.m, pr.beta_plus, pr.beta_minus);
    const TimeLens lens = design_time_lens(binning);
    const double dt = lens.delta_t(binning.delta_omega());
    const double bound = entropic_bound(binning.delta_omega(), dt);
    const auto kernel = overlap_kernel_largest_singular_value(binning, lens);

    const ChannelModel channel = config.channel_model();
    const double eta = transmission(channel);
    const ErrorProbability closed = error_probability(channel);
    const auto& ovr = config.channel.error_probability_override;
    const double p_freq = ovr.value_or(closed.p);
    const double p_time = config.channel.time_error_probability_override.value_or(p_freq);
    const char* freq_field = ovr ? "channel.error_probability_override" : "channel (closed-form error probability)";
    const char* time_field = config.channel.time_error_probability_override ? "channel.time_error_probability_override"
                                                                             : freq_field;
    const auto freq = error_entropies(pr.m, p_freq, Basis::Frequency, freq_field);
    const auto time = error_entropies(pr.m, p_time, Basis::Time, time_field);
    const KeyRateBound key = secret_key_bound(freq, time, bound);

    Record r{
        {"m", "1", std::int64_t{pr.m}},
        {"log2_m", "bits", std::log2(static_cast<double>(pr.m))},
        {"beta_plus", "1", pr.beta_plus},
        {"beta_minus", "1", pr.beta_minus},
        {"mod_depth", "rad", lens.mod_depth()},
        {"mod_frequency", "dw", lens.mod_frequency()},
        {"phi_ddot", "dw^2", lens.phi_ddot()},
        {"gvd", "1/dw^2", lens.gvd()},
        {"aperture", "1/dw", lens.aperture()},
        {"delta_t", "1/dw", dt},
        {"entropic_bound", "bits", bound},
        {"binning_deficit", "bits", binning_deficit(pr.beta_plus, pr.beta_minus)},
        {"kernel_singular_value", "1", kernel.numerical},
        {"kernel_singular_value_analytic", "1", kernel.analytic},
        {"kernel_validity_ratio", "1", kernel.validity_ratio},
        {"kernel_resolution_warning", "", kernel.resolution_warning},
        {"transmission", "1", eta},
        {"error_probability_closed_form", "1", closed.p},
        {"error_probability_degenerate", "", closed.degenerate},
        {"error_probability", "1", p_freq},
        {"time_error_probability", "1", p_time},
        {"h_b", "bits", freq.h_b},
        {"h_b_given_a", "bits", freq.h_b_given_a},
        {"h_b_given_a_time", "bits", time.h_b_given_a},
        {"mutual_information", "bits", key.mutual_info},
        {"key_rate_bound_raw", "bits", key.raw_secret_key},
        {"key_rate_bound", "bits", key.secret_key},
        {"key_rate_bound_clamped", "", key.clamped},
        {"key_rate_bound_floored", "", key.floored},
        {"key_rate_simplified", "bits", simplified_key_rate(pr.m, p_freq, p_time, pr.beta_plus, pr.beta_minus)},
    };
    HardwareSpec hw = config.hardware.spec;
    for (auto conv : conventions(config.hardware.convention)) {
        hw.convention = conv;
        for (auto& f : feasibility_fields(check_feasibility(pr.m, pr.beta_plus, pr.beta_minus, hw), true))
            r.push_back(std::move(f));
    }
    return r;
}

std::string sweep_unit(const std::string& parameter)
{
    if (parameter == "protocol.log2_m") return "bits";
    if (parameter == "channel.length" || parameter == "channel.l_att") return "length";
    return "1";
}

// Runs body(i) for i in [0, n) on up to `threads` workers; the first failure
// in index order is rethrown.
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F body)
{
    std::vector<std::exception_ptr> errors(n);
    const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += workers) {
                    try {
                        body(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

ojson comparison(const Estimate& emp, double closed)
{
    ojson j = ojson::object();
    j["empirical"] = emp.value;
    j["empirical_std_error"] = emp.std_error;
    j["samples"] = emp.samples;
    j["closed_form"] = closed;
    if (emp.samples == 0) {
        j["closed_form_std_error"] = nullptr;
        j["z_score"] = nullptr;
        j["within_3_sigma"] = nullptr;
        return j;
    }
    const double sigma = std::sqrt(closed * (1.0 - closed) / static_cast<double>(emp.samples));
    j["closed_form_std_error"] = sigma;
    const double diff = std::abs(emp.value - closed);
    if (sigma > 0.0) {
        j["z_score"] = (emp.value - closed) / sigma;
        j["within_3_sigma"] = diff <= 3.0 * sigma;
    } else {
        j["z_score"] = nullptr;
        j["within_3_sigma"] = diff == 0.0;
    }
    return j;
}

constexpr std::size_t max_sampled_grid = 4096;

}  // namespace

Document cmd_analyze(const RunConfig& config)
{
    const Record r = analyze_record(config);
    ojson j = ojson::object();
    j["units"] = units_of(r);
    j["report"] = values_of(r);
    Document doc;
    emit(doc, config.output, "analyze", headers(r), {r}, j);
    return doc;
}

Document cmd_sweep(const RunConfig& config)
{
    config.validate();
    const std::string& param = config.sweep.parameter;
    const std::vector<double> values = sweep_values(config.sweep);
    std::vector<Record> rows(values.size());
    parallel_for(values.size(), config.simulation.threads, [&](std::size_t i) {
        Record r{{param, sweep_unit(param), values[i]}};
        for (auto& f : analyze_record(with_parameter(config, param, values[i]))) r.push_back(std::move(f));
        rows[i] = std::move(r);
    });

    Record shape = rows.empty() ? Record{{param, sweep_unit(param), 0.0}} : rows.front();
    if (rows.empty())
        for (auto& f : analyze_record(config)) shape.push_back(std::move(f));

    ojson j = ojson::object();
    j["parameter"] = param;
    j["units"] = units_of(shape);
    j["rows"] = ojson::array();
    for (const auto& r : rows) j["rows"].push_back(values_of(r));
    Document doc;
    emit(doc, config.output, "sweep", headers(shape), rows, j);
    return doc;
}

Document cmd_montecarlo(const RunConfig& config)
{
    config.validate();
    const auto& pr = config.protocol;
    const ChannelModel channel = config.channel_model();
    const auto& sim = config.simulation;

    std::optional<std::pair<BinningScheme, JointSpectralAmplitude>> design;
    std::optional<BinningScheme> plain;
    if (sim.correlation_model == CorrelationModel::SampledJsa) {
        const BinningScheme b(pr.m, pr.beta_plus, pr.beta_minus);
        const auto n = default_grid(b.matched_bandwidths()).size();
        require(n <= max_sampled_grid, ErrorCode::InvalidArgument,
                "simulation.correlation_model: sampled-jsa needs a " + std::to_string(n) +
                    "-point grid for this design; the limit is " + std::to_string(max_sampled_grid));
        design.emplace(design_binning(pr.m, pr.beta_plus, pr.beta_minus));
    } else {
        plain.emplace(pr.m, pr.beta_plus, pr.beta_minus);
    }
    const BinningScheme& binning = design ? design->first : *plain;
    const JointSpectralAmplitude* jsa = design ? &design->second : nullptr;
    const RoundLedger ledger = simulate_rounds(sim, channel, binning, jsa);

    const ErrorProbability closed = error_probability(channel);
    const ClickProbabilities clicks = pcorrect_pincorrect(channel);

    ojson j = ojson::object();
    j["settings"] = {{"m", pr.m},
                     {"beta_plus", pr.beta_plus},
                     {"beta_minus", pr.beta_minus},
                     {"epsilon", channel.epsilon},
                     {"eta_d", channel.eta_d},
                     {"dark", channel.dark},
                     {"length", channel.length},
                     {"l_att", channel.l_att},
                     {"rounds", sim.rounds},
                     {"seed", sim.seed},
                     {"basis_prob", sim.basis_prob},
                     {"multi_click_policy",
                      sim.multi_click_policy == MultiClickPolicy::Discard ? "discard" : "random-assign"},
                     {"correlation_model",
                      sim.correlation_model == CorrelationModel::IdealDelta ? "ideal-delta" : "sampled-jsa"}};
    j["ledger"] = {{"rounds", ledger.rounds},
                   {"no_click", ledger.no_click},
                   {"multi_click_discarded", ledger.multi_click_discarded},
                   {"basis_mismatch", ledger.basis_mismatch},
                   {"sifted", ledger.sifted},
                   {"sifted_frequency", ledger.sifted_by_basis[0]},
                   {"sifted_time", ledger.sifted_by_basis[1]},
                   {"basis_matched_rounds", ledger.basis_matched_rounds},
                   {"correct", ledger.correct},
                   {"incorrect", ledger.incorrect}};
    j["error_probability"] = comparison(empirical_error_probability(ledger), closed.p);
    j["error_probability"]["degenerate"] = closed.degenerate;
    j["p_correct"] = comparison(empirical_p_correct(ledger), clicks.p_correct);
    j["p_incorrect"] = comparison(empirical_p_incorrect(ledger), clicks.p_incorrect);

    ojson key = ojson::object();
    try {
        const TimeLens lens = design_time_lens(binning);
        const KeyRateBound k = estimate_key_rate(ledger, binning, lens);
        key["available"] = true;
        key["entropic_bound_bits"] = k.bound_b;
        key["mutual_information_bits"] = k.mutual_info;
        key["raw_secret_key_bits"] = k.raw_secret_key;
        key["secret_key_bits"] = k.secret_key;
        key["clamped"] = k.clamped;
        key["floored"] = k.floored;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyBasis) throw;
        key["available"] = false;
        key["reason"] = e.what();
    }
    j["key_rate"] = key;

    std::vector<Record> rows;
    for (Basis basis : {Basis::Frequency, Basis::Time}) {
        const auto& counts = ledger.counts(basis);
        const auto n = ledger.sifted_by_basis[static_cast<int>(basis)];
        for (int a = 0; a < pr.m; ++a)
            for (int b = 0; b < pr.m; ++b) {
                const auto c = counts(b, a);
                if (c == 0) continue;
                const double p = static_cast<double>(c) / static_cast<double>(n);
                rows.push_back({{"basis", "", std::string(to_string(basis))},
                                {"alice_bin", "1", std::int64_t{a + 1}},
                                {"bob_bin", "1", std::int64_t{b + 1}},
                                {"count", "events", static_cast<std::int64_t>(c)},
                                {"probability", "1", p},
                                {"std_error", "1", std::sqrt(p * (1.0 - p) / static_cast<double>(n))}});
            }
    }
    const std::vector<std::string> header = {"basis",        "alice_bin[1]",   "bob_bin[1]",
                                             "count[events]", "probability[1]", "std_error[1]"};
    Document doc;
    if (config.output.wants_json()) doc.push_back({"montecarlo.json", dump(j)});
    if (config.output.wants_csv()) doc.push_back({"montecarlo_counts.csv", to_csv(header, rows)});
    return doc;
}

Document cmd_feasibility(const RunConfig& config)
{
    config.validate();
    const auto& pr = config.protocol;
    const auto& hw = config.hardware.spec;
    std::vector<Record> rows;
    ojson reports = ojson::array();
    HardwareSpec spec = hw;
    for (auto conv : conventions(config.hardware.convention)) {
        spec.convention = conv;
        Record r = feasibility_fields(check_feasibility(pr.m, pr.beta_plus, pr.beta_minus, spec), false);
        reports.push_back(values_of(r));
        rows.push_back(std::move(r));
    }
    ojson j = ojson::object();
    j["design"] = {{"m", pr.m}, {"beta_plus", pr.beta_plus}, {"beta_minus", pr.beta_minus}};
    j["hardware"] = {{"center_wavelength_m", hw.center_wavelength},
                     {"resolution_hz", hw.resolution_hz()},
                     {"modulator_max_frequency_hz", hw.modulator_max_frequency},
                     {"modulator_max_depth_rad", hw.modulator_max_depth},
                     {"fiber_gvd_s2_per_m", hw.fiber_gvd}};
    j["units"] = units_of(rows.front());
    j["reports"] = reports;
    Document doc;
    emit(doc, config.output, "feasibility", headers(rows.front()), rows, j);
    return doc;
}

Document cmd_reproduce_fig2b(const OutputBlock& output)
{
    RunConfig base;
    base.output = output;
    std::vector<Record> rows;
    std::vector<double> rates;
    for (int bits = 1; bits <= 16; ++bits) {
        const RunConfig c = with_parameter(base, "protocol.log2_m", bits);
        const ChannelModel ch = c.channel_model();
        const double p = error_probability(ch).p;
        const double rate = simplified_key_rate(c.protocol.m, p, c.protocol.beta_plus, c.protocol.beta_minus);
        rates.push_back(rate);
        rows.push_back({{"log2_m", "bits", static_cast<double>(bits)},
                        {"m", "1", std::int64_t{c.protocol.m}},
                        {"error_probability", "1", p},
                        {"key_rate", "bits", rate}});
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < rates.size(); ++i)
        if (rates[i] > rates[best]) best = i;
    std::optional<std::size_t> first_decrease;
    for (std::size_t i = 1; i < rates.size() && !first_decrease; ++i)
        if (rates[i] < rates[i - 1]) first_decrease = i;
    std::optional<double> crossing;
    for (std::size_t i = 1; i < rates.size() && !crossing; ++i)
        if (rates[i - 1] > 0.0 && rates[i] <= 0.0)
            crossing = static_cast<double>(i) + rates[i - 1] / (rates[i - 1] - rates[i]);

    ojson j = ojson::object();
    j["parameters"] = {{"epsilon", base.channel.epsilon},
                       {"eta_d", base.channel.eta_d},
                       {"dark", base.channel.dark},
                       {"length_over_l_att", base.channel.length / base.channel.l_att},
                       {"beta_plus", base.protocol.beta_plus},
                       {"beta_minus", base.protocol.beta_minus}};
    j["binning_deficit_bits"] = binning_deficit(base.protocol.beta_plus, base.protocol.beta_minus);
    j["maximum"] = {{"log2_m", best + 1}, {"key_rate_bits", rates[best]}};
    j["first_decrease_log2_m"] = first_decrease ? ojson(*first_decrease + 1) : ojson(nullptr);
    j["zero_crossing_log2_m"] = crossing ? ojson(*crossing) : ojson(nullptr);
    j["units"] = units_of(rows.front());
    j["curve"] = ojson::array();
    for (const auto& r : rows) j["curve"].push_back(values_of(r));
    Document doc;
    emit(doc, output, "fig2b", headers(rows.front()), rows, j);
    return doc;
}

void write_document(const Document& document, const std::string& directory)
{
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) fail(ErrorCode::Io, "cannot create output directory '" + directory + "': " + ec.message());
    for (const auto& f : document) {
        const auto path = std::filesystem::path(directory) / f.name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(f.content.data(), static_cast<std::streamsize>(f.content.size()));
        if (!out) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
    }
}

}  // namespace tfqkd

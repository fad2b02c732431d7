#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ratchoice/csv.hpp"
#include "ratchoice/expectations.hpp"
#include "ratchoice/rng.hpp"

namespace ratchoice {

// One state pair in one year. Feature semantics follow the usual dyadic
// conflict setup: allies/contiguity/major_power are 0/1 flags, distance is an
// inter-capital distance measure, democracy is a polity-style score in
// [-10, 10], dependency is trade-over-GDP (>= 0), capability is the base-10
// log of the stronger-to-weaker capability ratio (>= 0).
struct Dyad {
    double allies = 0.0;
    double contiguity = 0.0;
    double distance = 0.0;
    double major_power = 0.0;
    double democracy = 0.0;
    double dependency = 0.0;
    double capability = 0.0;
    int outcome = 0;  // 0 = peace, 1 = conflict
};

inline constexpr int kFeatureCount = 7;

inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "allies", "contiguity", "distance", "major_power",
    "democracy", "dependency", "capability"};

inline std::array<double, kFeatureCount> feature_vector(const Dyad& d) {
    return {d.allies, d.contiguity, d.distance, d.major_power,
            d.democracy, d.dependency, d.capability};
}

namespace detail {

inline bool is_binary(double v) { return v == 0.0 || v == 1.0; }

}  // namespace detail

/// Throws std::invalid_argument naming the offending field; `where` prefixes
/// the message (e.g. "row 2: "). Used by loaders and the synthetic generator.
inline void validate_dyad(const Dyad& d, const std::string& where = "") {
    auto fail = [&](const std::string& msg) { throw std::invalid_argument(where + msg); };
    for (double v : feature_vector(d)) {
        if (!std::isfinite(v)) fail("non-finite feature value");
    }
    if (!detail::is_binary(d.allies)) fail("allies must be 0 or 1");
    if (!detail::is_binary(d.contiguity)) fail("contiguity must be 0 or 1");
    if (d.distance < 0.0) fail("distance must be non-negative");
    if (!detail::is_binary(d.major_power)) fail("major_power must be 0 or 1");
    if (d.democracy < -10.0 || d.democracy > 10.0) fail("democracy out of range");
    if (d.dependency < 0.0) fail("dependency must be non-negative");
    if (d.capability < 0.0) fail("capability must be non-negative");
    if (d.outcome != 0 && d.outcome != 1) fail("outcome must be 0 or 1");
}

// --- panel structure and lagging --------------------------------------------

struct PanelRow {
    std::string dyad_id;
    int year = 0;
    Dyad dyad;
};

/// Rows sorted by (dyad_id, year), keys unique.
struct DyadPanel {
    std::vector<PanelRow> rows;
};

inline DyadPanel make_panel(std::vector<PanelRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const PanelRow& a, const PanelRow& b) {
        return std::tie(a.dyad_id, a.year) < std::tie(b.dyad_id, b.year);
    });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i - 1].dyad_id == rows[i].dyad_id && rows[i - 1].year == rows[i].year) {
            throw std::invalid_argument("duplicate panel key (" + rows[i].dyad_id + ", " +
                                        std::to_string(rows[i].year) + ")");
        }
    }
    return DyadPanel{std::move(rows)};
}

struct LagResult {
    std::vector<Dyad> rows;  // features from year-1, outcome from year
    std::size_t dropped = 0; // (dyad_id, year) pairs with no predecessor
};

/// Lags all independent variables by one year: each output row pairs a year's
/// outcome with the previous year's features. Rows without a (dyad_id,
/// year-1) predecessor are dropped and counted.
inline LagResult lag_panel(const DyadPanel& panel) {
    LagResult out;
    for (std::size_t i = 0; i < panel.rows.size(); ++i) {
        const PanelRow& cur = panel.rows[i];
        const PanelRow* prev = i > 0 ? &panel.rows[i - 1] : nullptr;
        if (prev && prev->dyad_id == cur.dyad_id && prev->year == cur.year - 1) {
            Dyad lagged = prev->dyad;
            lagged.outcome = cur.dyad.outcome;
            out.rows.push_back(lagged);
        } else {
            ++out.dropped;
        }
    }
    return out;
}

// --- normalization -----------------------------------------------------------

/// Per-feature min-max affine map fitted on training data and reused for
/// controlled or unseen points.
struct NormParams {
    std::array<double, kFeatureCount> mins{};
    std::array<double, kFeatureCount> maxs{};

    double apply(int feature, double raw) const {
        const double range = maxs[feature] - mins[feature];
        if (range == 0.0) return 0.0;  // constant feature maps to 0
        return (raw - mins[feature]) / range;
    }

    double invert(int feature, double scaled) const {
        const double range = maxs[feature] - mins[feature];
        if (range == 0.0) return mins[feature];
        return mins[feature] + scaled * range;
    }

    std::array<double, kFeatureCount> apply(const Dyad& d) const {
        const auto raw = feature_vector(d);
        std::array<double, kFeatureCount> scaled{};
        for (int f = 0; f < kFeatureCount; ++f) scaled[f] = apply(f, raw[f]);
        return scaled;
    }
};

struct NormalizedData {
    std::vector<std::array<double, kFeatureCount>> features;  // each in [0,1]^7
    NormParams params;
};

inline NormalizedData normalize(const std::vector<Dyad>& dyads) {
    if (dyads.empty()) throw std::invalid_argument("normalize: empty dyad list");
    NormalizedData out;
    for (int f = 0; f < kFeatureCount; ++f) {
        out.params.mins[f] = std::numeric_limits<double>::infinity();
        out.params.maxs[f] = -std::numeric_limits<double>::infinity();
    }
    for (const Dyad& d : dyads) {
        const auto raw = feature_vector(d);
        for (int f = 0; f < kFeatureCount; ++f) {
            out.params.mins[f] = std::min(out.params.mins[f], raw[f]);
            out.params.maxs[f] = std::max(out.params.maxs[f], raw[f]);
        }
    }
    out.features.reserve(dyads.size());
    for (const Dyad& d : dyads) out.features.push_back(out.params.apply(d));
    return out;
}

inline LabeledDataset to_dataset(const std::vector<Dyad>& dyads, const NormParams& params) {
    LabeledDataset data;
    data.feature_names.assign(kFeatureNames.begin(), kFeatureNames.end());
    data.features.reserve(dyads.size());
    data.targets.reserve(dyads.size());
    for (const Dyad& d : dyads) {
        const auto scaled = params.apply(d);
        data.features.emplace_back(scaled.begin(), scaled.end());
        data.targets.push_back(static_cast<double>(d.outcome));
    }
    return data;
}

// NormParams persistence: "feature,min,max" rows, round-trip exact.
inline void save_norm_params(const NormParams& p, const std::filesystem::path& path) {
    std::string out = "feature,min,max\n";
    for (int f = 0; f < kFeatureCount; ++f) {
        out += std::string(kFeatureNames[f]) + "," + format_double17(p.mins[f]) + "," +
               format_double17(p.maxs[f]) + "\n";
    }
    csv::write_file(path, out);
}

inline NormParams load_norm_params(const std::filesystem::path& path) {
    const auto lines = csv::read_lines(path);
    if (lines.empty() || lines[0] != "feature,min,max") {
        throw std::runtime_error("norm params file: expected header 'feature,min,max'");
    }
    if (lines.size() != kFeatureCount + 1) {
        throw std::runtime_error("norm params file: expected " + std::to_string(kFeatureCount) +
                                 " feature rows");
    }
    NormParams p;
    for (int f = 0; f < kFeatureCount; ++f) {
        const auto fields = csv::split_line(lines[f + 1]);
        if (fields.size() != 3 || fields[0] != kFeatureNames[f]) {
            throw std::runtime_error("norm params file row " + std::to_string(f + 2) +
                                     ": expected feature '" + kFeatureNames[f] + "'");
        }
        p.mins[f] = csv::parse_double(fields[1], f + 2, "min");
        p.maxs[f] = csv::parse_double(fields[2], f + 2, "max");
    }
    return p;
}

// --- synthetic generation -----------------------------------------------------

// Generating scales: the logistic model sees each feature divided by its
// natural span so coefficients are comparable across features. Democracy
// keeps its sign (maps [-10,10] to [-1,1]); the rest land in [0,1].
inline constexpr double kSynthDistanceScale = 12000.0;
inline constexpr double kSynthDemocracyScale = 10.0;
inline constexpr double kSynthDependencyScale = 0.3;
inline constexpr double kSynthCapabilityScale = 3.0;

struct SynthConfig {
    int n = 1000;
    std::uint64_t seed = 0;
    // intercept + one weight per feature, in kFeatureNames order, applied to
    // scale-divided features
    std::array<double, kFeatureCount + 1> coefficients;
    double noise_sd = 0.0;  // measurement noise, fraction of each feature's span
};

inline void validate(const SynthConfig& c) {
    if (c.n < 1) throw std::invalid_argument("synth n must be >= 1");
    if (c.noise_sd < 0.0 || !std::isfinite(c.noise_sd)) {
        throw std::invalid_argument("synth noise_sd must be non-negative and finite");
    }
    for (double v : c.coefficients) {
        if (!std::isfinite(v)) throw std::invalid_argument("synth coefficients must be finite");
    }
}

// Calibrated by a 1e6-draw Monte-Carlo run so the long-run conflict rate sits
// near 0.29 (measured 0.2901). Signs encode the qualitative story: contiguity
// and major-power status raise risk; alliance, joint democracy, economic
// dependency, and a lopsided capability ratio lower it.
inline constexpr std::array<double, kFeatureCount + 1> kDefaultSynthCoefficients = {
    3.7,    // intercept
    -8.0,   // allies
    10.0,   // contiguity
    -6.0,   // distance (scaled by 12000)
    2.5,    // major_power
    -12.0,  // democracy (scaled by 10, sign kept)
    -10.0,  // dependency (scaled by 0.3)
    -4.0,   // capability (scaled by 3)
};

inline SynthConfig default_synth_config(int n, std::uint64_t seed) {
    SynthConfig cfg;
    cfg.n = n;
    cfg.seed = seed;
    cfg.coefficients = kDefaultSynthCoefficients;
    cfg.noise_sd = 0.0;
    return cfg;
}

/// Ground-truth conflict probability of the generating model for one dyad.
inline double synth_conflict_probability(const Dyad& d,
                                         const std::array<double, kFeatureCount + 1>& coef) {
    double z = coef[0];
    z += coef[1] * d.allies;
    z += coef[2] * d.contiguity;
    z += coef[3] * d.distance / kSynthDistanceScale;
    z += coef[4] * d.major_power;
    z += coef[5] * d.democracy / kSynthDemocracyScale;
    z += coef[6] * d.dependency / kSynthDependencyScale;
    z += coef[7] * d.capability / kSynthCapabilityScale;
    return detail::logistic(z);
}

/// Seeded synthetic dyads: features drawn in schema order, outcome drawn from
/// the generating logistic model, then optional Gaussian measurement noise on
/// the non-binary features (after outcome assignment — noise corrupts the
/// observation, not the ground truth). Same config → identical output.
inline std::vector<Dyad> synth_generate(const SynthConfig& cfg) {
    validate(cfg);
    Rng rng(cfg.seed);
    std::vector<Dyad> out;
    out.reserve(static_cast<std::size_t>(cfg.n));
    for (int i = 0; i < cfg.n; ++i) {
        Dyad d;
        d.allies = rng.bernoulli(0.30) ? 1.0 : 0.0;
        d.contiguity = rng.bernoulli(0.25) ? 1.0 : 0.0;
        d.distance = rng.uniform(100.0, kSynthDistanceScale);
        d.major_power = rng.bernoulli(0.20) ? 1.0 : 0.0;
        d.democracy = rng.uniform(-10.0, 10.0);
        d.dependency = rng.uniform(0.0, kSynthDependencyScale);
        d.capability = rng.uniform(0.0, kSynthCapabilityScale);
        d.outcome = rng.bernoulli(synth_conflict_probability(d, cfg.coefficients)) ? 1 : 0;
        if (cfg.noise_sd > 0.0) {
            d.distance += rng.normal(0.0, cfg.noise_sd * kSynthDistanceScale);
            d.democracy += rng.normal(0.0, cfg.noise_sd * 2.0 * kSynthDemocracyScale);
            d.dependency += rng.normal(0.0, cfg.noise_sd * kSynthDependencyScale);
            d.capability += rng.normal(0.0, cfg.noise_sd * kSynthCapabilityScale);
            d.distance = std::max(d.distance, 0.0);
            d.democracy = std::clamp(d.democracy, -10.0, 10.0);
            d.dependency = std::max(d.dependency, 0.0);
            d.capability = std::max(d.capability, 0.0);
        }
        validate_dyad(d, "generated row " + std::to_string(i) + ": ");
        out.push_back(d);
    }
    return out;
}

// --- CSV ingestion / emission -------------------------------------------------

inline constexpr const char* kPanelHeader =
    "dyad_id,year,allies,contiguity,distance,major_power,democracy,dependency,capability,outcome";
inline constexpr const char* kPlainHeader =
    "allies,contiguity,distance,major_power,democracy,dependency,capability,outcome";

struct LoadedDyads {
    std::vector<Dyad> dyads;      // panel files: in file order, NOT lagged
    std::vector<PanelRow> panel;  // empty for plain (pre-lagged) files
    bool is_panel = false;
};

namespace detail {

// When a header is one of the known schemas with columns left out, say which
// ones; otherwise fall back to quoting both accepted schemas.
inline std::string describe_header(const std::string& header) {
    const auto have = csv::split_line(header);
    for (const char* schema : {kPlainHeader, kPanelHeader}) {
        const auto want = csv::split_line(schema);
        std::vector<std::string> missing;
        std::size_t matched = 0;
        for (const auto& column : want) {
            if (matched < have.size() && have[matched] == column) {
                ++matched;
            } else {
                missing.push_back(column);
            }
        }
        if (matched == have.size() && !missing.empty() && missing.size() < want.size()) {
            std::string note = missing.size() == 1 ? "missing column" : "missing columns";
            for (std::size_t i = 0; i < missing.size(); ++i) {
                note += (i == 0 ? " '" : ", '") + missing[i] + "'";
            }
            return note;
        }
    }
    return "expected '" + std::string(kPanelHeader) + "' or '" + kPlainHeader + "'";
}

inline Dyad parse_dyad_fields(const std::vector<std::string>& fields, std::size_t offset,
                              std::size_t row_no) {
    Dyad d;
    std::array<double*, kFeatureCount> slots = {&d.allies,      &d.contiguity, &d.distance,
                                                &d.major_power, &d.democracy,  &d.dependency,
                                                &d.capability};
    for (int f = 0; f < kFeatureCount; ++f) {
        *slots[f] = csv::parse_double(fields[offset + f], row_no, kFeatureNames[f]);
    }
    const double raw_outcome =
        csv::parse_double(fields[offset + kFeatureCount], row_no, "outcome");
    d.outcome = static_cast<int>(raw_outcome);
    if (static_cast<double>(d.outcome) != raw_outcome) {
        throw std::invalid_argument("row " + std::to_string(row_no) + ": outcome must be 0 or 1");
    }
    validate_dyad(d, "row " + std::to_string(row_no) + ": ");
    return d;
}

}  // namespace detail

/// Reads either schema (with or without the dyad_id,year key columns). Errors
/// name the row and field. A header-only file is an empty dataset, not an
/// error.
inline LoadedDyads load_dyads_csv(const std::filesystem::path& path) {
    const auto lines = csv::read_lines(path);
    if (lines.empty()) throw std::runtime_error(path.string() + ": empty file, expected a header");
    LoadedDyads out;
    if (lines[0] == kPanelHeader) {
        out.is_panel = true;
    } else if (lines[0] == kPlainHeader) {
        out.is_panel = false;
    } else {
        throw std::runtime_error(path.string() + ": unrecognized header; " +
                                 detail::describe_header(lines[0]));
    }
    const std::size_t expect = out.is_panel ? kFeatureCount + 3 : kFeatureCount + 1;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = csv::split_line(lines[i]);
        if (fields.size() != expect) {
            throw std::invalid_argument("row " + std::to_string(i) + ": expected " +
                                        std::to_string(expect) + " fields, got " +
                                        std::to_string(fields.size()));
        }
        if (out.is_panel) {
            PanelRow row;
            row.dyad_id = fields[0];
            row.year = static_cast<int>(csv::parse_double(fields[1], i, "year"));
            row.dyad = detail::parse_dyad_fields(fields, 2, i);
            out.panel.push_back(std::move(row));
            out.dyads.push_back(out.panel.back().dyad);
        } else {
            out.dyads.push_back(detail::parse_dyad_fields(fields, 0, i));
        }
    }
    return out;
}

inline std::string dyad_fields_csv(const Dyad& d) {
    std::string line;
    const auto raw = feature_vector(d);
    for (double v : raw) line += format_double(v) + ",";
    line += std::to_string(d.outcome);
    return line;
}

inline void write_dyads_csv(const std::vector<Dyad>& dyads, const std::filesystem::path& path) {
    std::string out = std::string(kPlainHeader) + "\n";
    for (const Dyad& d : dyads) out += dyad_fields_csv(d) + "\n";
    csv::write_file(path, out);
}

inline void write_panel_csv(const std::vector<PanelRow>& rows,
                            const std::filesystem::path& path) {
    std::string out = std::string(kPanelHeader) + "\n";
    for (const PanelRow& r : rows) {
        out += r.dyad_id + "," + std::to_string(r.year) + "," + dyad_fields_csv(r.dyad) + "\n";
    }
    csv::write_file(path, out);
}

}  // namespace ratchoice

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratchoice/conflict_data.hpp"
#include "ratchoice/csv.hpp"
#include "ratchoice/expectations.hpp"
#include "ratchoice/optimizers.hpp"
#include "ratchoice/rng.hpp"

namespace ratchoice {

// The four dyadic inputs a policy maker can plausibly influence. Contiguity,
// distance, and major-power status are facts of geography and scale.
enum class ControlVariable { Democracy, Allies, Capability, Dependency };

inline constexpr std::array<ControlVariable, 4> kControllables = {
    ControlVariable::Democracy, ControlVariable::Allies, ControlVariable::Capability,
    ControlVariable::Dependency};

inline const char* to_string(ControlVariable v) {
    switch (v) {
        case ControlVariable::Democracy: return "democracy";
        case ControlVariable::Allies: return "allies";
        case ControlVariable::Capability: return "capability";
        case ControlVariable::Dependency: return "dependency";
    }
    throw std::invalid_argument("unknown control variable");
}

inline ControlVariable parse_control_variable(const std::string& name) {
    for (ControlVariable v : kControllables) {
        if (name == to_string(v)) return v;
    }
    throw std::invalid_argument("'" + name + "' is not a controllable variable (expected " +
                                "democracy, allies, capability, or dependency)");
}

inline double get_variable(const Dyad& d, ControlVariable v) {
    switch (v) {
        case ControlVariable::Democracy: return d.democracy;
        case ControlVariable::Allies: return d.allies;
        case ControlVariable::Capability: return d.capability;
        case ControlVariable::Dependency: return d.dependency;
    }
    throw std::invalid_argument("unknown control variable");
}

inline void set_variable(Dyad& d, ControlVariable v, double value) {
    switch (v) {
        case ControlVariable::Democracy: d.democracy = value; return;
        case ControlVariable::Allies: d.allies = value; return;
        case ControlVariable::Capability: d.capability = value; return;
        case ControlVariable::Dependency: d.dependency = value; return;
    }
    throw std::invalid_argument("unknown control variable");
}

/// Predicted conflict risk for one dyad under the trained model, using the
/// training-set normalization.
template <RiskPredictor M>
double risk(const M& model, const Dyad& dyad, const NormParams& norm) {
    if (input_width(model) != kFeatureCount) {
        throw std::invalid_argument("risk: model input width " +
                                    std::to_string(input_width(model)) + ", expected " +
                                    std::to_string(kFeatureCount));
    }
    const auto scaled = norm.apply(dyad);
    return forward(model, std::span<const double>(scaled.data(), scaled.size()));
}

// A dyad's own observed value is always a legal "do nothing" point, so the
// interval is widened when the observation sits past the training-set max.
inline Bounds::Dim control_bounds(ControlVariable v, const NormParams& norm, const Dyad& dyad) {
    switch (v) {
        case ControlVariable::Democracy:
            return {-10.0, 10.0};
        case ControlVariable::Allies:
            return {0.0, 1.0};  // continuous relaxation; rounded after search
        case ControlVariable::Capability:
            return {0.0, std::max(norm.maxs[6], dyad.capability)};
        case ControlVariable::Dependency:
            return {0.0, std::max(norm.maxs[5], dyad.dependency)};
    }
    throw std::invalid_argument("unknown control variable");
}

inline constexpr double kAvoidanceThreshold = 0.5;

struct GssControlConfig {
    double tolerance = 1e-6;
    int max_iterations = 200;
    int prescan_points = 32;  // even grid incl. endpoints, picks the GSS bracket
};

inline void validate(const GssControlConfig& c) {
    if (!(c.tolerance > 0.0)) throw std::invalid_argument("gss tolerance must be positive");
    if (c.max_iterations < 1) throw std::invalid_argument("gss max_iterations must be >= 1");
    if (c.prescan_points < 2) throw std::invalid_argument("gss prescan_points must be >= 2");
}

struct SaControlConfig {
    SaSchedule schedule;
    int restarts = 5;  // multi-start count, best-of retained
    std::uint64_t seed = 0;
};

inline void validate(const SaControlConfig& c) {
    validate(c.schedule);
    if (c.restarts < 1) throw std::invalid_argument("sa restarts must be >= 1");
}

enum class StrategyMode { Single, Multiple };

struct ControlStrategy {
    StrategyMode mode = StrategyMode::Single;
    std::vector<ControlVariable> variables;  // exactly 1 for Single, >= 1 for Multiple
    GssControlConfig gss;
    SaControlConfig sa;
};

inline ControlStrategy single_strategy(ControlVariable v) {
    ControlStrategy s;
    s.mode = StrategyMode::Single;
    s.variables = {v};
    return s;
}

inline ControlStrategy multiple_strategy(std::vector<ControlVariable> vars,
                                         std::uint64_t seed) {
    if (vars.empty()) throw std::invalid_argument("multiple strategy needs at least one variable");
    ControlStrategy s;
    s.mode = StrategyMode::Multiple;
    s.variables = std::move(vars);
    s.sa.seed = seed;
    return s;
}

inline void validate(const ControlStrategy& s) {
    if (s.variables.empty()) throw std::invalid_argument("strategy has no variables");
    if (s.mode == StrategyMode::Single && s.variables.size() != 1) {
        throw std::invalid_argument("single strategy takes exactly one variable");
    }
    for (std::size_t i = 0; i < s.variables.size(); ++i) {
        for (std::size_t j = i + 1; j < s.variables.size(); ++j) {
            if (s.variables[i] == s.variables[j]) {
                throw std::invalid_argument("strategy lists a variable twice");
            }
        }
    }
    validate(s.gss);
    validate(s.sa);
}

struct ControlledDyad {
    Dyad original;
    Dyad controlled;               // non-selected fields bit-identical to original
    double risk_before = 0.0;
    double risk_after = 0.0;
    // signed change per controllable, original units, kControllables order
    std::array<double, 4> deltas{};
    bool avoided = false;
};

namespace detail {

inline int controllable_index(ControlVariable v) {
    for (int i = 0; i < 4; ++i) {
        if (kControllables[static_cast<std::size_t>(i)] == v) return i;
    }
    throw std::invalid_argument("unknown control variable");
}

template <RiskPredictor M>
ControlledDyad finish_controlled(const M& model, const NormParams& norm, const Dyad& original,
                                 Dyad controlled, double risk_before) {
    ControlledDyad out;
    out.original = original;
    out.controlled = controlled;
    out.risk_before = risk_before;
    out.risk_after = risk(model, controlled, norm);
    for (int i = 0; i < 4; ++i) {
        const ControlVariable v = kControllables[static_cast<std::size_t>(i)];
        out.deltas[static_cast<std::size_t>(i)] = get_variable(controlled, v) -
                                                  get_variable(original, v);
    }
    out.avoided = out.risk_after < kAvoidanceThreshold;
    return out;
}

// Endpoints of the relaxed [0,1] interval ordered nearest-first from the
// continuous optimum; ties resolve to 0 (the cheaper intervention).
inline std::array<double, 2> allies_rounding_order(double relaxed) {
    return relaxed > 0.5 ? std::array<double, 2>{1.0, 0.0} : std::array<double, 2>{0.0, 1.0};
}

}  // namespace detail

/// Tunes one controllable variable of a conflict dyad to minimize predicted
/// risk, all other fields frozen. A coarse pre-scan picks the bracket (the
/// risk slice need not be unimodal), golden section search refines it, and
/// the best point evaluated anywhere is kept. The original value wins unless
/// strictly improved on, so risk_after <= risk_before always holds. Allies is
/// searched over the relaxed interval [0,1] and rounded to the nearest
/// risk-improving endpoint.
template <RiskPredictor M>
ControlledDyad control_single(const M& model, const NormParams& norm, const Dyad& dyad,
                              ControlVariable variable, const GssControlConfig& cfg = {}) {
    validate(cfg);
    if (dyad.outcome != 1) {
        throw std::invalid_argument("control_single: dyad is not a conflict (outcome != 1)");
    }
    const double risk_before = risk(model, dyad, norm);
    const auto bounds = control_bounds(variable, norm, dyad);

    Dyad probe = dyad;
    double best_x = get_variable(dyad, variable);
    double best_val = risk_before;
    auto slice = [&](double x) {
        probe = dyad;
        set_variable(probe, variable, x);
        const double r = risk(model, probe, norm);
        if (r < best_val) {
            best_val = r;
            best_x = x;
        }
        return r;
    };

    if (bounds.hi > bounds.lo) {
        // pre-scan incl. endpoints, keep the bracket around the best grid point
        const int n = cfg.prescan_points;
        int best_i = 0;
        double best_scan = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const double x = bounds.lo + (bounds.hi - bounds.lo) * i / (n - 1);
            const double r = slice(x);
            if (r < best_scan) {
                best_scan = r;
                best_i = i;
            }
        }
        const double step = (bounds.hi - bounds.lo) / (n - 1);
        const double lo = std::max(bounds.lo, bounds.lo + (best_i - 1) * step);
        const double hi = std::min(bounds.hi, bounds.lo + (best_i + 1) * step);
        golden_section(slice, lo, hi, cfg.tolerance, cfg.max_iterations);
    }

    Dyad controlled = dyad;
    if (variable == ControlVariable::Allies) {
        for (double endpoint : detail::allies_rounding_order(best_x)) {
            probe = dyad;
            set_variable(probe, ControlVariable::Allies, endpoint);
            if (risk(model, probe, norm) < risk_before) {
                controlled = probe;
                break;
            }
        }
    } else if (best_val < risk_before) {
        set_variable(controlled, variable, best_x);
    }
    return detail::finish_controlled(model, norm, dyad, controlled, risk_before);
}

/// Tunes several controllables at once via multi-start simulated annealing
/// over the box of their legal ranges. Incumbent retention and the Allies
/// rounding rule carry over from control_single.
template <RiskPredictor M>
ControlledDyad control_multiple(const M& model, const NormParams& norm, const Dyad& dyad,
                                const std::vector<ControlVariable>& variables,
                                const SaControlConfig& cfg) {
    validate(cfg);
    if (variables.empty()) {
        throw std::invalid_argument("control_multiple: empty variable set");
    }
    for (std::size_t i = 0; i < variables.size(); ++i) {
        for (std::size_t j = i + 1; j < variables.size(); ++j) {
            if (variables[i] == variables[j]) {
                throw std::invalid_argument("control_multiple: variable listed twice");
            }
        }
    }
    if (dyad.outcome != 1) {
        throw std::invalid_argument("control_multiple: dyad is not a conflict (outcome != 1)");
    }
    const double risk_before = risk(model, dyad, norm);

    Bounds box;
    std::vector<double> origin;
    for (ControlVariable v : variables) {
        box.dims.push_back(control_bounds(v, norm, dyad));
        origin.push_back(get_variable(dyad, v));
    }
    box.clamp(origin);  // relaxed Allies: a binary origin is already in [0,1]

    Dyad probe = dyad;
    auto objective = [&](std::span<const double> x) {
        probe = dyad;
        for (std::size_t k = 0; k < variables.size(); ++k) {
            set_variable(probe, variables[k], x[k]);
        }
        return risk(model, probe, norm);
    };

    std::vector<double> best_x = origin;
    double best_val = objective(origin);
    for (int restart = 0; restart < cfg.restarts; ++restart) {
        const std::uint64_t seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(restart));
        // the first restart climbs from the observed point, the rest go wide
        const auto start = restart == 0 ? std::optional<std::vector<double>>(origin)
                                        : std::nullopt;
        const OptimResult r = simulated_annealing(objective, box, cfg.schedule, seed, start);
        if (r.best_value < best_val) {
            best_val = r.best_value;
            best_x = r.best_point;
        }
    }

    // round a relaxed Allies component to the nearest improving endpoint; if
    // neither endpoint beats the original risk, the original dyad stands
    // (the original allies value, being 0 or 1, is one of the two candidates)
    const auto allies_it = std::find(variables.begin(), variables.end(), ControlVariable::Allies);
    Dyad controlled = dyad;
    if (allies_it != variables.end()) {
        const std::size_t ai = static_cast<std::size_t>(allies_it - variables.begin());
        for (double endpoint : detail::allies_rounding_order(best_x[ai])) {
            std::vector<double> candidate = best_x;
            candidate[ai] = endpoint;
            if (objective(candidate) < risk_before) {
                controlled = probe;  // probe holds the candidate after objective()
                break;
            }
        }
    } else if (best_val < risk_before) {
        probe = dyad;
        for (std::size_t k = 0; k < variables.size(); ++k) {
            set_variable(probe, variables[k], best_x[k]);
        }
        controlled = probe;
    }
    return detail::finish_controlled(model, norm, dyad, controlled, risk_before);
}

struct AvoidanceReport {
    ControlStrategy strategy;
    std::size_t n_conflicts = 0;
    std::size_t n_avoided = 0;
    double percent_avoided = 0.0;
    // mean |delta| over controlled dyads, original units, kControllables order
    std::array<double, 4> mean_abs_delta{};
    std::vector<ControlledDyad> details;  // one per conflict dyad, input order
};

/// Applies the strategy to every conflict dyad (outcome == 1) and aggregates
/// the share whose post-control risk drops below the avoidance threshold.
/// Peaceful dyads pass through uncounted. Per-dyad randomness under a
/// Multiple strategy derives from the strategy seed and the dyad's position,
/// so the report is reproducible row for row.
template <RiskPredictor M>
AvoidanceReport avoidance_report(const M& model, const NormParams& norm,
                                 const std::vector<Dyad>& dyads,
                                 const ControlStrategy& strategy) {
    validate(strategy);
    if (dyads.empty()) throw std::invalid_argument("avoidance_report: empty dyad list");

    AvoidanceReport report;
    report.strategy = strategy;
    for (std::size_t i = 0; i < dyads.size(); ++i) {
        if (dyads[i].outcome != 1) continue;
        ControlledDyad cd;
        if (strategy.mode == StrategyMode::Single) {
            cd = control_single(model, norm, dyads[i], strategy.variables.front(), strategy.gss);
        } else {
            SaControlConfig per_dyad = strategy.sa;
            per_dyad.seed = mix_seed(strategy.sa.seed, static_cast<std::uint64_t>(i));
            cd = control_multiple(model, norm, dyads[i], strategy.variables, per_dyad);
        }
        ++report.n_conflicts;
        if (cd.avoided) ++report.n_avoided;
        for (std::size_t k = 0; k < 4; ++k) {
            report.mean_abs_delta[k] += std::abs(cd.deltas[k]);
        }
        report.details.push_back(std::move(cd));
    }
    if (report.n_conflicts == 0) {
        throw std::invalid_argument("avoidance_report: no conflict rows (outcome == 1) to control");
    }
    report.percent_avoided =
        100.0 * static_cast<double>(report.n_avoided) / static_cast<double>(report.n_conflicts);
    for (auto& v : report.mean_abs_delta) v /= static_cast<double>(report.n_conflicts);
    return report;
}

// --- report emission ----------------------------------------------------------

inline std::string variable_set_label(const ControlStrategy& s) {
    std::string out;
    for (std::size_t i = 0; i < s.variables.size(); ++i) {
        if (i) out += "+";
        out += to_string(s.variables[i]);
    }
    return out;
}

inline constexpr const char* kSummaryHeader =
    "strategy,variable_set,n_conflicts,n_avoided,percent_avoided,"
    "mean_abs_delta_democracy,mean_abs_delta_allies,mean_abs_delta_capability,"
    "mean_abs_delta_dependency";

inline std::string summary_row(const AvoidanceReport& r) {
    const auto& d = r.mean_abs_delta;  // kControllables order: dem, allies, cap, dep
    std::string row = r.strategy.mode == StrategyMode::Single ? "single" : "multiple";
    row += "," + variable_set_label(r.strategy);
    row += "," + std::to_string(r.n_conflicts);
    row += "," + std::to_string(r.n_avoided);
    row += "," + format_double(r.percent_avoided);
    row += "," + format_double(d[0]) + "," + format_double(d[1]) + "," + format_double(d[2]) +
           "," + format_double(d[3]);
    return row;
}

inline void write_summary_csv(const std::vector<AvoidanceReport>& reports,
                              const std::filesystem::path& path) {
    std::string out = std::string(kSummaryHeader) + "\n";
    for (const auto& r : reports) out += summary_row(r) + "\n";
    csv::write_file(path, out);
}

inline constexpr const char* kDetailHeader =
    "row,allies,contiguity,distance,major_power,democracy,dependency,capability,"
    "ctl_allies,ctl_contiguity,ctl_distance,ctl_major_power,ctl_democracy,ctl_dependency,"
    "ctl_capability,risk_before,risk_after,avoided";

inline void write_detail_csv(const AvoidanceReport& report, const std::filesystem::path& path) {
    std::string out = std::string(kDetailHeader) + "\n";
    for (std::size_t i = 0; i < report.details.size(); ++i) {
        const ControlledDyad& cd = report.details[i];
        out += std::to_string(i);
        for (double v : feature_vector(cd.original)) out += "," + format_double(v);
        for (double v : feature_vector(cd.controlled)) out += "," + format_double(v);
        out += "," + format_double(cd.risk_before) + "," + format_double(cd.risk_after);
        out += cd.avoided ? ",1" : ",0";
        out += "\n";
    }
    csv::write_file(path, out);
}

}  // namespace ratchoice

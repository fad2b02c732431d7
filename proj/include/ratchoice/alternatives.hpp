#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ratchoice/csv.hpp"

namespace ratchoice {

// A choosable option. `cost` is a generic positive measure (travel hours,
// money, ...); `attributes` carries named features for model-backed scoring.
struct Alternative {
    std::string id;
    std::string label;
    double cost = 0.0;
    std::map<std::string, double> attributes;
};

// Finite-by-construction scalar desirability.
class UtilityValue {
public:
    explicit UtilityValue(double v) : v_(v) {
        if (!std::isfinite(v)) throw std::domain_error("utility value is not finite");
    }
    double value() const { return v_; }
    friend bool operator==(UtilityValue a, UtilityValue b) { return a.v_ == b.v_; }
    friend auto operator<=>(UtilityValue a, UtilityValue b) { return a.v_ <=> b.v_; }

private:
    double v_;
};

enum class Preference { StrictlyPreferred, StrictlyDispreferred, Indifferent };

inline constexpr double kIndifferenceEpsilon = 1e-9;

/// 1/cost. Throws std::domain_error for non-positive or non-finite cost.
inline UtilityValue inverse_cost_utility(double cost) {
    if (!std::isfinite(cost) || cost <= 0.0) {
        throw std::domain_error("inverse-cost utility requires a finite positive cost, got " +
                                format_double(cost));
    }
    return UtilityValue(1.0 / cost);
}

// Utility-function handle over alternatives; names the offender on bad cost.
struct InverseCostUtility {
    double operator()(const Alternative& a) const {
        if (!std::isfinite(a.cost) || a.cost <= 0.0) {
            throw std::domain_error("alternative '" + a.id +
                                    "' has invalid cost " + format_double(a.cost));
        }
        return 1.0 / a.cost;
    }
};

struct RankedAlternative {
    Alternative alternative;
    UtilityValue utility;
};

namespace detail {

inline void require_unique_ids(std::span<const Alternative> alts) {
    std::set<std::string> seen;
    for (const auto& a : alts) {
        if (!seen.insert(a.id).second) {
            throw std::invalid_argument("duplicate alternative id '" + a.id + "'");
        }
    }
}

}  // namespace detail

/// Every input once, descending utility, ties broken by ascending id.
template <class UtilityFn>
std::vector<RankedAlternative> rank_alternatives(std::span<const Alternative> alts,
                                                 UtilityFn&& utility) {
    if (alts.empty()) throw std::invalid_argument("cannot rank an empty alternative set");
    detail::require_unique_ids(alts);
    std::vector<RankedAlternative> ranked;
    ranked.reserve(alts.size());
    for (const auto& a : alts) {
        ranked.push_back({a, UtilityValue(static_cast<double>(utility(a)))});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedAlternative& x, const RankedAlternative& y) {
        if (x.utility.value() != y.utility.value()) return x.utility.value() > y.utility.value();
        return x.alternative.id < y.alternative.id;
    });
    return ranked;
}

template <class UtilityFn>
RankedAlternative select_best(std::span<const Alternative> alts, UtilityFn&& utility) {
    return rank_alternatives(alts, std::forward<UtilityFn>(utility)).front();
}

/// |uA-uB| <= epsilon -> Indifferent; uA > uB+epsilon -> StrictlyPreferred.
inline Preference classify_preference(double utility_a, double utility_b,
                                      double epsilon = kIndifferenceEpsilon) {
    if (!std::isfinite(utility_a) || !std::isfinite(utility_b)) {
        throw std::domain_error("preference comparison requires finite utilities");
    }
    if (epsilon < 0.0 || !std::isfinite(epsilon)) {
        throw std::invalid_argument("indifference epsilon must be non-negative and finite");
    }
    if (std::abs(utility_a - utility_b) <= epsilon) return Preference::Indifferent;
    return utility_a > utility_b ? Preference::StrictlyPreferred : Preference::StrictlyDispreferred;
}

// Comparator contract: returns the preference of the first argument over the
// second, or nullopt when the pair cannot be compared.
template <class UtilityFn>
auto make_utility_comparator(UtilityFn utility, double epsilon = kIndifferenceEpsilon) {
    return [utility, epsilon](const Alternative& a, const Alternative& b) -> std::optional<Preference> {
        return classify_preference(static_cast<double>(utility(a)), static_cast<double>(utility(b)),
                                   epsilon);
    };
}

struct IncomparablePair {
    std::string first_id;
    std::string second_id;
};

/// Empty result iff every unordered pair yields a preference.
template <class Comparator>
std::vector<IncomparablePair> check_completeness(std::span<const Alternative> alts,
                                                 Comparator&& compare) {
    std::vector<IncomparablePair> failures;
    for (std::size_t i = 0; i < alts.size(); ++i) {
        for (std::size_t j = i + 1; j < alts.size(); ++j) {
            if (!compare(alts[i], alts[j]).has_value()) {
                failures.push_back({alts[i].id, alts[j].id});
            }
        }
    }
    return failures;
}

struct PreferenceCycle {
    std::array<std::string, 3> ids;
};

// violations: strict cycles (a>b, b>c, not a>c).
// warnings: chains through an indifference that circle back; reported apart
// because transitivity is defined over strict preference only.
struct TransitivityReport {
    std::vector<PreferenceCycle> violations;
    std::vector<PreferenceCycle> warnings;
};

/// Brute force over all ordered triples. Throws if the comparator is
/// incomplete over the set.
template <class Comparator>
TransitivityReport check_transitivity(std::span<const Alternative> alts, Comparator&& compare) {
    const std::size_t n = alts.size();
    // relation[i][j]: preference of alts[i] over alts[j]
    std::vector<std::vector<Preference>> rel(n, std::vector<Preference>(n, Preference::Indifferent));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto p = compare(alts[i], alts[j]);
            if (!p.has_value()) {
                throw std::invalid_argument("comparator incomplete over pair ('" + alts[i].id +
                                            "', '" + alts[j].id + "')");
            }
            rel[i][j] = *p;
        }
    }

    const auto strict = [&](std::size_t i, std::size_t j) {
        return rel[i][j] == Preference::StrictlyPreferred;
    };
    const auto indiff = [&](std::size_t i, std::size_t j) {
        return rel[i][j] == Preference::Indifferent;
    };

    // canonical rotation: lexicographically smallest id first, to report each
    // cycle once rather than per rotation
    std::set<std::array<std::string, 3>> seen_violations;
    std::set<std::array<std::string, 3>> seen_warnings;
    const auto canonical = [&](std::size_t a, std::size_t b, std::size_t c) {
        std::array<std::array<std::string, 3>, 3> rot{{
            {alts[a].id, alts[b].id, alts[c].id},
            {alts[b].id, alts[c].id, alts[a].id},
            {alts[c].id, alts[a].id, alts[b].id},
        }};
        return *std::min_element(rot.begin(), rot.end());
    };

    TransitivityReport report;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                if (a == b || b == c || a == c) continue;
                if (strict(a, b) && strict(b, c) && !strict(a, c)) {
                    if (seen_violations.insert(canonical(a, b, c)).second) {
                        report.violations.push_back({{alts[a].id, alts[b].id, alts[c].id}});
                    }
                } else if (strict(a, b) && indiff(b, c) && strict(c, a)) {
                    if (seen_warnings.insert(canonical(a, b, c)).second) {
                        report.warnings.push_back({{alts[a].id, alts[b].id, alts[c].id}});
                    }
                } else if (indiff(a, b) && indiff(b, c) && strict(a, c)) {
                    if (seen_warnings.insert(canonical(a, b, c)).second) {
                        report.warnings.push_back({{alts[a].id, alts[b].id, alts[c].id}});
                    }
                }
            }
        }
    }
    return report;
}

/// Utility of the best forgone option: second entry of the ranking. Never
/// exceeds the chosen utility; equals it when the top two tie.
template <class UtilityFn>
UtilityValue opportunity_cost(std::span<const Alternative> alts, UtilityFn&& utility) {
    if (alts.size() < 2) {
        throw std::invalid_argument("opportunity cost needs at least 2 alternatives, got " +
                                    std::to_string(alts.size()));
    }
    return rank_alternatives(alts, std::forward<UtilityFn>(utility))[1].utility;
}

inline UtilityValue opportunity_cost(std::span<const RankedAlternative> ranking) {
    if (ranking.size() < 2) {
        throw std::invalid_argument("opportunity cost needs at least 2 alternatives, got " +
                                    std::to_string(ranking.size()));
    }
    return ranking[1].utility;
}

/// Loads `id,label,cost` rows. Header required; empty data section is valid.
inline std::vector<Alternative> load_alternatives_csv(const std::filesystem::path& path) {
    const auto lines = csv::read_lines(path);
    if (lines.empty()) throw std::runtime_error("empty file: " + path.string());
    if (lines[0] != "id,label,cost") {
        throw std::runtime_error("expected header 'id,label,cost', got '" + lines[0] + "'");
    }
    std::vector<Alternative> alts;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = csv::split_line(lines[i]);
        if (fields.size() != 3) {
            throw std::runtime_error("row " + std::to_string(i) + ": expected 3 fields, got " +
                                     std::to_string(fields.size()));
        }
        Alternative a;
        a.id = fields[0];
        a.label = fields[1];
        a.cost = csv::parse_double(fields[2], i, "cost");
        if (!std::isfinite(a.cost) || a.cost <= 0.0) {
            throw std::runtime_error("row " + std::to_string(i) + ": cost must be positive, got " +
                                     fields[2]);
        }
        alts.push_back(std::move(a));
    }
    detail::require_unique_ids(alts);
    return alts;
}

}  // namespace ratchoice

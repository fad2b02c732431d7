#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratchoice/csv.hpp"
#include "ratchoice/rng.hpp"

namespace ratchoice {

// Box constraints; every dimension has finite lo < hi.
struct Bounds {
    struct Dim {
        double lo;
        double hi;
    };
    std::vector<Dim> dims;

    std::size_t size() const { return dims.size(); }

    void validate() const {
        if (dims.empty()) throw std::invalid_argument("bounds must have at least one dimension");
        for (std::size_t i = 0; i < dims.size(); ++i) {
            if (!std::isfinite(dims[i].lo) || !std::isfinite(dims[i].hi) || dims[i].lo >= dims[i].hi) {
                throw std::invalid_argument("bounds dimension " + std::to_string(i) +
                                            " must satisfy finite lo < hi");
            }
        }
    }

    double range(std::size_t i) const { return dims[i].hi - dims[i].lo; }

    void clamp(std::vector<double>& x) const {
        for (std::size_t i = 0; i < dims.size(); ++i) {
            x[i] = std::clamp(x[i], dims[i].lo, dims[i].hi);
        }
    }

    bool contains(std::span<const double> x) const {
        if (x.size() != dims.size()) return false;
        for (std::size_t i = 0; i < dims.size(); ++i) {
            if (x[i] < dims[i].lo || x[i] > dims[i].hi) return false;
        }
        return true;
    }
};

// Minimization result. `trace` holds the incumbent (best-so-far) value per
// iteration and is non-increasing by construction. `bracket_widths` is filled
// by golden_section only: initial width followed by the width after each
// shrink.
struct OptimResult {
    std::vector<double> best_point;
    double best_value = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    std::vector<double> trace;
    std::vector<double> bracket_widths;
};

inline void write_trace_csv(const OptimResult& result, const std::filesystem::path& path) {
    std::string out = "iteration,best_value\n";
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        out += std::to_string(i) + "," + format_double(result.trace[i]) + "\n";
    }
    csv::write_file(path, out);
}

inline constexpr double kInvPhi = 0.6180339887498948482;  // 1/phi == phi-1

/// Golden section search on [lo, hi]. The bracket shrinks by exactly 1/phi
/// per iteration; stops when its width is <= tol or after max_iter
/// iterations, and returns the final bracket midpoint. Correct to tol for
/// unimodal objectives.
template <class F>
OptimResult golden_section(F&& f, double lo, double hi, double tol, int max_iter) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo >= hi) {
        throw std::domain_error("golden_section: invalid bracket [" + format_double(lo) + ", " +
                                format_double(hi) + "]");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("golden_section: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("golden_section: max_iter must be positive");

    OptimResult res;
    res.bracket_widths.push_back(hi - lo);

    // interior points lo < c < d < hi; one new evaluation per iteration
    double c = hi - kInvPhi * (hi - lo);
    double d = lo + kInvPhi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    res.evaluations = 2;
    double incumbent = std::min(fc, fd);

    for (int iter = 0; iter < max_iter && (hi - lo) > tol; ++iter) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kInvPhi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kInvPhi * (hi - lo);
            fd = f(d);
        }
        ++res.evaluations;
        incumbent = std::min(incumbent, std::min(fc, fd));
        res.trace.push_back(incumbent);
        res.bracket_widths.push_back(hi - lo);
    }

    const double mid = 0.5 * (lo + hi);
    res.best_point = {mid};
    res.best_value = f(mid);
    ++res.evaluations;
    return res;
}

struct SaSchedule {
    double t0 = 0.0;  // 0 = estimate from the objective spread over 20 samples
    double alpha = 0.95;
    int steps_per_temp = 20;
    double t_min = 1e-4;
};

inline void validate(const SaSchedule& s) {
    if (!(s.t_min > 0.0) || (s.t0 != 0.0 && !(s.t0 > s.t_min))) {
        throw std::invalid_argument(
            "simulated_annealing: need t0 > t_min > 0 (or t0 = 0 to auto-estimate)");
    }
    if (!(s.alpha > 0.0) || !(s.alpha < 1.0)) {
        throw std::invalid_argument("simulated_annealing: need 0 < alpha < 1");
    }
    if (s.steps_per_temp < 1) {
        throw std::invalid_argument("simulated_annealing: steps_per_temp must be positive");
    }
}

/// Objective spread over a few random in-bounds samples; a usable t0 when
/// nothing better is known. Falls back to 1e-3 for flat objectives.
template <class F>
double estimate_initial_temperature(F&& f, const Bounds& bounds, std::uint64_t seed,
                                    int samples = 20) {
    bounds.validate();
    Rng rng(seed);
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -fmin;
    std::vector<double> x(bounds.size());
    for (int s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < bounds.size(); ++i) {
            x[i] = rng.uniform(bounds.dims[i].lo, bounds.dims[i].hi);
        }
        const double fx = f(std::span<const double>(x));
        fmin = std::min(fmin, fx);
        fmax = std::max(fmax, fx);
    }
    const double spread = fmax - fmin;
    return spread > 0.0 ? spread : 1e-3;
}

/// Metropolis acceptance with geometric cooling. Gaussian proposals scaled to
/// 10% of each dimension's range, clamped to bounds. The incumbent best is
/// tracked separately from the walker and returned. With schedule.t0 == 0 the
/// starting temperature is the objective's spread over 20 seeded samples.
template <class F>
OptimResult simulated_annealing(F&& f, const Bounds& bounds, const SaSchedule& schedule,
                                std::uint64_t seed,
                                std::optional<std::vector<double>> start = std::nullopt) {
    bounds.validate();
    validate(schedule);

    Rng rng(seed);
    const std::size_t n = bounds.size();
    OptimResult res;

    double t0 = schedule.t0;
    if (t0 == 0.0) {
        t0 = estimate_initial_temperature(f, bounds, mix_seed(seed, 0x5a11), 20);
        t0 = std::max(t0, schedule.t_min * 2.0);  // keep at least one cooling level
        res.evaluations += 20;
    }

    std::vector<double> x(n);
    if (start.has_value()) {
        if (start->size() != n) {
            throw std::invalid_argument("simulated_annealing: start point has wrong dimension");
        }
        x = *start;
        bounds.clamp(x);
    } else {
        for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(bounds.dims[i].lo, bounds.dims[i].hi);
    }

    double fx = f(std::span<const double>(x));
    ++res.evaluations;
    res.best_point = x;
    res.best_value = fx;

    std::vector<double> proposal(n);
    for (double t = t0; t > schedule.t_min; t *= schedule.alpha) {
        for (int step = 0; step < schedule.steps_per_temp; ++step) {
            for (std::size_t i = 0; i < n; ++i) {
                proposal[i] = x[i] + rng.normal(0.0, 0.1 * bounds.range(i));
            }
            bounds.clamp(proposal);
            const double fp = f(std::span<const double>(proposal));
            ++res.evaluations;
            const double delta = fp - fx;
            if (delta <= 0.0 || rng.uniform01() < std::exp(-delta / t)) {
                x = proposal;
                fx = fp;
            }
            if (fx < res.best_value) {
                res.best_value = fx;
                res.best_point = x;
            }
            res.trace.push_back(res.best_value);
        }
    }
    return res;
}

struct GaConfig {
    int pop_size = 50;
    int generations = 200;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    double mutation_sigma = 0.1;  // fraction of each dimension's range
    int elitism_count = 2;
    std::uint64_t seed = 0;
};

inline void validate(const GaConfig& c) {
    if (c.pop_size < 2) throw std::invalid_argument("genetic_algorithm: pop_size must be >= 2");
    if (c.generations < 0) throw std::invalid_argument("genetic_algorithm: generations must be >= 0");
    if (c.crossover_rate < 0.0 || c.crossover_rate > 1.0 || c.mutation_rate < 0.0 ||
        c.mutation_rate > 1.0) {
        throw std::invalid_argument("genetic_algorithm: rates must lie in [0, 1]");
    }
    if (c.mutation_sigma < 0.0) {
        throw std::invalid_argument("genetic_algorithm: mutation_sigma must be >= 0");
    }
    if (c.elitism_count < 0 || c.elitism_count > c.pop_size) {
        throw std::invalid_argument("genetic_algorithm: elitism_count must lie in [0, pop_size]");
    }
}

/// Real-coded GA: tournament-2 selection, blend crossover with per-dimension
/// mixing coefficient in [-0.25, 1.25], Gaussian mutation, elitism. Children
/// are clamped to bounds. Returns the best individual ever evaluated.
template <class F>
OptimResult genetic_algorithm(F&& f, const Bounds& bounds, const GaConfig& cfg) {
    bounds.validate();
    validate(cfg);

    Rng rng(cfg.seed);
    const std::size_t n = bounds.size();
    const std::size_t pop_size = static_cast<std::size_t>(cfg.pop_size);

    std::vector<std::vector<double>> pop(pop_size, std::vector<double>(n));
    std::vector<double> fitness(pop_size);
    OptimResult res;

    for (std::size_t p = 0; p < pop_size; ++p) {
        for (std::size_t i = 0; i < n; ++i) {
            pop[p][i] = rng.uniform(bounds.dims[i].lo, bounds.dims[i].hi);
        }
        fitness[p] = f(std::span<const double>(pop[p]));
        ++res.evaluations;
        if (fitness[p] < res.best_value) {
            res.best_value = fitness[p];
            res.best_point = pop[p];
        }
    }

    // index sort by fitness, stable on insertion order for determinism
    std::vector<std::size_t> order(pop_size);
    const auto sort_order = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });
    };

    const auto tournament = [&]() -> std::size_t {
        const std::size_t a = rng.index(pop_size);
        const std::size_t b = rng.index(pop_size);
        return fitness[b] < fitness[a] ? b : a;
    };

    std::vector<std::vector<double>> next;
    std::vector<double> next_fitness;
    for (int gen = 0; gen < cfg.generations; ++gen) {
        sort_order();
        next.clear();
        next_fitness.clear();
        for (int e = 0; e < cfg.elitism_count; ++e) {
            next.push_back(pop[order[static_cast<std::size_t>(e)]]);
            next_fitness.push_back(fitness[order[static_cast<std::size_t>(e)]]);
        }
        while (next.size() < pop_size) {
            const std::size_t p1 = tournament();
            const std::size_t p2 = tournament();
            std::vector<double> child = pop[p1];
            if (rng.uniform01() < cfg.crossover_rate) {
                for (std::size_t i = 0; i < n; ++i) {
                    const double gamma = rng.uniform(-0.25, 1.25);
                    child[i] = pop[p1][i] + gamma * (pop[p2][i] - pop[p1][i]);
                }
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (rng.uniform01() < cfg.mutation_rate) {
                    child[i] += rng.normal(0.0, cfg.mutation_sigma * bounds.range(i));
                }
            }
            bounds.clamp(child);
            const double fc = f(std::span<const double>(child));
            ++res.evaluations;
            next.push_back(std::move(child));
            next_fitness.push_back(fc);
            if (fc < res.best_value) {
                res.best_value = fc;
                res.best_point = next.back();
            }
        }
        pop.swap(next);
        fitness.swap(next_fitness);
        res.trace.push_back(res.best_value);
    }
    return res;
}

struct PsoConfig {
    int swarm_size = 30;
    int iterations = 200;
    double inertia = 0.7;
    double cognitive_coef = 1.5;
    double social_coef = 1.5;
    std::uint64_t seed = 0;
};

inline void validate(const PsoConfig& c) {
    // a 1-particle swarm degenerates to a noisy local walk but is legal;
    // the paired-seed comparison test relies on it
    if (c.swarm_size < 1) throw std::invalid_argument("particle_swarm: swarm_size must be >= 1");
    if (c.iterations < 0) throw std::invalid_argument("particle_swarm: iterations must be >= 0");
    if (c.inertia < 0.0 || c.cognitive_coef < 0.0 || c.social_coef < 0.0) {
        throw std::invalid_argument("particle_swarm: coefficients must be >= 0");
    }
}

/// Canonical PSO: v <- w*v + c1*r1*(pbest-x) + c2*r2*(gbest-x) with
/// per-dimension r1, r2 draws. Positions are clamped to bounds with the
/// velocity zeroed in any clamped dimension. Returns the global best.
template <class F>
OptimResult particle_swarm(F&& f, const Bounds& bounds, const PsoConfig& cfg) {
    bounds.validate();
    validate(cfg);

    Rng rng(cfg.seed);
    const std::size_t n = bounds.size();
    const std::size_t swarm = static_cast<std::size_t>(cfg.swarm_size);

    std::vector<std::vector<double>> x(swarm, std::vector<double>(n));
    std::vector<std::vector<double>> v(swarm, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> pbest(swarm);
    std::vector<double> pbest_val(swarm);

    OptimResult res;
    for (std::size_t p = 0; p < swarm; ++p) {
        for (std::size_t i = 0; i < n; ++i) {
            x[p][i] = rng.uniform(bounds.dims[i].lo, bounds.dims[i].hi);
        }
        pbest[p] = x[p];
        pbest_val[p] = f(std::span<const double>(x[p]));
        ++res.evaluations;
        if (pbest_val[p] < res.best_value) {
            res.best_value = pbest_val[p];
            res.best_point = x[p];
        }
    }

    for (int iter = 0; iter < cfg.iterations; ++iter) {
        for (std::size_t p = 0; p < swarm; ++p) {
            for (std::size_t i = 0; i < n; ++i) {
                const double r1 = rng.uniform01();
                const double r2 = rng.uniform01();
                v[p][i] = cfg.inertia * v[p][i] +
                          cfg.cognitive_coef * r1 * (pbest[p][i] - x[p][i]) +
                          cfg.social_coef * r2 * (res.best_point[i] - x[p][i]);
                x[p][i] += v[p][i];
                if (x[p][i] < bounds.dims[i].lo) {
                    x[p][i] = bounds.dims[i].lo;
                    v[p][i] = 0.0;
                } else if (x[p][i] > bounds.dims[i].hi) {
                    x[p][i] = bounds.dims[i].hi;
                    v[p][i] = 0.0;
                }
            }
            const double fx = f(std::span<const double>(x[p]));
            ++res.evaluations;
            if (fx < pbest_val[p]) {
                pbest_val[p] = fx;
                pbest[p] = x[p];
            }
            if (fx < res.best_value) {
                res.best_value = fx;
                res.best_point = x[p];
            }
        }
        res.trace.push_back(res.best_value);
    }
    return res;
}

}  // namespace ratchoice

// Runs all four optimizers against the same bumpy 2-D objective (1-D slice
// for golden section search) and prints where each lands. A quick feel for
// the library's minimization interface.

#include <cmath>
#include <cstdio>
#include <span>

#include "ratchoice/optimizers.hpp"

using namespace ratchoice;

// Shifted two-dimensional multimodal bowl: global minimum 0 at (1.5, -0.5),
// cosine ripples make plenty of local minima.
static double ripple_bowl(std::span<const double> x) {
    const double a = x[0] - 1.5;
    const double b = x[1] + 0.5;
    return a * a + b * b + 2.0 * (2.0 - std::cos(3.0 * a) - std::cos(3.0 * b));
}

int main() {
    const Bounds box{{{-6.0, 6.0}, {-6.0, 6.0}}};

    // 1-D slice through the optimum, for the univariate method
    auto slice = [](double v) {
        const double point[2] = {v, -0.5};
        return ripple_bowl(point);
    };
    const auto gss = golden_section(slice, -6.0, 6.0, 1e-8, 200);
    std::printf("golden section   : x=%.6f  value=%.6f  (%zu evaluations)\n",
                gss.best_point[0], gss.best_value, gss.evaluations);

    SaSchedule schedule;
    const auto sa = simulated_annealing(ripple_bowl, box, schedule, /*seed=*/7);
    std::printf("annealing        : x=(%.6f, %.6f)  value=%.6f\n", sa.best_point[0],
                sa.best_point[1], sa.best_value);

    GaConfig ga_cfg;
    ga_cfg.seed = 7;
    const auto ga = genetic_algorithm(ripple_bowl, box, ga_cfg);
    std::printf("genetic algorithm: x=(%.6f, %.6f)  value=%.6f\n", ga.best_point[0],
                ga.best_point[1], ga.best_value);

    PsoConfig pso_cfg;
    pso_cfg.seed = 7;
    const auto pso = particle_swarm(ripple_bowl, box, pso_cfg);
    std::printf("particle swarm   : x=(%.6f, %.6f)  value=%.6f\n", pso.best_point[0],
                pso.best_point[1], pso.best_value);
    return 0;
}

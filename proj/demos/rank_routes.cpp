// Ranks the four Johannesburg-to-New-York flight routes by inverse-cost
// utility (cost = travel time in hours) and prints the choice a rational
// traveler makes, plus what the runner-up would have been worth.

#include <cstdio>
#include <span>

#include "ratchoice/alternatives.hpp"

using namespace ratchoice;

int main(int argc, char** argv) {
    const char* path = argc > 1 ? argv[1] : "data/routes.csv";
    const auto routes = load_alternatives_csv(path);
    const auto ranking = rank_alternatives(routes, InverseCostUtility{});

    std::printf("%-12s %8s %12s\n", "route", "hours", "utility");
    for (const auto& entry : ranking) {
        std::printf("%-12s %8s %12s\n", entry.alternative.label.c_str(),
                    format_double(entry.alternative.cost).c_str(),
                    format_double(entry.utility.value()).c_str());
    }
    std::printf("\nchoose: %s\n", ranking.front().alternative.label.c_str());
    std::printf("opportunity cost (best forgone): %s\n",
                format_double(opportunity_cost(ranking).value()).c_str());
    return 0;
}

#pragma once

#include <vector>

#include "rss/taskmap.hpp"

namespace rss {

// Per-destination chute budgets: U_j = max(1, delta * M * v_j / sum(v)),
// one entry per destination including recirculation. The effective integer
// cap is floor(U_j).
std::vector<double> compute_upper_bounds(const std::vector<double>& volumes,
                                         int chute_total, double delta);

// Assignment-repair instance: chute count, destination caps, and the input
// assignment the repaired one should stay close to.
struct RepairProblem {
    int chute_total = 0;
    int dest_total = 0;              // N+1, recirculation included
    std::vector<double> upper_bounds;  // real-valued U_j
    std::vector<int> caps;             // floor(U_j)

    // Throws std::runtime_error when sum(floor(U_j)) < M (suggesting a
    // larger delta) or when there are more destinations than chutes.
    static RepairProblem build(const std::vector<double>& volumes_with_recirc,
                               int chute_total, double delta);
};

struct RepairOutcome {
    TaskMapping mapping;
    int changed_chutes = 0;
    std::vector<int> counts_before;  // chutes per destination, index dest_id-1
    std::vector<int> counts_after;
};

// Finds the valid mapping (every destination in [1, cap_j] chutes, every
// chute exactly one destination) that changes the fewest chutes of the
// input. Solved as min-cost flow on the chute/destination bipartite graph;
// the constraint matrix is totally unimodular, so the flow optimum is the
// exact integer optimum. Deterministic: equal-cost optima resolve by chute
// id, then destination id.
RepairOutcome repair(const TaskMapping& input, const RepairProblem& problem);

// Convenience wrapper building the problem from a profile.
RepairOutcome repair(const TaskMapping& input, const DestinationProfile& profile,
                     double delta = 1.5);

}  // namespace rss

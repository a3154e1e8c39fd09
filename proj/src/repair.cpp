#include "rss/repair.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace rss {

std::vector<double> compute_upper_bounds(const std::vector<double>& volumes,
                                         int chute_total, double delta) {
    if (delta <= 0) throw std::runtime_error("delta must be positive");
    double total = 0.0;
    for (double v : volumes) {
        if (v <= 0) throw std::runtime_error("volumes must be positive");
        total += v;
    }
    std::vector<double> bounds(volumes.size());
    for (size_t j = 0; j < volumes.size(); ++j) {
        bounds[j] = std::max(1.0, delta * chute_total * volumes[j] / total);
    }
    return bounds;
}

RepairProblem RepairProblem::build(const std::vector<double>& volumes_with_recirc,
                                   int chute_total, double delta) {
    RepairProblem p;
    p.chute_total = chute_total;
    p.dest_total = int(volumes_with_recirc.size());
    if (p.dest_total > chute_total) {
        throw std::domain_error("more destinations than chutes (" +
                                std::to_string(p.dest_total) + " > " +
                                std::to_string(chute_total) + ")");
    }
    p.upper_bounds = compute_upper_bounds(volumes_with_recirc, chute_total, delta);
    p.caps.resize(p.dest_total);
    long long cap_sum = 0;
    for (int j = 0; j < p.dest_total; ++j) {
        p.caps[j] = int(std::floor(p.upper_bounds[j]));
        cap_sum += p.caps[j];
    }
    if (cap_sum < chute_total) {
        throw std::domain_error(
            "infeasible repair bounds: caps sum to " + std::to_string(cap_sum) +
            " for " + std::to_string(chute_total) +
            " chutes; increase delta (currently " + std::to_string(delta) + ")");
    }
    return p;
}

namespace {

// Successive-shortest-path min-cost flow. Costs stay integral and the
// network is acyclic, so SPFA per augmentation is exact.
struct MinCostFlow {
    struct Arc {
        int to;
        int cap;
        long long cost;
        int rev;  // index of reverse arc in graph[to]
    };

    std::vector<std::vector<Arc>> graph;

    explicit MinCostFlow(int nodes) : graph(nodes) {}

    void add_arc(int from, int to, int cap, long long cost) {
        graph[from].push_back({to, cap, cost, int(graph[to].size())});
        graph[to].push_back({from, 0, -cost, int(graph[from].size()) - 1});
    }

    // Sends up to max_flow units; returns (flow, cost).
    std::pair<int, long long> run(int source, int sink, int max_flow) {
        int flow = 0;
        long long cost = 0;
        const long long inf = std::numeric_limits<long long>::max();
        const int n = int(graph.size());
        std::vector<long long> dist(n);
        std::vector<int> prev_node(n), prev_arc(n);
        std::vector<char> in_queue(n);
        while (flow < max_flow) {
            std::fill(dist.begin(), dist.end(), inf);
            std::fill(in_queue.begin(), in_queue.end(), 0);
            dist[source] = 0;
            std::deque<int> queue{source};
            in_queue[source] = 1;
            while (!queue.empty()) {
                const int u = queue.front();
                queue.pop_front();
                in_queue[u] = 0;
                for (int k = 0; k < int(graph[u].size()); ++k) {
                    const Arc& a = graph[u][k];
                    if (a.cap > 0 && dist[u] + a.cost < dist[a.to]) {
                        dist[a.to] = dist[u] + a.cost;
                        prev_node[a.to] = u;
                        prev_arc[a.to] = k;
                        if (!in_queue[a.to]) {
                            queue.push_back(a.to);
                            in_queue[a.to] = 1;
                        }
                    }
                }
            }
            if (dist[sink] == inf) break;
            int push = max_flow - flow;
            for (int v = sink; v != source; v = prev_node[v]) {
                push = std::min(push, graph[prev_node[v]][prev_arc[v]].cap);
            }
            for (int v = sink; v != source; v = prev_node[v]) {
                Arc& a = graph[prev_node[v]][prev_arc[v]];
                a.cap -= push;
                graph[a.to][a.rev].cap += push;
            }
            flow += push;
            cost += dist[sink] * push;
        }
        return {flow, cost};
    }
};

}  // namespace

RepairOutcome repair(const TaskMapping& input, const RepairProblem& problem) {
    const int m = problem.chute_total;
    const int n_total = problem.dest_total;
    if (input.chute_count() != m || input.n_destinations + 1 != n_total) {
        throw std::runtime_error("repair problem does not match mapping shape");
    }

    RepairOutcome out;
    out.counts_before.assign(n_total, 0);
    for (int chute = 1; chute <= m; ++chute) {
        const int d = input.dest_of(chute);
        if (d < 1 || d > n_total) {
            throw std::runtime_error("mapping has out-of-range destination");
        }
        ++out.counts_before[d - 1];
    }

    // Cost-0 solution exists iff the input already satisfies the bounds.
    bool feasible_as_is = true;
    for (int j = 0; j < n_total; ++j) {
        if (out.counts_before[j] < 1 || out.counts_before[j] > problem.caps[j]) {
            feasible_as_is = false;
            break;
        }
    }
    if (feasible_as_is) {
        out.mapping = input;
        out.counts_after = out.counts_before;
        out.changed_chutes = 0;
        return out;
    }

    // Nodes: source, chute_1..chute_M, dest_1..dest_N+1, sink.
    // Keeping a chute on its input destination costs 0, moving it costs 1.
    // Each destination must absorb at least one chute; that floor is
    // encoded as a strongly negative-cost first unit so every min-cost
    // solution uses it.
    const int source = 0;
    const int sink = 1 + m + n_total;
    const auto chute_node = [](int chute_id) { return chute_id; };
    const auto dest_node = [m](int dest_id) { return m + dest_id; };
    const long long mandatory = -(static_cast<long long>(m) + 1);

    MinCostFlow flow(sink + 1);
    for (int chute = 1; chute <= m; ++chute) {
        flow.add_arc(source, chute_node(chute), 1, 0);
        for (int d = 1; d <= n_total; ++d) {
            flow.add_arc(chute_node(chute), dest_node(d), 1,
                         input.dest_of(chute) == d ? 0 : 1);
        }
    }
    for (int d = 1; d <= n_total; ++d) {
        flow.add_arc(dest_node(d), sink, 1, mandatory);
        if (problem.caps[d - 1] > 1) {
            flow.add_arc(dest_node(d), sink, problem.caps[d - 1] - 1, 0);
        }
    }

    const auto [sent, cost] = flow.run(source, sink, m);
    (void)cost;
    if (sent != m) {
        throw std::runtime_error("repair flow infeasible");  // guarded by build()
    }

    out.mapping = input;
    out.changed_chutes = 0;
    for (int chute = 1; chute <= m; ++chute) {
        int assigned = 0;
        for (const auto& arc : flow.graph[chute_node(chute)]) {
            // Saturated forward arc into a destination node.
            if (arc.to > m && arc.to < sink && arc.cap == 0 && arc.cost >= 0) {
                assigned = arc.to - m;
                break;
            }
        }
        if (assigned == 0) throw std::runtime_error("repair flow left a chute unassigned");
        if (assigned != input.dest_of(chute)) ++out.changed_chutes;
        out.mapping.set(chute, assigned);
    }

    out.counts_after.assign(n_total, 0);
    for (int chute = 1; chute <= m; ++chute) ++out.counts_after[out.mapping.dest_of(chute) - 1];
    return out;
}

RepairOutcome repair(const TaskMapping& input, const DestinationProfile& profile,
                     double delta) {
    return repair(input, RepairProblem::build(profile.volumes_with_recirc(),
                                              input.chute_count(), delta));
}

}  // namespace rss

// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. Expected values come from exact small-instance oracles, statistical
// checks of the stochastic models, and directional desk-scale comparisons.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <unistd.h>
#include <vector>

#include "oracles.hpp"
#include "rss/cli.hpp"
#include "rss/manifest.hpp"
#include "rss/optimizer.hpp"

using namespace rss;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void report(int number, const char* name, bool ok, const std::string& detail) {
    std::printf("%s  %2d. %-38s %s\n", ok ? "PASS" : "FAIL", number, name,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), pattern, args...);
    return buf;
}

Floorplan benchmark_map_20() {
    MapGenParams p;
    p.width = 20;
    p.height = 20;
    p.chute_block_rows = 2;
    p.chute_block_cols = 2;
    p.workstation_count = 6;
    return generate_map(p);
}

TaskMapping spread_mapping(const Floorplan& fp, int n_destinations) {
    TaskMapping m;
    m.n_destinations = n_destinations;
    m.dest_of_chute.resize(fp.chute_count());
    for (int c = 0; c < fp.chute_count(); ++c) {
        m.dest_of_chute[c] = c % (n_destinations + 1) + 1;
    }
    return m;
}

// --- 1. repair optimality ----------------------------------------------------

void criterion_repair_optimality() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(10001);
    int agree = 0;
    const int instances = 100;
    for (int i = 0; i < instances;) {
        const int n = 2 + int(uniform_below(rng, 2));                // 2..3
        const int m = n + int(uniform_below(rng, uint64_t(8 - n)));  // ..7
        std::vector<double> volumes(n);
        for (double& v : volumes) v = 0.05 + uniform01(rng);
        RepairProblem problem;
        try {
            problem = RepairProblem::build(volumes, m, 1.5);
        } catch (const std::domain_error&) {
            continue;
        }
        std::vector<int> dests(m);
        for (int& d : dests) d = uniform_int(rng, 1, n);
        TaskMapping input;
        input.n_destinations = n - 1;
        input.dest_of_chute = dests;

        const RepairOutcome out = repair(input, problem);
        const int reference = oracle::exhaustive_repair_cost(dests, problem.caps);
        bool ok = out.changed_chutes == reference && validate(out.mapping).empty();
        for (int j = 0; j < n; ++j) {
            ok = ok && out.counts_after[j] >= 1 &&
                 out.counts_after[j] <= problem.caps[j];
        }
        if (ok) ++agree;
        ++i;
    }
    const double elapsed = seconds_since(start);
    report(1, "repair matches exhaustive optimum",
           agree == instances && elapsed < 60,
           fmt("%d/%d instances, %.2fs", agree, instances, elapsed));
}

// --- 2. coordination safety ---------------------------------------------------

void criterion_pibt_safety() {
    const auto start = std::chrono::steady_clock::now();
    const Floorplan fp = benchmark_map_20();
    const NavCache nav(fp);
    const DestinationProfile profile = make_profile(12);
    const TaskMapping mapping = spread_mapping(fp, 12);

    int vertex = 0, edge = 0, illegal = 0, collisions = 0;
    const int runs = 100;
    for (int r = 0; r < runs; ++r) {
        SimConfig cfg;
        cfg.robot_count = 50;
        cfg.horizon = 500;
        cfg.seed = 20000 + uint64_t(r);
        cfg.record_events = true;
        const SimResult res = run(fp, nav, mapping, profile, cfg);
        collisions += res.collision_count;
        const auto scan =
            oracle::scan_conflicts(fp, res.events, cfg.robot_count, cfg.horizon);
        vertex += scan.vertex_conflicts;
        edge += scan.edge_conflicts;
        illegal += scan.illegal_moves;
    }
    const double elapsed = seconds_since(start);
    report(2, "coordination is collision-free",
           vertex == 0 && edge == 0 && illegal == 0 && collisions == 0 &&
               elapsed < 120,
           fmt("%d runs: %d vertex, %d edge, %d illegal, %.1fs", runs, vertex,
               edge, illegal, elapsed));
}

// --- 3. chute closure model ---------------------------------------------------

void criterion_chute_closure() {
    SimConfig cfg;  // defaults: 2x^2 + 50, extra mean 100, capacity 50

    const bool exact_zero = closed_duration_given(0.0, cfg, 0.0) == 50;
    const bool exact_point7 = closed_duration_given(5.0, cfg, 0.7) == 100;

    Rng rng(30003);
    double total = 0.0;
    const int samples = 100000;
    for (int i = 0; i < samples; ++i) total += closed_duration(3.0, cfg, rng);
    const double mean = total / samples;
    const bool mean_ok = std::abs(mean - 167.5) <= 1.0;

    // Every closure in a live simulation follows exactly 50 drops.
    const Floorplan fp = benchmark_map_20();
    const DestinationProfile profile = make_profile(12);
    const TaskMapping mapping = spread_mapping(fp, 12);
    SimConfig sim;
    sim.robot_count = 60;
    sim.horizon = 2500;
    sim.seed = 33;
    sim.record_events = true;
    const SimResult res = run(fp, mapping, profile, sim);
    std::vector<int> since_open(fp.chute_count() + 1, 0);
    int closures = 0;
    bool drops_exact = true;
    for (const Event& e : res.events) {
        if (e.kind == EventKind::DropSorted) ++since_open[e.chute];
        if (e.kind == EventKind::ChuteClose) {
            drops_exact = drops_exact && since_open[e.chute] == sim.chute_capacity;
            since_open[e.chute] = 0;
            ++closures;
        }
    }
    const bool ok =
        exact_zero && exact_point7 && mean_ok && drops_exact && closures > 0;
    report(3, "chute closure timing model", ok,
           fmt("mean %.2f (target 167.5 +- 1.0), %d closures, 50-drop rule %s",
               mean, closures, drops_exact ? "held" : "violated"));
}

// --- 4. destination distribution ----------------------------------------------

void criterion_destination_distribution() {
    const DestinationProfile profile = make_profile(10);
    Rng rng(40004);
    const int draws = 1000000;
    std::vector<int> counts(10, 0);
    for (int i = 0; i < draws; ++i) ++counts[sample_destination(profile, rng) - 1];

    const double top = double(counts[0]) / draws;
    const bool top_ok = std::abs(top - 0.700) <= 0.005;

    double chi2 = 0.0;
    for (int d = 0; d < 10; ++d) {
        const double expected = profile.volumes[d] * draws;
        chi2 += (counts[d] - expected) * (counts[d] - expected) / expected;
    }
    // chi-square 99th percentile, 9 degrees of freedom
    const double critical = 21.666;
    report(4, "7:2:1 destination sampling", top_ok && chi2 < critical,
           fmt("top %.4f (0.700 +- 0.005), chi2 %.2f < %.3f", top, chi2, critical));
}

// --- 5. mutation distribution ---------------------------------------------------

void criterion_mutation() {
    Rng rng(50005);
    const int draws = 100000;
    int k1 = 0, k2 = 0;
    for (int i = 0; i < draws; ++i) {
        const int k = mutation_count(rng, 1000);
        if (k == 1) ++k1;
        if (k == 2) ++k2;
    }
    const double p1 = double(k1) / draws;
    const double p2 = double(k2) / draws;

    const Floorplan fp = benchmark_map_20();
    const DestinationProfile profile = make_profile(12);
    TaskMapping current = init_cluster(fp, profile);
    int valid = 0;
    const int trials = 10000;
    Rng mut_rng(50505);
    for (int i = 0; i < trials; ++i) {
        const TaskMapping mutant = mutate(current, mut_rng);
        const RepairOutcome fixed = repair(mutant, profile, 1.5);
        if (validate(fixed.mapping).empty()) ++valid;
        current = fixed.mapping;
    }
    const bool ok = std::abs(p1 - 0.50) <= 0.01 && std::abs(p2 - 0.25) <= 0.01 &&
                    valid == trials;
    report(5, "geometric mutation + repair validity", ok,
           fmt("P(k=1)=%.3f, P(k=2)=%.3f, %d/%d valid", p1, p2, valid, trials));
}

// --- 6. initializer fixtures ---------------------------------------------------

void criterion_initializers() {
    const std::vector<int> min_dist_trace =
        min_dist_assign(4, std::vector<double>{3.0, 1.0});
    const bool trace1 = min_dist_trace == std::vector<int>{1, 1, 1, 2};

    const std::vector<Coord> coords = {{0, 0}, {0, 1}, {5, 0}, {5, 1}};
    const std::vector<int> cluster_trace =
        cluster_assign(coords, std::vector<double>{1.0, 1.0});
    const bool trace2 = cluster_trace == std::vector<int>{1, 1, 1, 2};

    Rng rng(60006);
    int valid_pairs = 0;
    const int pairs = 100;
    for (int i = 0; i < pairs;) {
        MapGenParams p;
        p.width = 18 + int(uniform_below(rng, 20));
        p.height = 12 + int(uniform_below(rng, 12));
        p.chute_block_rows = 1 + int(uniform_below(rng, 2));
        p.chute_block_cols = 1 + int(uniform_below(rng, 3));
        p.workstation_count = 2 + int(uniform_below(rng, 6));
        std::optional<Floorplan> fp;
        try {
            fp = generate_map(p);
        } catch (const std::domain_error&) {
            continue;
        }
        const int n = 2 + int(uniform_below(
                              rng, uint64_t(std::min(24, fp->chute_count() - 2))));
        const DestinationProfile profile = make_profile(n);
        if (validate(init_min_dist(*fp, profile)).empty() &&
            validate(init_cluster(*fp, profile)).empty()) {
            ++valid_pairs;
        }
        ++i;
    }
    report(6, "greedy initializer fixtures",
           trace1 && trace2 && valid_pairs == pairs,
           fmt("hand traces %s, %d/%d random pairs valid",
               trace1 && trace2 ? "exact" : "WRONG", valid_pairs, pairs));
}

// --- 7. desk-scale directional reproduction -------------------------------------

void criterion_desk_scale() {
    const auto start = std::chrono::steady_clock::now();

    // Dense floor: the 33x57 class with about a hundred chutes.
    MapGenParams dense;
    dense.width = 57;
    dense.height = 33;
    dense.chute_block_rows = 1;
    dense.chute_block_cols = 1;
    dense.workstation_count = 20;
    const Floorplan fp = generate_map(dense);
    const DestinationProfile profile = make_profile(41);

    EAConfig cfg;
    cfg.sim.robot_count = 150;
    cfg.sim.horizon = 1000;
    cfg.total_evaluations = 500;
    cfg.population = 20;
    cfg.replicates = 2;
    cfg.greedy_init = true;
    cfg.workers = 1;

    int wins = 0;
    double best_gain = 0.0;
    for (uint64_t seed = 1; seed <= 3; ++seed) {
        cfg.seed = seed;
        const EAResult result = ea_run(fp, profile, cfg);
        const double base =
            std::max(*result.min_dist_objective, *result.cluster_objective);
        if (result.best.objective >= base) ++wins;
        best_gain = std::max(best_gain, result.best.objective - base);
        g_notes.push_back(
            fmt("  seed %llu: EA best %.4f vs min-dist %.4f, cluster %.4f",
                (unsigned long long)seed, result.best.objective,
                *result.min_dist_objective, *result.cluster_objective));
    }

    // Sparse floor: fewer chutes, wider corridors; cluster placement should
    // beat nearest-workstation placement because closures dominate.
    MapGenParams sparse_params;
    sparse_params.width = 57;
    sparse_params.height = 33;
    sparse_params.chute_block_rows = 1;
    sparse_params.chute_block_cols = 1;
    sparse_params.corridor_x = 2;
    sparse_params.corridor_y = 2;
    sparse_params.workstation_count = 20;
    const Floorplan sparse = generate_map(sparse_params);
    const DestinationProfile sparse_profile =
        make_profile(std::max(2, sparse.chute_count() * 2 / 5));
    const NavCache sparse_nav(sparse);

    const TaskMapping by_cluster = init_cluster(sparse, sparse_profile);
    const TaskMapping by_min_dist = init_min_dist(sparse, sparse_profile);
    double cluster_mean = 0.0, min_dist_mean = 0.0;
    const int reps = 10;
    for (int r = 0; r < reps; ++r) {
        SimConfig sim;
        sim.robot_count = 200;
        sim.horizon = 2000;
        sim.seed = 7000 + uint64_t(r);
        cluster_mean +=
            run(sparse, sparse_nav, by_cluster, sparse_profile, sim).throughput;
        min_dist_mean +=
            run(sparse, sparse_nav, by_min_dist, sparse_profile, sim).throughput;
    }
    cluster_mean /= reps;
    min_dist_mean /= reps;

    const double elapsed = seconds_since(start);
    const bool ok = wins == 3 && cluster_mean > min_dist_mean && elapsed < 1800;
    report(7, "desk-scale qualitative ordering", ok,
           fmt("EA >= greedy on %d/3 seeds (best gain %.3f); sparse cluster %.3f "
               "> min-dist %.3f; %.0fs",
               wins, best_gain, cluster_mean, min_dist_mean, elapsed));
}

// --- 8. MAP-Elites properties ----------------------------------------------------

void criterion_map_elites() {
    const Floorplan fp = benchmark_map_20();
    const DestinationProfile profile = make_profile(12);

    QDConfig cfg;
    cfg.ea.sim.robot_count = 30;
    cfg.ea.sim.horizon = 300;
    cfg.ea.total_evaluations = 2000;
    cfg.ea.population = 20;
    cfg.ea.replicates = 1;
    cfg.ea.seed = 808;
    cfg.ea.workers = 1;
    cfg.res_amdw = 25;
    cfg.res_acd = 25;

    const QDResult result = map_elites_run(fp, profile, cfg);
    bool monotone = true;
    for (size_t i = 1; i < result.qd_history.size(); ++i) {
        monotone =
            monotone && result.qd_history[i] >= result.qd_history[i - 1] - 1e-12;
    }

    const Archive& archive = result.archive;
    const DistanceField wf = distance_field(fp, fp.workstations());
    bool rebin_ok = true;
    int occupied = 0;
    for (int ax = 0; ax < archive.res_amdw; ++ax) {
        for (int ay = 0; ay < archive.res_acd; ++ay) {
            const auto& cell = archive.cells[ax * archive.res_acd + ay];
            if (!cell) continue;
            ++occupied;
            const double amdw = measure_amdw(cell->mapping, profile, fp, wf);
            const double acd = measure_acd(cell->mapping, profile, fp);
            rebin_ok = rebin_ok && archive.amdw_bin(amdw) == ax &&
                       archive.acd_bin(acd) == ay;
        }
    }
    const bool ok =
        monotone && rebin_ok && occupied <= 625 && result.evaluations == 2000;
    report(8, "archive bookkeeping", ok,
           fmt("QD score %.3f %s over %zu batches, %d cells re-bin %s",
               archive.qd_score(), monotone ? "non-decreasing" : "DECREASED",
               result.qd_history.size(), occupied, rebin_ok ? "ok" : "WRONG"));
}

// --- 9. determinism ---------------------------------------------------------------

namespace fs = std::filesystem;

void criterion_determinism() {
    const fs::path root =
        fs::temp_directory_path() / ("rss_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(root);
    const std::string map_path = (root / "floor.map").string();
    const std::string profile_path = (root / "profile.json").string();

    bool ok = cli::run({"gen-map", "--width", "24", "--height", "16",
                        "--block-rows", "2", "--block-cols", "2",
                        "--workstations", "6", "--n-dest", "6", "--out", map_path,
                        "--profile-out", profile_path, "--seed", "1"}) == 0;
    ok = ok && cli::run({"optimize", "--map", map_path, "--profile", profile_path,
                         "--baseline", "cluster", "--seed", "1", "--out-dir",
                         (root / "base").string()}) == 0;
    const std::string mapping = (root / "base" / "cluster.map").string();

    for (const char* name : {"e1", "e2"}) {
        ok = ok && cli::run({"evaluate", "--map", map_path, "--mapping", mapping,
                             "--profile", profile_path, "--robots", "8",
                             "--horizon", "200", "--replicates", "3", "--seed",
                             "17", "--out-dir", (root / name).string()}) == 0;
    }
    const bool eval_same =
        ok && read_file((root / "e1" / "result.json").string()) ==
                  read_file((root / "e2" / "result.json").string()) &&
        read_file((root / "e1" / "result.csv").string()) ==
            read_file((root / "e2" / "result.csv").string());

    for (const auto& [dir, workers] : std::vector<std::pair<std::string, const char*>>{
             {"w1", "1"}, {"w8", "8"}}) {
        ok = ok && cli::run({"optimize", "--map", map_path, "--profile",
                             profile_path, "--robots", "8", "--horizon", "150",
                             "--n-eval", "60", "--lambda", "10", "--n-e", "2",
                             "--seed", "23", "--greedy-init", "--workers", workers,
                             "--out-dir", (root / dir).string()}) == 0;
    }
    const bool worker_same =
        ok && read_file((root / "w1" / "best.map").string()) ==
                  read_file((root / "w8" / "best.map").string()) &&
        read_file((root / "w1" / "history.csv").string()) ==
            read_file((root / "w8" / "history.csv").string()) &&
        read_file((root / "w1" / "summary.json").string()) ==
            read_file((root / "w8" / "summary.json").string());

    fs::remove_all(root);
    report(9, "byte-identical reruns", ok && eval_same && worker_same,
           fmt("evaluate rerun %s, workers 1 vs 8 %s",
               eval_same ? "identical" : "DIFFERS",
               worker_same ? "identical" : "DIFFERS"));
}

// --- 10. single-robot throughput oracle ---------------------------------------------

void criterion_single_robot() {
    const Floorplan fp = Floorplan::parse(
        "5 12\n"
        "@@@@@@@@@@@@\n"
        "@eceeeeeeec@\n"
        "@weeeeeeeee@\n"
        "@eeeeeeeeec@\n"
        "@@@@@@@@@@@@\n");
    TaskMapping mapping;
    mapping.n_destinations = 2;
    mapping.dest_of_chute = {3, 1, 2};
    SimConfig cfg;
    cfg.robot_count = 1;
    cfg.horizon = 1000;
    cfg.chute_capacity = 1000;  // drops stay far below capacity
    cfg.seed = 12;
    const SimResult res = run(fp, mapping, make_profile(2), cfg);

    // Both destinations' endpoints sit 9 steps out; pickup and drop each
    // take the arrival step, so drops land at t = 10, 28, 46, ...
    const int expected = (cfg.horizon - 10) / 18 + 1;
    const bool ok = std::llabs(res.sorted_count - expected) <= 1 &&
                    res.recirculated_count == 0 && res.collision_count == 0;
    report(10, "single-robot cycle count", ok,
           fmt("sorted %lld, closed form %d (+-1)", (long long)res.sorted_count,
               expected));
}

}  // namespace

int main() {
    std::printf("sortation task-mapping acceptance suite\n");
    std::printf("----------------------------------------\n");
    const auto start = std::chrono::steady_clock::now();

    criterion_repair_optimality();
    criterion_pibt_safety();
    criterion_chute_closure();
    criterion_destination_distribution();
    criterion_mutation();
    criterion_initializers();
    criterion_desk_scale();
    criterion_map_elites();
    criterion_determinism();
    criterion_single_robot();

    std::printf("----------------------------------------\n");
    for (const std::string& note : g_notes) std::printf("%s\n", note.c_str());
    std::printf("%d of 10 criteria passed in %.0fs\n", 10 - g_failures,
                seconds_since(start));
    return g_failures == 0 ? 0 : 1;
}

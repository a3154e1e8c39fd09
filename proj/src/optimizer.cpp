#include "rss/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace rss {

namespace {

// Stream tags so every random decision has its own derived seed.
constexpr uint64_t kInitStream = 0x494e4954;  // sampled initial mappings
constexpr uint64_t kMutStream = 0x4d555441;   // mutations
constexpr uint64_t kEvalStream = 0x4556414c;  // evaluation replicates
constexpr uint64_t kParentStream = 0x50415253;

void parallel_for(int tasks, int workers, const std::function<void(int)>& fn) {
    workers = std::max(1, std::min(workers, tasks));
    if (workers == 1) {
        for (int i = 0; i < tasks; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < tasks; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

RankedVolumes ranked_volumes(const DestinationProfile& profile) {
    RankedVolumes rv;
    const std::vector<double> all = profile.volumes_with_recirc();
    rv.dest_ids.resize(all.size());
    std::iota(rv.dest_ids.begin(), rv.dest_ids.end(), 1);
    std::stable_sort(rv.dest_ids.begin(), rv.dest_ids.end(), [&](int a, int b) {
        return all[a - 1] > all[b - 1];
    });
    rv.volumes.reserve(all.size());
    for (int id : rv.dest_ids) rv.volumes.push_back(all[id - 1]);
    return rv;
}

std::vector<int> min_dist_assign(int chute_total, std::span<const double> volumes_desc) {
    const int n = int(volumes_desc.size());
    if (n > chute_total) throw std::runtime_error("more destinations than chutes");
    double total = 0.0;
    for (double v : volumes_desc) total += v;

    std::vector<int> assignment(chute_total, 0);
    int i = 1;  // next chute slot, 1-based
    for (int k = 1; k <= n; ++k) {
        const int quota = int(std::floor(volumes_desc[k - 1] / total * chute_total)) + 1;
        int taken = 0;
        while (taken < quota && chute_total - i + 1 > n - k) {
            assignment[i - 1] = k;
            ++i;
            ++taken;
        }
    }
    if (i <= chute_total) throw std::runtime_error("greedy pass left chutes unassigned");
    return assignment;
}

std::vector<int> cluster_assign(std::span<const Coord> chute_coords,
                                std::span<const double> volumes_desc) {
    const int m = int(chute_coords.size());
    const int n = int(volumes_desc.size());
    if (n > m) throw std::runtime_error("more destinations than chutes");
    double total = 0.0;
    for (double v : volumes_desc) total += v;

    std::vector<int> assignment(m, 0);
    std::vector<std::pair<double, double>> centroids;
    std::vector<int> members;  // chute indices of the destination being grown
    int remaining = m;

    for (int k = 1; k <= n; ++k) {
        const int quota = int(std::floor(volumes_desc[k - 1] / total * m)) + 1;
        const int take = std::min(quota, std::max(remaining - (n - k), 0));
        members.clear();

        int seed = -1;
        if (centroids.empty()) {
            seed = 0;  // first listed chute, the top-left one
        } else {
            double best = -1.0;
            for (int c = 0; c < m; ++c) {
                if (assignment[c] != 0) continue;
                double nearest = std::numeric_limits<double>::max();
                for (const auto& [cr, cc] : centroids) {
                    const double dr = chute_coords[c].row - cr;
                    const double dc = chute_coords[c].col - cc;
                    nearest = std::min(nearest, std::sqrt(dr * dr + dc * dc));
                }
                if (nearest > best) {
                    best = nearest;
                    seed = c;
                }
            }
        }
        assignment[seed] = k;
        members.push_back(seed);

        for (int j = 1; j < take; ++j) {
            int pick = -1;
            double best = std::numeric_limits<double>::max();
            for (int c = 0; c < m; ++c) {
                if (assignment[c] != 0) continue;
                double nearest = std::numeric_limits<double>::max();
                for (int mem : members) {
                    nearest = std::min(nearest, euclidean(chute_coords[c],
                                                          chute_coords[mem]));
                }
                if (nearest < best) {
                    best = nearest;
                    pick = c;
                }
            }
            assignment[pick] = k;
            members.push_back(pick);
        }

        remaining -= take;
        double cr = 0.0, cc = 0.0;
        for (int mem : members) {
            cr += chute_coords[mem].row;
            cc += chute_coords[mem].col;
        }
        centroids.emplace_back(cr / members.size(), cc / members.size());
    }
    for (int c = 0; c < m; ++c) {
        if (assignment[c] == 0) throw std::runtime_error("greedy pass left chutes unassigned");
    }
    return assignment;
}

namespace {

TaskMapping mapping_from_ranks(const std::vector<int>& rank_of_chute,
                               const RankedVolumes& rv, int n_destinations) {
    TaskMapping m;
    m.n_destinations = n_destinations;
    m.dest_of_chute.resize(rank_of_chute.size());
    for (size_t i = 0; i < rank_of_chute.size(); ++i) {
        m.dest_of_chute[i] = rv.dest_ids[rank_of_chute[i] - 1];
    }
    return m;
}

}  // namespace

TaskMapping init_min_dist(const Floorplan& fp, const DestinationProfile& profile,
                          const DistanceField& workstation_field) {
    const int m = fp.chute_count();
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 1);
    std::vector<int> access(m);
    for (int c = 1; c <= m; ++c) {
        access[c - 1] = chute_access_distance(fp, c, workstation_field);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return access[a - 1] < access[b - 1];
    });

    const RankedVolumes rv = ranked_volumes(profile);
    const std::vector<int> by_slot = min_dist_assign(m, rv.volumes);

    TaskMapping result;
    result.n_destinations = profile.n_destinations;
    result.dest_of_chute.assign(m, 0);
    for (int slot = 0; slot < m; ++slot) {
        result.dest_of_chute[order[slot] - 1] = rv.dest_ids[by_slot[slot] - 1];
    }
    return result;
}

TaskMapping init_min_dist(const Floorplan& fp, const DestinationProfile& profile) {
    return init_min_dist(fp, profile, distance_field(fp, fp.workstations()));
}

TaskMapping init_cluster(const Floorplan& fp, const DestinationProfile& profile) {
    const RankedVolumes rv = ranked_volumes(profile);
    const std::vector<int> ranks = cluster_assign(fp.chutes(), rv.volumes);
    return mapping_from_ranks(ranks, rv, profile.n_destinations);
}

TaskMapping init_sampled(const Floorplan& fp, const DestinationProfile& profile,
                         Rng& rng, double delta) {
    const std::vector<double> weights = profile.volumes_with_recirc();
    TaskMapping m;
    m.n_destinations = profile.n_destinations;
    m.dest_of_chute.resize(fp.chute_count());
    for (int c = 0; c < fp.chute_count(); ++c) {
        m.dest_of_chute[c] = int(weighted_index(rng, weights)) + 1;
    }
    return repair(m, profile, delta).mapping;
}

int mutation_count(Rng& rng, int chute_total) {
    int k = 1;
    while (k < chute_total && coin(rng)) ++k;
    return k;
}

TaskMapping mutate(const TaskMapping& m, Rng& rng) {
    const int chute_total = m.chute_count();
    const int k = mutation_count(rng, chute_total);

    TaskMapping out = m;
    std::vector<int> pool(chute_total);
    std::iota(pool.begin(), pool.end(), 1);
    for (int j = 0; j < k; ++j) {
        const int pick = j + int(uniform_below(rng, uint64_t(chute_total - j)));
        std::swap(pool[j], pool[pick]);
        out.set(pool[j], uniform_int(rng, 1, m.n_destinations + 1));
    }
    return out;
}

Candidate evaluate(const TaskMapping& m, const Floorplan& fp, const NavCache& nav,
                   const DestinationProfile& profile, const SimConfig& sim,
                   uint64_t seed_base, int replicates) {
    if (replicates < 1) throw std::runtime_error("need at least one replicate");
    Candidate cand;
    cand.mapping = m;
    cand.eval_seed_base = seed_base;
    double total = 0.0;
    for (int r = 0; r < replicates; ++r) {
        SimConfig cfg = sim;
        cfg.seed = seed_base + uint64_t(r);
        cfg.record_events = false;
        total += run(fp, nav, m, profile, cfg).throughput;
    }
    cand.objective = total / replicates;
    cand.amdw = measure_amdw(m, profile, fp, nav.workstation_field());
    cand.acd = measure_acd(m, profile, fp);
    return cand;
}

namespace {

// Builds and evaluates the initial population shared by the EA and the
// QD mode: `population` mappings, the last two replaced by the greedy
// constructions when requested. Candidate index doubles as the evaluation
// counter start.
std::vector<Candidate> initial_population(const Floorplan& fp,
                                          const DestinationProfile& profile,
                                          const EAConfig& cfg, const NavCache& nav,
                                          bool greedy) {
    const int pop = cfg.population;
    if (greedy && pop < 2) {
        throw std::runtime_error("greedy initialization needs population >= 2");
    }
    std::vector<Candidate> out(pop);
    parallel_for(pop, cfg.workers, [&](int i) {
        TaskMapping m;
        if (greedy && i == pop - 2) {
            m = init_min_dist(fp, profile, nav.workstation_field());
        } else if (greedy && i == pop - 1) {
            m = init_cluster(fp, profile);
        } else {
            Rng rng(derive_seed(cfg.seed, kInitStream, uint64_t(i)));
            m = init_sampled(fp, profile, rng, cfg.delta);
        }
        out[i] = evaluate(m, fp, nav, profile, cfg.sim,
                          derive_seed(cfg.seed, kEvalStream, uint64_t(i)),
                          cfg.replicates);
    });
    return out;
}

std::vector<Candidate> mutant_batch(const std::vector<const TaskMapping*>& parents,
                                    const Floorplan& fp,
                                    const DestinationProfile& profile,
                                    const EAConfig& cfg, const NavCache& nav,
                                    int counter_base) {
    std::vector<Candidate> batch(parents.size());
    parallel_for(int(parents.size()), cfg.workers, [&](int j) {
        const uint64_t counter = uint64_t(counter_base + j);
        Rng rng(derive_seed(cfg.seed, kMutStream, counter));
        TaskMapping child = mutate(*parents[j], rng);
        child = repair(child, profile, cfg.delta).mapping;
        batch[j] = evaluate(child, fp, nav, profile, cfg.sim,
                            derive_seed(cfg.seed, kEvalStream, counter),
                            cfg.replicates);
    });
    return batch;
}

}  // namespace

EAResult ea_run(const Floorplan& fp, const DestinationProfile& profile,
                const EAConfig& cfg) {
    if (cfg.population < 1) throw std::runtime_error("population must be >= 1");
    if (cfg.total_evaluations < cfg.population) {
        throw std::runtime_error("evaluation budget smaller than the population");
    }
    const NavCache nav(fp);

    EAResult result;
    const std::vector<Candidate> init =
        initial_population(fp, profile, cfg, nav, cfg.greedy_init);
    int evals = cfg.population;

    result.best = init[0];
    for (const Candidate& c : init) {
        if (c.objective > result.best.objective) result.best = c;
    }
    if (cfg.greedy_init) {
        result.min_dist_objective = init[cfg.population - 2].objective;
        result.cluster_objective = init[cfg.population - 1].objective;
    }
    result.history.push_back({0, evals, result.best.objective, result.best.amdw,
                              result.best.acd});

    int generation = 0;
    while (evals < cfg.total_evaluations) {
        ++generation;
        const int batch = std::min(cfg.population, cfg.total_evaluations - evals);
        std::vector<const TaskMapping*> parents(batch, &result.best.mapping);
        const std::vector<Candidate> children =
            mutant_batch(parents, fp, profile, cfg, nav, evals);
        evals += batch;
        for (const Candidate& c : children) {
            if (c.objective > result.best.objective) result.best = c;
        }
        result.history.push_back({generation, evals, result.best.objective,
                                  result.best.amdw, result.best.acd});
    }
    result.evaluations = evals;
    return result;
}

// ---------------------------------------------------------------------------
// Archive / MAP-Elites

int archive_bin(double value, double lo, double hi, int resolution) {
    if (value <= lo) return 0;
    if (value >= hi) return resolution - 1;
    const int bin = int(std::floor((value - lo) / (hi - lo) * resolution));
    return std::clamp(bin, 0, resolution - 1);
}

int Archive::amdw_bin(double v) const { return archive_bin(v, amdw_lo, amdw_hi, res_amdw); }
int Archive::acd_bin(double v) const { return archive_bin(v, acd_lo, acd_hi, res_acd); }

int Archive::cell_index(double amdw, double acd) const {
    return amdw_bin(amdw) * res_acd + acd_bin(acd);
}

bool Archive::insert(const Candidate& cand) {
    auto& cell = cells[cell_index(cand.amdw, cand.acd)];
    if (cell && cell->objective >= cand.objective) return false;
    cell = Elite{cand.mapping, cand.objective, cand.amdw, cand.acd};
    return true;
}

double Archive::qd_score() const {
    double total = 0.0;
    for (const auto& cell : cells) {
        if (cell) total += cell->objective;
    }
    return total;
}

int Archive::occupied_count() const {
    int n = 0;
    for (const auto& cell : cells) n += cell.has_value();
    return n;
}

QDResult map_elites_run(const Floorplan& fp, const DestinationProfile& profile,
                        const QDConfig& cfg) {
    const EAConfig& ea = cfg.ea;
    if (ea.population < 2) throw std::runtime_error("population must be >= 2");
    if (ea.total_evaluations < ea.population) {
        throw std::runtime_error("evaluation budget smaller than the population");
    }
    if (cfg.res_amdw < 1 || cfg.res_acd < 1) {
        throw std::runtime_error("archive resolution must be >= 1 per axis");
    }
    const NavCache nav(fp);

    QDResult result;
    Archive& archive = result.archive;
    archive.res_amdw = cfg.res_amdw;
    archive.res_acd = cfg.res_acd;
    archive.cells.assign(size_t(cfg.res_amdw) * cfg.res_acd, std::nullopt);

    // Measure ranges: access distances start at 1 by construction; the
    // centroid spread cannot exceed half the floor diagonal.
    archive.amdw_lo = 1.0;
    double max_access = 1.0;
    for (int c = 1; c <= fp.chute_count(); ++c) {
        max_access = std::max(
            max_access,
            double(chute_access_distance(fp, c, nav.workstation_field())));
    }
    archive.amdw_hi = std::max(max_access, archive.amdw_lo + 1.0);
    archive.acd_lo = 0.0;
    archive.acd_hi = 0.5 * std::hypot(double(fp.width()), double(fp.height()));

    const std::vector<Candidate> init =
        initial_population(fp, profile, ea, nav, /*greedy=*/true);
    for (const Candidate& c : init) archive.insert(c);
    int evals = ea.population;
    result.qd_history.push_back(archive.qd_score());

    Rng parent_rng(derive_seed(ea.seed, kParentStream));
    while (evals < ea.total_evaluations) {
        const int batch = std::min(ea.population, ea.total_evaluations - evals);

        std::vector<int> occupied;
        occupied.reserve(archive.cells.size());
        for (int i = 0; i < int(archive.cells.size()); ++i) {
            if (archive.cells[i]) occupied.push_back(i);
        }
        std::vector<const TaskMapping*> parents(batch);
        for (int j = 0; j < batch; ++j) {
            const int cell = occupied[uniform_below(parent_rng, occupied.size())];
            parents[j] = &archive.cells[cell]->mapping;
        }

        const std::vector<Candidate> children =
            mutant_batch(parents, fp, profile, ea, nav, evals);
        evals += batch;
        for (const Candidate& c : children) archive.insert(c);
        result.qd_history.push_back(archive.qd_score());
    }
    result.evaluations = evals;
    return result;
}

}  // namespace rss

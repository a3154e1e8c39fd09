#pragma once

#include <optional>
#include <vector>

#include "rss/repair.hpp"
#include "rss/simulator.hpp"

namespace rss {

struct EAConfig {
    SimConfig sim;               // per-run settings; sim.seed is derived per replicate
    int total_evaluations = 1000;
    int population = 20;         // mutants per generation, and initial size
    int replicates = 1;          // simulations averaged per evaluation
    bool greedy_init = true;
    uint64_t seed = 0;
    int workers = 1;
    double delta = 1.5;          // repair bound multiplier
};

struct Candidate {
    TaskMapping mapping;
    double objective = 0.0;  // mean throughput over the replicates
    double amdw = 0.0;
    double acd = 0.0;
    uint64_t eval_seed_base = 0;
};

struct GenerationStat {
    int generation;
    int evaluations_used;
    double best_objective;
    double best_amdw;
    double best_acd;
};

struct EAResult {
    Candidate best;
    std::vector<GenerationStat> history;
    int evaluations = 0;
    // Objectives of the two greedy members of the initial population
    // (present when greedy_init).
    std::optional<double> min_dist_objective;
    std::optional<double> cluster_objective;
};

// --- initial mappings -------------------------------------------------------

// One destination drawn per chute, proportional to volume (recirculation
// included), then repaired to validity.
TaskMapping init_sampled(const Floorplan& fp, const DestinationProfile& profile,
                         Rng& rng, double delta = 1.5);

// Works near-to-far: chutes ascending by workstation access distance,
// destinations descending by volume; each destination takes consecutive
// chutes up to its proportional share, always leaving one chute per
// remaining destination.
TaskMapping init_min_dist(const Floorplan& fp, const DestinationProfile& profile);
TaskMapping init_min_dist(const Floorplan& fp, const DestinationProfile& profile,
                          const DistanceField& workstation_field);

// Grows one tight cluster per destination: seeds at the top-left chute,
// then at the unassigned chute farthest from existing cluster centroids,
// and accretes nearest unassigned chutes up to the proportional share.
TaskMapping init_cluster(const Floorplan& fp, const DestinationProfile& profile);

// Algorithm cores on abstract inputs (positions/volumes pre-sorted), for
// direct fixture checks. Both return, per chute slot, a 1-based index into
// the volume list.
std::vector<int> min_dist_assign(int chute_total, std::span<const double> volumes_desc);
std::vector<int> cluster_assign(std::span<const Coord> chute_coords,
                                std::span<const double> volumes_desc);

// Destination volumes with recirculation folded in, sorted descending
// (ties by id), plus the matching destination ids.
struct RankedVolumes {
    std::vector<double> volumes;
    std::vector<int> dest_ids;
};
RankedVolumes ranked_volumes(const DestinationProfile& profile);

// --- variation and evaluation ----------------------------------------------

// Number of chutes a mutation rewrites: geometric with success 1/2,
// truncated at the chute count.
int mutation_count(Rng& rng, int chute_total);

// Reassigns that many distinct chutes to uniformly random destinations.
// The result may be invalid; callers repair.
TaskMapping mutate(const TaskMapping& m, Rng& rng);

Candidate evaluate(const TaskMapping& m, const Floorplan& fp, const NavCache& nav,
                   const DestinationProfile& profile, const SimConfig& sim,
                   uint64_t seed_base, int replicates);

EAResult ea_run(const Floorplan& fp, const DestinationProfile& profile,
                const EAConfig& cfg);

// --- quality-diversity mode --------------------------------------------------

struct Elite {
    TaskMapping mapping;
    double objective;
    double amdw;
    double acd;
};

struct Archive {
    int res_amdw = 25;
    int res_acd = 25;
    double amdw_lo = 0.0, amdw_hi = 1.0;
    double acd_lo = 0.0, acd_hi = 1.0;
    std::vector<std::optional<Elite>> cells;  // index = amdw_bin * res_acd + acd_bin

    int amdw_bin(double v) const;
    int acd_bin(double v) const;
    int cell_index(double amdw, double acd) const;
    // True when stored (cell empty or strictly better objective).
    bool insert(const Candidate& cand);
    double qd_score() const;
    int occupied_count() const;
};

// Uniform binning with clamping at both ends.
int archive_bin(double value, double lo, double hi, int resolution);

struct QDConfig {
    EAConfig ea;
    int res_amdw = 25;
    int res_acd = 25;
};

struct QDResult {
    Archive archive;
    int evaluations = 0;
    std::vector<double> qd_history;  // archive score after each batch
};

QDResult map_elites_run(const Floorplan& fp, const DestinationProfile& profile,
                        const QDConfig& cfg);

}  // namespace rss

#pragma once

#include <string>
#include <vector>

#include "rss/floorplan.hpp"
#include "rss/rng.hpp"

namespace rss {

// Destination set with relative volumes. Destination ids 1..N are shipping
// destinations, sorted by volume descending; id N+1 is the recirculation
// pseudo-destination, which carries a configurable pseudo-volume for
// initializers and repair bounds but is never drawn as a package
// destination.
struct DestinationProfile {
    int n_destinations = 0;          // N, recirculation excluded
    std::vector<double> volumes;     // size N, descending, sums to 1
    double recirc_volume = 0.05;

    std::vector<double> cumulative;  // prefix sums of volumes, for sampling

    int recirc_id() const { return n_destinations + 1; }
    double volume_of(int dest_id) const {
        return dest_id == recirc_id() ? recirc_volume : volumes[dest_id - 1];
    }
    // Volumes for all N+1 destinations, indexed by dest_id-1.
    std::vector<double> volumes_with_recirc() const;
};

// Builds the skewed volume profile: the top ceil(0.1*N) destinations share
// 70% of the traffic, the next ceil(0.2*N) share 20%, the remainder share
// 10%, uniform within each band. If a band is empty (tiny N), its share is
// redistributed proportionally over the nonempty bands. Requires N >= 2.
DestinationProfile make_profile(int n_destinations, double recirc_volume = 0.05);

// Draws a shipping destination (1..N, never the recirculation id).
int sample_destination(const DestinationProfile& profile, Rng& rng);

// One destination per chute. Chute ids 1..M index the assignment; a valid
// mapping gives every destination (recirculation included) at least one
// chute.
struct TaskMapping {
    int n_destinations = 0;        // N (recirc id = N+1)
    std::vector<int> dest_of_chute;  // size M, values 1..N+1

    int chute_count() const { return int(dest_of_chute.size()); }
    int dest_of(int chute_id) const { return dest_of_chute[chute_id - 1]; }
    void set(int chute_id, int dest_id) { dest_of_chute[chute_id - 1] = dest_id; }
    int recirc_id() const { return n_destinations + 1; }

    // Chute ids assigned to each destination; index = dest_id - 1,
    // size N+1, chute ids ascending.
    std::vector<std::vector<int>> chutes_by_destination() const;
    std::vector<int> chutes_of(int dest_id) const;

    friend bool operator==(const TaskMapping&, const TaskMapping&) = default;
};

struct MappingViolation {
    int dest_id;
    std::string what;
};

// Definition-level validity: every destination 1..N+1 owns at least one
// chute. (One destination per chute holds structurally.) Empty result
// means valid.
std::vector<MappingViolation> validate(const TaskMapping& m);

// Mean Euclidean distance from each chute to the centroid of the set.
double centroid_distance(std::span<const Coord> chute_coords);
double centroid_distance_of(const TaskMapping& m, int dest_id, const Floorplan& fp);

// Number of destinations counted as high-volume: ceil(0.05 * N), min 1.
int high_volume_count(const DestinationProfile& profile);

// Avg centroid distance over the high-volume destinations (recirc excluded).
double measure_acd(const TaskMapping& m, const DestinationProfile& profile,
                   const Floorplan& fp);

// Avg nearest-workstation access distance over all chutes assigned to the
// high-volume destinations. `workstation_field` must be the all-workstations
// BFS field.
double measure_amdw(const TaskMapping& m, const DestinationProfile& profile,
                    const Floorplan& fp, const DistanceField& workstation_field);

// Text format: versioned header with chute/destination counts, then one
// "chute_id destination" record per chute (recirculation spelled RECIRC).
std::string serialize_mapping(const TaskMapping& m);
TaskMapping parse_mapping(const std::string& text);

}  // namespace rss

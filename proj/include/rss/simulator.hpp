#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rss/floorplan.hpp"
#include "rss/rng.hpp"
#include "rss/taskmap.hpp"

namespace rss {

struct SimConfig {
    int robot_count = 0;
    int horizon = 1000;
    double alpha = 8.0;          // congestion weight in the target chooser
    int chute_capacity = 50;     // drops before a chute closes
    double close_quadratic = 2.0;
    double close_constant = 50.0;
    double extra_close_mean = 100.0;  // mean of the exponential extra close time
    uint64_t seed = 0;
    bool record_events = false;
};

enum class EventKind : uint8_t {
    Move,
    Wait,
    Pickup,
    DropSorted,
    DropRecirc,
    ChuteClose,
    ChuteOpen,
};

struct Event {
    int timestep;
    int robot;  // -1 for chute lifecycle events
    EventKind kind;
    Coord cell;
    int chute;  // 0 when not chute-related
};

struct SimResult {
    double throughput = 0.0;
    double recirculation_rate = 0.0;
    int64_t sorted_count = 0;
    int64_t recirculated_count = 0;
    int collision_count = 0;
    uint64_t seed = 0;
    int horizon = 0;
    int robot_count = 0;
    std::vector<Event> events;  // populated when cfg.record_events
};

// Greedy target chooser: argmin of path_length + alpha * en_route_count,
// ties to the shorter path, then the row-major-smaller cell. Returns an
// index into `targets`.
int ta_select(Coord current, std::span<const Coord> targets,
              const std::function<int(Coord)>& en_route_count, double alpha,
              const std::function<int(Coord)>& path_length);

// Timesteps a chute stays closed: floor of the quadratic spread penalty
// plus an exponential processing-time draw.
int closed_duration(double centroid_dist, const SimConfig& cfg, Rng& rng);
int closed_duration_given(double centroid_dist, const SimConfig& cfg, double extra);

// One-step priority-inheritance-with-backtracking coordinator. Produces a
// joint move with no shared cells and no swaps; waiting is always legal.
class PibtSolver {
public:
    explicit PibtSolver(const Floorplan& fp);

    // dist(robot, cell) ranks each robot's candidate cells (its own cell
    // and traversable neighbors); lower is closer to that robot's target.
    // Robots are prioritized by (elapsed desc, id asc).
    std::vector<Coord> step(std::span<const Coord> positions,
                            std::span<const int> elapsed,
                            const std::function<int(int, Coord)>& dist);

private:
    bool plan_robot(int robot, int pusher_pos_index);

    const Floorplan* fp_;
    std::vector<int> occupant_now_;   // robot at cell, -1 if free
    std::vector<int> reserved_by_;    // robot that reserved cell for next step
    std::vector<int> next_;           // chosen next cell index per robot
    std::vector<Coord> positions_;
    const std::function<int(int, Coord)>* dist_ = nullptr;
    uint64_t step_salt_ = 0;  // reshuffles equal-distance candidates each step
};

struct DropChoice {
    Coord endpoint;
    int chute_id;
};

// Picks the endpoint (and the chute behind it) for a package: endpoints of
// the destination's OPEN chutes, falling back to the recirculation chutes
// when all of them are closed. `chute_open[id-1]` gives chute status.
DropChoice assign_drop_target(Coord from, int destination, const TaskMapping& m,
                              std::span<const uint8_t> chute_open,
                              const Floorplan& fp, const NavCache& nav,
                              const std::function<int(Coord)>& en_route_count,
                              double alpha);

// Runs the full sortation simulation: pickups at workstations, PIBT moves,
// drops with chute close/reopen, recirculated packages fed back into the
// pickup queue. Deterministic in (fp, m, profile, cfg).
SimResult run(const Floorplan& fp, const NavCache& nav, const TaskMapping& m,
              const DestinationProfile& profile, const SimConfig& cfg);

// Convenience overload that builds the navigation cache itself.
SimResult run(const Floorplan& fp, const TaskMapping& m,
              const DestinationProfile& profile, const SimConfig& cfg);

// Structured-text form of a result (stable key order, no volatile fields).
std::string serialize_result(const SimResult& r);

}  // namespace rss

#include "rss/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace rss {

int ta_select(Coord current, std::span<const Coord> targets,
              const std::function<int(Coord)>& en_route_count, double alpha,
              const std::function<int(Coord)>& path_length) {
    if (targets.empty()) throw std::runtime_error("target set is empty");
    int best = -1;
    double best_score = 0.0;
    int best_len = 0;
    for (int i = 0; i < int(targets.size()); ++i) {
        const int len = path_length(targets[i]);
        const double score = len + alpha * en_route_count(targets[i]);
        const bool better =
            best < 0 || score < best_score ||
            (score == best_score &&
             (len < best_len || (len == best_len && targets[i] < targets[best])));
        if (better) {
            best = i;
            best_score = score;
            best_len = len;
        }
    }
    (void)current;
    return best;
}

int closed_duration_given(double centroid_dist, const SimConfig& cfg, double extra) {
    const double base = cfg.close_quadratic * centroid_dist * centroid_dist +
                        cfg.close_constant;
    return int(std::floor(base + extra));
}

int closed_duration(double centroid_dist, const SimConfig& cfg, Rng& rng) {
    return closed_duration_given(centroid_dist, cfg,
                                 exponential(rng, cfg.extra_close_mean));
}

// ---------------------------------------------------------------------------
// PIBT

PibtSolver::PibtSolver(const Floorplan& fp) : fp_(&fp) {
    occupant_now_.assign(size_t(fp.width()) * fp.height(), -1);
    reserved_by_.assign(size_t(fp.width()) * fp.height(), -1);
}

std::vector<Coord> PibtSolver::step(std::span<const Coord> positions,
                                    std::span<const int> elapsed,
                                    const std::function<int(int, Coord)>& dist) {
    const int n = int(positions.size());
    positions_.assign(positions.begin(), positions.end());
    next_.assign(n, -1);
    dist_ = &dist;
    step_salt_ = mix64(step_salt_ + 1);
    for (const Coord& p : positions_) occupant_now_[fp_->index(p)] = -1;
    for (int i = 0; i < n; ++i) occupant_now_[fp_->index(positions_[i])] = i;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return elapsed[a] != elapsed[b] ? elapsed[a] > elapsed[b] : a < b;
    });

    for (int r : order) {
        if (next_[r] == -1) plan_robot(r, -1);
    }

    std::vector<Coord> moves(n);
    for (int i = 0; i < n; ++i) {
        moves[i] = fp_->coord(next_[i]);
        reserved_by_[next_[i]] = -1;
        occupant_now_[fp_->index(positions_[i])] = -1;
    }
    return moves;
}

bool PibtSolver::plan_robot(int robot, int pusher_pos_index) {
    const Coord pos = positions_[robot];

    // Candidates: stay plus traversable neighbors, closest-to-target first.
    // Equal-distance candidates shuffle on a per-step hash; a fixed order
    // can pin two meeting robots into the same losing exchange forever,
    // while a varying one lets the pushed robot find the side step.
    struct Option {
        int cell;
        int score;
        uint64_t tie;
    };
    Option options[5];
    int count = 0;
    for (auto [dr, dc] : kNeighborOffsets) {
        const Coord n{pos.row + dr, pos.col + dc};
        if (fp_->in_bounds(n) && fp_->traversable(n)) {
            const int cell = fp_->index(n);
            options[count++] = {cell, (*dist_)(robot, n),
                                mix64(step_salt_ ^ uint64_t(cell))};
        }
    }
    const int own = fp_->index(pos);
    options[count++] = {own, (*dist_)(robot, pos), mix64(step_salt_ ^ uint64_t(own))};
    std::sort(options, options + count, [](const Option& a, const Option& b) {
        return a.score != b.score ? a.score < b.score : a.tie < b.tie;
    });

    for (int i = 0; i < count; ++i) {
        const int cell = options[i].cell;
        if (reserved_by_[cell] != -1) continue;
        if (cell == pusher_pos_index) continue;  // no swap with the pusher
        reserved_by_[cell] = robot;
        next_[robot] = cell;
        const int other = occupant_now_[cell];
        if (other != -1 && other != robot && next_[other] == -1) {
            if (!plan_robot(other, fp_->index(pos))) continue;  // other stays put
        }
        return true;
    }

    // Nowhere to go: stay, displacing any reservation a pusher made here.
    reserved_by_[own] = robot;
    next_[robot] = own;
    return false;
}

// ---------------------------------------------------------------------------
// Target assignment for drops

DropChoice assign_drop_target(Coord from, int destination, const TaskMapping& m,
                              std::span<const uint8_t> chute_open,
                              const Floorplan& fp, const NavCache& nav,
                              const std::function<int(Coord)>& en_route_count,
                              double alpha) {
    std::vector<Coord> cells;
    std::vector<int> cell_chute;
    std::unordered_set<int> seen;
    auto collect = [&](int dest) {
        for (int chute = 1; chute <= m.chute_count(); ++chute) {
            if (m.dest_of(chute) != dest || !chute_open[chute - 1]) continue;
            for (const Coord& e : fp.chute_endpoints(chute)) {
                if (seen.insert(fp.index(e)).second) {
                    cells.push_back(e);
                    cell_chute.push_back(chute);
                }
            }
        }
    };
    collect(destination);
    if (cells.empty()) collect(m.recirc_id());
    if (cells.empty()) {
        throw std::runtime_error("no open chute for destination " +
                                 std::to_string(destination) +
                                 " and no open recirculation chute");
    }
    const int pick = ta_select(
        from, cells, en_route_count, alpha,
        [&](Coord g) { return nav.path_length(from, g); });
    return {cells[pick], cell_chute[pick]};
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

struct Package {
    int destination;
    int recirculated_count = 0;
};

struct Robot {
    Coord pos;
    Coord target;
    std::optional<Package> carrying;
    int intended_chute = 0;  // chute behind the target endpoint
    int elapsed = 0;         // steps since last arrival
};

struct Chute {
    Coord pos;
    int destination = 0;
    bool is_recirc = false;
    bool open = true;
    int fill = 0;
    int64_t reopen_at = 0;
    double spread = 0.0;  // centroid distance of its destination's chute set
};

}  // namespace

SimResult run(const Floorplan& fp, const NavCache& nav, const TaskMapping& m,
              const DestinationProfile& profile, const SimConfig& cfg) {
    if (cfg.horizon < 1) throw std::runtime_error("horizon must be >= 1");
    if (cfg.robot_count < 0) throw std::runtime_error("robot count must be >= 0");
    if (cfg.chute_capacity < 1) throw std::runtime_error("chute capacity must be >= 1");
    if (m.chute_count() != fp.chute_count()) {
        throw std::runtime_error("mapping chute count does not match map");
    }
    if (m.n_destinations != profile.n_destinations) {
        throw std::runtime_error("mapping destination count does not match profile");
    }
    if (!validate(m).empty()) throw std::runtime_error("mapping is invalid");

    Rng rng(cfg.seed);
    SimResult result;
    result.seed = cfg.seed;
    result.horizon = cfg.horizon;
    result.robot_count = cfg.robot_count;

    // Chute table with per-destination spreads.
    std::vector<Chute> chutes(fp.chute_count());
    {
        const auto by_dest = m.chutes_by_destination();
        std::vector<double> spread(m.n_destinations + 1, 0.0);
        for (int d = 1; d <= m.n_destinations + 1; ++d) {
            std::vector<Coord> coords;
            for (int chute : by_dest[d - 1]) coords.push_back(fp.chute_coord(chute));
            if (!coords.empty()) spread[d - 1] = centroid_distance(coords);
        }
        for (int c = 1; c <= fp.chute_count(); ++c) {
            Chute& ch = chutes[c - 1];
            ch.pos = fp.chute_coord(c);
            ch.destination = m.dest_of(c);
            ch.is_recirc = ch.destination == m.recirc_id();
            ch.spread = spread[ch.destination - 1];
        }
    }
    std::vector<uint8_t> chute_open(chutes.size(), 1);

    // Robots start on distinct traversable non-endpoint cells.
    std::vector<Coord> spawn_cells;
    for (int r = 0; r < fp.height(); ++r) {
        for (int c = 0; c < fp.width(); ++c) {
            const Coord at{r, c};
            if (fp.traversable(at) && fp.at(at) != CellKind::Endpoint) {
                spawn_cells.push_back(at);
            }
        }
    }
    if (cfg.robot_count > int(spawn_cells.size())) {
        throw std::runtime_error("robot count " + std::to_string(cfg.robot_count) +
                                 " exceeds free cells (" +
                                 std::to_string(spawn_cells.size()) + ")");
    }
    for (int i = 0; i < cfg.robot_count; ++i) {
        const int j = i + int(uniform_below(rng, uint64_t(spawn_cells.size() - i)));
        std::swap(spawn_cells[i], spawn_cells[j]);
    }

    std::vector<int> en_route(size_t(fp.width()) * fp.height(), 0);
    const auto en_route_count = std::function<int(Coord)>(
        [&](Coord g) { return en_route[fp.index(g)]; });

    std::vector<Robot> robots(cfg.robot_count);
    const std::span<const Coord> workstations = fp.workstations();
    for (int i = 0; i < cfg.robot_count; ++i) {
        Robot& r = robots[i];
        r.pos = spawn_cells[i];
        const int pick = ta_select(
            r.pos, workstations, en_route_count, cfg.alpha,
            [&](Coord g) { return nav.path_length(r.pos, g); });
        r.target = workstations[pick];
        ++en_route[fp.index(r.target)];
    }

    std::deque<Package> recirc_queue;
    PibtSolver pibt(fp);
    std::vector<Coord> positions(cfg.robot_count);
    std::vector<int> elapsed(cfg.robot_count, 0);

    auto log = [&](Event e) {
        if (cfg.record_events) result.events.push_back(e);
    };

    for (int64_t now = 1; now <= cfg.horizon; ++now) {
        // Reopen chutes that have served their closed time.
        for (int c = 1; c <= int(chutes.size()); ++c) {
            Chute& ch = chutes[c - 1];
            if (!ch.open && ch.reopen_at <= now) {
                ch.open = true;
                chute_open[c - 1] = 1;
                log({int(now), -1, EventKind::ChuteOpen, ch.pos, c});
            }
        }

        if (cfg.robot_count > 0) {
            for (int i = 0; i < cfg.robot_count; ++i) {
                positions[i] = robots[i].pos;
                elapsed[i] = robots[i].elapsed;
            }
            const std::vector<Coord> moves = pibt.step(
                positions, elapsed,
                [&](int robot, Coord cell) {
                    return nav.path_length(cell, robots[robot].target);
                });

            // Independent of PIBT's own guarantees, recheck the joint move:
            // unique next cells, and nobody traverses an edge both ways.
            std::unordered_set<int> occupied;
            std::unordered_map<int64_t, int> edges;
            for (int i = 0; i < cfg.robot_count; ++i) {
                if (!occupied.insert(fp.index(moves[i])).second) ++result.collision_count;
                const int from = fp.index(robots[i].pos);
                const int to = fp.index(moves[i]);
                if (from != to) {
                    if (edges.contains((int64_t(to) << 32) | from)) ++result.collision_count;
                    edges.emplace((int64_t(from) << 32) | to, i);
                }
            }

            for (int i = 0; i < cfg.robot_count; ++i) {
                const bool moved = !(moves[i] == robots[i].pos);
                robots[i].pos = moves[i];
                log({int(now), i, moved ? EventKind::Move : EventKind::Wait,
                     moves[i], 0});
            }
        }

        // Priorities: reset on arrival, grow otherwise.
        for (Robot& r : robots) {
            r.elapsed = r.pos == r.target ? 0 : r.elapsed + 1;
        }

        // Arrivals, in robot id order.
        for (int i = 0; i < cfg.robot_count; ++i) {
            Robot& r = robots[i];
            if (!(r.pos == r.target)) continue;
            --en_route[fp.index(r.target)];

            if (!r.carrying) {
                // At a workstation: take the oldest recirculated package,
                // else a fresh one.
                Package pkg{};
                if (!recirc_queue.empty()) {
                    pkg = recirc_queue.front();
                    recirc_queue.pop_front();
                } else {
                    pkg.destination = sample_destination(profile, rng);
                }
                r.carrying = pkg;
                log({int(now), i, EventKind::Pickup, r.pos, 0});
                const DropChoice choice =
                    assign_drop_target(r.pos, pkg.destination, m, chute_open, fp,
                                       nav, en_route_count, cfg.alpha);
                r.target = choice.endpoint;
                r.intended_chute = choice.chute_id;
            } else {
                Chute& ch = chutes[r.intended_chute - 1];
                if (!ch.open) {
                    // Closed while we were en route; pick again from here.
                    const DropChoice choice = assign_drop_target(
                        r.pos, r.carrying->destination, m, chute_open, fp, nav,
                        en_route_count, cfg.alpha);
                    r.target = choice.endpoint;
                    r.intended_chute = choice.chute_id;
                } else if (ch.is_recirc) {
                    ++result.recirculated_count;
                    log({int(now), i, EventKind::DropRecirc, r.pos,
                         r.intended_chute});
                    Package pkg = *r.carrying;
                    ++pkg.recirculated_count;
                    recirc_queue.push_back(pkg);
                    r.carrying.reset();
                    r.intended_chute = 0;
                } else {
                    ++result.sorted_count;
                    ++ch.fill;
                    log({int(now), i, EventKind::DropSorted, r.pos,
                         r.intended_chute});
                    if (ch.fill >= cfg.chute_capacity) {
                        ch.open = false;
                        chute_open[r.intended_chute - 1] = 0;
                        ch.fill = 0;
                        ch.reopen_at = now + closed_duration(ch.spread, cfg, rng);
                        log({int(now), -1, EventKind::ChuteClose, ch.pos,
                             r.intended_chute});
                    }
                    r.carrying.reset();
                    r.intended_chute = 0;
                }

                if (!r.carrying) {
                    const int pick = ta_select(
                        r.pos, workstations, en_route_count, cfg.alpha,
                        [&](Coord g) { return nav.path_length(r.pos, g); });
                    r.target = workstations[pick];
                }
            }
            ++en_route[fp.index(r.target)];
        }
    }

    result.throughput = double(result.sorted_count) / double(cfg.horizon);
    const int64_t drops = result.sorted_count + result.recirculated_count;
    result.recirculation_rate =
        drops == 0 ? 0.0 : double(result.recirculated_count) / double(drops);
    return result;
}

SimResult run(const Floorplan& fp, const TaskMapping& m,
              const DestinationProfile& profile, const SimConfig& cfg) {
    const NavCache nav(fp);
    return run(fp, nav, m, profile, cfg);
}

std::string serialize_result(const SimResult& r) {
    std::string out;
    out += "throughput " + std::to_string(r.throughput) + "\n";
    out += "recirculation_rate " + std::to_string(r.recirculation_rate) + "\n";
    out += "sorted " + std::to_string(r.sorted_count) + "\n";
    out += "recirculated " + std::to_string(r.recirculated_count) + "\n";
    out += "seed " + std::to_string(r.seed) + "\n";
    out += "N_T " + std::to_string(r.horizon) + "\n";
    out += "N_a " + std::to_string(r.robot_count) + "\n";
    return out;
}

}  // namespace rss

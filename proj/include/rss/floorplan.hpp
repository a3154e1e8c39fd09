#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rss/geometry.hpp"

namespace rss {

enum class CellKind : char {
    Traversable = '.',
    Obstacle = '@',
    Workstation = 'w',
    Endpoint = 'e',
    Chute = 'c',
};

// Sortation-floor grid. Robots move on the 4-connected subgraph of
// traversable cells (plain floor, workstations, endpoints); chutes and
// obstacles are not enterable. Immutable once constructed.
class Floorplan {
public:
    // Parses the plain-text map format: first line "height width", then
    // `height` lines of cell codes. Throws std::runtime_error on malformed
    // input or on a map that violates the structural invariants (every
    // chute reachable through an adjacent endpoint, traversable cells
    // connected, at least one workstation and one chute).
    static Floorplan parse(const std::string& text);

    // Inverse of parse, byte-exact: LF line endings, no trailing blanks.
    std::string serialize() const;

    int width() const { return width_; }
    int height() const { return height_; }

    bool in_bounds(Coord c) const {
        return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
    }
    CellKind at(Coord c) const { return cells_[index(c)]; }
    bool traversable(Coord c) const {
        const CellKind k = at(c);
        return k == CellKind::Traversable || k == CellKind::Workstation ||
               k == CellKind::Endpoint;
    }
    int index(Coord c) const { return c.row * width_ + c.col; }
    Coord coord(int idx) const { return {idx / width_, idx % width_}; }

    // Chute ids are 1..M in row-major scan order.
    int chute_count() const { return int(chutes_.size()); }
    Coord chute_coord(int chute_id) const { return chutes_[chute_id - 1]; }
    const std::vector<Coord>& chutes() const { return chutes_; }
    const std::vector<Coord>& workstations() const { return workstations_; }
    const std::vector<Coord>& endpoints() const { return endpoints_; }

    // Endpoints 4-adjacent to the given chute, in row-major order.
    const std::vector<Coord>& chute_endpoints(int chute_id) const {
        return chute_adjacency_[chute_id - 1];
    }

    int traversable_count() const { return traversable_count_; }

private:
    Floorplan() = default;
    void finalize();  // builds derived lists and checks invariants

    int width_ = 0;
    int height_ = 0;
    std::vector<CellKind> cells_;
    std::vector<Coord> chutes_;
    std::vector<Coord> workstations_;
    std::vector<Coord> endpoints_;
    std::vector<std::vector<Coord>> chute_adjacency_;
    int traversable_count_ = 0;

    friend Floorplan generate_map(const struct MapGenParams&);
};

// Multi-source BFS distances over the traversable subgraph, in grid steps.
struct DistanceField {
    static constexpr int kUnreachable = std::numeric_limits<int>::max();

    int width = 0;
    int height = 0;
    std::vector<int> dist;

    int at(Coord c) const { return dist[c.row * width + c.col]; }
    int at_index(int idx) const { return dist[idx]; }
    bool reachable(Coord c) const { return at(c) != kUnreachable; }
};

// Sources must be traversable; throws otherwise.
DistanceField distance_field(const Floorplan& fp, std::span<const Coord> sources);

// Steps needed to reach the chute face: one more than the closest of its
// adjacent endpoints under `field`. Ties between endpoints resolve to the
// row-major-first endpoint (same value, fixed witness).
int chute_access_distance(const Floorplan& fp, int chute_id, const DistanceField& field);

// Parameters for the structured map generator: rectangular chute blocks
// ringed by endpoints, separated by corridors, workstations spaced along
// the left/right walls. Chute blocks must keep every chute on the block
// boundary (min(block_rows, block_cols) <= 2) so each chute touches its
// endpoint ring.
struct MapGenParams {
    int width = 0;
    int height = 0;
    int chute_block_rows = 2;
    int chute_block_cols = 2;
    int workstation_count = 8;
    int corridor_x = 1;  // gap between block rings, columns
    int corridor_y = 1;  // gap between block rings, rows
    uint64_t seed = 0;   // recorded for provenance; the layout is structural
};

// Deterministic for given params. Throws on parameters that cannot produce
// a map satisfying the Floorplan invariants.
Floorplan generate_map(const MapGenParams& params);

// Shared read-only navigation data for simulations: a BFS field per target
// cell (every endpoint and workstation) plus the all-workstations field.
class NavCache {
public:
    explicit NavCache(const Floorplan& fp);

    const DistanceField& target_field(Coord target) const {
        return fields_.at(fp_->index(target));
    }
    const DistanceField& workstation_field() const { return workstation_field_; }

    // Convenience: shortest-path length from `from` to `target`.
    int path_length(Coord from, Coord target) const {
        return target_field(target).at(from);
    }

    const Floorplan& floorplan() const { return *fp_; }

private:
    const Floorplan* fp_;
    std::unordered_map<int, DistanceField> fields_;
    DistanceField workstation_field_;
};

}  // namespace rss

#include "rss/floorplan.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace rss {

namespace {

CellKind kind_from_char(char ch) {
    switch (ch) {
        case '.': return CellKind::Traversable;
        case '@': return CellKind::Obstacle;
        case 'w': return CellKind::Workstation;
        case 'e': return CellKind::Endpoint;
        case 'c': return CellKind::Chute;
        default:
            throw std::runtime_error(std::string("unknown cell code '") + ch + "'");
    }
}

}  // namespace

Floorplan Floorplan::parse(const std::string& text) {
    std::istringstream in(text);
    Floorplan fp;
    if (!(in >> fp.height_ >> fp.width_) || fp.height_ <= 0 || fp.width_ <= 0) {
        throw std::runtime_error("map header must be \"height width\"");
    }
    std::string line;
    std::getline(in, line);  // rest of header line
    fp.cells_.reserve(size_t(fp.width_) * fp.height_);
    for (int r = 0; r < fp.height_; ++r) {
        if (!std::getline(in, line)) {
            throw std::runtime_error("map truncated: expected " +
                                     std::to_string(fp.height_) + " rows");
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (int(line.size()) != fp.width_) {
            throw std::runtime_error("map not rectangular: row " + std::to_string(r) +
                                     " has " + std::to_string(line.size()) +
                                     " cells, expected " + std::to_string(fp.width_));
        }
        for (char ch : line) fp.cells_.push_back(kind_from_char(ch));
    }
    fp.finalize();
    return fp;
}

std::string Floorplan::serialize() const {
    std::string out = std::to_string(height_) + " " + std::to_string(width_) + "\n";
    out.reserve(out.size() + size_t(height_) * (width_ + 1));
    for (int r = 0; r < height_; ++r) {
        for (int c = 0; c < width_; ++c) out.push_back(char(cells_[r * width_ + c]));
        out.push_back('\n');
    }
    return out;
}

void Floorplan::finalize() {
    chutes_.clear();
    workstations_.clear();
    endpoints_.clear();
    traversable_count_ = 0;
    for (int r = 0; r < height_; ++r) {
        for (int c = 0; c < width_; ++c) {
            const Coord at{r, c};
            switch (cells_[index(at)]) {
                case CellKind::Chute: chutes_.push_back(at); break;
                case CellKind::Workstation: workstations_.push_back(at); break;
                case CellKind::Endpoint: endpoints_.push_back(at); break;
                default: break;
            }
            if (traversable(at)) ++traversable_count_;
        }
    }

    if (workstations_.empty()) throw std::runtime_error("map has no workstations");
    if (chutes_.empty()) throw std::runtime_error("map has no chutes");

    chute_adjacency_.assign(chutes_.size(), {});
    for (size_t i = 0; i < chutes_.size(); ++i) {
        for (auto [dr, dc] : kNeighborOffsets) {
            const Coord n{chutes_[i].row + dr, chutes_[i].col + dc};
            if (in_bounds(n) && at(n) == CellKind::Endpoint) {
                chute_adjacency_[i].push_back(n);
            }
        }
        std::sort(chute_adjacency_[i].begin(), chute_adjacency_[i].end());
        if (chute_adjacency_[i].empty()) {
            throw std::runtime_error("chute " + std::to_string(i + 1) +
                                     " unreachable: no adjacent endpoint");
        }
    }

    // Traversable cells must form one connected component.
    std::vector<char> seen(cells_.size(), 0);
    std::deque<Coord> queue;
    queue.push_back(workstations_.front());
    seen[index(queue.front())] = 1;
    int reached = 0;
    while (!queue.empty()) {
        const Coord cur = queue.front();
        queue.pop_front();
        ++reached;
        for (auto [dr, dc] : kNeighborOffsets) {
            const Coord n{cur.row + dr, cur.col + dc};
            if (in_bounds(n) && traversable(n) && !seen[index(n)]) {
                seen[index(n)] = 1;
                queue.push_back(n);
            }
        }
    }
    if (reached != traversable_count_) {
        throw std::runtime_error("traversable cells are not connected (" +
                                 std::to_string(reached) + " of " +
                                 std::to_string(traversable_count_) + " reachable)");
    }
}

DistanceField distance_field(const Floorplan& fp, std::span<const Coord> sources) {
    DistanceField field;
    field.width = fp.width();
    field.height = fp.height();
    field.dist.assign(size_t(fp.width()) * fp.height(), DistanceField::kUnreachable);

    std::deque<Coord> queue;
    for (const Coord& s : sources) {
        if (!fp.in_bounds(s) || !fp.traversable(s)) {
            throw std::runtime_error("distance field source not traversable");
        }
        if (field.dist[fp.index(s)] != 0) {
            field.dist[fp.index(s)] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const Coord cur = queue.front();
        queue.pop_front();
        const int next = field.dist[fp.index(cur)] + 1;
        for (auto [dr, dc] : kNeighborOffsets) {
            const Coord n{cur.row + dr, cur.col + dc};
            if (fp.in_bounds(n) && fp.traversable(n) &&
                field.dist[fp.index(n)] > next) {
                field.dist[fp.index(n)] = next;
                queue.push_back(n);
            }
        }
    }
    return field;
}

int chute_access_distance(const Floorplan& fp, int chute_id, const DistanceField& field) {
    int best = DistanceField::kUnreachable;
    for (const Coord& e : fp.chute_endpoints(chute_id)) {
        best = std::min(best, field.at(e));  // endpoints pre-sorted row-major
    }
    return best == DistanceField::kUnreachable ? best : best + 1;
}

Floorplan generate_map(const MapGenParams& p) {
    const int bh = p.chute_block_rows;
    const int bw = p.chute_block_cols;
    if (p.width < 7 || p.height < 5) throw std::domain_error("map too small");
    if (bh < 1 || bw < 1) throw std::domain_error("chute block must be at least 1x1");
    if (std::min(bh, bw) > 2) {
        throw std::domain_error("chute block interior would cut chutes off from endpoints");
    }
    if (p.corridor_x < 1 || p.corridor_y < 1) throw std::domain_error("corridors must be >= 1");
    if (p.workstation_count < 1) throw std::domain_error("need at least one workstation");

    Floorplan fp;
    fp.width_ = p.width;
    fp.height_ = p.height;
    fp.cells_.assign(size_t(p.width) * p.height, CellKind::Traversable);

    auto set = [&](int r, int c, CellKind k) { fp.cells_[r * p.width + c] = k; };

    for (int c = 0; c < p.width; ++c) {
        set(0, c, CellKind::Obstacle);
        set(p.height - 1, c, CellKind::Obstacle);
    }
    for (int r = 0; r < p.height; ++r) {
        set(r, 0, CellKind::Obstacle);
        set(r, p.width - 1, CellKind::Obstacle);
    }

    // Workstations sit flush in the first open column on each side, never
    // in wall pockets: a pocket is a dead end, and two robots meeting in a
    // dead end (one leaving, one entering) could only resolve by swapping,
    // which the coordinator forbids. Columns 1..2 and width-3..width-2
    // stay free of blocks so workstation traffic can pass.
    const int row_lo = 1, row_hi = p.height - 2;
    const int col_lo = 3, col_hi = p.width - 4;
    const int avail_rows = row_hi - row_lo + 1;
    const int avail_cols = col_hi - col_lo + 1;
    const int ring_h = bh + 2, ring_w = bw + 2;
    const int pitch_y = ring_h + p.corridor_y, pitch_x = ring_w + p.corridor_x;
    const int blocks_y = (avail_rows + p.corridor_y) / pitch_y;
    const int blocks_x = (avail_cols + p.corridor_x) / pitch_x;
    if (blocks_y < 1 || blocks_x < 1) {
        throw std::domain_error("chute blocks exceed floor area");
    }
    const int span_y = blocks_y * ring_h + (blocks_y - 1) * p.corridor_y;
    const int span_x = blocks_x * ring_w + (blocks_x - 1) * p.corridor_x;
    const int off_y = row_lo + (avail_rows - span_y) / 2;
    const int off_x = col_lo + (avail_cols - span_x) / 2;

    for (int by = 0; by < blocks_y; ++by) {
        for (int bx = 0; bx < blocks_x; ++bx) {
            const int top = off_y + by * pitch_y;   // ring top-left
            const int left = off_x + bx * pitch_x;
            for (int r = 0; r < bh; ++r) {
                for (int c = 0; c < bw; ++c) set(top + 1 + r, left + 1 + c, CellKind::Chute);
            }
            // Endpoint ring along the block faces; ring corners stay plain
            // floor (they touch no chute).
            for (int c = 0; c < bw; ++c) {
                set(top, left + 1 + c, CellKind::Endpoint);
                set(top + ring_h - 1, left + 1 + c, CellKind::Endpoint);
            }
            for (int r = 0; r < bh; ++r) {
                set(top + 1 + r, left, CellKind::Endpoint);
                set(top + 1 + r, left + ring_w - 1, CellKind::Endpoint);
            }
        }
    }

    // Workstations evenly spaced along both sides.
    const int per_side = (p.workstation_count + 1) / 2;
    const int left_n = per_side;
    const int right_n = p.workstation_count - per_side;
    if (left_n > avail_rows) throw std::domain_error("too many workstations for wall height");
    auto place_wall = [&](int col, int n) {
        for (int i = 0; i < n; ++i) {
            const int r = row_lo + int((int64_t(2 * i + 1) * avail_rows) / (2 * n));
            set(r, col, CellKind::Workstation);
        }
    };
    place_wall(1, left_n);
    if (right_n > 0) place_wall(p.width - 2, right_n);

    fp.finalize();
    return fp;
}

NavCache::NavCache(const Floorplan& fp) : fp_(&fp) {
    auto add_target = [&](Coord t) {
        const int idx = fp.index(t);
        if (!fields_.contains(idx)) {
            const Coord src[1] = {t};
            fields_.emplace(idx, distance_field(fp, src));
        }
    };
    for (const Coord& w : fp.workstations()) add_target(w);
    for (const Coord& e : fp.endpoints()) add_target(e);
    workstation_field_ = distance_field(fp, fp.workstations());
}

}  // namespace rss

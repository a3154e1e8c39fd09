#pragma once

#include <array>
#include <cmath>
#include <utility>

namespace rss {

struct Coord {
    int row = 0;
    int col = 0;

    friend bool operator==(const Coord&, const Coord&) = default;

    // Row-major order, used as the tie-break everywhere a coordinate
    // decides between otherwise equal options.
    friend bool operator<(const Coord& a, const Coord& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    }
};

inline double euclidean(const Coord& a, const Coord& b) {
    const double dr = a.row - b.row;
    const double dc = a.col - b.col;
    return std::sqrt(dr * dr + dc * dc);
}

// 4-neighborhood in a fixed order (up, right, down, left).
inline constexpr std::array<std::pair<int, int>, 4> kNeighborOffsets = {
    {{-1, 0}, {0, 1}, {1, 0}, {0, -1}}};

}  // namespace rss

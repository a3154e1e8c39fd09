#include "rss/taskmap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rss {

std::vector<double> DestinationProfile::volumes_with_recirc() const {
    std::vector<double> all = volumes;
    all.push_back(recirc_volume);
    return all;
}

DestinationProfile make_profile(int n, double recirc_volume) {
    if (n < 2) throw std::runtime_error("need at least 2 destinations");
    if (recirc_volume <= 0) throw std::runtime_error("recirc volume must be positive");

    const int high = int(std::ceil(0.1 * n));
    const int mid = int(std::ceil(0.2 * n));
    const int low = n - high - mid;

    double band_share[3] = {0.70, 0.20, 0.10};
    const int band_size[3] = {high, mid, low};
    double present = 0.0;
    for (int b = 0; b < 3; ++b) {
        if (band_size[b] > 0) present += band_share[b];
    }

    DestinationProfile profile;
    profile.n_destinations = n;
    profile.recirc_volume = recirc_volume;
    profile.volumes.reserve(n);
    for (int b = 0; b < 3; ++b) {
        if (band_size[b] == 0) continue;
        const double per = band_share[b] / present / band_size[b];
        for (int i = 0; i < band_size[b]; ++i) profile.volumes.push_back(per);
    }

    profile.cumulative.resize(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += profile.volumes[i];
        profile.cumulative[i] = acc;
    }
    profile.cumulative.back() = 1.0;
    return profile;
}

int sample_destination(const DestinationProfile& profile, Rng& rng) {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(profile.cumulative.begin(),
                                     profile.cumulative.end(), u);
    const int idx = int(it - profile.cumulative.begin());
    return std::min(idx, profile.n_destinations - 1) + 1;
}

std::vector<std::vector<int>> TaskMapping::chutes_by_destination() const {
    std::vector<std::vector<int>> by_dest(n_destinations + 1);
    for (int chute = 1; chute <= chute_count(); ++chute) {
        const int d = dest_of(chute);
        if (d < 1 || d > n_destinations + 1) {
            throw std::runtime_error("chute " + std::to_string(chute) +
                                     " mapped to out-of-range destination " +
                                     std::to_string(d));
        }
        by_dest[d - 1].push_back(chute);
    }
    return by_dest;
}

std::vector<int> TaskMapping::chutes_of(int dest_id) const {
    std::vector<int> out;
    for (int chute = 1; chute <= chute_count(); ++chute) {
        if (dest_of(chute) == dest_id) out.push_back(chute);
    }
    return out;
}

std::vector<MappingViolation> validate(const TaskMapping& m) {
    std::vector<MappingViolation> violations;
    const auto by_dest = m.chutes_by_destination();
    for (int d = 1; d <= m.n_destinations + 1; ++d) {
        if (by_dest[d - 1].empty()) {
            violations.push_back({d, d == m.recirc_id()
                                         ? "recirculation has no chutes"
                                         : "destination has no chutes"});
        }
    }
    return violations;
}

double centroid_distance(std::span<const Coord> chute_coords) {
    if (chute_coords.empty()) throw std::runtime_error("empty chute set");
    double cr = 0.0, cc = 0.0;
    for (const Coord& c : chute_coords) {
        cr += c.row;
        cc += c.col;
    }
    cr /= double(chute_coords.size());
    cc /= double(chute_coords.size());
    double total = 0.0;
    for (const Coord& c : chute_coords) {
        const double dr = c.row - cr, dc = c.col - cc;
        total += std::sqrt(dr * dr + dc * dc);
    }
    return total / double(chute_coords.size());
}

double centroid_distance_of(const TaskMapping& m, int dest_id, const Floorplan& fp) {
    std::vector<Coord> coords;
    for (int chute = 1; chute <= m.chute_count(); ++chute) {
        if (m.dest_of(chute) == dest_id) coords.push_back(fp.chute_coord(chute));
    }
    return centroid_distance(coords);
}

int high_volume_count(const DestinationProfile& profile) {
    return std::max(1, int(std::ceil(0.05 * profile.n_destinations)));
}

double measure_acd(const TaskMapping& m, const DestinationProfile& profile,
                   const Floorplan& fp) {
    const int k = high_volume_count(profile);
    double total = 0.0;
    for (int d = 1; d <= k; ++d) total += centroid_distance_of(m, d, fp);
    return total / k;
}

double measure_amdw(const TaskMapping& m, const DestinationProfile& profile,
                    const Floorplan& fp, const DistanceField& workstation_field) {
    const int k = high_volume_count(profile);
    double total = 0.0;
    int chute_total = 0;
    for (int chute = 1; chute <= m.chute_count(); ++chute) {
        if (m.dest_of(chute) <= k) {
            total += chute_access_distance(fp, chute, workstation_field);
            ++chute_total;
        }
    }
    if (chute_total == 0) throw std::runtime_error("no chutes on high-volume destinations");
    return total / chute_total;
}

std::string serialize_mapping(const TaskMapping& m) {
    std::string out = "taskmap v1\n";
    out += "chutes " + std::to_string(m.chute_count()) + "\n";
    out += "destinations " + std::to_string(m.n_destinations) + "\n";
    for (int chute = 1; chute <= m.chute_count(); ++chute) {
        const int d = m.dest_of(chute);
        out += std::to_string(chute) + " " +
               (d == m.recirc_id() ? std::string("RECIRC") : std::to_string(d)) + "\n";
    }
    return out;
}

TaskMapping parse_mapping(const std::string& text) {
    std::istringstream in(text);
    std::string magic, version;
    if (!(in >> magic >> version) || magic != "taskmap" || version != "v1") {
        throw std::runtime_error("not a taskmap v1 file");
    }
    std::string key;
    int m_chutes = 0, n_dests = 0;
    if (!(in >> key >> m_chutes) || key != "chutes" || m_chutes < 1) {
        throw std::runtime_error("taskmap: bad chute count");
    }
    if (!(in >> key >> n_dests) || key != "destinations" || n_dests < 1) {
        throw std::runtime_error("taskmap: bad destination count");
    }
    TaskMapping m;
    m.n_destinations = n_dests;
    m.dest_of_chute.assign(m_chutes, 0);
    for (int i = 0; i < m_chutes; ++i) {
        int chute_id = 0;
        std::string dest_tok;
        if (!(in >> chute_id >> dest_tok)) {
            throw std::runtime_error("taskmap: truncated record list");
        }
        if (chute_id < 1 || chute_id > m_chutes) {
            throw std::runtime_error("taskmap: chute id out of range");
        }
        int dest = 0;
        if (dest_tok == "RECIRC") {
            dest = m.recirc_id();
        } else {
            dest = std::stoi(dest_tok);
            if (dest < 1 || dest > n_dests) {
                throw std::runtime_error("taskmap: destination out of range");
            }
        }
        if (m.dest_of_chute[chute_id - 1] != 0) {
            throw std::runtime_error("taskmap: duplicate chute record");
        }
        m.dest_of_chute[chute_id - 1] = dest;
    }
    return m;
}

}  // namespace rss

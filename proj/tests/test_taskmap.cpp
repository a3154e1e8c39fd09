#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "rss/taskmap.hpp"

using namespace rss;

TEST_CASE("profile for N=10 puts 70% on the single top destination") {
    const DestinationProfile p = make_profile(10);
    REQUIRE(p.volumes.size() == 10);
    CHECK(p.volumes[0] == doctest::Approx(0.70).epsilon(1e-12));
    CHECK(p.volumes[1] == doctest::Approx(0.10).epsilon(1e-12));
    CHECK(p.volumes[2] == doctest::Approx(0.10).epsilon(1e-12));
    for (int i = 3; i < 10; ++i) {
        CHECK(p.volumes[i] == doctest::Approx(0.1 / 7.0).epsilon(1e-12));
    }
}

TEST_CASE("profile band sizes follow the ceiling rule") {
    const DestinationProfile p = make_profile(99);
    // bands of 10, 20, 69
    CHECK(p.volumes[0] == doctest::Approx(0.07));
    CHECK(p.volumes[9] == doctest::Approx(0.07));
    CHECK(p.volumes[10] == doctest::Approx(0.01));
    CHECK(p.volumes[29] == doctest::Approx(0.01));
    CHECK(p.volumes[30] == doctest::Approx(0.10 / 69.0));
    CHECK(p.volumes[98] == doctest::Approx(0.10 / 69.0));
}

TEST_CASE("profile probabilities sum to one for every N up to 300") {
    for (int n = 2; n <= 300; ++n) {
        const DestinationProfile p = make_profile(n);
        const double sum = std::accumulate(p.volumes.begin(), p.volumes.end(), 0.0);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::is_sorted(p.volumes.rbegin(), p.volumes.rend()));
    }
}

TEST_CASE("profile rejects degenerate inputs") {
    CHECK_THROWS(make_profile(1));
    CHECK_THROWS(make_profile(0));
    CHECK_THROWS(make_profile(10, 0.0));
}

TEST_CASE("empty low band redistributes its share") {
    // N=2: bands are 1/1/0, so the 10% low share spreads over the others.
    const DestinationProfile p = make_profile(2);
    CHECK(p.volumes[0] == doctest::Approx(0.7 / 0.9));
    CHECK(p.volumes[1] == doctest::Approx(0.2 / 0.9));

    Rng rng(11);
    int top = 0;
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i) {
        if (sample_destination(p, rng) == 1) ++top;
    }
    CHECK(double(top) / draws == doctest::Approx(0.7 / 0.9).epsilon(0.007));
}

TEST_CASE("sampling is deterministic per seed and never returns recirc") {
    const DestinationProfile p = make_profile(17);
    Rng a(5), b(5);
    for (int i = 0; i < 1000; ++i) {
        const int da = sample_destination(p, a);
        CHECK(da == sample_destination(p, b));
        CHECK(da >= 1);
        CHECK(da <= 17);
    }
}

TEST_CASE("centroid distance basics") {
    CHECK(centroid_distance(std::vector<Coord>{{3, 4}}) == doctest::Approx(0.0));
    CHECK(centroid_distance(std::vector<Coord>{{0, 0}, {2, 0}}) ==
          doctest::Approx(1.0));
    CHECK(centroid_distance(std::vector<Coord>{{0, 0}, {0, 2}, {2, 0}, {2, 2}}) ==
          doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS(centroid_distance({}));
}

TEST_CASE("centroid distance is translation invariant and scales linearly") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Coord> pts, shifted, scaled;
        const int n = 2 + int(uniform_below(rng, 6));
        for (int i = 0; i < n; ++i) {
            const Coord c{int(uniform_below(rng, 20)), int(uniform_below(rng, 20))};
            pts.push_back(c);
            shifted.push_back({c.row + 7, c.col - 3});
            scaled.push_back({c.row * 3, c.col * 3});
        }
        const double base = centroid_distance(pts);
        CHECK(centroid_distance(shifted) == doctest::Approx(base).epsilon(1e-9));
        CHECK(centroid_distance(scaled) == doctest::Approx(3.0 * base).epsilon(1e-9));
    }
}

namespace {

Floorplan grid_map() {
    MapGenParams p;
    p.width = 30;
    p.height = 20;
    p.chute_block_rows = 2;
    p.chute_block_cols = 2;
    p.workstation_count = 6;
    return generate_map(p);
}

TaskMapping random_valid_mapping(const Floorplan& fp, int n_destinations, Rng& rng) {
    TaskMapping m;
    m.n_destinations = n_destinations;
    m.dest_of_chute.resize(fp.chute_count());
    // one chute per destination first, the rest random
    for (int d = 1; d <= n_destinations + 1; ++d) m.dest_of_chute[d - 1] = d;
    for (int c = n_destinations + 1; c < fp.chute_count(); ++c) {
        m.dest_of_chute[c] = uniform_int(rng, 1, n_destinations + 1);
    }
    return m;
}

}  // namespace

TEST_CASE("validate reports destinations with no chutes") {
    TaskMapping m;
    m.n_destinations = 4;
    m.dest_of_chute = {1, 2, 4, 5, 5};  // destination 3 empty
    const auto violations = validate(m);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].dest_id == 3);

    m.dest_of_chute = {1, 2, 3, 4, 4};  // recirc (5) empty
    const auto v2 = validate(m);
    REQUIRE(v2.size() == 1);
    CHECK(v2[0].dest_id == 5);

    m.dest_of_chute = {1, 2, 3, 4, 5};
    CHECK(validate(m).empty());
}

TEST_CASE("ACD with single-chute top destinations is zero") {
    const Floorplan fp = grid_map();
    const DestinationProfile profile = make_profile(20);  // top band = 1 dest
    Rng rng(8);
    TaskMapping m = random_valid_mapping(fp, 20, rng);
    m.dest_of_chute[0] = 1;
    for (int c = 1; c < fp.chute_count(); ++c) {
        if (m.dest_of_chute[c] == 1) m.dest_of_chute[c] = 2;
    }
    CHECK(high_volume_count(profile) == 1);
    CHECK(measure_acd(m, profile, fp) == doctest::Approx(0.0));
    // with exactly one high-volume destination, ACD is its centroid distance
    m.dest_of_chute[1] = 1;
    CHECK(measure_acd(m, profile, fp) ==
          doctest::Approx(centroid_distance_of(m, 1, fp)));
}

TEST_CASE("measures match an independent recomputation on random mappings") {
    const Floorplan fp = grid_map();
    const DestinationProfile profile = make_profile(14);
    const DistanceField wf = distance_field(fp, fp.workstations());
    Rng rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        const TaskMapping m = random_valid_mapping(fp, 14, rng);

        const int k = high_volume_count(profile);
        double acd = 0.0;
        for (int d = 1; d <= k; ++d) {
            std::vector<Coord> coords;
            for (int c = 1; c <= m.chute_count(); ++c) {
                if (m.dest_of(c) == d) coords.push_back(fp.chute_coord(c));
            }
            acd += centroid_distance(coords);
        }
        acd /= k;
        CHECK(measure_acd(m, profile, fp) == doctest::Approx(acd).epsilon(1e-12));

        // AMDW against per-chute single-source BFS from each endpoint set
        double total = 0.0;
        int count = 0;
        for (int c = 1; c <= m.chute_count(); ++c) {
            if (m.dest_of(c) > k) continue;
            int best = DistanceField::kUnreachable;
            for (const Coord& e : fp.chute_endpoints(c)) {
                const Coord src[1] = {e};
                const DistanceField single = distance_field(fp, src);
                int nearest = DistanceField::kUnreachable;
                for (const Coord& w : fp.workstations()) {
                    nearest = std::min(nearest, single.at(w));
                }
                best = std::min(best, nearest + 1);
            }
            total += best;
            ++count;
        }
        CHECK(measure_amdw(m, profile, fp, wf) ==
              doctest::Approx(total / count).epsilon(1e-12));
    }
}

TEST_CASE("measures ignore chute order within a destination") {
    const Floorplan fp = grid_map();
    const DestinationProfile profile = make_profile(14);
    const DistanceField wf = distance_field(fp, fp.workstations());
    Rng rng(4);
    const TaskMapping m = random_valid_mapping(fp, 14, rng);

    // Swapping two chutes of the same destination changes nothing.
    TaskMapping swapped = m;
    int a = -1, b = -1;
    for (int c = 1; c <= m.chute_count() && b < 0; ++c) {
        if (m.dest_of(c) == 1) (a < 0 ? a : b) = c;
    }
    if (b > 0) {
        std::swap(swapped.dest_of_chute[a - 1], swapped.dest_of_chute[b - 1]);
        CHECK(measure_acd(swapped, profile, fp) ==
              doctest::Approx(measure_acd(m, profile, fp)));
        CHECK(measure_amdw(swapped, profile, fp, wf) ==
              doctest::Approx(measure_amdw(m, profile, fp, wf)));
    }
}

TEST_CASE("AMDW averages access distances over high-volume chutes") {
    const Floorplan fp = Floorplan::parse(
        "5 7\n"
        "@@@@@@@\n"
        "@w.e.e@\n"
        "@..c.c@\n"
        "@.....@\n"
        "@@@@@@@\n");
    // Both chutes carry destination 1, the only high-volume one.
    TaskMapping m;
    m.n_destinations = 1;
    m.dest_of_chute = {1, 1};
    DestinationProfile profile;
    profile.n_destinations = 1;
    profile.volumes = {1.0};
    profile.cumulative = {1.0};

    SUBCASE("endpoints at field distance zero give exactly 1.0") {
        DistanceField field;
        field.width = 7;
        field.height = 5;
        field.dist.assign(35, 0);
        CHECK(measure_amdw(m, profile, fp, field) == doctest::Approx(1.0));
    }
    SUBCASE("access distances 3 and 5 average to 4.0") {
        DistanceField field;
        field.width = 7;
        field.height = 5;
        field.dist.assign(35, DistanceField::kUnreachable);
        field.dist[fp.index({1, 3})] = 2;  // access 3
        field.dist[fp.index({1, 5})] = 4;  // access 5
        CHECK(measure_amdw(m, profile, fp, field) == doctest::Approx(4.0));
    }
}

TEST_CASE("mapping files round-trip including the recirculation token") {
    TaskMapping m;
    m.n_destinations = 3;
    m.dest_of_chute = {2, 4, 1, 3, 4};
    const std::string text = serialize_mapping(m);
    CHECK(text.find("RECIRC") != std::string::npos);
    const TaskMapping back = parse_mapping(text);
    CHECK(back == m);
    CHECK(serialize_mapping(back) == text);
}

TEST_CASE("mapping parser rejects malformed files") {
    CHECK_THROWS(parse_mapping("garbage"));
    CHECK_THROWS(parse_mapping("taskmap v1\nchutes 2\ndestinations 1\n1 1\n"));
    CHECK_THROWS(parse_mapping("taskmap v1\nchutes 1\ndestinations 1\n1 9\n"));
    CHECK_THROWS(parse_mapping("taskmap v1\nchutes 2\ndestinations 1\n1 1\n1 2\n"));
}

// Edge-graph construction and the seven-step graph filter.
#include <doctest.h>

#include "edcssm/wind_erosion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

using namespace edcssm;

namespace {

BinaryMap map_from(int rows, int cols, const std::vector<std::pair<int, int>>& px) {
    BinaryMap m(rows, cols);
    for (const auto& [r, c] : px)
        m.set(r, c, 255);
    return m;
}

std::set<std::pair<int, int>> pixel_set(const BinaryMap& m) {
    std::set<std::pair<int, int>> s;
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            if (m.is_edge(r, c))
                s.insert({r, c});
    return s;
}

// X: both diagonals of a 13x13 region, crossing at (6,6).
BinaryMap x_cross() {
    std::vector<std::pair<int, int>> px;
    for (int i = 2; i <= 10; ++i) {
        px.push_back({i, i});
        if (i != 6)
            px.push_back({i, 12 - i});
    }
    return map_from(13, 13, px);
}

// T: horizontal bar row 4, cols 2..10, with a stem down col 6 rows 5..10.
// Eight-connectivity makes a four-pixel junction cluster where they meet.
BinaryMap t_form() {
    std::vector<std::pair<int, int>> px;
    for (int c = 2; c <= 10; ++c)
        px.push_back({4, c});
    for (int r = 5; r <= 10; ++r)
        px.push_back({r, 6});
    return map_from(13, 13, px);
}

// A horizontal line with a two-pixel spur hanging below its middle.
BinaryMap spur_line() {
    std::vector<std::pair<int, int>> px;
    for (int c = 2; c <= 17; ++c)
        px.push_back({5, c});
    px.push_back({6, 9});
    px.push_back({7, 9});
    return map_from(12, 20, px);
}

} // namespace

TEST_CASE("graph construction: crossing diagonals bridge straight through") {
    EdgeGraph g = build_edge_graph(x_cross());
    REQUIRE(g.junctions.size() == 1);
    CHECK(g.junctions[0] == PixelCoord{6, 6});
    REQUIRE(g.segments.size() == 2);
    for (const EdgeSegment& s : g.segments) {
        CHECK(s.length() == 8);
        CHECK_FALSE(s.is_cycle);
        REQUIRE(s.bridges.size() == 1);
        CHECK(s.bridges[0].position == 4);
        CHECK(s.bridges[0].junction == PixelCoord{6, 6});
        CHECK(s.endpoints().size() == 2);
    }
}

TEST_CASE("graph construction: a T-meet forms a junction cluster, no bridges") {
    EdgeGraph g = build_edge_graph(t_form());
    // The stem top (5,6) touches three bar pixels, which in turn see three
    // edge neighbors each: four junction pixels, three chains around them.
    REQUIRE(g.junctions.size() == 4);
    std::set<std::pair<int, int>> junctions;
    for (const PixelCoord& j : g.junctions)
        junctions.insert({j.row, j.col});
    CHECK(junctions ==
          std::set<std::pair<int, int>>{{4, 5}, {4, 6}, {4, 7}, {5, 6}});
    REQUIRE(g.segments.size() == 3);
    std::vector<int> lengths;
    for (const EdgeSegment& s : g.segments) {
        lengths.push_back(s.length());
        CHECK(s.bridges.empty());
    }
    std::sort(lengths.begin(), lengths.end());
    CHECK(lengths == std::vector<int>{3, 3, 5});
}

TEST_CASE("a T survives whole when all arms beat the bar, and dies whole otherwise") {
    WindErosionResult keep = wind_erosion(t_form(), {3.0, 3, 3, 0.5, 2});
    CHECK(pixel_set(keep.output) == pixel_set(t_form()));

    WindErosionResult drop = wind_erosion(t_form(), ErosionParams{});
    CHECK(drop.output.edge_count() == 0);
}

// Diamond ring centered (6,6), radius 4: the only shape that is a clean
// 8-connected cycle (axis-aligned squares touch diagonally at the corners
// and grow junctions).
std::vector<std::pair<int, int>> diamond_pixels() {
    std::vector<std::pair<int, int>> px;
    for (int r = 2; r <= 10; ++r) {
        const int d = 4 - std::abs(r - 6);
        px.push_back({r, 6 - d});
        if (d != 0)
            px.push_back({r, 6 + d});
    }
    return px;
}

TEST_CASE("graph construction: closed contours become cycles") {
    BinaryMap ring = map_from(13, 13, diamond_pixels());
    EdgeGraph g = build_edge_graph(ring);
    CHECK(g.junctions.empty());
    REQUIRE(g.segments.size() == 1);
    CHECK(g.segments[0].is_cycle);
    CHECK(g.segments[0].length() == 16);
    CHECK(g.segments[0].endpoints().empty());
}

TEST_CASE("deleting all four short X arms leaves nothing, with exact accounting") {
    WindErosionResult res = wind_erosion(x_cross(), {3.0, 11, 3, 0.5, 2});
    CHECK(res.output.edge_count() == 0);
    CHECK(res.trace.input_edge_pixels == 17);
    CHECK(res.trace.output_edge_pixels == 0);
    CHECK(res.trace.deleted_segment_pixels == 16);
    CHECK(res.trace.dropped_junction_pixels == 1);
    REQUIRE(res.trace.steps.size() == 7);
    CHECK(res.trace.steps[0].name == "find_boundaries");
    CHECK(res.trace.steps[3].name == "clear_edges");
    CHECK(res.trace.steps[3].deleted_this_step == 4);
    CHECK(res.trace.steps[6].name == "restore_boundaries");
}

TEST_CASE("an X whose arms meet the length bar survives whole") {
    WindErosionResult res = wind_erosion(x_cross(), {3.0, 4, 3, 0.5, 2});
    CHECK(pixel_set(res.output) == pixel_set(x_cross()));
    CHECK(res.trace.dropped_junction_pixels == 0);
}

TEST_CASE("a spur is erased and the line it decorated is healed seamlessly") {
    WindErosionResult res = wind_erosion(spur_line(), {3.0, 5, 3, 0.5, 2});
    std::set<std::pair<int, int>> want;
    for (int c = 2; c <= 17; ++c)
        want.insert({5, c});
    CHECK(pixel_set(res.output) == want);
    CHECK(res.trace.input_edge_pixels == 18);
    CHECK(res.trace.deleted_segment_pixels == 1);  // the spur tail
    CHECK(res.trace.dropped_junction_pixels == 1); // the spur root
}

TEST_CASE("scattered isolated pixels are wiped out") {
    std::vector<std::pair<int, int>> px;
    for (int r = 3; r < 18; r += 3)
        for (int c = 4; c < 18; c += 4)
            px.push_back({r, c});
    BinaryMap noise = map_from(21, 21, px);
    WindErosionResult res = wind_erosion(noise, ErosionParams{});
    CHECK(res.output.edge_count() == 0);
    CHECK(res.trace.deleted_segment_pixels == noise.edge_count());
}

TEST_CASE("segments inside the boundary band are exempt from deletion") {
    std::vector<std::pair<int, int>> px;
    for (int c = 3; c <= 6; ++c)
        px.push_back({1, c}); // 4 px, inside a 2-pixel band
    BinaryMap m = map_from(16, 16, px);
    WindErosionResult res = wind_erosion(m, ErosionParams{});
    CHECK(pixel_set(res.output) == pixel_set(m));
    CHECK(res.trace.steps[0].ce_segments == 1);

    // The same short line in the interior disappears.
    std::vector<std::pair<int, int>> px2;
    for (int c = 3; c <= 6; ++c)
        px2.push_back({8, c});
    WindErosionResult res2 = wind_erosion(map_from(16, 16, px2), ErosionParams{});
    CHECK(res2.output.edge_count() == 0);
}

TEST_CASE("length-protected edges survive an otherwise lethal threshold") {
    std::vector<std::pair<int, int>> px;
    for (int c = 2; c <= 37; ++c)
        px.push_back({10, c}); // 36 px
    for (int c = 10; c <= 19; ++c)
        px.push_back({20, c}); // 10 px
    for (int c = 10; c <= 14; ++c)
        px.push_back({30, c}); // 5 px
    BinaryMap m = map_from(40, 40, px);
    // Mean length 17; the 36-px line exceeds 1.3 * 17 and is protected.
    // Everything shorter than 25 is cleared.
    WindErosionResult res = wind_erosion(m, {1.3, 25, 3, 0.5, 2});
    std::set<std::pair<int, int>> want;
    for (int c = 2; c <= 37; ++c)
        want.insert({10, c});
    CHECK(pixel_set(res.output) == want);
    CHECK(res.trace.steps[1].pt_segments == 1);
}

TEST_CASE("a ring keeps its vertex after its tail is eroded") {
    std::vector<std::pair<int, int>> px = diamond_pixels();
    px.push_back({1, 6});
    px.push_back({0, 6});
    BinaryMap lollipop = map_from(13, 13, px);

    WindErosionResult res = wind_erosion(lollipop, {3.0, 10, 3, 0.5, 0});
    const std::vector<std::pair<int, int>> ring_px = diamond_pixels();
    const std::set<std::pair<int, int>> ring(ring_px.begin(), ring_px.end());
    CHECK(pixel_set(res.output) == ring);
    CHECK(res.trace.deleted_segment_pixels == 2);
}

TEST_CASE("the filter only ever removes pixels and is deterministic") {
    std::mt19937_64 rng(4242);
    std::bernoulli_distribution edge(0.35);
    BinaryMap m(24, 24);
    for (int r = 0; r < 24; ++r)
        for (int c = 0; c < 24; ++c)
            if (edge(rng))
                m.set(r, c, 255);

    WindErosionResult a = wind_erosion(m, ErosionParams{});
    WindErosionResult b = wind_erosion(m, ErosionParams{});
    CHECK(a.output == b.output);

    const auto in = pixel_set(m);
    for (const auto& p : pixel_set(a.output))
        CHECK(in.count(p) == 1);
    CHECK(a.trace.input_edge_pixels ==
          a.trace.output_edge_pixels + a.trace.deleted_segment_pixels +
              a.trace.dropped_junction_pixels);
}

TEST_CASE("long edges split at their crossings before protection is decided") {
    // Long diagonal (17 px incl. the crossing) crossed by a short
    // anti-diagonal; two far-away 3-px lines drag the mean down.
    std::vector<std::pair<int, int>> px;
    for (int i = 2; i <= 18; ++i)
        px.push_back({i, i});
    px.push_back({3, 7});
    px.push_back({4, 6});
    px.push_back({6, 4});
    px.push_back({7, 3});
    for (int c = 12; c <= 14; ++c) {
        px.push_back({3, c});
        px.push_back({18, c - 10});
    }
    BinaryMap m = map_from(24, 24, px);
    EdgeGraph g = build_edge_graph(m);
    REQUIRE(g.junctions.size() == 1);
    CHECK(g.junctions[0] == PixelCoord{5, 5});

    bool saw_long = false;
    for (const EdgeSegment& s : g.segments)
        if (s.length() == 16) {
            saw_long = true;
            REQUIRE(s.bridges.size() == 1);
            CHECK(s.bridges[0].position == 3);
        }
    REQUIRE(saw_long);

    // Segment lengths 16, 4, 3, 3: mean 6.5, so only 16 > 13 splits, at its
    // bridge, into 3 + 13.
    process_long_edges(g, 2.4);
    std::vector<int> lengths;
    for (const EdgeSegment& s : g.segments)
        lengths.push_back(s.length());
    std::sort(lengths.begin(), lengths.end());
    CHECK(lengths == std::vector<int>{3, 3, 3, 4, 13});
    // New mean 5.2; only the 13-px child clears 2.4 * 5.2 = 12.48.
    int pt_count = 0;
    for (const EdgeSegment& s : g.segments)
        pt_count += s.pt ? 1 : 0;
    CHECK(pt_count == 1);
}

TEST_CASE("restoration by junction vote needs a small enough cut share") {
    // Build a synthetic parent with four children, three surviving.
    EdgeGraph g;
    g.rows = g.cols = 10;
    for (int i = 0; i < 4; ++i) {
        EdgeSegment s;
        s.id = i;
        s.pixels = {{i, 0}, {i, 1}};
        g.segments.push_back(s);
    }
    g.next_id = 4;
    g.parent_children[100] = {0, 1, 2, 3};
    g.deleted = {3};
    restore_junctions(g, 3, 0.5);
    CHECK(g.deleted.empty()); // 1 cut of 4 < min(3, 0.5*4)

    g.deleted = {1, 2, 3};
    restore_junctions(g, 3, 0.5);
    // 3 cuts of 4: not under the count bar -> the whole family goes.
    CHECK(g.deleted == std::set<int>{0, 1, 2, 3});
}

TEST_CASE("parameters are validated") {
    BinaryMap m(4, 4);
    CHECK_THROWS_AS(wind_erosion(m, {0.0, 10, 3, 0.5, 2}), std::invalid_argument);
    CHECK_THROWS_AS(wind_erosion(m, {3.0, -1, 3, 0.5, 2}), std::invalid_argument);
    CHECK_THROWS_AS(wind_erosion(m, {3.0, 10, -1, 0.5, 2}), std::invalid_argument);
    CHECK_THROWS_AS(wind_erosion(m, {3.0, 10, 3, 1.5, 2}), std::invalid_argument);
    CHECK_THROWS_AS(wind_erosion(m, {3.0, 10, 3, 0.5, -2}), std::invalid_argument);
}

#include <doctest.h>

#include "fusetrack/flow.hpp"
#include "fusetrack/rng.hpp"

using namespace fusetrack;
using namespace fusetrack::flow;

namespace {

Image8 textured(int w, int h, std::uint64_t seed) {
    Image8 img(w, h, 1);
    SplitMix64 rng(seed);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.next() & 0xff);
    return img;
}

// curr = prev shifted by (dx, dy), border filled with a constant.
Image8 shifted(const Image8& prev, int dx, int dy) {
    Image8 out(prev.width, prev.height, 1);
    for (int y = 0; y < prev.height; ++y) {
        for (int x = 0; x < prev.width; ++x) {
            int sx = x - dx, sy = y - dy;
            out.at(x, y) = (sx >= 0 && sx < prev.width && sy >= 0 &&
                            sy < prev.height)
                               ? prev.at(sx, sy)
                               : 17;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("identical frames give zero displacement") {
    Image8 a = textured(48, 48, 1);
    FlowVector fv = block_flow(a, a, {10, 10, 16, 16}, 4);
    CHECK(fv.vx == 0);
    CHECK(fv.vy == 0);
    CHECK(fv.confidence > 0.5);  // textured patch, sharp minimum
}

TEST_CASE("synthetic translation recovered") {
    Image8 prev = textured(64, 64, 2);
    Image8 curr = shifted(prev, 3, 0);
    FlowVector fv = block_flow(prev, curr, {20, 20, 16, 16}, 6);
    CHECK(fv.vx == 3);
    CHECK(fv.vy == 0);

    curr = shifted(prev, -2, 4);
    fv = block_flow(prev, curr, {20, 20, 16, 16}, 6);
    CHECK(fv.vx == -2);
    CHECK(fv.vy == 4);
}

TEST_CASE("uniform images give zero displacement with zero confidence") {
    Image8 a(32, 32, 1);
    Image8 b(32, 32, 1);
    for (auto& v : a.data) v = 90;
    for (auto& v : b.data) v = 90;
    FlowVector fv = block_flow(a, b, {8, 8, 10, 10}, 3);
    CHECK(fv.vx == 0);
    CHECK(fv.vy == 0);
    CHECK(fv.confidence == 0);
}

TEST_CASE("degenerate region throws") {
    Image8 a = textured(32, 32, 3);
    CHECK_THROWS_AS(block_flow(a, a, {40, 40, 10, 10}, 3), DegenerateRegionError);
    CHECK_THROWS_AS(block_flow(a, a, {5, 5, 0, 0}, 3), DegenerateRegionError);
}

TEST_CASE("displacement never exceeds the search radius") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        Image8 prev = textured(40, 40, 100 + trial);
        Image8 curr = textured(40, 40, 200 + trial);
        int radius = 1 + static_cast<int>(rng.next() % 5);
        FlowVector fv = block_flow(prev, curr, {8, 8, 12, 12}, radius);
        CHECK(std::abs(fv.vx) <= radius);
        CHECK(std::abs(fv.vy) <= radius);
        CHECK(fv.confidence >= 0);
        CHECK(fv.confidence <= 1);
    }
}

TEST_CASE("antisymmetry on clean integer translations") {
    Image8 prev = textured(64, 64, 4);
    for (int dx = -3; dx <= 3; dx += 2) {
        for (int dy = -3; dy <= 3; dy += 3) {
            Image8 curr = shifted(prev, dx, dy);
            FlowVector fwd = block_flow(prev, curr, {24, 24, 14, 14}, 5);
            BoundingBox moved{24.0 + dx, 24.0 + dy, 14, 14};
            FlowVector bwd = block_flow(curr, prev, moved, 5);
            CHECK(fwd.vx == dx);
            CHECK(fwd.vy == dy);
            CHECK(bwd.vx == -fwd.vx);
            CHECK(bwd.vy == -fwd.vy);
        }
    }
}

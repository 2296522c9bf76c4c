#include <doctest.h>

#include "fusetrack/fusion.hpp"
#include "fusetrack/rng.hpp"

using namespace fusetrack;
using namespace fusetrack::fusion;

namespace {

Image8 pattern(int w, int h, int c, std::uint64_t seed) {
    Image8 img(w, h, c);
    SplitMix64 rng(seed);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.next() & 0xff);
    return img;
}

}  // namespace

TEST_CASE("synchronize identity") {
    Image8 depth = pattern(64, 32, 1, 1);
    Image8 synced = synchronize_depth(depth, 64, 32);
    CHECK(synced.data == depth.data);
}

TEST_CASE("synchronize pads symmetrically") {
    Image8 depth = pattern(32, 32, 1, 2);
    Image8 synced = synchronize_depth(depth, 64, 32);
    REQUIRE(synced.width == 64);
    REQUIRE(synced.height == 32);
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 16; ++x) {
            CHECK(synced.at(x, y) == 0);
            CHECK(synced.at(48 + x, y) == 0);
        }
        for (int x = 0; x < 32; ++x) CHECK(synced.at(16 + x, y) == depth.at(x, y));
    }
}

TEST_CASE("synchronize center-crops with offset arithmetic oracle") {
    Image8 depth = pattern(100, 40, 1, 3);
    Image8 synced = synchronize_depth(depth, 64, 32);
    REQUIRE(synced.width == 64);
    REQUIRE(synced.height == 32);
    // independent index arithmetic: crop offsets (18, 4)
    const int ox = (100 - 64) / 2, oy = (40 - 32) / 2;
    CHECK(ox == 18);
    CHECK(oy == 4);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 64; ++x)
            CHECK(synced.at(x, y) == depth.at(x + ox, y + oy));
}

TEST_CASE("concat dimensions and offset") {
    Image8 x_r = pattern(64, 32, 3, 4);
    Image8 x_s = pattern(64, 32, 1, 5);
    FusedFrame frame = concat_frames(x_r, x_s);
    CHECK(frame.image.width == 64);
    CHECK(frame.image.height == 64);
    CHECK(frame.offset_o == 32);
    // pixel (10, 5) of x_s appears at (10, 37)
    CHECK(frame.image.at(10, 37, 0) == x_s.at(10, 5));

    CHECK_THROWS_AS(concat_frames(pattern(64, 8, 3, 6), pattern(32, 8, 3, 7)),
                    WidthMismatchError);
}

TEST_CASE("concat then split at offset recovers both inputs byte-exactly") {
    Image8 x_r = pattern(48, 20, 3, 8);
    Image8 x_s = pattern(48, 12, 3, 9);
    FusedFrame frame = concat_frames(x_r, x_s);
    std::size_t cut = static_cast<std::size_t>(frame.offset_o) * 48 * 3;
    std::vector<std::uint8_t> top(frame.image.data.begin(),
                                  frame.image.data.begin() + cut);
    std::vector<std::uint8_t> bottom(frame.image.data.begin() + cut,
                                     frame.image.data.end());
    CHECK(top == x_r.data);
    CHECK(bottom == x_s.data);
}

TEST_CASE("split predictions partitions by half") {
    FusedFrame frame;
    frame.rgb_w = 64;
    frame.rgb_h = 32;
    frame.depth_w = 64;
    frame.depth_h = 32;
    frame.offset_o = 32;

    std::vector<Detection> dets;
    dets.push_back({{5, 5, 10, 10}, 0.9, Modality::RGB});
    dets.push_back({{5, 37, 10, 10}, 0.8, Modality::RGB});
    auto [rgb, depth] = split_predictions(dets, frame);
    REQUIRE(rgb.size() == 1);
    REQUIRE(depth.size() == 1);
    CHECK(rgb[0].box.y == 5);
    CHECK(rgb[0].modality == Modality::RGB);
    CHECK(depth[0].box.y == 5);  // y - offset
    CHECK(depth[0].box.x == 5);
    CHECK(depth[0].modality == Modality::DEPTH);
}

TEST_CASE("random boxes: partition and translation vs scalar recomputation") {
    FusedFrame frame;
    frame.rgb_w = 100;
    frame.rgb_h = 50;
    frame.depth_w = 100;
    frame.depth_h = 50;
    frame.offset_o = 50;

    SplitMix64 rng(42);
    std::vector<Detection> dets;
    for (int i = 0; i < 20; ++i) {
        Detection d;
        d.box.w = rng.uniform(4, 20);
        d.box.h = rng.uniform(4, 20);
        d.box.x = rng.uniform(0, 100 - d.box.w);
        d.box.y = rng.uniform(0, 100 - d.box.h);
        d.score = rng.uniform01();
        dets.push_back(d);
    }
    auto [rgb, depth] = split_predictions(dets, frame);
    CHECK(rgb.size() + depth.size() == dets.size());

    std::size_t ri = 0, di = 0;
    for (const Detection& d : dets) {
        double cy = d.box.y + d.box.h / 2;
        if (cy < 50) {
            REQUIRE(ri < rgb.size());
            CHECK(rgb[ri].box.x == d.box.x);
            CHECK(rgb[ri].box.y == d.box.y);
            // clipped to its half
            CHECK(rgb[ri].box.y + rgb[ri].box.h <= 50.0 + 1e-12);
            ++ri;
        } else {
            REQUIRE(di < depth.size());
            double y0 = std::max(d.box.y, 50.0);
            CHECK(depth[di].box.y == doctest::Approx(y0 - 50.0));
            CHECK(depth[di].box.h == doctest::Approx(d.box.y + d.box.h - y0));
            ++di;
        }
    }
}

TEST_CASE("depth translation is invertible when unclipped") {
    FusedFrame frame;
    frame.rgb_w = 80;
    frame.rgb_h = 40;
    frame.depth_w = 80;
    frame.depth_h = 40;
    frame.offset_o = 40;
    std::vector<Detection> dets{{{10, 50, 8, 12}, 0.5, Modality::RGB}};
    auto [rgb, depth] = split_predictions(dets, frame);
    REQUIRE(depth.size() == 1);
    CHECK(depth[0].box.y + frame.offset_o == dets[0].box.y);
    CHECK(depth[0].box.h == dets[0].box.h);
}

#include <doctest.h>

#include <cmath>

#include "fusetrack/detect.hpp"
#include "fusetrack/io.hpp"

using namespace fusetrack;

namespace {

FusedFrame make_frame(int w, int h) {
    FusedFrame f;
    f.rgb_w = w;
    f.rgb_h = h;
    f.depth_w = w;
    f.depth_h = h;
    f.offset_o = h;
    return f;
}

std::map<int, GroundTruthFrame> single_gt(int frames, BoundingBox box) {
    std::map<int, GroundTruthFrame> gt;
    for (int f = 0; f < frames; ++f) {
        gt[f].frame_id = f;
        gt[f].boxes.push_back({0, box});
    }
    return gt;
}

}  // namespace

TEST_CASE("replay fidelity") {
    std::map<int, std::vector<Detection>> records;
    records[7] = {{{1, 2, 3, 4}, 0.5, Modality::RGB},
                  {{5, 6, 7, 8}, 0.6, Modality::RGB}};
    ReplayDetector det(records);
    auto out = det.detect(make_frame(64, 64), 7);
    REQUIRE(out.size() == 2);
    CHECK(out[0].box.x == 1);
    CHECK(out[1].score == 0.6);
    CHECK(det.detect(make_frame(64, 64), 3).empty());
    CHECK_THROWS_AS(det.detect(make_frame(64, 64), 8), ReplayMissingFrameError);
}

TEST_CASE("empty replay file yields zero detections everywhere") {
    ReplayDetector det({});
    CHECK(det.detect(make_frame(64, 64), 0).empty());
    CHECK(det.detect(make_frame(64, 64), 999).empty());
}

TEST_CASE("detection file round-trips with field-exact equality") {
    std::vector<io::DetectionRecord> records;
    for (int f = 0; f < 100; ++f) {
        io::DetectionRecord rec;
        rec.frame_id = f;
        rec.modality = f % 2 ? "depth" : "rgb";
        rec.det.box = {f + 0.25, f + 0.5, 10.75, 20.5};
        rec.det.score = (f % 10) / 10.0;
        records.push_back(rec);
    }
    std::string text = io::format_detections(records);
    auto parsed = io::parse_detections_text(text);
    REQUIRE(parsed.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(parsed[i].frame_id == records[i].frame_id);
        CHECK(parsed[i].modality == records[i].modality);
        CHECK(parsed[i].det.box.x == records[i].det.box.x);
        CHECK(parsed[i].det.box.y == records[i].det.box.y);
        CHECK(parsed[i].det.box.w == records[i].det.box.w);
        CHECK(parsed[i].det.box.h == records[i].det.box.h);
        CHECK(parsed[i].det.score == records[i].det.score);
    }
    CHECK(io::format_detections(parsed) == text);
}

TEST_CASE("noiseless synthetic detector reproduces ground truth in both halves") {
    DetectorConfig cfg;
    cfg.score_lo = cfg.score_hi = 0.9;
    auto gt = single_gt(1, {10, 12, 20, 40});
    SyntheticDetector det(cfg, gt);
    auto out = det.detect(make_frame(64, 64), 0);
    REQUIRE(out.size() == 2);
    CHECK(out[0].box.y == 12);         // rgb half
    CHECK(out[1].box.y == 12 + 64);    // depth half, below the seam
    CHECK(out[0].score == 0.9);
}

TEST_CASE("synthetic detector is deterministic and order-independent") {
    DetectorConfig cfg;
    cfg.miss_prob_rgb = 0.2;
    cfg.fp_rate_rgb = 0.5;
    cfg.fp_rate_depth = 0.5;
    cfg.loc_noise_sigma = 2.0;
    cfg.rng_seed = 77;
    auto gt = single_gt(50, {10, 12, 20, 40});
    SyntheticDetector det(cfg, gt);

    auto a = det.detect(make_frame(64, 64), 13);
    // interleave calls to other frames; frame 13 must not change
    det.detect(make_frame(64, 64), 5);
    det.detect(make_frame(64, 64), 40);
    auto b = det.detect(make_frame(64, 64), 13);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].box.x == b[i].box.x);
        CHECK(a[i].box.y == b[i].box.y);
        CHECK(a[i].score == b[i].score);
    }
}

TEST_CASE("empirical miss fraction matches miss_prob_rgb") {
    DetectorConfig cfg;
    cfg.miss_prob_rgb = 0.3;
    cfg.miss_prob_depth = 1.0;  // isolate the rgb process
    cfg.rng_seed = 42;
    auto gt = single_gt(1000, {10, 12, 20, 40});
    SyntheticDetector det(cfg, gt);
    int missed = 0;
    for (int f = 0; f < 1000; ++f)
        if (det.detect(make_frame(64, 64), f).empty()) ++missed;
    CHECK(std::abs(missed / 1000.0 - 0.3) < 0.04);
}

TEST_CASE("false positives are Poisson with the configured mean") {
    DetectorConfig cfg;
    cfg.fp_rate_depth = 0.7;
    cfg.rng_seed = 9;
    SyntheticDetector det(cfg, {});  // no ground truth: everything emitted is FP
    const int n = 10000;
    long total = 0;
    for (int f = 0; f < n; ++f)
        total += static_cast<long>(det.detect(make_frame(64, 64), f).size());
    double mean = static_cast<double>(total) / n;
    // 3 sigma of the sample mean for Poisson(0.7)
    double tol = 3.0 * std::sqrt(0.7 / n);
    CHECK(std::abs(mean - 0.7) < tol);
}

TEST_CASE("emitted boxes stay inside the fused image with positive size") {
    DetectorConfig cfg;
    cfg.fp_rate_rgb = 2.0;
    cfg.fp_rate_depth = 2.0;
    cfg.loc_noise_sigma = 30.0;  // push boxes over the border
    cfg.rng_seed = 3;
    auto gt = single_gt(200, {1, 1, 20, 40});
    SyntheticDetector det(cfg, gt);
    for (int f = 0; f < 200; ++f) {
        for (const auto& d : det.detect(make_frame(64, 32), f)) {
            CHECK(d.box.w > 0);
            CHECK(d.box.h > 0);
            CHECK(d.box.x >= 0);
            CHECK(d.box.y >= 0);
            CHECK(d.box.x + d.box.w <= 64.0);
            CHECK(d.box.y + d.box.h <= 64.0);
            CHECK(d.score >= 0);
            CHECK(d.score <= 1);
        }
    }
}

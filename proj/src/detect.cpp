#include "fusetrack/detect.hpp"

#include <algorithm>

#include "fusetrack/rng.hpp"

namespace fusetrack {

ReplayDetector::ReplayDetector(std::map<int, std::vector<Detection>> records)
    : records_(std::move(records)) {
    if (!records_.empty()) {
        empty_ = false;
        max_frame_ = records_.rbegin()->first;
    }
}

std::vector<Detection> ReplayDetector::detect(const FusedFrame&,
                                              int frame_id) const {
    if (!empty_ && frame_id > max_frame_)
        throw ReplayMissingFrameError("no detection record for frame " +
                                      std::to_string(frame_id));
    auto it = records_.find(frame_id);
    if (it == records_.end()) return {};
    return it->second;
}

SyntheticDetector::SyntheticDetector(DetectorConfig cfg,
                                     std::map<int, GroundTruthFrame> ground_truth)
    : cfg_(std::move(cfg)), gt_(std::move(ground_truth)) {}

namespace {

bool clip_box(BoundingBox& b, double w_max, double h_max) {
    double x1 = std::min(b.x + b.w, w_max);
    double y1 = std::min(b.y + b.h, h_max);
    b.x = std::max(b.x, 0.0);
    b.y = std::max(b.y, 0.0);
    b.w = x1 - b.x;
    b.h = y1 - b.y;
    return b.w > 0 && b.h > 0;
}

// One modality half: misses, localization noise, then Poisson false
// positives. Draw order is fixed so outputs are reproducible bit-for-bit.
void emit_half(SplitMix64& rng, const std::vector<GroundTruthFrame::Entry>& gt,
               double miss_prob, double fp_rate, const DetectorConfig& cfg,
               double y_shift, double fused_w, double fused_h,
               std::vector<Detection>& out) {
    for (const auto& entry : gt) {
        if (rng.uniform01() < miss_prob) continue;
        Detection d;
        d.box = entry.box;
        d.box.y += y_shift;
        d.box.x += rng.normal(cfg.loc_noise_sigma);
        d.box.y += rng.normal(cfg.loc_noise_sigma);
        d.score = rng.uniform(cfg.score_lo, cfg.score_hi);
        if (clip_box(d.box, fused_w, fused_h)) out.push_back(d);
    }
    int n_fp = rng.poisson(fp_rate);
    for (int i = 0; i < n_fp; ++i) {
        Detection d;
        d.box.w = rng.uniform(8.0, std::max(9.0, 0.15 * fused_w));
        d.box.h = rng.uniform(16.0, std::max(17.0, 0.3 * fused_h));
        d.box.x = rng.uniform(0.0, fused_w - d.box.w);
        d.box.y = y_shift + rng.uniform(0.0, std::max(1.0, fused_h - y_shift - d.box.h));
        d.score = rng.uniform(cfg.score_lo, cfg.score_hi);
        if (clip_box(d.box, fused_w, fused_h)) out.push_back(d);
    }
}

}  // namespace

std::vector<Detection> SyntheticDetector::detect(const FusedFrame& frame,
                                                 int frame_id) const {
    std::vector<Detection> out;
    auto it = gt_.find(frame_id);
    static const std::vector<GroundTruthFrame::Entry> kNone;
    const auto& boxes = it == gt_.end() ? kNone : it->second.boxes;

    SplitMix64 rng = SplitMix64::for_frame(cfg_.rng_seed, frame_id);
    const double fused_w = frame.rgb_w;
    const double fused_h = frame.offset_o + frame.depth_h;

    // RGB half first, then depth half, against the same ground truth with
    // independent failure processes.
    emit_half(rng, boxes, cfg_.miss_prob_rgb, cfg_.fp_rate_rgb, cfg_, 0.0,
              fused_w, std::min<double>(fused_h, frame.offset_o), out);
    std::size_t rgb_count = out.size();
    emit_half(rng, boxes, cfg_.miss_prob_depth, cfg_.fp_rate_depth, cfg_,
              frame.offset_o, fused_w, fused_h, out);
    // Depth-half boxes generated below the seam stay below it after clipping;
    // with no depth half present (depth_h == 0) they have zero height and are
    // already dropped by clip_box.
    (void)rgb_count;
    return out;
}

}  // namespace fusetrack

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fusetrack/errors.hpp"
#include "fusetrack/fusion.hpp"

namespace fusetrack {

struct GroundTruthFrame {
    struct Entry {
        int ped_id = 0;
        BoundingBox box;
    };
    int frame_id = 0;
    std::vector<Entry> boxes;
};

// Pedestrian detector over fused frames; detections are in fused-frame
// coordinates. Implementations must be reentrant after construction.
class Detector {
  public:
    virtual ~Detector() = default;
    virtual std::vector<Detection> detect(const FusedFrame& frame,
                                          int frame_id) const = 0;
};

// Replays a recorded detection stream. Frames at or below the highest
// recorded frame_id yield their recorded detections (possibly none); asking
// past the end of a non-empty recording throws ReplayMissingFrameError.
class ReplayDetector : public Detector {
  public:
    explicit ReplayDetector(std::map<int, std::vector<Detection>> records);

    std::vector<Detection> detect(const FusedFrame& frame,
                                  int frame_id) const override;

  private:
    std::map<int, std::vector<Detection>> records_;
    int max_frame_ = -1;
    bool empty_ = true;
};

struct DetectorConfig {
    double miss_prob_rgb = 0.0;
    double miss_prob_depth = 0.0;
    double fp_rate_rgb = 0.0;    // expected false positives per frame
    double fp_rate_depth = 0.0;
    double loc_noise_sigma = 0.0;  // pixels
    double score_lo = 0.5, score_hi = 1.0;
    std::uint64_t rng_seed = 0;
};

// Stands in for the neural detector: emits ground-truth boxes degraded by
// independent per-modality miss/false-positive/noise processes. Deterministic
// given (rng_seed, frame_id); call order does not matter.
class SyntheticDetector : public Detector {
  public:
    SyntheticDetector(DetectorConfig cfg,
                      std::map<int, GroundTruthFrame> ground_truth);

    std::vector<Detection> detect(const FusedFrame& frame,
                                  int frame_id) const override;

  private:
    DetectorConfig cfg_;
    std::map<int, GroundTruthFrame> gt_;
};

}  // namespace fusetrack

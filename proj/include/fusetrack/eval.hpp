#pragma once

#include <vector>

#include "fusetrack/detect.hpp"
#include "fusetrack/fusion.hpp"

namespace fusetrack::eval {

struct FrameCounts {
    long tp = 0, fp = 0, fn = 0;

    FrameCounts& operator+=(const FrameCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
};

// Greedy matching by descending score (ties by ascending detection index):
// each detection claims the highest-IoU unclaimed ground-truth box with
// IoU >= match_iou.
FrameCounts match_frame(const std::vector<Detection>& dets,
                        const GroundTruthFrame& gt, double match_iou);

struct EvalFrame {
    std::vector<Detection> dets;
    GroundTruthFrame gt;
};

struct CurvePoint {
    double threshold = 0;
    double fppi = 0;
    double miss_rate = 0;
};

// One (FPPI, miss rate) operating point per threshold, aggregated over all
// frames; thresholds are applied to detection scores.
std::vector<CurvePoint> sweep_curve(const std::vector<EvalFrame>& frames,
                                    const std::vector<double>& thresholds,
                                    double match_iou);

struct EvalReport {
    FrameCounts counts;
    double accuracy = 0;   // TP/(TP+FP+FN); no true negatives in detection
    double precision = 0;  // TP/(TP+FP)
    double recall = 0;     // TP/(TP+FN)
    double miss_rate = 0;  // 1 - recall
    double fps = 0;
    bool degenerate_precision = false;  // TP+FP == 0
    bool degenerate_recall = false;     // TP+FN == 0
};

EvalReport summarize(const FrameCounts& counts, double elapsed_seconds,
                     long frames);

// Miss rate of a curve at a target FPPI: linear interpolation between
// bracketing points; below the curve's reach the first point's MR is used,
// beyond it the last point's.
double miss_rate_at_fppi(const std::vector<CurvePoint>& curve, double fppi);

}  // namespace fusetrack::eval

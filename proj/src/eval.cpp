#include "fusetrack/eval.hpp"

#include <algorithm>
#include <numeric>

#include "fusetrack/track.hpp"

namespace fusetrack::eval {

FrameCounts match_frame(const std::vector<Detection>& dets,
                        const GroundTruthFrame& gt, double match_iou) {
    // Score-descending, ties by ascending detection index.
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dets[a].score > dets[b].score;
    });

    std::vector<char> claimed(gt.boxes.size(), 0);
    FrameCounts counts;
    for (std::size_t di : order) {
        double best = 0.0;
        int best_g = -1;
        for (std::size_t gi = 0; gi < gt.boxes.size(); ++gi) {
            if (claimed[gi]) continue;
            double v = track::iou(dets[di].box, gt.boxes[gi].box);
            if (v >= match_iou && v > best) {
                best = v;
                best_g = static_cast<int>(gi);
            }
        }
        if (best_g >= 0) {
            claimed[best_g] = 1;
            ++counts.tp;
        } else {
            ++counts.fp;
        }
    }
    counts.fn = static_cast<long>(gt.boxes.size()) - counts.tp;
    return counts;
}

std::vector<CurvePoint> sweep_curve(const std::vector<EvalFrame>& frames,
                                    const std::vector<double>& thresholds,
                                    double match_iou) {
    std::vector<CurvePoint> curve;
    curve.reserve(thresholds.size());
    for (double thr : thresholds) {
        FrameCounts total;
        for (const EvalFrame& f : frames) {
            std::vector<Detection> kept;
            for (const Detection& d : f.dets)
                if (d.score >= thr) kept.push_back(d);
            total += match_frame(kept, f.gt, match_iou);
        }
        CurvePoint pt;
        pt.threshold = thr;
        pt.fppi = frames.empty()
                      ? 0.0
                      : static_cast<double>(total.fp) /
                            static_cast<double>(frames.size());
        long gt_total = total.tp + total.fn;
        pt.miss_rate = gt_total == 0 ? 0.0
                                     : static_cast<double>(total.fn) /
                                           static_cast<double>(gt_total);
        curve.push_back(pt);
    }
    return curve;
}

EvalReport summarize(const FrameCounts& counts, double elapsed_seconds,
                     long frames) {
    EvalReport rep;
    rep.counts = counts;
    long denom_p = counts.tp + counts.fp;
    long denom_r = counts.tp + counts.fn;
    long denom_a = counts.tp + counts.fp + counts.fn;
    if (denom_p == 0) {
        rep.degenerate_precision = true;
        rep.precision = 1.0;
    } else {
        rep.precision = static_cast<double>(counts.tp) / denom_p;
    }
    if (denom_r == 0) {
        rep.degenerate_recall = true;
        rep.recall = 1.0;
    } else {
        rep.recall = static_cast<double>(counts.tp) / denom_r;
    }
    rep.miss_rate = 1.0 - rep.recall;
    rep.accuracy = denom_a == 0 ? 1.0 : static_cast<double>(counts.tp) / denom_a;
    rep.fps = elapsed_seconds > 0 ? frames / elapsed_seconds : 0.0;
    return rep;
}

double miss_rate_at_fppi(const std::vector<CurvePoint>& curve, double fppi) {
    if (curve.empty()) return 1.0;
    std::vector<CurvePoint> pts = curve;
    std::stable_sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) {
        return a.fppi < b.fppi;
    });
    if (fppi <= pts.front().fppi) return pts.front().miss_rate;
    if (fppi >= pts.back().fppi) return pts.back().miss_rate;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].fppi >= fppi) {
            double span = pts[i].fppi - pts[i - 1].fppi;
            if (span <= 0) return pts[i].miss_rate;
            double a = (fppi - pts[i - 1].fppi) / span;
            return pts[i - 1].miss_rate +
                   a * (pts[i].miss_rate - pts[i - 1].miss_rate);
        }
    }
    return pts.back().miss_rate;
}

}  // namespace fusetrack::eval

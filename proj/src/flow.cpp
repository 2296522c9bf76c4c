#include "fusetrack/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace fusetrack::flow {

namespace {

struct PatchRect {
    int x0, y0, x1, y1;  // half-open
    int w() const { return x1 - x0; }
    int h() const { return y1 - y0; }
};

// Mean absolute difference of the patch against curr displaced by (dx, dy);
// pixels whose displaced location falls outside curr are skipped. Returns
// infinity when nothing overlaps.
double patch_mad(const Image8& prev, const Image8& curr, const PatchRect& r,
                 int dx, int dy) {
    long sum = 0;
    long count = 0;
    for (int y = r.y0; y < r.y1; ++y) {
        int cy = y + dy;
        if (cy < 0 || cy >= curr.height) continue;
        int x_lo = std::max(r.x0, -dx);
        int x_hi = std::min(r.x1, curr.width - dx);
        for (int x = x_lo; x < x_hi; ++x) {
            int diff = static_cast<int>(prev.at(x, y)) -
                       static_cast<int>(curr.at(x + dx, cy));
            sum += std::abs(diff);
            ++count;
        }
    }
    if (count == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(sum) / static_cast<double>(count);
}

}  // namespace

FlowVector block_flow(const Image8& prev, const Image8& curr,
                      const BoundingBox& region, int search_radius) {
    PatchRect r;
    r.x0 = std::max(0, static_cast<int>(std::floor(region.x)));
    r.y0 = std::max(0, static_cast<int>(std::floor(region.y)));
    r.x1 = std::min(prev.width, static_cast<int>(std::ceil(region.x + region.w)));
    r.y1 = std::min(prev.height, static_cast<int>(std::ceil(region.y + region.h)));
    if (r.w() <= 0 || r.h() <= 0)
        throw DegenerateRegionError("block_flow: region clipped to zero area");

    double best = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    int best_dx = 0, best_dy = 0;

    // Candidates ordered by displacement magnitude, then (dy, dx); strict
    // improvement required so the tie-break toward zero motion holds.
    struct Cand { int dx, dy; };
    std::vector<Cand> cands;
    cands.reserve(static_cast<std::size_t>(2 * search_radius + 1) *
                  (2 * search_radius + 1));
    for (int dy = -search_radius; dy <= search_radius; ++dy)
        for (int dx = -search_radius; dx <= search_radius; ++dx)
            cands.push_back({dx, dy});
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        int ma = std::abs(a.dx) + std::abs(a.dy);
        int mb = std::abs(b.dx) + std::abs(b.dy);
        if (ma != mb) return ma < mb;
        if (a.dy != b.dy) return a.dy < b.dy;
        return a.dx < b.dx;
    });

    for (const Cand& c : cands) {
        double mad = patch_mad(prev, curr, r, c.dx, c.dy);
        if (mad < best) {
            second = best;
            best = mad;
            best_dx = c.dx;
            best_dy = c.dy;
        } else if (mad < second) {
            second = mad;
        }
    }

    FlowVector fv;
    fv.vx = best_dx;
    fv.vy = best_dy;
    if (!std::isfinite(best)) {
        fv.vx = fv.vy = 0;
        fv.confidence = 0;
        return fv;
    }
    constexpr double kEps = 1e-9;
    double denom = std::isfinite(second) ? second : best;
    fv.confidence =
        std::clamp(1.0 - (best + kEps) / (denom + kEps), 0.0, 1.0);
    return fv;
}

}  // namespace fusetrack::flow

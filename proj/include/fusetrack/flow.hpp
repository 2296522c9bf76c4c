#pragma once

#include "fusetrack/errors.hpp"
#include "fusetrack/fusion.hpp"
#include "fusetrack/image.hpp"

namespace fusetrack {

struct FlowVector {
    double vx = 0, vy = 0;  // pixels/frame
    double confidence = 0;  // [0, 1]
};

namespace flow {

// Block-matching flow: integer displacement within +-search_radius minimizing
// mean absolute difference between the region patch in prev and the displaced
// patch in curr. Ties break toward the smaller displacement (|dx|+|dy|, then
// lexicographic (dy,dx)). Confidence compares best against second-best MAD;
// a flat landscape (all candidates equal) yields confidence 0.
// Throws DegenerateRegionError when the clipped region has zero area.
FlowVector block_flow(const Image8& prev, const Image8& curr,
                      const BoundingBox& region, int search_radius);

}  // namespace flow
}  // namespace fusetrack

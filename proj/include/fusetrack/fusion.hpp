#pragma once

#include <utility>
#include <vector>

#include "fusetrack/errors.hpp"
#include "fusetrack/image.hpp"

namespace fusetrack {

struct BoundingBox {
    double x = 0, y = 0;  // top-left, pixels
    double w = 0, h = 0;  // pixels, > 0

    double cx() const { return x + 0.5 * w; }
    double cy() const { return y + 0.5 * h; }
};

enum class Modality { RGB, DEPTH };

struct Detection {
    BoundingBox box;
    double score = 0;  // [0, 1]
    Modality modality = Modality::RGB;
};

// RGB on top, synchronized depth below; offset_o is the RGB height.
struct FusedFrame {
    Image8 image;
    int offset_o = 0;
    int rgb_w = 0, rgb_h = 0;
    int depth_w = 0, depth_h = 0;  // synced depth dims (== rgb dims when present)
};

namespace fusion {

// Center-pad (zero fill) or center-crop the depth image to the RGB resolution.
Image8 synchronize_depth(const Image8& depth, int rgb_w, int rgb_h);

// Vertical concatenation; gray inputs are replicated to 3 channels first.
FusedFrame concat_frames(const Image8& x_r, const Image8& x_s);  // throws WidthMismatchError

// Partition fused-frame detections by which half their center falls in and
// translate depth-half boxes into camera coordinates (y -= offset_o).
// Seam-straddling boxes are assigned by center and clipped to their half.
std::pair<std::vector<Detection>, std::vector<Detection>> split_predictions(
    const std::vector<Detection>& dets, const FusedFrame& frame);

}  // namespace fusion
}  // namespace fusetrack

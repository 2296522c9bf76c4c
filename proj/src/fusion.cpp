#include "fusetrack/fusion.hpp"

#include <algorithm>
#include <cstring>

namespace fusetrack::fusion {

namespace {

// Signed offset of the output origin inside the input (crop) or of the input
// inside the output (pad), per axis; centered in both cases.
int center_offset(int in, int out) { return (in - out) / 2; }

}  // namespace

Image8 synchronize_depth(const Image8& depth, int rgb_w, int rgb_h) {
    if (depth.width == rgb_w && depth.height == rgb_h) return depth;

    Image8 out(rgb_w, rgb_h, depth.channels);
    // Source rectangle inside depth, destination rectangle inside out.
    int src_x = std::max(0, center_offset(depth.width, rgb_w));
    int src_y = std::max(0, center_offset(depth.height, rgb_h));
    int dst_x = std::max(0, center_offset(rgb_w, depth.width));
    int dst_y = std::max(0, center_offset(rgb_h, depth.height));
    int copy_w = std::min(depth.width, rgb_w);
    int copy_h = std::min(depth.height, rgb_h);

    const int c = depth.channels;
    #pragma omp parallel for if (static_cast<long>(copy_w) * copy_h > 1 << 16)
    for (int row = 0; row < copy_h; ++row) {
        const std::uint8_t* src =
            &depth.data[((static_cast<std::size_t>(src_y) + row) * depth.width +
                         src_x) * c];
        std::uint8_t* dst =
            &out.data[((static_cast<std::size_t>(dst_y) + row) * rgb_w + dst_x) *
                      c];
        std::memcpy(dst, src, static_cast<std::size_t>(copy_w) * c);
    }
    return out;
}

FusedFrame concat_frames(const Image8& x_r, const Image8& x_s) {
    if (x_r.width != x_s.width)
        throw WidthMismatchError("concat_frames: width mismatch");

    FusedFrame frame;
    frame.rgb_w = x_r.width;
    frame.rgb_h = x_r.height;
    frame.depth_w = x_s.width;
    frame.depth_h = x_s.height;
    frame.offset_o = x_r.height;
    frame.image = Image8(x_r.width, x_r.height + x_s.height, 3);

    // Blit directly into the fused buffer; gray inputs are expanded in place
    // instead of through a to_rgb() temporary.
    auto blit = [&](const Image8& src, std::size_t dst_pixel) {
        std::uint8_t* dst = frame.image.data.data() + dst_pixel * 3;
        if (src.channels == 3) {
            std::memcpy(dst, src.data.data(), src.data.size());
        } else {
            const std::uint8_t* s = src.data.data();
            const std::size_t n = src.data.size();
            for (std::size_t i = 0; i < n; ++i)
                dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = s[i];
        }
    };
    blit(x_r, 0);
    blit(x_s, static_cast<std::size_t>(x_r.height) * x_r.width);
    return frame;
}

std::pair<std::vector<Detection>, std::vector<Detection>> split_predictions(
    const std::vector<Detection>& dets, const FusedFrame& frame) {
    std::vector<Detection> rgb_dets, depth_dets;
    const double o = frame.offset_o;
    for (const Detection& d : dets) {
        Detection out = d;
        if (d.box.cy() < o) {
            out.modality = Modality::RGB;
            // Clip to the RGB half.
            double y1 = std::min(d.box.y + d.box.h, o);
            out.box.h = y1 - out.box.y;
            if (out.box.h > 0 && out.box.w > 0) rgb_dets.push_back(out);
        } else {
            out.modality = Modality::DEPTH;
            double y0 = std::max(d.box.y, o);
            double y1 = d.box.y + d.box.h;
            out.box.y = y0 - o;  // into camera coordinates
            out.box.h = y1 - y0;
            if (out.box.h > 0 && out.box.w > 0) depth_dets.push_back(out);
        }
    }
    return {std::move(rgb_dets), std::move(depth_dets)};
}

}  // namespace fusetrack::fusion

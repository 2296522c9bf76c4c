#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace fusetrack {

// Row-major 8-bit image, 1 (gray) or 3 (RGB) channels.
struct Image8 {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;

    Image8() = default;
    Image8(int w, int h, int c)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * h * c, 0) {}

    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    bool same_dims(const Image8& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
};

// Replicate a 1-channel image into 3 channels; 3-channel input is returned as is.
Image8 to_rgb(const Image8& img);

// Average the channels of a 3-channel image; 1-channel input is returned as is.
Image8 to_gray(const Image8& img);

}  // namespace fusetrack

#include "fusetrack/image.hpp"

namespace fusetrack {

Image8 to_rgb(const Image8& img) {
    if (img.channels == 3) return img;
    Image8 out(img.width, img.height, 3);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint8_t v = img.data[i];
        out.data[3 * i] = v;
        out.data[3 * i + 1] = v;
        out.data[3 * i + 2] = v;
    }
    return out;
}

Image8 to_gray(const Image8& img) {
    if (img.channels == 1) return img;
    Image8 out(img.width, img.height, 1);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) {
        unsigned sum = img.data[3 * i];
        sum += img.data[3 * i + 1];
        sum += img.data[3 * i + 2];
        out.data[i] = static_cast<std::uint8_t>(sum / 3);
    }
    return out;
}

}  // namespace fusetrack

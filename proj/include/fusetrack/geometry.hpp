#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fusetrack/errors.hpp"
#include "fusetrack/image.hpp"

namespace fusetrack::geometry {

// Sensor-frame coordinates: x forward, y left, z up, meters.
struct Point3 {
    double x = 0, y = 0, z = 0;
};

// theta: azimuth in (-pi, pi]; phi: elevation in [-pi/2, pi/2]; r: range > 0.
struct SphericalPoint {
    double theta = 0, phi = 0, r = 0;
};

struct PointCloud {
    double timestamp = 0;
    std::vector<Point3> points;
};

struct GridConfig {
    double theta_min = 0, theta_max = 0;
    double phi_min = 0, phi_max = 0;
    int width = 0, height = 0;
    double r_max = 0;

    bool valid() const {
        return theta_min < theta_max && phi_min < phi_max && width >= 1 &&
               height >= 1 && r_max > 0;
    }
};

// 2D range grid; each cell keeps the minimum range of the points binned to it.
class DepthImage {
  public:
    DepthImage() = default;
    explicit DepthImage(const GridConfig& cfg)
        : config_(cfg),
          ranges_(static_cast<std::size_t>(cfg.width) * cfg.height, kEmpty) {}

    const GridConfig& config() const { return config_; }

    std::optional<double> at(int col, int row) const {
        double r = ranges_[idx(col, row)];
        if (r < 0) return std::nullopt;
        return r;
    }

    void deposit_min(int col, int row, double r) {
        double& cell = ranges_[idx(col, row)];
        if (cell < 0 || r < cell) cell = r;
    }

    const std::vector<double>& raw() const { return ranges_; }
    std::vector<double>& raw() { return ranges_; }

  private:
    static constexpr double kEmpty = -1.0;
    std::size_t idx(int col, int row) const {
        return static_cast<std::size_t>(row) * config_.width + col;
    }
    GridConfig config_;
    std::vector<double> ranges_;
};

struct ProjectionResult {
    DepthImage image;
    std::size_t dropped = 0;  // out-of-FOV or beyond r_max
};

SphericalPoint cartesian_to_spherical(const Point3& p);  // throws ZeroRangeError
Point3 spherical_to_cartesian(const SphericalPoint& s);

// Grid cell for a spherical point, or nullopt when outside the FOV.
// col grows with theta, row 0 is phi_max (sky at top).
std::optional<std::pair<int, int>> bin_point(const SphericalPoint& s,
                                             const GridConfig& cfg);

// OpenMP-parallel over points; min-reduction per cell is order-independent,
// so results are deterministic regardless of thread count.
ProjectionResult project_scan(const PointCloud& scan, const GridConfig& cfg);

Image8 render_gray(const DepthImage& img);  // empty -> 0, valid depths 1..255
Image8 render_jet(const DepthImage& img);   // empty -> black, 4-segment jet

// Jet colormap at t in [0,1] (blue through cyan, green, yellow to red).
void jet_color(double t, std::uint8_t rgb[3]);

// Serial reference implementations, kept for testing and benchmarking.
namespace serial {
ProjectionResult project_scan(const PointCloud& scan, const GridConfig& cfg);
Image8 render_gray(const DepthImage& img);
Image8 render_jet(const DepthImage& img);
}  // namespace serial

}  // namespace fusetrack::geometry

#include "fusetrack/geometry.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fusetrack::geometry {

SphericalPoint cartesian_to_spherical(const Point3& p) {
    double r = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
    if (r == 0.0) throw ZeroRangeError("point at origin has no direction");
    return {std::atan2(p.y, p.x), std::asin(p.z / r), r};
}

Point3 spherical_to_cartesian(const SphericalPoint& s) {
    double cp = std::cos(s.phi);
    return {s.r * cp * std::cos(s.theta), s.r * cp * std::sin(s.theta),
            s.r * std::sin(s.phi)};
}

std::optional<std::pair<int, int>> bin_point(const SphericalPoint& s,
                                             const GridConfig& cfg) {
    if (s.theta < cfg.theta_min || s.theta > cfg.theta_max) return std::nullopt;
    if (s.phi < cfg.phi_min || s.phi > cfg.phi_max) return std::nullopt;
    int col = static_cast<int>(std::floor((s.theta - cfg.theta_min) /
                                          (cfg.theta_max - cfg.theta_min) *
                                          cfg.width));
    int row = static_cast<int>(std::floor((cfg.phi_max - s.phi) /
                                          (cfg.phi_max - cfg.phi_min) *
                                          cfg.height));
    col = std::clamp(col, 0, cfg.width - 1);
    row = std::clamp(row, 0, cfg.height - 1);
    return std::make_pair(col, row);
}

namespace serial {

ProjectionResult project_scan(const PointCloud& scan, const GridConfig& cfg) {
    ProjectionResult result;
    result.image = DepthImage(cfg);
    for (const Point3& p : scan.points) {
        double r = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
        if (r == 0.0 || r > cfg.r_max) {
            ++result.dropped;
            continue;
        }
        auto cell = bin_point({std::atan2(p.y, p.x), std::asin(p.z / r), r}, cfg);
        if (!cell) {
            ++result.dropped;
            continue;
        }
        result.image.deposit_min(cell->first, cell->second, r);
    }
    return result;
}

Image8 render_gray(const DepthImage& img) {
    const GridConfig& cfg = img.config();
    Image8 out(cfg.width, cfg.height, 1);
    const std::vector<double>& cells = img.raw();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        double r = cells[i];
        out.data[i] = r < 0 ? 0
                            : static_cast<std::uint8_t>(
                                  std::lround(1.0 + 254.0 * r / cfg.r_max));
    }
    return out;
}

Image8 render_jet(const DepthImage& img) {
    const GridConfig& cfg = img.config();
    Image8 out(cfg.width, cfg.height, 3);
    const std::vector<double>& cells = img.raw();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        double r = cells[i];
        if (r < 0) continue;  // black
        jet_color(r / cfg.r_max, &out.data[3 * i]);
    }
    return out;
}

}  // namespace serial

void jet_color(double t, std::uint8_t rgb[3]) {
    auto seg = [](double v) {
        return std::clamp(1.5 - std::abs(v), 0.0, 1.0);
    };
    rgb[0] = static_cast<std::uint8_t>(std::lround(255.0 * seg(4.0 * t - 3.0)));
    rgb[1] = static_cast<std::uint8_t>(std::lround(255.0 * seg(4.0 * t - 2.0)));
    rgb[2] = static_cast<std::uint8_t>(std::lround(255.0 * seg(4.0 * t - 1.0)));
}

ProjectionResult project_scan(const PointCloud& scan, const GridConfig& cfg) {
#ifndef _OPENMP
    return serial::project_scan(scan, cfg);
#else
    const std::size_t n = scan.points.size();
    if (n < 4096) return serial::project_scan(scan, cfg);

    ProjectionResult result;
    result.image = DepthImage(cfg);
    std::vector<double>& cells = result.image.raw();
    std::size_t dropped = 0;

    // Per-thread grids merged by per-cell min; min is order-independent, so
    // the result is identical for any thread count.
    #pragma omp parallel reduction(+ : dropped)
    {
        DepthImage local(cfg);
        #pragma omp for nowait
        for (long i = 0; i < static_cast<long>(n); ++i) {
            const Point3& p = scan.points[static_cast<std::size_t>(i)];
            double r = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
            if (r == 0.0 || r > cfg.r_max) {
                ++dropped;
                continue;
            }
            auto cell =
                bin_point({std::atan2(p.y, p.x), std::asin(p.z / r), r}, cfg);
            if (!cell) {
                ++dropped;
                continue;
            }
            local.deposit_min(cell->first, cell->second, r);
        }
        #pragma omp critical
        {
            const std::vector<double>& lc = local.raw();
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (lc[i] >= 0 && (cells[i] < 0 || lc[i] < cells[i]))
                    cells[i] = lc[i];
            }
        }
    }
    result.dropped = dropped;
    return result;
#endif
}

Image8 render_gray(const DepthImage& img) {
    const GridConfig& cfg = img.config();
    Image8 out(cfg.width, cfg.height, 1);
    const std::vector<double>& cells = img.raw();
    const long n = static_cast<long>(cells.size());
    #pragma omp parallel for if (n > 1 << 15)
    for (long i = 0; i < n; ++i) {
        double r = cells[static_cast<std::size_t>(i)];
        out.data[static_cast<std::size_t>(i)] =
            r < 0 ? 0
                  : static_cast<std::uint8_t>(
                        std::lround(1.0 + 254.0 * r / cfg.r_max));
    }
    return out;
}

Image8 render_jet(const DepthImage& img) {
    const GridConfig& cfg = img.config();
    Image8 out(cfg.width, cfg.height, 3);
    const std::vector<double>& cells = img.raw();
    const long n = static_cast<long>(cells.size());
    #pragma omp parallel for if (n > 1 << 15)
    for (long i = 0; i < n; ++i) {
        double r = cells[static_cast<std::size_t>(i)];
        if (r < 0) continue;
        jet_color(r / cfg.r_max, &out.data[3 * static_cast<std::size_t>(i)]);
    }
    return out;
}

}  // namespace fusetrack::geometry

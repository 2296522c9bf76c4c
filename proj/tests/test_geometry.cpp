#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fusetrack/geometry.hpp"
#include "fusetrack/io.hpp"
#include "fusetrack/rng.hpp"

using namespace fusetrack;
using namespace fusetrack::geometry;

namespace {

constexpr double kPi = 3.14159265358979323846;

GridConfig test_grid() {
    GridConfig g;
    g.theta_min = -0.5;
    g.theta_max = 0.5;
    g.phi_min = -0.25;
    g.phi_max = 0.25;
    g.width = 8;
    g.height = 4;
    g.r_max = 50.0;
    return g;
}

}  // namespace

TEST_CASE("cartesian to spherical") {
    auto s = cartesian_to_spherical({1, 0, 0});
    CHECK(s.theta == doctest::Approx(0.0));
    CHECK(s.phi == doctest::Approx(0.0));
    CHECK(s.r == doctest::Approx(1.0));

    s = cartesian_to_spherical({0, 0, 1});
    CHECK(s.phi == doctest::Approx(kPi / 2));
    CHECK(s.r == doctest::Approx(1.0));

    s = cartesian_to_spherical({3, 4, 0});
    CHECK(s.theta == doctest::Approx(std::atan2(4.0, 3.0)));
    CHECK(s.phi == doctest::Approx(0.0));
    CHECK(s.r == doctest::Approx(5.0));

    CHECK_THROWS_AS(cartesian_to_spherical({0, 0, 0}), ZeroRangeError);
}

TEST_CASE("spherical to cartesian") {
    auto p = spherical_to_cartesian({0, 0, 1});
    CHECK(p.x == doctest::Approx(1.0));
    CHECK(p.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.z == doctest::Approx(0.0).epsilon(1e-12));

    p = spherical_to_cartesian({kPi / 2, 0, 2});
    CHECK(p.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.y == doctest::Approx(2.0));
}

TEST_CASE("round trip recovers random points to 1e-9 relative") {
    SplitMix64 rng(123);
    for (int i = 0; i < 1000; ++i) {
        SphericalPoint s{rng.uniform(-kPi + 1e-6, kPi),
                         rng.uniform(-kPi / 2 + 1e-6, kPi / 2 - 1e-6),
                         rng.uniform(0.1, 80.0)};
        Point3 p = spherical_to_cartesian(s);
        Point3 q = spherical_to_cartesian(cartesian_to_spherical(p));
        double n = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
        CHECK(std::abs(p.x - q.x) / n < 1e-9);
        CHECK(std::abs(p.y - q.y) / n < 1e-9);
        CHECK(std::abs(p.z - q.z) / n < 1e-9);
    }
}

TEST_CASE("empty scan yields empty grid") {
    auto result = project_scan({}, test_grid());
    CHECK(result.dropped == 0);
    for (double r : result.image.raw()) CHECK(r < 0);
}

TEST_CASE("cell collision keeps minimum range") {
    GridConfig g = test_grid();
    PointCloud scan;
    scan.points.push_back(spherical_to_cartesian({0.01, 0.01, 10.0}));
    scan.points.push_back(spherical_to_cartesian({0.011, 0.011, 5.0}));
    auto result = project_scan(scan, g);
    auto cell = bin_point({0.01, 0.01, 10.0}, g);
    REQUIRE(cell.has_value());
    auto stored = result.image.at(cell->first, cell->second);
    REQUIRE(stored.has_value());
    CHECK(*stored == doctest::Approx(5.0));
}

TEST_CASE("binning totality and cell minimality on random scans") {
    GridConfig g = test_grid();
    SplitMix64 rng(99);
    PointCloud scan;
    std::vector<SphericalPoint> sph;
    for (int i = 0; i < 5000; ++i) {
        SphericalPoint s{rng.uniform(-0.7, 0.7), rng.uniform(-0.35, 0.35),
                         rng.uniform(0.5, 60.0)};
        sph.push_back(s);
        scan.points.push_back(spherical_to_cartesian(s));
    }
    auto result = project_scan(scan, g);

    std::size_t binned = 0;
    for (const auto& s : sph) {
        auto cell = s.r > g.r_max ? std::nullopt : bin_point(s, g);
        if (!cell) continue;
        ++binned;
        auto stored = result.image.at(cell->first, cell->second);
        REQUIRE(stored.has_value());
        // no in-FOV point is strictly closer than its cell's stored value
        CHECK(*stored <= s.r + 1e-9);
    }
    CHECK(binned + result.dropped == scan.points.size());
}

TEST_CASE("parallel projection matches serial reference") {
    GridConfig g = test_grid();
    g.width = 64;
    g.height = 16;
    SplitMix64 rng(5);
    PointCloud scan;
    for (int i = 0; i < 50000; ++i) {
        scan.points.push_back(spherical_to_cartesian(
            {rng.uniform(-0.7, 0.7), rng.uniform(-0.35, 0.35),
             rng.uniform(0.5, 60.0)}));
    }
    auto par = project_scan(scan, g);
    auto ser = serial::project_scan(scan, g);
    CHECK(par.dropped == ser.dropped);
    CHECK(par.image.raw() == ser.image.raw());
    CHECK(render_gray(par.image).data == serial::render_gray(ser.image).data);
    CHECK(render_jet(par.image).data == serial::render_jet(ser.image).data);
}

TEST_CASE("gray rendering endpoints and monotonicity") {
    GridConfig g = test_grid();
    DepthImage img(g);
    img.deposit_min(0, 0, g.r_max);
    img.deposit_min(1, 0, g.r_max / 2);
    img.deposit_min(2, 0, 0.001);
    Image8 gray = render_gray(img);
    CHECK(gray.at(0, 0) == 255);
    CHECK(gray.at(1, 0) == 128);
    CHECK(gray.at(2, 0) == 1);  // occupied cells never map to 0
    CHECK(gray.at(3, 0) == 0);  // empty

    // monotone in depth
    SplitMix64 rng(17);
    DepthImage rimg(g);
    for (int c = 0; c < g.width; ++c)
        rimg.deposit_min(c, 1, rng.uniform(0.01, g.r_max));
    Image8 rg = render_gray(rimg);
    for (int a = 0; a < g.width; ++a)
        for (int b = 0; b < g.width; ++b)
            if (*rimg.at(a, 1) < *rimg.at(b, 1))
                CHECK(rg.at(a, 1) <= rg.at(b, 1));
}

TEST_CASE("jet rendering matches committed golden table") {
    std::string text =
        io::read_file(std::string(FUSETRACK_TEST_DIR) + "/fixtures/jet_golden.txt");
    std::istringstream in(text);
    double t;
    int r, g, b;
    int rows = 0;
    while (in >> t >> r >> g >> b) {
        std::uint8_t rgb[3];
        jet_color(t, rgb);
        CHECK(rgb[0] == r);
        CHECK(rgb[1] == g);
        CHECK(rgb[2] == b);
        ++rows;
    }
    CHECK(rows == 21);

    GridConfig grid = test_grid();
    DepthImage img(grid);
    img.deposit_min(0, 0, grid.r_max);  // t=1, red family
    Image8 jet = render_jet(img);
    CHECK(jet.at(0, 0, 0) > 0);
    CHECK(jet.at(0, 0, 2) == 0);
    CHECK(jet.at(1, 0, 0) == 0);  // empty cell stays black
    CHECK(jet.at(1, 0, 1) == 0);
    CHECK(jet.at(1, 0, 2) == 0);
}

TEST_CASE("ten point scan matches golden PGM from the binning script") {
    std::string dir = std::string(FUSETRACK_TEST_DIR) + "/fixtures/";
    auto cloud = io::parse_pointcloud(dir + "projection_scan.txt");
    REQUIRE(cloud.points.size() == 10);
    auto result = project_scan(cloud, test_grid());
    CHECK(result.dropped == 2);
    auto bytes = io::format_image(render_gray(result.image));
    std::string golden = io::read_file(dir + "projection_golden.pgm");
    CHECK(std::string(bytes.begin(), bytes.end()) == golden);
}

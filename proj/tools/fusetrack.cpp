#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "fusetrack/eval.hpp"
#include "fusetrack/io.hpp"
#include "fusetrack/pipeline.hpp"
#include "fusetrack/rng.hpp"

namespace fs = std::filesystem;
using namespace fusetrack;

namespace {

geometry::GridConfig parse_grid_arg(const std::string& arg) {
    std::istringstream ss(arg);
    geometry::GridConfig g;
    char c;
    if (!(ss >> g.theta_min >> c >> g.theta_max >> c >> g.phi_min >> c >>
          g.phi_max >> c >> g.width >> c >> g.height >> c >> g.r_max) ||
        !g.valid())
        throw ConfigError(
            "grid must be `theta_min,theta_max,phi_min,phi_max,width,height,r_max`");
    return g;
}

std::string timing_report(const pipeline::TimingStats& timing) {
    std::string out = "stage mean_ms p95_ms\n";
    char buf[128];
    for (const auto& [name, stats] : timing.stages) {
        std::snprintf(buf, sizeof(buf), "%s %.4f %.4f\n", name.c_str(),
                      stats.mean() * 1e3, stats.p95() * 1e3);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "frame %.4f %.4f\n", timing.frame.mean() * 1e3,
                  timing.frame.p95() * 1e3);
    out += buf;
    return out;
}

int cmd_run(const std::string& config_path, const std::string& dataset_dir,
            const std::string& mode_arg, const std::string& out_dir) {
    auto kv = io::parse_config(config_path);
    if (!mode_arg.empty()) kv["mode"] = mode_arg;
    pipeline::PipelineConfig cfg = pipeline::config_from_map(kv);
    pipeline::Dataset dataset = pipeline::load_dataset(dataset_dir);
    auto detector = std::shared_ptr<const Detector>(pipeline::make_detector(
        kv, dataset.ground_truth, fs::path(config_path).parent_path().string()));

    pipeline::RunResult result = pipeline::run(cfg, dataset, detector);

    fs::create_directories(out_dir);
    io::write_tracks((fs::path(out_dir) / "tracks.txt").string(), result.tracks);
    io::write_detections((fs::path(out_dir) / "detections.txt").string(),
                         result.detections);
    io::write_file((fs::path(out_dir) / "timing.txt").string(),
                   timing_report(result.timing));
    std::cout << "processed " << result.frames_processed << " frames ("
              << result.frames_skipped << " skipped), mean frame time "
              << result.timing.frame.mean() * 1e3 << " ms\n";
    return 0;
}

int cmd_eval(const std::string& tracks_path, const std::string& dets_path,
             const std::string& gt_path, const std::string& curve_path,
             double match_iou) {
    auto gt = io::parse_ground_truth(gt_path);

    std::map<int, std::vector<Detection>> per_frame;
    if (!tracks_path.empty()) {
        for (const auto& rec : io::parse_tracks(tracks_path)) {
            Detection d;
            d.box = {rec.cx - 0.5 * rec.w, rec.cy - 0.5 * rec.h, rec.w, rec.h};
            d.score = 1.0;
            per_frame[rec.frame_id].push_back(d);
        }
    } else {
        for (const auto& rec : io::parse_detections(dets_path))
            per_frame[rec.frame_id].push_back(rec.det);
    }

    std::vector<eval::EvalFrame> frames;
    for (const auto& [fid, frame] : gt)
        frames.push_back({per_frame.count(fid) ? per_frame[fid]
                                               : std::vector<Detection>{},
                          frame});

    eval::FrameCounts total;
    for (const auto& f : frames) total += eval::match_frame(f.dets, f.gt, match_iou);
    eval::EvalReport rep = eval::summarize(total, 0.0, static_cast<long>(frames.size()));
    std::printf("frames    %zu\n", frames.size());
    std::printf("tp/fp/fn  %ld %ld %ld\n", rep.counts.tp, rep.counts.fp,
                rep.counts.fn);
    std::printf("accuracy  %.4f\n", rep.accuracy);
    std::printf("precision %.4f%s\n", rep.precision,
                rep.degenerate_precision ? " (degenerate)" : "");
    std::printf("recall    %.4f%s\n", rep.recall,
                rep.degenerate_recall ? " (degenerate)" : "");
    std::printf("miss_rate %.4f\n", rep.miss_rate);

    if (!curve_path.empty()) {
        std::vector<double> thresholds;
        for (int i = 20; i >= 0; --i) thresholds.push_back(i / 20.0);
        auto curve = eval::sweep_curve(frames, thresholds, match_iou);
        std::string csv = "threshold,fppi,miss_rate\n";
        char buf[96];
        for (const auto& pt : curve) {
            std::snprintf(buf, sizeof(buf), "%.4f,%.6f,%.6f\n", pt.threshold,
                          pt.fppi, pt.miss_rate);
            csv += buf;
        }
        io::write_file(curve_path, csv);
    }
    return 0;
}

int cmd_convert(const std::string& cloud_path, const std::string& grid_arg,
                const std::string& out_path) {
    geometry::GridConfig grid = parse_grid_arg(grid_arg);
    geometry::PointCloud cloud = io::parse_pointcloud(cloud_path);
    auto projection = geometry::project_scan(cloud, grid);
    std::string ext = fs::path(out_path).extension().string();
    if (ext == ".ppm") {
        io::write_image(out_path, geometry::render_jet(projection.image));
    } else if (ext == ".pgm") {
        io::write_image(out_path, geometry::render_gray(projection.image));
    } else {
        throw ConfigError("output must end in .pgm or .ppm");
    }
    std::cout << "binned " << cloud.points.size() - projection.dropped << "/"
              << cloud.points.size() << " points\n";
    return 0;
}

// Textured background so block flow has something to match on.
Image8 make_background(int w, int h, SplitMix64& rng) {
    Image8 img(w, h, 3);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        img.data[i] = static_cast<std::uint8_t>(60 + (rng.next() % 100));
    return img;
}

void draw_box(Image8& img, const BoundingBox& b, std::uint8_t r, std::uint8_t g,
              std::uint8_t bl) {
    int x0 = std::max(0, static_cast<int>(b.x));
    int y0 = std::max(0, static_cast<int>(b.y));
    int x1 = std::min(img.width, static_cast<int>(b.x + b.w));
    int y1 = std::min(img.height, static_cast<int>(b.y + b.h));
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            img.at(x, y, 0) = r;
            img.at(x, y, 1) = g;
            img.at(x, y, 2) = bl;
        }
    }
}

int cmd_synth(const std::string& scenario_path, std::uint64_t seed,
              const std::string& out_dir) {
    auto kv = io::parse_config(scenario_path);
    auto need_long = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError("scenario missing " + key);
        return std::stol(it->second);
    };
    int n_frames = static_cast<int>(need_long("frames"));
    int w = static_cast<int>(need_long("camera.width"));
    int h = static_cast<int>(need_long("camera.height"));

    struct Ped {
        int id;
        double x, y, bw, bh, vx, vy;
    };
    std::vector<Ped> peds;
    for (int i = 0;; ++i) {
        auto it = kv.find("ped." + std::to_string(i));
        if (it == kv.end()) break;
        std::istringstream ss(it->second);
        Ped p{i, 0, 0, 0, 0, 0, 0};
        if (!(ss >> p.x >> p.y >> p.bw >> p.bh >> p.vx >> p.vy))
            throw ConfigError("ped." + std::to_string(i) +
                              " must be `x y w h vx vy`");
        peds.push_back(p);
    }

    fs::create_directories(out_dir);
    SplitMix64 rng(seed);
    Image8 background = make_background(w, h, rng);

    std::map<int, GroundTruthFrame> gt;
    std::string frames_txt;
    for (int f = 0; f < n_frames; ++f) {
        Image8 img = background;
        geometry::PointCloud cloud;
        cloud.timestamp = 0.1 * f;
        SplitMix64 frame_rng = SplitMix64::for_frame(seed, f);
        // sparse static background returns
        for (int i = 0; i < 2000; ++i) {
            double theta = frame_rng.uniform(-0.55, 0.55);
            double phi = frame_rng.uniform(-0.25, 0.05);
            double r = frame_rng.uniform(5.0, 70.0);
            cloud.points.push_back(
                geometry::spherical_to_cartesian({theta, phi, r}));
        }

        GroundTruthFrame& gtf = gt[f];
        gtf.frame_id = f;
        for (const Ped& p : peds) {
            BoundingBox b{p.x + p.vx * f, p.y + p.vy * f, p.bw, p.bh};
            if (b.x + b.w <= 0 || b.x >= w || b.y + b.h <= 0 || b.y >= h)
                continue;
            gtf.boxes.push_back({p.id, b});
            draw_box(img, b, 200, static_cast<std::uint8_t>(40 * (p.id + 1)), 60);
            // a dense cluster of returns for the pedestrian
            double depth = 10.0 + 2.0 * p.id;
            double theta0 = -0.55 + 1.1 * (b.cx() / w);
            double phi0 = 0.05 - 0.3 * (b.cy() / h);
            for (int i = 0; i < 200; ++i) {
                double theta = theta0 + frame_rng.uniform(-0.02, 0.02);
                double phi = phi0 + frame_rng.uniform(-0.04, 0.04);
                cloud.points.push_back(
                    geometry::spherical_to_cartesian({theta, phi, depth}));
            }
        }

        char rgb_name[64], cloud_name[64];
        std::snprintf(rgb_name, sizeof(rgb_name), "rgb_%05d.ppm", f);
        std::snprintf(cloud_name, sizeof(cloud_name), "cloud_%05d.txt", f);
        io::write_image((fs::path(out_dir) / rgb_name).string(), img);
        io::write_pointcloud((fs::path(out_dir) / cloud_name).string(), cloud);
        frames_txt += std::to_string(f) + " " + rgb_name + " " + cloud_name + "\n";
    }
    io::write_file((fs::path(out_dir) / "frames.txt").string(), frames_txt);
    io::write_ground_truth((fs::path(out_dir) / "gt.txt").string(), gt);
    std::cout << "wrote " << n_frames << " frames to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"camera-LiDAR fusion pedestrian tracking pipeline"};
    app.require_subcommand(1);

    std::string config_path, dataset_dir, mode_arg, out_dir;
    auto* run = app.add_subcommand("run", "run the pipeline over a dataset");
    run->add_option("--config", config_path)->required();
    run->add_option("--dataset", dataset_dir)->required();
    run->add_option("--mode", mode_arg, "fused|rgb|fused-nokf");
    run->add_option("--out", out_dir)->required();

    std::string tracks_path, dets_path, gt_path, curve_path;
    double match_iou = 0.5;
    auto* ev = app.add_subcommand("eval", "evaluate tracks or detections against ground truth");
    ev->add_option("--tracks", tracks_path);
    ev->add_option("--detections", dets_path);
    ev->add_option("--gt", gt_path)->required();
    ev->add_option("--curve", curve_path, "write a threshold,fppi,miss_rate CSV");
    ev->add_option("--match-iou", match_iou);

    std::string cloud_path, grid_arg, image_out;
    auto* conv = app.add_subcommand("convert", "project a point cloud to a depth image");
    conv->add_option("--cloud", cloud_path)->required();
    conv->add_option("--grid", grid_arg,
                     "theta_min,theta_max,phi_min,phi_max,width,height,r_max")
        ->required();
    conv->add_option("--out", image_out, "output .pgm (gray) or .ppm (jet)")
        ->required();

    std::string scenario_path, synth_out;
    std::uint64_t seed = 0;
    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--scenario", scenario_path)->required();
    synth->add_option("--seed", seed);
    synth->add_option("--out", synth_out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, dataset_dir, mode_arg, out_dir);
        if (ev->parsed()) {
            if (tracks_path.empty() == dets_path.empty()) {
                std::cerr << "eval needs exactly one of --tracks or --detections\n";
                return 2;
            }
            return cmd_eval(tracks_path, dets_path, gt_path, curve_path, match_iou);
        }
        if (conv->parsed()) return cmd_convert(cloud_path, grid_arg, image_out);
        if (synth->parsed()) return cmd_synth(scenario_path, seed, synth_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DatasetError& e) {
        std::cerr << "dataset error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "dataset error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

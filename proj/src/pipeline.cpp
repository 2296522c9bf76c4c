#include "fusetrack/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>

namespace fusetrack::pipeline {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

Mode parse_mode(const std::string& name) {
    if (name == "fused") return Mode::Fused;
    if (name == "rgb") return Mode::RgbOnly;
    if (name == "fused-nokf") return Mode::FusedNoKf;
    throw ConfigError("unknown mode: " + name);
}

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::Fused: return "fused";
        case Mode::RgbOnly: return "rgb";
        case Mode::FusedNoKf: return "fused-nokf";
    }
    return "?";
}

double StageStats::mean() const {
    if (samples.empty()) return 0.0;
    double sum = 0;
    for (double s : samples) sum += s;
    return sum / static_cast<double>(samples.size());
}

double StageStats::p95() const {
    if (samples.empty()) return 0.0;
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    std::size_t idx = static_cast<std::size_t>(
        std::ceil(0.95 * static_cast<double>(sorted.size()))) - 1;
    return sorted[std::min(idx, sorted.size() - 1)];
}

Pipeline::Pipeline(PipelineConfig cfg, std::shared_ptr<const Detector> detector)
    : cfg_(std::move(cfg)), detector_(std::move(detector)),
      tracker_(cfg_.tracker) {}

FrameOutput Pipeline::process(const FrameInput& input) {
    FrameOutput out;
    out.frame_id = input.frame_id;

    auto frame_start = Clock::now();
    auto timed = [&](const char* name, auto&& fn) {
        auto t0 = Clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            timing_.stages[name].samples.push_back(
                std::chrono::duration<double>(Clock::now() - t0).count());
        } else {
            auto result = fn();
            timing_.stages[name].samples.push_back(
                std::chrono::duration<double>(Clock::now() - t0).count());
            return result;
        }
    };

    const bool fused_mode = cfg_.mode != Mode::RgbOnly;
    const bool have_cloud = fused_mode && input.cloud.has_value();

    // Build the fused frame. A missing point cloud degrades this frame to
    // RGB-only rather than aborting the run.
    FusedFrame frame;
    if (have_cloud) {
        auto projection = timed("project", [&] {
            return geometry::project_scan(*input.cloud, cfg_.grid);
        });
        Image8 depth_gray = timed("render", [&] {
            return geometry::render_gray(projection.image);
        });
        Image8 synced = timed("sync", [&] {
            return fusion::synchronize_depth(depth_gray, cfg_.rgb_w, cfg_.rgb_h);
        });
        frame = timed("concat", [&] {
            if (input.rgb.data.empty()) {
                Image8 black(cfg_.rgb_w, cfg_.rgb_h, 3);
                return fusion::concat_frames(black, synced);
            }
            return fusion::concat_frames(input.rgb, synced);
        });
    } else {
        frame.rgb_w = cfg_.rgb_w;
        frame.rgb_h = cfg_.rgb_h;
        frame.offset_o = cfg_.rgb_h;
        frame.depth_w = frame.depth_h = 0;
        if (!input.rgb.data.empty()) frame.image = to_rgb(input.rgb);
    }

    auto fused_dets = timed("detect", [&] {
        return detector_->detect(frame, input.frame_id);
    });

    timed("split", [&] {
        auto [rgb_dets, depth_dets] = fusion::split_predictions(fused_dets, frame);
        out.rgb_dets = std::move(rgb_dets);
        out.depth_dets = std::move(depth_dets);
    });
    if (!fused_mode) out.depth_dets.clear();

    if (cfg_.mode != Mode::FusedNoKf) {
        // Per-track velocity observations from the previous RGB frame.
        std::unordered_map<std::int64_t, FlowVector> flows;
        if (cfg_.flow_enabled && !input.rgb.data.empty()) {
            Image8 gray = timed("gray", [&] { return to_gray(input.rgb); });
            if (have_prev_gray_ && gray.same_dims(prev_gray_)) {
                timed("flow", [&] {
                    for (const auto& t : tracker_.live()) {
                        try {
                            flows[t.id] = flow::block_flow(
                                prev_gray_, gray, t.last_box,
                                cfg_.flow_search_radius);
                        } catch (const DegenerateRegionError&) {
                            // track box outside the frame; no observation
                        }
                    }
                });
            }
            prev_gray_ = std::move(gray);
            have_prev_gray_ = true;
        }

        timed("track", [&] {
            std::vector<Detection> rgb_in, depth_in;
            for (const auto& d : out.rgb_dets)
                if (d.score >= cfg_.score_threshold) rgb_in.push_back(d);
            for (const auto& d : out.depth_dets)
                if (d.score >= cfg_.score_threshold) depth_in.push_back(d);
            out.tracks = tracker_.step(rgb_in, depth_in, flows);
        });
    }

    timing_.frame.samples.push_back(
        std::chrono::duration<double>(Clock::now() - frame_start).count());
    return out;
}

Dataset load_dataset(const std::string& dir) {
    Dataset ds;
    ds.root = dir;
    fs::path frames_path = fs::path(dir) / "frames.txt";
    if (!fs::exists(frames_path))
        throw DatasetError("missing " + frames_path.string());

    std::string text = io::read_file(frames_path.string());
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    int prev_id = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        DatasetFrameRef ref;
        std::string rgb, cloud;
        if (!(ls >> ref.frame_id >> rgb >> cloud))
            throw ParseError(frames_path.string(), line_no,
                             "expected `frame_id rgb_rel cloud_rel|-`");
        if (ref.frame_id <= prev_id)
            throw ParseError(frames_path.string(), line_no,
                             "frame ids must be strictly increasing");
        prev_id = ref.frame_id;
        ref.rgb_path = (fs::path(dir) / rgb).string();
        if (cloud != "-") ref.cloud_path = (fs::path(dir) / cloud).string();
        ds.frames.push_back(std::move(ref));
    }

    fs::path gt_path = fs::path(dir) / "gt.txt";
    if (fs::exists(gt_path))
        ds.ground_truth = io::parse_ground_truth(gt_path.string());
    return ds;
}

RunResult run(const PipelineConfig& cfg, const Dataset& dataset,
              std::shared_ptr<const Detector> detector) {
    Pipeline pipeline(cfg, std::move(detector));
    RunResult result;

    const bool need_rgb_pixels = cfg.flow_enabled;
    for (const DatasetFrameRef& ref : dataset.frames) {
        FrameInput input;
        input.frame_id = ref.frame_id;
        try {
            if (need_rgb_pixels) input.rgb = io::read_image(ref.rgb_path);
            if (cfg.mode != Mode::RgbOnly && !ref.cloud_path.empty())
                input.cloud = io::parse_pointcloud(ref.cloud_path);
        } catch (const ParseError& e) {
            std::cerr << "skipping frame " << ref.frame_id << ": " << e.what()
                      << "\n";
            ++result.frames_skipped;
            continue;
        }

        FrameOutput out = pipeline.process(input);
        ++result.frames_processed;

        for (const auto& d : out.rgb_dets)
            result.detections.push_back({out.frame_id, "rgb", d});
        for (const auto& d : out.depth_dets)
            result.detections.push_back({out.frame_id, "depth", d});
        for (const auto& t : out.tracks) {
            io::TrackRecord rec;
            rec.frame_id = out.frame_id;
            rec.track_id = t.id;
            rec.cx = t.state.s(0);
            rec.cy = t.state.s(1);
            rec.w = t.state.s(2);
            rec.h = t.state.s(3);
            rec.vx = t.state.s(4);
            rec.vy = t.state.s(5);
            rec.status = "confirmed";
            result.tracks.push_back(rec);
        }
    }
    result.timing = pipeline.timing();
    return result;
}

namespace {

double get_double(const std::map<std::string, std::string>& kv,
                  const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (...) {
        throw ConfigError("bad value for " + key + ": " + it->second);
    }
}

long get_long(const std::map<std::string, std::string>& kv,
              const std::string& key, long fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        return std::stol(it->second);
    } catch (...) {
        throw ConfigError("bad value for " + key + ": " + it->second);
    }
}

}  // namespace

PipelineConfig config_from_map(const std::map<std::string, std::string>& kv) {
    PipelineConfig cfg;
    cfg.grid.theta_min = get_double(kv, "grid.theta_min", -0.6);
    cfg.grid.theta_max = get_double(kv, "grid.theta_max", 0.6);
    cfg.grid.phi_min = get_double(kv, "grid.phi_min", -0.3);
    cfg.grid.phi_max = get_double(kv, "grid.phi_max", 0.1);
    cfg.grid.width = static_cast<int>(get_long(kv, "grid.width", 512));
    cfg.grid.height = static_cast<int>(get_long(kv, "grid.height", 64));
    cfg.grid.r_max = get_double(kv, "grid.r_max", 75.0);
    if (!cfg.grid.valid()) throw ConfigError("invalid grid configuration");

    auto& t = cfg.tracker;
    t.iou_gate = get_double(kv, "tracker.iou_gate", t.iou_gate);
    t.confirm_hits = static_cast<int>(get_long(kv, "tracker.confirm_hits", t.confirm_hits));
    t.max_misses = static_cast<int>(get_long(kv, "tracker.max_misses", t.max_misses));
    t.initial_p_pos = get_double(kv, "tracker.initial_p_pos", t.initial_p_pos);
    t.initial_p_size = get_double(kv, "tracker.initial_p_size", t.initial_p_size);
    t.initial_p_vel = get_double(kv, "tracker.initial_p_vel", t.initial_p_vel);
    t.q_pos = get_double(kv, "tracker.q_pos", t.q_pos);
    t.q_size = get_double(kv, "tracker.q_size", t.q_size);
    t.q_vel = get_double(kv, "tracker.q_vel", t.q_vel);
    t.r_box = get_double(kv, "tracker.r_box", t.r_box);
    t.r_depth_box = get_double(kv, "tracker.r_depth_box", t.r_depth_box);
    t.r_flow = get_double(kv, "tracker.r_flow", t.r_flow);
    t.flow_confidence_min =
        get_double(kv, "tracker.flow_confidence_min", t.flow_confidence_min);

    if (auto it = kv.find("mode"); it != kv.end()) cfg.mode = parse_mode(it->second);
    cfg.flow_enabled = get_long(kv, "flow.enabled", 0) != 0;
    cfg.flow_search_radius =
        static_cast<int>(get_long(kv, "flow.search_radius", cfg.flow_search_radius));
    cfg.score_threshold = get_double(kv, "detector.score_threshold", cfg.score_threshold);
    cfg.rgb_w = static_cast<int>(get_long(kv, "camera.width", cfg.rgb_w));
    cfg.rgb_h = static_cast<int>(get_long(kv, "camera.height", cfg.rgb_h));
    if (cfg.rgb_w < 1 || cfg.rgb_h < 1) throw ConfigError("invalid camera size");
    return cfg;
}

std::unique_ptr<Detector> make_detector(
    const std::map<std::string, std::string>& kv,
    const std::map<int, GroundTruthFrame>& ground_truth,
    const std::string& config_dir) {
    std::string kind = "synthetic";
    if (auto it = kv.find("detector.kind"); it != kv.end()) kind = it->second;

    if (kind == "replay") {
        auto it = kv.find("detector.replay_path");
        if (it == kv.end())
            throw ConfigError("detector.kind=replay needs detector.replay_path");
        fs::path p(it->second);
        if (p.is_relative() && !config_dir.empty()) p = fs::path(config_dir) / p;
        std::map<int, std::vector<Detection>> records;
        for (const auto& rec : io::parse_detections(p.string()))
            records[rec.frame_id].push_back(rec.det);
        return std::make_unique<ReplayDetector>(std::move(records));
    }
    if (kind != "synthetic") throw ConfigError("unknown detector.kind: " + kind);

    DetectorConfig dc;
    dc.miss_prob_rgb = get_double(kv, "detector.miss_prob_rgb", dc.miss_prob_rgb);
    dc.miss_prob_depth = get_double(kv, "detector.miss_prob_depth", dc.miss_prob_depth);
    dc.fp_rate_rgb = get_double(kv, "detector.fp_rate_rgb", dc.fp_rate_rgb);
    dc.fp_rate_depth = get_double(kv, "detector.fp_rate_depth", dc.fp_rate_depth);
    dc.loc_noise_sigma = get_double(kv, "detector.loc_noise_sigma", dc.loc_noise_sigma);
    dc.score_lo = get_double(kv, "detector.score_lo", dc.score_lo);
    dc.score_hi = get_double(kv, "detector.score_hi", dc.score_hi);
    if (dc.score_lo > dc.score_hi || dc.score_lo < 0 || dc.score_hi > 1)
        throw ConfigError("invalid detector score range");
    dc.rng_seed = static_cast<std::uint64_t>(get_long(kv, "detector.seed", 0));
    return std::make_unique<SyntheticDetector>(dc, ground_truth);
}

}  // namespace fusetrack::pipeline

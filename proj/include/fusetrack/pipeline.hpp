#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fusetrack/detect.hpp"
#include "fusetrack/eval.hpp"
#include "fusetrack/flow.hpp"
#include "fusetrack/geometry.hpp"
#include "fusetrack/io.hpp"
#include "fusetrack/track.hpp"

namespace fusetrack::pipeline {

enum class Mode { Fused, RgbOnly, FusedNoKf };

Mode parse_mode(const std::string& name);  // "fused" | "rgb" | "fused-nokf"
std::string mode_name(Mode mode);

struct PipelineConfig {
    geometry::GridConfig grid;
    track::TrackerConfig tracker;
    Mode mode = Mode::Fused;
    bool flow_enabled = false;
    int flow_search_radius = 6;
    double score_threshold = 0.5;  // gates tracker input only
    int rgb_w = 640, rgb_h = 480;
};

struct FrameInput {
    int frame_id = 0;
    Image8 rgb;  // may be empty when flow is disabled
    std::optional<geometry::PointCloud> cloud;
};

struct FrameOutput {
    int frame_id = 0;
    std::vector<Detection> rgb_dets;    // camera coordinates
    std::vector<Detection> depth_dets;  // camera coordinates
    std::vector<track::Track> tracks;   // emitted Confirmed tracks (Fused mode)
};

struct StageStats {
    std::vector<double> samples;  // seconds
    double mean() const;
    double p95() const;
};

struct TimingStats {
    std::map<std::string, StageStats> stages;
    StageStats frame;  // whole per-frame pipeline time, I/O excluded
};

// Per-frame orchestration: project -> render -> sync -> concat -> detect ->
// split -> flow -> track, with stages gated by mode. Frames with a missing
// point cloud degrade to RGB-only processing for that frame.
class Pipeline {
  public:
    Pipeline(PipelineConfig cfg, std::shared_ptr<const Detector> detector);

    FrameOutput process(const FrameInput& input);

    const TimingStats& timing() const { return timing_; }
    const track::Tracker& tracker() const { return tracker_; }

  private:
    PipelineConfig cfg_;
    std::shared_ptr<const Detector> detector_;
    track::Tracker tracker_;
    TimingStats timing_;
    Image8 prev_gray_;
    bool have_prev_gray_ = false;
};

struct DatasetFrameRef {
    int frame_id = 0;
    std::string rgb_path;
    std::string cloud_path;  // empty when absent
};

struct Dataset {
    std::string root;
    std::vector<DatasetFrameRef> frames;
    std::map<int, GroundTruthFrame> ground_truth;
};

// Directory layout: frames.txt (`frame_id rgb_rel cloud_rel|-` per line) and
// an optional gt.txt.
Dataset load_dataset(const std::string& dir);

struct RunResult {
    std::vector<io::TrackRecord> tracks;
    std::vector<io::DetectionRecord> detections;
    TimingStats timing;
    std::size_t frames_processed = 0;
    std::size_t frames_skipped = 0;
};

RunResult run(const PipelineConfig& cfg, const Dataset& dataset,
              std::shared_ptr<const Detector> detector);

// Configuration from flat key=value text; throws ConfigError on bad values.
PipelineConfig config_from_map(const std::map<std::string, std::string>& kv);
std::unique_ptr<Detector> make_detector(
    const std::map<std::string, std::string>& kv,
    const std::map<int, GroundTruthFrame>& ground_truth,
    const std::string& config_dir);

}  // namespace fusetrack::pipeline

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fusetrack/detect.hpp"
#include "fusetrack/errors.hpp"
#include "fusetrack/fusion.hpp"
#include "fusetrack/geometry.hpp"
#include "fusetrack/image.hpp"

namespace fusetrack::io {

// Point cloud: `pointcloud v1 <timestamp> <count>` header, then `x y z` per line.
geometry::PointCloud parse_pointcloud(const std::string& path);
geometry::PointCloud parse_pointcloud_text(const std::string& text,
                                           const std::string& path = "<memory>");
std::string format_pointcloud(const geometry::PointCloud& cloud);
void write_pointcloud(const std::string& path, const geometry::PointCloud& cloud);

// Binary PGM (P5) for 1-channel, PPM (P6) for 3-channel, maxval 255.
Image8 read_image(const std::string& path);
void write_image(const std::string& path, const Image8& img);
std::vector<std::uint8_t> format_image(const Image8& img);
Image8 parse_image(const std::vector<std::uint8_t>& bytes,
                   const std::string& path = "<memory>");

// Detection stream: `frame_id modality x y w h score`, modality in
// {rgb, depth, fused}. Fused-coordinate records carry Modality per half once
// split; `fused` lines are returned keyed by frame with modality inferred
// later by the consumer.
struct DetectionRecord {
    int frame_id = 0;
    std::string modality;  // "rgb" | "depth" | "fused"
    Detection det;
};
std::vector<DetectionRecord> parse_detections(const std::string& path);
std::vector<DetectionRecord> parse_detections_text(const std::string& text,
                                                   const std::string& path = "<memory>");
std::string format_detections(const std::vector<DetectionRecord>& records);
void write_detections(const std::string& path,
                      const std::vector<DetectionRecord>& records);

// Ground truth: `frame_id ped_id x y w h` per line.
std::map<int, GroundTruthFrame> parse_ground_truth(const std::string& path);
std::map<int, GroundTruthFrame> parse_ground_truth_text(
    const std::string& text, const std::string& path = "<memory>");
std::string format_ground_truth(const std::map<int, GroundTruthFrame>& gt);
void write_ground_truth(const std::string& path,
                        const std::map<int, GroundTruthFrame>& gt);

// Track stream: `frame_id track_id cx cy w h vx vy status`, fixed 4-decimal
// numeric formatting so golden files are platform-stable.
struct TrackRecord {
    int frame_id = 0;
    std::int64_t track_id = 0;
    double cx = 0, cy = 0, w = 0, h = 0, vx = 0, vy = 0;
    std::string status;  // "tentative" | "confirmed"
};
std::vector<TrackRecord> parse_tracks(const std::string& path);
std::string format_tracks(const std::vector<TrackRecord>& records);
void write_tracks(const std::string& path,
                  const std::vector<TrackRecord>& records);

// Flat `key = value` config text; '#' starts a comment.
std::map<std::string, std::string> parse_config(const std::string& path);
std::map<std::string, std::string> parse_config_text(
    const std::string& text, const std::string& path = "<memory>");

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace fusetrack::io

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "fusetrack/errors.hpp"
#include "fusetrack/flow.hpp"
#include "fusetrack/fusion.hpp"

namespace fusetrack::track {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// State [cx, cy, w, h, vx, vy]; pixels and pixels/frame.
struct KalmanState {
    Vec6 s = Vec6::Zero();
    Mat6 P = Mat6::Identity();

    BoundingBox box() const {
        return {s(0) - 0.5 * s(2), s(1) - 0.5 * s(3), s(2), s(3)};
    }
};

struct MotionModel {
    Mat6 F = Mat6::Identity();
    Mat6 Q = Mat6::Zero();

    // Constant velocity over one frame: cx += vx, cy += vy.
    static MotionModel constant_velocity(double q_pos, double q_size, double q_vel);
};

enum class ObsKind { RgbBox, DepthBox, Flow };

struct ObservationModel {
    ObsKind kind = ObsKind::RgbBox;
    Eigen::MatrixXd H;  // 4x6 selecting [cx,cy,w,h], or 2x6 selecting [vx,vy]
    Eigen::MatrixXd R;

    static ObservationModel box(ObsKind kind, double r_var);
    static ObservationModel flow(double r_var);
};

KalmanState kf_predict(const KalmanState& state, const MotionModel& model);

// Throws SingularInnovationError when H P H^T + R is numerically singular;
// the innovation system is solved, never inverted explicitly. Width/height
// components are floored at 1 px after the update.
KalmanState kf_update(const KalmanState& state, const Eigen::VectorXd& z,
                      const ObservationModel& obs);

// Velocity-only update; returns the state unchanged when confidence is below
// the threshold.
KalmanState update_with_flow(const KalmanState& state, const FlowVector& fv,
                             const ObservationModel& obs, double confidence_min);

double iou(const BoundingBox& a, const BoundingBox& b);

struct Association {
    std::vector<std::pair<int, int>> matches;  // (track index, det index)
    std::vector<int> unmatched_tracks;
    std::vector<int> unmatched_dets;
};

// Gated one-to-one assignment maximizing total IoU (Hungarian algorithm);
// pairs with IoU < gate are never matched.
Association associate(const std::vector<BoundingBox>& track_boxes,
                      const std::vector<BoundingBox>& det_boxes, double gate);

enum class TrackStatus { Tentative, Confirmed, Deleted };

struct Track {
    std::int64_t id = 0;
    KalmanState state;
    TrackStatus status = TrackStatus::Tentative;
    int hits = 0;
    int consecutive_misses = 0;
    int age = 0;
    BoundingBox last_box;
};

struct TrackerConfig {
    double iou_gate = 0.3;
    int confirm_hits = 2;
    int max_misses = 5;
    double initial_p_pos = 25.0;
    double initial_p_size = 25.0;
    double initial_p_vel = 100.0;
    double q_pos = 1.0;
    double q_size = 1.0;
    double q_vel = 0.25;
    double r_box = 10.0;
    double r_depth_box = 25.0;  // depth boxes are noisier
    double r_flow = 4.0;
    double flow_confidence_min = 0.2;
};

// One Kalman filter per pedestrian, updated sequentially with RGB boxes,
// depth boxes, then flow within each frame. Single-writer: step() must not
// be called concurrently on one instance.
class Tracker {
  public:
    explicit Tracker(TrackerConfig cfg = {});

    // Detections in camera coordinates; flows keyed by track id. Returns
    // snapshots of the Confirmed tracks emitted for this frame.
    std::vector<Track> step(
        const std::vector<Detection>& rgb_dets,
        const std::vector<Detection>& depth_dets,
        const std::unordered_map<std::int64_t, FlowVector>& flows = {});

    // Live (non-deleted) tracks, e.g. for computing per-track flow regions.
    std::vector<Track> live() const;

    const TrackerConfig& config() const { return cfg_; }

  private:
    TrackerConfig cfg_;
    MotionModel motion_;
    ObservationModel obs_rgb_, obs_depth_, obs_flow_;
    std::vector<Track> tracks_;
    std::int64_t next_id_ = 1;

    Track spawn(const Detection& det);
};

}  // namespace fusetrack::track

#include "fusetrack/track.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fusetrack::track {

MotionModel MotionModel::constant_velocity(double q_pos, double q_size,
                                           double q_vel) {
    MotionModel m;
    m.F(0, 4) = 1.0;  // cx += vx
    m.F(1, 5) = 1.0;  // cy += vy
    Vec6 qd;
    qd << q_pos, q_pos, q_size, q_size, q_vel, q_vel;
    m.Q = qd.asDiagonal();
    return m;
}

ObservationModel ObservationModel::box(ObsKind kind, double r_var) {
    ObservationModel m;
    m.kind = kind;
    m.H = Eigen::MatrixXd::Zero(4, 6);
    for (int i = 0; i < 4; ++i) m.H(i, i) = 1.0;
    m.R = r_var * Eigen::MatrixXd::Identity(4, 4);
    return m;
}

ObservationModel ObservationModel::flow(double r_var) {
    ObservationModel m;
    m.kind = ObsKind::Flow;
    m.H = Eigen::MatrixXd::Zero(2, 6);
    m.H(0, 4) = 1.0;
    m.H(1, 5) = 1.0;
    m.R = r_var * Eigen::MatrixXd::Identity(2, 2);
    return m;
}

namespace {

void finalize_state(KalmanState& st) {
    st.P = 0.5 * (st.P + st.P.transpose()).eval();
    st.s(2) = std::max(st.s(2), 1.0);  // degenerate boxes from overshoot
    st.s(3) = std::max(st.s(3), 1.0);
}

}  // namespace

KalmanState kf_predict(const KalmanState& state, const MotionModel& model) {
    KalmanState out;
    out.s = model.F * state.s;
    out.P = model.F * state.P * model.F.transpose() + model.Q;
    finalize_state(out);
    return out;
}

KalmanState kf_update(const KalmanState& state, const Eigen::VectorXd& z,
                      const ObservationModel& obs) {
    const Eigen::MatrixXd S =
        obs.H * state.P * obs.H.transpose() + obs.R;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
    if (!lu.isInvertible())
        throw SingularInnovationError("innovation covariance is singular");

    // K = P H^T S^-1, via the solve K^T = S^-1 H P.
    const Eigen::MatrixXd K = lu.solve(obs.H * state.P).transpose();

    KalmanState out;
    out.s = state.s + K * (z - obs.H * state.s);
    out.P = (Mat6::Identity() - K * obs.H) * state.P;
    finalize_state(out);
    return out;
}

KalmanState update_with_flow(const KalmanState& state, const FlowVector& fv,
                             const ObservationModel& obs,
                             double confidence_min) {
    if (fv.confidence < confidence_min) return state;
    Eigen::VectorXd z(2);
    z << fv.vx, fv.vy;
    return kf_update(state, z, obs);
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    double ix = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
    double iy = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
    if (ix <= 0 || iy <= 0) return 0.0;
    double inter = ix * iy;
    return inter / (a.w * a.h + b.w * b.h - inter);
}

Association associate(const std::vector<BoundingBox>& track_boxes,
                      const std::vector<BoundingBox>& det_boxes, double gate) {
    const int nt = static_cast<int>(track_boxes.size());
    const int nd = static_cast<int>(det_boxes.size());
    Association out;
    if (nt == 0 || nd == 0) {
        for (int i = 0; i < nt; ++i) out.unmatched_tracks.push_back(i);
        for (int j = 0; j < nd; ++j) out.unmatched_dets.push_back(j);
        return out;
    }

    // Square cost matrix: eligible pairs cost -IoU, everything else
    // (gated-out pairs and padding) costs 0, i.e. "leave unmatched".
    const int n = std::max(nt, nd);
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < nd; ++j) {
            double v = iou(track_boxes[i], det_boxes[j]);
            if (v >= gate && v > 0.0) cost[i][j] = -v;
        }
    }

    // Hungarian algorithm with potentials, O(n^3).
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<char> track_matched(nt, 0), det_matched(nd, 0);
    for (int j = 1; j <= n; ++j) {
        int i = p[j];
        if (i >= 1 && i <= nt && j <= nd && cost[i - 1][j - 1] < 0.0) {
            out.matches.emplace_back(i - 1, j - 1);
            track_matched[i - 1] = 1;
            det_matched[j - 1] = 1;
        }
    }
    std::sort(out.matches.begin(), out.matches.end());
    for (int i = 0; i < nt; ++i)
        if (!track_matched[i]) out.unmatched_tracks.push_back(i);
    for (int j = 0; j < nd; ++j)
        if (!det_matched[j]) out.unmatched_dets.push_back(j);
    return out;
}

Tracker::Tracker(TrackerConfig cfg)
    : cfg_(cfg),
      motion_(MotionModel::constant_velocity(cfg.q_pos, cfg.q_size, cfg.q_vel)),
      obs_rgb_(ObservationModel::box(ObsKind::RgbBox, cfg.r_box)),
      obs_depth_(ObservationModel::box(ObsKind::DepthBox, cfg.r_depth_box)),
      obs_flow_(ObservationModel::flow(cfg.r_flow)) {}

Track Tracker::spawn(const Detection& det) {
    Track t;
    t.id = next_id_++;
    t.state.s << det.box.cx(), det.box.cy(), det.box.w, det.box.h, 0.0, 0.0;
    Vec6 pd;
    pd << cfg_.initial_p_pos, cfg_.initial_p_pos, cfg_.initial_p_size,
        cfg_.initial_p_size, cfg_.initial_p_vel, cfg_.initial_p_vel;
    t.state.P = pd.asDiagonal();
    t.hits = 1;
    t.last_box = det.box;
    return t;
}

std::vector<Track> Tracker::step(
    const std::vector<Detection>& rgb_dets,
    const std::vector<Detection>& depth_dets,
    const std::unordered_map<std::int64_t, FlowVector>& flows) {
    // (1) predict
    for (Track& t : tracks_) {
        t.state = kf_predict(t.state, motion_);
        t.last_box = t.state.box();
    }
    std::vector<char> matched(tracks_.size(), 0);

    auto boxes_of = [&] {
        std::vector<BoundingBox> bs;
        bs.reserve(tracks_.size());
        for (const Track& t : tracks_) bs.push_back(t.state.box());
        return bs;
    };
    auto apply_box_update = [&](int ti, const Detection& det,
                                const ObservationModel& obs) {
        Eigen::VectorXd z(4);
        z << det.box.cx(), det.box.cy(), det.box.w, det.box.h;
        tracks_[ti].state = kf_update(tracks_[ti].state, z, obs);
        tracks_[ti].last_box = tracks_[ti].state.box();
        matched[ti] = 1;
    };

    // (2) RGB boxes
    Association rgb_assoc;
    {
        std::vector<BoundingBox> dets;
        for (const Detection& d : rgb_dets) dets.push_back(d.box);
        rgb_assoc = associate(boxes_of(), dets, cfg_.iou_gate);
        for (auto [ti, di] : rgb_assoc.matches)
            apply_box_update(ti, rgb_dets[di], obs_rgb_);
    }

    // (3) depth boxes against the post-RGB-update track boxes; redundant
    // depth boxes refine a track instead of spawning a duplicate.
    Association depth_assoc;
    {
        std::vector<BoundingBox> dets;
        for (const Detection& d : depth_dets) dets.push_back(d.box);
        depth_assoc = associate(boxes_of(), dets, cfg_.iou_gate);
        for (auto [ti, di] : depth_assoc.matches)
            apply_box_update(ti, depth_dets[di], obs_depth_);
    }

    // (4) flow velocity updates
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
        auto it = flows.find(tracks_[i].id);
        if (it == flows.end()) continue;
        tracks_[i].state = update_with_flow(tracks_[i].state, it->second,
                                            obs_flow_, cfg_.flow_confidence_min);
        tracks_[i].last_box = tracks_[i].state.box();
    }

    // (5) births; an unmatched depth detection overlapping a track spawned
    // this frame is the same pedestrian seen twice, not a new one.
    std::vector<Track> births;
    for (int di : rgb_assoc.unmatched_dets) births.push_back(spawn(rgb_dets[di]));
    for (int di : depth_assoc.unmatched_dets) {
        bool redundant = false;
        for (const Track& b : births) {
            if (iou(b.last_box, depth_dets[di].box) >= cfg_.iou_gate) {
                redundant = true;
                break;
            }
        }
        if (!redundant) births.push_back(spawn(depth_dets[di]));
    }

    // (6) lifecycle
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
        Track& t = tracks_[i];
        ++t.age;
        if (matched[i]) {
            ++t.hits;
            t.consecutive_misses = 0;
        } else {
            ++t.consecutive_misses;
            if (t.consecutive_misses >= cfg_.max_misses)
                t.status = TrackStatus::Deleted;
        }
        if (t.status == TrackStatus::Tentative && t.hits >= cfg_.confirm_hits)
            t.status = TrackStatus::Confirmed;
    }
    for (Track& b : births) {
        ++b.age;
        if (b.hits >= cfg_.confirm_hits) b.status = TrackStatus::Confirmed;
        tracks_.push_back(std::move(b));
    }

    std::vector<Track> emitted;
    for (const Track& t : tracks_)
        if (t.status == TrackStatus::Confirmed) emitted.push_back(t);

    std::erase_if(tracks_,
                  [](const Track& t) { return t.status == TrackStatus::Deleted; });
    return emitted;
}

std::vector<Track> Tracker::live() const { return tracks_; }

}  // namespace fusetrack::track

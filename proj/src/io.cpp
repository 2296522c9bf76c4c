#include "fusetrack/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fusetrack::io {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 1, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path, 1, "cannot open file for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

namespace {

// Line-oriented scanner with 1-based line numbers for diagnostics.
struct LineReader {
    std::istringstream in;
    std::string path;
    long line = 0;

    LineReader(const std::string& text, std::string p)
        : in(text), path(std::move(p)) {}

    bool next(std::string& out) {
        while (std::getline(in, out)) {
            ++line;
            if (!out.empty() && out.back() == '\r') out.pop_back();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(path, std::max(line, 1L), msg);
    }
};

double parse_double(LineReader& r, const std::string& tok) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size() || !std::isfinite(v)) r.fail("bad number: " + tok);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        r.fail("bad number: " + tok);
    }
}

long parse_long(LineReader& r, const std::string& tok) {
    try {
        std::size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size()) r.fail("bad integer: " + tok);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        r.fail("bad integer: " + tok);
    }
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream ss(s);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

}  // namespace

geometry::PointCloud parse_pointcloud_text(const std::string& text,
                                           const std::string& path) {
    LineReader r(text, path);
    std::string line;
    if (!r.next(line)) r.fail("missing header");
    auto head = split_ws(line);
    if (head.size() != 4 || head[0] != "pointcloud" || head[1] != "v1")
        r.fail("expected header `pointcloud v1 <timestamp> <count>`");
    geometry::PointCloud cloud;
    cloud.timestamp = parse_double(r, head[2]);
    long count = parse_long(r, head[3]);
    if (count < 0) r.fail("negative point count");
    cloud.points.reserve(static_cast<std::size_t>(count));

    while (r.next(line)) {
        if (line.empty()) continue;
        auto toks = split_ws(line);
        if (toks.size() != 3) r.fail("expected `x y z`");
        cloud.points.push_back({parse_double(r, toks[0]),
                                parse_double(r, toks[1]),
                                parse_double(r, toks[2])});
    }
    if (static_cast<long>(cloud.points.size()) != count)
        r.fail("header count " + std::to_string(count) + " != body lines " +
               std::to_string(cloud.points.size()));
    return cloud;
}

geometry::PointCloud parse_pointcloud(const std::string& path) {
    return parse_pointcloud_text(read_file(path), path);
}

std::string format_pointcloud(const geometry::PointCloud& cloud) {
    std::string out = "pointcloud v1 " + fmt("%.9g", cloud.timestamp) + " " +
                      std::to_string(cloud.points.size()) + "\n";
    for (const auto& p : cloud.points) {
        out += fmt("%.9g", p.x);
        out += ' ';
        out += fmt("%.9g", p.y);
        out += ' ';
        out += fmt("%.9g", p.z);
        out += '\n';
    }
    return out;
}

void write_pointcloud(const std::string& path,
                      const geometry::PointCloud& cloud) {
    write_file(path, format_pointcloud(cloud));
}

std::vector<std::uint8_t> format_image(const Image8& img) {
    std::string header = std::string(img.channels == 1 ? "P5" : "P6") + "\n" +
                         std::to_string(img.width) + " " +
                         std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.data.begin(), img.data.end());
    return out;
}

Image8 parse_image(const std::vector<std::uint8_t>& bytes,
                   const std::string& path) {
    auto fail = [&](const std::string& msg) -> Image8 {
        throw ParseError(path, 1, msg);
    };
    std::size_t pos = 0;
    auto token = [&]() -> std::string {
        while (pos < bytes.size() &&
               (bytes[pos] == ' ' || bytes[pos] == '\n' || bytes[pos] == '\t' ||
                bytes[pos] == '\r')) {
            ++pos;
        }
        std::string t;
        while (pos < bytes.size() && bytes[pos] > ' ') t += static_cast<char>(bytes[pos++]);
        return t;
    };
    std::string magic = token();
    int channels;
    if (magic == "P5") {
        channels = 1;
    } else if (magic == "P6") {
        channels = 3;
    } else {
        return fail("unsupported format: `" + magic + "`");
    }
    int w = static_cast<int>(std::strtol(token().c_str(), nullptr, 10));
    int h = static_cast<int>(std::strtol(token().c_str(), nullptr, 10));
    std::string maxval = token();
    if (w <= 0 || h <= 0) return fail("bad dimensions");
    if (maxval != "255") return fail("unsupported maxval: " + maxval);
    if (pos >= bytes.size()) return fail("truncated data");
    ++pos;  // single whitespace after maxval
    Image8 img(w, h, channels);
    if (bytes.size() - pos < img.data.size()) return fail("truncated data");
    std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
              bytes.begin() + static_cast<std::ptrdiff_t>(pos) +
                  static_cast<std::ptrdiff_t>(img.data.size()),
              img.data.begin());
    return img;
}

Image8 read_image(const std::string& path) {
    std::string text = read_file(path);
    return parse_image(std::vector<std::uint8_t>(text.begin(), text.end()), path);
}

void write_image(const std::string& path, const Image8& img) {
    auto bytes = format_image(img);
    write_file(path, std::string(bytes.begin(), bytes.end()));
}

std::vector<DetectionRecord> parse_detections_text(const std::string& text,
                                                   const std::string& path) {
    LineReader r(text, path);
    std::vector<DetectionRecord> out;
    std::string line;
    while (r.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        auto toks = split_ws(line);
        if (toks.size() != 7) r.fail("expected `frame_id modality x y w h score`");
        DetectionRecord rec;
        rec.frame_id = static_cast<int>(parse_long(r, toks[0]));
        rec.modality = toks[1];
        if (rec.modality != "rgb" && rec.modality != "depth" &&
            rec.modality != "fused")
            r.fail("bad modality: " + rec.modality);
        rec.det.box = {parse_double(r, toks[2]), parse_double(r, toks[3]),
                       parse_double(r, toks[4]), parse_double(r, toks[5])};
        rec.det.score = parse_double(r, toks[6]);
        if (rec.det.score < 0 || rec.det.score > 1) r.fail("score outside [0,1]");
        if (rec.det.box.w <= 0 || rec.det.box.h <= 0)
            r.fail("non-positive box size");
        rec.det.modality =
            rec.modality == "depth" ? Modality::DEPTH : Modality::RGB;
        out.push_back(rec);
    }
    return out;
}

std::vector<DetectionRecord> parse_detections(const std::string& path) {
    return parse_detections_text(read_file(path), path);
}

std::string format_detections(const std::vector<DetectionRecord>& records) {
    std::string out;
    for (const auto& rec : records) {
        out += std::to_string(rec.frame_id) + " " + rec.modality + " " +
               fmt("%.4f", rec.det.box.x) + " " + fmt("%.4f", rec.det.box.y) +
               " " + fmt("%.4f", rec.det.box.w) + " " +
               fmt("%.4f", rec.det.box.h) + " " + fmt("%.4f", rec.det.score) +
               "\n";
    }
    return out;
}

void write_detections(const std::string& path,
                      const std::vector<DetectionRecord>& records) {
    write_file(path, format_detections(records));
}

std::map<int, GroundTruthFrame> parse_ground_truth_text(const std::string& text,
                                                        const std::string& path) {
    LineReader r(text, path);
    std::map<int, GroundTruthFrame> out;
    std::string line;
    while (r.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        auto toks = split_ws(line);
        if (toks.size() != 6) r.fail("expected `frame_id ped_id x y w h`");
        int frame_id = static_cast<int>(parse_long(r, toks[0]));
        GroundTruthFrame::Entry e;
        e.ped_id = static_cast<int>(parse_long(r, toks[1]));
        e.box = {parse_double(r, toks[2]), parse_double(r, toks[3]),
                 parse_double(r, toks[4]), parse_double(r, toks[5])};
        if (e.box.w <= 0 || e.box.h <= 0) r.fail("non-positive box size");
        GroundTruthFrame& f = out[frame_id];
        f.frame_id = frame_id;
        for (const auto& other : f.boxes)
            if (other.ped_id == e.ped_id)
                r.fail("duplicate ped_id " + std::to_string(e.ped_id) +
                       " in frame " + std::to_string(frame_id));
        f.boxes.push_back(e);
    }
    return out;
}

std::map<int, GroundTruthFrame> parse_ground_truth(const std::string& path) {
    return parse_ground_truth_text(read_file(path), path);
}

std::string format_ground_truth(const std::map<int, GroundTruthFrame>& gt) {
    std::string out;
    for (const auto& [fid, frame] : gt) {
        for (const auto& e : frame.boxes) {
            out += std::to_string(fid) + " " + std::to_string(e.ped_id) + " " +
                   fmt("%.4f", e.box.x) + " " + fmt("%.4f", e.box.y) + " " +
                   fmt("%.4f", e.box.w) + " " + fmt("%.4f", e.box.h) + "\n";
        }
    }
    return out;
}

void write_ground_truth(const std::string& path,
                        const std::map<int, GroundTruthFrame>& gt) {
    write_file(path, format_ground_truth(gt));
}

std::vector<TrackRecord> parse_tracks(const std::string& path) {
    LineReader r(read_file(path), path);
    std::vector<TrackRecord> out;
    std::string line;
    while (r.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        auto toks = split_ws(line);
        if (toks.size() != 9)
            r.fail("expected `frame_id track_id cx cy w h vx vy status`");
        TrackRecord rec;
        rec.frame_id = static_cast<int>(parse_long(r, toks[0]));
        rec.track_id = parse_long(r, toks[1]);
        rec.cx = parse_double(r, toks[2]);
        rec.cy = parse_double(r, toks[3]);
        rec.w = parse_double(r, toks[4]);
        rec.h = parse_double(r, toks[5]);
        rec.vx = parse_double(r, toks[6]);
        rec.vy = parse_double(r, toks[7]);
        rec.status = toks[8];
        if (rec.status != "tentative" && rec.status != "confirmed")
            r.fail("bad status: " + rec.status);
        out.push_back(rec);
    }
    return out;
}

std::string format_tracks(const std::vector<TrackRecord>& records) {
    std::string out;
    for (const auto& rec : records) {
        out += std::to_string(rec.frame_id) + " " +
               std::to_string(rec.track_id) + " " + fmt("%.4f", rec.cx) + " " +
               fmt("%.4f", rec.cy) + " " + fmt("%.4f", rec.w) + " " +
               fmt("%.4f", rec.h) + " " + fmt("%.4f", rec.vx) + " " +
               fmt("%.4f", rec.vy) + " " + rec.status + "\n";
    }
    return out;
}

void write_tracks(const std::string& path,
                  const std::vector<TrackRecord>& records) {
    write_file(path, format_tracks(records));
}

std::map<std::string, std::string> parse_config_text(const std::string& text,
                                                     const std::string& path) {
    LineReader r(text, path);
    std::map<std::string, std::string> out;
    std::string line;
    while (r.next(line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) r.fail("expected `key = value`");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) r.fail("expected `key = value`");
        out[key] = value;
    }
    return out;
}

std::map<std::string, std::string> parse_config(const std::string& path) {
    return parse_config_text(read_file(path), path);
}

}  // namespace fusetrack::io

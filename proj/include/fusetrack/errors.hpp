#pragma once

#include <stdexcept>
#include <string>

namespace fusetrack {

struct ZeroRangeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct WidthMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateRegionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SingularInnovationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ReplayMissingFrameError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse failure with file/line diagnostics.
struct ParseError : std::runtime_error {
    std::string path;
    long line;
    ParseError(std::string p, long ln, const std::string& msg)
        : std::runtime_error(p + ":" + std::to_string(ln) + ": " + msg),
          path(std::move(p)), line(ln) {}
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fusetrack

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "apcsf/geometry.hpp"
#include "apcsf/support.hpp"

namespace apcsf {

// {"kind": "open"|"closed", "nodes": [[x, y], ...], "corners": [{"index": i, "angle": a}]}
// with optional "time" and "step" for stored frames.
struct CurveDocument {
    bool closed = false;
    std::vector<Vec2> nodes;
    std::vector<Corner> corners;
    std::optional<double> time;
    std::optional<long> step;
    // per-node curvature of stored frames
    std::vector<double> curvature;
};

std::string to_json(const CurveDocument& doc);
CurveDocument parse_curve_document(const std::string& text);
CurveDocument read_curve_document(const std::filesystem::path& path);
void write_curve_document(const std::filesystem::path& path, const CurveDocument& doc);

OpenCurve to_open_curve(const CurveDocument& doc);
ClosedCurve to_closed_curve(const CurveDocument& doc);

// {"kind": "circle", "center": [x, y], "radius": r}
// {"kind": "ellipse", "center": [x, y], "a": a, "b": b, "rotation": phi}
// {"kind": "line", "point": [x, y], "direction": [dx, dy]}
// {"kind": "table", "nodes": [[x, y], ...]}
std::string support_to_json(const SupportCurve& support);
SupportCurve parse_support(const std::string& text);
SupportCurve read_support(const std::filesystem::path& path);

// "line", "circle", "circle:R", inline JSON, or a path to a support document.
SupportCurve support_from_spec(const std::string& spec);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace apcsf
